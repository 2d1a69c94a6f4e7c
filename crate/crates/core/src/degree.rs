use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Distribution;
use crate::poly::Family;

/// Degrees `(t̲, r̲, s̲)` per arrow of the X, Y and Z families.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree {
    pub t: Vec<usize>,
    pub r: Vec<usize>,
    pub s: Vec<usize>,
}

impl MultiDegree {
    pub fn new(t: Vec<usize>, r: Vec<usize>, s: Vec<usize>) -> Self {
        Self { t, r, s }
    }

    pub fn zero(arrows: [usize; 3]) -> Self {
        Self::new(vec![0; arrows[0]], vec![0; arrows[1]], vec![0; arrows[2]])
    }

    pub fn arrows(&self) -> [usize; 3] {
        [self.t.len(), self.r.len(), self.s.len()]
    }

    pub fn family(&self, f: Family) -> &[usize] {
        match f {
            Family::X => &self.t,
            Family::Y => &self.r,
            Family::Z => &self.s,
        }
    }

    pub fn family_mut(&mut self, f: Family) -> &mut Vec<usize> {
        match f {
            Family::X => &mut self.t,
            Family::Y => &mut self.r,
            Family::Z => &mut self.s,
        }
    }

    pub fn total_t(&self) -> usize {
        self.t.iter().sum()
    }

    pub fn total_r(&self) -> usize {
        self.r.iter().sum()
    }

    pub fn total_s(&self) -> usize {
        self.s.iter().sum()
    }

    pub fn total(&self) -> usize {
        self.total_t() + self.total_r() + self.total_s()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// The distributions `T`, `R`, `S` read off the three vectors.
    pub fn distributions(&self) -> (Distribution, Distribution, Distribution) {
        (
            Distribution::determined(&self.t),
            Distribution::determined(&self.r),
            Distribution::determined(&self.s),
        )
    }

    /// Every multidegree for the given arrow counts with `t+2r ≤ max_rows` and `t+2s ≤ max_cols`,
    /// in lexicographic order of `(t̲, r̲, s̲)`.
    pub fn all_within(arrows: [usize; 3], max_rows: usize, max_cols: usize) -> Vec<Self> {
        let bound = max_rows.max(max_cols);
        let ts = vectors_with_sum_at_most(arrows[0], bound);
        let rs = vectors_with_sum_at_most(arrows[1], bound / 2);
        let ss = vectors_with_sum_at_most(arrows[2], bound / 2);
        let mut out = Vec::new();
        for t in &ts {
            let tt: usize = t.iter().sum();
            for r in &rs {
                let rr: usize = r.iter().sum();
                if tt + 2 * rr > max_rows {
                    continue;
                }
                for s in &ss {
                    let sum_s: usize = s.iter().sum();
                    if tt + 2 * sum_s <= max_cols {
                        out.push(Self::new(t.clone(), r.clone(), s.clone()));
                    }
                }
            }
        }
        out
    }
}

fn vectors_with_sum_at_most(len: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            let used: usize = v.iter().sum();
            for e in 0..=bound - used {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "t:{};r:{};s:{}", join(&self.t), join(&self.r), join(&self.s))
    }
}

impl FromStr for MultiDegree {
    type Err = String;

    /// Parses `t:1,2;r:;s:3`. Missing families are empty.
    fn from_str(text: &str) -> Result<Self, String> {
        let mut d = MultiDegree::new(vec![], vec![], vec![]);
        let mut seen = [false; 3];
        for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (key, values) = chunk
                .split_once(':')
                .ok_or_else(|| format!("expected `family:values` in {chunk:?}"))?;
            let family = match key.trim() {
                "t" => Family::X,
                "r" => Family::Y,
                "s" => Family::Z,
                other => return Err(format!("unknown degree family {other:?}")),
            };
            if std::mem::replace(&mut seen[family.index()], true) {
                return Err(format!("family {key} given twice"));
            }
            let parsed: Vec<usize> = values
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(|v| v.parse::<usize>().map_err(|_| format!("bad degree {v:?}")))
                .collect::<Result<_, _>>()?;
            *d.family_mut(family) = parsed;
        }
        Ok(d)
    }
}
