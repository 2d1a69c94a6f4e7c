//! Mixed quivers, their zigzag form, and coordinates on representation spaces.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::QuiverError;
use crate::poly::{Family, VarId};

/// Whether a vertex carries the space itself or its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alpha {
    #[serde(rename = "1")]
    Plain,
    #[serde(rename = "*")]
    Dual,
}

impl Alpha {
    pub fn flipped(self) -> Self {
        match self {
            Alpha::Plain => Alpha::Dual,
            Alpha::Dual => Alpha::Plain,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alpha::Plain => "1",
            Alpha::Dual => "*",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    pub dim: usize,
    pub alpha: Alpha,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrow {
    pub id: String,
    pub tail: String,
    pub head: String,
}

/// A quiver with dimensions, duality labels and an involution on vertices.
/// `phi` lists the 2-cycles; every other vertex is a fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedQuiver {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub phi: Vec<[String; 2]>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
}

impl MixedQuiver {
    pub fn from_json(text: &str) -> Result<Self, QuiverError> {
        serde_json::from_str(text).map_err(|e| QuiverError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("quiver serializes")
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Every violated condition, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut ids = HashSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.as_str()) {
                out.push(format!("vertex id {:?} is used twice", v.id));
            }
            if v.dim == 0 {
                out.push(format!("vertex {:?} has dimension 0", v.id));
            }
        }
        let mut arrow_ids = HashSet::new();
        for a in &self.arrows {
            if !arrow_ids.insert(a.id.as_str()) {
                out.push(format!("arrow id {:?} is used twice", a.id));
            }
            for end in [&a.tail, &a.head] {
                if self.vertex_index(end).is_none() {
                    out.push(format!("arrow {:?} refers to unknown vertex {:?}", a.id, end));
                }
            }
        }
        let mut partner: HashMap<&str, &str> = HashMap::new();
        for [u, v] in &self.phi {
            let mut known = true;
            for w in [u, v] {
                if self.vertex_index(w).is_none() {
                    out.push(format!("phi refers to unknown vertex {w:?}"));
                    known = false;
                }
            }
            if u == v {
                out.push(format!("phi pair ({u:?}, {v:?}) is not a 2-cycle; leave fixed points unlisted"));
                continue;
            }
            for w in [u, v] {
                if partner.contains_key(w.as_str()) {
                    out.push(format!("phi is not an involution: {w:?} appears in two pairs"));
                }
            }
            partner.insert(u, v);
            partner.insert(v, u);
            if !known {
                continue;
            }
            let (a, b) = (&self.vertices[self.vertex_index(u).unwrap()], &self.vertices[self.vertex_index(v).unwrap()]);
            if a.dim != b.dim {
                out.push(format!(
                    "(a) paired vertices {:?} and {:?} have dimensions {} and {}",
                    a.id, b.id, a.dim, b.dim
                ));
            }
            if a.alpha == b.alpha {
                out.push(format!(
                    "(c) paired vertices {:?} and {:?} both have alpha {}",
                    a.id, b.id, a.alpha
                ));
            }
        }
        for v in &self.vertices {
            if !partner.contains_key(v.id.as_str()) && v.alpha == Alpha::Dual {
                out.push(format!("(b) fixed vertex {:?} has alpha *", v.id));
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), QuiverError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(QuiverError::Invalid(v))
        }
    }

    /// `φ(u)` by vertex index; assumes a valid quiver.
    pub fn phi_of(&self, u: usize) -> usize {
        let id = &self.vertices[u].id;
        for [a, b] in &self.phi {
            if a == id {
                return self.vertex_index(b).expect("valid phi");
            }
            if b == id {
                return self.vertex_index(a).expect("valid phi");
            }
        }
        u
    }

    /// φ-orbits as vertex index lists, ordered by their first vertex.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for u in 0..self.vertices.len() {
            if seen[u] {
                continue;
            }
            let v = self.phi_of(u);
            seen[u] = true;
            seen[v] = true;
            out.push(if u == v { vec![u] } else { vec![u, v] });
        }
        out
    }

    /// One matrix of variables per arrow, all in the X family, numbered by declaration order.
    /// Group factors are indexed by φ-orbit.
    pub fn coordinates(&self) -> CoordinateSystem {
        let orbits = self.orbits();
        let mut orbit_of = vec![0; self.vertices.len()];
        for (o, members) in orbits.iter().enumerate() {
            for &u in members {
                orbit_of[u] = o;
            }
        }
        let arrows = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let h = self.vertex_index(&a.head).expect("valid arrow");
                let t = self.vertex_index(&a.tail).expect("valid arrow");
                ArrowCoords {
                    id: a.id.clone(),
                    family: Family::X,
                    index: k + 1,
                    rows: self.vertices[h].dim,
                    cols: self.vertices[t].dim,
                    head: (orbit_of[h], self.vertices[h].alpha),
                    tail: (orbit_of[t], self.vertices[t].alpha),
                }
            })
            .collect();
        CoordinateSystem {
            orbit_dims: orbits.iter().map(|o| self.vertices[o[0]].dim).collect(),
            arrows,
        }
    }
}

/// A φ-orbit `{plain, dual}` of a zigzag quiver, by vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitPair {
    pub plain: usize,
    pub dual: usize,
    pub dim: usize,
}

/// An arrow of one family: its index in the quiver and the orbits (1-based,
/// within their class) of its head and tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyArrow {
    pub arrow: usize,
    pub head: usize,
    pub tail: usize,
}

/// A zigzag quiver with its orbits split into first class (plain sink, dual
/// source) and second class (plain source, dual sink), and its arrows sorted
/// into the families
/// X: plain source → plain sink, Y: dual source → plain sink, Z: plain source → dual sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagQuiver {
    quiver: MixedQuiver,
    first: Vec<OrbitPair>,
    second: Vec<OrbitPair>,
    x: Vec<FamilyArrow>,
    y: Vec<FamilyArrow>,
    z: Vec<FamilyArrow>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Unknown,
    First,
    Second,
}

pub fn classify_zigzag(q: &MixedQuiver) -> Result<ZigzagQuiver, QuiverError> {
    q.check()?;
    let mut problems = Vec::new();
    let n = q.vertices.len();
    let mut incoming = vec![false; n];
    let mut outgoing = vec![false; n];
    for a in &q.arrows {
        incoming[q.vertex_index(&a.head).unwrap()] = true;
        outgoing[q.vertex_index(&a.tail).unwrap()] = true;
    }
    for (u, v) in q.vertices.iter().enumerate() {
        if incoming[u] && outgoing[u] {
            problems.push(format!("vertex {:?} is neither a source nor a sink", v.id));
        }
        if q.phi_of(u) == u {
            problems.push(format!("vertex {:?} is fixed by phi", v.id));
        }
    }
    for a in &q.arrows {
        let (t, h) = (q.vertex_index(&a.tail).unwrap(), q.vertex_index(&a.head).unwrap());
        if q.vertices[t].alpha == Alpha::Dual && q.vertices[h].alpha == Alpha::Dual {
            problems.push(format!("arrow {:?} joins two * vertices", a.id));
        }
    }
    if !problems.is_empty() {
        return Err(QuiverError::NotZigzag(problems));
    }

    let mut role = vec![Role::Unknown; n];
    let mut first = Vec::new();
    let mut second = Vec::new();
    for orbit in q.orbits() {
        let (plain, dual) = if q.vertices[orbit[0]].alpha == Alpha::Plain {
            (orbit[0], orbit[1])
        } else {
            (orbit[1], orbit[0])
        };
        let wants_first = incoming[plain] || outgoing[dual];
        let wants_second = outgoing[plain] || incoming[dual];
        let pair = OrbitPair {
            plain,
            dual,
            dim: q.vertices[plain].dim,
        };
        let r = match (wants_first, wants_second) {
            (true, true) => {
                problems.push(format!(
                    "pair ({:?}, {:?}) does not join a source with a sink",
                    q.vertices[plain].id, q.vertices[dual].id
                ));
                continue;
            }
            (_, true) => {
                second.push(pair);
                Role::Second
            }
            _ => {
                first.push(pair);
                Role::First
            }
        };
        role[plain] = r;
        role[dual] = r;
    }
    if !problems.is_empty() {
        return Err(QuiverError::NotZigzag(problems));
    }
    first.sort_by_key(|p| p.plain);
    second.sort_by_key(|p| p.plain);
    let class_index = |u: usize| -> usize {
        let list = if role[u] == Role::First { &first } else { &second };
        list.iter().position(|p| p.plain == u || p.dual == u).unwrap() + 1
    };
    let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
    for (k, a) in q.arrows.iter().enumerate() {
        let (t, h) = (q.vertex_index(&a.tail).unwrap(), q.vertex_index(&a.head).unwrap());
        let fa = FamilyArrow {
            arrow: k,
            head: class_index(h),
            tail: class_index(t),
        };
        match (q.vertices[t].alpha, q.vertices[h].alpha) {
            (Alpha::Plain, Alpha::Plain) => x.push(fa),
            (Alpha::Dual, Alpha::Plain) => y.push(fa),
            (Alpha::Plain, Alpha::Dual) => z.push(fa),
            (Alpha::Dual, Alpha::Dual) => unreachable!("rejected above"),
        }
    }
    Ok(ZigzagQuiver {
        quiver: q.clone(),
        first,
        second,
        x,
        y,
        z,
    })
}

impl ZigzagQuiver {
    /// Builds the zigzag quiver with first-class dimensions `n`, second-class
    /// dimensions `m`, and arrows given as `(head, tail)` orbit indices (1-based).
    /// Vertex ids are `V1_i`, `V1_i*`, `V2_j`, `V2_j*`; arrow ids `x1`, `y1`, `z1`, …
    pub fn from_parts(
        n: &[usize],
        m: &[usize],
        x: &[(usize, usize)],
        y: &[(usize, usize)],
        z: &[(usize, usize)],
    ) -> Result<Self, QuiverError> {
        let mut vertices = Vec::new();
        let mut phi = Vec::new();
        for (class, dims) in [(1, n), (2, m)] {
            for (i, &d) in dims.iter().enumerate() {
                let plain = format!("V{class}_{}", i + 1);
                let dual = format!("{plain}*");
                vertices.push(Vertex {
                    id: plain.clone(),
                    dim: d,
                    alpha: Alpha::Plain,
                });
                vertices.push(Vertex {
                    id: dual.clone(),
                    dim: d,
                    alpha: Alpha::Dual,
                });
                phi.push([plain, dual]);
            }
        }
        let mut arrows = Vec::new();
        let mut push = |prefix: &str, list: &[(usize, usize)], head: &dyn Fn(usize) -> String, tail: &dyn Fn(usize) -> String| {
            for (k, &(h, t)) in list.iter().enumerate() {
                arrows.push(Arrow {
                    id: format!("{prefix}{}", k + 1),
                    tail: tail(t),
                    head: head(h),
                });
            }
        };
        push("x", x, &|h| format!("V1_{h}"), &|t| format!("V2_{t}"));
        push("y", y, &|h| format!("V1_{h}"), &|t| format!("V1_{t}*"));
        push("z", z, &|h| format!("V2_{h}*"), &|t| format!("V2_{t}"));
        let q = MixedQuiver { vertices, phi, arrows };
        let zz = classify_zigzag(&q)?;
        // isolated pairs are always read as first class, so a requested
        // second-class pair without arrows would move; refuse that instead
        if zz.second.len() != m.len() || zz.first.len() != n.len() {
            return Err(QuiverError::NotZigzag(vec![
                "every second-class pair needs at least one arrow".into(),
            ]));
        }
        Ok(zz)
    }

    pub fn quiver(&self) -> &MixedQuiver {
        &self.quiver
    }

    pub fn l1(&self) -> usize {
        self.first.len()
    }

    pub fn l2(&self) -> usize {
        self.second.len()
    }

    pub fn first_class(&self) -> &[OrbitPair] {
        &self.first
    }

    pub fn second_class(&self) -> &[OrbitPair] {
        &self.second
    }

    /// `n_i`, 1-based.
    pub fn n(&self, i: usize) -> usize {
        self.first[i - 1].dim
    }

    /// `m_j`, 1-based.
    pub fn m(&self, j: usize) -> usize {
        self.second[j - 1].dim
    }

    pub fn family(&self, f: Family) -> &[FamilyArrow] {
        match f {
            Family::X => &self.x,
            Family::Y => &self.y,
            Family::Z => &self.z,
        }
    }

    pub fn arrow_counts(&self) -> [usize; 3] {
        [self.x.len(), self.y.len(), self.z.len()]
    }

    /// Group factors: first-class orbits, then second-class orbits.
    pub fn orbit_dims(&self) -> Vec<usize> {
        self.first.iter().chain(&self.second).map(|p| p.dim).collect()
    }

    pub fn coordinates(&self) -> CoordinateSystem {
        let l1 = self.l1();
        let mut arrows = Vec::new();
        for (family, list) in [(Family::X, &self.x), (Family::Y, &self.y), (Family::Z, &self.z)] {
            for (k, fa) in list.iter().enumerate() {
                let (head, tail, rows, cols) = match family {
                    Family::X => ((fa.head - 1, Alpha::Plain), (l1 + fa.tail - 1, Alpha::Plain), self.n(fa.head), self.m(fa.tail)),
                    Family::Y => ((fa.head - 1, Alpha::Plain), (fa.tail - 1, Alpha::Dual), self.n(fa.head), self.n(fa.tail)),
                    Family::Z => ((l1 + fa.head - 1, Alpha::Dual), (l1 + fa.tail - 1, Alpha::Plain), self.m(fa.head), self.m(fa.tail)),
                };
                arrows.push(ArrowCoords {
                    id: self.quiver.arrows[fa.arrow].id.clone(),
                    family,
                    index: k + 1,
                    rows,
                    cols,
                    head,
                    tail,
                });
            }
        }
        CoordinateSystem {
            orbit_dims: self.orbit_dims(),
            arrows,
        }
    }
}

/// The generic matrix of one arrow: its variable family and index, its shape
/// (head dimension × tail dimension), and the orbit and label of both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowCoords {
    pub id: String,
    pub family: Family,
    pub index: usize,
    pub rows: usize,
    pub cols: usize,
    pub head: (usize, Alpha),
    pub tail: (usize, Alpha),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSystem {
    pub orbit_dims: Vec<usize>,
    pub arrows: Vec<ArrowCoords>,
}

impl CoordinateSystem {
    pub fn variables(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        for a in &self.arrows {
            for i in 1..=a.rows {
                for j in 1..=a.cols {
                    out.push(VarId::new(a.family, a.index, i, j));
                }
            }
        }
        out.sort();
        out
    }

    pub fn arrow(&self, family: Family, index: usize) -> Option<&ArrowCoords> {
        self.arrows.iter().find(|a| a.family == family && a.index == index)
    }

    pub fn arrow_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for a in &self.arrows {
            c[a.family.index()] += 1;
        }
        c
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn example_quiver() -> MixedQuiver {
        MixedQuiver::from_json(
            r#"{
              "vertices": [{"id": "v", "dim": 2, "alpha": "1"}, {"id": "w", "dim": 2, "alpha": "*"}],
              "phi": [["v", "w"]],
              "arrows": [
                {"id": "a1", "tail": "v", "head": "w"},
                {"id": "a2", "tail": "w", "head": "v"},
                {"id": "a3", "tail": "v", "head": "v"},
                {"id": "a4", "tail": "w", "head": "w"}
              ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn validation_reports_each_condition() {
        assert!(example_quiver().validate().is_empty());
        let fixed_dual = MixedQuiver {
            vertices: vec![Vertex {
                id: "u".into(),
                dim: 1,
                alpha: Alpha::Dual,
            }],
            phi: vec![],
            arrows: vec![],
        };
        assert!(fixed_dual.validate()[0].starts_with("(b)"));
        let mut dims = example_quiver();
        dims.vertices[1].dim = 3;
        assert!(dims.validate().iter().any(|v| v.starts_with("(a)")));
        let mut same = example_quiver();
        same.vertices[1].alpha = Alpha::Plain;
        assert!(same.validate().iter().any(|v| v.starts_with("(c)")));
        let mut zero = example_quiver();
        zero.vertices[0].dim = 0;
        zero.vertices[1].dim = 0;
        assert!(zero.validate().iter().any(|v| v.contains("dimension 0")));
    }

    #[test]
    fn parser_rejects_unknown_fields() {
        let text = r#"{"vertices": [], "arrows": [], "extra": 1}"#;
        assert!(matches!(MixedQuiver::from_json(text), Err(QuiverError::Parse(_))));
        let text = r#"{"vertices": [{"id": "u", "dim": 1, "alpha": "1", "colour": "red"}]}"#;
        assert!(MixedQuiver::from_json(text).is_err());
        let q = example_quiver();
        assert_eq!(MixedQuiver::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn zigzag_classification() {
        assert!(classify_zigzag(&example_quiver()).is_err());
        let bilinear = ZigzagQuiver::from_parts(&[], &[2], &[], &[], &[(1, 1), (1, 1)]).unwrap();
        assert_eq!((bilinear.l1(), bilinear.l2()), (0, 1));
        assert_eq!(bilinear.arrow_counts(), [0, 0, 2]);
        let xyz = ZigzagQuiver::from_parts(&[2], &[2], &[(1, 1)], &[(1, 1)], &[(1, 1)]).unwrap();
        assert_eq!(xyz.arrow_counts(), [1, 1, 1]);
        let c = xyz.coordinates();
        assert_eq!(c.orbit_dims, vec![2, 2]);
        assert_eq!(c.variables().len(), 12);
        assert_eq!(c.arrow(Family::Z, 1).unwrap().head, (1, Alpha::Dual));
    }

    #[test]
    fn dual_to_dual_arrow_is_rejected() {
        let mut q = ZigzagQuiver::from_parts(&[1], &[1], &[(1, 1)], &[], &[]).unwrap().quiver().clone();
        q.arrows.push(Arrow {
            id: "bad".into(),
            tail: "V1_1*".into(),
            head: "V2_1*".into(),
        });
        match classify_zigzag(&q) {
            Err(QuiverError::NotZigzag(p)) => assert!(p[0].contains("bad")),
            other => panic!("expected rejection, got {other:?}"),
        }
    }
}
