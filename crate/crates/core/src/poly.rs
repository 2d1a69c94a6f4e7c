//! Sparse polynomials in the coordinate functions `x^k_ij`, `y^k_ij`, `z^k_ij`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::degree::MultiDegree;
use crate::error::PolyError;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
    Z,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::X => 'x',
            Family::Y => 'y',
            Family::Z => 'z',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A coordinate function: entry `(row, col)` of the generic matrix of `arrow`
/// in `family`. All indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub family: Family,
    pub arrow: usize,
    pub row: usize,
    pub col: usize,
}

impl VarId {
    pub fn new(family: Family, arrow: usize, row: usize, col: usize) -> Self {
        Self { family, arrow, row, col }
    }

    pub fn x(arrow: usize, row: usize, col: usize) -> Self {
        Self::new(Family::X, arrow, row, col)
    }

    pub fn y(arrow: usize, row: usize, col: usize) -> Self {
        Self::new(Family::Y, arrow, row, col)
    }

    pub fn z(arrow: usize, row: usize, col: usize) -> Self {
        Self::new(Family::Z, arrow, row, col)
    }

    pub fn transposed(self) -> Self {
        Self { row: self.col, col: self.row, ..self }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}][{}][{}]", self.family.letter(), self.arrow, self.row, self.col)
    }
}

/// A power product, kept as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Self(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort();
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Self(out)
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Per-arrow degree data of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(MultiDegree),
    Inhomogeneous,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        let mut p = Self::zero(field);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_i64(field: Field, c: i64) -> Self {
        Self::constant(field.from_i64(c))
    }

    pub fn var(field: Field, v: VarId) -> Self {
        Self::term(Monomial::var(v), field.one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_field(other)?;
        let mut out = Self::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("polynomial field mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("polynomial field mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("polynomial field mismatch")
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.same_field(other).expect("polynomial field mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.field);
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|p| p.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Degrees per arrow of each family, provided every monomial agrees.
    /// `arrows` gives the number of arrows in the X, Y and Z families.
    pub fn multidegree(&self, arrows: [usize; 3]) -> Homogeneity {
        let mut found: Option<MultiDegree> = None;
        for m in self.terms.keys() {
            let mut d = MultiDegree::zero(arrows);
            for (v, e) in m.factors() {
                let slot = d.family_mut(v.family);
                if v.arrow == 0 || v.arrow > slot.len() {
                    return Homogeneity::Inhomogeneous;
                }
                slot[v.arrow - 1] += *e as usize;
            }
            match &found {
                None => found = Some(d),
                Some(prev) if *prev == d => {}
                Some(_) => return Homogeneity::Inhomogeneous,
            }
        }
        match found {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Homogeneous(d),
        }
    }

    /// Simultaneous substitution of every variable. Fails on a variable the map rejects.
    pub fn substitute_with<F>(&self, mut image: F) -> Result<Self, PolyError>
    where
        F: FnMut(&VarId) -> Result<Poly, PolyError>,
    {
        let mut cache: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut out = Self::zero(self.field);
        for (m, c) in &self.terms {
            let mut prod = Self::constant(c.clone());
            for &(v, e) in m.factors() {
                if !cache.contains_key(&(v, e)) {
                    let base = image(&v)?;
                    base.same_field(self)?;
                    cache.insert((v, e), base.pow(e));
                }
                prod = prod.mul(&cache[&(v, e)]);
                if prod.is_zero() {
                    break;
                }
            }
            out.add_assign(&prod);
        }
        Ok(out)
    }

    /// Substitution from an explicit table; every variable must have an entry.
    pub fn substitute_linear(&self, table: &HashMap<VarId, Poly>) -> Result<Self, PolyError> {
        self.substitute_with(|v| table.get(v).cloned().ok_or(PolyError::MissingVariable(*v)))
    }

    /// Renames variables; the map must be injective for the result to keep its shape.
    pub fn rename(&self, f: impl Fn(&VarId) -> VarId) -> Self {
        let mut out = Self::zero(self.field);
        for (m, c) in &self.terms {
            let pairs = m.factors().iter().map(|&(v, e)| (f(&v), e)).collect();
            out.add_term(Monomial::from_pairs(pairs), c);
        }
        out
    }

    pub fn evaluate(&self, value: impl Fn(&VarId) -> Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t = &t * &value(&v).pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Coefficients mapped into `field`; fails for denominators divisible by `p`.
    pub fn reduce(&self, field: Field) -> Result<Self, PolyError> {
        let mut out = Self::zero(field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.reduce(field)?);
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, PolyError> {
        parse_poly(text)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag} * {m}")?;
            }
        }
        if let Field::Prime(p) = self.field {
            write!(f, " (mod {p})")?;
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse_poly(s)
    }
}

fn parse_poly(text: &str) -> Result<Poly, PolyError> {
    let err = |m: String| PolyError::Parse(m);
    let mut body = text.trim();
    let mut field = Field::Rational;
    if let Some(stripped) = body.strip_suffix(')') {
        if let Some(idx) = stripped.rfind("(mod ") {
            let p: u64 = stripped[idx + 5..]
                .trim()
                .parse()
                .map_err(|_| err(format!("bad modulus in {text:?}")))?;
            field = Field::from_characteristic(p)?;
            body = stripped[..idx].trim();
        }
    }
    if body.is_empty() {
        return Err(err("empty input".into()));
    }
    let mut out = Poly::zero(field);
    let mut sign = 1i64;
    let mut current = String::new();
    let mut pending = false;
    let flush = |current: &mut String, sign: i64, out: &mut Poly| -> Result<(), PolyError> {
        let (m, c) = parse_term(current.trim(), field)?;
        let c = if sign < 0 { c.neg_ref() } else { c };
        out.add_term(m, &c);
        current.clear();
        Ok(())
    };
    for ch in body.chars() {
        match ch {
            '+' | '-' if current.trim().is_empty() || current.trim_end().ends_with('*') => {
                if current.trim().is_empty() {
                    if ch == '-' {
                        sign = -sign;
                    }
                } else {
                    return Err(err(format!("dangling operator in {text:?}")));
                }
            }
            '+' | '-' => {
                flush(&mut current, sign, &mut out)?;
                sign = if ch == '-' { -1 } else { 1 };
                pending = true;
            }
            _ => {
                current.push(ch);
                pending = false;
            }
        }
    }
    if pending || current.trim().is_empty() {
        return Err(err(format!("missing term in {text:?}")));
    }
    flush(&mut current, sign, &mut out)?;
    Ok(out)
}

fn parse_term(term: &str, field: Field) -> Result<(Monomial, Scalar), PolyError> {
    let err = |m: String| PolyError::Parse(m);
    let mut coeff = field.one();
    let mut pairs = Vec::new();
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(err(format!("empty factor in {term:?}")));
        }
        let first = factor.chars().next().unwrap();
        if first.is_ascii_digit() {
            coeff = &coeff * &parse_number(factor, field)?;
            continue;
        }
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim().parse::<u32>().map_err(|_| err(format!("bad exponent in {factor:?}")))?),
            None => (factor, 1),
        };
        pairs.push((parse_var(base)?, exp));
    }
    Ok((Monomial::from_pairs(pairs), coeff))
}

fn parse_number(s: &str, field: Field) -> Result<Scalar, PolyError> {
    let bad = || PolyError::Parse(format!("bad coefficient {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(PolyError::DivisionByZero);
    }
    field.from_rational(&BigRational::new(num, den))
}

fn parse_var(s: &str) -> Result<VarId, PolyError> {
    let bad = || PolyError::Parse(format!("bad variable {s:?}"));
    let mut chars = s.chars();
    let family = match chars.next() {
        Some('x') => Family::X,
        Some('y') => Family::Y,
        Some('z') => Family::Z,
        _ => return Err(bad()),
    };
    let rest = chars.as_str();
    let idx: Vec<usize> = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(bad)?
        .split("][")
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match idx.as_slice() {
        &[k, i, j] if k > 0 && i > 0 && j > 0 => Ok(VarId::new(family, k, i, j)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn x(i: usize, j: usize) -> Poly {
        Poly::var(q(), VarId::x(1, i, j))
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(1, 1), x(2, 2));
        let lhs = a.add(&b).mul(&a.sub(&b));
        let rhs = a.mul(&a).sub(&b.mul(&b));
        assert_eq!(lhs, rhs);
        assert_eq!(a.add(&Poly::zero(q())), a);
    }

    #[test]
    fn reduction_mod_five() {
        let p = x(1, 1).scale(&q().from_i64(7));
        let f5 = Field::Prime(5);
        assert_eq!(p.reduce(f5).unwrap(), Poly::var(f5, VarId::x(1, 1, 1)).scale(&f5.from_i64(2)));
    }

    #[test]
    fn multidegrees() {
        let det = x(1, 1).mul(&x(2, 2)).sub(&x(1, 2).mul(&x(2, 1)));
        let d = MultiDegree::new(vec![2], vec![], vec![]);
        assert_eq!(det.multidegree([1, 0, 0]), Homogeneity::Homogeneous(d));
        let mixed = x(1, 1).add(&x(1, 1).mul(&x(2, 2)));
        assert_eq!(mixed.multidegree([1, 0, 0]), Homogeneity::Inhomogeneous);
        let z = Poly::var(q(), VarId::z(1, 1, 2)).sub(&Poly::var(q(), VarId::z(1, 2, 1)));
        assert_eq!(
            z.multidegree([0, 0, 1]),
            Homogeneity::Homogeneous(MultiDegree::new(vec![], vec![], vec![1]))
        );
        assert_eq!(Poly::zero(q()).multidegree([1, 0, 0]), Homogeneity::Zero);
    }

    #[test]
    fn substitution() {
        let p = x(1, 1).mul(&x(2, 2));
        let mut table: HashMap<VarId, Poly> = p.variables().into_iter().map(|v| (v, Poly::var(q(), v))).collect();
        assert_eq!(p.substitute_linear(&table).unwrap(), p);
        table.insert(VarId::x(1, 1, 1), x(1, 1).scale(&q().from_i64(2)));
        assert_eq!(p.substitute_linear(&table).unwrap(), p.scale(&q().from_i64(2)));
        table.remove(&VarId::x(1, 2, 2));
        assert!(matches!(p.substitute_linear(&table), Err(PolyError::MissingVariable(_))));
    }

    #[test]
    fn render_and_parse() {
        let p = x(1, 2).sub(&x(2, 1)).add(&x(1, 1).pow(2).scale(&q().from_i64(3)));
        let text = p.to_string();
        assert_eq!(text, "3 * x[1][1][1]^2 + x[1][1][2] - x[1][2][1]");
        assert_eq!(Poly::parse(&text).unwrap(), p);
        assert_eq!(Poly::zero(q()).to_string(), "0");
        let half = Poly::parse("1/2 * y[2][1][1] - 3/4").unwrap();
        assert_eq!(half.to_string(), "-3/4 + 1/2 * y[2][1][1]");
        let m = Poly::parse("x[1][1][1] - 1 (mod 7)").unwrap();
        assert_eq!(m.to_string(), "6 + x[1][1][1] (mod 7)");
        assert!(Poly::parse("x[1][1]").is_err());
        assert!(Poly::parse("x[1][1][1] +").is_err());
    }
}
