//! Exact checks of invariance and weights, an independent dimension oracle
//! for invariant spaces, and the suite for tuples of bilinear forms on a plane.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::action::{sample_with_rng, GroupElement, SampleMode};
use crate::combinatorics::{fixed_size_partitions, Distribution, Permutation};
use crate::degree::MultiDegree;
use crate::error::VerifyError;
use crate::generator::{
    build_generator, enumerate_quintuples, format_blocks, generate_all, maximal_placements, term, young_subgroup,
    Quintuple,
};
use crate::matrix::{kernel_basis, rank_of_rows, Matrix};
use crate::poly::{Family, Monomial, Poly, VarId};
use crate::quiver::{Alpha, CoordinateSystem, ZigzagQuiver};
use crate::scalar::{Field, Scalar};

/// Default bound on the size of a monomial basis.
pub const BASIS_CAP: usize = 3000;

/// Consecutive unchanged samples after which the sampled kernel is accepted.
pub const STABLE_SAMPLES: usize = 3;

const MAX_KERNEL_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub samples: usize,
    /// The first failing group element and the two sides that differed.
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn describe(g: &GroupElement) -> String {
    g.factors().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")
}

/// `g·f = f` for `samples` random elements of the product of special linear groups.
pub fn check_invariance(f: &Poly, coords: &CoordinateSystem, samples: usize, seed: u64, field: Field) -> Result<CheckOutcome, VerifyError> {
    let f = f.reduce(field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let g = sample_with_rng(field, &coords.orbit_dims, SampleMode::Special, &mut rng)?;
        let image = g.transform(&f, coords)?;
        if image != f {
            return Ok(CheckOutcome {
                samples,
                counterexample: Some(format!("g = [{}]: g·f = {image}", describe(&g))),
            });
        }
    }
    Ok(CheckOutcome {
        samples,
        counterexample: None,
    })
}

/// `f(g·H) = ∏ det(g_u)^{ε_u} f(H)`, alternating general and diagonal samples.
pub fn check_weight(
    f: &Poly,
    coords: &CoordinateSystem,
    weight: &[i64],
    samples: usize,
    seed: u64,
    field: Field,
) -> Result<CheckOutcome, VerifyError> {
    if weight.len() != coords.orbit_dims.len() {
        return Err(VerifyError::Quiver(crate::error::QuiverError::Dimension(format!(
            "{} weight entries for {} group factors",
            weight.len(),
            coords.orbit_dims.len()
        ))));
    }
    let f = f.reduce(field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let mode = if i % 2 == 0 { SampleMode::General } else { SampleMode::Torus };
        let g = sample_with_rng(field, &coords.orbit_dims, mode, &mut rng)?;
        let mut factor = field.one();
        for (det, &e) in g.determinants().iter().zip(weight) {
            factor = &factor * &det.powi(e)?;
        }
        let lhs = g.pull_back(&f, coords)?;
        let rhs = f.scale(&factor);
        if lhs != rhs {
            return Ok(CheckOutcome {
                samples,
                counterexample: Some(format!("g = [{}]: f(g·H) = {lhs}, expected {rhs}", describe(&g))),
            });
        }
    }
    Ok(CheckOutcome {
        samples,
        counterexample: None,
    })
}

/// Every monomial whose degree in the variables of each arrow is the given one.
pub fn monomial_basis(coords: &CoordinateSystem, d: &MultiDegree, cap: usize) -> Result<Vec<Monomial>, VerifyError> {
    if d.arrows() != coords.arrow_counts() {
        return Err(VerifyError::Generator(crate::error::GeneratorError::Degree(format!(
            "{d} does not fit arrow counts {:?}",
            coords.arrow_counts()
        ))));
    }
    let mut out = vec![Monomial::one()];
    for a in &coords.arrows {
        let deg = d.family(a.family)[a.index - 1];
        let vars: Vec<VarId> = (1..=a.rows)
            .flat_map(|i| (1..=a.cols).map(move |j| VarId::new(a.family, a.index, i, j)))
            .collect();
        let pieces = multisets(&vars, deg);
        if out.len().saturating_mul(pieces.len()) > cap {
            return Err(VerifyError::CapExceeded {
                size: out.len().saturating_mul(pieces.len()),
                cap,
            });
        }
        out = out.iter().flat_map(|m| pieces.iter().map(move |p| m.mul(p))).collect();
    }
    out.sort();
    Ok(out)
}

fn multisets(vars: &[VarId], deg: usize) -> Vec<Monomial> {
    fn go(vars: &[VarId], deg: usize, acc: &mut Vec<(VarId, u32)>, out: &mut Vec<Monomial>) {
        if deg == 0 {
            out.push(Monomial::from_pairs(acc.clone()));
            return;
        }
        let Some((&first, rest)) = vars.split_first() else {
            return;
        };
        for e in (0..=deg).rev() {
            if e > 0 {
                acc.push((first, e as u32));
            }
            go(rest, deg - e, acc, out);
            if e > 0 {
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(vars, deg, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    /// Kernel of the infinitesimal action of the Lie algebra; characteristic zero.
    Derivations,
    /// Joint fixed space of sampled group elements, until it is stable.
    RandomKernel,
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMethod::Derivations => "derivations",
            OracleMethod::RandomKernel => "random-kernel",
        })
    }
}

/// The invariant subspace of one multidegree component.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub method: OracleMethod,
    pub basis: Vec<Monomial>,
    /// Coefficient vectors (in `basis` order) spanning the invariants.
    pub kernel: Vec<Vec<Scalar>>,
    /// Group elements drawn; zero for the derivation method.
    pub samples_used: usize,
}

impl OracleOutcome {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }

    pub fn coordinates(&self, f: &Poly, field: Field) -> Option<Vec<Scalar>> {
        coordinates_in(&self.basis, f, field)
    }
}

fn coordinates_in(basis: &[Monomial], f: &Poly, field: Field) -> Option<Vec<Scalar>> {
    let mut v = vec![field.zero(); basis.len()];
    for (m, c) in f.terms() {
        let i = basis.binary_search(m).ok()?;
        v[i] = c.clone();
    }
    Some(v)
}

// intersect `kernel` with the kernel of the linear map given by basis images
fn restrict(kernel: Vec<Vec<Scalar>>, images: &[Poly], field: Field) -> Vec<Vec<Scalar>> {
    if kernel.is_empty() {
        return kernel;
    }
    let combined: Vec<Poly> = kernel
        .iter()
        .map(|v| {
            let mut acc = Poly::zero(field);
            for (c, img) in v.iter().zip(images) {
                if !c.is_zero() && !img.is_zero() {
                    acc.add_assign(&img.scale(c));
                }
            }
            acc
        })
        .collect();
    let monomials: BTreeSet<&Monomial> = combined.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
    if monomials.is_empty() {
        return kernel;
    }
    let rows: Vec<Vec<Scalar>> = monomials
        .iter()
        .map(|m| combined.iter().map(|p| p.coefficient(m)).collect())
        .collect();
    kernel_basis(&rows, kernel.len(), field)
        .into_iter()
        .map(|c| {
            let mut v = vec![field.zero(); kernel[0].len()];
            for (ci, kv) in c.iter().zip(&kernel) {
                if ci.is_zero() {
                    continue;
                }
                for (slot, x) in v.iter_mut().zip(kv) {
                    *slot = &*slot + &(ci * x);
                }
            }
            v
        })
        .collect()
}

fn unit_vectors(n: usize, field: Field) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect()
}

// trace-zero basis of gl_n: off-diagonal units and E_aa − E_{a+1,a+1}
fn sl_basis(n: usize, field: Field) -> Vec<Matrix<Scalar>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.push(Matrix::from_fn(n, n, |i, j| if (i, j) == (a, b) { field.one() } else { field.zero() }));
            }
        }
    }
    for a in 0..n.saturating_sub(1) {
        out.push(Matrix::from_fn(n, n, |i, j| match (i == j, i) {
            (true, i) if i == a => field.one(),
            (true, i) if i == a + 1 => field.from_i64(-1),
            _ => field.zero(),
        }));
    }
    out
}

// first-order term of the substitution `X ↦ L X R` at `g = 1 + εξ` on orbit `o`
fn derivation_table(coords: &CoordinateSystem, o: usize, xi: &Matrix<Scalar>, field: Field) -> HashMap<VarId, Poly> {
    let neg = |m: &Matrix<Scalar>| m.map(Scalar::neg_ref);
    let mut table = HashMap::new();
    for a in &coords.arrows {
        let left = (a.head.0 == o).then(|| match a.head.1 {
            Alpha::Plain => neg(xi),
            Alpha::Dual => xi.transpose(),
        });
        let right = (a.tail.0 == o).then(|| match a.tail.1 {
            Alpha::Plain => xi.clone(),
            Alpha::Dual => neg(&xi.transpose()),
        });
        for i in 0..a.rows {
            for j in 0..a.cols {
                let mut image = Poly::zero(field);
                let var = |p: usize, q: usize| Poly::var(field, VarId::new(a.family, a.index, p + 1, q + 1));
                if let Some(l) = &left {
                    for p in 0..a.rows {
                        if !l.get(i, p).is_zero() {
                            image.add_assign(&var(p, j).scale(l.get(i, p)));
                        }
                    }
                }
                if let Some(r) = &right {
                    for q in 0..a.cols {
                        if !r.get(q, j).is_zero() {
                            image.add_assign(&var(i, q).scale(r.get(q, j)));
                        }
                    }
                }
                table.insert(VarId::new(a.family, a.index, i + 1, j + 1), image);
            }
        }
    }
    table
}

fn derive(m: &Monomial, table: &HashMap<VarId, Poly>, field: Field) -> Poly {
    let mut out = Poly::zero(field);
    for (k, &(v, e)) in m.factors().iter().enumerate() {
        let dv = &table[&v];
        if dv.is_zero() {
            continue;
        }
        let mut rest: Vec<(VarId, u32)> = m.factors().to_vec();
        rest[k].1 -= 1;
        let cofactor = Poly::term(Monomial::from_pairs(rest), field.from_i64(e as i64));
        out.add_assign(&cofactor.mul(dv));
    }
    out
}

/// The invariants of multidegree `d` under the product of special linear groups.
pub fn oracle_dimension(
    coords: &CoordinateSystem,
    d: &MultiDegree,
    method: OracleMethod,
    field: Field,
    cap: usize,
    seed: u64,
) -> Result<OracleOutcome, VerifyError> {
    let basis = monomial_basis(coords, d, cap)?;
    let mut kernel = unit_vectors(basis.len(), field);
    let mut samples_used = 0;
    match method {
        OracleMethod::Derivations => {
            if field != Field::Rational {
                return Err(VerifyError::Generator(crate::error::GeneratorError::NeedsCharZero));
            }
            for (o, &n) in coords.orbit_dims.iter().enumerate() {
                for xi in sl_basis(n, field) {
                    let table = derivation_table(coords, o, &xi, field);
                    let images: Vec<Poly> = basis.iter().map(|m| derive(m, &table, field)).collect();
                    kernel = restrict(kernel, &images, field);
                }
            }
        }
        OracleMethod::RandomKernel => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut stable = 0;
            while stable < STABLE_SAMPLES && samples_used < MAX_KERNEL_SAMPLES && !kernel.is_empty() {
                let g = sample_with_rng(field, &coords.orbit_dims, SampleMode::Special, &mut rng)?;
                samples_used += 1;
                let table = g.act(coords)?;
                let images = basis
                    .iter()
                    .map(|m| {
                        let p = Poly::term(m.clone(), field.one());
                        Ok(p.substitute_linear(&table)?.sub(&p))
                    })
                    .collect::<Result<Vec<Poly>, VerifyError>>()?;
                let before = kernel.len();
                kernel = restrict(kernel, &images, field);
                stable = if kernel.len() == before { stable + 1 } else { 0 };
            }
        }
    }
    Ok(OracleOutcome {
        method,
        basis,
        kernel,
        samples_used,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Full,
    Deficient,
    BudgetTruncated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Full => "span = full",
            Verdict::Deficient => "span = deficient",
            Verdict::BudgetTruncated => "span = budget-truncated",
        })
    }
}

/// Generator span against the oracle for one multidegree.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub degree: MultiDegree,
    pub field: Field,
    pub method: OracleMethod,
    pub admissible: bool,
    pub dimension: usize,
    pub rank: usize,
    /// Whether every generator lies in the oracle's invariant space.
    pub contained: bool,
    pub quintuples: Vec<String>,
    pub zero_generators: usize,
    pub verdict: Verdict,
}

pub const ORACLE_HEADER: &str = "qsemi-oracle v1";

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{ORACLE_HEADER}")?;
        writeln!(f, "degree {}", self.degree)?;
        writeln!(f, "characteristic {}", self.field.characteristic())?;
        writeln!(f, "method {}", self.method)?;
        writeln!(f, "admissible {}", self.admissible)?;
        writeln!(f, "oracle-dimension {}", self.dimension)?;
        writeln!(f, "generator-rank {}", self.rank)?;
        writeln!(f, "generators-invariant {}", self.contained)?;
        writeln!(f, "zero-generators {}", self.zero_generators)?;
        writeln!(f, "quintuples {}", self.quintuples.len())?;
        for q in &self.quintuples {
            writeln!(f, "  {q}")?;
        }
        writeln!(f, "verdict {}", self.verdict)
    }
}

/// Rank of the generators of `d` against the oracle dimension. In
/// characteristic zero the derivation oracle is used, otherwise sampling.
pub fn spanning_check(
    zz: &ZigzagQuiver,
    d: &MultiDegree,
    field: Field,
    dp_cap: usize,
    limit: Option<usize>,
    seed: u64,
) -> Result<OracleReport, VerifyError> {
    let coords = zz.coordinates();
    let method = if field == Field::Rational { OracleMethod::Derivations } else { OracleMethod::RandomKernel };
    let oracle = oracle_dimension(&coords, d, method, field, BASIS_CAP, seed)?;
    let (en, entries) = generate_all(zz, d, field, dp_cap, limit)?;
    let mut rows = Vec::new();
    let mut zero_generators = 0;
    let mut outside = false;
    for e in &entries {
        if e.poly.is_zero() {
            zero_generators += 1;
            continue;
        }
        match oracle.coordinates(&e.poly, field) {
            Some(v) => rows.push(v),
            None => outside = true,
        }
    }
    let rank = rank_of_rows(&rows);
    let contained = !outside && {
        let mut joint = oracle.kernel.clone();
        joint.extend(rows.iter().cloned());
        rank_of_rows(&joint) == oracle.dimension()
    };
    let verdict = if en.truncated {
        Verdict::BudgetTruncated
    } else if rank == oracle.dimension() && contained {
        Verdict::Full
    } else {
        Verdict::Deficient
    };
    Ok(OracleReport {
        degree: d.clone(),
        field,
        method,
        admissible: en.weight.is_some(),
        dimension: oracle.dimension(),
        rank,
        contained,
        quintuples: en
            .quintuples
            .iter()
            .map(|q| format!("A={} B={}", format_blocks(q.a().blocks()), format_blocks(q.b().blocks())))
            .collect(),
        zero_generators,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(SuiteCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

pub const SUITE_HEADER: &str = "qsemi-bilinear v1";

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{SUITE_HEADER}")?;
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        writeln!(f, "verdict {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// The quiver of `d` bilinear forms on a plane: one second-class orbit of
/// dimension 2 and `d` Z-arrows.
pub fn bilinear_quiver(d: usize) -> ZigzagQuiver {
    ZigzagQuiver::from_parts(&[], &[2], &[], &[], &vec![(1, 1); d]).expect("a plane with loops is zigzag")
}

fn q() -> Field {
    Field::Rational
}

fn j_matrix() -> Matrix<Poly> {
    Matrix::from_i64(q(), &[vec![0, 1], vec![-1, 0]]).to_poly(q())
}

fn z_matrix(k: usize) -> Matrix<Poly> {
    Matrix::generic(q(), Family::Z, k, 2, 2)
}

/// `tr(Z_{k₁}J ⋯ Z_{k_r}J)`, arrows 1-based.
pub fn trace_word(word: &[usize]) -> Poly {
    let j = j_matrix();
    let mut acc = Matrix::identity(2, &Poly::one(q()));
    for &k in word {
        acc = acc.mul(&z_matrix(k)).mul(&j);
    }
    acc.trace(&Poly::zero(q()))
}

fn det_z(k: usize) -> Poly {
    z_matrix(k).det_expansion(&Poly::one(q()))
}

/// `c(B, s̲) = ∏_k ∏_{i,j} #{l : B|l| = i, B|s+l| = j, S|l| = k}!`.
pub fn pair_count_factor(b: &Distribution, degrees: &[usize]) -> u64 {
    let s: usize = degrees.iter().sum();
    let arrows = Distribution::determined(degrees);
    let mut counts: HashMap<(usize, usize, usize), u64> = HashMap::new();
    for l in 1..=s {
        let key = (arrows.slot_of(l).unwrap(), b.block_of(l).unwrap(), b.block_of(s + l).unwrap());
        *counts.entry(key).or_default() += 1;
    }
    counts.values().map(|&c| (1..=c).product::<u64>()).product()
}

/// `P^B_{s̲} = (1/c(B,s̲)) Σ_{τ∈S_B} sgn(τ) ∏_l z^{S|l|}_{B⟨τ(l)⟩, B⟨τ(s+l)⟩}`.
pub fn bilinear_p(b: &[Vec<usize>], degrees: &[usize]) -> Result<Poly, VerifyError> {
    let zz = bilinear_quiver(degrees.len());
    let d = MultiDegree::new(vec![], vec![], degrees.to_vec());
    let quint = Quintuple::new(&zz, d, vec![], b.to_vec())?;
    let empty = Permutation::identity(0);
    let mut total = Poly::zero(q());
    for tau in young_subgroup(quint.b()) {
        total.add_assign(&term(&quint, &empty, &tau, q())?);
    }
    let c = q().from_i64(pair_count_factor(quint.b(), degrees) as i64);
    Ok(total.scale(&c.inv()?))
}

/// `D₁ = {1, 2s}`, `D_l = {l, s+l−1}`, `D_s = {s, 2s−1}`; for `s = 1` the single block `{1, 2}`.
pub fn cyclic_distribution(s: usize) -> Vec<Vec<usize>> {
    if s == 1 {
        return vec![vec![1, 2]];
    }
    let mut out = vec![vec![1, 2 * s]];
    for l in 2..s {
        out.push(vec![l, s + l - 1]);
    }
    out.push(vec![s, 2 * s - 1]);
    out
}

fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

// the block-index set splitting B into two closed halves, if any
fn decomposition(b: &Distribution, s: usize) -> Option<Vec<bool>> {
    let nblocks = b.len();
    for mask in 1..(1u32 << nblocks) - 1 {
        let inside = |blk: usize| mask & (1 << (blk - 1)) != 0;
        if (1..=s).all(|l| inside(b.block_of(l).unwrap()) == inside(b.block_of(s + l).unwrap())) {
            return Some((1..=nblocks).map(inside).collect());
        }
    }
    None
}

// the sub-data of `B` on the pairs whose blocks lie on one side
fn restrict_pairs(b: &Distribution, degrees: &[usize], side: &[bool], want: bool) -> (Vec<Vec<usize>>, Vec<usize>) {
    let s: usize = degrees.iter().sum();
    let arrows = Distribution::determined(degrees);
    let chosen: Vec<usize> = (1..=s).filter(|&l| side[b.block_of(l).unwrap() - 1] == want).collect();
    let s1 = chosen.len();
    let mut sub_degrees = vec![0; degrees.len()];
    for &l in &chosen {
        sub_degrees[arrows.slot_of(l).unwrap() - 1] += 1;
    }
    let mut renumber = HashMap::new();
    for (i, &l) in chosen.iter().enumerate() {
        renumber.insert(l, i + 1);
        renumber.insert(s + l, s1 + i + 1);
    }
    let blocks = b
        .blocks()
        .iter()
        .enumerate()
        .filter(|(i, _)| side[*i] == want)
        .map(|(_, blk)| blk.iter().map(|l| renumber[l]).collect())
        .collect();
    (blocks, sub_degrees)
}

fn z_monomial_products(degrees: &[usize]) -> Vec<Poly> {
    // atoms: det(Z_k) and trace words, each with its degree vector
    let d = degrees.len();
    let s: usize = degrees.iter().sum();
    let mut atoms: Vec<(Vec<usize>, Poly)> = Vec::new();
    for k in 1..=d {
        let mut v = vec![0; d];
        v[k - 1] = 2;
        atoms.push((v, det_z(k)));
    }
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..s {
        let next: Vec<Vec<usize>> = words
            .iter()
            .flat_map(|w| (1..=d).map(move |k| [w.clone(), vec![k]].concat()))
            .collect();
        for w in &next {
            let mut v = vec![0; d];
            for &k in w {
                v[k - 1] += 1;
            }
            if v.iter().zip(degrees).all(|(a, b)| a <= b) {
                atoms.push((v, trace_word(w)));
            }
        }
        words = next;
    }
    let mut out = Vec::new();
    fn go(atoms: &[(Vec<usize>, Poly)], from: usize, left: Vec<usize>, acc: Poly, out: &mut Vec<Poly>) {
        if left.iter().all(|&x| x == 0) {
            out.push(acc);
            return;
        }
        for i in from..atoms.len() {
            let (v, p) = &atoms[i];
            if v.iter().zip(&left).all(|(a, b)| a <= b) {
                let rest = left.iter().zip(v).map(|(a, b)| a - b).collect();
                go(atoms, i, rest, acc.mul(p), out);
            }
        }
    }
    go(&atoms, 0, degrees.to_vec(), Poly::one(q()), &mut out);
    out
}

fn in_span(span: &[Poly], f: &Poly) -> bool {
    let monomials: Vec<Monomial> = span
        .iter()
        .chain(std::iter::once(f))
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows: Vec<Vec<Scalar>> = span.iter().filter_map(|p| coordinates_in(&monomials, p, q())).collect();
    let base = rank_of_rows(&rows);
    let mut with = rows;
    with.push(coordinates_in(&monomials, f, q()).expect("monomials cover f"));
    rank_of_rows(&with) == base
}

fn generic2(name: Family, k: usize) -> Matrix<Poly> {
    Matrix::generic(q(), name, k, 2, 2)
}

/// `tr(U_{S|1|} ⋯ U_{S|s|}) = (−1)^s P^D_{s̲}` with `U_k = Z_k J`, for every
/// `s̲` with `d` entries summing to `s`. Returns the first failure.
pub fn check_cyclic_trace(d: usize, s: usize) -> Result<Option<String>, VerifyError> {
    for degrees in compositions(d, s) {
        let arrows = Distribution::determined(&degrees);
        let word: Vec<usize> = (1..=s).map(|l| arrows.slot_of(l).unwrap()).collect();
        let lhs = trace_word(&word);
        let pd = bilinear_p(&cyclic_distribution(s), &degrees)?;
        let rhs = if s % 2 == 0 { pd } else { pd.neg() };
        if lhs != rhs {
            return Ok(Some(format!("s̲={degrees:?}: tr = {lhs}, (-1)^s P^D = {rhs}")));
        }
    }
    Ok(None)
}

/// The suite for `d` forms, covering total degrees `s ≤ max_s`.
pub fn bilinear_example_suite(d: usize, max_s: usize) -> Result<SuiteReport, VerifyError> {
    let mut report = SuiteReport::default();
    let z = |i, j| Poly::var(q(), VarId::z(1, i, j));

    // closed forms
    let p1 = bilinear_p(&[vec![1, 2]], &[1])?;
    let pf = z(1, 2).sub(&z(2, 1));
    report.push(
        "s=1 closed form",
        p1 == pf && pf == trace_word(&[1]).neg(),
        format!("P = {p1}, -tr(Z1 J) = {}", trace_word(&[1]).neg()),
    );
    let b = vec![vec![1, 2], vec![3, 4]];
    let p2 = bilinear_p(&b, &[2])?;
    let c2 = pair_count_factor(&Distribution::new(4, b.clone()).unwrap(), &[2]);
    report.push("s=2 closed form", c2 == 2 && p2 == det_z(1), format!("c = {c2}, P = {p2}"));

    // every generator is ±P^B, and c(B, s̲) is the order of the maximal subgroup
    let mut agree = true;
    let mut detail = String::from("all quintuples agree");
    for s in 1..=max_s {
        for degrees in compositions(d, s) {
            let zz = bilinear_quiver(d);
            let md = MultiDegree::new(vec![], vec![], degrees.clone());
            for quint in enumerate_quintuples(&zz, &md, None)?.quintuples {
                let g = build_generator(&zz, &quint, q(), crate::dp::DEFAULT_CAP)?;
                let p = bilinear_p(quint.b().blocks(), &degrees)?;
                let order = maximal_placements(&quint)?.lambda.young_order();
                let c = pair_count_factor(quint.b(), &degrees);
                if !(g == p || g == p.neg()) || order != c.into() {
                    agree = false;
                    detail = format!("s={degrees:?} B={}: DP = {g}, P = {p}", quint.b());
                }
            }
        }
    }
    report.push("generators are ±P^B", agree, detail);

    // trace of the cyclic word against P^D
    for s in 1..=max_s {
        let failure = check_cyclic_trace(d, s)?;
        let detail = failure
            .clone()
            .unwrap_or_else(|| format!("tr(U_S|1| … U_S|{s}|) = (-1)^{s} P^D for every s̲ with {d} arrows"));
        report.push(format!("cyclic trace s={s}"), failure.is_none(), detail);
    }

    // decomposable distributions factor
    let mut ok = true;
    let mut seen = 0;
    let mut detail = String::new();
    for s in 2..=max_s {
        let points: Vec<usize> = (1..=2 * s).collect();
        for degrees in compositions(d, s) {
            for blocks in fixed_size_partitions(&points, 2) {
                let dist = Distribution::new(2 * s, blocks.clone()).unwrap();
                let Some(side) = decomposition(&dist, s) else {
                    continue;
                };
                seen += 1;
                let (b1, d1) = restrict_pairs(&dist, &degrees, &side, true);
                let (b2, d2) = restrict_pairs(&dist, &degrees, &side, false);
                let whole = bilinear_p(&blocks, &degrees)?;
                let product = bilinear_p(&b1, &d1)?.mul(&bilinear_p(&b2, &d2)?);
                if whole != product {
                    ok = false;
                    detail = format!("B={} s̲={degrees:?}", dist);
                }
            }
        }
    }
    if ok {
        detail = format!("{seen} decomposable distributions factor");
    }
    report.push("decomposable factorization", ok, detail);

    // membership in the algebra generated by determinants and J-traces
    let mut ok = true;
    let mut count = 0;
    let mut detail = String::new();
    for s in 1..=max_s {
        for degrees in compositions(d, s) {
            let span = z_monomial_products(&degrees);
            let zz = bilinear_quiver(d);
            let md = MultiDegree::new(vec![], vec![], degrees.clone());
            for quint in enumerate_quintuples(&zz, &md, None)?.quintuples {
                let g = build_generator(&zz, &quint, q(), crate::dp::DEFAULT_CAP)?;
                count += 1;
                if !in_span(&span, &g) {
                    ok = false;
                    detail = format!("s̲={degrees:?} B={}", quint.b());
                }
            }
        }
    }
    if ok {
        detail = format!("{count} generators lie in the span of det/trace products");
    }
    report.push("membership", ok, detail);

    // 2×2 transpose-trace identities
    let (h1, h2, m) = (generic2(Family::X, 1), generic2(Family::X, 2), generic2(Family::Y, 1));
    let j = j_matrix();
    let zero = Poly::zero(q());
    let tr = |a: &Matrix<Poly>| a.trace(&zero);
    let simple = tr(&h1.transpose().mul(&j)) == tr(&h1.mul(&j)).neg();
    let lhs = tr(&h1.transpose().mul(&j).mul(&m));
    let derived = tr(&h1).mul(&tr(&j.mul(&m))).sub(&tr(&j.mul(&h1).mul(&m)));
    // as printed, with the second matrix read once as M and once as H2
    let printed_mixed = tr(&h1.transpose().mul(&j).mul(&m)) == tr(&h1.mul(&j).mul(&m)).sub(&tr(&h1.mul(&j)).mul(&tr(&h2)));
    let printed_same = tr(&h1.transpose().mul(&j).mul(&h2)) == tr(&h1.mul(&j).mul(&h2)).sub(&tr(&h1.mul(&j)).mul(&tr(&h2)));
    report.push(
        "transpose-trace identities",
        simple && lhs == derived && printed_same,
        format!(
            "tr(H^T J) = -tr(H J): {simple}; tr(H^T J M) = tr(H) tr(J M) - tr(J H M): {}; \
             tr(H1^T J M) = tr(H1 J M) - tr(H1 J) tr(H2): {printed_mixed}; \
             tr(H1^T J H2) = tr(H1 J H2) - tr(H1 J) tr(H2): {printed_same}",
            lhs == derived
        ),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::relative_weight;
    use crate::scalar::MERSENNE_31;

    fn single_x() -> ZigzagQuiver {
        ZigzagQuiver::from_parts(&[2], &[2], &[(1, 1)], &[], &[]).unwrap()
    }

    #[test]
    fn invariance_examples() {
        let zz = single_x();
        let coords = zz.coordinates();
        let det = Matrix::generic(q(), Family::X, 1, 2, 2).det_expansion(&Poly::one(q()));
        for field in [q(), Field::Prime(MERSENNE_31)] {
            assert!(check_invariance(&det, &coords, 10, 1, field).unwrap().passed());
        }
        let coord = Poly::var(q(), VarId::x(1, 1, 1));
        let out = check_invariance(&coord, &coords, 10, 1, q()).unwrap();
        assert!(out.counterexample.unwrap().contains("g = ["));
        let bq = bilinear_quiver(1);
        assert!(check_invariance(&trace_word(&[1]), &bq.coordinates(), 10, 3, q()).unwrap().passed());
    }

    #[test]
    fn weight_examples() {
        let zz = single_x();
        let coords = zz.coordinates();
        let det = Matrix::generic(q(), Family::X, 1, 2, 2).det_expansion(&Poly::one(q()));
        assert!(check_weight(&det, &coords, &[1, -1], 10, 5, q()).unwrap().passed());
        assert!(!check_weight(&det, &coords, &[0, 0], 10, 5, q()).unwrap().passed());
        let pf = Poly::var(q(), VarId::z(1, 1, 2)).sub(&Poly::var(q(), VarId::z(1, 2, 1)));
        assert!(check_weight(&pf, &bilinear_quiver(1).coordinates(), &[-1], 10, 5, q()).unwrap().passed());
    }

    #[test]
    fn oracle_examples() {
        let bq = bilinear_quiver(1);
        let coords = bq.coordinates();
        let s = |v: usize| MultiDegree::new(vec![], vec![], vec![v]);
        let dim = |d: &MultiDegree, m, f| oracle_dimension(&coords, d, m, f, BASIS_CAP, 9).unwrap().dimension();
        assert_eq!(dim(&s(1), OracleMethod::Derivations, q()), 1);
        for v in 1..=3 {
            let a = dim(&s(v), OracleMethod::Derivations, q());
            let b = dim(&s(v), OracleMethod::RandomKernel, Field::Prime(MERSENNE_31));
            assert_eq!(a, b, "s = {v}");
        }
        let x = single_x();
        let t2 = MultiDegree::new(vec![2], vec![], vec![]);
        let o = oracle_dimension(&x.coordinates(), &t2, OracleMethod::Derivations, q(), BASIS_CAP, 0).unwrap();
        assert_eq!(o.dimension(), 1);
        let t1 = MultiDegree::new(vec![1], vec![], vec![]);
        let o = oracle_dimension(&x.coordinates(), &t1, OracleMethod::Derivations, q(), BASIS_CAP, 0).unwrap();
        assert_eq!(o.dimension(), 0);
        assert!(matches!(
            oracle_dimension(&x.coordinates(), &MultiDegree::new(vec![30], vec![], vec![]), OracleMethod::Derivations, q(), 100, 0),
            Err(VerifyError::CapExceeded { .. })
        ));
    }

    #[test]
    fn spanning_examples() {
        let x = single_x();
        let r = spanning_check(&x, &MultiDegree::new(vec![2], vec![], vec![]), q(), 10, None, 0).unwrap();
        assert_eq!((r.dimension, r.rank, r.verdict), (1, 1, Verdict::Full));
        let r = spanning_check(&x, &MultiDegree::new(vec![1], vec![], vec![]), q(), 10, None, 0).unwrap();
        assert!(!r.admissible);
        assert_eq!((r.dimension, r.verdict), (0, Verdict::Full));
        let bq = bilinear_quiver(1);
        for v in 1..=3 {
            let r = spanning_check(&bq, &MultiDegree::new(vec![], vec![], vec![v]), q(), 10, None, 0).unwrap();
            assert_eq!(r.verdict, Verdict::Full, "{r}");
        }
        let r = spanning_check(&bq, &MultiDegree::new(vec![], vec![], vec![2]), q(), 10, Some(1), 0).unwrap();
        assert_eq!(r.verdict, Verdict::BudgetTruncated);
    }

    #[test]
    fn generators_have_their_weights() {
        let bq = bilinear_quiver(2);
        let d = MultiDegree::new(vec![], vec![], vec![1, 1]);
        for quint in enumerate_quintuples(&bq, &d, None).unwrap().quintuples {
            let g = build_generator(&bq, &quint, q(), 10).unwrap();
            let out = check_weight(&g, &bq.coordinates(), &relative_weight(&quint), 6, 2, q()).unwrap();
            assert!(out.passed());
        }
    }

    #[test]
    fn bilinear_suite_passes() {
        let report = bilinear_example_suite(2, 3).unwrap();
        assert!(report.passed(), "{report}");
        let text = report.to_string();
        assert!(text.contains("tr(H1 J) tr(H2): false;"), "{text}");
        assert!(text.contains("tr(H1 J) tr(H2): true"), "{text}");
    }
}
