//! Admissible block data and the spanning semi-invariants built from it.
//!
//! A multidegree `(t̲, r̲, s̲)` is admissible when every first-class orbit `i`
//! receives a multiple `n_i p_i` of positions and every second-class orbit `j`
//! a multiple `m_j q_j`. A quintuple adds a distribution `A` of `[1, t+2r]`
//! into `p` blocks (sizes `n_i`, grouped by orbit) and `B` of `[1, t+2s]`
//! into `q` blocks. Its generator is the DP mixture evaluated on block
//! matrices that carry one generic arrow matrix each.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinatorics::{fixed_size_partitions, Distribution, Multipartition, Permutation};
use crate::degree::MultiDegree;
use crate::dp::dp_distributed;
use crate::error::{CombinatoricsError, GeneratorError};
use crate::matrix::Matrix;
use crate::poly::{Family, Monomial, Poly, VarId};
use crate::quiver::ZigzagQuiver;
use crate::scalar::{Field, Scalar};

/// `(p̲, q̲)` with `Σ n_i p_i = t+2r` and `Σ m_j q_j = t+2s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleWeight {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl AdmissibleWeight {
    pub fn total_p(&self) -> usize {
        self.p.iter().sum()
    }

    pub fn total_q(&self) -> usize {
        self.q.iter().sum()
    }

    /// `(p̲, −q̲)`, one exponent per group factor (first class, then second class).
    pub fn relative(&self) -> Vec<i64> {
        self.p
            .iter()
            .map(|&p| p as i64)
            .chain(self.q.iter().map(|&q| -(q as i64)))
            .collect()
    }
}

impl fmt::Display for AdmissibleWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "p=({}) q=({})", join(&self.p), join(&self.q))
    }
}

fn check_degree(zz: &ZigzagQuiver, d: &MultiDegree) -> Result<(), GeneratorError> {
    if d.arrows() != zz.arrow_counts() {
        return Err(GeneratorError::Degree(format!(
            "{} entries per family given, the quiver has {:?} arrows",
            d,
            zz.arrow_counts()
        )));
    }
    Ok(())
}

/// The positions each orbit must cover: for first-class orbit `i`, the
/// `T_k` of X-arrows into `i`, `t+R_k` of Y-arrows into `i` and `t+r+R_k` of
/// Y-arrows out of `i`; symmetrically for the second class with `T`, `S`.
pub fn vertex_pools(zz: &ZigzagQuiver, d: &MultiDegree) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>), GeneratorError> {
    check_degree(zz, d)?;
    let (t, r, s) = (d.total_t(), d.total_r(), d.total_s());
    let intervals = |v: &[usize]| -> Vec<Vec<usize>> {
        let mut next = 1;
        v.iter()
            .map(|&len| {
                let block = (next..next + len).collect();
                next += len;
                block
            })
            .collect()
    };
    let (ts, rs, ss) = (intervals(&d.t), intervals(&d.r), intervals(&d.s));
    let mut first = vec![Vec::new(); zz.l1()];
    let mut second = vec![Vec::new(); zz.l2()];
    for (k, a) in zz.family(Family::X).iter().enumerate() {
        first[a.head - 1].extend(&ts[k]);
        second[a.tail - 1].extend(&ts[k]);
    }
    for (k, a) in zz.family(Family::Y).iter().enumerate() {
        first[a.head - 1].extend(rs[k].iter().map(|l| t + l));
        first[a.tail - 1].extend(rs[k].iter().map(|l| t + r + l));
    }
    for (k, a) in zz.family(Family::Z).iter().enumerate() {
        second[a.head - 1].extend(ss[k].iter().map(|l| t + l));
        second[a.tail - 1].extend(ss[k].iter().map(|l| t + s + l));
    }
    for pool in first.iter_mut().chain(second.iter_mut()) {
        pool.sort_unstable();
    }
    Ok((first, second))
}

/// The weight of an admissible multidegree, or `None` when some orbit count
/// is not divisible by its dimension.
pub fn solve_admissible(zz: &ZigzagQuiver, d: &MultiDegree) -> Result<Option<AdmissibleWeight>, GeneratorError> {
    let (first, second) = vertex_pools(zz, d)?;
    let divide = |pools: &[Vec<usize>], dim: &dyn Fn(usize) -> usize| -> Option<Vec<usize>> {
        pools
            .iter()
            .enumerate()
            .map(|(i, pool)| {
                let n = dim(i + 1);
                match (pool.len(), n) {
                    (0, _) => Some(0),
                    (_, 0) => None,
                    (len, n) if len % n == 0 => Some(len / n),
                    _ => None,
                }
            })
            .collect()
    };
    let Some(p) = divide(&first, &|i| zz.n(i)) else {
        return Ok(None);
    };
    let Some(q) = divide(&second, &|j| zz.m(j)) else {
        return Ok(None);
    };
    Ok(Some(AdmissibleWeight { p, q }))
}

/// `(t̲, r̲, s̲, A, B)`. The slot label of every block of `A` and `B` is the
/// orbit it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quintuple {
    degree: MultiDegree,
    weight: AdmissibleWeight,
    a: Distribution,
    b: Distribution,
}

impl Quintuple {
    /// Checks an explicit choice of blocks. Blocks must be listed orbit by
    /// orbit: the first `p_1` blocks of `A` cover orbit 1 and so on.
    pub fn new(zz: &ZigzagQuiver, degree: MultiDegree, a: Vec<Vec<usize>>, b: Vec<Vec<usize>>) -> Result<Self, GeneratorError> {
        let weight = solve_admissible(zz, &degree)?
            .ok_or_else(|| GeneratorError::NotAdmissible(format!("multidegree {degree} has no admissible weight")))?;
        let (first, second) = vertex_pools(zz, &degree)?;
        let a = orbit_blocks("A", a, &weight.p, &first, &|i| zz.n(i))?;
        let b = orbit_blocks("B", b, &weight.q, &second, &|j| zz.m(j))?;
        Ok(Self { degree, weight, a, b })
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.degree
    }

    pub fn weight(&self) -> &AdmissibleWeight {
        &self.weight
    }

    pub fn a(&self) -> &Distribution {
        &self.a
    }

    pub fn b(&self) -> &Distribution {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.ground()
    }

    pub fn cols(&self) -> usize {
        self.b.ground()
    }
}

fn orbit_blocks(
    name: &str,
    blocks: Vec<Vec<usize>>,
    counts: &[usize],
    pools: &[Vec<usize>],
    dim: &dyn Fn(usize) -> usize,
) -> Result<Distribution, GeneratorError> {
    let ground: usize = pools.iter().map(Vec::len).sum();
    let expected: usize = counts.iter().sum();
    if blocks.len() != expected {
        return Err(GeneratorError::NotAdmissible(format!("{name} needs {expected} blocks, got {}", blocks.len())));
    }
    let slots: Vec<usize> = counts.iter().enumerate().flat_map(|(i, &c)| vec![i + 1; c]).collect();
    for (block, &orbit) in blocks.iter().zip(&slots) {
        if block.len() != dim(orbit) {
            return Err(GeneratorError::NotAdmissible(format!(
                "{name}-block {block:?} belongs to orbit {orbit} and needs {} points",
                dim(orbit)
            )));
        }
        if let Some(l) = block.iter().find(|l| pools[orbit - 1].binary_search(l).is_err()) {
            return Err(GeneratorError::NotAdmissible(format!(
                "{name}-block {block:?} belongs to orbit {orbit}, whose positions do not include {l}"
            )));
        }
    }
    Ok(Distribution::with_slots(ground, blocks, slots)?)
}

/// Admissible quintuples of one multidegree in canonical order.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub weight: Option<AdmissibleWeight>,
    pub quintuples: Vec<Quintuple>,
    /// Set when `limit` cut the stream short.
    pub truncated: bool,
}

/// Blocks within one orbit are sorted by minima, orbits come in declaration
/// order, and `A` varies slowest.
pub fn enumerate_quintuples(zz: &ZigzagQuiver, d: &MultiDegree, limit: Option<usize>) -> Result<Enumeration, GeneratorError> {
    let Some(weight) = solve_admissible(zz, d)? else {
        return Ok(Enumeration {
            weight: None,
            quintuples: vec![],
            truncated: false,
        });
    };
    let (first, second) = vertex_pools(zz, d)?;
    let a_choices = orbit_products(&first, &|i| zz.n(i));
    let b_choices = orbit_products(&second, &|j| zz.m(j));
    let slots = |counts: &[usize]| -> Vec<usize> { counts.iter().enumerate().flat_map(|(i, &c)| vec![i + 1; c]).collect() };
    let (a_slots, b_slots) = (slots(&weight.p), slots(&weight.q));
    let (rows, cols) = (d.total_t() + 2 * d.total_r(), d.total_t() + 2 * d.total_s());
    let mut quintuples = Vec::new();
    let mut truncated = false;
    'outer: for a in &a_choices {
        for b in &b_choices {
            if limit.is_some_and(|n| quintuples.len() >= n) {
                truncated = true;
                break 'outer;
            }
            quintuples.push(Quintuple {
                degree: d.clone(),
                weight: weight.clone(),
                a: Distribution::with_slots(rows, a.clone(), a_slots.clone())?,
                b: Distribution::with_slots(cols, b.clone(), b_slots.clone())?,
            });
        }
    }
    Ok(Enumeration {
        weight: Some(weight),
        quintuples,
        truncated,
    })
}

// every way to cut each pool into blocks of its orbit's size, concatenated
fn orbit_products(pools: &[Vec<usize>], dim: &dyn Fn(usize) -> usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for (i, pool) in pools.iter().enumerate() {
        let cuts = if pool.is_empty() { vec![vec![]] } else { fixed_size_partitions(pool, dim(i + 1)) };
        let mut next = Vec::with_capacity(out.len() * cuts.len());
        for prefix in &out {
            for cut in &cuts {
                let mut blocks = prefix.clone();
                blocks.extend(cut.iter().cloned());
                next.push(blocks);
            }
        }
        out = next;
    }
    out
}

/// Distributions `Γ, Δ, Λ` refining `A′∩B′∩T`, `A″∩A‴∩R`, `B″∩B‴∩S`, with the
/// arrow and the `A`/`B` blocks (1-based) that hold each of their blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placements {
    pub gamma: Distribution,
    pub delta: Distribution,
    pub lambda: Distribution,
    pub x_arrow: Vec<usize>,
    pub a1: Vec<usize>,
    pub b1: Vec<usize>,
    pub y_arrow: Vec<usize>,
    pub a2: Vec<usize>,
    pub a3: Vec<usize>,
    pub z_arrow: Vec<usize>,
    pub b2: Vec<usize>,
    pub b3: Vec<usize>,
}

impl Placements {
    /// Block sizes grouped by arrow, in block order.
    pub fn multipartitions(&self, d: &MultiDegree) -> (Multipartition, Multipartition, Multipartition) {
        let group = |dist: &Distribution, arrows: &[usize], count: usize| {
            let mut groups = vec![Vec::new(); count];
            for (block, &k) in dist.blocks().iter().zip(arrows) {
                groups[k - 1].push(block.len());
            }
            Multipartition::new(groups).expect("blocks are non-empty")
        };
        let [dx, dy, dz] = d.arrows();
        (
            group(&self.gamma, &self.x_arrow, dx),
            group(&self.delta, &self.y_arrow, dy),
            group(&self.lambda, &self.z_arrow, dz),
        )
    }

    /// `|S_Γ| |S_Δ| |S_Λ|`.
    pub fn young_order(&self) -> BigUint {
        self.gamma.young_order() * self.delta.young_order() * self.lambda.young_order()
    }
}

// the single block of `outer` holding all of `block`
fn holder(outer: &Distribution, block: &[usize], what: &str) -> Result<usize, GeneratorError> {
    let first = outer.block_of(block[0])?;
    for &l in block {
        if outer.block_of(l)? != first {
            return Err(GeneratorError::NotAdmissible(format!("{what} block {block:?} is split")));
        }
    }
    Ok(first)
}

/// Placement data for the given `Γ, Δ, Λ`, or an error if one of their blocks
/// crosses an arrow or a block of `A` or `B`.
pub fn placements(quint: &Quintuple, gamma: &Distribution, delta: &Distribution, lambda: &Distribution) -> Result<Placements, GeneratorError> {
    let d = &quint.degree;
    let (t, r, s) = (d.total_t(), d.total_r(), d.total_s());
    let (tt, rr, ss) = d.distributions();
    for (name, dist, n) in [("Γ", gamma, t), ("Δ", delta, r), ("Λ", lambda, s)] {
        if dist.ground() != n {
            return Err(GeneratorError::NotAdmissible(format!("{name} must distribute [1, {n}]")));
        }
    }
    let shifted = |b: &[usize], by: usize| -> Vec<usize> { b.iter().map(|l| l + by).collect() };
    let mut out = Placements {
        gamma: gamma.clone(),
        delta: delta.clone(),
        lambda: lambda.clone(),
        x_arrow: vec![],
        a1: vec![],
        b1: vec![],
        y_arrow: vec![],
        a2: vec![],
        a3: vec![],
        z_arrow: vec![],
        b2: vec![],
        b3: vec![],
    };
    for block in gamma.blocks() {
        out.x_arrow.push(tt.slot(holder(&tt, block, "Γ")?));
        out.a1.push(holder(&quint.a, block, "Γ")?);
        out.b1.push(holder(&quint.b, block, "Γ")?);
    }
    for block in delta.blocks() {
        out.y_arrow.push(rr.slot(holder(&rr, block, "Δ")?));
        out.a2.push(holder(&quint.a, &shifted(block, t), "Δ")?);
        out.a3.push(holder(&quint.a, &shifted(block, t + r), "Δ")?);
    }
    for block in lambda.blocks() {
        out.z_arrow.push(ss.slot(holder(&ss, block, "Λ")?));
        out.b2.push(holder(&quint.b, &shifted(block, t), "Λ")?);
        out.b3.push(holder(&quint.b, &shifted(block, t + s), "Λ")?);
    }
    Ok(out)
}

/// The coarsest placements: `Γ = A′∩B′∩T`, `Δ = A″∩A‴∩R`, `Λ = B″∩B‴∩S`.
/// Components need not be intervals; they keep their actual positions.
pub fn maximal_placements(quint: &Quintuple) -> Result<Placements, GeneratorError> {
    let d = &quint.degree;
    let (t, r, s) = (d.total_t(), d.total_r(), d.total_s());
    let (tt, rr, ss) = d.distributions();
    let (a, b) = (&quint.a, &quint.b);
    let gamma = a.slice(1, t).intersect(&b.slice(1, t))?.intersect(&tt)?;
    let delta = a.slice(t + 1, t + r).intersect(&a.slice(t + r + 1, t + 2 * r))?.intersect(&rr)?;
    let lambda = b.slice(t + 1, t + s).intersect(&b.slice(t + s + 1, t + 2 * s))?.intersect(&ss)?;
    placements(quint, &gamma, &delta, &lambda)
}

/// `[X]_k`, `[Y]_k`, `[Z]_k`: one generic arrow matrix placed in a zero matrix
/// whose row and column blocks follow the blocks of `A` and `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrices {
    pub xs: Vec<Matrix<Poly>>,
    pub ys: Vec<Matrix<Poly>>,
    pub zs: Vec<Matrix<Poly>>,
}

fn offsets(d: &Distribution) -> Vec<usize> {
    let mut acc = 0;
    d.sizes()
        .into_iter()
        .map(|n| {
            let o = acc;
            acc += n;
            o
        })
        .collect()
}

pub fn build_block_matrices(zz: &ZigzagQuiver, quint: &Quintuple, pl: &Placements, field: Field) -> Result<BlockMatrices, GeneratorError> {
    let (rows, cols) = (quint.rows(), quint.cols());
    let (row_off, col_off) = (offsets(&quint.a), offsets(&quint.b));
    let (row_size, col_size) = (quint.a.sizes(), quint.b.sizes());
    let place = |family: Family, arrow: usize, (bi, bj): (usize, usize), side: (usize, usize), blocks: (&[usize], &[usize]), offs: (&[usize], &[usize])| {
        let (h, w) = (blocks.0[bi - 1], blocks.1[bj - 1]);
        let fa = zz.family(family)[arrow - 1];
        let (want_h, want_w) = match family {
            Family::X => (zz.n(fa.head), zz.m(fa.tail)),
            Family::Y => (zz.n(fa.head), zz.n(fa.tail)),
            Family::Z => (zz.m(fa.head), zz.m(fa.tail)),
        };
        if (h, w) != (want_h, want_w) {
            return Err(GeneratorError::NotAdmissible(format!(
                "block ({bi},{bj}) is {h}x{w}, arrow {}{arrow} is {want_h}x{want_w}",
                family.letter()
            )));
        }
        let (oi, oj) = (offs.0[bi - 1], offs.1[bj - 1]);
        Ok(Matrix::from_fn(side.0, side.1, |i, j| {
            if i >= oi && i < oi + h && j >= oj && j < oj + w {
                Poly::var(field, VarId::new(family, arrow, i - oi + 1, j - oj + 1))
            } else {
                Poly::zero(field)
            }
        }))
    };
    let xs = (0..pl.gamma.len())
        .map(|k| place(Family::X, pl.x_arrow[k], (pl.a1[k], pl.b1[k]), (rows, cols), (&row_size, &col_size), (&row_off, &col_off)))
        .collect::<Result<_, _>>()?;
    let ys = (0..pl.delta.len())
        .map(|k| place(Family::Y, pl.y_arrow[k], (pl.a2[k], pl.a3[k]), (rows, rows), (&row_size, &row_size), (&row_off, &row_off)))
        .collect::<Result<_, _>>()?;
    let zs = (0..pl.lambda.len())
        .map(|k| place(Family::Z, pl.z_arrow[k], (pl.b2[k], pl.b3[k]), (cols, cols), (&col_size, &col_size), (&col_off, &col_off)))
        .collect::<Result<_, _>>()?;
    Ok(BlockMatrices { xs, ys, zs })
}

/// `DP^{A,B}_{γ,δ,λ}` for explicit placements.
pub fn evaluate_placements(zz: &ZigzagQuiver, quint: &Quintuple, pl: &Placements, field: Field, cap: usize) -> Result<Poly, GeneratorError> {
    let m = build_block_matrices(zz, quint, pl, field)?;
    Ok(dp_distributed(&m.xs, &m.ys, &m.zs, &pl.gamma, &pl.delta, &pl.lambda, &Poly::one(field), cap)?)
}

/// `DP^{A,B}_{t̲,r̲,s̲}`, evaluated at the maximal placements. No sign is applied.
pub fn build_generator(zz: &ZigzagQuiver, quint: &Quintuple, field: Field, cap: usize) -> Result<Poly, GeneratorError> {
    let pl = maximal_placements(quint)?;
    evaluate_placements(zz, quint, &pl, field, cap)
}

/// `sgn(π₁π₂)`, where `π₁` sends point `l` of `A` to its row in the block
/// matrices, which is the start of its block plus its rank, and `π₂` does the
/// same for `B`.
pub fn block_sign(quint: &Quintuple) -> i32 {
    let rows = |d: &Distribution| -> Vec<usize> {
        let off = offsets(d);
        (1..=d.ground())
            .map(|l| off[d.block_of(l).unwrap() - 1] + d.pos_in_block(l).unwrap())
            .collect()
    };
    let p1 = Permutation::from_images(&rows(&quint.a)).expect("block rows form a bijection");
    let p2 = Permutation::from_images(&rows(&quint.b)).expect("block rows form a bijection");
    p1.sign() * p2.sign()
}

/// The signed monomial
/// `sgn(ρ₁ρ₂) ∏ x^{T|i|}_{A⟨ρ₁i⟩,B⟨ρ₂i⟩} ∏ y^{R|j|}_{A⟨ρ₁(t+j)⟩,A⟨ρ₁(t+r+j)⟩} ∏ z^{S|k|}_{B⟨ρ₂(t+k)⟩,B⟨ρ₂(t+s+k)⟩}`.
pub fn term(quint: &Quintuple, rho1: &Permutation, rho2: &Permutation, field: Field) -> Result<Poly, GeneratorError> {
    let d = &quint.degree;
    let (t, r, s) = (d.total_t(), d.total_r(), d.total_s());
    if rho1.len() != quint.rows() || rho2.len() != quint.cols() {
        return Err(CombinatoricsError::GroundMismatch {
            left: quint.rows(),
            right: rho1.len(),
        }
        .into());
    }
    let (tt, rr, ss) = d.distributions();
    let pa = |l: usize| quint.a.pos_in_block(rho1.apply(l));
    let pb = |l: usize| quint.b.pos_in_block(rho2.apply(l));
    let mut factors = Vec::with_capacity(t + r + s);
    for i in 1..=t {
        factors.push((VarId::x(tt.slot_of(i)?, pa(i)?, pb(i)?), 1));
    }
    for j in 1..=r {
        factors.push((VarId::y(rr.slot_of(j)?, pa(t + j)?, pa(t + r + j)?), 1));
    }
    for k in 1..=s {
        factors.push((VarId::z(ss.slot_of(k)?, pb(t + k)?, pb(t + s + k)?), 1));
    }
    let c = field.from_i64((rho1.sign() * rho2.sign()) as i64);
    Ok(Poly::term(Monomial::from_pairs(factors), c))
}

/// Every element of the Young subgroup `S_D`.
pub fn young_subgroup(d: &Distribution) -> Vec<Permutation> {
    let n = d.ground();
    let mut out = vec![(1..=n).collect::<Vec<usize>>()];
    for block in d.blocks() {
        let k = block.len();
        let mut next = Vec::new();
        for images in &out {
            for p in Permutation::all(k) {
                let mut im = images.clone();
                for (idx, &l) in block.iter().enumerate() {
                    im[l - 1] = block[p.apply(idx + 1) - 1];
                }
                next.push(im);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|im| Permutation::from_images(&im).expect("block permutations form a bijection"))
        .collect()
}

fn ratio(field: Field, num: &BigUint, den: &BigUint) -> Result<Scalar, GeneratorError> {
    let n = field.from_i64(num.to_i64().expect("small group order"));
    let d = field.from_i64(den.to_i64().expect("small group order"));
    Ok(n.checked_div(&d)?)
}

fn check_group_sum(quint: &Quintuple, cap: usize) -> Result<(), GeneratorError> {
    if quint.rows() > cap || quint.cols() > cap {
        return Err(crate::error::DpError::CapExceeded {
            rows: quint.rows(),
            cols: quint.cols(),
            cap,
            bound: (quint.a.young_order() * quint.b.young_order()).to_string(),
        }
        .into());
    }
    Ok(())
}

/// `sgn(π₁π₂)/(|S_Γ||S_Δ||S_Λ|) · Σ_{τ₁∈S_A} Σ_{τ₂∈S_B} F(τ₁, τ₂)` over the
/// rationals, at the given placements. Equals [`evaluate_placements`].
pub fn group_sum(quint: &Quintuple, pl: &Placements, cap: usize) -> Result<Poly, GeneratorError> {
    check_group_sum(quint, cap)?;
    let q = Field::Rational;
    let mut total = Poly::zero(q);
    let s_b = young_subgroup(&quint.b);
    for t1 in young_subgroup(&quint.a) {
        for t2 in &s_b {
            total.add_assign(&term(quint, &t1, t2, q)?);
        }
    }
    let scale = ratio(q, &BigUint::from(1u32), &pl.young_order())?;
    let scale = if block_sign(quint) < 0 { scale.neg_ref() } else { scale };
    Ok(total.scale(&scale))
}

/// The cross-check sum
/// `(1/c) Σ_{τ₁∈S_A} Σ_{τ₂∈S_B} Σ_{σ₁∈S_Γ} Σ_{σ₂∈S_Δ} Σ_{σ₃∈S_Λ} F(τ₁·(id,id,σ₂), τ₂·(σ₁,id,σ₃))`
/// with `c = |S_A ∩ (S_Γ×S_Δ×S_Δ)| · |S_B ∩ (S_Γ×S_Λ×S_Λ)|`. Rational only.
pub fn h_function(
    quint: &Quintuple,
    gamma: &Distribution,
    delta: &Distribution,
    lambda: &Distribution,
    field: Field,
    cap: usize,
) -> Result<Poly, GeneratorError> {
    if field != Field::Rational {
        return Err(GeneratorError::NeedsCharZero);
    }
    check_group_sum(quint, cap)?;
    let d = &quint.degree;
    let (t, r, s) = (d.total_t(), d.total_r(), d.total_s());
    for (name, dist, n) in [("Γ", gamma, t), ("Δ", delta, r), ("Λ", lambda, s)] {
        if dist.ground() != n {
            return Err(GeneratorError::NotAdmissible(format!("{name} must distribute [1, {n}]")));
        }
    }
    let rows_frame = Distribution::embed(&[(0, gamma), (t, delta), (t + r, delta)], t + 2 * r);
    let cols_frame = Distribution::embed(&[(0, gamma), (t, lambda), (t + s, lambda)], t + 2 * s);
    let c = quint.a.intersect(&rows_frame)?.young_order() * quint.b.intersect(&cols_frame)?.young_order();

    let id = |n: usize| Permutation::identity(n);
    let row_twists: Vec<Permutation> = young_subgroup(delta)
        .iter()
        .map(|s2| Permutation::direct_product(&[&id(t), &id(r), s2]))
        .collect();
    let mut col_twists = Vec::new();
    for s1 in young_subgroup(gamma) {
        for s3 in young_subgroup(lambda) {
            col_twists.push(Permutation::direct_product(&[&s1, &id(s), &s3]));
        }
    }
    let q = Field::Rational;
    let s_a = young_subgroup(&quint.a);
    let s_b = young_subgroup(&quint.b);
    let mut total = Poly::zero(q);
    for t1 in &s_a {
        let lefts: Vec<Permutation> = row_twists.iter().map(|w| t1.compose(w)).collect();
        for t2 in &s_b {
            for w2 in &col_twists {
                let right = t2.compose(w2);
                for left in &lefts {
                    total.add_assign(&term(quint, left, &right, q)?);
                }
            }
        }
    }
    Ok(total.scale(&ratio(q, &BigUint::from(1u32), &c)?))
}

/// `(p̲, −q̲)`.
pub fn relative_weight(quint: &Quintuple) -> Vec<i64> {
    quint.weight.relative()
}

/// One generator with the data that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorEntry {
    pub a: Vec<Vec<usize>>,
    pub b: Vec<Vec<usize>>,
    pub sign: i32,
    pub poly: Poly,
}

/// Generators for every admissible quintuple of `d`, in enumeration order.
pub fn generate_all(zz: &ZigzagQuiver, d: &MultiDegree, field: Field, cap: usize, limit: Option<usize>) -> Result<(Enumeration, Vec<GeneratorEntry>), GeneratorError> {
    let en = enumerate_quintuples(zz, d, limit)?;
    let one = |quint: &Quintuple| -> Result<GeneratorEntry, GeneratorError> {
        Ok(GeneratorEntry {
            a: quint.a.blocks().to_vec(),
            b: quint.b.blocks().to_vec(),
            sign: block_sign(quint),
            poly: build_generator(zz, quint, field, cap)?,
        })
    };
    #[cfg(feature = "parallel")]
    let entries = {
        use rayon::prelude::*;
        en.quintuples.par_iter().map(one).collect::<Result<Vec<_>, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let entries = en.quintuples.iter().map(one).collect::<Result<Vec<_>, _>>()?;
    Ok((en, entries))
}

/// Writes `({1,2},{3,4})`.
pub fn format_blocks(blocks: &[Vec<usize>]) -> String {
    let inner: Vec<String> = blocks
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("({})", inner.join(","))
}

/// Reads `({1,2},{3,4})`; the outer parentheses are optional.
pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>, String> {
    let body = text.trim();
    let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body).trim();
    let mut out = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let open = rest.strip_prefix('{').ok_or_else(|| format!("expected `{{` in {text:?}"))?;
        let (inner, after) = open.split_once('}').ok_or_else(|| format!("unclosed block in {text:?}"))?;
        let block = inner
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| v.parse::<usize>().map_err(|_| format!("bad point {v:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(block);
        rest = after.trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

pub const REPORT_HEADER: &str = "qsemi-generators v1";

/// The text form written by `generate` and read back by `verify`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    pub field: Field,
    pub degree: MultiDegree,
    pub weight: Option<AdmissibleWeight>,
    pub truncated: bool,
    pub entries: Vec<GeneratorEntry>,
}

impl GeneratorReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{REPORT_HEADER}\ncharacteristic {}\ndegree {}\n", self.field.characteristic(), self.degree);
        match &self.weight {
            Some(w) => out.push_str(&format!("weight {w}\n")),
            None => out.push_str("weight not admissible\n"),
        }
        out.push_str(&format!(
            "generators {} {}\n",
            self.entries.len(),
            if self.truncated { "truncated" } else { "complete" }
        ));
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "\n[generator {}]\nA {}\nB {}\nsign {:+}\npoly {}\n",
                i + 1,
                format_blocks(&e.a),
                format_blocks(&e.b),
                e.sign,
                e.poly
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some(REPORT_HEADER) {
            return Err(format!("missing `{REPORT_HEADER}` header"));
        }
        let mut field = None;
        let mut degree = None;
        let mut weight = None;
        let mut truncated = false;
        let mut entries = Vec::new();
        let mut current: Option<(Option<Vec<Vec<usize>>>, Option<Vec<Vec<usize>>>, Option<i32>)> = None;
        for line in lines {
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            let value = value.trim();
            match key {
                "characteristic" => {
                    let c: u64 = value.parse().map_err(|_| format!("bad characteristic {value:?}"))?;
                    field = Some(Field::from_characteristic(c).map_err(|e| e.to_string())?);
                }
                "degree" => degree = Some(value.parse::<MultiDegree>()?),
                "weight" => weight = parse_weight(value)?,
                "generators" => truncated = value.ends_with("truncated"),
                "[generator" => current = Some((None, None, None)),
                "A" | "B" | "sign" => {
                    let cur = current.as_mut().ok_or_else(|| format!("{key} outside a generator"))?;
                    match key {
                        "A" => cur.0 = Some(parse_blocks(value)?),
                        "B" => cur.1 = Some(parse_blocks(value)?),
                        _ => cur.2 = Some(value.parse().map_err(|_| format!("bad sign {value:?}"))?),
                    }
                }
                "poly" => {
                    let (a, b, sign) = current.take().ok_or("poly outside a generator")?;
                    let poly = Poly::parse(value).map_err(|e| e.to_string())?;
                    entries.push(GeneratorEntry {
                        a: a.ok_or("generator without A")?,
                        b: b.ok_or("generator without B")?,
                        sign: sign.ok_or("generator without sign")?,
                        poly,
                    });
                }
                other => return Err(format!("unknown report line {other:?}")),
            }
        }
        Ok(Self {
            field: field.ok_or("missing characteristic")?,
            degree: degree.ok_or("missing degree")?,
            weight,
            truncated,
            entries,
        })
    }
}

fn parse_weight(value: &str) -> Result<Option<AdmissibleWeight>, String> {
    if value == "not admissible" {
        return Ok(None);
    }
    let list = |part: &str, key: &str| -> Result<Vec<usize>, String> {
        let inner = part
            .strip_prefix(key)
            .and_then(|p| p.strip_prefix("=("))
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| format!("bad weight {value:?}"))?;
        inner
            .split(',')
            .filter(|v| !v.is_empty())
            .map(|v| v.trim().parse::<usize>().map_err(|_| format!("bad weight entry {v:?}")))
            .collect()
    };
    let (p, q) = value.split_once(' ').ok_or_else(|| format!("bad weight {value:?}"))?;
    Ok(Some(AdmissibleWeight {
        p: list(p, "p")?,
        q: list(q.trim(), "q")?,
    }))
}
