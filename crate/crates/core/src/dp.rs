//! The determinant/pfaffian mixture `DP_{r,s}(X, Y, Z)` and its partial linearizations.
//!
//! Everything is an integral sum over one representative per coset, so the
//! same code is valid in every characteristic. The evaluator walks the
//! representatives depth first and drops a branch as soon as it meets a zero
//! entry, which is what keeps sparse block matrices cheap.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinatorics::{dp_coset_reps, factorial, sign_of, Distribution, Multipartition, Permutation};
use crate::error::DpError;
use crate::matrix::Matrix;
use crate::ring::RingElem;
use crate::scalar::{Field, Scalar};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default bound on `t+2r` and `t+2s`.
pub const DEFAULT_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DpShape {
    pub t: usize,
    pub r: usize,
    pub s: usize,
}

impl DpShape {
    pub fn new(t: usize, r: usize, s: usize) -> Self {
        Self { t, r, s }
    }

    /// `t + 2r`.
    pub fn rows(&self) -> usize {
        self.t + 2 * self.r
    }

    /// `t + 2s`.
    pub fn cols(&self) -> usize {
        self.t + 2 * self.s
    }

    pub fn is_trivial(&self) -> bool {
        self.t == 0 && self.r == 0 && self.s == 0
    }

    /// Number of coset representatives for single-block `Γ, Δ, Λ`.
    pub fn coset_count(&self) -> BigUint {
        factorial(self.rows()) * factorial(self.cols())
            / (factorial(self.t) * factorial(self.r) * factorial(self.s))
    }

    fn check_cap(&self, cap: usize) -> Result<(), DpError> {
        if self.rows() > cap || self.cols() > cap {
            return Err(DpError::CapExceeded {
                rows: self.rows(),
                cols: self.cols(),
                cap,
                bound: self.coset_count().to_string(),
            });
        }
        Ok(())
    }
}

fn check_shape<R: Clone>(what: &str, m: &Matrix<R>, rows: usize, cols: usize) -> Result<(), DpError> {
    if (m.rows(), m.cols()) != (rows, cols) {
        return Err(DpError::Shape(format!(
            "{what} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Step {
    // position i (0-based) of the determinant part
    X { pos: usize, mat: usize, prev: Option<usize> },
    // pfaffian factor j of Y: rows t+j and t+r+j
    Y { j: usize, mat: usize, prev: Option<usize> },
    Z { k: usize, mat: usize, prev: Option<usize> },
}

struct Kernel<'a, R> {
    t: usize,
    r: usize,
    s: usize,
    xs: &'a [Matrix<R>],
    ys: &'a [Matrix<R>],
    zs: &'a [Matrix<R>],
    steps: Vec<Step>,
}

#[derive(Clone)]
struct State {
    sigma: Vec<usize>,
    tau: Vec<usize>,
    used_rows: u64,
    used_cols: u64,
}

// previous member of the block containing `l` (0-based), per block of `d`
fn predecessors(d: &Distribution) -> Vec<(usize, Option<usize>)> {
    let mut out = vec![(0, None); d.ground()];
    for (b, block) in d.blocks().iter().enumerate() {
        for (rank, &l) in block.iter().enumerate() {
            out[l - 1] = (b, if rank == 0 { None } else { Some(block[rank - 1] - 1) });
        }
    }
    out
}

impl<'a, R: RingElem> Kernel<'a, R> {
    fn new(
        xs: &'a [Matrix<R>],
        ys: &'a [Matrix<R>],
        zs: &'a [Matrix<R>],
        gamma: &Distribution,
        delta: &Distribution,
        lambda: &Distribution,
    ) -> Self {
        let mut steps = Vec::new();
        for (pos, (mat, prev)) in predecessors(gamma).into_iter().enumerate() {
            steps.push(Step::X { pos, mat, prev });
        }
        for (j, (mat, prev)) in predecessors(delta).into_iter().enumerate() {
            steps.push(Step::Y { j, mat, prev });
        }
        for (k, (mat, prev)) in predecessors(lambda).into_iter().enumerate() {
            steps.push(Step::Z { k, mat, prev });
        }
        Self {
            t: gamma.ground(),
            r: delta.ground(),
            s: lambda.ground(),
            xs,
            ys,
            zs,
            steps,
        }
    }

    fn rows(&self) -> usize {
        self.t + 2 * self.r
    }

    fn cols(&self) -> usize {
        self.t + 2 * self.s
    }

    fn initial_state(&self) -> State {
        State {
            sigma: vec![usize::MAX; self.rows()],
            tau: vec![usize::MAX; self.cols()],
            used_rows: 0,
            used_cols: 0,
        }
    }

    /// Every admissible choice at `step`: the state after it and the entry it multiplies by.
    fn choices(&self, step: usize, st: &State, mut visit: impl FnMut(State, &R)) {
        let free = |used: u64, v: usize| used & (1 << v) == 0;
        match self.steps[step] {
            Step::X { pos, mat, prev } => {
                let low = prev.map_or(0, |p| st.tau[p] + 1);
                let m = &self.xs[mat];
                for a in (0..self.rows()).filter(|&a| free(st.used_rows, a)) {
                    for b in (low..self.cols()).filter(|&b| free(st.used_cols, b)) {
                        let e = m.get(a, b);
                        if e.is_zero() {
                            continue;
                        }
                        let mut next = st.clone();
                        next.sigma[pos] = a;
                        next.tau[pos] = b;
                        next.used_rows |= 1 << a;
                        next.used_cols |= 1 << b;
                        visit(next, e);
                    }
                }
            }
            Step::Y { j, mat, prev } => {
                let (p, q) = (self.t + j, self.t + self.r + j);
                let low = prev.map_or(0, |i| st.sigma[self.t + i] + 1);
                let m = &self.ys[mat];
                for a in (low..self.rows()).filter(|&a| free(st.used_rows, a)) {
                    for b in (0..self.rows()).filter(|&b| b != a && free(st.used_rows, b)) {
                        let e = m.get(a, b);
                        if e.is_zero() {
                            continue;
                        }
                        let mut next = st.clone();
                        next.sigma[p] = a;
                        next.sigma[q] = b;
                        next.used_rows |= (1 << a) | (1 << b);
                        visit(next, e);
                    }
                }
            }
            Step::Z { k, mat, prev } => {
                let (p, q) = (self.t + k, self.t + self.s + k);
                let low = prev.map_or(0, |i| st.tau[self.t + i] + 1);
                let m = &self.zs[mat];
                for a in (low..self.cols()).filter(|&a| free(st.used_cols, a)) {
                    for b in (0..self.cols()).filter(|&b| b != a && free(st.used_cols, b)) {
                        let e = m.get(a, b);
                        if e.is_zero() {
                            continue;
                        }
                        let mut next = st.clone();
                        next.tau[p] = a;
                        next.tau[q] = b;
                        next.used_cols |= (1 << a) | (1 << b);
                        visit(next, e);
                    }
                }
            }
        }
    }

    fn descend(&self, step: usize, st: State, acc: R, out: &mut R) {
        if step == self.steps.len() {
            if sign_of(&st.sigma) * sign_of(&st.tau) > 0 {
                out.add_assign_ref(&acc);
            } else {
                *out = out.sub_ref(&acc);
            }
            return;
        }
        self.choices(step, &st, |next, e| {
            let acc = acc.mul_ref(e);
            if !acc.is_zero() {
                self.descend(step + 1, next, acc, out);
            }
        });
    }

    fn run(&self, one: &R) -> R {
        let zero = one.zero_like();
        if self.steps.is_empty() {
            return one.clone();
        }
        let mut firsts = Vec::new();
        self.choices(0, &self.initial_state(), |next, e| firsts.push((next, e.clone())));
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            if self.steps.len() > 3 {
                return firsts
                    .into_par_iter()
                    .map(|(st, e)| {
                        let mut out = zero.clone();
                        self.descend(1, st, one.mul_ref(&e), &mut out);
                        out
                    })
                    .reduce(|| zero.clone(), |a, b| a.add_ref(&b));
            }
        }
        let mut out = zero;
        for (st, e) in firsts {
            self.descend(1, st, one.mul_ref(&e), &mut out);
        }
        out
    }
}

/// Checks the argument lists against `Γ, Δ, Λ`: one matrix per block, all of the common shape.
fn check_inputs<R: Clone>(
    xs: &[Matrix<R>],
    ys: &[Matrix<R>],
    zs: &[Matrix<R>],
    gamma: &Distribution,
    delta: &Distribution,
    lambda: &Distribution,
) -> Result<DpShape, DpError> {
    let shape = DpShape::new(gamma.ground(), delta.ground(), lambda.ground());
    let (rows, cols) = (shape.rows(), shape.cols());
    for (name, list, d) in [("X", xs, gamma), ("Y", ys, delta), ("Z", zs, lambda)] {
        if list.len() != d.len() {
            return Err(DpError::Shape(format!(
                "{} {name} matrices for {} blocks",
                list.len(),
                d.len()
            )));
        }
    }
    for (i, m) in xs.iter().enumerate() {
        check_shape(&format!("X{}", i + 1), m, rows, cols)?;
    }
    for (i, m) in ys.iter().enumerate() {
        check_shape(&format!("Y{}", i + 1), m, rows, rows)?;
    }
    for (i, m) in zs.iter().enumerate() {
        check_shape(&format!("Z{}", i + 1), m, cols, cols)?;
    }
    if rows > 64 || cols > 64 {
        return Err(DpError::Shape("at most 64 rows and columns are supported".into()));
    }
    Ok(shape)
}

/// The coset sum with position-dependent matrices: position `i` of the
/// determinant part reads the `X` of the `Γ`-block holding `i`, and likewise
/// for `Y` with `Δ` and `Z` with `Λ`. Representatives are taken modulo
/// `S_Γ × S_Δ × S_Λ`. With single blocks this is `DP_{r,s}` itself; with
/// arbitrary blocks it is the coefficient extracted by partial linearization.
/// Here `t = r = s = 0` gives the empty product.
pub fn dp_distributed<R: RingElem>(
    xs: &[Matrix<R>],
    ys: &[Matrix<R>],
    zs: &[Matrix<R>],
    gamma: &Distribution,
    delta: &Distribution,
    lambda: &Distribution,
    one: &R,
    cap: usize,
) -> Result<R, DpError> {
    let shape = check_inputs(xs, ys, zs, gamma, delta, lambda)?;
    shape.check_cap(cap)?;
    Ok(Kernel::new(xs, ys, zs, gamma, delta, lambda).run(one))
}

/// Same sum as [`dp_distributed`], walking the full representative stream without pruning.
pub fn dp_distributed_unpruned<R: RingElem>(
    xs: &[Matrix<R>],
    ys: &[Matrix<R>],
    zs: &[Matrix<R>],
    gamma: &Distribution,
    delta: &Distribution,
    lambda: &Distribution,
    one: &R,
) -> Result<R, DpError> {
    let DpShape { t, r, s } = check_inputs(xs, ys, zs, gamma, delta, lambda)?;
    let mut out = one.zero_like();
    for (sigma, tau) in dp_coset_reps(gamma, delta, lambda) {
        let (sg, tg) = (sigma.zero_based(), tau.zero_based());
        let mut term = one.clone();
        for i in 0..t {
            term = term.mul_ref(xs[gamma.owner0(i).0].get(sg[i], tg[i]));
        }
        for j in 0..r {
            term = term.mul_ref(ys[delta.owner0(j).0].get(sg[t + j], sg[t + r + j]));
        }
        for k in 0..s {
            term = term.mul_ref(zs[lambda.owner0(k).0].get(tg[t + k], tg[t + s + k]));
        }
        if sigma.sign() * tau.sign() > 0 {
            out.add_assign_ref(&term);
        } else {
            out = out.sub_ref(&term);
        }
    }
    Ok(out)
}

fn single_block(n: usize) -> Distribution {
    if n == 0 {
        Distribution::singletons(0)
    } else {
        Distribution::determined(&[n])
    }
}

/// `DP_{r,s}(X, Y, Z)`, with the default cap.
pub fn dp_eval<R: RingElem>(x: &Matrix<R>, y: &Matrix<R>, z: &Matrix<R>, shape: DpShape, one: &R) -> Result<R, DpError> {
    dp_eval_capped(x, y, z, shape, one, DEFAULT_CAP)
}

/// `DP_{r,s}(X, Y, Z)`. Zero when `t = r = s = 0`.
pub fn dp_eval_capped<R: RingElem>(
    x: &Matrix<R>,
    y: &Matrix<R>,
    z: &Matrix<R>,
    shape: DpShape,
    one: &R,
    cap: usize,
) -> Result<R, DpError> {
    // a factor that does not occur may have any shape
    if shape.t > 0 {
        check_shape("X", x, shape.rows(), shape.cols())?;
    }
    if shape.r > 0 {
        check_shape("Y", y, shape.rows(), shape.rows())?;
    }
    if shape.s > 0 {
        check_shape("Z", z, shape.cols(), shape.cols())?;
    }
    if shape.is_trivial() {
        return Ok(one.zero_like());
    }
    let pick = |m: &Matrix<R>, n: usize| if n == 0 { vec![] } else { vec![m.clone()] };
    dp_distributed(
        &pick(x, shape.t),
        &pick(y, shape.r),
        &pick(z, shape.s),
        &single_block(shape.t),
        &single_block(shape.r),
        &single_block(shape.s),
        one,
        cap,
    )
}

/// The coefficient of `x₁^{γ₁}⋯z_w^{λ_w}` in `DP(Σ xᵢXᵢ, Σ yⱼYⱼ, Σ z_kZ_k)`,
/// one matrix per part of `γ`, `δ`, `λ` (parts read in flattened order).
pub fn dp_multilinear<R: RingElem>(
    xs: &[Matrix<R>],
    ys: &[Matrix<R>],
    zs: &[Matrix<R>],
    gamma: &Multipartition,
    delta: &Multipartition,
    lambda: &Multipartition,
    one: &R,
) -> Result<R, DpError> {
    let g = Distribution::determined(&gamma.flattened());
    let d = Distribution::determined(&delta.flattened());
    let l = Distribution::determined(&lambda.flattened());
    if g.ground() + d.ground() + l.ground() == 0 {
        check_inputs(xs, ys, zs, &g, &d, &l)?;
        return Ok(one.zero_like());
    }
    dp_distributed(xs, ys, zs, &g, &d, &l, one, DEFAULT_CAP)
}

/// `P(Y) = Σ_{σ ∈ S_{2r}/diag(S_r×S_r)} sgn(σ) ∏ y_{σ(k),σ(k+r)}`; `1` for the empty matrix.
pub fn generalized_pfaffian<R: RingElem>(y: &Matrix<R>, one: &R) -> Result<R, DpError> {
    if !y.is_square() || y.rows() % 2 == 1 {
        return Err(DpError::Shape(format!("P needs an even square matrix, got {}x{}", y.rows(), y.cols())));
    }
    let r = y.rows() / 2;
    let ys = if r == 0 { vec![] } else { vec![y.clone()] };
    let empty: Vec<Matrix<R>> = Vec::new();
    dp_distributed(&empty, &ys, &empty, &single_block(0), &single_block(r), &single_block(0), one, DEFAULT_CAP)
}

fn check_skew<R: RingElem>(c: &Matrix<R>) -> Result<(), DpError> {
    if !c.is_square() || c.rows() % 2 == 1 {
        return Err(DpError::Shape(format!("pf needs an even square matrix, got {}x{}", c.rows(), c.cols())));
    }
    for i in 0..c.rows() {
        for j in i..c.rows() {
            if !c.get(i, j).add_ref(c.get(j, i)).is_zero() {
                return Err(DpError::Shape(format!("entries ({}, {}) and ({}, {}) are not opposite", i + 1, j + 1, j + 1, i + 1)));
            }
        }
    }
    Ok(())
}

/// `Σ sgn(σ) ∏ c_{σ(2k−1),σ(2k)}` over all `σ ∈ S_{2r}` with `σ(2k−1) < σ(2k)`.
/// Pairs are not identified up to order, so this is `r!` times [`matching_pfaffian`].
pub fn classical_pfaffian<R: RingElem>(c: &Matrix<R>, one: &R) -> Result<R, DpError> {
    check_skew(c)?;
    let n = c.rows();
    let mut out = one.zero_like();
    let mut images = vec![0; n];
    let mut used = vec![false; n];
    fn walk<R: RingElem>(c: &Matrix<R>, k: usize, images: &mut [usize], used: &mut [bool], acc: R, out: &mut R) {
        let n = images.len();
        if 2 * k == n {
            if sign_of(images) > 0 {
                out.add_assign_ref(&acc);
            } else {
                *out = out.sub_ref(&acc);
            }
            return;
        }
        for a in 0..n {
            if used[a] {
                continue;
            }
            for b in a + 1..n {
                if used[b] || c.get(a, b).is_zero() {
                    continue;
                }
                used[a] = true;
                used[b] = true;
                images[2 * k] = a;
                images[2 * k + 1] = b;
                walk(c, k + 1, images, used, acc.mul_ref(c.get(a, b)), out);
                used[a] = false;
                used[b] = false;
            }
        }
    }
    walk(c, 0, &mut images, &mut used, one.clone(), &mut out);
    Ok(out)
}

/// The pfaffian as a sum over perfect matchings, so that `pf(C)² = det(C)`.
pub fn matching_pfaffian<R: RingElem>(c: &Matrix<R>, one: &R) -> Result<R, DpError> {
    check_skew(c)?;
    let rest: Vec<usize> = (0..c.rows()).collect();
    Ok(expand_matching(c, &rest, one))
}

// expansion along the first remaining index
fn expand_matching<R: RingElem>(c: &Matrix<R>, rest: &[usize], one: &R) -> R {
    if rest.is_empty() {
        return one.clone();
    }
    let a = rest[0];
    let mut out = one.zero_like();
    for (pos, &b) in rest.iter().enumerate().skip(1) {
        let e = c.get(a, b);
        if e.is_zero() {
            continue;
        }
        let remaining: Vec<usize> = rest[1..].iter().copied().filter(|&v| v != b).collect();
        let term = e.mul_ref(&expand_matching(c, &remaining, one));
        if pos % 2 == 1 {
            out.add_assign_ref(&term);
        } else {
            out = out.sub_ref(&term);
        }
    }
    out
}

/// `(1/t!r!s!) Σ_{σ,τ}` over the full symmetric groups, over the rationals.
/// Reference implementation; factorial in both sizes.
pub fn dp_full_sum(x: &Matrix<Scalar>, y: &Matrix<Scalar>, z: &Matrix<Scalar>, shape: DpShape) -> Result<Scalar, DpError> {
    let xs = if shape.t == 0 { vec![] } else { vec![x.clone()] };
    let ys = if shape.r == 0 { vec![] } else { vec![y.clone()] };
    let zs = if shape.s == 0 { vec![] } else { vec![z.clone()] };
    if shape.is_trivial() {
        return Ok(Field::Rational.zero());
    }
    full_sum_distributed(&xs, &ys, &zs, &single_block(shape.t), &single_block(shape.r), &single_block(shape.s))
}

/// `(1/|S_Γ||S_Δ||S_Λ|) Σ_{σ,τ}` over the full symmetric groups, over the rationals.
pub fn full_sum_distributed(
    xs: &[Matrix<Scalar>],
    ys: &[Matrix<Scalar>],
    zs: &[Matrix<Scalar>],
    gamma: &Distribution,
    delta: &Distribution,
    lambda: &Distribution,
) -> Result<Scalar, DpError> {
    let DpShape { t, r, s } = check_inputs(xs, ys, zs, gamma, delta, lambda)?;
    let q = Field::Rational;
    let mut total = q.zero();
    let taus: Vec<Permutation> = Permutation::all(t + 2 * s).collect();
    for sigma in Permutation::all(t + 2 * r) {
        let sg = sigma.images();
        let mut row_part = q.one();
        for j in 0..r {
            row_part = &row_part * ys[delta.owner0(j).0].get(sg[t + j] - 1, sg[t + r + j] - 1);
        }
        if row_part.is_zero() {
            continue;
        }
        for tau in &taus {
            let tg = tau.images();
            let mut term = row_part.clone();
            for i in 0..t {
                term = &term * xs[gamma.owner0(i).0].get(sg[i] - 1, tg[i] - 1);
            }
            for k in 0..s {
                term = &term * zs[lambda.owner0(k).0].get(tg[t + k] - 1, tg[t + s + k] - 1);
            }
            if sigma.sign() * tau.sign() > 0 {
                total = &total + &term;
            } else {
                total = &total - &term;
            }
        }
    }
    let order = gamma.young_order() * delta.young_order() * lambda.young_order();
    let order = q.from_i64(order.to_i64().expect("small group order"));
    total.checked_div(&order).map_err(|e| DpError::Shape(e.to_string()))
}

/// One identity that failed on one random instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub identity: &'static str,
    pub trial: usize,
    pub lhs: String,
    pub rhs: String,
    pub inputs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub shape: DpShape,
    pub field: Field,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<IdentityFailure>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_integer_matrix(field: Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix<Scalar> {
    Matrix::from_fn(rows, cols, |_, _| field.from_i64(rng.gen_range(-5..=5)))
}

fn random_invertible(field: Field, n: usize, rng: &mut impl Rng) -> Matrix<Scalar> {
    loop {
        let g = random_integer_matrix(field, n, n, rng);
        if !g.det(field).is_zero() {
            return g;
        }
    }
}

/// Checks, on random integer instances of `shape`:
/// `DP_{s,r}(Xᵀ,Z,Y) = DP_{r,s}(X,Y,Z)`, the transpose signs `(−1)^r` and `(−1)^s`,
/// `DP(gX, gYgᵀ, Z) = det(g)·DP` and `DP(Xh, Y, hᵀZh) = det(h)·DP`.
pub fn dp_property_suite(shape: DpShape, field: Field, trials: usize, seed: u64) -> Result<PropertyReport, DpError> {
    if shape.is_trivial() {
        return Err(DpError::Shape("the identities are not checked at t = r = s = 0".into()));
    }
    shape.check_cap(DEFAULT_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = field.one();
    let (n, m) = (shape.rows(), shape.cols());
    let swapped = DpShape::new(shape.t, shape.s, shape.r);
    let mut report = PropertyReport {
        shape,
        field,
        trials,
        checks: 0,
        failures: Vec::new(),
    };
    let parity = |k: usize| if k % 2 == 0 { field.one() } else { field.from_i64(-1) };
    for trial in 0..trials {
        let x = random_integer_matrix(field, n, m, &mut rng);
        let y = random_integer_matrix(field, n, n, &mut rng);
        let z = random_integer_matrix(field, m, m, &mut rng);
        let g = random_invertible(field, n, &mut rng);
        let h = random_invertible(field, m, &mut rng);
        let base = dp_eval(&x, &y, &z, shape, &one)?;
        let cases = [
            ("1a", dp_eval(&x.transpose(), &z, &y, swapped, &one)?, base.clone()),
            ("1b-Y", dp_eval(&x, &y.transpose(), &z, shape, &one)?, &parity(shape.r) * &base),
            ("1b-Z", dp_eval(&x, &y, &z.transpose(), shape, &one)?, &parity(shape.s) * &base),
            ("2a", dp_eval(&g.mul(&x), &g.mul(&y).mul(&g.transpose()), &z, shape, &one)?, &g.det(field) * &base),
            ("2b", dp_eval(&x.mul(&h), &y, &h.transpose().mul(&z).mul(&h), shape, &one)?, &h.det(field) * &base),
        ];
        for (identity, lhs, rhs) in cases {
            report.checks += 1;
            if lhs != rhs {
                report.failures.push(IdentityFailure {
                    identity,
                    trial,
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    inputs: format!("X={x} Y={y} Z={z} g={g} h={h}"),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Family, Poly};
    use crate::scalar::MERSENNE_31;

    fn random(field: Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<Scalar> {
        Matrix::from_fn(rows, cols, |_, _| field.from_i64(rng.gen_range(-4..=4)))
    }

    #[test]
    fn small_pfaffians() {
        let q = Field::Rational;
        let one = q.one();
        let y = Matrix::from_i64(q, &[vec![0, 5], vec![3, 0]]);
        assert_eq!(generalized_pfaffian(&y, &one).unwrap(), q.from_i64(2));
        let j = Matrix::from_i64(q, &[vec![0, 1], vec![-1, 0]]);
        assert_eq!(generalized_pfaffian(&j, &one).unwrap(), q.from_i64(2));
        assert_eq!(classical_pfaffian(&j, &one).unwrap(), q.one());
        assert_eq!(matching_pfaffian(&j, &one).unwrap(), q.one());
        let a = 3;
        let block = Matrix::from_i64(
            q,
            &[vec![0, a, 0, 0], vec![-a, 0, 0, 0], vec![0, 0, 0, a], vec![0, 0, -a, 0]],
        );
        assert_eq!(matching_pfaffian(&block, &one).unwrap(), q.from_i64(a * a));
        assert_eq!(classical_pfaffian(&block, &one).unwrap(), q.from_i64(2 * a * a));
        assert!(classical_pfaffian(&y, &one).is_err());
        assert!(generalized_pfaffian(&Matrix::from_i64(q, &[vec![1, 2, 3]]), &one).is_err());
        assert_eq!(generalized_pfaffian(&Matrix::<Scalar>::filled(0, 0, q.zero()), &one).unwrap(), q.one());
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let q = Field::Rational;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 4, 6] {
            let a = random(q, n, n, &mut rng);
            let c = a.sub(&a.transpose());
            let pf = matching_pfaffian(&c, &q.one()).unwrap();
            assert_eq!(&pf * &pf, c.det(q));
        }
    }

    #[test]
    fn pfaffian_of_antisymmetrization() {
        let q = Field::Rational;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for r in 1..=3usize {
            let y = random(q, 2 * r, 2 * r, &mut rng);
            let lhs = classical_pfaffian(&y.sub(&y.transpose()), &q.one()).unwrap();
            let sign = if (r * (r - 1) / 2) % 2 == 0 { 1 } else { -1 };
            let fact = (1..=r as i64).product::<i64>();
            let rhs = &q.from_i64(sign * fact) * &generalized_pfaffian(&y, &q.one()).unwrap();
            assert_eq!(lhs, rhs, "r = {r}");
        }
    }

    #[test]
    fn determinant_and_trivial_corner() {
        let q = Field::Rational;
        let one = q.one();
        let id = Matrix::identity(3, &one);
        let e = Matrix::<Scalar>::filled(0, 0, q.zero());
        assert_eq!(dp_eval(&id, &e, &e, DpShape::new(3, 0, 0), &one).unwrap(), one);
        assert_eq!(dp_eval(&e, &e, &e, DpShape::new(0, 0, 0), &one).unwrap(), q.zero());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random(q, 4, 4, &mut rng);
        assert_eq!(dp_eval(&x, &e, &e, DpShape::new(4, 0, 0), &one).unwrap(), x.det(q));
        let y = random(q, 2, 2, &mut rng);
        let z = random(q, 2, 2, &mut rng);
        let x0 = Matrix::<Scalar>::filled(2, 2, q.zero());
        let lhs = dp_eval(&x0, &y, &z, DpShape::new(0, 1, 1), &one).unwrap();
        let rhs = &generalized_pfaffian(&y, &one).unwrap() * &generalized_pfaffian(&z, &one).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn column_example_matches_full_sum() {
        let q = Field::Rational;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = Matrix::from_i64(q, &[vec![1], vec![0], vec![0]]);
        let y = random(q, 3, 3, &mut rng);
        let z = Matrix::from_i64(q, &[vec![1]]);
        let shape = DpShape::new(1, 1, 0);
        assert_eq!(dp_eval(&x, &y, &z, shape, &q.one()).unwrap(), dp_full_sum(&x, &y, &z, shape).unwrap());
    }

    #[test]
    fn shape_errors() {
        let q = Field::Rational;
        let x = Matrix::from_i64(q, &[vec![1, 2]]);
        let e = Matrix::<Scalar>::filled(0, 0, q.zero());
        assert!(matches!(dp_eval(&x, &e, &e, DpShape::new(1, 0, 0), &q.one()), Err(DpError::Shape(_))));
        let big = Matrix::identity(11, &q.one());
        assert!(matches!(
            dp_eval(&big, &e, &e, DpShape::new(11, 0, 0), &q.one()),
            Err(DpError::CapExceeded { .. })
        ));
    }

    #[test]
    fn multilinear_examples() {
        let q = Field::Rational;
        let one = q.one();
        let id = Matrix::identity(2, &one);
        let none = Multipartition::new(vec![]).unwrap();
        let g = Multipartition::new(vec![vec![1, 1]]).unwrap();
        let v = dp_multilinear(&[id.clone(), id.clone()], &[], &[], &g, &none, &none, &one).unwrap();
        assert_eq!(v, q.from_i64(2));
        // coefficient of u·v in det(uA + vB) for 2×2: a11 b22 + a22 b11 − a12 b21 − a21 b12
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random(q, 2, 2, &mut rng);
        let b = random(q, 2, 2, &mut rng);
        let expected = &(&(a.get(0, 0) * b.get(1, 1)) + &(a.get(1, 1) * b.get(0, 0)))
            - &(&(a.get(0, 1) * b.get(1, 0)) + &(a.get(1, 0) * b.get(0, 1)));
        let v = dp_multilinear(&[a.clone(), b.clone()], &[], &[], &g, &none, &none, &one).unwrap();
        assert_eq!(v, expected);
        let whole = Multipartition::new(vec![vec![2]]).unwrap();
        assert_eq!(dp_multilinear(&[a.clone()], &[], &[], &whole, &none, &none, &one).unwrap(), a.det(q));
    }

    #[test]
    fn symmetry_and_equivariance_identities_hold() {
        for shape in [DpShape::new(2, 1, 0), DpShape::new(0, 1, 1), DpShape::new(1, 1, 1)] {
            for field in [Field::Rational, Field::Prime(MERSENNE_31)] {
                let report = dp_property_suite(shape, field, 5, 11).unwrap();
                assert!(report.passed(), "{:?}", report.failures);
                assert_eq!(report.checks, 25);
            }
        }
    }

    #[test]
    fn determinant_factor_is_exact() {
        let q = Field::Rational;
        let one = q.one();
        let shape = DpShape::new(1, 1, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Matrix::from_i64(q, &[vec![5, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let x = random(q, 3, 1, &mut rng);
        let y = random(q, 3, 3, &mut rng);
        let z = Matrix::from_i64(q, &[vec![1]]);
        let base = dp_eval(&x, &y, &z, shape, &one).unwrap();
        let moved = dp_eval(&g.mul(&x), &g.mul(&y).mul(&g.transpose()), &z, shape, &one).unwrap();
        assert_eq!(moved, &q.from_i64(5) * &base);
    }

    #[test]
    fn pruned_and_unpruned_agree_on_polynomials() {
        let f = Field::Prime(MERSENNE_31);
        let one = Poly::one(f);
        let (t, r, s) = (1, 1, 1);
        let x = Matrix::generic(f, Family::X, 1, t + 2 * r, t + 2 * s);
        let mut y = Matrix::generic(f, Family::Y, 1, t + 2 * r, t + 2 * r);
        y.set(0, 2, Poly::zero(f));
        let z = Matrix::generic(f, Family::Z, 1, t + 2 * s, t + 2 * s);
        let (g, d, l) = (single_block(t), single_block(r), single_block(s));
        let a = dp_distributed(&[x.clone()], &[y.clone()], &[z.clone()], &g, &d, &l, &one, DEFAULT_CAP).unwrap();
        let b = dp_distributed_unpruned(&[x], &[y], &[z], &g, &d, &l, &one).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }
}
