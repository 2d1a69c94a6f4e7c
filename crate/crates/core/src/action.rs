//! Group elements (one matrix per φ-orbit) and their action on coordinates.
//!
//! A representation transforms as `g·H = G_head H G_tail⁻¹`, where `G_u = g_o`
//! for a plain vertex of orbit `o` and `(g_o⁻¹)ᵀ` for a dual one. Polynomials
//! transform by `(g·f)(H) = f(g⁻¹·H)`, so on the generic matrix of an arrow
//! `g·X = G_head⁻¹ X G_tail`. That substitution is what [`GroupElement::act`] returns.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::QuiverError;
use crate::matrix::Matrix;
use crate::poly::{Poly, VarId};
use crate::quiver::{Alpha, CoordinateSystem};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Every factor has determinant one.
    Special,
    /// Arbitrary invertible factors.
    General,
    /// Invertible diagonal factors.
    Torus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    field: Field,
    factors: Vec<Matrix<Scalar>>,
}

impl GroupElement {
    /// Fails if some factor is not square or not invertible.
    pub fn new(field: Field, factors: Vec<Matrix<Scalar>>) -> Result<Self, QuiverError> {
        for (i, g) in factors.iter().enumerate() {
            if !g.is_square() {
                return Err(QuiverError::Dimension(format!("factor {} is not square", i + 1)));
            }
            if g.det(field).is_zero() {
                return Err(QuiverError::Dimension(format!("factor {} is singular", i + 1)));
            }
        }
        Ok(Self { field, factors })
    }

    pub fn identity(field: Field, dims: &[usize]) -> Self {
        Self {
            field,
            factors: dims.iter().map(|&n| Matrix::identity(n, &field.one())).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn factors(&self) -> &[Matrix<Scalar>] {
        &self.factors
    }

    pub fn determinants(&self) -> Vec<Scalar> {
        self.factors.iter().map(|g| g.det(self.field)).collect()
    }

    pub fn is_special(&self) -> bool {
        self.determinants().iter().all(Scalar::is_one)
    }

    pub fn inverse(&self) -> Self {
        Self {
            field: self.field,
            factors: self
                .factors
                .iter()
                .map(|g| g.inverse(self.field).expect("group elements are invertible"))
                .collect(),
        }
    }

    /// Factorwise product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            field: self.field,
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    fn check_dims(&self, coords: &CoordinateSystem) -> Result<(), QuiverError> {
        let dims: Vec<usize> = self.factors.iter().map(Matrix::rows).collect();
        if dims != coords.orbit_dims {
            return Err(QuiverError::Dimension(format!(
                "group factors have sizes {dims:?}, orbits need {:?}",
                coords.orbit_dims
            )));
        }
        Ok(())
    }

    /// The substitution `v ↦ (g·X)_ij` for every coordinate variable.
    pub fn act(&self, coords: &CoordinateSystem) -> Result<HashMap<VarId, Poly>, QuiverError> {
        self.check_dims(coords)?;
        let inverses: Vec<Matrix<Scalar>> = self
            .factors
            .iter()
            .map(|g| g.inverse(self.field).expect("invertible"))
            .collect();
        let mut table = HashMap::new();
        for a in &coords.arrows {
            let (ho, ha) = a.head;
            let (to, ta) = a.tail;
            // left factor G_head⁻¹, right factor G_tail
            let left = match ha {
                Alpha::Plain => inverses[ho].clone(),
                Alpha::Dual => self.factors[ho].transpose(),
            };
            let right = match ta {
                Alpha::Plain => self.factors[to].clone(),
                Alpha::Dual => inverses[to].transpose(),
            };
            for i in 0..a.rows {
                for j in 0..a.cols {
                    let mut image = Poly::zero(self.field);
                    for p in 0..a.rows {
                        let l = left.get(i, p);
                        if l.is_zero() {
                            continue;
                        }
                        for q in 0..a.cols {
                            let c = l * right.get(q, j);
                            if !c.is_zero() {
                                image.add_assign(&Poly::var(self.field, VarId::new(a.family, a.index, p + 1, q + 1)).scale(&c));
                            }
                        }
                    }
                    table.insert(VarId::new(a.family, a.index, i + 1, j + 1), image);
                }
            }
        }
        Ok(table)
    }

    /// `g·f`, which is `f(g⁻¹·H)`.
    pub fn transform(&self, f: &Poly, coords: &CoordinateSystem) -> Result<Poly, QuiverError> {
        let table = self.act(coords)?;
        f.substitute_linear(&table).map_err(|e| QuiverError::Dimension(e.to_string()))
    }

    /// `f(g·H)`.
    pub fn pull_back(&self, f: &Poly, coords: &CoordinateSystem) -> Result<Poly, QuiverError> {
        self.inverse().transform(f, coords)
    }

    /// `g·H` for numeric matrices given in the order of `coords.arrows`.
    pub fn act_on_point(&self, coords: &CoordinateSystem, point: &[Matrix<Scalar>]) -> Result<Vec<Matrix<Scalar>>, QuiverError> {
        self.check_dims(coords)?;
        if point.len() != coords.arrows.len() {
            return Err(QuiverError::Dimension(format!("{} matrices for {} arrows", point.len(), coords.arrows.len())));
        }
        let side = |(o, alpha): (usize, Alpha)| -> Matrix<Scalar> {
            match alpha {
                Alpha::Plain => self.factors[o].clone(),
                Alpha::Dual => self.factors[o].inverse(self.field).expect("invertible").transpose(),
            }
        };
        coords
            .arrows
            .iter()
            .zip(point)
            .map(|(a, m)| {
                if (m.rows(), m.cols()) != (a.rows, a.cols) {
                    return Err(QuiverError::Dimension(format!("arrow {:?} needs a {}x{} matrix", a.id, a.rows, a.cols)));
                }
                let right = side(a.tail).inverse(self.field).expect("invertible");
                Ok(side(a.head).mul(m).mul(&right))
            })
            .collect()
    }
}

const SAMPLE_ATTEMPTS: usize = 64;

fn random_scalar(field: Field, rng: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-6..=6)),
        Field::Prime(p) => Scalar::Modular {
            value: rng.gen_range(0..p),
            modulus: p,
        },
    }
}

fn random_nonzero(field: Field, rng: &mut impl Rng) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random group element for orbits of the given dimensions.
pub fn sample_with_rng(
    field: Field,
    dims: &[usize],
    mode: SampleMode,
    rng: &mut impl Rng,
) -> Result<GroupElement, QuiverError> {
    let mut factors = Vec::with_capacity(dims.len());
    for &n in dims {
        let g = match mode {
            SampleMode::Torus => Matrix::from_fn(n, n, |i, j| if i == j { random_nonzero(field, rng) } else { field.zero() }),
            SampleMode::General | SampleMode::Special => {
                let mut found = None;
                for _ in 0..SAMPLE_ATTEMPTS {
                    let g = Matrix::from_fn(n, n, |_, _| random_scalar(field, rng));
                    let det = g.det(field);
                    if det.is_zero() {
                        continue;
                    }
                    if mode == SampleMode::General {
                        found = Some(g);
                        break;
                    }
                    // rescale the first column so the determinant becomes exactly 1
                    let scale = det.inv().expect("non-zero");
                    let mut g = g;
                    for i in 0..n {
                        let v = g.get(i, 0) * &scale;
                        g.set(i, 0, v);
                    }
                    found = Some(g);
                    break;
                }
                found.ok_or(QuiverError::SingularSample(SAMPLE_ATTEMPTS))?
            }
        };
        factors.push(g);
    }
    Ok(GroupElement { field, factors })
}

/// Deterministic in `seed`.
pub fn sample_group_element(field: Field, dims: &[usize], mode: SampleMode, seed: u64) -> Result<GroupElement, QuiverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(field, dims, mode, &mut rng)
}
