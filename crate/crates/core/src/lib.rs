//! Semi-invariants of mixed quiver representations.
//!
//! The crate builds the spanning polynomials of the semi-invariant algebra of
//! a mixed quiver as explicit sparse polynomials: a determinant/pfaffian
//! mixture evaluated on block matrices, indexed by admissible block data.
//! Quivers that are not already zigzag are first rewritten into one, and the
//! results can be checked against the group action and a brute-force
//! invariant-space oracle.

pub mod action;
pub mod combinatorics;
pub mod degree;
pub mod dp;
pub mod error;
pub mod generator;
pub mod matrix;
pub mod poly;
pub mod quiver;
pub mod reduction;
pub mod ring;
pub mod scalar;
pub mod verify;

pub use action::{sample_group_element, GroupElement, SampleMode};
pub use combinatorics::{Distribution, Multipartition, Permutation};
pub use degree::MultiDegree;
pub use dp::{dp_eval, dp_multilinear, generalized_pfaffian, DpShape};
pub use error::{CombinatoricsError, DpError, GeneratorError, PolyError, QuiverError, VerifyError};
pub use generator::{
    build_generator, enumerate_quintuples, relative_weight, solve_admissible, AdmissibleWeight, GeneratorReport, Quintuple,
};
pub use matrix::Matrix;
pub use poly::{Family, Monomial, Poly, VarId};
pub use quiver::{classify_zigzag, MixedQuiver, ZigzagQuiver};
pub use reduction::{reduce, ReductionMap};
pub use ring::RingElem;
pub use scalar::{Field, Scalar};
pub use verify::{check_invariance, check_weight, oracle_dimension, spanning_check, OracleMethod, OracleReport, Verdict};
