//! Moment map and the functional `F_n = ‖m‖²` on complex Leibniz algebras.
//!
//! Brackets are structure-constant tensors in an orthonormal basis of `ℂⁿ`.
//! The crate computes `M_μ`, certifies critical points through the decomposition
//! `M_μ = c_μ I + D_μ` with `D_μ` a derivation, extracts integer critical types,
//! descends `F` inside a `GL(n)`-orbit, checks the structure of critical points,
//! and assembles critical points of higher dimension from smaller ones.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]
// `!(x < y)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod catalog;
pub mod error;
pub mod extensions;
pub mod flow;
pub mod linalg;
pub mod moment;
pub mod random;
pub mod rational;
pub mod structure;
pub mod tensor;

pub use nalgebra::Complex;

/// Complex scalar.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
pub(crate) type RMatrix = nalgebra::DMatrix<f64>;

pub use error::{Clause, Error, Result};
pub use linalg::{
    derivation_space, exp_map, hermitian_eigen, left_op, right_op, subspace_product, HermitianMap, LinearMap, Subspace,
};
pub use moment::{
    critical_type, critical_value_formula, criticality_decompose, functional_value, moment_matrix, CriticalType,
    MomentReport,
};
pub use tensor::{check_identities, direct_sum, evaluate, gl_act, inf_act, inner_product, Bracket, IdentityReport};
