//! Matrices acting on the algebra, derivation spaces, Hermitian spectra and subspaces.

use alloc::vec::Vec;

use nalgebra::linalg::SymmetricEigen;

use crate::error::{Error, Result};
use crate::tensor::{evaluate_unchecked, inf_act_matrix, Bracket};
use crate::{CMatrix, CVector, C64};

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

/// Hermitian certification threshold, relative to `‖A‖`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A complex `n × n` matrix acting on `ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(CMatrix);

impl LinearMap {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if let Some(index) = matrix.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(LinearMap(matrix))
    }

    pub fn identity(n: usize) -> Self {
        LinearMap(CMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        LinearMap(CMatrix::zeros(n, n))
    }

    /// Real diagonal map.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let v = CVector::from_iterator(diag.len(), diag.iter().map(|&d| C64::new(d, 0.0)));
        LinearMap(CMatrix::from_diagonal(&v))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> LinearMap {
        LinearMap(self.0.adjoint())
    }

    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(&self.0 * x)
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap(&self.0 * &other.0)
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        LinearMap(&self.0 - &other.0)
    }

    pub fn scale(&self, s: C64) -> LinearMap {
        LinearMap(&self.0 * s)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &LinearMap) -> LinearMap {
        LinearMap(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Frobenius norm, the norm of the trace form `tr AB*`.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `tr(A B*)`.
    pub fn trace_pairing(&self, other: &LinearMap) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b.conj()).sum()
    }

    /// Certifies `‖A − A*‖ < 1e−12·‖A‖` and returns the exactly symmetrized map.
    pub fn into_hermitian(self) -> Result<HermitianMap> {
        let defect = (&self.0 - self.0.adjoint()).norm();
        let scale = self.0.norm();
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { defect: defect / scale });
        }
        let sym = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        Ok(HermitianMap(LinearMap(sym)))
    }
}

/// A [`LinearMap`] certified Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMap(LinearMap);

impl HermitianMap {
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        HermitianMap(LinearMap(sym))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        HermitianMap(LinearMap::from_diagonal(diag))
    }

    pub fn as_map(&self) -> &LinearMap {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> HermitianMap {
        HermitianMap(self.0.scale(C64::new(s, 0.0)))
    }

    pub fn shift(&self, s: f64) -> HermitianMap {
        let n = self.dim();
        HermitianMap(self.0.add(&LinearMap::identity(n).scale(C64::new(s, 0.0))))
    }
}

/// Orthonormal columns spanning a subspace of `ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: CMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: CMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: CMatrix::identity(n, n) }
    }

    /// Orthonormal span of the columns of `vectors`.
    pub fn span(vectors: &CMatrix) -> Self {
        Subspace { ambient: vectors.nrows(), basis: orthonormal_span(vectors) }
    }

    pub(crate) fn from_orthonormal(basis: CMatrix) -> Self {
        Subspace { ambient: basis.nrows(), basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.basis.column(i).into_owned()
    }

    /// `‖v − P v‖` for the orthogonal projector `P`.
    pub fn distance(&self, v: &CVector) -> f64 {
        if self.rank() == 0 {
            return v.norm();
        }
        let coeffs = self.basis.adjoint() * v;
        (v - &self.basis * coeffs).norm()
    }

    /// Largest distance of a unit basis vector of `other` from `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        (0..other.rank()).map(|i| self.distance(&other.vector(i))).fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        self.containment_residual(other) <= tol
    }

    /// Span of both subspaces.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let n = self.ambient;
        let mut m = CMatrix::zeros(n, self.rank() + other.rank());
        m.columns_mut(0, self.rank()).copy_from(&self.basis);
        m.columns_mut(self.rank(), other.rank()).copy_from(&other.basis);
        Subspace::span(&m)
    }
}

/// `L_x(y) = μ(x, y)`, i.e. `(L_x)_kj = Σ_i x_i c_ij^k`.
pub fn left_op(mu: &Bracket, x: &CVector) -> Result<LinearMap> {
    let n = mu.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    Ok(LinearMap(CMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * mu.get(i, j, k)).sum())))
}

/// `R_x(y) = μ(y, x)`, i.e. `(R_x)_ki = Σ_j c_ij^k x_j`.
pub fn right_op(mu: &Bracket, x: &CVector) -> Result<LinearMap> {
    let n = mu.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    Ok(LinearMap(CMatrix::from_fn(n, n, |k, i| (0..n).map(|j| mu.get(i, j, k) * x[j]).sum())))
}

pub(crate) fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Matrix of `A ↦ A.μ` from `ℂ^{n²}` (index `a·n + b` for `E_ab`) to `ℂ^{n³}`.
pub(crate) fn derivation_operator(mu: &Bracket) -> CMatrix {
    let n = mu.dim();
    let mut k = CMatrix::zeros(n * n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let mut e = CMatrix::zeros(n, n);
            e[(a, b)] = C64::new(1.0, 0.0);
            let col = inf_act_matrix(&e, mu);
            for (r, v) in col.coeffs().iter().enumerate() {
                k[(r, a * n + b)] = *v;
            }
        }
    }
    k
}

/// Orthonormal basis (trace form) of `Der(μ) = {A : A.μ = 0}`, taking every right-singular
/// direction with singular value `≤ tol·‖μ‖`.
pub fn derivation_space(mu: &Bracket, tol: f64) -> Vec<LinearMap> {
    let n = mu.dim();
    let k = derivation_operator(mu);
    let threshold = tol * mu.norm();
    let svd = k.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut out = Vec::new();
    for (idx, s) in svd.singular_values.iter().enumerate() {
        if *s <= threshold {
            let row = v_t.row(idx);
            out.push(LinearMap(CMatrix::from_fn(n, n, |a, b| row[a * n + b].conj())));
        }
    }
    out
}

/// Eigenvalues in ascending order with a unitary matrix of eigenvectors.
pub fn hermitian_eigen(h: &HermitianMap) -> (Vec<f64>, LinearMap) {
    let eig = SymmetricEigen::new(h.matrix().clone());
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut u = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        u.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, LinearMap(u))
}

/// Orthonormal span of `{μ(u, w) : u ∈ U, w ∈ W}`.
pub fn subspace_product(mu: &Bracket, u: &Subspace, w: &Subspace) -> Result<Subspace> {
    let n = mu.dim();
    for s in [u, w] {
        if s.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.ambient() });
        }
    }
    if u.rank() == 0 || w.rank() == 0 {
        return Ok(Subspace::zero(n));
    }
    let mut images = CMatrix::zeros(n, u.rank() * w.rank());
    for a in 0..u.rank() {
        for b in 0..w.rank() {
            let p = evaluate_unchecked(mu, &u.vector(a), &w.vector(b));
            images.set_column(a * w.rank() + b, &p);
        }
    }
    // images of unit vectors are bounded by ‖μ‖, so noise is measured against it
    Ok(Subspace::from_orthonormal(span_above(&images, RANK_TOL * mu.norm())))
}

/// Orthonormal basis of the column span using [`RANK_TOL`] relative to the largest singular value.
pub(crate) fn orthonormal_span(vectors: &CMatrix) -> CMatrix {
    let smax = if vectors.is_empty() { 0.0 } else { vectors.clone().singular_values().max() };
    let scale = if smax > f64::EPSILON { smax } else { 1.0 };
    span_above(vectors, RANK_TOL * scale)
}

/// Left singular vectors with singular value above `threshold`.
fn span_above(vectors: &CMatrix, threshold: f64) -> CMatrix {
    let n = vectors.nrows();
    if vectors.ncols() == 0 || n == 0 {
        return CMatrix::zeros(n, 0);
    }
    let svd = vectors.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > threshold).collect();
    let mut out = CMatrix::zeros(n, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &u.column(src));
    }
    out
}

/// Orthonormal basis of `{x : K x = 0}`, singular values `≤ rel·s_max` counting as zero.
pub(crate) fn nullspace_rel(k: &CMatrix, rel: f64) -> CMatrix {
    let p = k.ncols();
    if k.nrows() == 0 {
        return CMatrix::identity(p, p);
    }
    // pad to at least as many rows as columns so V is complete
    let padded = if k.nrows() < p {
        let mut m = CMatrix::zeros(p, p);
        m.rows_mut(0, k.nrows()).copy_from(k);
        m
    } else {
        k.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let scale = if smax > f64::EPSILON { smax } else { 1.0 };
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= rel * scale).collect();
    let mut out = CMatrix::zeros(p, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        for r in 0..p {
            out[(r, dst)] = v_t[(src, r)].conj();
        }
    }
    out
}

/// Ratio of extreme singular values; infinite for singular input.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = m.singular_values();
    let smax = s.iter().copied().fold(0.0, f64::max);
    let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Matrix exponential by scaling and squaring of a Taylor polynomial.
pub fn exp_map(a: &LinearMap) -> LinearMap {
    LinearMap(expm(a.matrix()))
}

pub(crate) fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = a.norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * C64::new(scale, 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &x * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if term.norm() <= f64::EPSILON * 1e-3 * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Groups ascending values into runs whose consecutive gaps are `≤ gap`.
/// Returns `(mean, start, len)` per run.
pub(crate) fn clusters(sorted: &[f64], gap: f64) -> Vec<(f64, usize, usize)> {
    let mut out: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        match out.last_mut() {
            Some((sum, start, len)) if v - sorted[*start + *len - 1] <= gap => {
                *sum += v;
                *len += 1;
            }
            _ => out.push((v, i, 1)),
        }
    }
    for c in &mut out {
        c.0 /= c.2 as f64;
    }
    out
}
