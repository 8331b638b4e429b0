//! Structure-constant tensors, the `GL(n)` action and algebraic identities.
//!
//! A [`Bracket`] stores `c[i][j][k]` with `μ(e_i, e_j) = Σ_k c[i][j][k] e_k`
//! in a fixed orthonormal basis of `ℂⁿ`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::linalg::{condition_number, LinearMap};
use crate::{CMatrix, CVector, C64};

/// Largest condition number accepted by [`gl_act`].
pub const MAX_CONDITION: f64 = 1e12;

/// Default absolute tolerance of [`check_identities`] on the normalized bracket.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    dim: usize,
    coeffs: Vec<C64>,
}

impl Bracket {
    /// Builds a bracket from `n³` coefficients in `(i, j, k)` row-major order.
    pub fn new(dim: usize, coeffs: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if coeffs.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: coeffs.len() });
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Bracket { dim, coeffs })
    }

    /// The abelian bracket on `ℂⁿ`.
    ///
    /// # Panics
    /// If `dim == 0`.
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "bracket dimension must be positive");
        Bracket { dim, coeffs: vec![C64::new(0.0, 0.0); dim * dim * dim] }
    }

    /// Builds a bracket from zero-based `(i, j, k, value)` entries; repeated keys add up.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, C64)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); dim * dim * dim];
        for &(i, j, k, v) in entries {
            let worst = i.max(j).max(k);
            if worst >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: worst + 1 });
            }
            coeffs[(i * dim + j) * dim + k] += v;
        }
        Bracket::new(dim, coeffs)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> C64) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    coeffs.push(f(i, j, k));
                }
            }
        }
        Bracket::new(dim, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.coeffs[(i * self.dim + j) * self.dim + k]
    }

    /// `μ(e_i, e_j)` as a vector.
    pub fn product(&self, i: usize, j: usize) -> CVector {
        let n = self.dim;
        let base = (i * n + j) * n;
        CVector::from_column_slice(&self.coeffs[base..base + n])
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn scaled(&self, s: C64) -> Bracket {
        Bracket { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// The same bracket rescaled to unit norm.
    pub fn normalized(&self) -> Result<Bracket> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroBracket);
        }
        Ok(self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    /// The opposite bracket `μ^op(x, y) = μ(y, x)`.
    pub fn opposite(&self) -> Bracket {
        let n = self.dim;
        Bracket::from_fn(n, |i, j, k| self.get(j, i, k)).expect("same shape")
    }

    /// Restriction to the span of the orthonormal columns of `basis`, written in that basis.
    ///
    /// Components of products leaving the span are dropped; callers check closure separately.
    pub fn restrict(&self, basis: &CMatrix) -> Result<Bracket> {
        if basis.nrows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: basis.nrows() });
        }
        let r = basis.ncols();
        if r == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut coeffs = Vec::with_capacity(r * r * r);
        let adj = basis.adjoint();
        for a in 0..r {
            for b in 0..r {
                let p = evaluate_unchecked(self, &basis.column(a).into_owned(), &basis.column(b).into_owned());
                let local = &adj * p;
                coeffs.extend(local.iter().copied());
            }
        }
        Bracket::new(r, coeffs)
    }

    /// Euclidean distance between coefficient arrays.
    pub fn distance(&self, other: &Bracket) -> Result<f64> {
        Ok((self - other)?.norm())
    }
}

impl Sub for &Bracket {
    type Output = Result<Bracket>;
    fn sub(self, rhs: &Bracket) -> Result<Bracket> {
        same_dim(self, rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(Bracket { dim: self.dim, coeffs })
    }
}

impl Add for &Bracket {
    type Output = Result<Bracket>;
    fn add(self, rhs: &Bracket) -> Result<Bracket> {
        same_dim(self, rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(Bracket { dim: self.dim, coeffs })
    }
}

fn same_dim(a: &Bracket, b: &Bracket) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    Ok(())
}

fn check_len(mu: &Bracket, len: usize) -> Result<()> {
    if len != mu.dim {
        return Err(Error::DimensionMismatch { expected: mu.dim, found: len });
    }
    Ok(())
}

/// `μ(x, y) = Σ x_i y_j c_ij^k e_k`.
pub fn evaluate(mu: &Bracket, x: &CVector, y: &CVector) -> Result<CVector> {
    check_len(mu, x.len())?;
    check_len(mu, y.len())?;
    Ok(evaluate_unchecked(mu, x, y))
}

pub(crate) fn evaluate_unchecked(mu: &Bracket, x: &CVector, y: &CVector) -> CVector {
    let n = mu.dim;
    let mut out = CVector::zeros(n);
    for i in 0..n {
        if x[i] == C64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..n {
            let w = x[i] * y[j];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            let base = (i * n + j) * n;
            for k in 0..n {
                out[k] += w * mu.coeffs[base + k];
            }
        }
    }
    out
}

/// `g.μ(x, y) = g μ(g⁻¹x, g⁻¹y)`.
pub fn gl_act(g: &LinearMap, mu: &Bracket) -> Result<Bracket> {
    check_len(mu, g.dim())?;
    let condition = condition_number(g.matrix());
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let gi = g.matrix().clone().try_inverse().ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    Ok(transform(mu, g.matrix(), &gi))
}

/// `out_ij^k = Σ g_kc c_ab^c gi_ai gi_bj`, three successive contractions.
pub(crate) fn transform(mu: &Bracket, g: &CMatrix, gi: &CMatrix) -> Bracket {
    let n = mu.dim;
    let zero = C64::new(0.0, 0.0);
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut t1 = vec![zero; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = mu.coeffs[idx(a, b, c)];
                if v == zero {
                    continue;
                }
                for j in 0..n {
                    t1[idx(a, j, c)] += gi[(b, j)] * v;
                }
            }
        }
    }
    let mut t2 = vec![zero; n * n * n];
    for a in 0..n {
        for i in 0..n {
            let w = gi[(a, i)];
            if w == zero {
                continue;
            }
            for j in 0..n {
                for c in 0..n {
                    t2[idx(i, j, c)] += w * t1[idx(a, j, c)];
                }
            }
        }
    }
    let mut out = vec![zero; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = zero;
                for c in 0..n {
                    s += g[(k, c)] * t2[idx(i, j, c)];
                }
                out[idx(i, j, k)] = s;
            }
        }
    }
    Bracket { dim: n, coeffs: out }
}

/// `A.μ(x, y) = Aμ(x, y) − μ(Ax, y) − μ(x, Ay)`.
pub fn inf_act(a: &LinearMap, mu: &Bracket) -> Result<Bracket> {
    check_len(mu, a.dim())?;
    Ok(inf_act_matrix(a.matrix(), mu))
}

pub(crate) fn inf_act_matrix(a: &CMatrix, mu: &Bracket) -> Bracket {
    let n = mu.dim;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut out = vec![C64::new(0.0, 0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..n {
                    s += a[(k, c)] * mu.coeffs[idx(i, j, c)];
                    s -= a[(c, i)] * mu.coeffs[idx(c, j, k)];
                    s -= a[(c, j)] * mu.coeffs[idx(i, c, k)];
                }
                out[idx(i, j, k)] = s;
            }
        }
    }
    Bracket { dim: n, coeffs: out }
}

/// `⟨μ, λ⟩ = Σ c^μ conj(c^λ)`.
pub fn inner_product(mu: &Bracket, lambda: &Bracket) -> Result<C64> {
    same_dim(mu, lambda)?;
    Ok(mu.coeffs.iter().zip(&lambda.coeffs).map(|(a, b)| a * b.conj()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub left_residual: f64,
    pub right_residual: f64,
    pub anticommutativity_residual: f64,
    pub jacobi_residual: f64,
    pub is_left_leibniz: bool,
    pub is_right_leibniz: bool,
    pub is_symmetric_leibniz: bool,
    pub is_lie: bool,
}

/// Raw identity residuals, as maxima over basis triples, without normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Residuals {
    pub left: f64,
    pub right: f64,
    pub anti: f64,
    pub jacobi: f64,
}

pub(crate) fn identity_residuals(mu: &Bracket) -> Residuals {
    let n = mu.dim;
    let prods: Vec<CVector> = (0..n * n).map(|ij| mu.product(ij / n, ij % n)).collect();
    let p = |i: usize, j: usize| &prods[i * n + j];
    let lmul = |a: usize, v: &CVector| {
        let mut out = CVector::zeros(n);
        for m in 0..n {
            if v[m] != C64::new(0.0, 0.0) {
                out += p(a, m) * v[m];
            }
        }
        out
    };
    let rmul = |v: &CVector, b: usize| {
        let mut out = CVector::zeros(n);
        for m in 0..n {
            if v[m] != C64::new(0.0, 0.0) {
                out += p(m, b) * v[m];
            }
        }
        out
    };
    let mut r = Residuals { left: 0.0, right: 0.0, anti: 0.0, jacobi: 0.0 };
    for x in 0..n {
        for y in 0..n {
            r.anti = r.anti.max((p(x, y) + p(y, x)).norm());
            for z in 0..n {
                let x_yz = lmul(x, p(y, z));
                let xy_z = rmul(p(x, y), z);
                let y_xz = lmul(y, p(x, z));
                let xz_y = rmul(p(x, z), y);
                let y_zx = lmul(y, p(z, x));
                let z_xy = lmul(z, p(x, y));
                r.left = r.left.max((&x_yz - &xy_z - &y_xz).norm());
                r.right = r.right.max((&xy_z - &xz_y - &x_yz).norm());
                r.jacobi = r.jacobi.max((&x_yz + &y_zx + &z_xy).norm());
            }
        }
    }
    r
}

/// Residuals of the left/right Leibniz, anticommutativity and Jacobi identities
/// on the unit-norm rescaling of `μ`.
pub fn check_identities(mu: &Bracket, tol: f64) -> IdentityReport {
    let r = match mu.normalized() {
        Ok(unit) => identity_residuals(&unit),
        Err(_) => Residuals { left: 0.0, right: 0.0, anti: 0.0, jacobi: 0.0 },
    };
    let is_left_leibniz = r.left <= tol;
    let is_right_leibniz = r.right <= tol;
    let is_symmetric_leibniz = is_left_leibniz && is_right_leibniz;
    IdentityReport {
        left_residual: r.left,
        right_residual: r.right,
        anticommutativity_residual: r.anti,
        jacobi_residual: r.jacobi,
        is_left_leibniz,
        is_right_leibniz,
        is_symmetric_leibniz,
        is_lie: is_symmetric_leibniz && r.anti <= tol && r.jacobi <= tol,
    }
}

/// Block bracket on `ℂ^{n1+n2}`.
pub fn direct_sum(mu1: &Bracket, mu2: &Bracket) -> Bracket {
    let (n1, n2) = (mu1.dim, mu2.dim);
    let n = n1 + n2;
    Bracket::from_fn(n, |i, j, k| {
        if i < n1 && j < n1 && k < n1 {
            mu1.get(i, j, k)
        } else if i >= n1 && j >= n1 && k >= n1 {
            mu2.get(i - n1, j - n1, k - n1)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .expect("finite blocks")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn lie2() -> Bracket {
        Bracket::from_entries(2, &[(0, 1, 1, c(1.0)), (1, 0, 1, c(-1.0))]).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Bracket::new(0, vec![]), Err(Error::EmptyDimension));
        assert!(matches!(Bracket::new(2, vec![c(0.0); 7]), Err(Error::DimensionMismatch { .. })));
        let mut v = vec![c(0.0); 8];
        v[3] = C64::new(f64::NAN, 0.0);
        assert_eq!(Bracket::new(2, v), Err(Error::NonFinite { index: 3 }));
    }

    #[test]
    fn evaluate_lie2() {
        let mu = lie2();
        let e1 = CVector::from_vec(vec![c(1.0), c(0.0)]);
        let e2 = CVector::from_vec(vec![c(0.0), c(1.0)]);
        assert_eq!(evaluate(&mu, &e1, &e2).unwrap(), e2);
        assert_eq!(evaluate(&mu, &e1, &CVector::zeros(2)).unwrap(), CVector::zeros(2));
        assert!(evaluate(&mu, &CVector::zeros(3), &e2).is_err());
    }

    #[test]
    fn inf_act_identity_is_minus_mu() {
        let mu = lie2();
        let out = inf_act(&LinearMap::identity(2), &mu).unwrap();
        assert!(out.distance(&mu.scaled(c(-1.0))).unwrap() < 1e-15);
    }

    #[test]
    fn opposite_is_involution() {
        let mu = Bracket::from_entries(2, &[(0, 1, 1, c(1.0))]).unwrap();
        assert_eq!(mu.opposite().opposite(), mu);
        assert_eq!(mu.opposite().get(1, 0, 1), c(1.0));
    }
}
