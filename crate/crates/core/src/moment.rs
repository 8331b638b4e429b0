//! The moment matrix `M_μ`, the functional `F = ‖m‖²`, criticality and critical types.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{clusters, derivation_operator, hermitian_eigen, HermitianMap, LinearMap};
use crate::rational::{best_rational, gcd, lcm};
use crate::tensor::{inf_act_matrix, inner_product, Bracket};
use crate::{CMatrix, RMatrix, C64};

/// Default criticality tolerance (normalized tangent residual).
pub const CRITICAL_TOL: f64 = 1e-8;
/// Default rational-reconstruction tolerance.
pub const TYPE_TOL: f64 = 1e-6;
/// Default largest denominator in rational reconstruction.
pub const MAX_DENOMINATOR: u64 = 100;

/// `M = 2Σ L_i L_i* − 2Σ L_i* L_i − 2Σ R_i* R_i` over an orthonormal basis.
pub fn moment_matrix(mu: &Bracket) -> HermitianMap {
    let n = mu.dim();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let l = CMatrix::from_fn(n, n, |k, j| mu.get(i, j, k));
        let r = CMatrix::from_fn(n, n, |k, j| mu.get(j, i, k));
        let la = l.adjoint();
        m += (&l * &la - &la * &l - r.adjoint() * &r) * C64::new(2.0, 0.0);
    }
    HermitianMap::from_matrix_unchecked(m)
}

/// `F(μ) = tr M_μ² / ‖μ‖⁴`.
pub fn functional_value(mu: &Bracket) -> Result<f64> {
    let ns = mu.norm_sq();
    if ns == 0.0 {
        return Err(Error::ZeroBracket);
    }
    let m = moment_matrix(mu);
    Ok(m.norm() * m.norm() / (ns * ns))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub m: HermitianMap,
    pub norm_sq: f64,
    pub f: f64,
    pub c: f64,
    pub d: HermitianMap,
    /// Distance from `M` to `ℝI + (Der(μ) ∩ Herm)`, relative to `‖M‖`.
    pub residual_decomp: f64,
    /// Component of `M.μ` orthogonal to `μ`, relative to `‖M‖‖μ‖`.
    pub residual_tangent: f64,
    /// `‖D.μ‖ / ‖μ‖`.
    pub derivation_defect: f64,
    pub is_critical: bool,
}

impl MomentReport {
    /// `m([μ]) = M / ‖μ‖²`.
    pub fn moment(&self) -> HermitianMap {
        self.m.scale(1.0 / self.norm_sq)
    }

    /// Spectrum of `m([μ])`, ascending.
    pub fn moment_spectrum(&self) -> Vec<f64> {
        hermitian_eigen(&self.moment()).0
    }

    /// Critical type of `D / ‖μ‖²`, which does not depend on the scale of `μ`.
    pub fn critical_type(&self, tol: f64, max_den: u64) -> Result<CriticalType> {
        critical_type(&self.d.scale(1.0 / self.norm_sq), tol, max_den)
    }
}

/// Tangential part of `M.μ`, its relative size, and `M`, `F` for a nonzero bracket.
pub(crate) struct Tangent {
    pub m: HermitianMap,
    pub f: f64,
    pub direction: Bracket,
    pub residual: f64,
}

pub(crate) fn tangent(mu: &Bracket) -> Result<Tangent> {
    let ns = mu.norm_sq();
    if ns == 0.0 {
        return Err(Error::ZeroBracket);
    }
    let m = moment_matrix(mu);
    let mnorm = m.norm();
    let v = inf_act_matrix(m.matrix(), mu);
    let along = inner_product(&v, mu)? / ns;
    let direction = (&v - &mu.scaled(along))?;
    let residual = direction.norm() / (mnorm * libm::sqrt(ns));
    Ok(Tangent { f: mnorm * mnorm / (ns * ns), m, direction, residual })
}

/// Real orthonormal basis of `Der(μ) ∩ Herm(n)`, singular threshold `tol·‖μ‖`.
pub(crate) fn hermitian_derivations(mu: &Bracket, tol: f64) -> Vec<CMatrix> {
    let n = mu.dim();
    let herm = hermitian_basis(n);
    let k = derivation_operator(mu);
    let rows = 2 * k.nrows();
    let mut real = RMatrix::zeros(rows.max(herm.len()), herm.len());
    for (col, h) in herm.iter().enumerate() {
        let hv =
            CMatrix::from_iterator(n * n, 1, (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| h[(a, b)]));
        let image = &k * hv;
        for r in 0..k.nrows() {
            real[(2 * r, col)] = image[r].re;
            real[(2 * r + 1, col)] = image[r].im;
        }
    }
    let threshold = tol * mu.norm();
    let svd = real.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut out = Vec::new();
    for (idx, s) in svd.singular_values.iter().enumerate() {
        if *s <= threshold {
            let mut d = CMatrix::zeros(n, n);
            for (p, h) in herm.iter().enumerate() {
                d += h * C64::new(v_t[(idx, p)], 0.0);
            }
            out.push(d);
        }
    }
    out
}

/// Orthonormal real basis of `Herm(n)` under `Re tr(AB*)`.
fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut e = CMatrix::zeros(n, n);
        e[(k, k)] = C64::new(1.0, 0.0);
        out.push(e);
    }
    for k in 0..n {
        for l in k + 1..n {
            let mut e = CMatrix::zeros(n, n);
            e[(k, l)] = C64::new(s, 0.0);
            e[(l, k)] = C64::new(s, 0.0);
            out.push(e);
            let mut f = CMatrix::zeros(n, n);
            f[(k, l)] = C64::new(0.0, s);
            f[(l, k)] = C64::new(0.0, -s);
            out.push(f);
        }
    }
    out
}

fn real_pairing(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

/// Computes `M`, `F`, `c = tr M²/tr M`, `D = M − cI` and both criticality residuals.
pub fn criticality_decompose(mu: &Bracket, tol: f64) -> Result<MomentReport> {
    let t = tangent(mu)?;
    let ns = mu.norm_sq();
    let n = mu.dim();
    let m = t.m;
    let trm = m.trace();
    let mnorm = m.norm();
    let c = mnorm * mnorm / trm;
    let d = m.shift(-c);
    let derivation_defect = inf_act_matrix(d.matrix(), mu).norm() / libm::sqrt(ns);

    // project M onto span_R{I} ⊕ (Der ∩ Herm)
    let mut q: Vec<CMatrix> = Vec::new();
    let mut candidates = vec![CMatrix::identity(n, n)];
    candidates.extend(hermitian_derivations(mu, crate::linalg::RANK_TOL));
    for mut b in candidates {
        for qi in &q {
            let p = real_pairing(&b, qi);
            b -= qi * C64::new(p, 0.0);
        }
        let nb = b.norm();
        if nb > 1e-10 {
            q.push(b / C64::new(nb, 0.0));
        }
    }
    let mut rest = m.matrix().clone();
    for qi in &q {
        let p = real_pairing(m.matrix(), qi);
        rest -= qi * C64::new(p, 0.0);
    }
    let residual_decomp = rest.norm() / mnorm;

    Ok(MomentReport {
        norm_sq: ns,
        f: t.f,
        c,
        d,
        residual_decomp,
        residual_tangent: t.residual,
        derivation_defect,
        is_critical: t.residual < tol,
        m,
    })
}

/// Coprime integer eigenvalue type `(k_1 < ⋯ < k_r; d_1, …, d_r)` with `scale·eig(D) ≈ ks`.
/// Derived equality also compares `scale`; use [`CriticalType::same_type`] to ignore it.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalType {
    pub ks: Vec<i64>,
    pub ds: Vec<usize>,
    pub scale: f64,
}

impl CriticalType {
    /// A type without a fitted spectrum; `scale` is set to 1.
    pub fn new(ks: Vec<i64>, ds: Vec<usize>) -> Result<Self> {
        if ks.is_empty() || ks.len() != ds.len() {
            return Err(Error::InvalidType("ks and ds must be nonempty and of equal length"));
        }
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidType("ks must be strictly increasing"));
        }
        if ds.contains(&0) {
            return Err(Error::InvalidType("multiplicities must be positive"));
        }
        let g = ks.iter().fold(0u64, |g, k| gcd(g, k.unsigned_abs()));
        let zero_type = ks == [0];
        if !zero_type && g != 1 {
            return Err(Error::InvalidType("nonzero entries must be coprime"));
        }
        Ok(CriticalType { ks, ds, scale: 1.0 })
    }

    /// `(0; n)`.
    pub fn zero(n: usize) -> Self {
        CriticalType { ks: vec![0], ds: vec![n], scale: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.ds.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ks == [0]
    }

    /// Equality of `ks` and `ds`, ignoring `scale`.
    pub fn same_type(&self, other: &CriticalType) -> bool {
        self.ks == other.ks && self.ds == other.ds
    }

    /// The type with a zero eigenvalue of multiplicity `d` added (merged if present).
    pub fn with_zero(&self, d: usize) -> CriticalType {
        let mut pairs: Vec<(i64, usize)> = self.ks.iter().copied().zip(self.ds.iter().copied()).collect();
        match pairs.iter_mut().find(|(k, _)| *k == 0) {
            Some(p) => p.1 += d,
            None => pairs.push((0, d)),
        }
        pairs.sort_by_key(|p| p.0);
        CriticalType {
            ks: pairs.iter().map(|p| p.0).collect(),
            ds: pairs.iter().map(|p| p.1).collect(),
            scale: self.scale,
        }
    }

    /// The type with its zero eigenvalue removed; `None` if nothing remains.
    pub fn without_zero(&self) -> Option<CriticalType> {
        let pairs: Vec<(i64, usize)> =
            self.ks.iter().copied().zip(self.ds.iter().copied()).filter(|(k, _)| *k != 0).collect();
        if pairs.is_empty() {
            return None;
        }
        Some(CriticalType {
            ks: pairs.iter().map(|p| p.0).collect(),
            ds: pairs.iter().map(|p| p.1).collect(),
            scale: self.scale,
        })
    }
}

impl fmt::Display for CriticalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.ks.iter().enumerate() {
            if i > 0 {
                f.write_str("<")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(";")?;
        for (i, d) in self.ds.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// Fits a coprime integer type to the spectrum of `D`.
pub fn critical_type(d: &HermitianMap, tol: f64, max_den: u64) -> Result<CriticalType> {
    let n = d.dim();
    let (eig, _) = hermitian_eigen(d);
    let spread = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let gap = tol * spread.max(1.0);
    let groups = clusters(&eig, gap);
    let reps: Vec<f64> = groups.iter().map(|g| if g.0.abs() <= gap { 0.0 } else { g.0 }).collect();
    let reference = reps.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if reference == 0.0 {
        return Ok(CriticalType::zero(n));
    }

    let fracs: Vec<(i64, u64)> = reps.iter().map(|r| best_rational(r / reference, max_den)).collect();
    let den = fracs.iter().fold(1u64, |l, f| lcm(l, f.1));
    let mut ks: Vec<i64> = fracs.iter().map(|(p, q)| p * (den / q) as i64).collect();
    let g = ks.iter().fold(0u64, |g, k| gcd(g, k.unsigned_abs()));
    for k in &mut ks {
        *k /= g as i64;
    }
    let scale = (den / g) as f64 / reference;

    // merge clusters that landed on the same integer
    let mut pairs: Vec<(i64, usize)> = Vec::new();
    let mut error = 0.0f64;
    for (group, &k) in groups.iter().zip(&ks) {
        for v in &eig[group.1..group.1 + group.2] {
            error = error.max((scale * v - k as f64).abs());
        }
        match pairs.last_mut() {
            Some(p) if p.0 == k => p.1 += group.2,
            _ => pairs.push((k, group.2)),
        }
    }
    if !(error < tol) || pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::IrrationalType { error });
    }
    Ok(CriticalType { ks: pairs.iter().map(|p| p.0).collect(), ds: pairs.iter().map(|p| p.1).collect(), scale })
}

/// `F = 4 / (n − (Σ k d)² / Σ k² d)`, or `4/n` for `(0; n)`.
pub fn critical_value_formula(t: &CriticalType, n: usize) -> Result<f64> {
    let sum: usize = t.ds.iter().sum();
    if sum != n {
        return Err(Error::TypeDimension { sum, n });
    }
    let s1: f64 = t.ks.iter().zip(&t.ds).map(|(k, d)| (*k as f64) * (*d as f64)).sum();
    let s2: f64 = t.ks.iter().zip(&t.ds).map(|(k, d)| (*k as f64) * (*k as f64) * (*d as f64)).sum();
    if s2 == 0.0 {
        return Ok(4.0 / n as f64);
    }
    let denom = n as f64 - s1 * s1 / s2;
    if denom.abs() <= 1e-12 * n as f64 {
        return Err(Error::DegenerateType);
    }
    Ok(4.0 / denom)
}

/// Pairing `tr(M A*)` of two maps; convenience for invariant checks.
pub fn trace_pairing(a: &HermitianMap, b: &LinearMap) -> C64 {
    a.as_map().trace_pairing(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_display() {
        let t = CriticalType::new(vec![3, 5, 6], vec![1, 1, 1]).unwrap();
        extern crate std;
        assert_eq!(std::format!("{t}"), "(3<5<6;1,1,1)");
        assert_eq!(std::format!("{}", CriticalType::zero(3)), "(0;3)");
    }

    #[test]
    fn type_validation() {
        assert!(CriticalType::new(vec![2, 4], vec![1, 1]).is_err());
        assert!(CriticalType::new(vec![2, 1], vec![1, 1]).is_err());
        assert!(CriticalType::new(vec![1, 2], vec![1, 0]).is_err());
    }

    #[test]
    fn zero_merging() {
        let t = CriticalType::new(vec![3, 5, 6], vec![1, 1, 1]).unwrap();
        let z = t.with_zero(2);
        assert_eq!((z.ks.clone(), z.ds.clone()), (vec![0, 3, 5, 6], vec![2, 1, 1, 1]));
        assert!(z.without_zero().unwrap().same_type(&t));
        assert!(CriticalType::zero(2).without_zero().is_none());
    }
}
