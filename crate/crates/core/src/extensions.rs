//! Critical points of dimension `d₁ + m` built from a nilpotent critical core
//! `λ` on `ℂ^m` and action maps `L_A`, `R_A` of `d₁` extending generators.
//!
//! The generators get the inner product
//! `⟨A, B⟩ = −(2/c_λ)(tr ad_A ad_B* + tr L_A L_B* + tr R_A R_B*)`,
//! are orthonormalized by Cholesky, and the assembled bracket
//! `μ(A + X, B + Y) = ad_A(B) + L_A Y + R_B X + λ(X, Y)` is certified a posteriori.

use alloc::vec::Vec;

use crate::error::{Clause, Error, Result};
use crate::linalg::{hermitian_eigen, left_op, right_op, HermitianMap, LinearMap};
use crate::moment::{criticality_decompose, CriticalType, MomentReport, MAX_DENOMINATOR, TYPE_TOL};
use crate::tensor::{check_identities, gl_act, inf_act_matrix, Bracket, IDENTITY_TOL};
use crate::{CMatrix, CVector, C64};

/// Smallest Gram eigenvalue accepted, relative to the largest.
pub const GRAM_TOL: f64 = 1e-10;

/// `L_A` and `R_A` of one extending generator, both on `ℂ^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionMaps {
    pub left: LinearMap,
    pub right: LinearMap,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionCore {
    /// A critical core with `c_λ < 0` and positive type.
    Critical { bracket: Bracket, report: MomentReport },
    /// Degenerate mode: `λ = 0` on `ℂ^m` with `D_λ = −c_λ I` supplied by the caller.
    /// Nothing is assumed; the output is certified only after assembly.
    Abelian { dim: usize, c_lambda: f64 },
}

impl ExtensionCore {
    /// Wraps a core bracket with its moment report.
    pub fn critical(bracket: Bracket, tol: f64) -> Result<Self> {
        let report = criticality_decompose(&bracket, tol)?;
        Ok(ExtensionCore::Critical { bracket, report })
    }

    pub fn dim(&self) -> usize {
        match self {
            ExtensionCore::Critical { bracket, .. } => bracket.dim(),
            ExtensionCore::Abelian { dim, .. } => *dim,
        }
    }
}

/// Lie bracket on the extending space with its semisimple generators named by index;
/// the remaining generators are central.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductivePart {
    pub bracket: Bracket,
    pub semisimple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSpec {
    pub core: ExtensionCore,
    pub actions: Vec<ActionMaps>,
    pub reductive: Option<ReductivePart>,
}

/// Which identity check the assembled bracket passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityPath {
    Symmetric,
    /// Left Leibniz, with every right multiplication by a generator a derivation.
    LeftWithRightDerivations,
    /// Right Leibniz, with every left multiplication by a generator a derivation.
    RightWithLeftDerivations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    pub bracket: Bracket,
    pub report: MomentReport,
    pub critical_type: CriticalType,
    /// Core type with `(0; d₁)` prepended.
    pub expected_type: CriticalType,
    /// Gram matrix of the generators before orthonormalization.
    pub gram: CMatrix,
    pub identity_path: IdentityPath,
    /// `c_μ` equals `c_λ` within `1e−8` relative; always false in the abelian mode.
    pub c_matches: bool,
    /// Critical with the expected type.
    pub certified: bool,
}

struct Core<'a> {
    lambda: Bracket,
    d: HermitianMap,
    c: f64,
    core_type: CriticalType,
    report: Option<&'a MomentReport>,
}

fn violation(clause: Clause, residual: f64) -> Error {
    Error::HypothesisViolation { clause, residual }
}

fn prepare_core(core: &ExtensionCore) -> Result<Core<'_>> {
    match core {
        ExtensionCore::Critical { bracket, report } => {
            if !report.is_critical {
                return Err(violation(Clause::CoreCritical, report.residual_tangent));
            }
            if !(report.c < 0.0) {
                return Err(violation(Clause::CoreCritical, report.c));
            }
            let core_type = report.critical_type(TYPE_TOL, MAX_DENOMINATOR)?;
            if core_type.ks[0] <= 0 {
                return Err(violation(Clause::CorePositive, core_type.ks[0] as f64));
            }
            Ok(Core { lambda: bracket.clone(), d: report.d.clone(), c: report.c, core_type, report: Some(report) })
        }
        ExtensionCore::Abelian { dim, c_lambda } => {
            if *dim == 0 {
                return Err(Error::EmptyDimension);
            }
            if !(*c_lambda < 0.0 && c_lambda.is_finite()) {
                return Err(Error::InvalidParameter("abelian core requires a finite c_lambda < 0".into()));
            }
            let d = HermitianMap::from_real_diagonal(&alloc::vec![-c_lambda; *dim]);
            Ok(Core {
                lambda: Bracket::zero(*dim),
                d,
                c: *c_lambda,
                core_type: CriticalType::new(alloc::vec![1], alloc::vec![*dim])?,
                report: None,
            })
        }
    }
}

fn normality(l: &LinearMap) -> f64 {
    l.commutator(&l.adjoint()).norm()
}

fn rel(x: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        x
    } else {
        x / scale
    }
}

/// Clause (i), derivation property, and clause (ii) on the generators in `idx`.
fn check_action_clauses(core: &Core<'_>, actions: &[ActionMaps], idx: &[usize], tol: f64) -> Result<()> {
    let dnorm = core.d.norm();
    let lnorm = core.lambda.norm();
    for a in actions {
        for map in [&a.left, &a.right] {
            let com = map.commutator(core.d.as_map()).norm();
            let r = rel(com, dnorm * map.norm());
            if r > tol {
                return Err(violation(Clause::Commutation, r));
            }
            let der = inf_act_matrix(map.matrix(), &core.lambda).norm();
            let r = rel(der, lnorm * map.norm());
            if r > tol {
                return Err(violation(Clause::Derivation, r));
            }
        }
    }
    // normality on the span: basis elements plus A + B and A + iB for each pair
    let mut probes: Vec<(LinearMap, LinearMap)> =
        idx.iter().map(|&i| (actions[i].left.clone(), actions[i].right.clone())).collect();
    for (p, &i) in idx.iter().enumerate() {
        for &j in &idx[p + 1..] {
            let (a, b) = (&actions[i], &actions[j]);
            probes.push((a.left.add(&b.left), a.right.add(&b.right)));
            let ii = C64::new(0.0, 1.0);
            probes.push((a.left.add(&b.left.scale(ii)), a.right.add(&b.right.scale(ii))));
        }
    }
    for (l, r) in &probes {
        for map in [l, r] {
            let res = rel(normality(map), map.norm() * map.norm());
            if res > tol {
                return Err(violation(Clause::Normality, res));
            }
        }
    }
    // non-vanishing: A ↦ (L_A, R_A) injective on span(idx)
    if !idx.is_empty() {
        let m = core.lambda.dim();
        let mut stacked = CMatrix::zeros(2 * m * m, idx.len());
        for (col, &i) in idx.iter().enumerate() {
            for (r, v) in actions[i].left.matrix().iter().chain(actions[i].right.matrix().iter()).enumerate() {
                stacked[(r, col)] = *v;
            }
        }
        let sv = stacked.singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if smax == 0.0 || smin <= tol * smax {
            return Err(violation(Clause::NonVanishing, if smax == 0.0 { 0.0 } else { smin / smax }));
        }
    }
    Ok(())
}

/// Extends by an abelian algebra of generators.
pub fn build_solvable_extension(spec: &ExtensionSpec, tol: f64) -> Result<Extension> {
    if spec.reductive.is_some() {
        return Err(Error::InvalidParameter("solvable extension takes no reductive part".into()));
    }
    build(spec, tol)
}

/// Extends by a reductive Lie algebra `f = h ⊕ z`.
pub fn build_general_extension(spec: &ExtensionSpec, tol: f64) -> Result<Extension> {
    if spec.reductive.is_none() {
        return Err(Error::InvalidParameter("general extension requires a reductive part".into()));
    }
    build(spec, tol)
}

fn build(spec: &ExtensionSpec, tol: f64) -> Result<Extension> {
    let core = prepare_core(&spec.core)?;
    let m = core.lambda.dim();
    let d1 = spec.actions.len();
    if d1 == 0 {
        return Err(Error::InvalidParameter("at least one extending generator is required".into()));
    }
    for a in &spec.actions {
        for map in [&a.left, &a.right] {
            if map.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, found: map.dim() });
            }
        }
    }

    let ads: Vec<CMatrix> = match &spec.reductive {
        None => {
            let all: Vec<usize> = (0..d1).collect();
            check_action_clauses(&core, &spec.actions, &all, tol)?;
            (0..d1).map(|_| CMatrix::zeros(d1, d1)).collect()
        }
        Some(red) => {
            let f = &red.bracket;
            if f.dim() != d1 {
                return Err(Error::DimensionMismatch { expected: d1, found: f.dim() });
            }
            let ids = check_identities(f, tol);
            if !ids.is_lie {
                return Err(Error::NotLie {
                    anticommutativity: ids.anticommutativity_residual,
                    jacobi: ids.jacobi_residual,
                });
            }
            if let Some(&bad) = red.semisimple.iter().find(|&&i| i >= d1) {
                return Err(Error::DimensionMismatch { expected: d1, found: bad + 1 });
            }
            let ads: Vec<CMatrix> = (0..d1)
                .map(|a| left_op(f, &crate::linalg::basis_vector(d1, a)).map(LinearMap::into_matrix))
                .collect::<Result<_>>()?;
            let center: Vec<usize> = (0..d1).filter(|i| !red.semisimple.contains(i)).collect();
            let fnorm = f.norm();
            for &z in &center {
                let r = rel(ads[z].norm(), fnorm);
                if r > tol {
                    return Err(violation(Clause::ReductiveSplit, r));
                }
            }
            for &h in &red.semisimple {
                if ads[h].norm() <= tol * fnorm.max(f64::MIN_POSITIVE) {
                    return Err(violation(Clause::ReductiveSplit, 0.0));
                }
                let skew = rel((&ads[h] + ads[h].adjoint()).norm(), ads[h].norm());
                if skew > tol {
                    return Err(violation(Clause::Skewness, skew));
                }
                for map in [&spec.actions[h].left, &spec.actions[h].right] {
                    let skew = rel((map.matrix() + map.matrix().adjoint()).norm(), map.norm());
                    if skew > tol {
                        return Err(violation(Clause::Skewness, skew));
                    }
                }
            }
            check_action_clauses(&core, &spec.actions, &center, tol)?;
            ads
        }
    };

    // Gram matrix, linear in the first slot
    let pair = |x: &CMatrix, y: &CMatrix| -> C64 { x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum() };
    let gram = CMatrix::from_fn(d1, d1, |a, b| {
        let s = pair(&ads[a], &ads[b])
            + pair(spec.actions[a].left.matrix(), spec.actions[b].left.matrix())
            + pair(spec.actions[a].right.matrix(), spec.actions[b].right.matrix());
        s * C64::new(-2.0 / core.c, 0.0)
    });
    let gh = HermitianMap::from_matrix_unchecked(gram.clone());
    let (eig, _) = hermitian_eigen(&gh);
    let (lo, hi) = (eig[0], eig[d1 - 1]);
    if !(hi > 0.0 && lo > GRAM_TOL * hi) {
        return Err(Error::GramNotPositive { ratio: if hi > 0.0 { lo / hi } else { lo } });
    }
    let chol = gh.matrix().clone().cholesky().ok_or(Error::GramNotPositive { ratio: lo / hi })?;
    let t = chol.l().transpose().try_inverse().ok_or(Error::GramNotPositive { ratio: lo / hi })?;

    let combine = |pick: &dyn Fn(&ActionMaps) -> &LinearMap, j: usize| -> CMatrix {
        let mut out = CMatrix::zeros(m, m);
        for a in 0..d1 {
            out += pick(&spec.actions[a]).matrix() * t[(a, j)];
        }
        out
    };
    let lefts: Vec<CMatrix> = (0..d1).map(|j| combine(&|a| &a.left, j)).collect();
    let rights: Vec<CMatrix> = (0..d1).map(|j| combine(&|a| &a.right, j)).collect();
    let f_new = match &spec.reductive {
        Some(red) => {
            let tinv = t.clone().try_inverse().ok_or(Error::GramNotPositive { ratio: lo / hi })?;
            Some(gl_act(&LinearMap::new(tinv)?, &red.bracket)?)
        }
        None => None,
    };

    let n = d1 + m;
    let lambda = &core.lambda;
    let bracket = Bracket::from_fn(n, |i, j, k| {
        let zero = C64::new(0.0, 0.0);
        match (i < d1, j < d1, k < d1) {
            (true, true, true) => f_new.as_ref().map_or(zero, |f| f.get(i, j, k)),
            (true, false, false) => lefts[i][(k - d1, j - d1)],
            (false, true, false) => rights[j][(k - d1, i - d1)],
            (false, false, false) => lambda.get(i - d1, j - d1, k - d1),
            _ => zero,
        }
    })?;

    let identity_path = identity_path(&bracket, d1)?;
    let report = criticality_decompose(&bracket, tol)?;
    if !report.is_critical {
        return Err(Error::CertificationFailed { residual: report.residual_tangent });
    }
    let critical_type = report.critical_type(TYPE_TOL, MAX_DENOMINATOR)?;
    let expected_type = core.core_type.with_zero(d1);
    let c_matches = core.report.is_some() && (report.c - core.c).abs() <= 1e-8 * core.c.abs();
    let certified = critical_type.same_type(&expected_type);
    Ok(Extension { bracket, report, critical_type, expected_type, gram, identity_path, c_matches, certified })
}

fn identity_path(mu: &Bracket, d1: usize) -> Result<IdentityPath> {
    let ids = check_identities(mu, IDENTITY_TOL);
    if ids.is_symmetric_leibniz {
        return Ok(IdentityPath::Symmetric);
    }
    let n = mu.dim();
    let unit = mu.normalized()?;
    let all_derivations = |op: fn(&Bracket, &CVector) -> Result<LinearMap>| -> Result<bool> {
        for j in 0..d1 {
            let x = crate::linalg::basis_vector(n, j);
            let map = op(&unit, &x)?;
            if inf_act_matrix(map.matrix(), &unit).norm() > IDENTITY_TOL {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if ids.is_left_leibniz && all_derivations(right_op)? {
        return Ok(IdentityPath::LeftWithRightDerivations);
    }
    if ids.is_right_leibniz && all_derivations(left_op)? {
        return Ok(IdentityPath::RightWithLeftDerivations);
    }
    Err(Error::NotSymmetricLeibniz { left: ids.left_residual, right: ids.right_residual })
}
