//! Derived and lower central series, the eigenspace grading of `D_μ`,
//! and the structure of symmetric Leibniz critical points.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    clusters, hermitian_eigen, left_op, nullspace_rel, right_op, subspace_product, HermitianMap, LinearMap, Subspace,
    RANK_TOL,
};
use crate::moment::{criticality_decompose, CriticalType, MomentReport, MAX_DENOMINATOR, TYPE_TOL};
use crate::tensor::{check_identities, evaluate_unchecked, identity_residuals, inf_act_matrix, Bracket, IDENTITY_TOL};
use crate::{CMatrix, C64};

/// Relative eigenvalue gap used to separate the eigenspaces of `D`.
pub const GRADING_GAP: f64 = 1e-6;
/// Smallest normalized singular value accepted for the Killing form.
pub const KILLING_TOL: f64 = 1e-6;
/// Number of random samples in the check on `l_−`.
pub const NEGATIVE_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct StructureProfile {
    /// Ranks of `l^(0) = l`, `l^(k+1) = l^(k) l^(k)`, up to zero or stabilization.
    pub derived_dims: Vec<usize>,
    /// Ranks of `¹l = l`, `^{k+1}l = l(^k l)`, up to zero or stabilization.
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub is_solvable: bool,
    /// Decided by the series of all products of `k` elements.
    pub is_nilpotent: bool,
}

fn series(n: usize, mut next: impl FnMut(&Subspace) -> Subspace) -> Vec<usize> {
    let mut dims = vec![n];
    let mut cur = Subspace::full(n);
    for _ in 0..=n {
        let s = next(&cur);
        let r = s.rank();
        let stable = r == *dims.last().unwrap();
        dims.push(r);
        if r == 0 || stable {
            break;
        }
        cur = s;
    }
    dims
}

/// `{x : L_x = R_x = 0}` with singular threshold `tol` relative to the largest.
pub fn center(mu: &Bracket, tol: f64) -> Subspace {
    let n = mu.dim();
    let mut k = CMatrix::zeros(2 * n * n, n);
    for j in 0..n {
        for c in 0..n {
            for i in 0..n {
                k[(j * n + c, i)] = mu.get(i, j, c);
                k[(n * n + j * n + c, i)] = mu.get(j, i, c);
            }
        }
    }
    Subspace::span(&nullspace_rel(&k, tol))
}

/// Whether every product of `n + 1` elements vanishes.
fn all_products_nilpotent(mu: &Bracket) -> bool {
    let n = mu.dim();
    let mut levels: Vec<Subspace> = vec![Subspace::full(n)];
    for k in 2..=n + 1 {
        let mut acc = Subspace::zero(n);
        for i in 1..k {
            let p = subspace_product(mu, &levels[i - 1], &levels[k - i - 1]).expect("same ambient");
            acc = acc.join(&p);
        }
        if acc.rank() == 0 {
            return true;
        }
        levels.push(acc);
    }
    false
}

pub fn structure_profile(mu: &Bracket, tol: f64) -> StructureProfile {
    let n = mu.dim();
    let full = Subspace::full(n);
    let derived_dims = series(n, |s| subspace_product(mu, s, s).expect("same ambient"));
    let lower_central_dims = series(n, |s| subspace_product(mu, &full, s).expect("same ambient"));
    let is_nilpotent = all_products_nilpotent(mu);
    StructureProfile {
        is_solvable: *derived_dims.last().unwrap() == 0,
        center_dim: center(mu, tol).rank(),
        derived_dims,
        lower_central_dims,
        is_nilpotent,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradingDecomposition {
    pub zero_part: Subspace,
    pub positive_part: Subspace,
    pub negative_part: Subspace,
    /// Eigenvalue clusters of `D`, ascending, with their eigenspaces.
    pub eigenspaces: Vec<(f64, Subspace)>,
}

/// Splits `ℂⁿ` into eigenspaces of the derivation `D`.
pub fn grading_decomposition(mu: &Bracket, d: &HermitianMap, tol: f64) -> Result<GradingDecomposition> {
    let n = mu.dim();
    if d.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: d.dim() });
    }
    let defect = inf_act_matrix(d.matrix(), mu).norm();
    let bound = tol * d.norm() * mu.norm();
    if defect > bound {
        return Err(Error::NotDerivation { defect: defect / (d.norm() * mu.norm()) });
    }
    let (vals, u) = hermitian_eigen(d);
    let spread = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let gap = GRADING_GAP * spread;
    let mut eigenspaces = Vec::new();
    let (mut neg, mut zero, mut pos) = (Vec::new(), Vec::new(), Vec::new());
    for (mean, start, len) in clusters(&vals, gap) {
        let cols = u.matrix().columns(start, len).into_owned();
        let target = if mean.abs() <= gap {
            &mut zero
        } else if mean > 0.0 {
            &mut pos
        } else {
            &mut neg
        };
        target.extend(start..start + len);
        let value = if mean.abs() <= gap { 0.0 } else { mean };
        eigenspaces.push((value, Subspace::from_orthonormal(cols)));
    }
    let pick = |idx: &[usize]| Subspace::from_orthonormal(u.matrix().select_columns(idx));
    Ok(GradingDecomposition {
        zero_part: pick(&zero),
        positive_part: pick(&pos),
        negative_part: pick(&neg),
        eigenspaces,
    })
}

/// Largest distance of `μ(l_a, l_b)` from `l_{a+b}` over basis vectors, relative to `‖μ‖`.
/// Products landing on no eigenvalue must vanish.
pub fn eigenspace_product_residual(mu: &Bracket, g: &GradingDecomposition) -> f64 {
    let n = mu.dim();
    let scale = g.eigenspaces.iter().fold(0.0f64, |a, e| a.max(e.0.abs())).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for (a, ua) in &g.eigenspaces {
        for (b, ub) in &g.eigenspaces {
            let target = g
                .eigenspaces
                .iter()
                .find(|(c, _)| (c - (a + b)).abs() <= 1e-6 * scale)
                .map(|e| e.1.clone())
                .unwrap_or_else(|| Subspace::zero(n));
            for i in 0..ua.rank() {
                for j in 0..ub.rank() {
                    let p = evaluate_unchecked(mu, &ua.vector(i), &ub.vector(j));
                    worst = worst.max(target.distance(&p));
                }
            }
        }
    }
    worst / mu.norm().max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClauseCheck {
    pub passed: bool,
    pub residual: f64,
}

impl ClauseCheck {
    fn at_most(residual: f64, tol: f64) -> Self {
        ClauseCheck { passed: residual <= tol, residual }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveCheck {
    pub passed: bool,
    /// Distance of products of `l_0` from `l_0`.
    pub closure_residual: f64,
    /// Largest of the anticommutativity and Jacobi residuals of `μ|l_0`.
    pub lie_residual: f64,
    pub center_dim: usize,
    pub derived_dim: usize,
    /// Whether `l_0 = z(l_0) ⊕ [l_0, l_0]`.
    pub direct_sum: bool,
    /// Smallest singular value of the Killing form of `[l_0, l_0]` over its largest; 1 when vacuous.
    pub killing_min_singular: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RestrictedType {
    /// The restriction is critical; `matches` compares with the parent type without its zero.
    Critical {
        critical_type: CriticalType,
        residual: f64,
        matches: bool,
    },
    NotCritical {
        residual: f64,
    },
    /// Rational reconstruction of the restricted type failed.
    NoType {
        residual: f64,
    },
    /// `μ|l_+ = 0`: degenerate, abelian nilradical.
    DegenerateAbelian,
    /// `l_+ = 0`.
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NilradicalCheck {
    pub passed: bool,
    /// Distance of `μ(l, l_+)` and `μ(l_+, l)` from `l_+`.
    pub ideal_residual: f64,
    pub is_nilpotent: bool,
    pub restricted: RestrictedType,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeCheck {
    pub samples: usize,
    /// Smallest `‖[R_X, R_X*]‖` seen.
    pub min_commutator: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureVerdict {
    pub grading: GradingDecomposition,
    pub critical_type: CriticalType,
    pub adjoint_closed: ClauseCheck,
    pub l0_reductive: ReductiveCheck,
    pub center_normal: ClauseCheck,
    pub nilradical: NilradicalCheck,
    /// `None` when `l_−` is zero.
    pub negative_part: Option<NegativeCheck>,
}

impl StructureVerdict {
    pub fn all_passed(&self) -> bool {
        self.adjoint_closed.passed
            && self.l0_reductive.passed
            && self.center_normal.passed
            && self.nilradical.passed
            && self.negative_part.is_none_or(|c| c.passed)
    }
}

fn column(m: &CMatrix, i: usize) -> crate::CVector {
    m.column(i).into_owned()
}

fn normality_defect(l: &LinearMap) -> f64 {
    l.commutator(&l.adjoint()).norm()
}

/// Checks the structure of a symmetric Leibniz critical point: `(L_A)*`, `(R_A)*` are derivations
/// for `A ∈ l_0`; `l_0` is reductive; `L_Z`, `R_Z` are normal on the center of `l_0`; `l_+` is a
/// nilpotent ideal whose restricted bracket is critical of the parent type with zero removed.
pub fn verify_structure_theorem(mu: &Bracket, report: &MomentReport, tol: f64) -> Result<StructureVerdict> {
    if !report.is_critical {
        return Err(Error::NotCritical { residual: report.residual_tangent });
    }
    let ids = check_identities(mu, IDENTITY_TOL);
    if !ids.is_symmetric_leibniz {
        return Err(Error::NotSymmetricLeibniz { left: ids.left_residual, right: ids.right_residual });
    }
    let unit = mu.normalized()?;
    let mut d = report.d.scale(1.0 / report.norm_sq);
    let critical_type = crate::moment::critical_type(&d, TYPE_TOL, MAX_DENOMINATOR)?;
    if critical_type.is_zero() {
        // D is rounding noise; a relative derivation test on it is meaningless
        d = HermitianMap::from_real_diagonal(&vec![0.0; unit.dim()]);
    }
    let grading = grading_decomposition(&unit, &d, tol.max(1e-8))?;
    let q0 = grading.zero_part.basis().clone();
    let r0 = q0.ncols();

    // (i)
    let mut adj = 0.0f64;
    for a in 0..r0 {
        let x = column(&q0, a);
        let l = left_op(&unit, &x)?;
        let r = right_op(&unit, &x)?;
        adj = adj.max(inf_act_matrix(&l.adjoint().into_matrix(), &unit).norm());
        adj = adj.max(inf_act_matrix(&r.adjoint().into_matrix(), &unit).norm());
    }
    let adjoint_closed = ClauseCheck::at_most(adj, tol);

    // (ii) and (iii)
    let (l0_reductive, center_normal) = if r0 == 0 {
        (
            ReductiveCheck {
                passed: true,
                closure_residual: 0.0,
                lie_residual: 0.0,
                center_dim: 0,
                derived_dim: 0,
                direct_sum: true,
                killing_min_singular: 1.0,
            },
            ClauseCheck { passed: true, residual: 0.0 },
        )
    } else {
        reductive_part(&unit, &grading.zero_part, tol)?
    };

    // (iv)
    let nilradical = nilradical_part(&unit, &grading.positive_part, &critical_type, tol)?;

    let negative_part = if grading.negative_part.rank() == 0 {
        None
    } else {
        let mut rng = crate::random::rng(0x6c5f);
        let mut min_commutator = f64::INFINITY;
        for _ in 0..NEGATIVE_SAMPLES {
            let x = crate::random::unit_in_span(&mut rng, grading.negative_part.basis());
            let r = right_op(&unit, &x)?;
            min_commutator = min_commutator.min(normality_defect(&r));
        }
        Some(NegativeCheck { samples: NEGATIVE_SAMPLES, min_commutator, passed: min_commutator > tol })
    };

    Ok(StructureVerdict {
        grading,
        critical_type,
        adjoint_closed,
        l0_reductive,
        center_normal,
        nilradical,
        negative_part,
    })
}

/// Restriction of a unit-norm bracket, snapped to zero when only rounding noise remains.
fn restrict_clean(unit: &Bracket, basis: &CMatrix) -> Result<Bracket> {
    let nu = unit.restrict(basis)?;
    if nu.norm() <= RANK_TOL {
        Ok(Bracket::zero(nu.dim()))
    } else {
        Ok(nu)
    }
}

fn reductive_part(unit: &Bracket, l0: &Subspace, tol: f64) -> Result<(ReductiveCheck, ClauseCheck)> {
    let q0 = l0.basis();
    let r0 = q0.ncols();
    let mut closure_residual = 0.0f64;
    for a in 0..r0 {
        for b in 0..r0 {
            let p = evaluate_unchecked(unit, &column(q0, a), &column(q0, b));
            closure_residual = closure_residual.max(l0.distance(&p));
        }
    }
    let nu = restrict_clean(unit, q0)?;
    let res = identity_residuals(&nu);
    let lie_residual = res.anti.max(res.jacobi);
    let z = center(&nu, RANK_TOL);
    let s = subspace_product(&nu, &Subspace::full(r0), &Subspace::full(r0))?;
    let direct_sum = z.rank() + s.rank() == r0 && z.join(&s).rank() == r0;

    let killing_min_singular = if s.rank() == 0 {
        1.0
    } else {
        let nu_s = nu.restrict(s.basis())?;
        let m = s.rank();
        let ads: Vec<CMatrix> = (0..m)
            .map(|a| left_op(&nu_s, &crate::linalg::basis_vector(m, a)).map(LinearMap::into_matrix))
            .collect::<Result<_>>()?;
        let killing = CMatrix::from_fn(m, m, |a, b| (&ads[a] * &ads[b]).trace());
        let sv = killing.singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        if smax == 0.0 {
            0.0
        } else {
            sv.iter().copied().fold(f64::INFINITY, f64::min) / smax
        }
    };
    let passed = closure_residual <= tol && lie_residual <= tol && direct_sum && killing_min_singular > KILLING_TOL;
    let reductive = ReductiveCheck {
        passed,
        closure_residual,
        lie_residual,
        center_dim: z.rank(),
        derived_dim: s.rank(),
        direct_sum,
        killing_min_singular,
    };

    // normality on span(z): basis vectors plus Z_a + Z_b and Z_a + i Z_b cover every combination
    let zs: Vec<crate::CVector> = (0..z.rank()).map(|a| q0 * z.vector(a)).collect();
    let mut probes = zs.clone();
    for a in 0..zs.len() {
        for b in a + 1..zs.len() {
            probes.push(&zs[a] + &zs[b]);
            probes.push(&zs[a] + &zs[b] * C64::new(0.0, 1.0));
        }
    }
    let mut normal = 0.0f64;
    for x in &probes {
        normal = normal.max(normality_defect(&left_op(unit, x)?));
        normal = normal.max(normality_defect(&right_op(unit, x)?));
    }
    Ok((reductive, ClauseCheck::at_most(normal, tol)))
}

fn nilradical_part(unit: &Bracket, lp: &Subspace, parent: &CriticalType, tol: f64) -> Result<NilradicalCheck> {
    let n = unit.dim();
    let rp = lp.rank();
    if rp == 0 {
        return Ok(NilradicalCheck {
            passed: true,
            ideal_residual: 0.0,
            is_nilpotent: true,
            restricted: RestrictedType::Empty,
        });
    }
    let mut ideal_residual = 0.0f64;
    for i in 0..n {
        let e = crate::linalg::basis_vector(n, i);
        for a in 0..rp {
            let p = lp.vector(a);
            ideal_residual = ideal_residual.max(lp.distance(&evaluate_unchecked(unit, &e, &p)));
            ideal_residual = ideal_residual.max(lp.distance(&evaluate_unchecked(unit, &p, &e)));
        }
    }
    let nu = restrict_clean(unit, lp.basis())?;
    let is_nilpotent = structure_profile(&nu, RANK_TOL).is_nilpotent;
    let restricted = if nu.norm() <= tol {
        RestrictedType::DegenerateAbelian
    } else {
        let rep = criticality_decompose(&nu, tol)?;
        if !rep.is_critical {
            RestrictedType::NotCritical { residual: rep.residual_tangent }
        } else {
            match rep.critical_type(TYPE_TOL, MAX_DENOMINATOR) {
                Ok(t) => {
                    let matches = parent.without_zero().is_some_and(|p| p.same_type(&t));
                    RestrictedType::Critical { critical_type: t, residual: rep.residual_tangent, matches }
                }
                Err(_) => RestrictedType::NoType { residual: rep.residual_tangent },
            }
        }
    };
    let restricted_ok =
        matches!(restricted, RestrictedType::DegenerateAbelian | RestrictedType::Critical { matches: true, .. });
    Ok(NilradicalCheck {
        passed: ideal_residual <= tol && is_nilpotent && restricted_ok,
        ideal_residual,
        is_nilpotent,
        restricted,
    })
}
