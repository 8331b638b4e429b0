//! Every algebra with a known classification: the 2D and 3D symmetric Leibniz
//! algebras, the three extremal families `μ_hy`, `μ_he`, `μ_sy`, a non-symmetric
//! 2D example and the compact basis of `sl₂`.
//!
//! Brackets are stored in their printed bases. Whether a basis is critical is
//! computed, never assumed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flow::{descend, FlowParams};
use crate::moment::{criticality_decompose, CriticalType, CRITICAL_TOL, MAX_DENOMINATOR, TYPE_TOL};
use crate::rational::best_rational;
use crate::tensor::Bracket;
use crate::C64;

/// Identity class a catalog bracket is declared to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraClass {
    Lie,
    SymmetricLeibniz,
    LeftLeibniz,
    /// Right Leibniz only; several printed 3D tables list such brackets as symmetric.
    RightLeibniz,
}

impl AlgebraClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraClass::Lie => "Lie",
            AlgebraClass::SymmetricLeibniz => "symmetric Leibniz",
            AlgebraClass::LeftLeibniz => "left Leibniz",
            AlgebraClass::RightLeibniz => "right Leibniz",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<C64>,
    pub dim: usize,
    pub bracket: Bracket,
    pub class: AlgebraClass,
    pub expected_type: Option<CriticalType>,
    pub expected_value: Option<f64>,
    pub critical_in_given_basis: bool,
    pub notes: &'static str,
}

impl CatalogEntry {
    /// Name with parameters, e.g. `S5(1+i)` or `mu_he(4)`.
    pub fn label(&self) -> String {
        label(&self.name, &self.params, self.dim, self.name.starts_with("mu_"))
    }
}

/// Static description of a catalog name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogInfo {
    pub name: &'static str,
    /// Names of the complex parameters, in order.
    pub params: &'static [&'static str],
    /// Whether the ambient dimension `n` is a parameter.
    pub takes_dim: bool,
    pub summary: &'static str,
}

pub const CATALOG: &[CatalogInfo] = &[
    CatalogInfo { name: "lie2", params: &[], takes_dim: false, summary: "2D Lie: [e1,e2]=e2" },
    CatalogInfo { name: "nonlie2", params: &[], takes_dim: false, summary: "2D non-Lie symmetric Leibniz: e1e1=e2" },
    CatalogInfo { name: "nonsym2", params: &[], takes_dim: false, summary: "2D left Leibniz, not right: e1e2=e2" },
    CatalogInfo { name: "L1", params: &[], takes_dim: false, summary: "Heisenberg: [e1,e2]=e3" },
    CatalogInfo { name: "L2", params: &[], takes_dim: false, summary: "[e1,e2]=e2" },
    CatalogInfo {
        name: "L3",
        params: &["alpha"],
        takes_dim: false,
        summary: "[e3,e1]=e1, [e3,e2]=alpha e2, alpha != 0",
    },
    CatalogInfo { name: "L4", params: &[], takes_dim: false, summary: "[e3,e1]=e1+e2, [e3,e2]=e2" },
    CatalogInfo { name: "L5", params: &[], takes_dim: false, summary: "sl2: [e3,e1]=2e1, [e3,e2]=-2e2, [e1,e2]=e3" },
    CatalogInfo { name: "so3", params: &[], takes_dim: false, summary: "sl2 in the compact basis: [e1,e2]=e3 cyclic" },
    CatalogInfo { name: "S1", params: &[], takes_dim: false, summary: "e3e3=e1" },
    CatalogInfo { name: "S2", params: &[], takes_dim: false, summary: "e2e2=e1, e3e3=e1" },
    CatalogInfo { name: "S3", params: &["beta"], takes_dim: false, summary: "e2e2=beta e1, e3e2=e1, e3e3=e1" },
    CatalogInfo { name: "S4", params: &[], takes_dim: false, summary: "e1e3=e1" },
    CatalogInfo {
        name: "S5",
        params: &["alpha"],
        takes_dim: false,
        summary: "e1e3=alpha e1, e2e3=e2, e3e2=-e2, alpha != 0",
    },
    CatalogInfo { name: "S6", params: &[], takes_dim: false, summary: "e2e3=e2, e3e2=-e2, e3e3=e1" },
    CatalogInfo { name: "S7", params: &["alpha"], takes_dim: false, summary: "e1e3=alpha e1, e2e3=e2, alpha != 0" },
    CatalogInfo { name: "S8", params: &[], takes_dim: false, summary: "e1e3=e1+e2, e3e3=e1" },
    CatalogInfo { name: "mu_hy", params: &[], takes_dim: true, summary: "[X1,Xi]=Xi for i >= 2, n >= 2" },
    CatalogInfo { name: "mu_he", params: &[], takes_dim: true, summary: "[X1,X2]=X3, n >= 4" },
    CatalogInfo { name: "mu_sy", params: &[], takes_dim: true, summary: "X1X1=X2, n >= 3" },
];

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// One-based `(i, j, k, value)` products; `lie` adds the antisymmetric partner of each.
fn table(n: usize, products: &[(usize, usize, usize, C64)], lie: bool) -> Bracket {
    let mut entries = Vec::new();
    for &(i, j, k, v) in products {
        entries.push((i - 1, j - 1, k - 1, v));
        if lie {
            entries.push((j - 1, i - 1, k - 1, -v));
        }
    }
    Bracket::from_entries(n, &entries).expect("catalog tables are well formed")
}

fn ty(ks: &[i64], ds: &[usize]) -> Option<CriticalType> {
    Some(CriticalType::new(ks.to_vec(), ds.to_vec()).expect("catalog types are valid"))
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

/// Looks up `name`; `params` holds the complex parameters and `n` the dimension of the `mu_*` families.
pub fn get(name: &str, params: &[C64], n: Option<usize>) -> Result<CatalogEntry> {
    let info = CATALOG.iter().find(|i| i.name == name).ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
    if params.len() != info.params.len() {
        return Err(invalid(format!("{name} takes {} parameter(s), got {}", info.params.len(), params.len())));
    }
    if !info.takes_dim && n.is_some() {
        return Err(invalid(format!("{name} has fixed dimension")));
    }
    if params.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
        return Err(invalid(format!("{name}: parameters must be finite")));
    }
    let nonzero = |p: C64| -> Result<C64> {
        if p == re(0.0) {
            Err(invalid(format!("{name} requires a nonzero parameter")))
        } else {
            Ok(p)
        }
    };
    let one = re(1.0);
    let (bracket, class, expected_type, expected_value, notes) = match name {
        "lie2" => (table(2, &[(1, 2, 2, one)], true), AlgebraClass::Lie, ty(&[0, 1], &[1, 1]), Some(4.0), ""),
        "nonlie2" => {
            (table(2, &[(1, 1, 2, one)], false), AlgebraClass::SymmetricLeibniz, ty(&[1, 2], &[1, 1]), Some(20.0), "")
        }
        "nonsym2" => (
            table(2, &[(1, 2, 2, one)], false),
            AlgebraClass::LeftLeibniz,
            ty(&[0, 1], &[1, 1]),
            Some(4.0),
            "critical point outside the symmetric variety",
        ),
        "L1" => (table(3, &[(1, 2, 3, one)], true), AlgebraClass::Lie, ty(&[1, 2], &[2, 1]), Some(12.0), ""),
        "L2" => (table(3, &[(1, 2, 2, one)], true), AlgebraClass::Lie, ty(&[0, 1], &[1, 2]), Some(4.0), ""),
        "L3" => {
            let a = nonzero(params[0])?;
            (table(3, &[(3, 1, 1, one), (3, 2, 2, a)], true), AlgebraClass::Lie, ty(&[0, 1], &[1, 2]), Some(4.0), "")
        }
        "L4" => (
            table(3, &[(3, 1, 1, one), (3, 1, 2, one), (3, 2, 2, one)], true),
            AlgebraClass::Lie,
            None,
            None,
            "no critical point in the orbit",
        ),
        "L5" => (
            table(3, &[(3, 1, 1, re(2.0)), (3, 2, 2, re(-2.0)), (1, 2, 3, one)], true),
            AlgebraClass::Lie,
            ty(&[0], &[3]),
            Some(4.0 / 3.0),
            "printed basis is not critical",
        ),
        "so3" => (
            table(3, &[(1, 2, 3, one), (2, 3, 1, one), (3, 1, 2, one)], true),
            AlgebraClass::Lie,
            ty(&[0], &[3]),
            Some(4.0 / 3.0),
            "critical representative of sl2",
        ),
        "S1" => (
            table(3, &[(3, 3, 1, one)], false),
            AlgebraClass::SymmetricLeibniz,
            ty(&[3, 5, 6], &[1, 1, 1]),
            Some(20.0),
            "",
        ),
        "S2" => (
            table(3, &[(2, 2, 1, one), (3, 3, 1, one)], false),
            AlgebraClass::SymmetricLeibniz,
            ty(&[1, 2], &[2, 1]),
            Some(12.0),
            "",
        ),
        "S3" => {
            let b = params[0];
            let quarter = (b - re(0.25)).norm() <= 1e-12;
            let (t, v, notes) = if quarter {
                (None, None, "no critical point in the orbit")
            } else {
                (ty(&[1, 2], &[2, 1]), Some(12.0), "printed basis is not critical")
            };
            (
                table(3, &[(2, 2, 1, b), (3, 2, 1, one), (3, 3, 1, one)], false),
                AlgebraClass::SymmetricLeibniz,
                t,
                v,
                notes,
            )
        }
        "S4" => (
            table(3, &[(1, 3, 1, one)], false),
            AlgebraClass::RightLeibniz,
            ty(&[0, 1], &[1, 2]),
            Some(4.0),
            "printed bracket satisfies only the right Leibniz identity",
        ),
        "S5" => {
            let a = nonzero(params[0])?;
            (
                table(3, &[(1, 3, 1, a), (2, 3, 2, one), (3, 2, 2, -one)], false),
                AlgebraClass::RightLeibniz,
                ty(&[0, 1], &[1, 2]),
                Some(4.0),
                "printed bracket satisfies only the right Leibniz identity",
            )
        }
        "S6" => (
            table(3, &[(2, 3, 2, one), (3, 2, 2, -one), (3, 3, 1, one)], false),
            AlgebraClass::SymmetricLeibniz,
            None,
            None,
            "no critical point in the orbit",
        ),
        "S7" => {
            let a = nonzero(params[0])?;
            (
                table(3, &[(1, 3, 1, a), (2, 3, 2, one)], false),
                AlgebraClass::RightLeibniz,
                ty(&[0, 1], &[1, 2]),
                Some(4.0),
                "printed bracket satisfies only the right Leibniz identity",
            )
        }
        "S8" => (
            table(3, &[(1, 3, 1, one), (1, 3, 2, one), (3, 3, 1, one)], false),
            AlgebraClass::RightLeibniz,
            None,
            None,
            "no critical point in the orbit; printed bracket satisfies only the right Leibniz identity",
        ),
        "mu_hy" | "mu_he" | "mu_sy" => {
            let n = n.ok_or_else(|| invalid(format!("{name} requires a dimension")))?;
            let min = match name {
                "mu_hy" => 2,
                "mu_he" => 4,
                _ => 3,
            };
            if n < min {
                return Err(invalid(format!("{name} requires n >= {min}")));
            }
            match name {
                "mu_hy" => {
                    let products: Vec<_> = (2..=n).map(|i| (1, i, i, one)).collect();
                    (table(n, &products, true), AlgebraClass::Lie, ty(&[0, 1], &[1, n - 1]), Some(4.0), "")
                }
                "mu_he" => (
                    table(n, &[(1, 2, 3, one)], true),
                    AlgebraClass::Lie,
                    ty(&[2, 3, 4], &[2, n - 3, 1]),
                    Some(12.0),
                    "",
                ),
                _ => (
                    table(n, &[(1, 1, 2, one)], false),
                    AlgebraClass::SymmetricLeibniz,
                    ty(&[3, 5, 6], &[1, n - 2, 1]),
                    Some(20.0),
                    "",
                ),
            }
        }
        _ => unreachable!("names come from CATALOG"),
    };
    let critical_in_given_basis = criticality_decompose(&bracket, CRITICAL_TOL)?.is_critical;
    Ok(CatalogEntry {
        name: name.to_string(),
        params: params.to_vec(),
        dim: bracket.dim(),
        bracket,
        class,
        expected_type,
        expected_value,
        critical_in_given_basis,
        notes,
    })
}

fn fmt_real(x: f64) -> String {
    let (p, q) = best_rational(x, 16);
    if (x - p as f64 / q as f64).abs() <= 1e-12 * x.abs().max(1.0) {
        if q == 1 {
            format!("{p}")
        } else {
            format!("{p}/{q}")
        }
    } else {
        format!("{x}")
    }
}

/// Compact form of a complex number: `2`, `i`, `1+i`, `-1/2i`.
pub fn format_param(z: C64) -> String {
    let imag = |y: f64| match fmt_real(y).as_str() {
        "1" => "i".to_string(),
        "-1" => "-i".to_string(),
        s => format!("{s}i"),
    };
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => fmt_real(z.re),
        (true, false) => imag(z.im),
        (false, false) => {
            let im = imag(z.im);
            if im.starts_with('-') {
                format!("{}{}", fmt_real(z.re), im)
            } else {
                format!("{}+{}", fmt_real(z.re), im)
            }
        }
    }
}

fn label(name: &str, params: &[C64], dim: usize, takes_dim: bool) -> String {
    if takes_dim {
        return format!("{name}({dim})");
    }
    if params.is_empty() {
        return name.to_string();
    }
    let inner: Vec<String> = params.iter().map(|p| format_param(*p)).collect();
    format!("{name}({})", inner.join(","))
}

/// How a verification row was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// The printed basis is critical.
    Direct,
    /// Descent from the printed basis.
    Flow,
    /// No critical point expected; only non-criticality of the printed basis is asserted.
    NotAttained,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::Flow => "flow",
            Strategy::NotAttained => "not attained",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationCase {
    pub name: &'static str,
    pub params: Vec<C64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub label: String,
    pub strategy: Strategy,
    pub expected_type: Option<CriticalType>,
    pub expected_value: Option<f64>,
    pub computed_type: Option<CriticalType>,
    pub computed_value: Option<f64>,
    /// Tangent residual of the printed basis.
    pub given_residual: f64,
    /// Accepted flow steps, zero for other strategies.
    pub iterations: usize,
    pub passed: bool,
    pub detail: String,
}

/// Relative tolerance on values for direct rows.
pub const DIRECT_VALUE_TOL: f64 = 1e-8;
/// Relative tolerance on values for flow rows.
pub const FLOW_VALUE_TOL: f64 = 1e-6;
/// Smallest printed-basis residual accepted for rows without a critical point.
pub const NOT_ATTAINED_RESIDUAL: f64 = 0.1;

/// The rows of the golden run, in display order.
pub fn verification_cases() -> Vec<VerificationCase> {
    let case = |name, params: Vec<C64>| VerificationCase { name, params, n: None };
    let samples = [re(1.0), re(2.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0)];
    let mut out = vec![
        case("lie2", vec![]),
        case("nonlie2", vec![]),
        case("nonsym2", vec![]),
        case("L1", vec![]),
        case("L2", vec![]),
    ];
    out.extend(samples.iter().map(|a| case("L3", vec![*a])));
    out.extend([case("L4", vec![]), case("L5", vec![]), case("so3", vec![]), case("S1", vec![]), case("S2", vec![])]);
    out.extend([case("S3", vec![re(0.25)]), case("S3", vec![re(1.0)]), case("S4", vec![])]);
    out.extend(samples.iter().map(|a| case("S5", vec![*a])));
    out.push(case("S6", vec![]));
    out.extend(samples.iter().map(|a| case("S7", vec![*a])));
    out.push(case("S8", vec![]));
    for name in ["mu_hy", "mu_he", "mu_sy"] {
        out.push(VerificationCase { name, params: vec![], n: Some(4) });
    }
    out
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Decides one row; errors become failed rows.
pub fn verify_entry(case: &VerificationCase, tol: f64) -> VerificationRow {
    let fallback_label = label(case.name, &case.params, case.n.unwrap_or(0), case.n.is_some());
    let failed = |detail: String| VerificationRow {
        label: fallback_label.clone(),
        strategy: Strategy::Direct,
        expected_type: None,
        expected_value: None,
        computed_type: None,
        computed_value: None,
        given_residual: f64::NAN,
        iterations: 0,
        passed: false,
        detail,
    };
    let entry = match get(case.name, &case.params, case.n) {
        Ok(e) => e,
        Err(e) => return failed(format!("{e}")),
    };
    let report = match criticality_decompose(&entry.bracket, tol) {
        Ok(r) => r,
        Err(e) => return failed(format!("{e}")),
    };
    let mut row = VerificationRow {
        label: entry.label(),
        strategy: Strategy::Direct,
        expected_type: entry.expected_type.clone(),
        expected_value: entry.expected_value,
        computed_type: None,
        computed_value: None,
        given_residual: report.residual_tangent,
        iterations: 0,
        passed: false,
        detail: String::new(),
    };

    let (Some(expected_type), Some(expected_value)) = (entry.expected_type.clone(), entry.expected_value) else {
        row.strategy = Strategy::NotAttained;
        row.passed = report.residual_tangent > NOT_ATTAINED_RESIDUAL;
        row.detail = format!("printed-basis residual {:.3e}", report.residual_tangent);
        return row;
    };

    let (final_report, value_tol) = if report.is_critical {
        (report, DIRECT_VALUE_TOL)
    } else {
        row.strategy = Strategy::Flow;
        let params = FlowParams { tol, ..FlowParams::default() };
        match descend(&entry.bracket, &params) {
            Ok(trace) => {
                row.iterations = trace.iterations;
                if !trace.converged {
                    row.detail = format!("descent stopped: {:?}", trace.termination);
                    row.computed_value = Some(trace.final_report.f);
                    return row;
                }
                (trace.final_report, FLOW_VALUE_TOL)
            }
            Err(e) => {
                row.detail = format!("{e}");
                return row;
            }
        }
    };
    row.computed_value = Some(final_report.f);
    match final_report.critical_type(TYPE_TOL, MAX_DENOMINATOR) {
        Ok(t) => row.computed_type = Some(t),
        Err(e) => {
            row.detail = format!("{e}");
            return row;
        }
    }
    let type_ok = row.computed_type.as_ref().is_some_and(|t| t.same_type(&expected_type));
    let err = rel_err(final_report.f, expected_value);
    row.passed = type_ok && err <= value_tol;
    row.detail = format!("relative value error {err:.3e}");
    row
}

/// Golden run over [`verification_cases`].
pub fn verify_catalog(tol: f64) -> Vec<VerificationRow> {
    verification_cases().iter().map(|c| verify_entry(c, tol)).collect()
}
