//! Reports: serializable summaries of library results, each with a text rendering.

use std::fmt::{self, Write as _};

use leibniz_moment::catalog::{CatalogEntry, VerificationRow};
use leibniz_moment::extensions::{Extension, IdentityPath};
use leibniz_moment::flow::{FlowTrace, Termination};
use leibniz_moment::structure::{structure_profile, verify_structure_theorem, RestrictedType, StructureProfile};
use leibniz_moment::{
    check_identities, critical_value_formula, criticality_decompose, hermitian_eigen, Bracket, CMatrix, IdentityReport,
    MomentReport,
};
use serde::Serialize;

use crate::algebra_file::AlgebraFile;
use crate::error::CliError;
use crate::text::{list, num, yes};

/// Relative tolerance for clustering eigenvalues when fitting a type.
pub const TYPE_TOL: f64 = leibniz_moment::moment::TYPE_TOL;
/// Threshold for the identity checks.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identities {
    pub left_leibniz: bool,
    pub right_leibniz: bool,
    pub symmetric_leibniz: bool,
    pub lie: bool,
    pub left_residual: f64,
    pub right_residual: f64,
    pub anticommutativity_residual: f64,
    pub jacobi_residual: f64,
}

impl From<IdentityReport> for Identities {
    fn from(r: IdentityReport) -> Self {
        Identities {
            left_leibniz: r.is_left_leibniz,
            right_leibniz: r.is_right_leibniz,
            symmetric_leibniz: r.is_symmetric_leibniz,
            lie: r.is_lie,
            left_residual: r.left_residual,
            right_residual: r.right_residual,
            anticommutativity_residual: r.anticommutativity_residual,
            jacobi_residual: r.jacobi_residual,
        }
    }
}

impl fmt::Display for Identities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "left Leibniz: {} (residual {})", yes(self.left_leibniz), num(self.left_residual))?;
        writeln!(f, "right Leibniz: {} (residual {})", yes(self.right_leibniz), num(self.right_residual))?;
        writeln!(f, "symmetric Leibniz: {}, Lie: {}", yes(self.symmetric_leibniz), yes(self.lie))?;
        writeln!(f, "anticommutativity residual: {}", num(self.anticommutativity_residual))?;
        writeln!(f, "Jacobi residual: {}", num(self.jacobi_residual))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: Option<String>,
    pub dim: usize,
    pub identities: Identities,
}

impl CheckReport {
    pub fn new(name: Option<String>, mu: &Bracket) -> Self {
        CheckReport { name, dim: mu.dim(), identities: check_identities(mu, IDENTITY_TOL).into() }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        header(f, self.name.as_deref(), self.dim)?;
        write!(f, "{}", self.identities)
    }
}

fn header(f: &mut fmt::Formatter<'_>, name: Option<&str>, dim: usize) -> fmt::Result {
    match name {
        Some(name) => writeln!(f, "algebra: {name} (dimension {dim})"),
        None => writeln!(f, "algebra of dimension {dim}"),
    }
}

/// Row-major matrix with `[re, im]` entries.
pub fn matrix_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moment {
    pub norm_sq: f64,
    /// `F = ‖M‖² / ‖μ‖⁴`.
    pub value: f64,
    pub c: f64,
    pub moment_matrix: Vec<Vec<[f64; 2]>>,
    /// Eigenvalues of `M / ‖μ‖²`.
    pub moment_spectrum: Vec<f64>,
    /// Eigenvalues of `D / ‖μ‖²`.
    pub derivation_spectrum: Vec<f64>,
    pub residual_decomp: f64,
    pub residual_tangent: f64,
    pub derivation_defect: f64,
    pub is_critical: bool,
    pub critical_type: Option<String>,
    pub type_error: Option<String>,
    /// Value predicted by the type, when a type was found.
    pub formula_value: Option<f64>,
}

impl Moment {
    pub fn new(r: &MomentReport, max_den: u64) -> Self {
        let (derivation_spectrum, _) = hermitian_eigen(&r.d.scale(1.0 / r.norm_sq));
        let (critical_type, type_error, formula_value) = if r.is_critical {
            match r.critical_type(TYPE_TOL, max_den) {
                Ok(t) => {
                    let v = critical_value_formula(&t, r.m.dim()).ok();
                    (Some(t.to_string()), None, v)
                }
                Err(e) => (None, Some(e.to_string()), None),
            }
        } else {
            (None, Some("not critical".into()), None)
        };
        Moment {
            norm_sq: r.norm_sq,
            value: r.f,
            c: r.c,
            moment_matrix: matrix_json(r.m.matrix()),
            moment_spectrum: r.moment_spectrum(),
            derivation_spectrum,
            residual_decomp: r.residual_decomp,
            residual_tangent: r.residual_tangent,
            derivation_defect: r.derivation_defect,
            is_critical: r.is_critical,
            critical_type,
            type_error,
            formula_value,
        }
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "value F: {}", num(self.value))?;
        writeln!(f, "norm squared: {}", num(self.norm_sq))?;
        writeln!(f, "c: {}", num(self.c))?;
        writeln!(f, "spectrum of M/|mu|^2: {}", list(&self.moment_spectrum))?;
        writeln!(f, "spectrum of D/|mu|^2: {}", list(&self.derivation_spectrum))?;
        writeln!(f, "decomposition residual: {}", num(self.residual_decomp))?;
        writeln!(f, "tangent residual: {}", num(self.residual_tangent))?;
        writeln!(f, "critical: {}", yes(self.is_critical))?;
        match (&self.critical_type, &self.type_error) {
            (Some(t), _) => writeln!(f, "critical type: {t}")?,
            (None, Some(e)) => writeln!(f, "critical type: none ({e})")?,
            (None, None) => writeln!(f, "critical type: none")?,
        }
        if let Some(v) = self.formula_value {
            writeln!(f, "value from type: {}", num(v))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
}

impl From<StructureProfile> for Profile {
    fn from(p: StructureProfile) -> Self {
        Profile {
            derived_dims: p.derived_dims,
            lower_central_dims: p.lower_central_dims,
            center_dim: p.center_dim,
            is_solvable: p.is_solvable,
            is_nilpotent: p.is_nilpotent,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "derived series: {:?}", self.derived_dims)?;
        writeln!(f, "lower central series: {:?}", self.lower_central_dims)?;
        writeln!(f, "center dimension: {}", self.center_dim)?;
        writeln!(f, "solvable: {}, nilpotent: {}", yes(self.is_solvable), yes(self.is_nilpotent))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCheck {
    pub all_passed: bool,
    pub zero_dim: usize,
    pub positive_dim: usize,
    pub negative_dim: usize,
    pub adjoint_closed: bool,
    pub adjoint_residual: f64,
    pub reductive: bool,
    pub reductive_center_dim: usize,
    pub reductive_derived_dim: usize,
    pub center_normal: bool,
    pub center_normal_residual: f64,
    pub nilradical: bool,
    pub nilradical_ideal_residual: f64,
    pub restricted: String,
}

impl StructureCheck {
    fn new(mu: &Bracket, r: &MomentReport, tol: f64) -> Result<Self, String> {
        let v = verify_structure_theorem(mu, r, tol).map_err(|e| e.to_string())?;
        let restricted = match &v.nilradical.restricted {
            RestrictedType::Critical { critical_type, matches, .. } => {
                format!("{critical_type} ({})", if *matches { "matches" } else { "does not match" })
            }
            RestrictedType::NotCritical { residual } => format!("not critical (residual {})", num(*residual)),
            RestrictedType::NoType { .. } => "critical without a rational type".into(),
            RestrictedType::DegenerateAbelian => "abelian (degenerate)".into(),
            RestrictedType::Empty => "empty".into(),
        };
        Ok(StructureCheck {
            all_passed: v.all_passed(),
            zero_dim: v.grading.zero_part.rank(),
            positive_dim: v.grading.positive_part.rank(),
            negative_dim: v.grading.negative_part.rank(),
            adjoint_closed: v.adjoint_closed.passed,
            adjoint_residual: v.adjoint_closed.residual,
            reductive: v.l0_reductive.passed,
            reductive_center_dim: v.l0_reductive.center_dim,
            reductive_derived_dim: v.l0_reductive.derived_dim,
            center_normal: v.center_normal.passed,
            center_normal_residual: v.center_normal.residual,
            nilradical: v.nilradical.passed,
            nilradical_ideal_residual: v.nilradical.ideal_residual,
            restricted,
        })
    }
}

impl fmt::Display for StructureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure of the critical point: {}", if self.all_passed { "verified" } else { "FAILED" })?;
        writeln!(
            f,
            "  grading dimensions (zero, positive, negative): ({}, {}, {})",
            self.zero_dim, self.positive_dim, self.negative_dim
        )?;
        writeln!(
            f,
            "  adjoints of L_A, R_A are derivations on l_0: {} (residual {})",
            yes(self.adjoint_closed),
            num(self.adjoint_residual)
        )?;
        writeln!(
            f,
            "  l_0 reductive: {} (center {}, derived {})",
            yes(self.reductive),
            self.reductive_center_dim,
            self.reductive_derived_dim
        )?;
        writeln!(
            f,
            "  L_Z, R_Z normal on the center: {} (residual {})",
            yes(self.center_normal),
            num(self.center_normal_residual)
        )?;
        writeln!(
            f,
            "  l_+ nilpotent ideal: {} (residual {})",
            yes(self.nilradical),
            num(self.nilradical_ideal_residual)
        )?;
        writeln!(f, "  restricted type on l_+: {}", self.restricted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub name: Option<String>,
    pub dim: usize,
    pub identities: Identities,
    pub moment: Moment,
    pub profile: Profile,
    pub structure: Option<StructureCheck>,
    /// Why the structure check did not run or could not finish.
    pub structure_note: Option<String>,
}

impl Analysis {
    pub fn new(name: Option<String>, mu: &Bracket, tol: f64, max_den: u64) -> Result<Self, CliError> {
        let r = criticality_decompose(mu, tol)?;
        let identities: Identities = check_identities(mu, IDENTITY_TOL).into();
        let (structure, structure_note) = if !r.is_critical {
            (None, Some("not critical".to_string()))
        } else if !identities.symmetric_leibniz {
            (None, Some("not symmetric Leibniz".to_string()))
        } else {
            match StructureCheck::new(mu, &r, tol) {
                Ok(s) => (Some(s), None),
                Err(e) => (None, Some(e)),
            }
        };
        Ok(Analysis {
            name,
            dim: mu.dim(),
            identities,
            moment: Moment::new(&r, max_den),
            profile: structure_profile(mu, leibniz_moment::linalg::RANK_TOL).into(),
            structure,
            structure_note,
        })
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        header(f, self.name.as_deref(), self.dim)?;
        write!(f, "{}{}{}", self.identities, self.moment, self.profile)?;
        match (&self.structure, &self.structure_note) {
            (Some(s), _) => write!(f, "{s}"),
            (None, Some(note)) => writeln!(f, "structure check skipped: {note}"),
            (None, None) => Ok(()),
        }
    }
}

fn termination(t: &Termination) -> String {
    match t {
        Termination::Converged => "converged".into(),
        Termination::MaxIterations => "iteration limit".into(),
        Termination::StepUnderflow { step } => format!("step underflow at {}", num(*step)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowReport {
    pub iterations: usize,
    pub termination: String,
    pub converged: bool,
    pub initial_value: f64,
    pub final_value: f64,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub orbit_condition: f64,
    pub closure_warning: bool,
    pub output: Option<String>,
    pub analysis: Analysis,
}

impl FlowReport {
    pub fn new(trace: &FlowTrace, analysis: Analysis, output: Option<String>) -> Self {
        FlowReport {
            iterations: trace.iterations,
            termination: termination(&trace.termination),
            converged: trace.converged,
            initial_value: trace.f_history[0],
            final_value: *trace.f_history.last().expect("nonempty history"),
            initial_residual: trace.residual_history[0],
            final_residual: *trace.residual_history.last().expect("nonempty history"),
            orbit_condition: trace.orbit_condition,
            closure_warning: trace.closure_warning,
            output,
            analysis,
        }
    }
}

impl fmt::Display for FlowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "descent: {} after {} steps", self.termination, self.iterations)?;
        writeln!(f, "F: {} -> {}", num(self.initial_value), num(self.final_value))?;
        writeln!(f, "tangent residual: {} -> {}", num(self.initial_residual), num(self.final_residual))?;
        writeln!(f, "orbit condition number: {}", num(self.orbit_condition))?;
        if self.closure_warning {
            writeln!(f, "warning: the limit may lie in the orbit closure rather than the orbit")?;
        }
        if let Some(out) = &self.output {
            writeln!(f, "final bracket written to {out}")?;
        }
        writeln!(f, "final point:")?;
        write!(f, "{}", self.analysis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub label: String,
    pub dim: usize,
    pub class: String,
    pub expected_type: Option<String>,
    pub expected_value: Option<f64>,
    pub critical_in_given_basis: bool,
    pub notes: String,
    pub algebra: AlgebraFile,
}

impl EntryReport {
    pub fn new(e: &CatalogEntry) -> Self {
        EntryReport {
            label: e.label(),
            dim: e.dim,
            class: e.class.as_str().into(),
            expected_type: e.expected_type.as_ref().map(|t| t.to_string()),
            expected_value: e.expected_value,
            critical_in_given_basis: e.critical_in_given_basis,
            notes: e.notes.into(),
            algebra: AlgebraFile::from_bracket(Some(e.label()), &e.params, &e.bracket),
        }
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dimension {}, {})", self.label, self.dim, self.class)?;
        let expected = match (&self.expected_type, self.expected_value) {
            (Some(t), Some(v)) => format!("{t}, value {}", num(v)),
            _ => "no critical point".into(),
        };
        writeln!(f, "expected: {expected}")?;
        writeln!(f, "printed basis critical: {}", yes(self.critical_in_given_basis))?;
        if !self.notes.is_empty() {
            writeln!(f, "notes: {}", self.notes)?;
        }
        writeln!(f, "products (c_ij^k):")?;
        for e in &self.algebra.entries {
            let v = leibniz_moment::C64::new(e.re, e.im);
            writeln!(f, "  e{} e{} -> {} e{}", e.i, e.j, crate::text::complex(v), e.k)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub label: String,
    pub strategy: String,
    pub expected_type: Option<String>,
    pub expected_value: Option<f64>,
    pub computed_type: Option<String>,
    pub computed_value: Option<f64>,
    pub given_residual: f64,
    pub iterations: usize,
    pub passed: bool,
    pub detail: String,
}

impl From<&VerificationRow> for RowReport {
    fn from(r: &VerificationRow) -> Self {
        RowReport {
            label: r.label.clone(),
            strategy: r.strategy.as_str().into(),
            expected_type: r.expected_type.as_ref().map(|t| t.to_string()),
            expected_value: r.expected_value,
            computed_type: r.computed_type.as_ref().map(|t| t.to_string()),
            computed_value: r.computed_value,
            given_residual: r.given_residual,
            iterations: r.iterations,
            passed: r.passed,
            detail: r.detail.clone(),
        }
    }
}

/// Fixed-width table of verification rows.
pub fn verification_table(rows: &[RowReport]) -> String {
    let opt = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
    let optn = |v: Option<f64>| v.map(num).unwrap_or_else(|| "-".into());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<13} {:<16} {:<16} {:<15} {:<15} result",
        "algebra", "strategy", "expected type", "computed type", "expected F", "computed F"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<10} {:<13} {:<16} {:<16} {:<15} {:<15} {}",
            r.label,
            r.strategy,
            opt(&r.expected_type),
            opt(&r.computed_type),
            optn(r.expected_value),
            optn(r.computed_value),
            if r.passed { "pass".to_string() } else { format!("FAIL ({})", r.detail) }
        );
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed} of {} rows pass", rows.len());
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub kind: String,
    pub dim: usize,
    pub identity_path: String,
    pub gram: Vec<Vec<[f64; 2]>>,
    pub critical_type: String,
    pub expected_type: String,
    pub value: f64,
    pub formula_value: Option<f64>,
    pub c: f64,
    pub c_matches_core: bool,
    pub residual_tangent: f64,
    pub certified: bool,
    pub output: Option<String>,
    pub algebra: AlgebraFile,
}

impl ExtensionReport {
    pub fn new(kind: &str, ext: &Extension, output: Option<String>) -> Self {
        let dim = ext.bracket.dim();
        ExtensionReport {
            kind: kind.into(),
            dim,
            identity_path: match ext.identity_path {
                IdentityPath::Symmetric => "symmetric Leibniz",
                IdentityPath::LeftWithRightDerivations => {
                    "left Leibniz, right multiplications by generators are derivations"
                }
                IdentityPath::RightWithLeftDerivations => {
                    "right Leibniz, left multiplications by generators are derivations"
                }
            }
            .into(),
            gram: matrix_json(&ext.gram),
            critical_type: ext.critical_type.to_string(),
            expected_type: ext.expected_type.to_string(),
            value: ext.report.f,
            formula_value: critical_value_formula(&ext.critical_type, dim).ok(),
            c: ext.report.c,
            c_matches_core: ext.c_matches,
            residual_tangent: ext.report.residual_tangent,
            certified: ext.certified,
            output,
            algebra: AlgebraFile::from_bracket(Some(format!("{kind} extension")), &[], &ext.bracket),
        }
    }
}

impl fmt::Display for ExtensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} extension of dimension {}", self.kind, self.dim)?;
        writeln!(f, "identities: {}", self.identity_path)?;
        writeln!(f, "critical type: {} (expected {})", self.critical_type, self.expected_type)?;
        writeln!(f, "value F: {}", num(self.value))?;
        if let Some(v) = self.formula_value {
            writeln!(f, "value from type: {}", num(v))?;
        }
        writeln!(f, "c: {} (equal to the core's: {})", num(self.c), yes(self.c_matches_core))?;
        writeln!(f, "tangent residual: {}", num(self.residual_tangent))?;
        writeln!(f, "certified: {}", yes(self.certified))?;
        match &self.output {
            Some(out) => writeln!(f, "algebra written to {out}"),
            None => {
                writeln!(f, "products (c_ij^k):")?;
                for e in &self.algebra.entries {
                    let v = leibniz_moment::C64::new(e.re, e.im);
                    writeln!(f, "  e{} e{} -> {} e{}", e.i, e.j, crate::text::complex(v), e.k)?;
                }
                Ok(())
            }
        }
    }
}
