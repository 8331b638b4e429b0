//! Descent of `F` inside a `GL(n)`-orbit.
//!
//! Each step moves along the orbit tangent generated by `M_μ`. The generator is
//! `M_μ` with its component in `ℂI + Der(μ)` removed; that component fixes `[μ]`,
//! so the tangent direction is unchanged while the accumulated group element
//! stays well conditioned. Iterates are `G.μ₀ / ‖G.μ₀‖`, so they never leave the orbit.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{condition_number, derivation_space, expm, LinearMap, RANK_TOL};
use crate::moment::{criticality_decompose, functional_value, tangent, MomentReport};
use crate::tensor::{gl_act, Bracket};
use crate::{CMatrix, C64};

/// Orbit condition number above which a limit is flagged as possibly outside the orbit.
pub const CLOSURE_CONDITION: f64 = 1e6;
/// Relative slack in the sufficient-decrease test, covering rounding in `F`.
pub const ARMIJO_SLACK: f64 = 4e-16;
/// Smallest step before the line search gives up.
pub const MIN_STEP: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    /// Initial step of each line search, in units of `1/‖M_μ‖`.
    pub step0: f64,
    pub armijo_c: f64,
    pub shrink: f64,
    pub max_iter: usize,
    /// Target tangent residual.
    pub tol: f64,
    /// Seed for callers that perturb the starting point; the descent itself is deterministic.
    pub seed: u64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams { step0: 0.1, armijo_c: 1e-4, shrink: 0.5, max_iter: 50_000, tol: 1e-8, seed: 0 }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidParameter(s.into()));
        if !(self.step0 > 0.0 && self.step0.is_finite()) {
            return bad("step0 must be positive");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return bad("shrink must lie in (0, 1)");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Converged,
    MaxIterations,
    /// The line search shrank the step below [`MIN_STEP`] without sufficient decrease.
    StepUnderflow {
        step: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    /// Unit-norm final iterate.
    pub final_bracket: Bracket,
    pub f_history: Vec<f64>,
    pub residual_history: Vec<f64>,
    /// Accepted steps.
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub final_report: MomentReport,
    /// Condition number of the accumulated group element.
    pub orbit_condition: f64,
    /// Set when the run did not converge or the group element degenerated:
    /// the limit may lie outside the orbit.
    pub closure_warning: bool,
}

/// Generator `M − P(M)` with `P` the projection onto `span_C{I} ∪ Der(μ)`.
fn generator(m: &CMatrix, mu: &Bracket) -> CMatrix {
    let n = mu.dim();
    let mut basis = vec![CMatrix::identity(n, n)];
    basis.extend(derivation_space(mu, RANK_TOL).into_iter().map(LinearMap::into_matrix));
    let mut q: Vec<CMatrix> = Vec::new();
    for mut b in basis {
        for qi in &q {
            let p: C64 = b.iter().zip(qi.iter()).map(|(x, y)| x * y.conj()).sum();
            b -= qi * p;
        }
        let nb = b.norm();
        if nb > 1e-10 {
            q.push(b / C64::new(nb, 0.0));
        }
    }
    let mut a = m.clone();
    for qi in &q {
        let p: C64 = m.iter().zip(qi.iter()).map(|(x, y)| x * y.conj()).sum();
        a -= qi * p;
    }
    a
}

pub fn descend(mu0: &Bracket, p: &FlowParams) -> Result<FlowTrace> {
    p.validate()?;
    let start = mu0.normalized()?;
    let n = start.dim();
    let mut g = CMatrix::identity(n, n);
    let mut mu = start.clone();
    let mut f_history = Vec::new();
    let mut residual_history = Vec::new();
    let mut iterations = 0;

    let termination = loop {
        let t = tangent(&mu)?;
        f_history.push(t.f);
        residual_history.push(t.residual);
        if t.residual < p.tol {
            break Termination::Converged;
        }
        if iterations >= p.max_iter {
            break Termination::MaxIterations;
        }
        let slope = 8.0 * t.direction.norm_sq();
        let a = generator(t.m.matrix(), &mu);
        let mut h = p.step0 / t.m.norm();
        let accepted = loop {
            if h < MIN_STEP {
                break None;
            }
            let mut gn = expm(&(&a * C64::new(-h, 0.0))) * &g;
            let gnorm = gn.norm();
            gn /= C64::new(gnorm, 0.0);
            let candidate = LinearMap::new(gn.clone()).and_then(|gm| gl_act(&gm, &start)).and_then(|b| b.normalized());
            if let Ok(candidate) = candidate {
                let fc = functional_value(&candidate)?;
                if fc <= t.f - p.armijo_c * h * slope + ARMIJO_SLACK * t.f {
                    break Some((gn, candidate));
                }
            }
            h *= p.shrink;
        };
        match accepted {
            Some((gn, candidate)) => {
                g = gn;
                mu = candidate;
                iterations += 1;
            }
            None => break Termination::StepUnderflow { step: h },
        }
    };

    let final_report = criticality_decompose(&mu, p.tol)?;
    let converged = termination == Termination::Converged;
    let orbit_condition = condition_number(&g);
    Ok(FlowTrace {
        final_bracket: mu,
        f_history,
        residual_history,
        iterations,
        converged,
        termination,
        final_report,
        orbit_condition,
        closure_warning: !converged || orbit_condition > CLOSURE_CONDITION,
    })
}

/// `exp(A).μ` for a seeded random `A` with `‖A‖ = magnitude`.
pub fn perturb_in_orbit(mu: &Bracket, magnitude: f64, seed: u64) -> Result<Bracket> {
    if !(magnitude >= 0.0 && magnitude.is_finite()) {
        return Err(Error::InvalidParameter("magnitude must be a finite nonnegative number".into()));
    }
    if magnitude == 0.0 {
        return Ok(mu.clone());
    }
    let mut rng = crate::random::rng(seed);
    let a = crate::random::matrix(&mut rng, mu.dim());
    let a = &a * C64::new(magnitude / a.norm(), 0.0);
    gl_act(&LinearMap::new(expm(&a))?, mu)
}
