//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use leibniz_moment::catalog::{self, verification_cases, verify_catalog, Strategy};
use leibniz_moment::extensions::{
    build_general_extension, build_solvable_extension, ActionMaps, ExtensionCore, ExtensionSpec, ReductivePart,
};
use leibniz_moment::flow::{descend, perturb_in_orbit, FlowParams};
use leibniz_moment::random;
use leibniz_moment::structure::{verify_structure_theorem, RestrictedType};
use leibniz_moment::{
    check_identities, critical_value_formula, criticality_decompose, exp_map, functional_value, gl_act,
    hermitian_eigen, moment_matrix, Bracket, LinearMap, MomentReport, C64,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn entry(name: &str, params: &[C64], n: Option<usize>) -> Bracket {
    catalog::get(name, params, n).expect("catalog entry").bracket
}

fn report(mu: &Bracket) -> MomentReport {
    criticality_decompose(mu, 1e-8).expect("nonzero bracket")
}

fn type_string(r: &MomentReport) -> Result<String, String> {
    r.critical_type(1e-6, 100).map(|t| t.to_string()).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows = verify_catalog(1e-8);
    let elapsed = start.elapsed().as_secs_f64();
    let mut required: Vec<String> = ["L1", "L2", "S1", "S2", "S4", "L5", "S3(1)", "L4", "S3(1/4)", "S6", "S8"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for name in ["L3", "S5", "S7"] {
        required.extend(["1", "2", "i"].iter().map(|a| format!("{name}({a})")));
    }
    for label in &required {
        let row = rows.iter().find(|r| &r.label == label).ok_or(format!("missing row {label}"))?;
        ensure(row.passed, format!("{label} failed: {}", row.detail))?;
        match row.strategy {
            Strategy::Direct => {
                ensure(rel(row.computed_value.unwrap(), row.expected_value.unwrap()) <= 1e-8, label.clone())?
            }
            Strategy::Flow => {
                ensure(rel(row.computed_value.unwrap(), row.expected_value.unwrap()) <= 1e-6, label.clone())?
            }
            Strategy::NotAttained => ensure(row.given_residual > 0.1, label.clone())?,
        }
    }
    for label in ["L5", "S3(1)"] {
        ensure(
            rows.iter().any(|r| r.label == label && r.strategy == Strategy::Flow),
            format!("{label} not decided by flow"),
        )?;
    }
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed).map(|r| r.label.clone()).collect();
    ensure(failed.is_empty(), format!("failed rows {failed:?}"))?;
    ensure(elapsed < 60.0, format!("took {elapsed:.1}s"))?;
    Ok(format!("{} rows pass in {elapsed:.2}s", rows.len()))
}

fn criterion_2() -> Outcome {
    for (name, ty, value) in [("lie2", "(0<1;1,1)", 4.0), ("nonlie2", "(1<2;1,1)", 20.0)] {
        let r = report(&entry(name, &[], None));
        ensure(r.is_critical, format!("{name} not critical"))?;
        ensure(type_string(&r)? == ty, format!("{name} type {}", type_string(&r)?))?;
        ensure(rel(r.f, value) <= 1e-8, format!("{name} value {}", r.f))?;
    }
    Ok("2D Lie 4, 2D non-Lie 20".into())
}

fn criterion_3() -> Outcome {
    for (name, ty, value) in
        [("mu_hy", "(0<1;1,3)", 4.0), ("mu_he", "(2<3<4;2,1,1)", 12.0), ("mu_sy", "(3<5<6;1,2,1)", 20.0)]
    {
        let r = report(&entry(name, &[], Some(4)));
        ensure(
            r.is_critical && type_string(&r)? == ty && rel(r.f, value) <= 1e-8,
            format!("{name}: {} {}", r.f, type_string(&r)?),
        )?;
    }
    // rows come out in case order
    let mut best: Vec<(String, f64)> = Vec::new();
    for (row, case) in verify_catalog(1e-8).into_iter().zip(verification_cases()) {
        let dim = catalog::get(case.name, &case.params, case.n).map(|e| e.dim).unwrap_or(0);
        if let (Some(v), 3, None) = (row.computed_value, dim, case.n) {
            best.push((row.label, v));
        }
    }
    let max = best.iter().map(|b| b.1).fold(f64::MIN, f64::max);
    let at_max: Vec<&str> = best.iter().filter(|b| rel(b.1, 20.0) <= 1e-8).map(|b| b.0.as_str()).collect();
    ensure(rel(max, 20.0) <= 1e-8 && at_max == ["S1"], format!("max {max} at {at_max:?}"))?;
    Ok(format!("n = 4 values 4, 12, 20; 3D maximum 20 only at S1 among {} entries", best.len()))
}

fn criterion_4() -> Outcome {
    let r = report(&entry("so3", &[], None));
    let scalar_defect = r.d.norm() / r.m.norm();
    ensure(r.is_critical && scalar_defect < 1e-12, format!("so3 not scalar: {scalar_defect:e}"))?;
    ensure((r.f - 4.0 / 3.0).abs() <= 1e-10, format!("so3 value {}", r.f))?;
    let trace = descend(&entry("L5", &[], None), &FlowParams { max_iter: 50_000, ..FlowParams::default() })
        .map_err(|e| e.to_string())?;
    ensure(trace.converged && trace.iterations <= 50_000, "L5 descent did not converge")?;
    ensure((trace.final_report.f - 4.0 / 3.0).abs() <= 1e-6, format!("L5 limit {}", trace.final_report.f))?;
    Ok(format!("so3 F = {:.12}; L5 descent reaches {:.12} in {} steps", r.f, trace.final_report.f, trace.iterations))
}

fn criterion_5() -> Outcome {
    let mu = entry("nonsym2", &[], None);
    let r = report(&mu);
    ensure(
        r.is_critical && type_string(&r)? == "(0<1;1,1)" && rel(r.f, 4.0) <= 1e-8,
        "nonsym2 not critical of the stated type",
    )?;
    ensure(!check_identities(&mu, 1e-9).is_symmetric_leibniz, "nonsym2 is symmetric")?;
    Ok("e1e2=e2 critical, type (0<1;1,1), F = 4, not symmetric".into())
}

fn criterion_6() -> Outcome {
    let mut rng = random::rng(2024);
    let mut worst_trace = 0.0f64;
    let mut worst_gap = f64::MAX;
    for i in 0..500 {
        let n = 2 + i % 4;
        let mu = random::bracket(&mut rng, n);
        let m = moment_matrix(&mu);
        let t = (m.trace() + 2.0 * mu.norm_sq()).abs() / mu.norm_sq();
        worst_trace = worst_trace.max(t);
        let f = functional_value(&mu).map_err(|e| e.to_string())?;
        worst_gap = worst_gap.min(f - 4.0 / n as f64);
        ensure(t < 1e-9, format!("trace identity off by {t:e} at sample {i}"))?;
        ensure(f >= 4.0 / n as f64 - 1e-10, format!("F = {f} below 4/{n} at sample {i}"))?;
    }
    Ok(format!("500 brackets; worst trace defect {worst_trace:.1e}, smallest F - 4/n {worst_gap:.3e}"))
}

fn criterion_7() -> Outcome {
    let mut rng = random::rng(7);
    let mut worst = 0.0f64;
    let h = 1e-5;
    for i in 0..100 {
        let n = 2 + i % 4;
        let mu = random::bracket(&mut rng, n);
        let a = random::hermitian(&mut rng, n);
        let pairing = (moment_matrix(&mu).matrix() * a.matrix()).trace().re;
        let norm_at = |t: f64| -> Result<f64, String> {
            let g = exp_map(&a.as_map().scale(C64::new(t, 0.0)));
            Ok(gl_act(&g, &mu).map_err(|e| e.to_string())?.norm_sq())
        };
        let fd = (norm_at(h)? - norm_at(-h)?) / (2.0 * h);
        let err = (pairing - fd).abs() / pairing.abs();
        worst = worst.max(err);
        ensure(err < 1e-4, format!("pair {i}: tr(MA) = {pairing}, difference quotient {fd}"))?;
    }
    Ok(format!("100 pairs; worst relative error {worst:.1e}"))
}

/// Critical points met in criteria 1–5 with their symmetric and nilpotent flags.
fn critical_points() -> Result<Vec<(String, Bracket)>, String> {
    let mut out = Vec::new();
    for case in verification_cases() {
        let e = catalog::get(case.name, &case.params, case.n).map_err(|e| e.to_string())?;
        if e.critical_in_given_basis {
            out.push((e.label(), e.bracket));
        }
    }
    for (name, params) in [("L5", vec![]), ("S3", vec![C64::new(1.0, 0.0)])] {
        let trace = descend(&entry(name, &params, None), &FlowParams::default()).map_err(|e| e.to_string())?;
        out.push((format!("flow limit of {name}"), trace.final_bracket));
    }
    Ok(out)
}

fn criterion_8() -> Outcome {
    let points = critical_points()?;
    let mut checked = 0;
    for (label, mu) in &points {
        let r = report(mu);
        ensure(r.is_critical, format!("{label} not critical"))?;
        r.critical_type(1e-6, 100).map_err(|e| format!("{label}: {e}"))?;
        let ids = check_identities(mu, 1e-9);
        let (eig, _) = hermitian_eigen(&r.d.scale(1.0 / r.norm_sq));
        if ids.is_symmetric_leibniz {
            ensure(eig[0] >= -1e-8, format!("{label}: min eigenvalue {}", eig[0]))?;
            checked += 1;
        }
    }
    for label in ["L1", "S1", "S2", "flow limit of S3"] {
        let mu = &points.iter().find(|p| p.0 == label).ok_or(format!("missing {label}"))?.1;
        let r = report(mu);
        let (eig, _) = hermitian_eigen(&r.d.scale(1.0 / r.norm_sq));
        ensure(eig[0] > 0.0, format!("{label}: D not positive definite, min {}", eig[0]))?;
    }
    Ok(format!("{} critical points typed with denominators <= 100; {checked} symmetric with D >= 0", points.len()))
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    let mut degenerate = Vec::new();
    for (label, mu) in critical_points()? {
        if !check_identities(&mu, 1e-9).is_symmetric_leibniz {
            continue;
        }
        let r = report(&mu);
        let v = verify_structure_theorem(&mu, &r, 1e-8).map_err(|e| format!("{label}: {e}"))?;
        ensure(v.all_passed(), format!("{label}: {v:?}"))?;
        ensure(v.adjoint_closed.residual < 1e-8 && v.center_normal.residual < 1e-8, format!("{label}: residuals"))?;
        ensure(v.l0_reductive.closure_residual < 1e-8 && v.l0_reductive.lie_residual < 1e-8, format!("{label}: l0"))?;
        ensure(v.nilradical.ideal_residual < 1e-8, format!("{label}: ideal residual"))?;
        match &v.nilradical.restricted {
            RestrictedType::Critical { matches, residual, .. } => {
                ensure(*matches && *residual < 1e-8, format!("{label}: restricted type"))?
            }
            RestrictedType::DegenerateAbelian => degenerate.push(label.clone()),
            RestrictedType::Empty => {}
            other => return Err(format!("{label}: {other:?}")),
        }
        count += 1;
    }
    Ok(format!("{count} symmetric critical points; abelian nilradical (degenerate) at {}", degenerate.join(", ")))
}

fn criterion_10() -> Outcome {
    let core = ExtensionCore::critical(entry("S1", &[], None), 1e-8).map_err(|e| e.to_string())?;
    let spec = ExtensionSpec {
        core: core.clone(),
        actions: vec![ActionMaps { left: LinearMap::from_diagonal(&[0.0, 1.0, 0.0]), right: LinearMap::zeros(3) }],
        reductive: None,
    };
    let a = build_solvable_extension(&spec, 1e-8).map_err(|e| e.to_string())?;
    ensure(a.report.is_critical && a.certified, "solvable extension not certified")?;
    ensure(a.critical_type.to_string() == "(0<3<5<6;1,1,1,1)", a.critical_type.to_string())?;
    ensure((a.report.f - 10.0 / 3.0).abs() <= 1e-8, format!("solvable F {}", a.report.f))?;
    let fa = critical_value_formula(&a.critical_type, 4).map_err(|e| e.to_string())?;
    ensure((fa - a.report.f).abs() <= 1e-8, "solvable formula mismatch")?;

    let spec = ExtensionSpec {
        core,
        actions: (0..3).map(|_| ActionMaps { left: LinearMap::zeros(3), right: LinearMap::zeros(3) }).collect(),
        reductive: Some(ReductivePart { bracket: entry("so3", &[], None), semisimple: vec![0, 1, 2] }),
    };
    let b = build_general_extension(&spec, 1e-8).map_err(|e| e.to_string())?;
    ensure(b.report.is_critical && b.certified, "general extension not certified")?;
    ensure(b.critical_type.to_string() == "(0<3<5<6;3,1,1,1)", b.critical_type.to_string())?;
    ensure((b.report.f - 1.25).abs() <= 1e-8, format!("general F {}", b.report.f))?;
    let fb = critical_value_formula(&b.critical_type, 6).map_err(|e| e.to_string())?;
    ensure((fb - b.report.f).abs() <= 1e-8, "general formula mismatch")?;
    Ok(format!("F = {:.12} and {:.12}, matching the type formula", a.report.f, b.report.f))
}

fn criterion_11() -> Outcome {
    let mut worst_f = 0.0f64;
    let mut worst_spec = 0.0f64;
    for name in ["L1", "S1", "S2"] {
        let mu = entry(name, &[], None);
        let base = report(&mu);
        let base_spec = base.moment_spectrum();
        for seed in 1..=3 {
            let start = perturb_in_orbit(&mu, 0.5, seed).map_err(|e| e.to_string())?;
            let trace = descend(&start, &FlowParams::default()).map_err(|e| e.to_string())?;
            let df = (trace.final_report.f - base.f).abs();
            let spec = trace.final_report.moment_spectrum();
            let ds = spec.iter().zip(&base_spec).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            worst_f = worst_f.max(df);
            worst_spec = worst_spec.max(ds);
            ensure(df <= 1e-6, format!("{name} seed {seed}: F {} vs {}", trace.final_report.f, base.f))?;
            ensure(ds <= 1e-5, format!("{name} seed {seed}: spectra differ by {ds:e}"))?;
        }
    }
    Ok(format!("9 runs; worst F gap {worst_f:.1e}, worst spectrum gap {worst_spec:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("catalog golden run", criterion_1),
        ("two-dimensional classification", criterion_2),
        ("maximum value", criterion_3),
        ("minimum value in dimension three", criterion_4),
        ("non-symmetric critical point", criterion_5),
        ("trace identity and lower bound", criterion_6),
        ("pairing and finite differences", criterion_7),
        ("rational types and nonnegativity", criterion_8),
        ("structure of critical points", criterion_9),
        ("extension builders", criterion_10),
        ("orbit uniqueness under descent", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
