mod common;

use common::r;
use leibniz_moment::catalog;
use leibniz_moment::random;
use leibniz_moment::{
    critical_type, critical_value_formula, criticality_decompose, functional_value, gl_act, inf_act, moment_matrix,
    Bracket, CMatrix, CriticalType, Error, HermitianMap, LinearMap,
};
use proptest::prelude::*;

fn s1() -> Bracket {
    catalog::get("S1", &[], None).unwrap().bracket
}

fn real_diag(m: &CMatrix) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, i)].re).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn s1_moment_decomposition() {
    let rep = criticality_decompose(&s1(), 1e-8).unwrap();
    assert!(close(&real_diag(rep.m.matrix()), &[2.0, 0.0, -4.0], 1e-12));
    assert!((rep.c + 10.0).abs() < 1e-12);
    assert!(close(&real_diag(rep.d.matrix()), &[12.0, 10.0, 6.0], 1e-12));
    assert!((rep.f - 20.0).abs() < 1e-12);
    assert!(rep.is_critical);
    let t = rep.critical_type(1e-6, 100).unwrap();
    assert_eq!(t.to_string(), "(3<5<6;1,1,1)");
}

#[test]
fn two_dimensional_values() {
    let lie2 = catalog::get("lie2", &[], None).unwrap().bracket;
    let rep = criticality_decompose(&lie2, 1e-8).unwrap();
    assert!((rep.c + 4.0).abs() < 1e-12 && (rep.f - 4.0).abs() < 1e-12);
    let nonlie = catalog::get("nonlie2", &[], None).unwrap().bracket;
    let rep = criticality_decompose(&nonlie, 1e-8).unwrap();
    assert!((rep.c + 10.0).abs() < 1e-12 && (rep.f - 20.0).abs() < 1e-12);
    assert!(close(&real_diag(rep.d.matrix()), &[6.0, 12.0], 1e-12));
}

#[test]
fn moment_matches_pairing_oracle_on_catalog() {
    for info in catalog::CATALOG {
        let params = vec![r(2.0); info.params.len()];
        let n = info.takes_dim.then_some(5);
        let mu = catalog::get(info.name, &params, n).unwrap().bracket;
        let m = moment_matrix(&mu);
        assert!(common::max_abs_diff(m.matrix(), &common::moment(&mu)) < 1e-12, "{}", info.name);
    }
}

#[test]
fn zero_bracket_is_rejected() {
    assert!(matches!(functional_value(&Bracket::zero(3)), Err(Error::ZeroBracket)));
    assert!(matches!(criticality_decompose(&Bracket::zero(3), 1e-8), Err(Error::ZeroBracket)));
}

#[test]
fn sl2_standard_basis_is_not_critical() {
    let l5 = catalog::get("L5", &[], None).unwrap().bracket;
    let rep = criticality_decompose(&l5, 1e-8).unwrap();
    assert!(!rep.is_critical);
    assert!(rep.residual_tangent > 0.1);
    assert!(rep.residual_decomp > 0.1);
}

#[test]
fn so3_has_scalar_moment() {
    let so3 = catalog::get("so3", &[], None).unwrap().bracket;
    let rep = criticality_decompose(&so3, 1e-8).unwrap();
    assert!(rep.is_critical);
    assert!(rep.d.norm() < 1e-12);
    assert!((rep.f - 4.0 / 3.0).abs() < 1e-12);
    assert!(rep.critical_type(1e-6, 100).unwrap().is_zero());
}

#[test]
fn critical_type_examples() {
    let d = HermitianMap::from_real_diagonal(&[12.0, 10.0, 6.0]);
    assert_eq!(critical_type(&d, 1e-6, 100).unwrap().to_string(), "(3<5<6;1,1,1)");
    let d = HermitianMap::from_real_diagonal(&[0.0, 0.5, 0.5, 1.0]);
    assert_eq!(critical_type(&d, 1e-6, 100).unwrap().to_string(), "(0<1<2;1,2,1)");
    let d = HermitianMap::from_real_diagonal(&[0.0, 0.0]);
    assert_eq!(critical_type(&d, 1e-6, 100).unwrap().to_string(), "(0;2)");
    let d = HermitianMap::from_real_diagonal(&[1.0, 2f64.sqrt()]);
    assert!(matches!(critical_type(&d, 1e-6, 100), Err(Error::IrrationalType { .. })));
    // 1/101 needs a denominator above the bound
    let d = HermitianMap::from_real_diagonal(&[1.0, 101.0]);
    assert!(critical_type(&d, 1e-6, 100).is_err());
    assert!(critical_type(&d, 1e-6, 200).is_ok());
}

#[test]
fn critical_value_formula_examples() {
    let t = |ks: &[i64], ds: &[usize]| CriticalType::new(ks.to_vec(), ds.to_vec()).unwrap();
    let f = |ks: &[i64], ds: &[usize], n| critical_value_formula(&t(ks, ds), n).unwrap();
    assert!((f(&[3, 5, 6], &[1, 1, 1], 3) - 20.0).abs() < 1e-12);
    assert!((f(&[1, 2], &[2, 1], 3) - 12.0).abs() < 1e-12);
    assert!((f(&[0, 1], &[1, 2], 3) - 4.0).abs() < 1e-12);
    assert!((f(&[0, 3, 5, 6], &[3, 1, 1, 1], 6) - 1.25).abs() < 1e-12);
    assert!((critical_value_formula(&CriticalType::zero(3), 3).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    assert!(matches!(critical_value_formula(&t(&[1, 2], &[1, 1]), 3), Err(Error::TypeDimension { sum: 2, n: 3 })));
    assert!(matches!(critical_value_formula(&t(&[1], &[2]), 2), Err(Error::DegenerateType)));
}

#[test]
fn formula_agrees_with_direct_values() {
    for case in catalog::verification_cases() {
        let e = catalog::get(case.name, &case.params, case.n).unwrap();
        let rep = criticality_decompose(&e.bracket, 1e-8).unwrap();
        if !rep.is_critical {
            continue;
        }
        let t = rep.critical_type(1e-6, 100).unwrap();
        let f = critical_value_formula(&t, e.dim).unwrap();
        assert!((f - rep.f).abs() < 1e-9 * rep.f, "{}", e.label());
    }
}

fn seeded() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 2usize..=5)
}

proptest! {
    #![proptest_config(common::config(64))]

    #[test]
    fn moment_matches_oracle((seed, n) in seeded()) {
        let mu = common::bracket(seed, n);
        let m = moment_matrix(&mu);
        prop_assert!(common::max_abs_diff(m.matrix(), &common::moment(&mu)) < 1e-10 * mu.norm_sq());
    }

    #[test]
    fn trace_identity_and_lower_bound((seed, n) in seeded()) {
        let mu = common::bracket(seed, n);
        let m = moment_matrix(&mu);
        prop_assert!((m.trace() + 2.0 * mu.norm_sq()).abs() < 1e-9 * mu.norm_sq());
        prop_assert!(functional_value(&mu).unwrap() >= 4.0 / n as f64 - 1e-10);
    }

    #[test]
    fn pairing_is_derivative_of_norm((seed, n) in seeded()) {
        let mu = common::bracket(seed, n);
        let a = random::hermitian(&mut random::rng(seed ^ 0xabc), n);
        let m = moment_matrix(&mu);
        let pairing = (m.matrix() * a.matrix()).trace().re;
        // exact derivative: 2 Re⟨A.μ, μ⟩
        let act = common::inf_act(a.matrix(), &mu);
        let exact: f64 = act.iter().zip(mu.coeffs()).map(|(x, y)| (x * y.conj()).re).sum::<f64>() * 2.0;
        prop_assert!((pairing - exact).abs() < 1e-9 * mu.norm_sq() * (1.0 + a.norm()));
        let h = 1e-5;
        let norm_at = |t: f64| gl_act(&LinearMap::new(common::expm(&(a.matrix() * r(t)))).unwrap(), &mu).unwrap().norm_sq();
        let fd = (norm_at(h) - norm_at(-h)) / (2.0 * h);
        prop_assert!((pairing - fd).abs() <= 1e-4 * pairing.abs().max(mu.norm_sq() * 1e-3));
    }

    #[test]
    fn moment_is_unitarily_equivariant((seed, n) in seeded()) {
        let mu = common::bracket(seed, n);
        let u = random::unitary(&mut random::rng(seed.wrapping_mul(3)), n);
        let lhs = moment_matrix(&gl_act(&u, &mu).unwrap());
        let rhs = u.matrix() * moment_matrix(&mu).matrix() * u.matrix().adjoint();
        prop_assert!(common::max_abs_diff(lhs.matrix(), &rhs) < 1e-10 * mu.norm_sq());
    }

    #[test]
    fn functional_is_scale_invariant((seed, n) in seeded(), s in 0.01f64..100.0) {
        let mu = common::bracket(seed, n);
        let a = functional_value(&mu).unwrap();
        let b = functional_value(&mu.scaled(r(s))).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn critical_points_stay_critical_under_unitaries(seed in any::<u64>(), pick in 0usize..6) {
        let names = ["L1", "S1", "S2", "lie2", "nonlie2", "so3"];
        let mu = catalog::get(names[pick], &[], None).unwrap().bracket;
        let base = criticality_decompose(&mu, 1e-8).unwrap();
        let u = random::unitary(&mut random::rng(seed), mu.dim());
        let moved = criticality_decompose(&gl_act(&u, &mu).unwrap(), 1e-8).unwrap();
        prop_assert!(moved.is_critical);
        prop_assert!((moved.f - base.f).abs() < 1e-9 * base.f);
        let (t0, t1) = (base.critical_type(1e-6, 100).unwrap(), moved.critical_type(1e-6, 100).unwrap());
        prop_assert!(t0.same_type(&t1));
    }

    #[test]
    fn derivative_part_is_a_derivation_at_critical_points(seed in any::<u64>()) {
        let mu = catalog::get("L1", &[], None).unwrap().bracket;
        let u = random::unitary(&mut random::rng(seed), 3);
        let moved = gl_act(&u, &mu).unwrap();
        let rep = criticality_decompose(&moved, 1e-8).unwrap();
        let defect = common::derivation_defect(rep.d.matrix(), &moved);
        prop_assert!(defect < 1e-9 * rep.d.norm() * moved.norm());
        let act = inf_act(rep.d.as_map(), &moved).unwrap();
        prop_assert!(act.norm() < 1e-9 * rep.d.norm() * moved.norm());
    }
}
