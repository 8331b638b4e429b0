//! Independent reference computations, written directly from the defining formulas.
#![allow(dead_code)]

use leibniz_moment::random;
use leibniz_moment::{Bracket, CMatrix, CVector, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `μ(x, y)` by the double sum over structure constants.
pub fn eval(mu: &Bracket, x: &CVector, y: &CVector) -> CVector {
    let n = mu.dim();
    CVector::from_fn(n, |k, _| {
        let mut s = r(0.0);
        for i in 0..n {
            for j in 0..n {
                s += x[i] * y[j] * mu.get(i, j, k);
            }
        }
        s
    })
}

/// Coefficients of `(A.μ)_{ij}^k = Σ_c A_kc c_ij^c − A_ci c_cj^k − A_cj c_ic^k`.
pub fn inf_act(a: &CMatrix, mu: &Bracket) -> Vec<C64> {
    let n = mu.dim();
    let mut out = vec![r(0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = r(0.0);
                for l in 0..n {
                    s += a[(k, l)] * mu.get(i, j, l) - a[(l, i)] * mu.get(l, j, k) - a[(l, j)] * mu.get(i, l, k);
                }
                out[(i * n + j) * n + k] = s;
            }
        }
    }
    out
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `M_μ` from the pairing `tr(M E_kl) = 2⟨E_kl.μ, μ⟩` with matrix units `E_kl`.
pub fn moment(mu: &Bracket) -> CMatrix {
    let n = mu.dim();
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let mut e = CMatrix::zeros(n, n);
            e[(k, l)] = r(1.0);
            let act = inf_act(&e, mu);
            let p: C64 = act.iter().zip(mu.coeffs()).map(|(a, b)| a * b.conj()).sum();
            // tr(M E_kl) = M_lk
            m[(l, k)] = p * 2.0;
        }
    }
    m
}

/// `‖D μ(e_i, e_j) − μ(D e_i, e_j) − μ(e_i, D e_j)‖` summed over basis pairs.
pub fn derivation_defect(d: &CMatrix, mu: &Bracket) -> f64 {
    let n = mu.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let lhs = d * eval(mu, &ei, &ej);
            let rhs = eval(mu, &(d * &ei), &ej) + eval(mu, &ei, &(d * &ej));
            s += (lhs - rhs).norm_squared();
        }
    }
    s.sqrt()
}

pub fn unit(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = r(1.0);
    v
}

/// `g μ(g⁻¹x, g⁻¹y)` evaluated on basis pairs.
pub fn gl_act(g: &CMatrix, mu: &Bracket) -> Bracket {
    let n = mu.dim();
    let gi = g.clone().try_inverse().expect("invertible");
    let mut coeffs = vec![r(0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let v = g * eval(mu, &gi.column(i).into_owned(), &gi.column(j).into_owned());
            for k in 0..n {
                coeffs[(i * n + j) * n + k] = v[k];
            }
        }
    }
    Bracket::new(n, coeffs).unwrap()
}

/// `exp(A)` by a long Taylor series, adequate for `‖A‖ ≲ 2`.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..60 {
        term = &term * a / r(k as f64);
        sum += &term;
    }
    sum
}

pub fn bracket(seed: u64, n: usize) -> Bracket {
    random::bracket(&mut random::rng(seed), n)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}
