//! Best rational approximations by continued fractions.

/// Closest fraction `p/q` to `x` with `1 ≤ q ≤ max_den`, considering convergents
/// and the last admissible semiconvergent.
pub fn best_rational(x: f64, max_den: u64) -> (i64, u64) {
    let max_den = max_den.max(1);
    let sign = if x < 0.0 { -1 } else { 1 };
    let y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = y;
    for _ in 0..64 {
        let a = libm::floor(r);
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            let k = (max_den - q0) / q1.max(1);
            let (ps, qs) = (k * p1 + p0, k * q1 + q0);
            if q1 > 0 && qs > 0 {
                let err_semi = (y - ps as f64 / qs as f64).abs();
                let err_conv = (y - p1 as f64 / q1 as f64).abs();
                if err_semi < err_conv {
                    return (sign * ps as i64, qs);
                }
            }
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac <= 1e-15 || (y - p1 as f64 / q1 as f64).abs() <= 1e-15 * y.max(1.0) {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return (sign * libm::round(y) as i64, 1);
    }
    (sign * p1 as i64, q1)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}
