//! Number formatting for text reports: 12 significant digits, trailing zeros trimmed.

use leibniz_moment::C64;

const DIGITS: i32 = 12;

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", (DIGITS - 1) as usize, x);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim(mantissa))
    }
}

pub fn complex(z: C64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => num(z.re),
        (true, false) => format!("{}i", num(z.im)),
        (false, false) if z.im < 0.0 => format!("{}-{}i", num(z.re), num(-z.im)),
        _ => format!("{}+{}i", num(z.re), num(z.im)),
    }
}

pub fn list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| num(*x)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
