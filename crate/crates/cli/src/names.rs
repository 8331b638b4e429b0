//! Catalog labels on the command line: `S1`, `S5(1+i)`, `S3(1/4)`, `mu_he(4)`.

use leibniz_moment::catalog::{self, CatalogEntry, CATALOG};
use leibniz_moment::C64;

use crate::error::CliError;

fn real(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (f64, f64) = (p.parse().ok()?, q.parse().ok()?);
            (q != 0.0).then_some(p / q)
        }
        None => s.parse().ok(),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`; real and imaginary parts may be fractions.
pub fn parse_complex(text: &str) -> Option<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Some(C64::new(real(&s)?, 0.0));
    };
    // split before the sign of the imaginary part, skipping exponent signs
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (real(&body[..p])?, &body[p..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t.strip_prefix('+').unwrap_or(t))?,
    };
    Some(C64::new(re, im))
}

/// Resolves a label against the catalog.
pub fn resolve(label: &str) -> Result<CatalogEntry, CliError> {
    let (name, args) = match label.split_once('(') {
        Some((name, rest)) => {
            let inner =
                rest.strip_suffix(')').ok_or_else(|| CliError::Input(format!("unbalanced parentheses in {label}")))?;
            (name, inner.split(',').map(str::trim).filter(|a| !a.is_empty()).collect::<Vec<_>>())
        }
        None => (label, vec![]),
    };
    let info = CATALOG
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| CliError::Input(format!("unknown algebra {name}; see `leibniz catalog list`")))?;
    let entry = if info.takes_dim {
        let [n] = args.as_slice() else {
            return Err(CliError::Input(format!("{name} takes one dimension argument, e.g. {name}(4)")));
        };
        let n: usize = n.parse().map_err(|_| CliError::Input(format!("{name}: bad dimension {n}")))?;
        catalog::get(name, &[], Some(n))?
    } else {
        let params = args
            .iter()
            .map(|a| parse_complex(a).ok_or_else(|| CliError::Input(format!("{name}: cannot parse parameter {a}"))))
            .collect::<Result<Vec<_>, _>>()?;
        catalog::get(name, &params, None)?
    };
    Ok(entry)
}
