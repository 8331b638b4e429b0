//! The JSON algebra file: `dim` plus one-based `{i, j, k, re, im}` entries meaning `c_ij^k`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use leibniz_moment::{Bracket, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Param {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Param>,
    pub dim: usize,
    pub entries: Vec<Entry>,
}

impl AlgebraFile {
    /// Every nonzero coefficient, in index order.
    pub fn from_bracket(name: Option<String>, params: &[C64], mu: &Bracket) -> Self {
        let n = mu.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = mu.get(i, j, k);
                    if v != C64::new(0.0, 0.0) {
                        entries.push(Entry { i: i + 1, j: j + 1, k: k + 1, re: v.re, im: v.im });
                    }
                }
            }
        }
        let params = params.iter().map(|p| Param { re: p.re, im: p.im }).collect();
        AlgebraFile { name, params, dim: n, entries }
    }

    /// Validates indices, duplicates and finiteness, naming the offending entry.
    pub fn to_bracket(&self) -> Result<Bracket, CliError> {
        if self.dim == 0 {
            return Err(CliError::Input("dim must be at least 1".into()));
        }
        let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut triples = Vec::with_capacity(self.entries.len());
        for (pos, e) in self.entries.iter().enumerate() {
            let at = format!("entry {} (i={}, j={}, k={})", pos + 1, e.i, e.j, e.k);
            for idx in [e.i, e.j, e.k] {
                if idx == 0 || idx > self.dim {
                    return Err(CliError::Input(format!("{at}: index {idx} outside 1..={}", self.dim)));
                }
            }
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(CliError::Input(format!("{at}: coefficient is not finite")));
            }
            if let Some(first) = seen.insert((e.i, e.j, e.k), pos + 1) {
                return Err(CliError::Input(format!("{at}: duplicates entry {first}")));
            }
            triples.push((e.i - 1, e.j - 1, e.k - 1, C64::new(e.re, e.im)));
        }
        Ok(Bracket::from_entries(self.dim, &triples)?)
    }

    pub fn params(&self) -> Vec<C64> {
        self.params.iter().map(|p| C64::new(p.re, p.im)).collect()
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(entries: Vec<Entry>) -> AlgebraFile {
        AlgebraFile { name: None, params: vec![], dim: 2, entries }
    }

    fn e(i: usize, j: usize, k: usize) -> Entry {
        Entry { i, j, k, re: 1.0, im: 0.0 }
    }

    #[test]
    fn rejects_duplicates_and_ranges() {
        let err = file(vec![e(1, 1, 2), e(1, 1, 2)]).to_bracket().unwrap_err().to_string();
        assert!(err.contains("entry 2") && err.contains("duplicates entry 1"), "{err}");
        let err = file(vec![e(1, 3, 2)]).to_bracket().unwrap_err().to_string();
        assert!(err.contains("entry 1") && err.contains("index 3"), "{err}");
        let err = file(vec![e(0, 1, 1)]).to_bracket().unwrap_err().to_string();
        assert!(err.contains("index 0"), "{err}");
    }

    #[test]
    fn round_trips_through_bracket() {
        let f = file(vec![Entry { i: 1, j: 2, k: 2, re: 0.1, im: -3.0 }]);
        let mu = f.to_bracket().unwrap();
        assert_eq!(AlgebraFile::from_bracket(None, &[], &mu), f);
    }

    #[test]
    fn parse_errors_are_input_errors() {
        let err = AlgebraFile::parse("{\"dim\": 2}", "x.json").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(AlgebraFile::parse("{\"dim\": 2, \"entries\": [], \"extra\": 1}", "x").is_err());
        let ok =
            AlgebraFile::parse("{\"dim\": 2, \"entries\": [{\"i\": 1, \"j\": 1, \"k\": 2, \"re\": 1}]}", "x").unwrap();
        assert_eq!(ok.entries[0].im, 0.0);
    }
}
