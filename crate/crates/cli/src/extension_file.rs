//! The JSON extension file.
//!
//! ```text
//! {
//!   "core": {"catalog": "S1"},
//!   "generators": [{"left": {"diag": [0, 1, 0]}}],
//!   "reductive": {"algebra": {"catalog": "so3"}, "semisimple": [1, 2, 3]}
//! }
//! ```
//!
//! A core is `{"catalog": label}`, `{"algebra": <algebra file>}` or
//! `{"abelian": {"dim": m, "c_lambda": c}}`. Matrices are `{"diag": [...]}` or a list of
//! rows; a scalar is a number or `[re, im]`. An omitted `left` or `right` is zero.
//! `semisimple` lists one-based generator indices.

use std::fs;
use std::path::Path;

use leibniz_moment::extensions::{ActionMaps, ExtensionCore, ExtensionSpec, ReductivePart};
use leibniz_moment::{Bracket, CMatrix, LinearMap, C64};
use serde::Deserialize;

use crate::algebra_file::AlgebraFile;
use crate::error::CliError;
use crate::names;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    fn value(self) -> C64 {
        match self {
            Scalar::Real(x) => C64::new(x, 0.0),
            Scalar::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Diag { diag: Vec<Scalar> },
    Rows(Vec<Vec<Scalar>>),
}

impl MatrixSpec {
    fn to_map(&self, m: usize, what: &str) -> Result<LinearMap, CliError> {
        let bad = |msg: String| CliError::Input(format!("{what}: {msg}"));
        let mat = match self {
            MatrixSpec::Diag { diag } => {
                if diag.len() != m {
                    return Err(bad(format!("diagonal has {} entries, core dimension is {m}", diag.len())));
                }
                CMatrix::from_diagonal(&leibniz_moment::CVector::from_iterator(m, diag.iter().map(|s| s.value())))
            }
            MatrixSpec::Rows(rows) => {
                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                    return Err(bad(format!("expected a {m}x{m} matrix")));
                }
                CMatrix::from_fn(m, m, |r, c| rows[r][c].value())
            }
        };
        LinearMap::new(mat).map_err(|e| bad(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSource {
    Catalog(String),
    Algebra(AlgebraFile),
}

impl AlgebraSource {
    fn bracket(&self) -> Result<Bracket, CliError> {
        match self {
            AlgebraSource::Catalog(label) => Ok(names::resolve(label)?.bracket),
            AlgebraSource::Algebra(file) => file.to_bracket(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianCore {
    pub dim: usize,
    pub c_lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoreSpec {
    Catalog(String),
    Algebra(AlgebraFile),
    Abelian(AbelianCore),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    #[serde(default)]
    pub left: Option<MatrixSpec>,
    #[serde(default)]
    pub right: Option<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductiveSpec {
    pub algebra: AlgebraSource,
    pub semisimple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    pub core: CoreSpec,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub reductive: Option<ReductiveSpec>,
}

impl ExtensionFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_spec(&self, tol: f64) -> Result<ExtensionSpec, CliError> {
        let core = match &self.core {
            CoreSpec::Catalog(label) => ExtensionCore::critical(names::resolve(label)?.bracket, tol)?,
            CoreSpec::Algebra(file) => ExtensionCore::critical(file.to_bracket()?, tol)?,
            CoreSpec::Abelian(a) => ExtensionCore::Abelian { dim: a.dim, c_lambda: a.c_lambda },
        };
        let m = core.dim();
        let map = |spec: &Option<MatrixSpec>, what: String| match spec {
            Some(s) => s.to_map(m, &what),
            None => Ok(LinearMap::zeros(m)),
        };
        let actions = self
            .generators
            .iter()
            .enumerate()
            .map(|(a, g)| {
                Ok(ActionMaps {
                    left: map(&g.left, format!("generator {} left", a + 1))?,
                    right: map(&g.right, format!("generator {} right", a + 1))?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let reductive = match &self.reductive {
            None => None,
            Some(r) => {
                let bracket = r.algebra.bracket()?;
                let d1 = self.generators.len();
                if bracket.dim() != d1 {
                    return Err(CliError::Input(format!(
                        "reductive algebra has dimension {}, but there are {d1} generators",
                        bracket.dim()
                    )));
                }
                let semisimple = r
                    .semisimple
                    .iter()
                    .map(|&i| {
                        (1..=d1)
                            .contains(&i)
                            .then(|| i - 1)
                            .ok_or_else(|| CliError::Input(format!("semisimple index {i} outside 1..={d1}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(ReductivePart { bracket, semisimple })
            }
        };
        Ok(ExtensionSpec { core, actions, reductive })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_and_matrices() {
        let f = ExtensionFile::parse(
            r#"{"core": {"abelian": {"dim": 2, "c_lambda": -1}},
                "generators": [{"left": {"diag": [1, [0, 2]]}, "right": [[0, 1], [0, 0]]}]}"#,
            "t",
        )
        .unwrap();
        let spec = f.to_spec(1e-8).unwrap();
        let a = &spec.actions[0];
        assert_eq!(a.left.matrix()[(1, 1)], C64::new(0.0, 2.0));
        assert_eq!(a.right.matrix()[(0, 1)], C64::new(1.0, 0.0));
        assert!(spec.reductive.is_none());
    }

    #[test]
    fn catalog_core_and_missing_maps() {
        let f = ExtensionFile::parse(r#"{"core": {"catalog": "S1"}, "generators": [{}]}"#, "t").unwrap();
        let spec = f.to_spec(1e-8).unwrap();
        assert_eq!(spec.core.dim(), 3);
        assert_eq!(spec.actions[0].left.norm(), 0.0);
    }

    #[test]
    fn shape_errors_name_the_generator() {
        let f =
            ExtensionFile::parse(r#"{"core": {"catalog": "S1"}, "generators": [{}, {"left": {"diag": [1]}}]}"#, "t")
                .unwrap();
        let e = f.to_spec(1e-8).unwrap_err().to_string();
        assert!(e.starts_with("generator 2 left"), "{e}");
    }

    #[test]
    fn reductive_indices_are_checked() {
        let f = ExtensionFile::parse(
            r#"{"core": {"catalog": "S1"}, "generators": [{}, {}, {}],
                "reductive": {"algebra": {"catalog": "so3"}, "semisimple": [0]}}"#,
            "t",
        )
        .unwrap();
        assert!(f.to_spec(1e-8).unwrap_err().to_string().contains("outside 1..=3"));
        assert!(ExtensionFile::parse(r#"{"core": {"catalog": "S1"}, "generators": [], "extra": 1}"#, "t").is_err());
    }
}
