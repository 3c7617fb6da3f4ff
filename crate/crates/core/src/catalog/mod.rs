//! Built-in catalog of algebras and structures, with expected values, plus
//! the notation parsers.

mod check;
mod parse;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use check::{check_entry, Mismatch};
pub use parse::{
    parse_algebra, parse_family_matrix, parse_form, parse_k, parse_k_for, parse_rational_function,
    KSpec,
};

use crate::deform::DeformationFamily;
use crate::lie::{LieAlgebra, LieError};
use crate::linalg::Matrix;
use crate::paracomplex::{ParaError, ParaStructure};
use crate::scalar::{Rational, RationalFunction};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("index error at position {pos}: {msg}")]
    Index { pos: usize, msg: String },
    #[error("Jacobi identity fails at e^{k}: d(d e^{k}) = {witness}")]
    Jacobi { k: usize, witness: String },
    #[error(transparent)]
    Lie(LieError),
    #[error(transparent)]
    Para(#[from] ParaError),
    #[error("expected a {expected}x{expected} K, got {got} rows")]
    Length { expected: usize, got: usize },
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
    #[error("unknown structure '{structure}' in entry '{entry}'")]
    UnknownStructure { entry: String, structure: String },
    #[error("structure '{0}' has the wrong kind for this use")]
    WrongKind(String),
    #[error("invalid catalog document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Sign,
    Matrix,
    Family,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub kind: StructureKind,
    pub value: String,
}

/// Expected values for one `(structure, point, stage)`; absent fields are
/// not asserted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_plus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_minus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure_and_full: Option<bool>,
    /// Forms whose classes span `H^{ℓ+}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus_span: Option<Vec<String>>,
    /// Forms whose classes span `H^{ℓ−}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_span: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unimodular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dkahler: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dkahler_witness: Option<String>,
}

/// Key of an expected-value record: `K/2`, `K_t@0/2`, `K_t@generic/2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpectedKey {
    pub structure: String,
    pub point: Option<Point>,
    pub stage: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Generic,
    At(Rational),
}

impl ExpectedKey {
    pub fn parse(s: &str) -> Result<Self, CatalogError> {
        let bad = || CatalogError::Document(format!("invalid expected key '{s}'"));
        let (head, stage) = s.rsplit_once('/').ok_or_else(bad)?;
        let stage = stage.parse().map_err(|_| bad())?;
        let (structure, point) = match head.split_once('@') {
            None => (head.to_string(), None),
            Some((name, "generic")) => (name.to_string(), Some(Point::Generic)),
            Some((name, p)) => (
                name.to_string(),
                Some(Point::At(crate::scalar::parse_rational(p).ok_or_else(bad)?)),
            ),
        };
        Ok(ExpectedKey {
            structure,
            point,
            stage,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogDocument {
    pub name: String,
    pub algebra: String,
    pub structures: BTreeMap<String, StructureSpec>,
    #[serde(default)]
    pub expected: BTreeMap<String, Expected>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: LieAlgebra,
    pub document: CatalogDocument,
    pub expected: Vec<(ExpectedKey, Expected)>,
}

impl CatalogEntry {
    pub fn from_document(document: CatalogDocument) -> Result<Self, CatalogError> {
        let algebra = parse_algebra(&document.algebra)?;
        let mut expected = Vec::new();
        for (k, v) in &document.expected {
            let key = ExpectedKey::parse(k)?;
            if !document.structures.contains_key(&key.structure) {
                return Err(CatalogError::UnknownStructure {
                    entry: document.name.clone(),
                    structure: key.structure,
                });
            }
            expected.push((key, v.clone()));
        }
        Ok(CatalogEntry {
            name: document.name.clone(),
            algebra,
            document,
            expected,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let doc: CatalogDocument =
            serde_json::from_str(text).map_err(|e| CatalogError::Document(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document).expect("serializable")
    }

    pub fn notes(&self) -> &str {
        &self.document.notes
    }

    pub fn structure_names(&self) -> impl Iterator<Item = &String> {
        self.document.structures.keys()
    }

    pub fn structure_spec(&self, name: &str) -> Result<&StructureSpec, CatalogError> {
        self.document
            .structures
            .get(name)
            .ok_or_else(|| CatalogError::UnknownStructure {
                entry: self.name.clone(),
                structure: name.to_string(),
            })
    }

    /// A fixed (sign or matrix) structure.
    pub fn structure(&self, name: &str) -> Result<ParaStructure<Rational>, CatalogError> {
        let spec = self.structure_spec(name)?;
        if spec.kind == StructureKind::Family {
            return Err(CatalogError::WrongKind(name.to_string()));
        }
        let k = parse_k_for(&spec.value, self.algebra.dim())?;
        Ok(ParaStructure::validate(k, self.algebra.dim())?)
    }

    /// The first fixed structure, if any.
    pub fn default_structure(
        &self,
    ) -> Option<(&str, Result<ParaStructure<Rational>, CatalogError>)> {
        self.document
            .structures
            .iter()
            .find(|(_, s)| s.kind != StructureKind::Family)
            .map(|(n, _)| (n.as_str(), self.structure(n)))
    }

    /// A family matrix `K_t`.
    pub fn family_matrix(&self, name: &str) -> Result<Matrix<RationalFunction>, CatalogError> {
        let spec = self.structure_spec(name)?;
        if spec.kind != StructureKind::Family {
            return Err(CatalogError::WrongKind(name.to_string()));
        }
        let m = parse_family_matrix(&spec.value)?;
        let n = self.algebra.dim();
        if m.rows() != n || m.cols() != n {
            return Err(CatalogError::Length {
                expected: n,
                got: m.rows(),
            });
        }
        Ok(m)
    }

    pub fn family(&self, name: &str) -> Result<DeformationFamily, CatalogError> {
        Ok(DeformationFamily {
            g: self.algebra.clone(),
            k: self.family_matrix(name)?,
            domain_note: self.document.notes.clone(),
        })
    }

    pub fn default_family(&self) -> Option<&str> {
        self.document
            .structures
            .iter()
            .find(|(_, s)| s.kind == StructureKind::Family)
            .map(|(n, _)| n.as_str())
    }

    pub fn expected_for(
        &self,
        structure: &str,
        point: Option<&Point>,
        stage: usize,
    ) -> Option<&Expected> {
        self.expected
            .iter()
            .find(|(k, _)| {
                k.structure == structure && k.point.as_ref() == point && k.stage == stage
            })
            .map(|(_, v)| v)
    }
}

const EMBEDDED: &[(&str, &str)] = &[
    ("torus4", include_str!("../../catalog/torus4.json")),
    ("heis3R", include_str!("../../catalog/heis3R.json")),
    ("filiform4", include_str!("../../catalog/filiform4.json")),
    ("ex2.5", include_str!("../../catalog/ex2.5.json")),
    ("ex2.6", include_str!("../../catalog/ex2.6.json")),
    ("ex2.8", include_str!("../../catalog/ex2.8.json")),
    ("ex2.17", include_str!("../../catalog/ex2.17.json")),
    ("jump-sci", include_str!("../../catalog/jump-sci.json")),
    ("jump-scs", include_str!("../../catalog/jump-scs.json")),
    ("nonunimod4", include_str!("../../catalog/nonunimod4.json")),
    (
        "heis3xheis3",
        include_str!("../../catalog/heis3xheis3.json"),
    ),
];

pub fn catalog_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(n, _)| *n).collect()
}

pub fn catalog_json(name: &str) -> Result<&'static str, CatalogError> {
    EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, j)| *j)
        .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry, CatalogError> {
    CatalogEntry::from_json(catalog_json(name)?)
}

pub fn catalog_all() -> Vec<CatalogEntry> {
    catalog_names()
        .into_iter()
        .map(|n| catalog_get(n).expect("embedded catalog entries are valid"))
        .collect()
}

/// Canonical compact notation of an algebra.
pub fn render_algebra(g: &LieAlgebra) -> String {
    g.salamon()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for name in catalog_names() {
            let e = catalog_get(name).unwrap();
            assert_eq!(e.name, name);
            for s in e.structure_names() {
                match e.structure_spec(s).unwrap().kind {
                    StructureKind::Family => {
                        e.family_matrix(s).unwrap();
                    }
                    _ => {
                        e.structure(s).unwrap();
                    }
                }
            }
        }
        assert!(matches!(
            catalog_get("nope"),
            Err(CatalogError::UnknownEntry(_))
        ));
    }

    #[test]
    fn render_parse_round_trip() {
        for e in catalog_all() {
            let s = render_algebra(&e.algebra);
            assert_eq!(parse_algebra(&s).unwrap(), e.algebra);
            assert_eq!(render_algebra(&parse_algebra(&s).unwrap()), s);
        }
    }

    #[test]
    fn expected_keys() {
        let k = ExpectedKey::parse("K_t@1/2/2").unwrap();
        assert_eq!(k.structure, "K_t");
        assert_eq!(k.point, Some(Point::At(crate::scalar::rat(1, 2))));
        assert_eq!(k.stage, 2);
        assert_eq!(ExpectedKey::parse("K/4").unwrap().point, None);
        assert!(ExpectedKey::parse("K").is_err());
    }

    #[test]
    fn stored_values_reproduce() {
        for e in catalog_all() {
            let m = check_entry(&e).unwrap();
            if e.name == "nonunimod4" {
                // stored H^2- disagrees with the recomputed one
                let fields: Vec<_> = m.iter().map(|x| x.field).collect();
                assert_eq!(fields, ["dim_minus", "minus_span"]);
                assert_eq!(m[0].computed, "2");
            } else {
                assert!(m.is_empty(), "{}: {m:?}", e.name);
            }
        }
    }

    #[test]
    fn document_round_trip() {
        let e = catalog_get("ex2.5").unwrap();
        let again = CatalogEntry::from_json(&e.to_json()).unwrap();
        assert_eq!(again.document, e.document);
    }
}
