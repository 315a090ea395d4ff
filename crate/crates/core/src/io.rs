//! JSON matrix files.
//!
//! Explicit form: `{"r": 3, "poly": "0xB", "rows": [["0x1", "0x2"], ...]}`.
//! Structured form: `{"kind": "circulant", "row": [...]}` with `kind` one of
//! `hadamard`, `circulant`, `type1` (needs `"a"`, optional `"relaxed"`) or
//! `type2`. `r` and `poly` are optional in both forms; when absent the
//! caller supplies the field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::matrix::{Matrix, Type1Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Hadamard,
    Circulant,
    Type1,
    Type2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_poly")]
    pub poly: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MatrixKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub relaxed: bool,
}

mod opt_poly {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(u32),
        Str(String),
    }

    pub fn serialize<S: Serializer>(p: &Option<u32>, s: S) -> Result<S::Ok, S::Error> {
        match p {
            Some(p) => s.collect_str(&format_args!("0x{p:X}")),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u32>, D::Error> {
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Int(v)) => Ok(Some(v)),
            Some(Raw::Str(s)) => crate::field::parse_hex_u32(&s).map(Some).map_err(serde::de::Error::custom),
        }
    }
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<MatrixFile> {
        let f: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match (&f.rows, &f.kind) {
            (Some(_), None) | (None, Some(_)) => Ok(f),
            (Some(_), Some(_)) => Err(Error::Parse("give either \"rows\" or \"kind\", not both".into())),
            (None, None) => Err(Error::Parse("missing \"rows\" or \"kind\"".into())),
        }
    }

    /// The file's `r` and `poly`, falling back to the caller's. Values given
    /// in both places must agree.
    pub fn resolve_field(&self, r: Option<u32>, poly: Option<u32>) -> Result<FieldSpec> {
        let pick = |file: Option<u32>, cli: Option<u32>, what: &str| -> Result<Option<u32>> {
            match (file, cli) {
                (Some(a), Some(b)) if a != b => Err(Error::Parse(format!("{what} in file ({a:#X}) differs from command line ({b:#X})"))),
                (a, b) => Ok(a.or(b)),
            }
        };
        let r = pick(self.r, r, "r")?.ok_or_else(|| Error::Parse("field degree not given in file or with --r".into()))?;
        let poly = pick(self.poly, poly, "poly")?;
        FieldSpec::new(r, poly)
    }

    pub fn build<'f>(&self, field: &'f FieldSpec) -> Result<Matrix<'f>> {
        let check = |v: &[Elem]| -> Result<Vec<Elem>> { v.iter().map(|&x| field.check(x)).collect() };
        if let Some(rows) = &self.rows {
            let rows = rows.iter().map(|r| check(r)).collect::<Result<Vec<_>>>()?;
            return Matrix::from_rows(field, &rows);
        }
        let kind = self.kind.ok_or_else(|| Error::Parse("missing \"kind\"".into()))?;
        let row = check(self.row.as_deref().ok_or_else(|| Error::Parse("structured matrix needs \"row\"".into()))?)?;
        match kind {
            MatrixKind::Hadamard => Matrix::hadamard(field, &row),
            MatrixKind::Circulant => Matrix::circulant(field, &row),
            MatrixKind::Type2 => Matrix::type2(field, &row),
            MatrixKind::Type1 => {
                let a = field.check(self.a.ok_or_else(|| Error::Parse("type1 needs \"a\"".into()))?)?;
                let domain = if self.relaxed { Type1Domain::Relaxed } else { Type1Domain::Strict };
                Matrix::type1(field, a, &row, domain)
            }
        }
    }

    /// Explicit-form file for `m`.
    pub fn from_matrix(m: &Matrix<'_>) -> MatrixFile {
        MatrixFile {
            r: Some(m.field().degree()),
            poly: Some(m.field().poly()),
            rows: Some(m.to_rows()),
            kind: None,
            a: None,
            row: None,
            relaxed: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }
}
