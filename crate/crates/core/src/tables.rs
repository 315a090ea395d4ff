//! Hadamard and circulant count tables for r in 3..=8.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::census::{self, CensusOptions};
use crate::error::{Error, Result};
use crate::field::{default_poly, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        Ok(match s {
            "json" => Format::Json,
            "csv" => Format::Csv,
            "md" | "markdown" => Format::Markdown,
            "text" | "txt" => Format::Text,
            _ => return Err(Error::Parse(format!("unknown format {s:?}"))),
        })
    }
}

/// Which columns to render.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    /// Hadamard, involutory and non-involutory Hadamard MDS.
    Hadamard,
    /// Hadamard, involutory Hadamard and circulant MDS.
    Comparison,
    /// All four count columns.
    Combined,
}

impl TableId {
    pub fn from_number(n: Option<u32>) -> Result<TableId> {
        match n {
            None => Ok(TableId::Combined),
            Some(1) => Ok(TableId::Hadamard),
            Some(2) => Ok(TableId::Comparison),
            Some(k) => Err(Error::Parse(format!("table must be 1 or 2, got {k}"))),
        }
    }

    fn columns(self) -> &'static [Column] {
        match self {
            TableId::Hadamard => &[Column::Hadamard, Column::Involutory, Column::NonInvolutory],
            TableId::Comparison => &[Column::Hadamard, Column::Involutory, Column::Circulant],
            TableId::Combined => &[Column::Hadamard, Column::Involutory, Column::NonInvolutory, Column::Circulant],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Hadamard,
    Involutory,
    NonInvolutory,
    Circulant,
}

impl Column {
    fn key(self) -> &'static str {
        match self {
            Column::Hadamard => "hadamard_mds",
            Column::Involutory => "involutory_hadamard_mds",
            Column::NonInvolutory => "non_involutory_hadamard_mds",
            Column::Circulant => "circulant_mds",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Column::Hadamard => "Hadamard MDS",
            Column::Involutory => "involutory Hadamard MDS",
            Column::NonInvolutory => "non-involutory Hadamard MDS",
            Column::Circulant => "circulant MDS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellMethod {
    Formula,
    Brute,
    Skipped,
}

impl CellMethod {
    fn name(self) -> &'static str {
        match self {
            CellMethod::Formula => "formula",
            CellMethod::Brute => "brute",
            CellMethod::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub count: Option<u64>,
    pub method: CellMethod,
}

impl Cell {
    fn formula(v: u64) -> Cell {
        Cell { count: Some(v), method: CellMethod::Formula }
    }

    fn render(&self) -> String {
        match self.count {
            Some(v) => v.to_string(),
            None => "skipped".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub r: u32,
    #[serde(with = "crate::census::hex_poly")]
    pub poly: u32,
    pub hadamard_mds: Cell,
    pub involutory_hadamard_mds: Cell,
    pub non_involutory_hadamard_mds: Cell,
    pub circulant_mds: Cell,
}

impl TableRow {
    fn cell(&self, c: Column) -> &Cell {
        match c {
            Column::Hadamard => &self.hadamard_mds,
            Column::Involutory => &self.involutory_hadamard_mds,
            Column::NonInvolutory => &self.non_involutory_hadamard_mds,
            Column::Circulant => &self.circulant_mds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub table: TableId,
    pub rows: Vec<TableRow>,
}

impl TableDocument {
    /// Whether any brute-force cell was skipped for budget reasons.
    pub fn has_skipped(&self) -> bool {
        self.rows.iter().any(|r| self.table.columns().iter().any(|&c| r.cell(c).method == CellMethod::Skipped))
    }

    pub fn render(&self, format: Format) -> String {
        let cols = self.table.columns();
        let mut out = String::new();
        match format {
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        obj.insert("r".into(), row.r.into());
                        obj.insert("poly".into(), format!("0x{:X}", row.poly).into());
                        for &c in cols {
                            obj.insert(c.key().into(), serde_json::to_value(row.cell(c)).expect("cell serializes"));
                        }
                        obj.into()
                    })
                    .collect();
                out = serde_json::to_string_pretty(&serde_json::json!({"table": self.table, "rows": rows})).expect("json");
                out.push('\n');
            }
            Format::Csv => {
                let keys: Vec<&str> = cols.iter().map(|c| c.key()).collect();
                let _ = writeln!(out, "r,{},methods", keys.join(","));
                for row in &self.rows {
                    let counts: Vec<String> = cols.iter().map(|&c| row.cell(c).render()).collect();
                    let methods: Vec<&str> = cols.iter().map(|&c| row.cell(c).method.name()).collect();
                    let _ = writeln!(out, "{},{},{}", row.r, counts.join(","), methods.join(";"));
                }
            }
            Format::Markdown => {
                let titles: Vec<&str> = cols.iter().map(|c| c.title()).collect();
                let _ = writeln!(out, "| r | {} |", titles.join(" | "));
                let _ = writeln!(out, "|---|{}", "---|".repeat(cols.len()));
                for row in &self.rows {
                    let cells: Vec<String> = cols.iter().map(|&c| annotated(row.cell(c))).collect();
                    let _ = writeln!(out, "| {} | {} |", row.r, cells.join(" | "));
                }
            }
            Format::Text => {
                let widths: Vec<usize> = cols
                    .iter()
                    .map(|&c| self.rows.iter().map(|r| annotated(r.cell(c)).len()).chain([c.title().len()]).max().unwrap_or(0))
                    .collect();
                let _ = write!(out, "{:>2}", "r");
                for (c, w) in cols.iter().zip(&widths) {
                    let _ = write!(out, "  {:>w$}", c.title(), w = w);
                }
                out.push('\n');
                for row in &self.rows {
                    let _ = write!(out, "{:>2}", row.r);
                    for (&c, w) in cols.iter().zip(&widths) {
                        let _ = write!(out, "  {:>w$}", annotated(row.cell(c)), w = w);
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn annotated(c: &Cell) -> String {
    match c.count {
        Some(v) => format!("{v} ({})", c.method.name()),
        None => "skipped".to_string(),
    }
}

/// Build the count table for `r_min..=r_max` over the default polynomials.
/// Hadamard columns use the closed forms; the circulant column is counted by
/// brute force where the budget allows and marked skipped otherwise.
pub fn emit_paper_tables(table: TableId, r_min: u32, r_max: u32, opts: CensusOptions) -> Result<TableDocument> {
    if !(3..=8).contains(&r_min) || !(3..=8).contains(&r_max) || r_min > r_max {
        return Err(Error::ParameterDomain(format!("need 3 <= r_min <= r_max <= 8, got {r_min}..{r_max}")));
    }
    let needs_circulant = table.columns().contains(&Column::Circulant);
    let mut rows = Vec::new();
    for r in r_min..=r_max {
        let circulant_mds = if !needs_circulant {
            Cell { count: None, method: CellMethod::Skipped }
        } else if census::check_brute_budget(census::ClassId::Circulant4Mds, r, opts.allow_long).is_ok() {
            let field = FieldSpec::new(r, None)?;
            Cell { count: Some(census::census_circulant4_mds(&field, opts)?.count), method: CellMethod::Brute }
        } else {
            Cell { count: None, method: CellMethod::Skipped }
        };
        rows.push(TableRow {
            r,
            poly: default_poly(r),
            hadamard_mds: Cell::formula(census::hadamard4_mds_formula(r)),
            involutory_hadamard_mds: Cell::formula(census::hadamard4_inv_mds_formula(r)),
            non_involutory_hadamard_mds: Cell::formula(census::hadamard4_noninv_mds_formula(r)),
            circulant_mds,
        });
    }
    Ok(TableDocument { table, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_rows_markdown() {
        let doc = emit_paper_tables(TableId::Hadamard, 3, 4, CensusOptions::default()).unwrap();
        let md = doc.render(Format::Markdown);
        assert!(md.contains("| 3 | 168 (formula) | 24 (formula) | 144 (formula) |"), "{md}");
        assert!(md.contains("| 4 | 22680 (formula) | 1512 (formula) | 21168 (formula) |"), "{md}");
        assert!(!doc.has_skipped());
    }

    #[test]
    fn combined_csv_row() {
        let doc = emit_paper_tables(TableId::Combined, 5, 5, CensusOptions::default()).unwrap();
        let csv = doc.render(Format::Csv);
        assert!(csv.contains("\n5,651000,21000,630000,580320,formula;formula;formula;brute\n"), "{csv}");
    }

    #[test]
    fn circulant_json_cell() {
        let doc = emit_paper_tables(TableId::Comparison, 3, 3, CensusOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["circulant_mds"], serde_json::json!({"count": 0, "method": "brute"}));
        assert!(v["rows"][0].get("non_involutory_hadamard_mds").is_none());
    }

    #[test]
    fn budget_skips_cell() {
        let doc = emit_paper_tables(TableId::Comparison, 8, 8, CensusOptions::default()).unwrap();
        assert_eq!(doc.rows[0].circulant_mds.method, CellMethod::Skipped);
        assert!(doc.has_skipped());
        assert_eq!(doc.rows[0].hadamard_mds.count, Some(4064187960));
        assert!(doc.render(Format::Text).contains("skipped"));
        // the Hadamard-only table never needs the circulant census
        assert!(!emit_paper_tables(TableId::Hadamard, 8, 8, CensusOptions::default()).unwrap().has_skipped());
    }

    #[test]
    fn range_checks() {
        for (a, b) in [(2, 3), (3, 9), (5, 4)] {
            assert!(emit_paper_tables(TableId::Combined, a, b, CensusOptions::default()).is_err());
        }
        assert!(TableId::from_number(Some(3)).is_err());
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
    }
}
