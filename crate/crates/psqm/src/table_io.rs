//! JSON file format for function tables:
//! `{"rows": [labels], "cols": [labels], "entries": [[0|1|null, ...], ...]}`
//! with `null` marking an input pair outside the promise. Labels may be
//! strings or integers.

use std::path::Path;

use psqm_core::bounds::{BoundsError, FunctionTable};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed table JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid table: {0}")]
    Shape(#[from] BoundsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Label {
    Text(String),
    Number(u64),
}

impl Label {
    fn into_string(self) -> String {
        match self {
            Label::Text(s) => s,
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    rows: Vec<Label>,
    cols: Vec<Label>,
    entries: Vec<Vec<Option<u32>>>,
}

pub fn parse_table(json: &str) -> Result<FunctionTable, TableError> {
    let file: TableFile = serde_json::from_str(json)?;
    let rows = file.rows.into_iter().map(Label::into_string).collect();
    let cols = file.cols.into_iter().map(Label::into_string).collect();
    Ok(FunctionTable::new(rows, cols, file.entries)?)
}

pub fn read_table(path: &Path) -> Result<FunctionTable, TableError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
    parse_table(&text)
}

pub fn table_to_json(table: &FunctionTable) -> String {
    let file = TableFile {
        rows: table.row_labels().iter().cloned().map(Label::Text).collect(),
        cols: table.col_labels().iter().cloned().map(Label::Text).collect(),
        entries: (0..table.n_rows()).map(|r| table.row(r).to_vec()).collect(),
    };
    serde_json::to_string(&file).expect("tables serialize")
}
