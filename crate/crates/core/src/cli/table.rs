use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::numerics::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Exact,
    Float,
    Int,
    Bool,
    Text,
}

impl ColumnKind {
    fn name(self) -> &'static str {
        match self {
            ColumnKind::Exact => "exact",
            ColumnKind::Float => "float",
            ColumnKind::Int => "int",
            ColumnKind::Bool => "bool",
            ColumnKind::Text => "text",
        }
    }

    fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => ColumnKind::Exact,
            "float" => ColumnKind::Float,
            "int" => ColumnKind::Int,
            "bool" => ColumnKind::Bool,
            "text" => ColumnKind::Text,
            _ => return Err(Error::Parse(format!("unknown column kind {s:?}"))),
        })
    }

    /// Column kind for values of `S`.
    pub fn scalar<S: Scalar>() -> Self {
        if S::KIND.is_exact() {
            ColumnKind::Exact
        } else {
            ColumnKind::Float
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// A table cell. Rationals are kept as their canonical `p/q` text.
#[derive(Debug, Clone)]
pub enum Cell {
    Exact(String),
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Null,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cell::Float(a), Cell::Float(b)) => a.to_bits() == b.to_bits(),
            (Cell::Exact(a), Cell::Exact(b)) | (Cell::Text(a), Cell::Text(b)) => a == b,
            (Cell::Int(a), Cell::Int(b)) => a == b,
            (Cell::Bool(a), Cell::Bool(b)) => a == b,
            (Cell::Null, Cell::Null) => true,
            _ => false,
        }
    }
}

impl Cell {
    pub fn scalar<S: Scalar>(v: &S) -> Cell {
        if S::KIND.is_exact() {
            Cell::Exact(v.to_string())
        } else {
            Cell::Float(v.to_f64())
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(v) => float_to_json(*v),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Null => Value::Null,
        }
    }

    fn from_json(v: &Value, kind: ColumnKind) -> Result<Cell> {
        let bad = || {
            Error::Parse(format!(
                "cell {v} does not match column kind {}",
                kind.name()
            ))
        };
        if v.is_null() {
            return Ok(Cell::Null);
        }
        Ok(match kind {
            ColumnKind::Exact => Cell::Exact(v.as_str().ok_or_else(bad)?.to_string()),
            ColumnKind::Text => Cell::Text(v.as_str().ok_or_else(bad)?.to_string()),
            ColumnKind::Float => Cell::Float(float_from_json(v).ok_or_else(bad)?),
            ColumnKind::Int => Cell::Int(v.as_i64().ok_or_else(bad)?),
            ColumnKind::Bool => Cell::Bool(v.as_bool().ok_or_else(bad)?),
        })
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Null => String::new(),
        }
    }
}

/// Shortest text that parses back to the same `f64`.
fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:?}")
    }
}

/// JSON has no non-finite numbers; those are written as strings.
pub(crate) fn float_to_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(format_float(v))
    }
}

pub(crate) fn float_from_json(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "NaN" => Some(f64::NAN),
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub row: usize,
    pub what: String,
    pub n_terms: usize,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Echo of the resolved run configuration, as strings.
    pub config: Vec<(String, String)>,
    pub certificates: Vec<Certificate>,
}

impl ResultTable {
    pub fn new(columns: &[(&str, ColumnKind)]) -> Self {
        ResultTable {
            columns: columns
                .iter()
                .map(|(n, k)| Column {
                    name: n.to_string(),
                    kind: *k,
                })
                .collect(),
            rows: Vec::new(),
            config: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let config: Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| json!({ "name": c.name, "kind": c.kind.name() }))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let certificates: Vec<Value> = self
            .certificates
            .iter()
            .map(|c| {
                json!({
                    "row": c.row,
                    "what": c.what,
                    "n_terms": c.n_terms,
                    "tail_bound": float_to_json(c.tail_bound),
                })
            })
            .collect();
        json!({
            "config": config,
            "columns": columns,
            "rows": rows,
            "certificates": certificates,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("table serialises")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let bad = |what: &str| Error::Parse(format!("malformed table: {what}"));
        let mut config = Vec::new();
        for (k, val) in v["config"].as_object().ok_or_else(|| bad("config"))? {
            config.push((
                k.clone(),
                val.as_str().ok_or_else(|| bad("config"))?.to_string(),
            ));
        }
        let mut columns = Vec::new();
        for c in v["columns"].as_array().ok_or_else(|| bad("columns"))? {
            columns.push(Column {
                name: c["name"]
                    .as_str()
                    .ok_or_else(|| bad("column name"))?
                    .to_string(),
                kind: ColumnKind::from_name(c["kind"].as_str().ok_or_else(|| bad("column kind"))?)?,
            });
        }
        let mut rows = Vec::new();
        for r in v["rows"].as_array().ok_or_else(|| bad("rows"))? {
            let cells = r.as_array().ok_or_else(|| bad("row"))?;
            if cells.len() != columns.len() {
                return Err(bad("row width"));
            }
            rows.push(
                cells
                    .iter()
                    .zip(&columns)
                    .map(|(c, col)| Cell::from_json(c, col.kind))
                    .collect::<Result<_>>()?,
            );
        }
        let mut certificates = Vec::new();
        for c in v["certificates"]
            .as_array()
            .ok_or_else(|| bad("certificates"))?
        {
            certificates.push(Certificate {
                row: c["row"].as_u64().ok_or_else(|| bad("certificate row"))? as usize,
                what: c["what"]
                    .as_str()
                    .ok_or_else(|| bad("certificate"))?
                    .to_string(),
                n_terms: c["n_terms"].as_u64().ok_or_else(|| bad("certificate"))? as usize,
                tail_bound: float_from_json(&c["tail_bound"]).ok_or_else(|| bad("certificate"))?,
            });
        }
        Ok(ResultTable {
            columns,
            rows,
            config,
            certificates,
        })
    }

    /// Header plus rows; the configuration and certificates only go to JSON.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(self.columns.iter().map(|c| c.name.as_str()))
            .map_err(csv_err)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::to_csv))
                .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}
