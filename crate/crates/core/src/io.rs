//! Text and JSON formats for sets, exponent matrices, matrices and verdicts.
//!
//! Integers travel as decimal strings. Indices in serialized reports are
//! 1-based.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::divisibility::{DivisibilityMethod, DivisibilityReport, Side};
use crate::exactmatrix::{ExactMatrix, MatrixError};
use crate::numtheory::{format_rat, parse_nat, parse_rat, Nat};
use crate::setmodel::{ExponentMatrix, OrderedSet, SetError};
use crate::tncore::{TnMethod, TnVerdict, TnWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: '{token}' is not a positive decimal integer")]
    BadToken { line: usize, token: String },
    #[error("input contains no integers")]
    EmptyInput,
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("field '{field}': {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Set(OrderedSet),
    Exponents(ExponentMatrix),
}

impl Input {
    /// The ordered set, reconstructing it when given exponents.
    pub fn into_set(self) -> Result<OrderedSet, SetError> {
        match self {
            Input::Set(s) => Ok(s),
            Input::Exponents(m) => m.reconstruct(),
        }
    }
}

/// A leading `{` means JSON; a `"primes"` key selects an exponent matrix.
pub fn parse_input(text: &str) -> Result<Input, ParseError> {
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        if doc.get("primes").is_some() {
            Ok(Input::Exponents(exponents_from_json(&doc)?))
        } else {
            Ok(Input::Set(set_from_json(&doc)?))
        }
    } else {
        Ok(Input::Set(parse_set_text(text)?))
    }
}

/// Whitespace- or newline-separated decimal integers.
pub fn parse_set_text(text: &str) -> Result<OrderedSet, ParseError> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let v = parse_nat(token)
                .map_err(|_| ParseError::BadToken { line: lineno + 1, token: token.to_string() })?;
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    Ok(OrderedSet::new(values)?)
}

fn nat_field(v: &Value, field: &str) -> Result<Nat, ParseError> {
    match v {
        Value::String(s) => parse_nat(s).map_err(|e| field_err(field, e.to_string())),
        Value::Number(n) if n.is_u64() => Ok(Nat::from(n.as_u64().unwrap())),
        _ => Err(field_err(field, "expected a decimal string")),
    }
}

fn array_field<'a>(doc: &'a Value, field: &str) -> Result<&'a Vec<Value>, ParseError> {
    doc.get(field)
        .ok_or_else(|| field_err(field, "missing"))?
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array"))
}

fn set_from_json(doc: &Value) -> Result<OrderedSet, ParseError> {
    let items = array_field(doc, "elements")?;
    let values = items
        .iter()
        .enumerate()
        .map(|(i, v)| nat_field(v, &format!("elements[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrderedSet::new(values)?)
}

fn exponents_from_json(doc: &Value) -> Result<ExponentMatrix, ParseError> {
    let primes = array_field(doc, "primes")?
        .iter()
        .enumerate()
        .map(|(i, v)| nat_field(v, &format!("primes[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for (i, row) in array_field(doc, "exponents")?.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| field_err(format!("exponents[{i}]"), "expected an array"))?;
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let field = format!("exponents[{i}][{j}]");
                match v {
                    Value::Number(n) => n.as_u64().ok_or_else(|| field_err(&field, "expected a non-negative integer")),
                    Value::String(s) => s.parse().map_err(|_| field_err(&field, "expected a non-negative integer")),
                    _ => Err(field_err(&field, "expected a non-negative integer")),
                }
            })
            .collect::<Result<Vec<u64>, _>>()?;
        rows.push(parsed);
    }
    Ok(ExponentMatrix::new(primes, rows)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDoc {
    pub elements: Vec<String>,
}

impl From<&OrderedSet> for SetDoc {
    fn from(s: &OrderedSet) -> Self {
        SetDoc { elements: s.iter().map(Nat::to_string).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentDoc {
    pub primes: Vec<String>,
    pub exponents: Vec<Vec<u64>>,
}

impl From<&ExponentMatrix> for ExponentDoc {
    fn from(m: &ExponentMatrix) -> Self {
        ExponentDoc {
            primes: m.primes().iter().map(Nat::to_string).collect(),
            exponents: m.exponents().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&ExactMatrix> for MatrixDoc {
    fn from(m: &ExactMatrix) -> Self {
        MatrixDoc { rows: m.rows(), cols: m.cols(), entries: rat_rows(m) }
    }
}

impl MatrixDoc {
    pub fn to_matrix(&self) -> Result<ExactMatrix, ParseError> {
        let mut rows = Vec::with_capacity(self.entries.len());
        for (i, row) in self.entries.iter().enumerate() {
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, e)| parse_rat(e).map_err(|err| field_err(format!("entries[{i}][{j}]"), err.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(parsed);
        }
        let m = ExactMatrix::from_rows(rows)?;
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err(field_err("rows", "shape disagrees with entries"));
        }
        Ok(m)
    }
}

fn rat_rows(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(format_rat).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessDoc {
    Triple([usize; 3]),
    Minor { rows: Vec<usize>, cols: Vec<usize> },
    Column { column: usize, prime: String },
}

impl From<&TnWitness> for WitnessDoc {
    fn from(w: &TnWitness) -> Self {
        match w {
            TnWitness::Triple(i, j, k) => WitnessDoc::Triple([i + 1, j + 1, k + 1]),
            TnWitness::Minor { rows, cols } => WitnessDoc::Minor {
                rows: rows.iter().map(|r| r + 1).collect(),
                cols: cols.iter().map(|c| c + 1).collect(),
            },
            TnWitness::Column { column, prime } => {
                WitnessDoc::Column { column: column + 1, prime: prime.to_string() }
            }
        }
    }
}

impl std::fmt::Display for WitnessDoc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessDoc::Triple([i, j, k]) => write!(f, "triple ({i}, {j}, {k})"),
            WitnessDoc::Minor { rows, cols } => write!(f, "minor rows {rows:?} cols {cols:?}"),
            WitnessDoc::Column { column, prime } => write!(f, "column {column} (prime {prime}) is not monotone"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub is_tn: bool,
    pub method: String,
    pub witness: Option<WitnessDoc>,
}

impl From<&TnVerdict> for VerdictDoc {
    fn from(v: &TnVerdict) -> Self {
        VerdictDoc {
            is_tn: v.is_tn,
            method: v.method.as_str().to_string(),
            witness: v.witness.as_ref().map(WitnessDoc::from),
        }
    }
}

impl VerdictDoc {
    pub fn method(&self) -> Option<TnMethod> {
        TnMethod::parse(&self.method)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityDoc {
    pub divides: bool,
    pub side: String,
    pub method: String,
    pub witness: Option<Vec<Vec<String>>>,
    pub violation: Option<(usize, usize, String)>,
}

impl From<&DivisibilityReport> for DivisibilityDoc {
    fn from(r: &DivisibilityReport) -> Self {
        DivisibilityDoc {
            divides: r.divides,
            side: r.side.as_str().to_string(),
            method: r.method.as_str().to_string(),
            witness: r.witness.as_ref().map(rat_rows),
            violation: r.violation.as_ref().map(|(i, j, v)| (i + 1, j + 1, format_rat(v))),
        }
    }
}

impl DivisibilityDoc {
    pub fn side(&self) -> Option<Side> {
        match self.side.as_str() {
            "Left" => Some(Side::Left),
            "Right" => Some(Side::Right),
            "Both" => Some(Side::Both),
            _ => None,
        }
    }

    pub fn method(&self) -> Option<DivisibilityMethod> {
        match self.method.as_str() {
            "Oracle" => Some(DivisibilityMethod::Oracle),
            "ClosedForm" => Some(DivisibilityMethod::ClosedForm),
            _ => None,
        }
    }
}
