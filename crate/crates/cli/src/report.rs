//! Report documents. Each one serializes to JSON and renders to text from the
//! same fields, so either format can be rebuilt from the other.

use std::fmt::Write;

use gcdtn::io::{DivisibilityDoc, ExponentDoc, MatrixDoc, SetDoc, VerdictDoc};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

pub trait Report: Serialize + DeserializeOwned {
    fn render_text(&self) -> String;
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn string_rows(out: &mut String, rows: &[Vec<String>]) {
    for row in rows {
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
}

fn exponent_rows(out: &mut String, rows: &[Vec<u64>]) {
    for row in rows {
        writeln!(out, "{}", join(row, " ")).unwrap();
    }
}

fn verdict_line(v: &VerdictDoc) -> String {
    match &v.witness {
        None => format!("{} ({})", v.is_tn, v.method),
        Some(w) => format!("{} ({}, witness {w})", v.is_tn, v.method),
    }
}

fn divisibility_lines(out: &mut String, d: &DivisibilityDoc) {
    writeln!(out, "divides: {}", d.divides).unwrap();
    writeln!(out, "side: {}", d.side).unwrap();
    writeln!(out, "method: {}", d.method).unwrap();
    match &d.witness {
        Some(rows) => {
            writeln!(out, "witness:").unwrap();
            string_rows(out, rows);
        }
        None => writeln!(out, "witness: none").unwrap(),
    }
    match &d.violation {
        Some((i, j, v)) => writeln!(out, "violation: entry ({i}, {j}) = {v}").unwrap(),
        None => writeln!(out, "violation: none").unwrap(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainsDoc {
    Chains(Vec<Vec<String>>),
    NotOfThisForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderDoc {
    /// 1-based positions of the original elements, in monotone order.
    Orderable(Vec<usize>),
    NotOrderable,
    SearchBudgetExceeded { columns: usize, cap: usize },
}

impl OrderDoc {
    fn text(&self) -> String {
        match self {
            OrderDoc::Orderable(p) => join(p, " "),
            OrderDoc::NotOrderable => "NotOrderable".into(),
            OrderDoc::SearchBudgetExceeded { columns, cap } => {
                format!("SearchBudgetExceeded ({columns} varying columns, cap {cap})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub set: SetDoc,
    pub gcd_closed: bool,
    pub factor_closed: bool,
    pub coprime_chains: ChainsDoc,
    pub pow: ExponentDoc,
    pub directions: Vec<String>,
    pub column_monotone: bool,
    pub tn: VerdictDoc,
    pub monotone_order: OrderDoc,
    pub max_greatest_type_divisors: usize,
    pub positive_definite: bool,
}

impl Report for AnalyzeReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "set: {}", braces(&self.set.elements)).unwrap();
        writeln!(out, "gcd-closed: {}", self.gcd_closed).unwrap();
        writeln!(out, "factor-closed: {}", self.factor_closed).unwrap();
        let chains = match &self.coprime_chains {
            ChainsDoc::Chains(blocks) => blocks.iter().map(|b| braces(b)).collect::<Vec<_>>().join(" "),
            ChainsDoc::NotOfThisForm => "NotOfThisForm".into(),
        };
        writeln!(out, "coprime-chains: {chains}").unwrap();
        writeln!(out, "pow primes: {}", self.pow.primes.join(" ")).unwrap();
        writeln!(out, "pow:").unwrap();
        exponent_rows(&mut out, &self.pow.exponents);
        writeln!(out, "directions: {}", self.directions.join(" ")).unwrap();
        writeln!(out, "column-monotone: {}", self.column_monotone).unwrap();
        writeln!(out, "tn: {}", verdict_line(&self.tn)).unwrap();
        writeln!(out, "monotone-order: {}", self.monotone_order.text()).unwrap();
        writeln!(out, "max-greatest-type-divisors: {}", self.max_greatest_type_divisors).unwrap();
        writeln!(out, "positive-definite: {}", self.positive_definite).unwrap();
        out
    }
}

/// Bare matrix, for `gcd-matrix` and `lcm-matrix`.
impl Report for MatrixDoc {
    fn render_text(&self) -> String {
        let mut out = String::new();
        string_rows(&mut out, &self.entries);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowReport {
    pub primes: Vec<String>,
    pub exponents: Vec<Vec<u64>>,
    pub directions: Vec<String>,
    pub column_monotone: bool,
}

impl Report for PowReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "primes: {}", self.primes.join(" ")).unwrap();
        exponent_rows(&mut out, &self.exponents);
        writeln!(out, "directions: {}", self.directions.join(" ")).unwrap();
        writeln!(out, "column-monotone: {}", self.column_monotone).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub orderable: bool,
    /// 1-based positions of the input elements, in monotone order.
    pub permutation: Option<Vec<usize>>,
    pub ordered: Option<SetDoc>,
}

impl Report for OrderReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "orderable: {}", self.orderable).unwrap();
        if let (Some(p), Some(s)) = (&self.permutation, &self.ordered) {
            writeln!(out, "permutation: {}", join(p, " ")).unwrap();
            writeln!(out, "ordered: {}", braces(&s.elements)).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertReport {
    /// `TridiagonalClosedForm` or `ExactSolve`.
    pub method: String,
    pub inverse: MatrixDoc,
}

impl Report for InvertReport {
    fn render_text(&self) -> String {
        let mut out = format!("method: {}\n", self.method);
        string_rows(&mut out, &self.inverse.entries);
        out
    }
}

impl Report for DivisibilityDoc {
    fn render_text(&self) -> String {
        let mut out = String::new();
        divisibility_lines(&mut out, self);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDivideReport {
    pub power: u32,
    pub set: SetDoc,
    #[serde(flatten)]
    pub result: DivisibilityDoc,
}

impl Report for PowerDivideReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "power: {}", self.power).unwrap();
        writeln!(out, "set: {}", braces(&self.set.elements)).unwrap();
        divisibility_lines(&mut out, &self.result);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateReport {
    pub pattern: String,
    pub primes: Vec<String>,
    pub exponents: Vec<Vec<u64>>,
    pub elements: Vec<String>,
}

impl Report for GenerateReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "pattern: {}", self.pattern).unwrap();
        writeln!(out, "primes: {}", self.primes.join(" ")).unwrap();
        writeln!(out, "exponents:").unwrap();
        exponent_rows(&mut out, &self.exponents);
        writeln!(out, "elements: {}", self.elements.join(" ")).unwrap();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub found: bool,
    pub set: Option<SetDoc>,
    pub violation: Option<(usize, usize, String)>,
    pub tested: u64,
    pub single_chain_sets: u64,
    /// Every candidate under the bound was tested.
    pub exhausted: bool,
}

impl Report for SearchReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "found: {}", self.found).unwrap();
        if let Some(s) = &self.set {
            writeln!(out, "set: {}", braces(&s.elements)).unwrap();
        }
        if let Some((i, j, v)) = &self.violation {
            writeln!(out, "violation: entry ({i}, {j}) = {v}").unwrap();
        }
        writeln!(out, "tested: {}", self.tested).unwrap();
        writeln!(out, "single-chain-sets: {}", self.single_chain_sets).unwrap();
        writeln!(out, "exhausted: {}", self.exhausted).unwrap();
        out
    }
}
