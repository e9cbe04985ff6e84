//! `gcdtn` command-line front end.
//!
//! Exit codes: 0 success, 1 negative answer to a yes/no verb (`divide`,
//! `power-divide`, `order`, `search`), 2 usage or input error, 3 internal
//! disagreement between the closed forms and the exact oracle.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcdtn::divisibility::{divide_oracle, divide_via_closed_form, search_gcd_closed_nondivisor, SearchError, SearchOutcome};
use gcdtn::exactmatrix::{gcd_matrix, lcm_matrix, ExactMatrix};
use gcdtn::generate::{self, seeded_rng, GenError};
use gcdtn::io::{parse_input, DivisibilityDoc, ExponentDoc, MatrixDoc, SetDoc, VerdictDoc};
use gcdtn::numtheory::{format_rat, parse_nat, Nat};
use gcdtn::setmodel::{find_monotone_order, CoprimeChains, ExponentMatrix, OrderedSet, SetError};
use gcdtn::tncore::{check_tn_column_monotone, check_tn_minors, check_tn_triple, tridiagonal_inverse, TnSet};
use gcdtn::{DivisibilityReport, DEFAULT_MINOR_CAP};
use thiserror::Error;

pub mod report;

use report::{
    AnalyzeReport, ChainsDoc, GenerateReport, InvertReport, OrderDoc, OrderReport, PowReport, PowerDivideReport,
    Report, SearchReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gcdtn", version, about = "Exact GCD and LCM matrix analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// File holding the set or exponent matrix; `-` reads stdin.
    #[arg(long, default_value = "-")]
    pub input: String,
    /// Set elements given inline instead of via --input.
    #[arg(value_name = "ELEMENT")]
    pub values: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    TripleIdentity,
    ColumnMonotone,
    ExhaustiveMinors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pattern {
    Pascal,
    Vandermonde,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closure predicates, Pow(S), TN verdict and monotone order.
    Analyze {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::TripleIdentity)]
        method: MethodArg,
        /// Largest minor order examined by exhaustive-minors.
        #[arg(long, default_value_t = DEFAULT_MINOR_CAP)]
        minor_cap: usize,
    },
    /// The GCD matrix (S).
    GcdMatrix {
        #[command(flatten)]
        io: InputArgs,
    },
    /// The LCM matrix [S].
    LcmMatrix {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Prime exponent matrix with column directions.
    Pow {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Reordering that makes every Pow column monotone.
    Order {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Inverse of (S).
    Invert {
        #[command(flatten)]
        io: InputArgs,
        /// Cross-check the closed form against an exact solve.
        #[arg(long)]
        verify: bool,
    },
    /// Whether (S) divides [S].
    Divide {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        verify: bool,
    },
    /// Whether (S^e) divides [S^e].
    PowerDivide {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        verify: bool,
    },
    /// Build a TN set from a named exponent pattern.
    Generate {
        #[arg(long, value_enum)]
        pattern: Pattern,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated increasing primes; defaults to the first k primes.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
        /// Comma-separated increasing bases for the vandermonde pattern.
        #[arg(long, value_delimiter = ',')]
        bases: Vec<u64>,
        #[arg(long, default_value_t = generate::DEFAULT_MAX_EXPONENT)]
        max_exp: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Look for a gcd-closed set whose GCD matrix does not divide its LCM matrix.
    Search {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Largest element considered.
        #[arg(long, default_value_t = 300)]
        bound: u64,
        /// Maximum number of candidate sets tested.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

impl From<SetError> for Failure {
    fn from(e: SetError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Inconsistent(msg)) => {
            let _ = writeln!(stderr, "internal inconsistency: {msg}");
            EXIT_INCONSISTENT
        }
        Err(Failure::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Output(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read_set(io: &InputArgs, stdin: &mut dyn Read) -> Result<OrderedSet, Failure> {
    let (source, text) = if !io.values.is_empty() {
        ("command line".to_string(), io.values.join(" "))
    } else if io.input == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        ("stdin".to_string(), text)
    } else {
        let text = std::fs::read_to_string(&io.input).map_err(|e| Failure::Input(format!("{}: {e}", io.input)))?;
        (io.input.clone(), text)
    };
    let input = parse_input(&text).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
    input.into_set().map_err(|e| Failure::Input(format!("{source}: {e}")))
}

fn emit<R: Report>(report: &R, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Text => write!(out, "{}", report.render_text())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn execute(command: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Analyze { io, method, minor_cap } => {
            let s = read_set(&io, stdin)?;
            emit(&analyze(&s, method, minor_cap)?, io.format, out)?;
            Ok(EXIT_OK)
        }
        Command::GcdMatrix { io } => {
            let s = read_set(&io, stdin)?;
            emit(&MatrixDoc::from(&gcd_matrix(&s)), io.format, out)?;
            Ok(EXIT_OK)
        }
        Command::LcmMatrix { io } => {
            let s = read_set(&io, stdin)?;
            emit(&MatrixDoc::from(&lcm_matrix(&s)), io.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Pow { io } => {
            let s = read_set(&io, stdin)?;
            let pow = s.pow_matrix();
            let report = PowReport {
                primes: pow.primes().iter().map(Nat::to_string).collect(),
                exponents: pow.exponents().to_vec(),
                directions: directions(&pow),
                column_monotone: pow.is_column_monotone(),
            };
            emit(&report, io.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Order { io } => {
            let s = read_set(&io, stdin)?;
            let report = match find_monotone_order(&s)? {
                Some(p) => OrderReport {
                    orderable: true,
                    permutation: Some(p.one_based()),
                    ordered: Some(SetDoc::from(&s.permuted(&p)?)),
                },
                None => OrderReport { orderable: false, permutation: None, ordered: None },
            };
            emit(&report, io.format, out)?;
            Ok(if report.orderable { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Invert { io, verify } => {
            let s = read_set(&io, stdin)?;
            let exact = || gcd_matrix(&s).inverse().expect("GCD matrices are nonsingular");
            let (method, inverse) = match certified(&s) {
                Some(tn) => {
                    let closed = tridiagonal_inverse(&tn)
                        .map_err(|e| Failure::Inconsistent(format!("closed-form inverse failed on a TN set: {e}")))?
                        .to_matrix();
                    if verify && closed != exact() {
                        return Err(Failure::Inconsistent(
                            "tridiagonal closed form disagrees with the exact inverse".into(),
                        ));
                    }
                    ("TridiagonalClosedForm", closed)
                }
                None => ("ExactSolve", exact()),
            };
            emit(&InvertReport { method: method.into(), inverse: MatrixDoc::from(&inverse) }, io.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Divide { io, verify } => {
            let s = read_set(&io, stdin)?;
            let report = divide(&s, verify)?;
            emit(&DivisibilityDoc::from(&report), io.format, out)?;
            Ok(if report.divides { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::PowerDivide { io, power, verify } => {
            let s = read_set(&io, stdin)?;
            let powered = s.power_set(power)?;
            let report = divide(&powered, verify)?;
            let doc = PowerDivideReport {
                power,
                set: SetDoc::from(&powered),
                result: DivisibilityDoc::from(&report),
            };
            emit(&doc, io.format, out)?;
            Ok(if report.divides { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Generate { pattern, n, primes, bases, max_exp, seed, format } => {
            let primes = if primes.is_empty() {
                None
            } else {
                Some(
                    primes
                        .iter()
                        .map(|p| parse_nat(p.trim()).map_err(|e| Failure::Input(format!("--primes: {e}"))))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            };
            let need_n = || n.ok_or_else(|| Failure::Input("--n is required for this pattern".into()));
            let (name, matrix): (&str, ExponentMatrix) = match pattern {
                Pattern::Pascal => ("pascal", generate::pascal(need_n()?, primes)?),
                Pattern::Vandermonde => {
                    if bases.is_empty() {
                        return Err(Failure::Input("--bases is required for the vandermonde pattern".into()));
                    }
                    ("vandermonde", generate::vandermonde(&bases, primes)?)
                }
                Pattern::Random => {
                    let mut rng = seeded_rng(seed);
                    let m = generate::random_column_monotone(&mut rng, need_n()?, primes.as_deref(), max_exp)?;
                    ("random", m)
                }
            };
            let set = matrix.reconstruct()?;
            let doc = ExponentDoc::from(&matrix);
            let report = GenerateReport {
                pattern: name.into(),
                primes: doc.primes,
                exponents: doc.exponents,
                elements: SetDoc::from(&set).elements,
            };
            emit(&report, format, out)?;
            Ok(EXIT_OK)
        }
        Command::Search { n, bound, budget, format } => {
            let outcome = search_gcd_closed_nondivisor(n, bound, budget).map_err(|e| match e {
                SearchError::InvalidSize => Failure::Input(e.to_string()),
                SearchError::SingleChainViolation(_) => Failure::Inconsistent(e.to_string()),
            })?;
            let report = match outcome {
                SearchOutcome::Found { set, report, stats } => SearchReport {
                    found: true,
                    set: Some(SetDoc::from(&set)),
                    violation: report.violation.map(|(i, j, v)| (i + 1, j + 1, format_rat(&v))),
                    tested: stats.tested,
                    single_chain_sets: stats.single_chain_sets,
                    exhausted: false,
                },
                SearchOutcome::NotFound { stats, exhausted } => SearchReport {
                    found: false,
                    set: None,
                    violation: None,
                    tested: stats.tested,
                    single_chain_sets: stats.single_chain_sets,
                    exhausted,
                },
            };
            emit(&report, format, out)?;
            Ok(if report.found { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn directions(pow: &ExponentMatrix) -> Vec<String> {
    pow.monotonicity().directions.iter().map(|d| d.as_str().to_string()).collect()
}

fn certified(s: &OrderedSet) -> Option<TnSet> {
    if s.len() < 3 {
        return None;
    }
    TnSet::certify(s.clone()).ok()
}

/// Closed form for TN sets with `n >= 3`, exact solve otherwise.
fn divide(s: &OrderedSet, verify: bool) -> Result<DivisibilityReport, Failure> {
    let Some(tn) = certified(s) else {
        return Ok(divide_oracle(s));
    };
    let closed = divide_via_closed_form(&tn)
        .map_err(|e| Failure::Inconsistent(format!("closed-form quotient failed on a TN set: {e}")))?;
    if verify {
        let oracle = divide_oracle(s);
        if oracle.divides != closed.divides || oracle.witness != closed.witness {
            return Err(Failure::Inconsistent(format!(
                "closed-form quotient disagrees with the exact solve on {s}"
            )));
        }
    }
    Ok(closed)
}

fn analyze(s: &OrderedSet, method: MethodArg, minor_cap: usize) -> Result<AnalyzeReport, Failure> {
    let pow = s.pow_matrix();
    let verdict = match method {
        MethodArg::TripleIdentity => check_tn_triple(s),
        MethodArg::ColumnMonotone => check_tn_column_monotone(s),
        MethodArg::ExhaustiveMinors => {
            check_tn_minors(s, minor_cap).map_err(|e| Failure::Input(format!("{e}; raise --minor-cap")))?
        }
    };
    let coprime_chains = match s.classify_coprime_divisor_chains() {
        CoprimeChains::Chains(blocks) => {
            ChainsDoc::Chains(blocks.iter().map(|b| b.iter().map(Nat::to_string).collect()).collect())
        }
        CoprimeChains::NotOfThisForm => ChainsDoc::NotOfThisForm,
    };
    let monotone_order = match find_monotone_order(s) {
        Ok(Some(p)) => OrderDoc::Orderable(p.one_based()),
        Ok(None) => OrderDoc::NotOrderable,
        Err(SetError::SearchBudgetExceeded { columns, cap }) => OrderDoc::SearchBudgetExceeded { columns, cap },
        Err(e) => return Err(e.into()),
    };
    let gcd: ExactMatrix = gcd_matrix(s);
    Ok(AnalyzeReport {
        set: SetDoc::from(s),
        gcd_closed: s.is_gcd_closed(),
        factor_closed: s.is_factor_closed(),
        coprime_chains,
        pow: ExponentDoc::from(&pow),
        directions: directions(&pow),
        column_monotone: pow.is_column_monotone(),
        tn: VerdictDoc::from(&verdict),
        monotone_order,
        max_greatest_type_divisors: s.max_greatest_type_divisor_count(),
        positive_definite: gcd.is_positive_definite().expect("GCD matrices are square"),
    })
}
