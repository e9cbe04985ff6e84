//! Total nonnegativity of GCD matrices and the closed forms it unlocks.
//!
//! A GCD matrix `(S)` is totally nonnegative exactly when, for every
//! `i <= j <= k`, `(x_i,x_j)(x_j,x_k) = x_j (x_i,x_k)`, and exactly when every
//! column of `Pow(S)` is monotone. Closed-form operations take a [`TnSet`],
//! which can only be obtained from a passing triple check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactmatrix::{gcd_matrix, ExactMatrix, MatrixError, DEFAULT_MINOR_CAP};
use crate::numtheory::{gcd, lcm, nat_to_rat, Nat, Rat};
use crate::parallel;
use crate::setmodel::{ColumnDirection, OrderedSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TnError {
    #[error("GCD matrix is not totally nonnegative (witness: {:?})", .0.witness)]
    NotTn(Box<TnVerdict>),
    #[error("closed forms need at least 3 elements, got {n}")]
    SizeTooSmall { n: usize },
    #[error("superdiagonal denominator vanishes at a_{index}")]
    SingularDenominator { index: usize },
    #[error("index order violated: i = {i} > j = {j}")]
    IndexOrder { i: usize, j: usize },
    #[error("index {index} out of range for a set of {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("closed-form entry ({row}, {col}) is not an exact quotient")]
    InexactEntry { row: usize, col: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TnMethod {
    ColumnMonotone,
    TripleIdentity,
    ExhaustiveMinors,
}

impl TnMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ColumnMonotone => "ColumnMonotone",
            Self::TripleIdentity => "TripleIdentity",
            Self::ExhaustiveMinors => "ExhaustiveMinors",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::ColumnMonotone, Self::TripleIdentity, Self::ExhaustiveMinors]
            .into_iter()
            .find(|m| m.as_str() == s)
    }
}

/// Evidence that a GCD matrix is not totally nonnegative. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TnWitness {
    /// `i <= j <= k` violating the triple identity.
    Triple(usize, usize, usize),
    /// Row and column index sets of a negative minor.
    Minor { rows: Vec<usize>, cols: Vec<usize> },
    /// A non-monotone column of `Pow(S)` and its prime.
    Column { column: usize, prime: Nat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TnVerdict {
    pub is_tn: bool,
    pub method: TnMethod,
    pub witness: Option<TnWitness>,
}

impl TnVerdict {
    fn pass(method: TnMethod) -> Self {
        Self { is_tn: true, method, witness: None }
    }

    fn fail(method: TnMethod, witness: TnWitness) -> Self {
        Self { is_tn: false, method, witness: Some(witness) }
    }
}

fn gcd_table(x: &[Nat]) -> Vec<Vec<Nat>> {
    x.iter().map(|a| x.iter().map(|b| gcd(a, b)).collect()).collect()
}

/// Triple-identity decider.
///
/// For every `i <= j <= k` checks `(x_i,x_j)(x_j,x_k) = x_j (x_i,x_k)` together
/// with `(x_i,x_k) = (x_i,x_j,x_k)` and `x_j (x_i,x_k) | x_i x_k`, reporting the
/// first failing triple in lexicographic order. Sets with fewer than three
/// elements are decided by exhaustive minors.
pub fn check_tn_triple(s: &OrderedSet) -> TnVerdict {
    let n = s.len();
    if n < 3 {
        return check_tn_minors(s, DEFAULT_MINOR_CAP).expect("n < 3 is under any cap");
    }
    let x = s.elements();
    let g = gcd_table(x);
    let failing = parallel::find_map_first_range(n, |i| {
        for j in i..n {
            for k in j..n {
                let identity = &g[i][j] * &g[j][k] == &x[j] * &g[i][k];
                let triple_gcd = g[i][k] == gcd(&g[i][j], &x[k]);
                let divides = (&x[i] * &x[k]).is_multiple_of(&(&x[j] * &g[i][k]));
                if !(identity && triple_gcd && divides) {
                    return Some((i, j, k));
                }
            }
        }
        None
    });
    match failing {
        Some((i, j, k)) => TnVerdict::fail(TnMethod::TripleIdentity, TnWitness::Triple(i, j, k)),
        None => TnVerdict::pass(TnMethod::TripleIdentity),
    }
}

/// Column-monotone decider over `Pow(S)`.
pub fn check_tn_column_monotone(s: &OrderedSet) -> TnVerdict {
    let pm = s.pow_matrix();
    let bad = (0..pm.cols()).find(|&j| ColumnDirection::of(pm.column(j)) == ColumnDirection::Mixed);
    match bad {
        Some(column) => TnVerdict::fail(
            TnMethod::ColumnMonotone,
            TnWitness::Column { column, prime: pm.primes()[column].clone() },
        ),
        None => TnVerdict::pass(TnMethod::ColumnMonotone),
    }
}

/// Exhaustive-minor decider on `(S)`.
pub fn check_tn_minors(s: &OrderedSet, size_cap: usize) -> Result<TnVerdict, MatrixError> {
    let check = gcd_matrix(s).all_minors_nonnegative(size_cap)?;
    Ok(match check.witness {
        Some(w) => TnVerdict::fail(
            TnMethod::ExhaustiveMinors,
            TnWitness::Minor { rows: w.rows, cols: w.cols },
        ),
        None => TnVerdict::pass(TnMethod::ExhaustiveMinors),
    })
}

/// An ordered set whose GCD matrix passed the triple check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TnSet {
    set: OrderedSet,
    verdict: TnVerdict,
    gcds: Vec<Vec<Nat>>,
}

impl TnSet {
    pub fn certify(set: OrderedSet) -> Result<Self, TnError> {
        let verdict = check_tn_triple(&set);
        if !verdict.is_tn {
            return Err(TnError::NotTn(Box::new(verdict)));
        }
        let gcds = gcd_table(set.elements());
        Ok(Self { set, verdict, gcds })
    }

    pub fn set(&self) -> &OrderedSet {
        &self.set
    }

    pub fn verdict(&self) -> &TnVerdict {
        &self.verdict
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(x_i, x_j)` with 1-based indices, matching the closed-form tables.
    fn g(&self, i: usize, j: usize) -> &Nat {
        &self.gcds[i - 1][j - 1]
    }

    fn x(&self, i: usize) -> &Nat {
        self.set.get(i - 1)
    }

    fn g_int(&self, i: usize, j: usize) -> BigInt {
        BigInt::from(self.g(i, j).clone())
    }

    fn require_size(&self) -> Result<usize, TnError> {
        let n = self.len();
        if n < 3 {
            Err(TnError::SizeTooSmall { n })
        } else {
            Ok(n)
        }
    }
}

/// Index tuple (0-based) at which a TN identity failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityViolation {
    /// `(x_i,x_k)(x_j,x_l) != (x_i,x_l)(x_j,x_k)`.
    Quadruple(usize, usize, usize, usize),
    /// `(x_i,x_j)(x_1,x_n) != (x_1,x_j)(x_i,x_n)`.
    Endpoint(usize, usize),
}

/// Checks the four-index identity for all `i <= j <= k <= l` and its
/// endpoint specialisation for all `i <= j`.
pub fn check_quadruple_identity(tn: &TnSet) -> Result<(), IdentityViolation> {
    let n = tn.len();
    let g = &tn.gcds;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                for l in k..n {
                    if &g[i][k] * &g[j][l] != &g[i][l] * &g[j][k] {
                        return Err(IdentityViolation::Quadruple(i, j, k, l));
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            if &g[i][j] * &g[0][n - 1] != &g[0][j] * &g[i][n - 1] {
                return Err(IdentityViolation::Endpoint(i, j));
            }
        }
    }
    Ok(())
}

/// `[x_i, x_j] = (x_1,x_i)(x_j,x_n) / (x_1,x_n)` for 0-based `i <= j`.
pub fn lcm_from_gcds(tn: &TnSet, i: usize, j: usize) -> Result<Nat, TnError> {
    let n = tn.len();
    for index in [i, j] {
        if index >= n {
            return Err(TnError::IndexOutOfRange { index, n });
        }
    }
    if i > j {
        return Err(TnError::IndexOrder { i, j });
    }
    let num = tn.g(1, i + 1) * tn.g(j + 1, n);
    let (q, r) = num.div_rem(tn.g(1, n));
    if !r.is_zero() {
        return Err(TnError::InexactEntry { row: i, col: j });
    }
    debug_assert_eq!(q, lcm(tn.x(i + 1), tn.x(j + 1)).unwrap());
    Ok(q)
}

/// Coefficients of the symmetric tridiagonal inverse of a TN GCD matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TridiagonalInverse {
    /// `a_2, ..., a_n`: the off-diagonal entries, all nonzero.
    pub off_diagonal: Vec<Rat>,
    /// `b_1, ..., b_n`.
    pub diagonal: Vec<Rat>,
}

impl TridiagonalInverse {
    pub fn to_matrix(&self) -> ExactMatrix {
        let n = self.diagonal.len();
        ExactMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diagonal[i].clone()
            } else if i.abs_diff(j) == 1 {
                self.off_diagonal[i.min(j)].clone()
            } else {
                Rat::zero()
            }
        })
    }
}

/// Closed-form `(S)^-1` for a TN set with `n >= 3`.
pub fn tridiagonal_inverse(tn: &TnSet) -> Result<TridiagonalInverse, TnError> {
    let n = tn.require_size()?;
    let g1n = tn.g_int(1, n);
    let ratio = |num: BigInt| Rat::new(num, g1n.clone());

    // a[i] holds a_{i+1} for i in 1..n, a[0] unused
    let mut a = vec![Rat::zero(); n + 1];
    for i in 1..n {
        let den = tn.g_int(i, n) * tn.g_int(1, i + 1) - tn.g_int(i + 1, n) * tn.g_int(1, i);
        if den.is_zero() {
            return Err(TnError::SingularDenominator { index: i + 1 });
        }
        a[i + 1] = Rat::new(g1n.clone(), den);
    }

    let mut b = Vec::with_capacity(n);
    b.push(-ratio(tn.g_int(2, n)) * &a[2]);
    for i in 2..n {
        let num = tn.g_int(i - 1, n) * tn.g_int(1, i + 1) - tn.g_int(i + 1, n) * tn.g_int(1, i - 1);
        b.push(-ratio(num) * &a[i] * &a[i + 1]);
    }
    b.push(-ratio(tn.g_int(1, n - 1)) * &a[n]);

    Ok(TridiagonalInverse { off_diagonal: a.split_off(2), diagonal: b })
}

/// Closed-form integer quotient `U = [S](S)^-1` for a TN set with `n >= 3`.
///
/// Entries (1-based): `-1` on the diagonal except at `1` and `n`;
/// `U_21 = x_2/(x_1,x_2)`; `U_i1 = (x_i,x_n)/(x_1,x_n)` for `i != 1,2`;
/// `U_{n-1,n} = x_{n-1}/(x_{n-1},x_n)`; `U_in = (x_1,x_i)/(x_1,x_n)` for
/// `i != n-1,n`; zero elsewhere. Every division must be exact.
pub fn quotient_closed_form(tn: &TnSet) -> Result<ExactMatrix, TnError> {
    let n = tn.require_size()?;
    let exact = |num: &Nat, den: &Nat, row: usize, col: usize| -> Result<Rat, TnError> {
        let (q, r) = num.div_rem(den);
        if r.is_zero() {
            Ok(nat_to_rat(&q))
        } else {
            Err(TnError::InexactEntry { row: row - 1, col: col - 1 })
        }
    };
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let v = if i == j && i != 1 && i != n {
                -Rat::one()
            } else if i == 2 && j == 1 {
                exact(tn.x(2), tn.g(1, 2), i, j)?
            } else if i != 1 && i != 2 && j == 1 {
                exact(tn.g(i, n), tn.g(1, n), i, j)?
            } else if i == n - 1 && j == n {
                exact(tn.x(n - 1), tn.g(n - 1, n), i, j)?
            } else if i != n && i != n - 1 && j == n {
                exact(tn.g(1, i), tn.g(1, n), i, j)?
            } else {
                Rat::zero()
            };
            row.push(v);
        }
        rows.push(row);
    }
    Ok(ExactMatrix::from_rows(rows)?)
}
