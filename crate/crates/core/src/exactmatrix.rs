//! Dense matrices over exact rationals.

use std::fmt;
use std::ops::Index;

use itertools::Itertools;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numtheory::{format_rat, gcd, lcm, nat_to_rat, Rat};
use crate::parallel;
use crate::setmodel::OrderedSet;

/// Default largest order for the exhaustive minor check.
pub const DEFAULT_MINOR_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("expected {expected} entries for the given shape, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("order {n} exceeds the exhaustive-minor cap of {cap}")]
    TooLargeForExhaustiveMinors { n: usize, cap: usize },
}

/// Row-major matrix of reduced rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::Ragged { row, expected: cols, found: r.len() });
            }
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rat::is_integer)
    }

    /// First non-integral entry in row-major order.
    pub fn first_non_integral(&self) -> Option<(usize, usize, Rat)> {
        self.entries
            .iter()
            .position(|r| !r.is_integer())
            .map(|k| (k / self.cols, k % self.cols, self.entries[k].clone()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rat::zero(), |acc, k| acc + &self[(i, k)] * &other[(k, j)])
        }))
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * &other[(i, j)]))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Integer matrix obtained by scaling each row by the lcm of its
    /// denominators, plus those positive row scales.
    fn cleared_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let scale = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                let ints = row
                    .iter()
                    .map(|r| r.numer() * (&scale / r.denom()))
                    .collect();
                (ints, scale)
            })
            .unzip()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<Rat, MatrixError> {
        self.require_square()?;
        let (ints, scales) = self.cleared_rows();
        let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(Rat::new(bareiss_determinant(ints), scale))
    }

    /// Enumerates every square minor, by increasing order then
    /// lexicographic row set then lexicographic column set, and stops at the
    /// first negative one.
    pub fn all_minors_nonnegative(&self, size_cap: usize) -> Result<MinorCheck, MatrixError> {
        let n = self.require_square()?;
        if n > size_cap {
            return Err(MatrixError::TooLargeForExhaustiveMinors { n, cap: size_cap });
        }
        // positive row scaling preserves the sign of every minor
        let (ints, scales) = self.cleared_rows();
        let mut examined = 0u64;
        for k in 1..=n {
            let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
            let pairs: Vec<(usize, usize)> = (0..subsets.len())
                .cartesian_product(0..subsets.len())
                .collect();
            let hit = parallel::find_map_first(&pairs, |&(r, c)| {
                let sub: Vec<Vec<BigInt>> = subsets[r]
                    .iter()
                    .map(|&i| subsets[c].iter().map(|&j| ints[i][j].clone()).collect())
                    .collect();
                let det = bareiss_determinant(sub);
                (det.sign() == Sign::Minus).then_some((r, c, det))
            });
            match hit {
                Some((r, c, det)) => {
                    let scale = subsets[r].iter().fold(BigInt::one(), |acc, &i| acc * &scales[i]);
                    examined += (r * subsets.len() + c + 1) as u64;
                    return Ok(MinorCheck {
                        nonnegative: false,
                        minors_examined: examined,
                        witness: Some(MinorWitness {
                            rows: subsets[r].clone(),
                            cols: subsets[c].clone(),
                            value: Rat::new(det, scale),
                        }),
                    });
                }
                None => examined += pairs.len() as u64,
            }
        }
        Ok(MinorCheck { nonnegative: true, minors_examined: examined, witness: None })
    }

    /// Solves `X * self = rhs` exactly.
    pub fn solve_right(&self, rhs: &Self) -> Result<Self, MatrixError> {
        let n = self.require_square()?;
        if rhs.cols != n {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        // X A = B  <=>  A^T X^T = B^T
        let at = self.transpose();
        let bt = rhs.transpose();
        let m = rhs.rows;
        let mut aug: Vec<Vec<Rat>> = (0..n)
            .map(|i| at.row(i).iter().chain(bt.row(i)).cloned().collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(MatrixError::Singular)?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        // aug[:, n..] is X^T (n x m)
        Ok(Self::from_fn(m, n, |i, j| aug[j][n + i].clone()))
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let n = self.require_square()?;
        self.solve_right(&Self::identity(n))
    }

    /// Sylvester's criterion: every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> Result<bool, MatrixError> {
        let n = self.require_square()?;
        if !self.is_symmetric() {
            return Err(MatrixError::NotSymmetric);
        }
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            if !self.submatrix(&idx, &idx).determinant()?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rat;

    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

/// Rows on separate lines, entries space-separated, rationals as `p/q`.
impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let line = self.row(i).iter().map(format_rat).join(" ");
            write!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorWitness {
    /// 0-based row indices, increasing.
    pub rows: Vec<usize>,
    /// 0-based column indices, increasing.
    pub cols: Vec<usize>,
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorCheck {
    pub nonnegative: bool,
    pub minors_examined: u64,
    pub witness: Option<MinorWitness>,
}

/// Bareiss elimination; every intermediate division is exact.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
    if negate {
        -det
    } else {
        det
    }
}

/// `(S)`: entry `(i, j)` is `gcd(x_i, x_j)`.
pub fn gcd_matrix(s: &OrderedSet) -> ExactMatrix {
    let x = s.elements();
    ExactMatrix::from_fn(x.len(), x.len(), |i, j| nat_to_rat(&gcd(&x[i], &x[j])))
}

/// `[S]`: entry `(i, j)` is `lcm(x_i, x_j)`.
pub fn lcm_matrix(s: &OrderedSet) -> ExactMatrix {
    let x = s.elements();
    ExactMatrix::from_fn(x.len(), x.len(), |i, j| {
        nat_to_rat(&lcm(&x[i], &x[j]).expect("elements are positive"))
    })
}
