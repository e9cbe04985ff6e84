//! Divisibility of LCM matrices by GCD matrices in `M_n(Z)`.
//!
//! `(S) | [S]` means some integer `C` satisfies `[S] = C (S)` or `[S] = (S) C`.
//! Both matrices are symmetric, so a right quotient transposes into a left
//! one and the two notions coincide.

use thiserror::Error;

use crate::exactmatrix::{gcd_matrix, lcm_matrix, ExactMatrix};
use crate::numtheory::Rat;
use crate::parallel;
use crate::setmodel::{OrderedSet, SetError};
use crate::tncore::{quotient_closed_form, TnError, TnSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Left => "Left",
            Self::Right => "Right",
            Self::Both => "Both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisibilityMethod {
    /// Exact linear solve of `C (S) = [S]`.
    Oracle,
    /// Entry table for totally nonnegative `(S)`, no solve.
    ClosedForm,
}

impl DivisibilityMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Oracle => "Oracle",
            Self::ClosedForm => "ClosedForm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub divides: bool,
    pub side: Side,
    pub method: DivisibilityMethod,
    /// Right quotient `C` with `C (S) = [S]`, present iff `divides`.
    pub witness: Option<ExactMatrix>,
    /// First non-integral quotient entry (0-based), present iff `!divides`.
    pub violation: Option<(usize, usize, Rat)>,
}

impl DivisibilityReport {
    /// `C^T`, which satisfies `(S) C^T = [S]`.
    pub fn left_witness(&self) -> Option<ExactMatrix> {
        self.witness.as_ref().map(ExactMatrix::transpose)
    }
}

/// Decides `(S) | [S]` by solving `C (S) = [S]` exactly.
pub fn divide_oracle(s: &OrderedSet) -> DivisibilityReport {
    let quotient = gcd_matrix(s)
        .solve_right(&lcm_matrix(s))
        .expect("GCD matrices of distinct positive integers are positive definite");
    match quotient.first_non_integral() {
        None => DivisibilityReport {
            divides: true,
            side: Side::Both,
            method: DivisibilityMethod::Oracle,
            witness: Some(quotient),
            violation: None,
        },
        Some(v) => DivisibilityReport {
            divides: false,
            side: Side::Both,
            method: DivisibilityMethod::Oracle,
            witness: None,
            violation: Some(v),
        },
    }
}

/// Builds the integer quotient from the closed-form table.
pub fn divide_via_closed_form(tn: &TnSet) -> Result<DivisibilityReport, TnError> {
    let u = quotient_closed_form(tn)?;
    Ok(DivisibilityReport {
        divides: true,
        side: Side::Both,
        method: DivisibilityMethod::ClosedForm,
        witness: Some(u),
        violation: None,
    })
}

/// `(S^e) | [S^e]`, decided by the oracle on the elementwise power.
pub fn divide_power(s: &OrderedSet, e: u32) -> Result<DivisibilityReport, SetError> {
    Ok(divide_oracle(&s.power_set(e)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("set size must be at least 1")]
    InvalidSize,
    #[error("{0} is gcd-closed with every |G_S(x)| <= 1 but (S) does not divide [S]")]
    SingleChainViolation(OrderedSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate sets run through the oracle.
    pub tested: u64,
    /// Tested sets with `max |G_S(x)| <= 1`; each was confirmed to divide.
    pub single_chain_sets: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        set: OrderedSet,
        report: DivisibilityReport,
        stats: SearchStats,
    },
    NotFound {
        stats: SearchStats,
        /// True when every gcd-closed set under the bound was tested.
        exhausted: bool,
    },
}

/// Looks for a gcd-closed set of `n` elements, all at most `element_bound`,
/// whose GCD matrix does not divide its LCM matrix.
///
/// Candidates are increasing tuples visited by increasing largest element,
/// then lexicographically. A tuple is gcd-closed iff each prefix is, so the
/// enumeration prunes on the fly. At most `budget` candidates are tested and
/// the first failing one in enumeration order is returned regardless of how
/// batches are scheduled.
pub fn search_gcd_closed_nondivisor(
    n: usize,
    element_bound: u64,
    budget: u64,
) -> Result<SearchOutcome, SearchError> {
    if n == 0 {
        return Err(SearchError::InvalidSize);
    }
    let mut stats = SearchStats { tested: 0, single_chain_sets: 0 };
    for top in 1..=element_bound {
        let mut candidates = gcd_closed_with_max(n, top);
        let total = candidates.len();
        let room = (budget - stats.tested).min(total as u64) as usize;
        candidates.truncate(room);

        let evaluated = parallel::map(&candidates, |elements| {
            let s = OrderedSet::from_u64s(elements).expect("strictly increasing positive tuple");
            let single = s.max_greatest_type_divisor_count() <= 1;
            let report = divide_oracle(&s);
            (single, (!report.divides).then_some(report))
        });
        for (elements, (single, failure)) in candidates.iter().zip(evaluated) {
            stats.tested += 1;
            if single {
                stats.single_chain_sets += 1;
            }
            if let Some(report) = failure {
                let set = OrderedSet::from_u64s(elements).expect("valid tuple");
                if single {
                    return Err(SearchError::SingleChainViolation(set));
                }
                return Ok(SearchOutcome::Found { set, report, stats });
            }
        }
        if room < total {
            return Ok(SearchOutcome::NotFound { stats, exhausted: false });
        }
    }
    Ok(SearchOutcome::NotFound { stats, exhausted: true })
}

/// Every increasing gcd-closed `n`-tuple with largest element `top`, in
/// lexicographic order.
fn gcd_closed_with_max(n: usize, top: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, need: usize, top: u64, out: &mut Vec<Vec<u64>>) {
        if need == 0 {
            out.push(prefix.iter().copied().chain([top]).collect());
            return;
        }
        let start = prefix.last().map_or(1, |&v| v + 1);
        // leave room for the remaining `need - 1` elements below top
        let end = top.saturating_sub(need as u64 - 1);
        for t in start..end {
            let closed = |other: u64| {
                let g = num_integer::gcd(t, other);
                g == t || prefix.binary_search(&g).is_ok()
            };
            if closed(top) && prefix.iter().all(|&p| closed(p)) {
                prefix.push(t);
                extend(prefix, need - 1, top, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), n - 1, top, &mut out);
    out
}
