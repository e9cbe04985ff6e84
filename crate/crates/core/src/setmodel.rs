//! Ordered sets of distinct positive integers and their prime-exponent
//! matrices.
//!
//! Order is part of an [`OrderedSet`]'s identity: two sets holding the same
//! elements in different orders have different GCD matrices, and only some
//! orders make the exponent matrix column monotone.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numtheory::{factorize, gcd, is_prime, Nat};
use crate::parallel;

/// Largest number of non-constant exponent columns the orderability search
/// will enumerate directions for.
pub const DIRECTION_SEARCH_CAP: usize = 30;

/// Indices are 0-based; messages print them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("an ordered set needs at least one element")]
    Empty,
    #[error("element {} is 0; elements must be positive", index + 1)]
    ZeroElement { index: usize },
    #[error("duplicate element {value} at positions {} and {}", first + 1, second + 1)]
    Duplicate { value: Nat, first: usize, second: usize },
    #[error("{0} is not a member of the set")]
    NotAMember(Nat),
    #[error("exponent rows {} and {} are identical", first + 1, second + 1)]
    DuplicateRows { first: usize, second: usize },
    #[error("{0} is not prime")]
    NotPrime(Nat),
    #[error("primes are not strictly increasing at position {}", index + 1)]
    PrimesNotIncreasing { index: usize },
    #[error("exponent row {} has {found} entries, expected {expected}", row + 1)]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("{columns} non-constant exponent columns exceed the search cap of {cap}")]
    SearchBudgetExceeded { columns: usize, cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("power must be at least 1")]
    ZeroPower,
}

/// Distinct positive integers in a significant order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedSet {
    elements: Vec<Nat>,
}

impl OrderedSet {
    pub fn new(elements: Vec<Nat>) -> Result<Self, SetError> {
        if elements.is_empty() {
            return Err(SetError::Empty);
        }
        let mut seen: HashMap<&Nat, usize> = HashMap::with_capacity(elements.len());
        for (i, x) in elements.iter().enumerate() {
            if x.is_zero() {
                return Err(SetError::ZeroElement { index: i });
            }
            if let Some(&first) = seen.get(x) {
                return Err(SetError::Duplicate {
                    value: x.clone(),
                    first,
                    second: i,
                });
            }
            seen.insert(x, i);
        }
        Ok(Self { elements })
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self, SetError> {
        Self::new(values.iter().map(|&v| Nat::from(v)).collect())
    }

    pub fn elements(&self) -> &[Nat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> &Nat {
        &self.elements[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Nat> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &Nat) -> bool {
        self.elements.contains(x)
    }

    pub fn into_elements(self) -> Vec<Nat> {
        self.elements
    }

    /// The same elements in increasing order.
    pub fn sorted(&self) -> OrderedSet {
        let mut elements = self.elements.clone();
        elements.sort();
        OrderedSet { elements }
    }

    /// `σ(S)`: position `i` of the result holds element `σ(i)` of `self`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<OrderedSet, SetError> {
        if sigma.len() != self.len() {
            return Err(SetError::InvalidPermutation(format!(
                "permutation of {} points applied to a set of {}",
                sigma.len(),
                self.len()
            )));
        }
        Ok(OrderedSet {
            elements: sigma.images.iter().map(|&i| self.elements[i].clone()).collect(),
        })
    }

    /// Prime-exponent matrix over the sorted primes dividing the product.
    pub fn pow_matrix(&self) -> ExponentMatrix {
        let factorizations: Vec<_> = self
            .elements
            .iter()
            .map(|x| factorize(x).expect("elements are positive"))
            .collect();
        let mut primes: Vec<Nat> = factorizations
            .iter()
            .flat_map(|f| f.factors().iter().map(|(p, _)| p.clone()))
            .collect();
        primes.sort();
        primes.dedup();
        let exponents = factorizations
            .iter()
            .map(|f| primes.iter().map(|p| f.exponent_of(p)).collect())
            .collect();
        ExponentMatrix { primes, exponents }
    }

    pub fn is_gcd_closed(&self) -> bool {
        let members: HashSet<&Nat> = self.elements.iter().collect();
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| members.contains(&gcd(&self.elements[i], &self.elements[j]))))
    }

    pub fn is_factor_closed(&self) -> bool {
        let members: HashSet<&Nat> = self.elements.iter().collect();
        if !members.contains(&Nat::one()) {
            return false;
        }
        self.elements.iter().all(|x| {
            let f = factorize(x).expect("elements are positive");
            match f.divisor_count() {
                Some(count) if count <= self.len() as u64 => {
                    f.divisors().iter().all(|d| members.contains(d))
                }
                _ => false,
            }
        })
    }

    /// True when the elements can be arranged as `x_1 | x_2 | ... | x_n`.
    pub fn is_divisor_chain(&self) -> bool {
        let sorted = self.sorted();
        sorted
            .elements
            .windows(2)
            .all(|w| w[1].is_multiple_of(&w[0]))
    }

    /// `G_S(y)`: members `x < y` dividing `y` with no member strictly between
    /// them in the divisibility order. Returned in increasing order.
    pub fn greatest_type_divisors(&self, y: &Nat) -> Result<Vec<Nat>, SetError> {
        if !self.contains(y) {
            return Err(SetError::NotAMember(y.clone()));
        }
        let below: Vec<&Nat> = self
            .elements
            .iter()
            .filter(|x| *x < y && y.is_multiple_of(x))
            .collect();
        let mut out: Vec<Nat> = below
            .iter()
            .filter(|x| {
                !below
                    .iter()
                    .any(|z| z != *x && z.is_multiple_of(x))
            })
            .map(|x| (*x).clone())
            .collect();
        out.sort();
        Ok(out)
    }

    /// `max_{x in S} |G_S(x)|`.
    pub fn max_greatest_type_divisor_count(&self) -> usize {
        self.elements
            .iter()
            .map(|y| {
                self.greatest_type_divisors(y)
                    .expect("y is a member")
                    .len()
            })
            .max()
            .unwrap_or(0)
    }

    /// Partition into pairwise-coprime divisor chains, if one exists.
    ///
    /// Blocks are the connected components of the graph joining elements
    /// with a common factor; a partition exists iff every component is a
    /// chain. The element 1 is coprime to everything and forms its own block.
    /// Blocks are listed by first appearance in the set, each in divisibility
    /// order.
    pub fn classify_coprime_divisor_chains(&self) -> CoprimeChains {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if !gcd(&self.elements[i], &self.elements[j]).is_one() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut blocks: Vec<(usize, Vec<Nat>)> = Vec::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            match blocks.iter_mut().find(|(r, _)| *r == root) {
                Some((_, block)) => block.push(self.elements[i].clone()),
                None => blocks.push((root, vec![self.elements[i].clone()])),
            }
        }
        let mut chains = Vec::with_capacity(blocks.len());
        for (_, mut block) in blocks {
            block.sort();
            if !block.windows(2).all(|w| w[1].is_multiple_of(&w[0])) {
                return CoprimeChains::NotOfThisForm;
            }
            chains.push(block);
        }
        CoprimeChains::Chains(chains)
    }

    /// Elementwise `e`-th power, order preserved.
    pub fn power_set(&self, e: u32) -> Result<OrderedSet, SetError> {
        if e == 0 {
            return Err(SetError::ZeroPower);
        }
        Ok(OrderedSet {
            elements: self.elements.iter().map(|x| x.pow(e)).collect(),
        })
    }

    /// Smallest gcd-closed superset, in increasing order.
    pub fn gcd_closure(&self) -> OrderedSet {
        let mut members: HashSet<Nat> = self.elements.iter().cloned().collect();
        let mut frontier: Vec<Nat> = members.iter().cloned().collect();
        while !frontier.is_empty() {
            let current: Vec<Nat> = members.iter().cloned().collect();
            let mut next = Vec::new();
            for a in &frontier {
                for b in &current {
                    let g = gcd(a, b);
                    if !members.contains(&g) {
                        members.insert(g.clone());
                        next.push(g);
                    }
                }
            }
            frontier = next;
        }
        let mut elements: Vec<Nat> = members.into_iter().collect();
        elements.sort();
        OrderedSet { elements }
    }

    /// Smallest factor-closed superset, in increasing order.
    pub fn factor_closure(&self) -> OrderedSet {
        let mut elements: Vec<Nat> = self
            .elements
            .iter()
            .flat_map(|x| factorize(x).expect("elements are positive").divisors())
            .collect();
        elements.sort();
        elements.dedup();
        OrderedSet { elements }
    }
}

impl fmt::Display for OrderedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoprimeChains {
    Chains(Vec<Vec<Nat>>),
    NotOfThisForm,
}

/// Bijection on `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Builds from 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, SetError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(SetError::InvalidPermutation(format!(
                    "{images:?} is not a rearrangement of 0..{n}"
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Images shifted to the 1-based convention used in reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// `Pow(S)`: row `i` holds the exponents of `primes` in the `i`-th element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    primes: Vec<Nat>,
    exponents: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnDirection {
    Constant,
    /// Non-decreasing and not constant.
    Up,
    /// Non-increasing and not constant.
    Down,
    /// Neither; the column breaks monotonicity.
    Mixed,
}

impl ColumnDirection {
    pub fn of(column: impl IntoIterator<Item = u64>) -> Self {
        let (mut rises, mut falls) = (false, false);
        let mut prev: Option<u64> = None;
        for v in column {
            if let Some(p) = prev {
                rises |= v > p;
                falls |= v < p;
            }
            prev = Some(v);
        }
        match (rises, falls) {
            (false, false) => Self::Constant,
            (true, false) => Self::Up,
            (false, true) => Self::Down,
            (true, true) => Self::Mixed,
        }
    }

    pub fn is_monotone(self) -> bool {
        self != Self::Mixed
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Constant => "Constant",
            Self::Up => "Up",
            Self::Down => "Down",
            Self::Mixed => "Mixed",
        }
    }
}

/// Per-column direction tags of an exponent matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneReport {
    pub directions: Vec<ColumnDirection>,
}

impl MonotoneReport {
    pub fn is_column_monotone(&self) -> bool {
        self.directions.iter().all(|d| d.is_monotone())
    }
}

impl ExponentMatrix {
    /// Validates primes (prime, strictly increasing) and row lengths.
    pub fn new(primes: Vec<Nat>, exponents: Vec<Vec<u64>>) -> Result<Self, SetError> {
        for (i, p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(SetError::NotPrime(p.clone()));
            }
            if i > 0 && primes[i - 1] >= *p {
                return Err(SetError::PrimesNotIncreasing { index: i });
            }
        }
        if exponents.is_empty() {
            return Err(SetError::Empty);
        }
        for (row, r) in exponents.iter().enumerate() {
            if r.len() != primes.len() {
                return Err(SetError::RaggedRows {
                    row,
                    expected: primes.len(),
                    found: r.len(),
                });
            }
        }
        Ok(Self { primes, exponents })
    }

    pub fn primes(&self) -> &[Nat] {
        &self.primes
    }

    pub fn exponents(&self) -> &[Vec<u64>] {
        &self.exponents
    }

    pub fn rows(&self) -> usize {
        self.exponents.len()
    }

    pub fn cols(&self) -> usize {
        self.primes.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = u64> + '_ {
        self.exponents.iter().map(move |r| r[j])
    }

    pub fn monotonicity(&self) -> MonotoneReport {
        MonotoneReport {
            directions: (0..self.cols())
                .map(|j| ColumnDirection::of(self.column(j)))
                .collect(),
        }
    }

    pub fn is_column_monotone(&self) -> bool {
        self.monotonicity().is_column_monotone()
    }

    /// Every exponent multiplied by `e`; same primes.
    pub fn scaled(&self, e: u64) -> ExponentMatrix {
        ExponentMatrix {
            primes: self.primes.clone(),
            exponents: self
                .exponents
                .iter()
                .map(|r| r.iter().map(|v| v * e).collect())
                .collect(),
        }
    }

    /// `x_i = prod_j p_j^{m_ij}`.
    pub fn reconstruct(&self) -> Result<OrderedSet, SetError> {
        let mut first_seen: HashMap<&[u64], usize> = HashMap::new();
        for (i, row) in self.exponents.iter().enumerate() {
            if let Some(&first) = first_seen.get(row.as_slice()) {
                return Err(SetError::DuplicateRows { first, second: i });
            }
            first_seen.insert(row, i);
        }
        let elements = self
            .exponents
            .iter()
            .map(|row| {
                self.primes
                    .iter()
                    .zip(row)
                    .fold(Nat::one(), |acc, (p, &e)| acc * p.pow(e as u32))
            })
            .collect();
        OrderedSet::new(elements)
    }
}

/// Finds a rearrangement `σ` making `Pow(σ(S))` column monotone.
///
/// Constant columns are dropped; for each direction assignment of the
/// remaining columns (the first one pinned to `Up`, its mirror covers the
/// other half) the Down columns are negated and the rows must then form a
/// chain under componentwise `<=`. Among all valid orders the
/// lexicographically smallest image list is returned. `Ok(None)` means no
/// such order exists.
pub fn find_monotone_order(s: &OrderedSet) -> Result<Option<Permutation>, SetError> {
    let pm = s.pow_matrix();
    let varying: Vec<usize> = (0..pm.cols())
        .filter(|&j| ColumnDirection::of(pm.column(j)) != ColumnDirection::Constant)
        .collect();
    if varying.len() > DIRECTION_SEARCH_CAP {
        return Err(SetError::SearchBudgetExceeded {
            columns: varying.len(),
            cap: DIRECTION_SEARCH_CAP,
        });
    }
    let n = s.len();
    if varying.is_empty() {
        return Ok(Some(Permutation::identity(n)));
    }
    let rows: Vec<Vec<i64>> = pm
        .exponents
        .iter()
        .map(|r| varying.iter().map(|&j| r[j] as i64).collect())
        .collect();
    let free = varying.len() - 1;
    let best = parallel::filter_map_min_range(1u64 << free, |mask| {
        let keyed: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(c, &v)| if c > 0 && (mask >> (c - 1)) & 1 == 1 { -v } else { v })
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| keyed[a].cmp(&keyed[b]).then(a.cmp(&b)));
        let chain = order.windows(2).all(|w| {
            keyed[w[0]]
                .iter()
                .zip(&keyed[w[1]])
                .all(|(a, b)| a <= b)
        });
        if !chain {
            return None;
        }
        let reversed: Vec<usize> = order.iter().rev().copied().collect();
        Some(order.min(reversed))
    });
    Ok(best.map(|images| Permutation { images }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn set(values: &[u64]) -> OrderedSet {
        OrderedSet::from_u64s(values).unwrap()
    }

    fn nats(values: &[u64]) -> Vec<Nat> {
        values.iter().map(|&v| Nat::from(v)).collect()
    }

    const WORKED_S: [u64; 5] = [4000, 6000, 600, 54, 81];
    const WORKED_S_PRIME: [u64; 5] = [81, 4000, 600, 6000, 54];

    fn brute_force_order(s: &OrderedSet) -> Option<Vec<usize>> {
        (0..s.len())
            .permutations(s.len())
            .filter(|p| {
                let sigma = Permutation::from_images(p.clone()).unwrap();
                s.permuted(&sigma).unwrap().pow_matrix().is_column_monotone()
            })
            .min()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(OrderedSet::new(vec![]), Err(SetError::Empty));
        assert_eq!(
            OrderedSet::from_u64s(&[3, 0]),
            Err(SetError::ZeroElement { index: 1 })
        );
        assert!(matches!(
            OrderedSet::from_u64s(&[3, 5, 3]),
            Err(SetError::Duplicate { first: 0, second: 2, .. })
        ));
    }

    #[test]
    fn pow_matrix_of_worked_example() {
        let pm = set(&WORKED_S).pow_matrix();
        assert_eq!(pm.primes(), nats(&[2, 3, 5]).as_slice());
        assert_eq!(
            pm.exponents(),
            &[vec![5, 0, 3], vec![4, 1, 3], vec![3, 1, 2], vec![1, 3, 0], vec![0, 4, 0]]
        );
        assert!(pm.is_column_monotone());

        let pm2 = set(&WORKED_S_PRIME).pow_matrix();
        assert_eq!(
            pm2.exponents(),
            &[vec![0, 4, 0], vec![5, 0, 3], vec![3, 1, 2], vec![4, 1, 3], vec![1, 3, 0]]
        );
        assert!(!pm2.is_column_monotone());
        assert_eq!(
            pm2.monotonicity().directions,
            vec![ColumnDirection::Mixed, ColumnDirection::Mixed, ColumnDirection::Mixed]
        );
        assert_eq!(
            pm.monotonicity().directions,
            vec![ColumnDirection::Down, ColumnDirection::Up, ColumnDirection::Down]
        );
    }

    #[test]
    fn pow_matrix_of_one_is_empty_row() {
        let pm = set(&[1]).pow_matrix();
        assert_eq!(pm.cols(), 0);
        assert_eq!(pm.rows(), 1);
        assert!(pm.is_column_monotone());
        assert_eq!(pm.reconstruct().unwrap(), set(&[1]));
    }

    #[test]
    fn vacuous_monotonicity() {
        let single_row = ExponentMatrix::new(nats(&[2, 3, 5]), vec![vec![4, 0, 9]]).unwrap();
        assert!(single_row.is_column_monotone());
        let no_cols = ExponentMatrix::new(vec![], vec![vec![], vec![]]).unwrap();
        assert!(no_cols.is_column_monotone());
    }

    #[test]
    fn orderability_of_worked_example() {
        let s_prime = set(&WORKED_S_PRIME);
        let sigma = find_monotone_order(&s_prime).unwrap().unwrap();
        let reordered = s_prime.permuted(&sigma).unwrap();
        assert!(reordered.pow_matrix().is_column_monotone());
        // lexicographically smallest of the two mirror orders is S reversed
        let mut expected = WORKED_S.to_vec();
        expected.reverse();
        assert_eq!(reordered, set(&expected));
        assert_eq!(Some(sigma.images().to_vec()), brute_force_order(&s_prime));
    }

    #[test]
    fn orderability_identity_and_negative_cases() {
        let chain = set(&[2, 6, 12]);
        assert!(find_monotone_order(&chain).unwrap().unwrap().is_identity());
        // {2,3,4} is orderable as (3,2,4)
        let sigma = find_monotone_order(&set(&[2, 3, 4])).unwrap().unwrap();
        assert_eq!(sigma.one_based(), vec![2, 1, 3]);
        assert_eq!(brute_force_order(&set(&[2, 3, 4])), Some(vec![1, 0, 2]));
        // each prime is absent from exactly one element, three elements want an end
        assert_eq!(find_monotone_order(&set(&[6, 10, 15])).unwrap(), None);
        assert_eq!(brute_force_order(&set(&[6, 10, 15])), None);
        assert_eq!(find_monotone_order(&set(&[7])).unwrap(), Some(Permutation::identity(1)));
    }

    #[test]
    fn orderability_cap() {
        let mut primes = Vec::new();
        let mut p = Nat::from(2u32);
        while primes.len() < 31 {
            if is_prime(&p) {
                primes.push(p.clone());
            }
            p += 1u32;
        }
        // rows 0 and 1 differ in every column
        let pm = ExponentMatrix::new(primes, vec![vec![0; 31], vec![1; 31]]).unwrap();
        let s = pm.reconstruct().unwrap();
        assert_eq!(
            find_monotone_order(&s),
            Err(SetError::SearchBudgetExceeded { columns: 31, cap: 30 })
        );
    }

    #[test]
    fn gcd_closed_examples() {
        assert!(set(&[1, 2, 3]).is_gcd_closed());
        assert!(set(&[2, 6, 12]).is_gcd_closed());
        assert!(!set(&[4, 6]).is_gcd_closed());
    }

    #[test]
    fn factor_closed_examples() {
        assert!(set(&[1, 2, 3, 4, 6, 12]).is_factor_closed());
        assert!(!set(&[2]).is_factor_closed());
        let upto: Vec<u64> = (1..=20).collect();
        assert!(set(&upto).is_factor_closed());
        assert!(!set(&[1, 2, 3, 12]).is_factor_closed());
    }

    #[test]
    fn greatest_type_divisor_examples() {
        assert_eq!(set(&[1, 2, 4]).greatest_type_divisors(&Nat::from(4u32)).unwrap(), nats(&[2]));
        assert_eq!(
            set(&[1, 2, 3, 6]).greatest_type_divisors(&Nat::from(6u32)).unwrap(),
            nats(&[2, 3])
        );
        assert!(set(&[1]).greatest_type_divisors(&Nat::one()).unwrap().is_empty());
        assert_eq!(
            set(&[1, 2]).greatest_type_divisors(&Nat::from(5u32)),
            Err(SetError::NotAMember(Nat::from(5u32)))
        );
        assert_eq!(set(&[1, 2, 3, 6]).max_greatest_type_divisor_count(), 2);
    }

    #[test]
    fn coprime_chain_examples() {
        assert_eq!(
            set(&[2, 4, 3, 9]).classify_coprime_divisor_chains(),
            CoprimeChains::Chains(vec![nats(&[2, 4]), nats(&[3, 9])])
        );
        assert_eq!(
            set(&[5]).classify_coprime_divisor_chains(),
            CoprimeChains::Chains(vec![nats(&[5])])
        );
        assert_eq!(
            set(&[4, 1, 2]).classify_coprime_divisor_chains(),
            CoprimeChains::Chains(vec![nats(&[2, 4]), nats(&[1])])
        );
        assert_eq!(
            set(&[6, 10, 15]).classify_coprime_divisor_chains(),
            CoprimeChains::NotOfThisForm
        );
    }

    #[test]
    fn power_set_examples() {
        assert_eq!(set(&[2, 6, 12]).power_set(2).unwrap(), set(&[4, 36, 144]));
        assert_eq!(set(&WORKED_S).power_set(1).unwrap(), set(&WORKED_S));
        assert_eq!(set(&[3]).power_set(0), Err(SetError::ZeroPower));
    }

    #[test]
    fn reconstruct_examples() {
        let pm = ExponentMatrix::new(
            nats(&[2, 3, 5]),
            vec![vec![5, 0, 3], vec![4, 1, 3], vec![3, 1, 2], vec![1, 3, 0], vec![0, 4, 0]],
        )
        .unwrap();
        assert_eq!(pm.reconstruct().unwrap(), set(&WORKED_S));

        let pascal = ExponentMatrix::new(
            nats(&[2, 3, 5, 7]),
            vec![vec![1, 1, 1, 1], vec![1, 2, 3, 4], vec![1, 3, 6, 10], vec![1, 4, 10, 20]],
        )
        .unwrap();
        let s = pascal.reconstruct().unwrap();
        let direct = |e: [u32; 4]| {
            Nat::from(2u32).pow(e[0])
                * Nat::from(3u32).pow(e[1])
                * Nat::from(5u32).pow(e[2])
                * Nat::from(7u32).pow(e[3])
        };
        assert_eq!(s.get(0), &Nat::from(210u32));
        assert_eq!(s.get(1), &direct([1, 2, 3, 4]));
        assert_eq!(s.get(2), &direct([1, 3, 6, 10]));
        assert_eq!(s.get(3), &direct([1, 4, 10, 20]));
        assert_eq!(s.pow_matrix(), pascal);

        let empty = ExponentMatrix::new(vec![], vec![vec![]]).unwrap();
        assert_eq!(empty.reconstruct().unwrap(), set(&[1]));
    }

    #[test]
    fn reconstruct_errors() {
        let dup = ExponentMatrix::new(nats(&[2]), vec![vec![1], vec![2], vec![1]]).unwrap();
        assert_eq!(dup.reconstruct(), Err(SetError::DuplicateRows { first: 0, second: 2 }));
        assert_eq!(
            ExponentMatrix::new(nats(&[2, 4]), vec![vec![1, 1]]),
            Err(SetError::NotPrime(Nat::from(4u32)))
        );
        assert_eq!(
            ExponentMatrix::new(nats(&[3, 2]), vec![vec![1, 1]]),
            Err(SetError::PrimesNotIncreasing { index: 1 })
        );
        assert!(matches!(
            ExponentMatrix::new(nats(&[2, 3]), vec![vec![1, 1], vec![2]]),
            Err(SetError::RaggedRows { row: 1, .. })
        ));
    }

    #[test]
    fn closures() {
        let s = set(&[12, 18, 8]);
        let g = s.gcd_closure();
        assert_eq!(g, set(&[2, 4, 6, 8, 12, 18]));
        assert!(g.is_gcd_closed());
        let f = set(&[12, 5]).factor_closure();
        assert_eq!(f, set(&[1, 2, 3, 4, 5, 6, 12]));
        assert!(f.is_factor_closed());
    }

    fn small_set() -> impl Strategy<Value = OrderedSet> {
        proptest::collection::btree_set(1u64..400, 1..7).prop_flat_map(|values| {
            let v: Vec<u64> = values.into_iter().collect();
            Just(v).prop_shuffle()
        })
        .prop_map(|v| OrderedSet::from_u64s(&v).unwrap())
    }

    proptest! {
        #[test]
        fn pow_matrix_round_trips(s in small_set()) {
            prop_assert_eq!(s.pow_matrix().reconstruct().unwrap(), s.clone());
            let pm = s.pow_matrix();
            for j in 0..pm.cols() {
                prop_assert!(pm.column(j).any(|v| v > 0));
            }
        }

        #[test]
        fn monotone_order_matches_brute_force(s in small_set()) {
            let found = find_monotone_order(&s).unwrap();
            if let Some(sigma) = &found {
                prop_assert!(s.permuted(sigma).unwrap().pow_matrix().is_column_monotone());
            }
            prop_assert_eq!(found.map(|p| p.images().to_vec()), brute_force_order(&s));
        }

        #[test]
        fn factor_closed_implies_gcd_closed(seed in 1u64..2000, extra in 1u64..2000) {
            let s = OrderedSet::from_u64s(&[seed, extra]).map(|s| s.factor_closure())
                .unwrap_or_else(|_| set(&[seed]).factor_closure());
            prop_assert!(s.is_factor_closed());
            prop_assert!(s.is_gcd_closed());
        }

        #[test]
        fn power_set_scales_exponents(s in small_set(), e in 1u32..4) {
            let pe = s.power_set(e).unwrap().pow_matrix();
            prop_assert_eq!(pe, s.pow_matrix().scaled(e as u64));
        }

        #[test]
        fn coprime_chain_blocks_are_valid(s in small_set()) {
            if let CoprimeChains::Chains(blocks) = s.classify_coprime_divisor_chains() {
                for b in &blocks {
                    prop_assert!(b.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
                }
                for (i, a) in blocks.iter().enumerate() {
                    for b in &blocks[i + 1..] {
                        for x in a {
                            for y in b {
                                prop_assert_eq!(gcd(x, y).to_u64(), Some(1));
                            }
                        }
                    }
                }
                prop_assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), s.len());
            }
        }
    }
}
