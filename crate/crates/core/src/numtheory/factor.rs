use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Nat, NumError};

const SIEVE_LIMIT: usize = 1_000_000;

/// Deterministic Miller-Rabin witnesses for every n < 2^64.
const U64_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Number of fixed Miller-Rabin rounds for inputs of 2^64 and above.
const BIG_ROUNDS: usize = 40;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT + 1];
        let mut primes = Vec::new();
        for i in 2..=SIEVE_LIMIT {
            if composite[i] {
                continue;
            }
            primes.push(i as u32);
            let mut j = i * i;
            while j <= SIEVE_LIMIT {
                composite[j] = true;
                j += i;
            }
        }
        primes
    })
}

/// Canonical prime factorization: primes strictly increasing, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(Nat, u64)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(Nat, u64)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, p: &Nat) -> u64 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Product of `p^e` over all factors.
    pub fn value(&self) -> Nat {
        self.factors
            .iter()
            .fold(Nat::one(), |acc, (p, e)| acc * p.pow(*e as u32))
    }

    /// Number of positive divisors, `None` on overflow.
    pub fn divisor_count(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, (_, e)| acc.checked_mul(e + 1))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<Nat> {
        let mut divs = vec![Nat::one()];
        for (p, e) in &self.factors {
            let current = divs.len();
            let mut power = Nat::one();
            for _ in 0..*e {
                power *= p;
                for i in 0..current {
                    let d = &divs[i] * &power;
                    divs.push(d);
                }
            }
        }
        divs.sort();
        divs
    }
}

/// Prime factorization by trial division up to 10^6, then Pollard rho.
pub fn factorize(x: &Nat) -> Result<Factorization, NumError> {
    if x.is_zero() {
        return Err(NumError::ZeroInput);
    }
    let mut found: Vec<(Nat, u64)> = Vec::new();
    let mut rest = x.clone();
    let primes = small_primes();
    let mut idx = 0;

    while idx < primes.len() && rest.to_u64().is_none() {
        let p = primes[idx];
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            found.push((Nat::from(p), e));
        }
        idx += 1;
    }

    let mut trial_complete = false;
    if let Some(mut r) = rest.to_u64() {
        for &p in &primes[idx..] {
            let p = p as u64;
            if p * p > r {
                trial_complete = true;
                break;
            }
            let mut e = 0;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            if e > 0 {
                found.push((Nat::from(p), e));
            }
        }
        rest = Nat::from(r);
    }

    if !rest.is_one() {
        if trial_complete {
            found.push((rest, 1));
        } else {
            let mut big = Vec::new();
            split_into_primes(rest, &mut big);
            big.sort();
            for p in big {
                match found.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => found.push((p, 1)),
                }
            }
        }
    }
    found.sort();
    Ok(Factorization { factors: found })
}

fn split_into_primes(n: Nat, out: &mut Vec<Nat>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = match n.to_u64() {
        Some(small) => Nat::from(rho_u64(small)),
        None => rho_big(&n),
    };
    let other = &n / &d;
    split_into_primes(d, out);
    split_into_primes(other, out);
}

/// Primality: exact below 2^64, 40 fixed-base Miller-Rabin rounds above.
pub fn is_prime(n: &Nat) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => {
            let primes = small_primes();
            if primes[..200].iter().any(|&p| (n % p).is_zero()) {
                return false;
            }
            primes[..BIG_ROUNDS]
                .iter()
                .all(|&a| miller_rabin_big(n, &Nat::from(a)))
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n <= SIEVE_LIMIT as u64 {
        return small_primes().binary_search(&(n as u32)).is_ok();
    }
    for &p in &small_primes()[..50] {
        if n.is_multiple_of(p as u64) {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &U64_WITNESSES {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &Nat, a: &Nat) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Brent's variant; n is an odd composite or even.
fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut ys) = (0u64, 2u64, 0u64);
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &Nat) -> Nat {
    if n.is_even() {
        return Nat::from(2u32);
    }
    let mut c = Nat::one();
    loop {
        let f = |x: &Nat| (x * x + &c) % n;
        let mut x = Nat::from(2u32);
        let mut y = x.clone();
        let mut d = Nat::one();
        let mut steps = 0u64;
        while d.is_one() && steps < 1 << 26 {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
            steps += 1;
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += 1u32;
    }
}
