//! Arbitrary-precision integer arithmetic shared by every other module.
//!
//! Naturals are [`BigUint`] and rationals are [`BigRational`]; both are kept
//! canonical (no leading zeros, rationals in lowest terms with a positive
//! denominator), so structural equality is value equality.

mod factor;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use factor::{factorize, is_prime, Factorization};

/// Nonnegative integer of unbounded magnitude.
pub type Nat = BigUint;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("input must be a positive integer, got 0")]
    ZeroInput,
    #[error("invalid decimal integer {0:?}")]
    InvalidInteger(String),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
}

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Nat, b: &Nat) -> Nat {
    a.gcd(b)
}

/// Least common multiple of two positive integers.
pub fn lcm(a: &Nat, b: &Nat) -> Result<Nat, NumError> {
    if a.is_zero() || b.is_zero() {
        return Err(NumError::ZeroInput);
    }
    Ok(a / gcd(a, b) * b)
}

/// Euler's totient via the product formula over the prime factorization.
pub fn totient(x: &Nat) -> Result<Nat, NumError> {
    let f = factorize(x)?;
    Ok(f.factors()
        .iter()
        .fold(Nat::one(), |acc, (p, e)| acc * (p - 1u32) * p.pow((*e - 1) as u32)))
}

/// Parses a decimal string (ASCII digits only, no sign, no exponent).
pub fn parse_nat(text: &str) -> Result<Nat, NumError> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NumError::InvalidInteger(text.to_string()));
    }
    Nat::from_str(t).map_err(|_| NumError::InvalidInteger(text.to_string()))
}

/// Parses `"p/q"` or a plain signed integer `"p"`.
pub fn parse_rat(text: &str) -> Result<Rat, NumError> {
    let bad = || NumError::InvalidRational(text.to_string());
    let signed = |s: &str| -> Result<BigInt, NumError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(s).map_err(|_| bad())
    };
    let t = text.trim();
    match t.split_once('/') {
        None => Ok(Rat::from_integer(signed(t)?)),
        Some((n, d)) => {
            let den = signed(d)?;
            if den.is_zero() || d.starts_with('-') {
                return Err(bad());
            }
            Ok(Rat::new(signed(n)?, den))
        }
    }
}

/// Renders a rational as `"num"` when integral, otherwise `"num/den"`.
pub fn format_rat(r: &Rat) -> String {
    RatDisplay(r).to_string()
}

struct RatDisplay<'a>(&'a Rat);

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Converts a natural into an integral rational.
pub fn nat_to_rat(x: &Nat) -> Rat {
    Rat::from_integer(BigInt::from(x.clone()))
}

/// Returns the value as a natural when `r` is a nonnegative integer.
pub fn rat_to_nat(r: &Rat) -> Option<Nat> {
    if r.is_integer() {
        r.numer().to_biguint()
    } else {
        None
    }
}
