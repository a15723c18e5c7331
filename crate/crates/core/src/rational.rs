//! Exact rational arithmetic helpers: construction, parsing, canonical
//! rendering, and the Bernoulli numbers used by the Eisenstein series.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Canonical exact rational: arbitrary precision, coprime, positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `n/d` with the denominator omitted when it is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses an integer or `num/den` string.
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        None => BigInt::from_str(s.trim()).ok().map(Rat::from_integer),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
    }
}

/// Largest integer `<= r`.
pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Generalized binomial coefficient C(e, j) for rational e and j >= 0.
pub fn binomial_general(e: &Rat, j: u64) -> Rat {
    let mut acc = Rat::one();
    for t in 0..j {
        acc *= e - rat(t as i64);
        acc /= rat((t + 1) as i64);
    }
    acc
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]))
}

/// Bernoulli number B_m, by the defining recurrence
/// sum_{j=0..m} C(m+1, j) B_j = 0, with B_1 = -1/2.
pub fn bernoulli(m: usize) -> Rat {
    let mut cache = bernoulli_cache().lock().unwrap();
    while cache.len() <= m {
        let k = cache.len();
        // B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
        let mut sum = Rat::zero();
        for (j, b) in cache.iter().enumerate() {
            sum += binomial_general(&rat((k + 1) as i64), j as u64) * b;
        }
        let b_k = -sum / rat((k + 1) as i64);
        cache.push(b_k);
    }
    cache[m].clone()
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Exact integer value of `r`, if it is an integer that fits in i64.
pub fn as_i64(r: &Rat) -> Option<i64> {
    if !is_integer(r) {
        return None;
    }
    use num::ToPrimitive;
    r.numer().to_i64()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}
