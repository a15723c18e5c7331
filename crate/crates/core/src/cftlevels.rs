//! Central charges of the W-algebra and Sugawara constructions as exact
//! rational functions of the level k, and exact solution of the conformal
//! condition c_W(k) = c_sug(k) by the rational-root theorem.

use crate::rational::{rat, Rat};
use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LevelError {
    #[error("evaluation at a pole of the rational function")]
    PoleEvaluation,
}

/// Dense polynomial over the rationals, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly(coeffs);
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|c| rat(*c)).collect())
    }

    fn normalize(&mut self) {
        while matches!(self.0.last(), Some(c) if Zero::is_zero(c)) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Exact division by (x - r); panics unless r is a root.
    fn deflate(&self, r: &Rat) -> Poly {
        assert!(Zero::is_zero(&self.eval(r)), "deflation requires a root");
        let n = self.0.len();
        let mut out = vec![Rat::zero(); n - 1];
        let mut carry = Rat::zero();
        for i in (1..n).rev() {
            carry = &self.0[i] + &carry * r;
            out[i - 1] = carry.clone();
        }
        Poly::new(out)
    }

    /// Primitive integer version: clears denominators, divides by content,
    /// and makes the leading coefficient positive.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut l = BigInt::one();
        for c in &self.0 {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        for c in &mut ints {
            *c = &*c / &g;
        }
        ints
    }
}

/// Quotient of two polynomials, den nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc::new(p, Poly::from_i64(&[1]))
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, LevelError> {
        let d = self.den.eval(x);
        if Zero::is_zero(&d) {
            return Err(LevelError::PoleEvaluation);
        }
        Ok(self.num.eval(x) / d)
    }
}

/// One conformal-embedding case: the W-algebra central charge and the
/// Sugawara central charge as rational functions of the level k.
#[derive(Debug, Clone)]
pub struct LevelCase {
    pub name: String,
    pub c_w: RatFunc,
    pub c_sug: RatFunc,
}

impl LevelCase {
    /// F4: c_W = -6(3+k)(14+3k)/(9+k),
    /// c_sug = 3(8k+40)/(8k+42) + 3(k+4)/(k+6).
    pub fn f4() -> Self {
        let c_w = RatFunc::new(
            Poly::from_i64(&[3, 1])
                .mul(&Poly::from_i64(&[14, 3]))
                .scale(&rat(-6)),
            Poly::from_i64(&[9, 1]),
        );
        let c_sug = RatFunc::new(Poly::from_i64(&[120, 24]), Poly::from_i64(&[42, 8])).add(
            &RatFunc::new(Poly::from_i64(&[12, 3]), Poly::from_i64(&[6, 1])),
        );
        LevelCase {
            name: "F4".into(),
            c_w,
            c_sug,
        }
    }

    /// E8: c_W = -6(12490 + 1095k + 24k^2)/(30+k),
    /// c_sug = 3(15k+350)/(15k+352) + 3(k+22)/(k+24).
    pub fn e8() -> Self {
        let c_w = RatFunc::new(
            Poly::from_i64(&[12490, 1095, 24]).scale(&rat(-6)),
            Poly::from_i64(&[30, 1]),
        );
        let c_sug = RatFunc::new(Poly::from_i64(&[1050, 45]), Poly::from_i64(&[352, 15])).add(
            &RatFunc::new(Poly::from_i64(&[66, 3]), Poly::from_i64(&[24, 1])),
        );
        LevelCase {
            name: "E8".into(),
            c_w,
            c_sug,
        }
    }

    pub fn custom(name: &str, c_w: RatFunc, c_sug: RatFunc) -> Self {
        LevelCase {
            name: name.into(),
            c_w,
            c_sug,
        }
    }
}

/// Evaluates both central charges at level k.
pub fn w_charges(case: &LevelCase, k: &Rat) -> Result<(Rat, Rat), LevelError> {
    Ok((case.c_w.eval(k)?, case.c_sug.eval(k)?))
}

/// Result of solving c_W(k) = c_sug(k).
#[derive(Debug, Clone)]
pub struct LevelReport {
    /// Rational roots, ascending, poles excluded.
    pub roots: Vec<Rat>,
    /// Degree of the cleared polynomial.
    pub degree: usize,
    /// Remaining factor after dividing out the rational roots; empty or
    /// constant when the root list is complete.
    pub residual: Vec<BigInt>,
}

impl LevelReport {
    pub fn complete(&self) -> bool {
        self.residual.len() <= 1
    }
}

/// All rational solutions of c_W(k) = c_sug(k), by the rational-root
/// theorem on the primitive cleared polynomial.
pub fn conformal_levels(case: &LevelCase) -> LevelReport {
    let diff = case.c_w.sub(&case.c_sug);
    let cleared = diff.num.primitive_integer();
    let degree = cleared.len().saturating_sub(1);
    let mut poly = Poly::new(
        cleared
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect(),
    );
    let mut roots = Vec::new();
    // factor out x = 0 roots first
    while !poly.is_zero() && Zero::is_zero(&poly.0[0]) {
        roots.push(Rat::zero());
        poly = Poly::new(poly.0[1..].to_vec());
    }
    loop {
        let ints = poly.primitive_integer();
        if ints.len() <= 1 {
            break;
        }
        let a0 = ints[0].magnitude().clone();
        let an = ints[ints.len() - 1].magnitude().clone();
        let mut found = None;
        'search: for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(BigInt::from(sign) * &p, q.clone());
                    if Zero::is_zero(&poly.eval(&cand)) {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                poly = poly.deflate(&r);
                roots.push(r);
            }
            None => break,
        }
    }
    // drop roots at poles of either side
    roots.retain(|r| {
        !Zero::is_zero(&case.c_w.den.eval(r)) && !Zero::is_zero(&case.c_sug.den.eval(r))
    });
    roots.sort();
    roots.dedup();
    LevelReport {
        roots,
        degree,
        residual: poly.primitive_integer(),
    }
}

fn divisors(n: &num::BigUint) -> Vec<BigInt> {
    let n = BigInt::from(n.clone());
    if Zero::is_zero(&n) {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if Zero::is_zero(&(&n % &d)) {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}
