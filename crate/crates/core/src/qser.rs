//! Truncated formal series in fractional powers of q over an exact
//! coefficient ring.
//!
//! A [`QSeries`] stores a finite table of nonzero coefficients indexed by
//! integer numerators over a per-series exponent denominator `L`, together
//! with a guaranteed-accuracy bound `acc`: every coefficient at an exponent
//! strictly below `acc` is exact, and no term at or above `acc` is stored.
//! All operations propagate `acc` so that equality claims below the bound
//! are sound.

use crate::rational::{ceil_int, rat, Rat};
use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Requirements on the coefficient ring. Implemented by [`Rat`] and by the
/// bi-jet ring used for mixed-derivative extraction.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, if this element is a unit.
    fn invert(&self) -> Option<Self>;
    fn from_rat(r: &Rat) -> Self;
    fn mul_rat(&self, r: &Rat) -> Self;
}

impl Coeff for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn invert(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(<Rat as One>::one() / self)
        }
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        self * r
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has no term below its accuracy bound")]
    ZeroLeadingTerm,
    #[error("leading coefficient is not invertible in the coefficient ring")]
    NonInvertibleLeadingCoefficient,
    #[error("insufficient accuracy: guaranteed up to {acc} but {requested} requested")]
    InsufficientAccuracy { acc: String, requested: String },
    #[error("product exponents must have positive start and step")]
    NonpositiveExponentStep,
}

/// Outcome of an exact coefficient-wise comparison below a bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<C> {
    Equal,
    FirstMismatch { exp: Rat, lhs: C, rhs: C },
}

impl<C> Verdict<C> {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Truncated formal series sum_m c_m q^(m/L), exact below `acc`.
#[derive(Debug, Clone)]
pub struct QSeries<C: Coeff = Rat> {
    scale: u64,
    terms: BTreeMap<i64, C>,
    acc: Rat,
}

impl<C: Coeff> QSeries<C> {
    pub fn zero(acc: Rat) -> Self {
        QSeries {
            scale: 1,
            terms: BTreeMap::new(),
            acc,
        }
    }

    pub fn one(acc: Rat) -> Self {
        Self::monomial(C::one(), &rat(0), acc)
    }

    /// The single term c * q^exp.
    pub fn monomial(c: C, exp: &Rat, acc: Rat) -> Self {
        let mut s = QSeries {
            scale: exp.denom().to_u64().expect("exponent denominator overflow"),
            terms: BTreeMap::new(),
            acc,
        };
        let m = exp.numer().to_i64().expect("exponent numerator overflow");
        if !c.is_zero() && *exp < s.acc {
            s.terms.insert(m, c);
        }
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rat, C)>, acc: Rat) -> Self {
        let mut s = Self::zero(acc);
        for (e, c) in terms {
            s.add_term(&e, c);
        }
        s
    }

    pub fn acc(&self) -> &Rat {
        &self.acc
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest stored exponent, if any term exists.
    pub fn ord(&self) -> Option<Rat> {
        self.terms
            .keys()
            .next()
            .map(|m| Rat::new(BigInt::from(*m), BigInt::from(self.scale)))
    }

    fn ord_or_acc(&self) -> Rat {
        self.ord().unwrap_or_else(|| self.acc.clone())
    }

    pub fn coeff_at(&self, exp: &Rat) -> C {
        let scaled = exp * rat(self.scale as i64);
        if !scaled.denom().is_one() {
            return C::zero();
        }
        match scaled.numer().to_i64() {
            Some(m) => self.terms.get(&m).cloned().unwrap_or_else(C::zero),
            None => C::zero(),
        }
    }

    /// Terms in ascending exponent order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (Rat, &C)> + '_ {
        let l = self.scale;
        self.terms
            .iter()
            .map(move |(m, c)| (Rat::new(BigInt::from(*m), BigInt::from(l)), c))
    }

    fn exp_of(&self, m: i64) -> Rat {
        Rat::new(BigInt::from(m), BigInt::from(self.scale))
    }

    /// Inserts c at exponent e, dropping zeros and terms at/above acc.
    fn add_term(&mut self, e: &Rat, c: C) {
        if c.is_zero() || *e >= self.acc {
            return;
        }
        let d = e.denom().to_u64().expect("exponent denominator overflow");
        if !self.scale.is_multiple_of(d) {
            let l = (self.scale as i64).lcm(&(d as i64)) as u64;
            self.rescale_to(l);
        }
        let m = (e * rat(self.scale as i64))
            .numer()
            .to_i64()
            .expect("exponent overflow");
        let cur = self.terms.remove(&m);
        let next = match cur {
            Some(old) => old.add(&c),
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(m, next);
        }
    }

    fn rescale_to(&mut self, l: u64) {
        assert!(l.is_multiple_of(self.scale));
        let f = (l / self.scale) as i64;
        if f == 1 {
            return;
        }
        self.terms = self.terms.iter().map(|(m, c)| (m * f, c.clone())).collect();
        self.scale = l;
    }

    /// Reduces L by the gcd of all exponent numerators and L.
    pub fn compress(&mut self) {
        let mut g = self.scale as i64;
        for m in self.terms.keys() {
            g = g.gcd(m);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.terms = self.terms.iter().map(|(m, c)| (m / g, c.clone())).collect();
            self.scale /= g as u64;
        }
    }

    fn unified(&self, other: &Self) -> (Self, Self) {
        let l = (self.scale as i64).lcm(&(other.scale as i64)) as u64;
        let mut a = self.clone();
        let mut b = other.clone();
        a.rescale_to(l);
        b.rescale_to(l);
        (a, b)
    }

    /// Term-wise sum; acc = min of the operand accuracies.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unified(other);
        let acc = a.acc.clone().min(b.acc.clone());
        let mut out: Self = QSeries {
            scale: a.scale,
            terms: BTreeMap::new(),
            acc,
        };
        for (m, c) in a.terms.iter().chain(b.terms.iter()) {
            if out.exp_of(*m) < out.acc {
                let cur = out.terms.remove(m);
                let next = match cur {
                    Some(old) => old.add(c),
                    None => c.clone(),
                };
                if !next.is_zero() {
                    out.terms.insert(*m, next);
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        QSeries {
            scale: self.scale,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
            acc: self.acc.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product; acc = min(acc_f + ord(g), acc_g + ord(f)).
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unified(other);
        let acc = (a.acc.clone() + b.ord_or_acc()).min(b.acc.clone() + a.ord_or_acc());
        let mut out: Self = QSeries {
            scale: a.scale,
            terms: BTreeMap::new(),
            acc: acc.clone(),
        };
        let bound = ceil_int(&(acc * rat(a.scale as i64)))
            .to_i64()
            .expect("accuracy overflow");
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                let m = m1 + m2;
                if m >= bound {
                    break; // b.terms ascending, later m2 only larger
                }
                if out.exp_of(m) >= out.acc {
                    continue;
                }
                let p = c1.mul(c2);
                if p.is_zero() {
                    continue;
                }
                let cur = out.terms.remove(&m);
                let next = match cur {
                    Some(old) => old.add(&p),
                    None => p,
                };
                if !next.is_zero() {
                    out.terms.insert(m, next);
                }
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        let mut out = QSeries {
            scale: self.scale,
            terms: BTreeMap::new(),
            acc: self.acc.clone(),
        };
        for (m, v) in &self.terms {
            let p = v.mul(c);
            if !p.is_zero() {
                out.terms.insert(*m, p);
            }
        }
        out
    }

    pub fn scalar_mul_rat(&self, r: &Rat) -> Self {
        self.scalar_mul(&C::from_rat(r))
    }

    /// Multiplies by the monomial c * q^exp (shifts exponents and acc).
    pub fn mul_monomial(&self, c: &C, exp: &Rat) -> Self {
        let mut out = Self::zero(&self.acc + exp);
        for (e, v) in self.iter_terms() {
            out.add_term(&(e + exp), v.mul(c));
        }
        out
    }

    /// Multiplicative inverse up to guaranteed accuracy.
    ///
    /// For f with lowest term c q^v, the result has acc = acc_f - 2v.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let v_exp = self.ord().ok_or(SeriesError::ZeroLeadingTerm)?;
        let lead = self.terms.values().next().unwrap();
        let lead_inv = lead
            .invert()
            .ok_or(SeriesError::NonInvertibleLeadingCoefficient)?;
        let l = self.scale as i64;
        let v = (v_exp.clone() * rat(l)).numer().to_i64().unwrap();
        // h = f shifted to ord 0; compute g' = 1/h to accuracy acc_f - v,
        // then shift back by -v for final acc = acc_f - 2v.
        let g_acc = &self.acc - &v_exp; // accuracy of g'
        let bound = ceil_int(&(&g_acc * rat(l))).to_i64().unwrap();
        let h: BTreeMap<i64, C> = self.terms.iter().map(|(m, c)| (m - v, c.clone())).collect();
        let mut g: BTreeMap<i64, C> = BTreeMap::new();
        if bound > 0 {
            g.insert(0, lead_inv.clone());
        }
        for m in 1..bound {
            // g[m] = -h0^{-1} * sum_{0<j<=m} h[j] g[m-j]
            let mut s = C::zero();
            for (j, hj) in h.range(1..=m) {
                if let Some(gm) = g.get(&(m - j)) {
                    s = s.add(&hj.mul(gm));
                }
            }
            if !s.is_zero() {
                g.insert(m, s.mul(&lead_inv).neg());
            }
        }
        let mut out = QSeries {
            scale: self.scale,
            terms: g.into_iter().map(|(m, c)| (m - v, c)).collect(),
            acc: &self.acc - rat(2) * &v_exp,
        };
        out.compress();
        Ok(out)
    }

    /// Integer power; negative powers go through `invert`.
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut acc_bound = self.acc.clone();
        if e == 0 {
            return Ok(Self::one(acc_bound));
        }
        // acc of f^e per the mul rule: acc_f + (e-1)*ord(f)
        acc_bound = &self.acc + rat(e - 1) * self.ord_or_acc();
        let mut result = Self::one(acc_bound);
        let mut base = self.clone();
        let mut n = e as u64;
        loop {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(result)
    }

    /// Substitution q -> q^s for s > 0: exponents and acc scale by s.
    pub fn scale_exponents(&self, s: &Rat) -> Self {
        assert!(s > &rat(0), "exponent scale must be positive");
        let new_l = self.scale as i64 * s.denom().to_i64().expect("scale overflow");
        let num = s.numer().to_i64().expect("scale overflow");
        let mut out = QSeries {
            scale: new_l as u64,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m * num, c.clone()))
                .collect(),
            acc: &self.acc * s,
        };
        out.compress();
        out
    }

    /// The operator q d/dq: coefficient at q^e multiplied by e.
    pub fn q_derivative(&self) -> Self {
        let mut out = QSeries {
            scale: self.scale,
            terms: BTreeMap::new(),
            acc: self.acc.clone(),
        };
        for (m, c) in &self.terms {
            let e = self.exp_of(*m);
            let p = c.mul_rat(&e);
            if !p.is_zero() {
                out.terms.insert(*m, p);
            }
        }
        out
    }

    /// Exact coefficient comparison below N.
    pub fn compare(&self, other: &Self, n: &Rat) -> Result<Verdict<C>, SeriesError> {
        let guaranteed = self.acc.clone().min(other.acc.clone());
        if &guaranteed < n {
            return Err(SeriesError::InsufficientAccuracy {
                acc: crate::rational::fmt_rat(&guaranteed),
                requested: crate::rational::fmt_rat(n),
            });
        }
        let diff = self.sub(other);
        for (e, c) in diff.iter_terms() {
            if &e >= n {
                break;
            }
            if !c.is_zero() {
                return Ok(Verdict::FirstMismatch {
                    lhs: self.coeff_at(&e),
                    rhs: other.coeff_at(&e),
                    exp: e,
                });
            }
        }
        Ok(Verdict::Equal)
    }

    /// True when no stored coefficient below N is nonzero (requires acc >= N).
    pub fn is_zero_below(&self, n: &Rat) -> Result<bool, SeriesError> {
        Ok(self.compare(&Self::zero(n.clone()), n)?.is_equal())
    }

    /// Lowers the accuracy bound, dropping any now-out-of-range terms.
    pub fn truncate(&self, n: &Rat) -> Self {
        let acc = self.acc.clone().min(n.clone());
        let mut out = QSeries {
            scale: self.scale,
            terms: BTreeMap::new(),
            acc,
        };
        for (m, c) in &self.terms {
            if out.exp_of(*m) < out.acc {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Applies a coefficient-ring map term-wise (used to extract jet parts).
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        let mut out = QSeries {
            scale: self.scale,
            terms: BTreeMap::new(),
            acc: self.acc.clone(),
        };
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                out.terms.insert(*m, d);
            }
        }
        out
    }
}

/// Truncated expansion of prod_{n>=1} (1 - q^(a + b(n-1)))^e, for a, b > 0.
pub fn product_expand<C: Coeff>(
    a: &Rat,
    b: &Rat,
    e: i64,
    n: &Rat,
) -> Result<QSeries<C>, SeriesError> {
    if a <= &rat(0) || b <= &rat(0) {
        return Err(SeriesError::NonpositiveExponentStep);
    }
    let mut result = QSeries::<C>::one(n.clone());
    if e == 0 {
        return Ok(result);
    }
    let e_rat = rat(e);
    let mut x = a.clone();
    while &x < n {
        // (1 - q^x)^e expanded by the generalized binomial series
        let mut factor = QSeries::<C>::zero(n.clone());
        let mut j: u64 = 0;
        loop {
            let exp = &x * rat(j as i64);
            if &exp >= n {
                break;
            }
            let mut coef = crate::rational::binomial_general(&e_rat, j);
            if j % 2 == 1 {
                coef = -coef;
            }
            factor.add_term(&exp, C::from_rat(&coef));
            j += 1;
        }
        result = result.mul(&factor);
        x += b;
    }
    Ok(result)
}

/// Euler's product (q;q)_inf truncated below N.
pub fn euler_product(n: &Rat) -> QSeries<Rat> {
    product_expand(&rat(1), &rat(1), 1, n).expect("positive parameters")
}
