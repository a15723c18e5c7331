//! The bi-jet ring R[e1,e2]/(e1^2, e2^2) over the rationals, used to
//! extract mixed derivatives d^2/dxdy at x = y = 1 as the e1*e2
//! coefficient after substituting x = 1 + e1, y = 1 + e2.

use crate::qser::Coeff;
use crate::rational::{rat, Rat};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiJetError {
    #[error("fractional power requires unit part exactly 1")]
    NonUnitBase,
    #[error("bi-jet with zero unit part is not invertible")]
    NotInvertible,
}

/// c0 + c1 e1 + c2 e2 + c12 e1 e2 with e1^2 = e2^2 = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiJet {
    pub c0: Rat,
    pub c1: Rat,
    pub c2: Rat,
    pub c12: Rat,
}

impl BiJet {
    pub fn new(c0: Rat, c1: Rat, c2: Rat, c12: Rat) -> Self {
        BiJet { c0, c1, c2, c12 }
    }

    pub fn constant(c: Rat) -> Self {
        BiJet::new(c, rat(0), rat(0), rat(0))
    }

    /// 1 + e1, the substitution point for x.
    pub fn one_plus_e1() -> Self {
        BiJet::new(rat(1), rat(1), rat(0), rat(0))
    }

    /// 1 + e2, the substitution point for y.
    pub fn one_plus_e2() -> Self {
        BiJet::new(rat(1), rat(0), rat(1), rat(0))
    }

    pub fn mixed_part(&self) -> Rat {
        self.c12.clone()
    }
}

impl Coeff for BiJet {
    fn zero() -> Self {
        BiJet::constant(rat(0))
    }

    fn one() -> Self {
        BiJet::constant(rat(1))
    }

    fn add(&self, other: &Self) -> Self {
        BiJet::new(
            &self.c0 + &other.c0,
            &self.c1 + &other.c1,
            &self.c2 + &other.c2,
            &self.c12 + &other.c12,
        )
    }

    fn mul(&self, other: &Self) -> Self {
        BiJet::new(
            &self.c0 * &other.c0,
            &self.c0 * &other.c1 + &self.c1 * &other.c0,
            &self.c0 * &other.c2 + &self.c2 * &other.c0,
            &self.c0 * &other.c12
                + &self.c12 * &other.c0
                + &self.c1 * &other.c2
                + &self.c2 * &other.c1,
        )
    }

    fn neg(&self) -> Self {
        BiJet::new(-&self.c0, -&self.c1, -&self.c2, -&self.c12)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.c0)
            && Zero::is_zero(&self.c1)
            && Zero::is_zero(&self.c2)
            && Zero::is_zero(&self.c12)
    }

    /// (c0 + u)^-1 = c0^-1 (1 - u/c0 + (u/c0)^2), u the nilpotent part.
    fn invert(&self) -> Option<Self> {
        if Zero::is_zero(&self.c0) {
            return None;
        }
        let inv0 = rat(1) / &self.c0;
        let i2 = &inv0 * &inv0;
        Some(BiJet::new(
            inv0.clone(),
            -&self.c1 * &i2,
            -&self.c2 * &i2,
            -&self.c12 * &i2 + rat(2) * &self.c1 * &self.c2 * &i2 * &inv0,
        ))
    }

    fn from_rat(r: &Rat) -> Self {
        BiJet::constant(r.clone())
    }

    fn mul_rat(&self, r: &Rat) -> Self {
        BiJet::new(&self.c0 * r, &self.c1 * r, &self.c2 * r, &self.c12 * r)
    }
}

/// j^r by the binomial expansion truncated at nilpotency order.
///
/// For integer r any invertible unit part is allowed; for fractional r the
/// unit part must be exactly 1 (all substitution points are 1 + nilpotent).
pub fn bijet_pow(j: &BiJet, r: &Rat) -> Result<BiJet, BiJetError> {
    if !r.denom().is_one() {
        if !One::is_one(&j.c0) {
            return Err(BiJetError::NonUnitBase);
        }
        return Ok(unit_pow(j, r));
    }
    let e = crate::rational::as_i64(r).expect("integer exponent overflow");
    if e >= 0 {
        let mut acc = <BiJet as Coeff>::one();
        for _ in 0..e {
            acc = acc.mul(j);
        }
        Ok(acc)
    } else {
        let inv = j.invert().ok_or(BiJetError::NotInvertible)?;
        let mut acc = <BiJet as Coeff>::one();
        for _ in 0..(-e) {
            acc = acc.mul(&inv);
        }
        Ok(acc)
    }
}

/// (1 + u)^r = 1 + r u + r(r-1)/2 u^2, with u^2 = 2 c1 c2 e1 e2.
fn unit_pow(j: &BiJet, r: &Rat) -> BiJet {
    let u = BiJet::new(rat(0), j.c1.clone(), j.c2.clone(), j.c12.clone());
    let u2_mixed = rat(2) * &u.c1 * &u.c2;
    BiJet::new(
        rat(1),
        r * &u.c1,
        r * &u.c2,
        r * &u.c12 + r * (r - rat(1)) / rat(2) * u2_mixed,
    )
}
