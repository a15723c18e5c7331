//! Classical modular objects: Dedekind eta, Jacobi theta fourth powers and
//! their products Theta_{r,s}, Eisenstein series, and the triangular-number
//! series Delta(q).
//!
//! Eisenstein series use the normalization with constant term
//! -B_{2k}/(2k)!, so that the weight-k Serre derivative in `mlde` is
//! q d/dq + k E_2 with this E_2 (which is -1/12 times the classical E_2).

use crate::qser::{product_expand, QSeries};
use crate::rational::{bernoulli, factorial, rat, ratio, Rat};
use num::{ToPrimitive, Zero};

/// Tags for the generator symbols appearing in modular-form expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormsGenerator {
    Eta(Rat),
    Theta2Pow4,
    Theta3Pow4,
    ThetaRS(u32, u32),
    Eisenstein(u32),
    TriangularDelta,
}

impl FormsGenerator {
    /// Declared modular weight, where applicable.
    pub fn weight(&self) -> Option<Rat> {
        match self {
            FormsGenerator::Eta(_) => Some(ratio(1, 2)),
            FormsGenerator::Theta2Pow4 | FormsGenerator::Theta3Pow4 => Some(rat(2)),
            FormsGenerator::ThetaRS(r, s) => Some(rat(2 * (*r as i64 + *s as i64))),
            FormsGenerator::Eisenstein(k2) => {
                assert!(k2 % 2 == 0 && *k2 >= 2);
                Some(rat(*k2 as i64))
            }
            FormsGenerator::TriangularDelta => None,
        }
    }

    pub fn expand(&self, n: &Rat) -> QSeries {
        match self {
            FormsGenerator::Eta(s) => eta(s, n),
            FormsGenerator::Theta2Pow4 => theta_pow4(ThetaKind::Theta2, n),
            FormsGenerator::Theta3Pow4 => theta_pow4(ThetaKind::Theta3, n),
            FormsGenerator::ThetaRS(r, s) => theta_rs(*r, *s, n),
            FormsGenerator::Eisenstein(k2) => eisenstein(*k2, n),
            FormsGenerator::TriangularDelta => triangular_delta(n),
        }
    }
}

/// eta(s tau) = q^(s/24) prod_{n>=1} (1 - q^(sn)), truncated below N.
pub fn eta(s: &Rat, n: &Rat) -> QSeries {
    assert!(s > &Rat::zero(), "eta scale must be positive");
    let pre = s / rat(24);
    let inner = n - &pre;
    let prod: QSeries = product_expand(s, s, 1, &inner).expect("positive parameters");
    prod.mul_monomial(&rat(1), &pre)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    Theta2,
    Theta3,
}

fn theta_base(kind: ThetaKind, n: &Rat) -> QSeries {
    // theta2 = sum_{m in Z+1/2} q^(m^2/2), theta3 = sum_{m in Z} q^(m^2/2)
    let mut out = QSeries::zero(n.clone());
    // enumerate m = k + off for k = 0, 1, ... and both signs
    let off = match kind {
        ThetaKind::Theta2 => ratio(1, 2),
        ThetaKind::Theta3 => rat(0),
    };
    let mut k = 0i64;
    loop {
        let m = rat(k) + &off;
        let e = &m * &m / rat(2);
        if &e >= n {
            break;
        }
        let coeff = if m.is_zero() { rat(1) } else { rat(2) };
        out = out.add(&QSeries::monomial(coeff, &e, n.clone()));
        k += 1;
    }
    out
}

/// Fourth power of a Jacobi theta constant, by bounded lattice enumeration.
pub fn theta_pow4(kind: ThetaKind, n: &Rat) -> QSeries {
    theta_base(kind, n)
        .pow(4)
        .expect("nonnegative power")
        .truncate(n)
}

/// Theta_{r,s} = theta2^(4r) * theta3^(4s).
pub fn theta_rs(r: u32, s: u32, n: &Rat) -> QSeries {
    let mut out = QSeries::one(n.clone());
    if r > 0 {
        out = out.mul(&theta_base(ThetaKind::Theta2, n).pow(4 * r as i64).unwrap());
    }
    if s > 0 {
        out = out.mul(&theta_base(ThetaKind::Theta3, n).pow(4 * s as i64).unwrap());
    }
    out.truncate(n)
}

/// E_{2k} = -B_{2k}/(2k)! + (2/(2k-1)!) sum_{m>=1} sigma_{2k-1}(m) q^m.
pub fn eisenstein(k2: u32, n: &Rat) -> QSeries {
    assert!(
        k2 >= 2 && k2.is_multiple_of(2),
        "Eisenstein index must be even and >= 2"
    );
    let mut out = QSeries::zero(n.clone());
    let const_term = -bernoulli(k2 as usize) / Rat::from_integer(factorial(k2 as u64));
    out = out.add(&QSeries::monomial(const_term, &rat(0), n.clone()));
    let bound = crate::rational::ceil_int(n).to_i64().unwrap_or(0).max(0);
    // divisor-power sums by sieve
    let mut sums = vec![num::BigInt::from(0); bound.max(0) as usize + 1];
    for d in 1..=bound {
        let dp = num::BigInt::from(d).pow(k2 - 1);
        let mut m = d;
        while m <= bound {
            sums[m as usize] += &dp;
            m += d;
        }
    }
    let scale = rat(2) / Rat::from_integer(factorial(k2 as u64 - 1));
    for m in 1..=bound {
        let e = rat(m);
        if &e >= n {
            break;
        }
        let c = &scale * Rat::from_integer(sums[m as usize].clone());
        out = out.add(&QSeries::monomial(c, &e, n.clone()));
    }
    out
}

/// Delta(q) = sum_{m>=0} q^(m(m+1)/2), the triangular-number series.
pub fn triangular_delta(n: &Rat) -> QSeries {
    let mut out = QSeries::zero(n.clone());
    let mut m = 0i64;
    loop {
        let e = ratio(m * (m + 1), 2);
        if &e >= n {
            break;
        }
        out = out.add(&QSeries::monomial(rat(1), &e, n.clone()));
        m += 1;
    }
    out
}
