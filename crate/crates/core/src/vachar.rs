//! Character formulas and q-series identities: central charges, conformal
//! weights, Virasoro and negative-level affine sl2 characters, the Weyl
//! algebra and sl3 characters, the quadruple-sum character of the C_n
//! family, the auxiliary B[q]/C[q] double sums, the Legendre right-hand
//! side, and the eight-class partition table check.

use crate::qser::{euler_product, QSeries};
use crate::rational::{rat, ratio, Rat};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("parameters p and p' must be nonzero")]
    ZeroParameter,
    #[error("the twisted-type character sum is empty for l = 0")]
    EmptySum,
}

/// Identifier of a character family, resolvable to a series constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharId {
    VirMin {
        p: i64,
        i: i64,
    },
    AffineNeg {
        p: i64,
        family: AffineFamily,
        l: i64,
    },
    Admissible {
        n: i64,
        l: i64,
    },
    Weyl {
        m: i64,
    },
    Sl3,
    Cp {
        n: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineFamily {
    A,
    B,
}

/// c_{p',p} = 1 - 6 (p - p')^2 / (p p').
pub fn central_charge(p_prime: i64, p: i64) -> Result<Rat, CharError> {
    if p == 0 || p_prime == 0 {
        return Err(CharError::ZeroParameter);
    }
    let diff = rat(p - p_prime);
    Ok(rat(1) - rat(6) * &diff * &diff / rat(p * p_prime))
}

/// h^{p',p}_{r,s} = ((sp - rp')^2 - (p - p')^2) / (4 p p').
pub fn conformal_weight(p_prime: i64, p: i64, r: i64, s: i64) -> Result<Rat, CharError> {
    if p == 0 || p_prime == 0 {
        return Err(CharError::ZeroParameter);
    }
    let a = rat(s * p - r * p_prime);
    let d = rat(p - p_prime);
    Ok((&a * &a - &d * &d) / rat(4 * p * p_prime))
}

/// A character in factored form: q^prefac * (finite numerator) / (q;q)_inf^euler_pow.
/// Numerator exponents may be negative; the list is exact.
#[derive(Debug, Clone)]
struct CharParts {
    prefac: Rat,
    numerator: Vec<(Rat, Rat)>,
    euler_pow: i64,
}

impl CharParts {
    fn numerator_min(&self) -> Rat {
        self.numerator
            .iter()
            .map(|(e, _)| e.clone())
            .min()
            .expect("nonempty numerator")
    }

    /// Leading exponent of the assembled character.
    fn ord(&self) -> Rat {
        &self.prefac + self.numerator_min()
    }

    fn assemble(&self, n: &Rat) -> QSeries {
        let inv_acc = n - &self.prefac - self.numerator_min();
        if inv_acc <= Rat::zero() {
            return QSeries::zero(n.clone());
        }
        let inv = euler_product(&inv_acc)
            .invert()
            .expect("unit leading term")
            .pow(self.euler_pow)
            .expect("nonnegative power");
        let mut out = QSeries::zero(n.clone());
        for (e, c) in &self.numerator {
            let shifted = inv.mul_monomial(c, &(e + &self.prefac)).truncate(n);
            out = out.add(&shifted);
        }
        out
    }
}

fn vir_parts(p: i64, i: i64) -> CharParts {
    let c = central_charge(1, p).expect("p nonzero");
    CharParts {
        prefac: -c / rat(24),
        numerator: vec![
            (conformal_weight(1, p, 1, i).unwrap(), rat(1)),
            (conformal_weight(1, p, 1, -i).unwrap(), rat(-1)),
        ],
        euler_pow: 1,
    }
}

fn affine_parts(p: i64, family: AffineFamily, l: i64) -> Result<CharParts, CharError> {
    assert!(
        p == 3 || p == 4,
        "only the p = 3 and p = 4 lemmas are built in"
    );
    assert!(l >= 0);
    let prefac = if p == 3 { ratio(-5, 24) } else { ratio(-3, 16) };
    let mut numerator: Vec<(Rat, Rat)> = Vec::new();
    match family {
        AffineFamily::A => {
            for i in 0..=l {
                let (coef, e) = if p == 3 {
                    (6 * i + 1, -i * (3 * i + 1))
                } else {
                    (8 * i + 1, -i * (4 * i + 1))
                };
                numerator.push((rat(e), rat(coef)));
            }
            for i in 1..=l {
                let (coef, e) = if p == 3 {
                    (6 * i - 1, -i * (3 * i - 1))
                } else {
                    (8 * i - 1, -i * (4 * i - 1))
                };
                numerator.push((rat(e), rat(-coef)));
            }
        }
        AffineFamily::B => {
            if l == 0 {
                return Err(CharError::EmptySum);
            }
            for i in 1..=l {
                if p == 3 {
                    numerator.push((ratio(-(2 * i - 1) * (6 * i - 1), 4), rat(6 * i - 2)));
                    numerator.push((ratio(-(2 * i - 1) * (6 * i - 5), 4), rat(-(6 * i - 4))));
                } else {
                    numerator.push((ratio(-(2 * i - 1) * (4 * i - 1), 2), rat(8 * i - 3)));
                    numerator.push((ratio(-(2 * i - 1) * (4 * i - 3), 2), rat(-(8 * i - 5))));
                }
            }
        }
    }
    Ok(CharParts {
        prefac,
        numerator,
        euler_pow: 3,
    })
}

/// ch[L^Vir(c_{1,p}, h^{1,p}_{1,i})] = q^(-c/24) (q^h_{1,i} - q^h_{1,-i}) / (q;q)_inf.
pub fn vir_char(p: i64, i: i64, n: &Rat) -> QSeries {
    assert!(p >= 2 && i >= 1);
    vir_parts(p, i).assemble(n)
}

/// The negative-level affine sl2 characters of the p = 3 and p = 4 lemmas.
pub fn affine_neg_char(
    p: i64,
    family: AffineFamily,
    l: i64,
    n: &Rat,
) -> Result<QSeries, CharError> {
    Ok(affine_parts(p, family, l)?.assemble(n))
}

/// ch of the admissible module: q^((2n-1)/8) (l+1) q^(n l (l+2)/4) / (q;q)_inf^3.
pub fn admissible_char(n_par: i64, l: i64, n: &Rat) -> QSeries {
    assert!(l >= 0);
    CharParts {
        prefac: ratio(2 * n_par - 1, 8),
        numerator: vec![(ratio(n_par * l * (l + 2), 4), rat(l + 1))],
        euler_pow: 3,
    }
    .assemble(n)
}

/// ch[M_(m)] = q^(m/24) prod_{k>=1} (1 - q^(k - 1/2))^(-2m).
pub fn weyl_char(m: i64, n: &Rat) -> QSeries {
    assert!(m >= 1);
    let pre = ratio(m, 24);
    let prod: QSeries = crate::qser::product_expand(&ratio(1, 2), &rat(1), -2 * m, &(n - &pre))
        .expect("positive parameters");
    prod.mul_monomial(&rat(1), &pre)
}

/// ch[L_{-3/2}(sl3)] = q^(1/3) (q^2;q^2)_inf^8 / (q;q)_inf^8.
pub fn sl3_char(n: &Rat) -> QSeries {
    let pre = ratio(1, 3);
    let inner = n - &pre;
    if inner <= Rat::zero() {
        return QSeries::zero(n.clone());
    }
    let even: QSeries = crate::qser::product_expand(&rat(2), &rat(2), 8, &inner).unwrap();
    let inv = euler_product(&inner).invert().unwrap().pow(8).unwrap();
    even.mul(&inv).truncate(&inner).mul_monomial(&rat(1), &pre)
}

/// Enumerates one doubly-indexed block of a q-series sum.
///
/// `coeff(i, k)` and `expo(i, k)` give the term at inner index i, outer
/// index k; both loops start at the given bases and stop as soon as the
/// exponent reaches `n`. Per-index monotone growth of exponents is
/// asserted at runtime.
fn enumerate_block(
    out: &mut QSeries,
    n: &Rat,
    k_base: i64,
    i_base: i64,
    coeff: impl Fn(i64, i64) -> Rat,
    expo: impl Fn(i64, i64) -> Rat,
) {
    let mut k = k_base;
    let mut prev_outer: Option<Rat> = None;
    loop {
        let outer_min = expo(i_base, k);
        if let Some(p) = &prev_outer {
            assert!(
                &outer_min > p,
                "block exponent must grow with the outer index"
            );
        }
        if &outer_min >= n {
            break;
        }
        prev_outer = Some(outer_min);
        let mut i = i_base;
        let mut prev_inner: Option<Rat> = None;
        loop {
            let e = expo(i, k);
            if let Some(p) = &prev_inner {
                assert!(&e > p, "block exponent must grow with the inner index");
            }
            if &e >= n {
                break;
            }
            prev_inner = Some(e.clone());
            *out = out.add(&QSeries::monomial(coeff(i, k), &e, n.clone()));
            i += 1;
        }
        k += 1;
    }
}

/// The quadruple sum equal to (q;q)_inf^6 q^(c_n/24) ch[C_n].
pub fn cp_quadruple_sum(n_par: i64, n: &Rat) -> QSeries {
    assert!(n_par >= 2);
    let nn = n_par;
    let half = ratio(1, 2);
    let mut out = QSeries::zero(n.clone());
    // block 1: (1+2(i+k))(1+2in) q^(k(k+1)n + i(2kn+n-1))
    enumerate_block(
        &mut out,
        n,
        0,
        0,
        |i, k| rat((1 + 2 * (i + k)) * (1 + 2 * i * nn)),
        |i, k| rat(k * (k + 1) * nn + i * (2 * k * nn + nn - 1)),
    );
    // block 2: -(3+2(i+k))(2(i+1)n-1) q^(k(k+1)n + (i+1)(1+n+2kn)),
    // the i-even negative quadrant of the signed single sum
    enumerate_block(
        &mut out,
        n,
        0,
        0,
        |i, k| rat(-(3 + 2 * (i + k)) * (2 * (i + 1) * nn - 1)),
        |i, k| rat(k * (k + 1) * nn + (i + 1) * (1 + nn + 2 * k * nn)),
    );
    // block 3: 2(1+i+k)(1+n+2in) q^(1/2 + (k^2-1/2)n + (1+i)(n-1+2kn))
    enumerate_block(
        &mut out,
        n,
        0,
        0,
        |i, k| rat(2 * (1 + i + k) * (1 + nn + 2 * i * nn)),
        |i, k| &half + rat(k * k * nn) - &half * rat(nn) + rat((1 + i) * (nn - 1 + 2 * k * nn)),
    );
    // block 4: -2(1+i+k)(n-1+2in) q^(-1/2 + (k^2-1/2)n + (1+i)(1+n+2kn))
    enumerate_block(
        &mut out,
        n,
        0,
        0,
        |i, k| rat(-2 * (1 + i + k) * (nn - 1 + 2 * i * nn)),
        |i, k| -&half + rat(k * k * nn) - &half * rat(nn) + rat((1 + i) * (1 + nn + 2 * k * nn)),
    );
    out
}

/// Central charge c_n = 6(1 + n - n^2)/n of C_n.
pub fn cp_central_charge(n_par: i64) -> Rat {
    ratio(6 * (1 + n_par - n_par * n_par), n_par)
}

/// ch[C_n] = q^(-c_n/24) (quadruple sum) / (q;q)_inf^6.
pub fn cp_char(n_par: i64, n: &Rat) -> QSeries {
    assert!(n_par >= 2);
    let pre = -cp_central_charge(n_par) / rat(24);
    let inner = n - &pre;
    if inner <= Rat::zero() {
        return QSeries::zero(n.clone());
    }
    let s = cp_quadruple_sum(n_par, &inner);
    let inv6 = euler_product(&inner).invert().unwrap().pow(6).unwrap();
    s.mul(&inv6).truncate(&inner).mul_monomial(&rat(1), &pre)
}

/// The four-double-sum series B[q] from the rank-two Weyl algebra
/// decomposition; equals Delta(q^(1/2))^4.
pub fn bq_series(n: &Rat) -> QSeries {
    let mut out = QSeries::zero(n.clone());
    let q = |x: i64| rat(x);
    let q4 = |x: i64| ratio(x, 4);
    // (6i+1)(q^{l(3l+2)-i(3i+1)} - q^{(l+1)(3l+1)-i(3i+1)}), l>=0, 0<=i<=l
    double_sum_tri(&mut out, n, 0, 0, |l, i| {
        vec![
            (q(l * (3 * l + 2) - i * (3 * i + 1)), q(6 * i + 1)),
            (q((l + 1) * (3 * l + 1) - i * (3 * i + 1)), q(-(6 * i + 1))),
        ]
    });
    // (6i-1)(-q^{l(3l+2)-i(3i-1)} + q^{(l+1)(3l+1)-i(3i-1)}), l>=1, 1<=i<=l
    double_sum_tri(&mut out, n, 1, 1, |l, i| {
        vec![
            (q(l * (3 * l + 2) - i * (3 * i - 1)), q(-(6 * i - 1))),
            (q((l + 1) * (3 * l + 1) - i * (3 * i - 1)), q(6 * i - 1)),
        ]
    });
    // (6i-2)(q^{((2l-1)(6l+1)-(2i-1)(6i-1))/4} - q^{((2l+1)(6l-1)-(2i-1)(6i-1))/4})
    double_sum_tri(&mut out, n, 1, 1, |l, i| {
        vec![
            (
                q4((2 * l - 1) * (6 * l + 1) - (2 * i - 1) * (6 * i - 1)),
                q(6 * i - 2),
            ),
            (
                q4((2 * l + 1) * (6 * l - 1) - (2 * i - 1) * (6 * i - 1)),
                q(-(6 * i - 2)),
            ),
        ]
    });
    // (6i-4)(-q^{((2l-1)(6l+1)-(2i-1)(6i-5))/4} + q^{((2l+1)(6l-1)-(2i-1)(6i-5))/4})
    double_sum_tri(&mut out, n, 1, 1, |l, i| {
        vec![
            (
                q4((2 * l - 1) * (6 * l + 1) - (2 * i - 1) * (6 * i - 5)),
                q(-(6 * i - 4)),
            ),
            (
                q4((2 * l + 1) * (6 * l - 1) - (2 * i - 1) * (6 * i - 5)),
                q(6 * i - 4),
            ),
        ]
    });
    out
}

/// The analogous series C[q] from the sl3 decomposition; equals Delta(q)^4.
pub fn cq_series(n: &Rat) -> QSeries {
    let mut out = QSeries::zero(n.clone());
    let q = |x: i64| rat(x);
    let q2 = |x: i64| ratio(x, 2);
    double_sum_tri(&mut out, n, 0, 0, |l, i| {
        vec![
            (q(l * (4 * l + 3) - i * (4 * i + 1)), q(8 * i + 1)),
            (q((l + 1) * (4 * l + 1) - i * (4 * i + 1)), q(-(8 * i + 1))),
        ]
    });
    double_sum_tri(&mut out, n, 1, 1, |l, i| {
        vec![
            (q(l * (4 * l + 3) - i * (4 * i - 1)), q(-(8 * i - 1))),
            (q((l + 1) * (4 * l + 1) - i * (4 * i - 1)), q(8 * i - 1)),
        ]
    });
    double_sum_tri(&mut out, n, 1, 1, |l, i| {
        vec![
            (
                q2((2 * l - 1) * (4 * l + 1) - (2 * i - 1) * (4 * i - 1)),
                q(8 * i - 3),
            ),
            (
                q2((2 * l + 1) * (4 * l - 1) - (2 * i - 1) * (4 * i - 1)),
                q(-(8 * i - 3)),
            ),
        ]
    });
    double_sum_tri(&mut out, n, 1, 1, |l, i| {
        vec![
            (
                q2((2 * l - 1) * (4 * l + 1) - (2 * i - 1) * (4 * i - 3)),
                q(-(8 * i - 5)),
            ),
            (
                q2((2 * l + 1) * (4 * l - 1) - (2 * i - 1) * (4 * i - 3)),
                q(8 * i - 5),
            ),
        ]
    });
    out
}

/// Triangular double sum over l >= l_base, i_base <= i <= l, where each
/// (l, i) contributes finitely many terms. Stops at the first l whose
/// minimal term exponent reaches `n`; the minimum is asserted nondecreasing.
fn double_sum_tri(
    out: &mut QSeries,
    n: &Rat,
    l_base: i64,
    i_base: i64,
    terms: impl Fn(i64, i64) -> Vec<(Rat, Rat)>,
) {
    let mut l = l_base;
    let mut prev_min: Option<Rat> = None;
    loop {
        let mut slice_min: Option<Rat> = None;
        let mut slice: Vec<(Rat, Rat)> = Vec::new();
        for i in i_base..=l {
            for (e, c) in terms(l, i) {
                slice_min = Some(match slice_min {
                    None => e.clone(),
                    Some(m) => m.min(e.clone()),
                });
                slice.push((e, c));
            }
        }
        match &slice_min {
            None => {
                // empty slice (l < i_base): advance
            }
            Some(m) => {
                if let Some(p) = &prev_min {
                    assert!(m >= p, "slice minimum exponent must not decrease");
                }
                if m >= n {
                    break;
                }
                prev_min = Some(m.clone());
                for (e, c) in slice {
                    if &e < n {
                        *out = out.add(&QSeries::monomial(c, &e, n.clone()));
                    }
                }
            }
        }
        l += 1;
        assert!(l < 1_000_000, "runaway enumeration");
    }
}

/// Sum of four triangular numbers, organized as in Legendre's identity:
/// Delta(q)^4 = sum_{j,k>=0} (2k+1) q^(((2j+1)(2k+1)-1)/2).
pub fn legendre_rhs(n: &Rat) -> QSeries {
    let mut out = QSeries::zero(n.clone());
    enumerate_block(
        &mut out,
        n,
        0,
        0,
        |_j, k| rat(2 * k + 1),
        |j, k| ratio((2 * j + 1) * (2 * k + 1) - 1, 2),
    );
    out
}

/// One row of the eight-class table: membership test plus the (l, i)
/// reconstruction and signed-weight relation.
struct PartitionRow {
    // value whose integrality and sign define membership
    t: fn(i64, i64) -> Rat,
    nonneg: bool,
    l: fn(i64, i64) -> Rat,
    i: fn(i64, i64) -> Rat,
    // reconstruction of (k, j) from (l, i)
    k_of: fn(i64, i64) -> i64,
    j_of: fn(i64, i64) -> i64,
    // signed weight, to match 3j - k + 1
    weight: fn(i64) -> i64,
}

fn partition_rows() -> Vec<PartitionRow> {
    vec![
        PartitionRow {
            t: |j, k| ratio(j, 2) - ratio(k, 6),
            nonneg: true,
            l: |j, k| ratio(k, 6) + ratio(j, 2),
            i: |j, k| ratio(j, 2) - ratio(k, 6),
            k_of: |l, i| 3 * (l - i),
            j_of: |l, i| l + i,
            weight: |i| 6 * i + 1,
        },
        PartitionRow {
            t: |j, k| ratio(j, 2) - ratio(k, 6),
            nonneg: false,
            l: |j, k| ratio(k, 6) + ratio(j, 2),
            i: |j, k| ratio(k, 6) - ratio(j, 2),
            k_of: |l, i| 3 * (l + i),
            j_of: |l, i| l - i,
            weight: |i| -(6 * i - 1),
        },
        PartitionRow {
            t: |j, k| ratio(k, 6) - ratio(j, 2) + ratio(1, 2),
            nonneg: true,
            l: |j, k| ratio(k, 6) + ratio(j + 1, 2),
            i: |j, k| ratio(k, 6) - ratio(j - 1, 2),
            k_of: |l, i| 3 * (l + i - 1),
            j_of: |l, i| l - i,
            weight: |i| -(6 * i - 4),
        },
        PartitionRow {
            t: |j, k| ratio(k, 6) - ratio(j, 2) + ratio(1, 2),
            nonneg: false,
            l: |j, k| ratio(k, 6) + ratio(j + 1, 2),
            i: |j, k| ratio(j + 1, 2) - ratio(k, 6),
            k_of: |l, i| 3 * (l - i),
            j_of: |l, i| l + i - 1,
            weight: |i| 6 * i - 2,
        },
        PartitionRow {
            t: |j, k| ratio(k, 6) - ratio(j, 2) - ratio(1, 3),
            nonneg: true,
            l: |j, k| ratio(k + 1, 6) + ratio(j - 1, 2),
            i: |j, k| ratio(k + 1, 6) - ratio(j + 1, 2),
            k_of: |l, i| 3 * (l + i) + 2,
            j_of: |l, i| l - i,
            weight: |i| -(6 * i + 1),
        },
        PartitionRow {
            t: |j, k| ratio(k, 6) - ratio(j, 2) - ratio(1, 3),
            nonneg: false,
            l: |j, k| ratio(k + 1, 6) + ratio(j - 1, 2),
            i: |j, k| -ratio(k + 1, 6) + ratio(j + 1, 2),
            k_of: |l, i| 3 * (l - i) + 2,
            j_of: |l, i| l + i,
            weight: |i| 6 * i - 1,
        },
        PartitionRow {
            t: |j, k| ratio(j, 2) - ratio(k, 6) + ratio(5, 6),
            nonneg: true,
            l: |j, k| ratio(k + 1, 6) + ratio(j, 2),
            i: |j, k| ratio(j, 2) - ratio(k + 1, 6) + rat(1),
            k_of: |l, i| 3 * (l - i) + 2,
            j_of: |l, i| l + i - 1,
            weight: |i| 6 * i - 4,
        },
        PartitionRow {
            t: |j, k| ratio(j, 2) - ratio(k, 6) + ratio(5, 6),
            nonneg: false,
            l: |j, k| ratio(k + 1, 6) + ratio(j, 2),
            i: |j, k| ratio(k + 1, 6) - ratio(j, 2),
            k_of: |l, i| 3 * (l + i) - 1,
            j_of: |l, i| l - i,
            weight: |i| -(6 * i - 2),
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    /// (j, k) satisfied zero or more than one membership condition.
    ClassCount { j: i64, k: i64, classes: Vec<usize> },
    /// (l, i) from the matching row failed a reconstruction relation.
    Reconstruction {
        j: i64,
        k: i64,
        row: usize,
        detail: String,
    },
}

#[derive(Debug, Clone, Default)]
pub struct PartitionReport {
    pub checked: usize,
    pub violations: Vec<PartitionViolation>,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for all 0 <= j <= J and 0 <= k <= K with k not 1 mod 3, that
/// exactly one of the eight table conditions holds, and that the matching
/// row's (l, i) reconstruction and signed-weight relation 3j - k + 1 are
/// satisfied.
pub fn partition_check(j_max: i64, k_max: i64) -> PartitionReport {
    let rows = partition_rows();
    let mut report = PartitionReport::default();
    for j in 0..=j_max {
        for k in 0..=k_max {
            if k.rem_euclid(3) == 1 {
                continue;
            }
            report.checked += 1;
            let mut matches = Vec::new();
            for (idx, row) in rows.iter().enumerate() {
                let t = (row.t)(j, k);
                let member = t.denom().is_one()
                    && if row.nonneg {
                        !t.is_negative()
                    } else {
                        t.is_negative()
                    };
                if member {
                    matches.push(idx);
                }
            }
            if matches.len() != 1 {
                report.violations.push(PartitionViolation::ClassCount {
                    j,
                    k,
                    classes: matches.iter().map(|m| m + 1).collect(),
                });
                continue;
            }
            let idx = matches[0];
            let row = &rows[idx];
            let l_val = (row.l)(j, k);
            let i_val = (row.i)(j, k);
            if !l_val.denom().is_one() || !i_val.denom().is_one() {
                report.violations.push(PartitionViolation::Reconstruction {
                    j,
                    k,
                    row: idx + 1,
                    detail: "l or i not an integer".into(),
                });
                continue;
            }
            let l = crate::rational::as_i64(&l_val).unwrap();
            let i = crate::rational::as_i64(&i_val).unwrap();
            if (row.k_of)(l, i) != k || (row.j_of)(l, i) != j {
                report.violations.push(PartitionViolation::Reconstruction {
                    j,
                    k,
                    row: idx + 1,
                    detail: format!("(l,i)=({l},{i}) does not reconstruct (j,k)"),
                });
                continue;
            }
            if (row.weight)(i) != 3 * j - k + 1 {
                report.violations.push(PartitionViolation::Reconstruction {
                    j,
                    k,
                    row: idx + 1,
                    detail: format!(
                        "signed weight {} != 3j-k+1 = {}",
                        (row.weight)(i),
                        3 * j - k + 1
                    ),
                });
            }
        }
    }
    report
}

/// Right-hand side of the rank-two Weyl decomposition (p = 3) or of the
/// sl3 decomposition (p = 4): the sum over the decomposition index d of
/// (affine factor) x (Virasoro factor). Even d uses the weight-pd/2 family
/// (A), odd d the twisted-type family (B); the Virasoro factor is the
/// (1, d+1) module.
///
/// The common 1/(q;q)_inf^4 is factored out of every summand, so only the
/// finite numerators are summed term-by-term; the per-summand minimal
/// exponent is computed exactly and drives the cutoff.
fn decomposition_rhs(p: i64, n: &Rat) -> QSeries {
    assert!(p == 3 || p == 4);
    if n <= &Rat::zero() {
        return QSeries::zero(n.clone());
    }
    let mut combined: std::collections::BTreeMap<Rat, Rat> = std::collections::BTreeMap::new();
    let mut d: i64 = 0;
    let mut prev_min: Option<Rat> = None;
    loop {
        let vir = vir_parts(p, d + 1);
        let aff = if d % 2 == 0 {
            affine_parts(p, AffineFamily::A, d / 2).unwrap()
        } else {
            affine_parts(p, AffineFamily::B, (d + 1) / 2).unwrap()
        };
        let pre = &vir.prefac + &aff.prefac;
        let summand_min = vir.ord() + aff.ord();
        if let Some(pm) = &prev_min {
            assert!(&summand_min > pm, "summand minimal exponent must grow");
        }
        if &summand_min >= n {
            break;
        }
        prev_min = Some(summand_min);
        for (e1, c1) in &vir.numerator {
            for (e2, c2) in &aff.numerator {
                let e = e1 + e2 + &pre;
                if &e < n {
                    let entry = combined.entry(e).or_insert_with(Rat::zero);
                    *entry += c1 * c2;
                }
            }
        }
        d += 1;
        assert!(d < 1_000_000, "runaway enumeration");
    }
    let numerator = QSeries::from_terms(
        combined.into_iter().filter(|(_, c)| !Zero::is_zero(c)),
        n.clone(),
    );
    let inv4 = euler_product(n).invert().unwrap().pow(4).unwrap();
    numerator.mul(&inv4).truncate(n)
}

/// ch[M_(2)] decomposed over L_{-5}(sl2) x Vir(c_{1,3}) modules.
pub fn lemma71_rhs(n: &Rat) -> QSeries {
    decomposition_rhs(3, n)
}

/// ch[L_{-3/2}(sl3)] decomposed over L_{-6}(sl2) x Vir(c_{1,4}) modules.
pub fn lemma72_rhs(n: &Rat) -> QSeries {
    decomposition_rhs(4, n)
}

/// Resolves a [`CharId`] to its series at truncation `n`.
pub fn build_char(id: &CharId, n: &Rat) -> Result<QSeries, CharError> {
    Ok(match id {
        CharId::VirMin { p, i } => vir_char(*p, *i, n),
        CharId::AffineNeg { p, family, l } => affine_neg_char(*p, *family, *l, n)?,
        CharId::Admissible { n: np, l } => admissible_char(*np, *l, n),
        CharId::Weyl { m } => weyl_char(*m, n),
        CharId::Sl3 => sl3_char(n),
        CharId::Cp { n: np } => cp_char(*np, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::triangular_delta;
    use crate::qser::Verdict;

    #[test]
    fn central_charges() {
        assert_eq!(central_charge(1, 3).unwrap(), rat(-7));
        assert_eq!(central_charge(1, 4).unwrap(), ratio(-25, 2));
        assert_eq!(central_charge(1, 1).unwrap(), rat(1));
        assert_eq!(central_charge(0, 3), Err(CharError::ZeroParameter));
    }

    #[test]
    fn central_charge_symmetry_and_vacuum_weight() {
        for (pp, p) in [(2, 3), (3, 5), (-1, 7), (4, 9), (11, 13)] {
            assert_eq!(
                central_charge(pp, p).unwrap(),
                central_charge(p, pp).unwrap()
            );
            assert_eq!(conformal_weight(pp, p, 1, 1).unwrap(), rat(0));
        }
    }

    #[test]
    fn conformal_weights() {
        for i in 1..=6 {
            assert_eq!(
                conformal_weight(1, 3, 1, i).unwrap(),
                ratio((i - 1) * (3 * i + 1), 4)
            );
        }
        // with k+2 = p'/p: h_{2,1} = (3/4)k + 1
        for (pp, p) in [(1, 3), (1, 4), (2, 5), (3, 7)] {
            let k = ratio(pp, p) - rat(2);
            assert_eq!(
                conformal_weight(pp, p, 2, 1).unwrap(),
                ratio(3, 4) * k + rat(1)
            );
        }
    }

    #[test]
    fn superscript_convention_display() {
        // h_{1,n+1} with (p',p) = (1,-p) equals h_{1,np+1} with (p',p) = (-p,1),
        // and also the (-1,p) reading; the formula gives the same value.
        for p in 1..=10 {
            for n in 0..=10 {
                let a = conformal_weight(1, -p, 1, n + 1).unwrap();
                let b = conformal_weight(-p, 1, 1, n * p + 1).unwrap();
                let c = conformal_weight(-1, p, 1, n + 1).unwrap();
                assert_eq!(a, b);
                assert_eq!(a, c);
            }
        }
    }

    #[test]
    fn vir_char_prefactors() {
        let n = rat(6);
        let v3 = vir_char(3, 1, &n);
        assert_eq!(v3.ord().unwrap(), ratio(7, 24));
        let v4 = vir_char(4, 1, &n);
        assert_eq!(v4.ord().unwrap(), ratio(25, 48));
        // p=3, i=1: numerator 1 - q (h_{1,-1} = 1)
        assert_eq!(conformal_weight(1, 3, 1, -1).unwrap(), rat(1));
        let e = euler_product(&n);
        let recon = v3.mul(&e);
        assert_eq!(recon.coeff_at(&ratio(7, 24)), rat(1));
        assert_eq!(recon.coeff_at(&(ratio(7, 24) + rat(1))), rat(-1));
    }

    #[test]
    fn affine_neg_basics() {
        let n = rat(5);
        let a0 = affine_neg_char(3, AffineFamily::A, 0, &n).unwrap();
        assert_eq!(a0.ord().unwrap(), ratio(-5, 24));
        assert_eq!(a0.coeff_at(&ratio(-5, 24)), rat(1));
        let a04 = affine_neg_char(4, AffineFamily::A, 0, &n).unwrap();
        assert_eq!(a04.ord().unwrap(), ratio(-3, 16));
        assert_eq!(
            affine_neg_char(3, AffineFamily::B, 0, &n).unwrap_err(),
            CharError::EmptySum
        );
        // p=3, family A, l=1 numerator: 1 + 7 q^-4 - 5 q^-2
        let parts = affine_parts(3, AffineFamily::A, 1).unwrap();
        let mut sorted = parts.numerator.clone();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(
            sorted,
            vec![(rat(-4), rat(7)), (rat(-2), rat(-5)), (rat(0), rat(1))]
        );
    }

    #[test]
    fn affine_neg_b_smoke() {
        let n = rat(3);
        for p in [3, 4] {
            for l in 1..=3 {
                let s = affine_neg_char(p, AffineFamily::B, l, &n).unwrap();
                assert!(!s.is_zero());
            }
        }
    }

    #[test]
    fn admissible_basics() {
        let n = rat(6);
        let a = admissible_char(2, 0, &n);
        assert_eq!(a.ord().unwrap(), ratio(3, 8));
        assert_eq!(a.coeff_at(&ratio(3, 8)), rat(1));
        for (np, l) in [(2i64, 1i64), (3, 1), (3, 2), (5, 0)] {
            let s = admissible_char(np, l, &rat(20));
            let lead = ratio(2 * np - 1, 8) + ratio(np * l * (l + 2), 4);
            assert_eq!(s.ord().unwrap(), lead);
            assert_eq!(s.coeff_at(&lead), rat(l + 1));
        }
        assert_eq!(
            admissible_char(3, 1, &rat(20)).ord().unwrap(),
            ratio(5, 8) + ratio(9, 4)
        );
    }

    #[test]
    fn weyl_char_basics() {
        let n = rat(4);
        let w2 = weyl_char(2, &n);
        assert_eq!(w2.ord().unwrap(), ratio(1, 12));
        assert_eq!(w2.coeff_at(&(ratio(1, 12) + ratio(1, 2))), rat(4));
    }

    #[test]
    fn sl3_char_basics() {
        let n = rat(5);
        let s = sl3_char(&n);
        assert_eq!(s.ord().unwrap(), ratio(1, 3));
        assert_eq!(s.coeff_at(&(ratio(1, 3) + rat(1))), rat(8));
        // equals q^(1/3) Delta(q)^4 / (q;q)_inf^4
        let big = rat(40);
        let alt = triangular_delta(&big)
            .pow(4)
            .unwrap()
            .mul(&euler_product(&big).invert().unwrap().pow(4).unwrap())
            .truncate(&big)
            .mul_monomial(&rat(1), &ratio(1, 3));
        assert!(sl3_char(&big).compare(&alt, &big).unwrap().is_equal());
    }

    #[test]
    fn cp_char_leading_and_weyl3() {
        let n = rat(8);
        for np in 2..=6 {
            let lead = -cp_central_charge(np) / rat(24);
            let s = cp_char(np, &n);
            assert_eq!(s.ord().unwrap(), lead, "n = {np}");
            assert_eq!(s.coeff_at(&lead), rat(1));
        }
        // C_2 is the rank-three Weyl algebra
        let big = rat(20);
        let diff = cp_char(2, &big).compare(&weyl_char(3, &big), &big).unwrap();
        assert!(diff.is_equal(), "{diff:?}");
    }

    #[test]
    fn cp_char_3_depth_one_is_dim_g2() {
        let n = rat(4);
        let s = cp_char(3, &n);
        let lead = ratio(5, 12);
        assert_eq!(s.coeff_at(&(lead + rat(1))), rat(14));
    }

    #[test]
    fn bq_cq_low_terms() {
        let n = rat(10);
        let b = bq_series(&n);
        assert_eq!(b.coeff_at(&rat(0)), rat(1));
        let c = cq_series(&n);
        assert_eq!(c.coeff_at(&rat(0)), rat(1));
        // B[q] = Delta(q^(1/2))^4, C[q] = Delta(q)^4 at small order
        let d_half = triangular_delta(&rat(20)).scale_exponents(&ratio(1, 2));
        assert!(b
            .compare(&d_half.pow(4).unwrap().truncate(&n), &n)
            .unwrap()
            .is_equal());
        let d = triangular_delta(&n).pow(4).unwrap().truncate(&n);
        assert!(c.compare(&d, &n).unwrap().is_equal());
    }

    #[test]
    fn legendre_low_terms() {
        let n = rat(12);
        let rhs = legendre_rhs(&n);
        assert_eq!(rhs.coeff_at(&rat(0)), rat(1));
        assert_eq!(rhs.coeff_at(&rat(1)), rat(4));
        let d4 = triangular_delta(&n).pow(4).unwrap().truncate(&n);
        assert!(rhs.compare(&d4, &n).unwrap().is_equal());
    }

    #[test]
    fn partition_check_small() {
        let report = partition_check(12, 12);
        assert!(report.ok(), "{:?}", report.violations);
        // (0,0) lands in class 1 with l = i = 0
        let rows = partition_rows();
        let t = (rows[0].t)(0, 0);
        assert!(t.denom().is_one() && !t.is_negative());
        assert_eq!((rows[0].l)(0, 0), rat(0));
        assert_eq!((rows[0].i)(0, 0), rat(0));
    }

    #[test]
    fn lemma71_small() {
        let n = rat(12);
        let lhs = weyl_char(2, &n);
        let rhs = lemma71_rhs(&n);
        match lhs.compare(&rhs, &n).unwrap() {
            Verdict::Equal => {}
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn lemma72_small() {
        let n = rat(12);
        let lhs = sl3_char(&n);
        let rhs = lemma72_rhs(&n);
        match lhs.compare(&rhs, &n).unwrap() {
            Verdict::Equal => {}
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn weyl3_matches_cp2_prefactor() {
        // m = 3 Weyl prefactor is 3/24 = 1/8 = -c_2/24
        assert_eq!(ratio(3, 24), -cp_central_charge(2) / rat(24));
    }
}
