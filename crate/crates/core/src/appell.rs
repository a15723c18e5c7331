//! Jacobi theta constants vartheta_{n,a}, the specialized Appell-Lerch
//! series B_n, and five independent constructions of the weight-three
//! indefinite theta series A_n = eta^6 ch[C_n], all expanded over the
//! bi-jet ring so mixed x,y-derivatives at x = y = 1 are exact.

use crate::bijet::{bijet_pow, BiJet, BiJetError};
use crate::qser::{Coeff, QSeries, SeriesError};
use crate::rational::{rat, ratio, Rat};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AppellError {
    #[error("denominator leading jet is not invertible")]
    DenominatorNotUnit,
    #[error(transparent)]
    Jet(#[from] BiJetError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The substitution argument x^(e_x) y^(e_y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialArg {
    pub e_x: Rat,
    pub e_y: Rat,
}

impl MonomialArg {
    pub fn new(e_x: Rat, e_y: Rat) -> Self {
        MonomialArg { e_x, e_y }
    }

    /// The jet of x^(e_x t) y^(e_y t) at x = 1 + e1, y = 1 + e2.
    fn jet(&self, t: &Rat) -> BiJet {
        let jx = bijet_pow(&BiJet::one_plus_e1(), &(&self.e_x * t)).expect("unit base");
        let jy = bijet_pow(&BiJet::one_plus_e2(), &(&self.e_y * t)).expect("unit base");
        jx.mul(&jy)
    }
}

fn jet_monomial(e_x: &Rat, e_y: &Rat) -> BiJet {
    MonomialArg::new(e_x.clone(), e_y.clone()).jet(&rat(1))
}

/// vartheta_{n,a}(x; q) = sum_k (-1)^k q^((n/2)(k + a/2n)^2) x^(k + a/2n),
/// with x specialized to the monomial argument in the jet variables.
pub fn vartheta(n_par: i64, a: i64, arg: &MonomialArg, n: &Rat) -> QSeries<BiJet> {
    assert!(n_par >= 2);
    let mut out = QSeries::<BiJet>::zero(n.clone());
    let shift = ratio(a, 2 * n_par);
    let half_n = ratio(n_par, 2);
    // the exponent is quadratic in k with vertex at -a/2n; walk both ways
    let start = crate::rational::ceil_int(&-&shift);
    let start: i64 = num::ToPrimitive::to_i64(&start).expect("index overflow");
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { start } else { start - 1 };
        loop {
            let m = rat(k) + &shift;
            let e = &half_n * &m * &m;
            if &e >= n {
                break;
            }
            let mut c = arg.jet(&m);
            if k.rem_euclid(2) == 1 {
                c = c.neg();
            }
            out = out.add(&QSeries::monomial(c, &e, n.clone()));
            k += dir;
        }
    }
    out
}

/// Adds sign * x^ex y^ey q^e for a doubly-indexed family, iterating the
/// outer index while the inner minimum stays below the bound and asserting
/// monotone growth in both directions.
fn jet_block(out: &mut QSeries<BiJet>, n: &Rat, term: impl Fn(i64, i64) -> (Rat, Rat, Rat, bool)) {
    let mut outer = 0i64;
    let mut prev_outer: Option<Rat> = None;
    loop {
        let (e0, _, _, _) = term(outer, 0);
        if let Some(p) = &prev_outer {
            assert!(&e0 > p, "outer exponent must grow");
        }
        if &e0 >= n {
            break;
        }
        prev_outer = Some(e0);
        let mut inner = 0i64;
        let mut prev_inner: Option<Rat> = None;
        loop {
            let (e, ex, ey, negate) = term(outer, inner);
            if let Some(p) = &prev_inner {
                assert!(&e > p, "inner exponent must grow");
            }
            if &e >= n {
                break;
            }
            prev_inner = Some(e.clone());
            let mut c = jet_monomial(&ex, &ey);
            if negate {
                c = c.neg();
            }
            *out = out.add(&QSeries::monomial(c, &e, n.clone()));
            inner += 1;
        }
        outer += 1;
        assert!(outer < 1_000_000, "runaway enumeration");
    }
}

/// The specialized Appell-Lerch sum B_n(x, y, q), i.e. the two-quadrant
/// double series with x-exponent i + 2j, y-exponent n i and q-exponent
/// n(j^2 + ij) + (n/2)(i + 2j) - i/2.
///
/// With `mirror` set, the x -> q^(-n) x^(-1) substituted companion is
/// expanded instead (the quadrants regroup around its own pole structure).
pub fn appell_bn(n_par: i64, n: &Rat, mirror: bool) -> QSeries<BiJet> {
    assert!(n_par >= 2);
    let nn = n_par;
    let mut out = QSeries::<BiJet>::zero(n.clone());
    if !mirror {
        // quadrant i, j >= 0 (outer j, inner i)
        jet_block(&mut out, n, |j, i| {
            (
                rat(nn * (j * j + i * j)) + ratio(nn * (i + 2 * j), 2) - ratio(i, 2),
                rat(i + 2 * j),
                rat(nn * i),
                false,
            )
        });
        // quadrant i, j <= -1 with negative sign (outer s = -j-1, inner r = -i-1)
        jet_block(&mut out, n, |s, r| {
            let i = -r - 1;
            let j = -s - 1;
            (
                rat(nn * (j * j + i * j)) + ratio(nn * (i + 2 * j), 2) - ratio(i, 2),
                rat(i + 2 * j),
                rat(nn * i),
                true,
            )
        });
    } else {
        // kappa_2 at (q^(-n/2) x^(-1), q^(-1/2) y^n, q^n): terms
        // q^(n m^2 - n m) x^(-2m) / (1 - u_m), u_m = x^(-1) y^n q^(nm-(n+1)/2)
        // m >= 1: geometric expansion in u_m (outer m-1, inner r)
        jet_block(&mut out, n, |m0, r| {
            let m = m0 + 1;
            (
                rat(nn * m * m - nn * m) + rat(r) * (rat(nn * m) - ratio(nn + 1, 2)),
                rat(-2 * m - r),
                rat(nn * r),
                false,
            )
        });
        // m <= 0: expansion in u_m^(-1) with negative sign (outer s = -m, inner r-1)
        jet_block(&mut out, n, |s, r0| {
            let r = r0 + 1;
            (
                rat(nn * s * s + nn * s) + rat(r) * (rat(nn * s) + ratio(nn + 1, 2)),
                rat(2 * s + r),
                rat(-nn * r),
                true,
            )
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnMethod {
    Thm81,
    Indef1,
    Indef2,
    Closed,
    Appell,
}

impl std::str::FromStr for AnMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thm81" => Ok(AnMethod::Thm81),
            "indef1" => Ok(AnMethod::Indef1),
            "indef2" => Ok(AnMethod::Indef2),
            "closed" => Ok(AnMethod::Closed),
            "appell" => Ok(AnMethod::Appell),
            other => Err(format!("unknown A_n method `{other}`")),
        }
    }
}

/// Leading exponent n/4 - 1/(4n) of A_n.
pub fn an_leading_exp(n_par: i64) -> Rat {
    ratio(n_par, 4) - ratio(1, 4 * n_par)
}

/// A_n(tau) = eta(tau)^6 ch[C_n], by the requested construction.
pub fn an_series(n_par: i64, method: AnMethod, n: &Rat) -> Result<QSeries<Rat>, AppellError> {
    assert!(n_par >= 2);
    let pre = an_leading_exp(n_par);
    match method {
        AnMethod::Thm81 => {
            let inner = n - &pre;
            if inner <= rat(0) {
                return Ok(QSeries::zero(n.clone()));
            }
            let s = crate::vachar::cp_quadruple_sum(n_par, &inner);
            Ok(s.mul_monomial(&rat(1), &pre))
        }
        AnMethod::Indef1 => Ok(indef1(n_par, n)),
        AnMethod::Indef2 => Ok(indef2(n_par, n)),
        AnMethod::Closed => closed(n_par, n),
        AnMethod::Appell => {
            let inner = n - &pre;
            if inner <= rat(0) {
                return Ok(QSeries::zero(n.clone()));
            }
            let b = appell_bn(n_par, &inner, false);
            let xy = BiJet::new(rat(1), rat(1), rat(1), rat(1));
            let mixed = b.scalar_mul(&xy).map_coeffs(|c| c.mixed_part());
            Ok(mixed.mul_monomial(&rat(1), &pre))
        }
    }
}

/// (n/2) sum over Z^2 + ((n-1)/2n, 1/n) of (sgn l1 + sgn l2) l2 (2l1 + l2)
/// q^(n l1^2 + n l1 l2); only the two strict quadrants contribute.
fn indef1(n_par: i64, n: &Rat) -> QSeries<Rat> {
    let nn = n_par;
    let off1 = ratio(nn - 1, 2 * nn);
    let off2 = ratio(1, nn);
    let mut out = QSeries::<Rat>::zero(n.clone());
    for positive in [true, false] {
        let mut a = if positive { 0i64 } else { -1 };
        let mut prev_outer: Option<Rat> = None;
        loop {
            let l1 = rat(a) + &off1;
            let b0 = if positive { 0i64 } else { -1 };
            let l2_0 = rat(b0) + &off2;
            let e0 = rat(nn) * &l1 * (&l1 + &l2_0);
            if let Some(p) = &prev_outer {
                assert!(&e0 > p, "outer exponent must grow");
            }
            if &e0 >= n {
                break;
            }
            prev_outer = Some(e0);
            let mut b = b0;
            let mut prev_inner: Option<Rat> = None;
            loop {
                let l2 = rat(b) + &off2;
                let e = rat(nn) * &l1 * (&l1 + &l2);
                if let Some(p) = &prev_inner {
                    assert!(&e > p, "inner exponent must grow");
                }
                if &e >= n {
                    break;
                }
                prev_inner = Some(e.clone());
                let p = &l2 * (rat(2) * &l1 + &l2);
                let c = rat(if positive { nn } else { -nn }) * p;
                out = out.add(&QSeries::monomial(c, &e, n.clone()));
                b += if positive { 1 } else { -1 };
            }
            a += if positive { 1 } else { -1 };
            assert!(a.abs() < 1_000_000, "runaway enumeration");
        }
    }
    out
}

/// sum over l1 >= 0, l2 = -l1, -l1+2, ..., l1 of (1 + l1)(1 + n l2)
/// q^((n/4)(l1+1)^2 - (n/4)(l2 + 1/n)^2).
fn indef2(n_par: i64, n: &Rat) -> QSeries<Rat> {
    let nn = n_par;
    let quarter_n = ratio(nn, 4);
    let inv = ratio(1, nn);
    let mut out = QSeries::<Rat>::zero(n.clone());
    let mut l1 = 0i64;
    let mut prev_min: Option<Rat> = None;
    loop {
        let expo = |l2: i64| {
            let t = rat(l2) + &inv;
            &quarter_n * rat((l1 + 1) * (l1 + 1)) - &quarter_n * &t * &t
        };
        // the slice minimum is at l2 = +l1
        let slice_min = expo(l1);
        if let Some(p) = &prev_min {
            assert!(&slice_min > p, "slice minimum must grow");
        }
        if &slice_min >= n {
            break;
        }
        prev_min = Some(slice_min);
        let mut l2 = -l1;
        while l2 <= l1 {
            let e = expo(l2);
            if &e < n {
                out = out.add(&QSeries::monomial(
                    rat((1 + l1) * (1 + nn * l2)),
                    &e,
                    n.clone(),
                ));
            }
            l2 += 2;
        }
        l1 += 1;
        assert!(l1 < 1_000_000, "runaway enumeration");
    }
    out
}

/// (1/2) d^2/dxdy of eta(n tau)^3 vartheta_{n,n}(x^2) /
/// (vartheta_{n,2n-1}(x y^n) vartheta_{n,2n+1}(x y^-n)) at x = y = 1.
fn closed(n_par: i64, n: &Rat) -> Result<QSeries<Rat>, AppellError> {
    let work = n + rat(1);
    let eta3 = crate::modforms::eta(&rat(n_par), &work)
        .pow(3)?
        .truncate(&work)
        .map_coeffs(|c| BiJet::constant(c.clone()));
    let num = vartheta(n_par, n_par, &MonomialArg::new(rat(2), rat(0)), &work);
    let d1 = vartheta(
        n_par,
        2 * n_par - 1,
        &MonomialArg::new(rat(1), rat(n_par)),
        &work,
    );
    let d2 = vartheta(
        n_par,
        2 * n_par + 1,
        &MonomialArg::new(rat(1), rat(-n_par)),
        &work,
    );
    let den = d1.mul(&d2);
    let den_inv = match den.invert() {
        Ok(s) => s,
        Err(SeriesError::NonInvertibleLeadingCoefficient) => {
            return Err(AppellError::DenominatorNotUnit)
        }
        Err(e) => return Err(e.into()),
    };
    let ratio_series = eta3.mul(&num).mul(&den_inv);
    assert!(ratio_series.acc() >= n, "accuracy budget exhausted");
    Ok(ratio_series
        .map_coeffs(|c| c.mixed_part())
        .scalar_mul_rat(&ratio(1, 2))
        .truncate(n))
}
