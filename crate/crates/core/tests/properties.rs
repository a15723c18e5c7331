//! Property-based invariants for the series ring, formatting, and jets.

use num::One;
use proptest::prelude::*;
use qchar::bijet::BiJet;
use qchar::qser::{Coeff, QSeries, Verdict};
use qchar::rational::{fmt_rat, parse_rat, rat, ratio, Rat};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn arb_series(unit: bool) -> impl Strategy<Value = QSeries> {
    let lo = if unit { 1i64 } else { -6 };
    let term = ((lo..=30, 1i64..=4), (-9i64..=9, 1i64..=4))
        .prop_map(|((en, ed), (cn, cd))| (ratio(en, ed), ratio(cn, cd)));
    (prop::collection::vec(term, 0..6), 5i64..=12).prop_map(move |(mut terms, acc)| {
        if unit {
            terms.push((rat(0), rat(1)));
        }
        QSeries::from_terms(terms, rat(acc))
    })
}

fn eq_below(a: &QSeries, b: &QSeries, n: &Rat) -> bool {
    matches!(a.compare(b, n).unwrap(), Verdict::Equal)
}

proptest! {
    #[test]
    fn rat_format_round_trip(r in arb_rat()) {
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn monomial_shift_round_trip(f in arb_series(false), (en, ed) in (-12i64..=12, 1i64..=4)) {
        let e = ratio(en, ed);
        let back = f.mul_monomial(&rat(1), &e).mul_monomial(&rat(1), &(-&e));
        prop_assert!(eq_below(&f, &back, f.acc()));
    }

    #[test]
    fn exponent_scale_round_trip(f in arb_series(false), s in 1i64..=4) {
        let sc = ratio(s, 1);
        let back = f.scale_exponents(&sc).scale_exponents(&(rat(1) / &sc));
        prop_assert!(eq_below(&f, &back, f.acc()));
        prop_assert_eq!(back.acc(), f.acc());
    }

    #[test]
    fn derivative_leibniz(f in arb_series(false), g in arb_series(false)) {
        let lhs = f.mul(&g).q_derivative();
        let rhs = f.q_derivative().mul(&g).add(&f.mul(&g.q_derivative()));
        let bound = lhs.acc().clone().min(rhs.acc().clone());
        prop_assert!(eq_below(&lhs, &rhs, &bound));
    }

    #[test]
    fn pow_is_repeated_mul(f in arb_series(true), e in 1i64..=4) {
        let p = f.pow(e).unwrap();
        let mut m = QSeries::one(f.acc().clone());
        for _ in 0..e {
            m = m.mul(&f);
        }
        let bound = p.acc().clone().min(m.acc().clone());
        prop_assert!(eq_below(&p, &m, &bound));
    }

    #[test]
    fn neg_pow_inverts(f in arb_series(true), e in 1i64..=3) {
        let p = f.pow(-e).unwrap();
        let q = f.pow(e).unwrap();
        let prod = p.mul(&q);
        prop_assert!(eq_below(&prod, &QSeries::one(prod.acc().clone()), prod.acc()));
    }

    #[test]
    fn truncate_is_idempotent(f in arb_series(false), n in 1i64..=10) {
        let t = f.truncate(&rat(n));
        let tt = t.truncate(&rat(n));
        prop_assert!(eq_below(&t, &tt, t.acc()));
        prop_assert!(t.acc() <= &rat(n));
    }

    #[test]
    fn coeff_at_matches_iteration(f in arb_series(false)) {
        for (e, c) in f.iter_terms() {
            prop_assert_eq!(&f.coeff_at(&e), c);
        }
    }

    #[test]
    fn bijet_ring_laws(
        a in (arb_rat(), arb_rat(), arb_rat(), arb_rat()),
        b in (arb_rat(), arb_rat(), arb_rat(), arb_rat()),
        c in (arb_rat(), arb_rat(), arb_rat(), arb_rat()),
    ) {
        let j = |t: (Rat, Rat, Rat, Rat)| BiJet::new(t.0, t.1, t.2, t.3);
        let (a, b, c) = (j(a), j(b), j(c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn bijet_invert_round_trip(a in (arb_rat(), arb_rat(), arb_rat(), arb_rat())) {
        let mut b = BiJet::new(a.0, a.1, a.2, a.3);
        if num::Zero::is_zero(&b.c0) {
            b.c0 = rat(1);
        }
        let p = b.mul(&b.invert().unwrap());
        prop_assert!(One::is_one(&p.c0) && p.c1 == rat(0) && p.c2 == rat(0) && p.c12 == rat(0));
    }
}
