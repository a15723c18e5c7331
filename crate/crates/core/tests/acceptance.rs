//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with --nocapture). All comparisons are exact.

use std::time::{Duration, Instant};

use num::{One, Signed, Zero};
use qchar::appell::{an_series, AnMethod};
use qchar::bijet::{bijet_pow, BiJet};
use qchar::cftlevels::{conformal_levels, LevelCase};
use qchar::linalg::Solution;
use qchar::mlde::{builtin_mlde, find_mlde, mlde_apply, serre_derivative, Group};
use qchar::modforms::{eta, triangular_delta};
use qchar::rational::{rat, ratio, Rat};
use qchar::vachar::{
    bq_series, cp_central_charge, cp_char, cq_series, legendre_rhs, lemma71_rhs, lemma72_rhs,
    partition_check, sl3_char, weyl_char,
};
use qchar::{euler_product, product_expand, Coeff, QSeries, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(idx: u32, name: &str, ok: bool, elapsed: Duration, budget_s: u64) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {idx:02} [{name}]: {status} ({:.2}s)",
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {idx} ({name}) failed");
    assert!(
        elapsed < Duration::from_secs(budget_s),
        "criterion {idx} ({name}) exceeded {budget_s}s budget: {elapsed:?}"
    );
}

fn equal(lhs: &QSeries, rhs: &QSeries, n: &Rat) -> bool {
    matches!(lhs.compare(rhs, n).unwrap(), Verdict::Equal)
}

#[test]
fn criterion_01_beta_gamma_decomposition() {
    let t = Instant::now();
    let n = rat(50);
    let ok = equal(&weyl_char(2, &n), &lemma71_rhs(&n), &n);
    report(1, "beta-gamma decomposition to q^50", ok, t.elapsed(), 5);
}

#[test]
fn criterion_02_sl3_decomposition() {
    let t = Instant::now();
    let n = rat(50);
    let ok = equal(&sl3_char(&n), &lemma72_rhs(&n), &n);
    report(2, "sl3 decomposition to q^50", ok, t.elapsed(), 5);
}

#[test]
fn criterion_03_bq_cq_reductions() {
    let t = Instant::now();
    let n = rat(50);
    let half_delta = triangular_delta(&rat(100)).scale_exponents(&ratio(1, 2));
    let b_ok = equal(&half_delta.pow(4).unwrap(), &bq_series(&n), &n);
    let c_ok = equal(&triangular_delta(&n).pow(4).unwrap(), &cq_series(&n), &n);
    report(
        3,
        "B and C reduce to fourth powers of Delta",
        b_ok && c_ok,
        t.elapsed(),
        3,
    );
}

#[test]
fn criterion_04_gauss_and_legendre() {
    let t = Instant::now();
    let n = rat(100);
    let gauss_lhs = triangular_delta(&n).mul(&euler_product(&n));
    let gauss_rhs: QSeries = product_expand(&rat(2), &rat(2), 1, &n)
        .unwrap()
        .pow(2)
        .unwrap();
    let g_ok = equal(&gauss_lhs, &gauss_rhs, &n);
    let l_ok = equal(&triangular_delta(&n).pow(4).unwrap(), &legendre_rhs(&n), &n);
    report(
        4,
        "Gauss and Legendre identities to q^100",
        g_ok && l_ok,
        t.elapsed(),
        2,
    );
}

#[test]
fn criterion_05_partition_table() {
    let t = Instant::now();
    let rep = partition_check(50, 50);
    let ok = rep.ok() && rep.checked == 51 * 34;
    report(5, "eight-class partition 0..50", ok, t.elapsed(), 1);
}

#[test]
fn criterion_06_mlde_residuals() {
    let t = Instant::now();
    let mut ok = true;
    for np in 2..=5 {
        let c = cp_central_charge(np);
        let n = rat(15) - c / rat(24);
        let op = builtin_mlde(np).unwrap();
        let f = cp_char(np, &n);
        let res = mlde_apply(&op, &f, &n).unwrap();
        let vanish = res.is_zero_below(&n).unwrap();
        if !vanish {
            ok = false;
            println!("  n={np}: residual nonzero at {:?}", res.ord());
        }
    }
    report(
        6,
        "built-in MLDE residuals vanish, n=2..5",
        ok,
        t.elapsed(),
        10,
    );
}

#[test]
fn criterion_07_find_mlde_rediscovery() {
    let t = Instant::now();
    let n = rat(20);
    let r3 = find_mlde(&cp_char(3, &n), 2, Group::Gamma1, &n).unwrap();
    let ok3 = match &r3.outcome {
        Solution::Unique(v) => {
            let i = r3.basis.iter().position(|b| b.label == "E4").unwrap();
            v[i] == rat(-75)
        }
        _ => false,
    };
    let r2 = find_mlde(&cp_char(2, &n), 1, Group::Gamma2, &n).unwrap();
    let ok2 = matches!(&r2.outcome, Solution::Unique(v) if *v == vec![ratio(-1, 8), ratio(-1, 8)]);
    report(
        7,
        "find_mlde rediscovers -75 and (-1/8,-1/8)",
        ok3 && ok2,
        t.elapsed(),
        5,
    );
}

#[test]
fn criterion_08_a2_eta_quotient() {
    let t = Instant::now();
    let n = rat(15);
    let lhs = an_series(2, AnMethod::Thm81, &n).unwrap();
    let e1 = eta(&rat(1), &(rat(18))).pow(12).unwrap();
    let eh = eta(&ratio(1, 2), &rat(18)).pow(-6).unwrap();
    let rhs = e1.mul(&eh);
    let ok = equal(&lhs, &rhs, &n);
    report(
        8,
        "A_2 equals eta(1)^12/eta(1/2)^6 to q^15",
        ok,
        t.elapsed(),
        2,
    );
}

#[test]
fn criterion_09_five_way_an_consistency() {
    let t = Instant::now();
    let methods = [
        AnMethod::Thm81,
        AnMethod::Indef1,
        AnMethod::Indef2,
        AnMethod::Closed,
        AnMethod::Appell,
    ];
    let mut ok = true;
    for np in 2..=6 {
        let n = rat(12) + ratio(np, 4);
        let series: Vec<QSeries> = methods
            .iter()
            .map(|m| an_series(np, *m, &n).unwrap())
            .collect();
        for i in 0..series.len() {
            for j in i + 1..series.len() {
                if !equal(&series[i], &series[j], &n) {
                    ok = false;
                    println!("  n={np}: methods {i} and {j} disagree");
                }
            }
        }
    }
    report(9, "five-way A_n agreement, n=2..6", ok, t.elapsed(), 20);
}

#[test]
fn criterion_10_conformal_levels() {
    let t = Instant::now();
    let f4 = conformal_levels(&LevelCase::f4());
    let e8 = conformal_levels(&LevelCase::e8());
    let f4_expected = vec![ratio(-23, 4), rat(-5), ratio(-9, 2), rat(-4)];
    let e8_expected = vec![ratio(-119, 5), ratio(-70, 3), rat(-23)];
    let ok = f4.roots == f4_expected && e8.roots == e8_expected && f4.complete() && e8.complete();
    report(10, "conformal level root sets", ok, t.elapsed(), 1);
}

#[test]
fn criterion_11_character_positivity() {
    let t = Instant::now();
    let mut ok = true;
    for np in 2..=6 {
        let c = cp_central_charge(np);
        let shift = &c / rat(24);
        let n = rat(20) - &shift;
        let normalized = cp_char(np, &n).mul_monomial(&rat(1), &shift);
        for (e, coef) in normalized.iter_terms() {
            if e >= rat(20) {
                continue;
            }
            if !coef.denom().is_one() || coef.is_negative() {
                ok = false;
                println!("  n={np}: bad term {coef} at q^{e}");
            }
        }
        if normalized.coeff_at(&rat(0)) != rat(1) {
            ok = false;
        }
    }
    if cp_char(3, &rat(3))
        .mul_monomial(&rat(1), &ratio(-5, 12))
        .coeff_at(&rat(1))
        != rat(14)
    {
        ok = false;
        println!("  n=3 depth-1 coefficient is not 14");
    }
    report(
        11,
        "normalized characters are nonneg integers",
        ok,
        t.elapsed(),
        3,
    );
}

// Randomized property suites, >= 100 instances each.

fn random_series(rng: &mut ChaCha8Rng, unit: bool) -> QSeries {
    let nterms = rng.gen_range(1..=6);
    let mut terms = Vec::new();
    if unit {
        terms.push((rat(0), rat(1)));
    }
    for _ in 0..nterms {
        let den = *[1i64, 2, 3, 4, 6].get(rng.gen_range(0..5)).unwrap();
        let lo = if unit { 1 } else { -4 };
        let e = ratio(rng.gen_range(lo..=12 * den), den);
        let c = ratio(rng.gen_range(-9..=9i64), rng.gen_range(1..=4));
        if !Zero::is_zero(&c) && (!unit || e > rat(0)) {
            terms.push((e, c));
        }
    }
    let acc = rat(rng.gen_range(6..=14));
    QSeries::from_terms(terms, acc)
}

#[test]
fn criterion_12_property_suites() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    let mut ok = true;

    // ring axioms
    for _ in 0..100 {
        let a = random_series(&mut rng, false);
        let b = random_series(&mut rng, false);
        let c = random_series(&mut rng, false);
        let assoc_l = a.mul(&b).mul(&c);
        let assoc_r = a.mul(&b.mul(&c));
        let bound = std::cmp::min(assoc_l.acc().clone(), assoc_r.acc().clone());
        let add_bound = a.add(&b).add(&c).acc().clone();
        ok &= equal(&a.add(&b), &b.add(&a), a.add(&b).acc());
        ok &= equal(&a.add(&b).add(&c), &a.add(&b.add(&c)), &add_bound);
        ok &= equal(&a.mul(&b), &b.mul(&a), a.mul(&b).acc());
        ok &= equal(&assoc_l, &assoc_r, &bound);
        let dist_l = a.mul(&b.add(&c));
        let dist_r = a.mul(&b).add(&a.mul(&c));
        let bound = std::cmp::min(dist_l.acc().clone(), dist_r.acc().clone());
        ok &= equal(&dist_l, &dist_r, &bound);
    }

    // accuracy soundness: rebuilding with +10 accuracy never changes
    // coefficients below the original accuracy bound
    for _ in 0..100 {
        let mut r2 = rng.clone();
        let f = random_series(&mut rng, true);
        let g = random_series(&mut rng, true);
        let widen = |s: &QSeries| {
            QSeries::from_terms(
                s.iter_terms()
                    .map(|(e, c)| (e, c.clone()))
                    .collect::<Vec<_>>(),
                s.acc() + rat(10),
            )
        };
        let f2 = widen(&random_series(&mut r2, true));
        let g2 = widen(&random_series(&mut r2, true));
        rng = r2;
        let h = f.mul(&g).invert().unwrap();
        let h2 = f2.mul(&g2).invert().unwrap();
        ok &= equal(&h, &h2, h.acc());
    }

    // invert round-trip
    for _ in 0..100 {
        let f = random_series(&mut rng, true);
        let p = f.mul(&f.invert().unwrap());
        ok &= equal(&p, &QSeries::one(p.acc().clone()), p.acc());
    }

    // Serre derivative is a weighted Leibniz derivation:
    // S_{k1+k2}(fg) = S_{k1}(f) g + f S_{k2}(g)
    for _ in 0..100 {
        let f = random_series(&mut rng, true);
        let g = random_series(&mut rng, true);
        let k1 = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        let k2 = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        let n = rat(6);
        let lhs = serre_derivative(&f.mul(&g), &(&k1 + &k2), &n).unwrap();
        let rhs = serre_derivative(&f, &k1, &n)
            .unwrap()
            .mul(&g)
            .add(&f.mul(&serre_derivative(&g, &k2, &n).unwrap()));
        let bound = std::cmp::min(lhs.acc().clone(), rhs.acc().clone());
        ok &= equal(&lhs, &rhs, &bound);
    }

    // bijet exponent laws
    for _ in 0..100 {
        let b = BiJet::new(
            rat(1),
            ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
            ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
            ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)),
        );
        let r1 = ratio(rng.gen_range(-8..=8), rng.gen_range(1..=4));
        let r2 = ratio(rng.gen_range(-8..=8), rng.gen_range(1..=4));
        let lhs = bijet_pow(&b, &r1)
            .unwrap()
            .mul(&bijet_pow(&b, &r2).unwrap());
        let rhs = bijet_pow(&b, &(&r1 + &r2)).unwrap();
        ok &= lhs == rhs;
        // integer exponents with a non-unit invertible base
        let mut c = b.clone();
        c.c0 = ratio(rng.gen_range(1..=5), rng.gen_range(1..=3));
        let e1 = rat(rng.gen_range(-3..=3));
        let e2 = rat(rng.gen_range(-3..=3));
        let lhs = bijet_pow(&c, &e1)
            .unwrap()
            .mul(&bijet_pow(&c, &e2).unwrap());
        let rhs = bijet_pow(&c, &(&e1 + &e2)).unwrap();
        ok &= lhs == rhs;
    }

    report(12, "randomized property suites", ok, t.elapsed(), 5);
}
