//! Serre derivatives, iterated modular derivatives D_q^(k), application of
//! modular linear differential equations, the four built-in operators
//! annihilating ch[C_n] for n = 2..5, and exact rediscovery of MLDE
//! coefficients by linear algebra over monomial bases.

use crate::linalg::{solve, Solution};
use crate::modforms::FormsGenerator;
use crate::qser::{QSeries, SeriesError};
use crate::rational::{rat, ratio, Rat};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MldeError {
    #[error("no built-in operator for n = {0}")]
    UnsupportedN(i64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Gamma1,
    Gamma2,
}

/// A linear combination of monomials in the form generators, homogeneous
/// of the declared weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ModFormExpr {
    pub group: Group,
    pub weight: i64,
    pub terms: Vec<(Rat, Vec<FormsGenerator>)>,
}

impl ModFormExpr {
    pub fn new(group: Group, weight: i64, terms: Vec<(Rat, Vec<FormsGenerator>)>) -> Self {
        for (_, mono) in &terms {
            let w: Rat = mono
                .iter()
                .map(|g| g.weight().expect("weighted generator"))
                .fold(rat(0), |s, v| s + v);
            assert_eq!(w, rat(weight), "monomial weight mismatch");
        }
        ModFormExpr {
            group,
            weight,
            terms,
        }
    }

    pub fn zero(group: Group, weight: i64) -> Self {
        ModFormExpr {
            group,
            weight,
            terms: vec![],
        }
    }

    pub fn expand(&self, n: &Rat) -> QSeries {
        let mut out = QSeries::zero(n.clone());
        for (c, mono) in &self.terms {
            let mut prod = QSeries::one(n.clone());
            for g in mono {
                prod = prod.mul(&g.expand(n)).truncate(n);
            }
            out = out.add(&prod.scalar_mul_rat(c));
        }
        out
    }
}

/// Monic operator D_q^(k) + sum_r f_r D_q^(k-r), with weight(f_r) = 2r.
#[derive(Debug, Clone)]
pub struct MLDEOperator {
    pub group: Group,
    /// f_1 .. f_k.
    pub coeffs: Vec<ModFormExpr>,
}

impl MLDEOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// partial_(k) f = q df/dq + k E_2 f, truncated below n.
pub fn serre_derivative(f: &QSeries, k: &Rat, n: &Rat) -> Result<QSeries, SeriesError> {
    if f.acc() < n {
        return Err(SeriesError::InsufficientAccuracy {
            acc: crate::rational::fmt_rat(f.acc()),
            requested: crate::rational::fmt_rat(n),
        });
    }
    let mut out = f.q_derivative().truncate(n);
    if !Zero::is_zero(k) {
        let e2 = crate::modforms::eisenstein(2, &forms_acc(f, n));
        out = out.add(&e2.mul(f).scalar_mul_rat(k).truncate(n));
    }
    Ok(out)
}

/// Accuracy at which weight-w forms must be expanded so that form * f is
/// exact below n even when f has negative order.
fn forms_acc(f: &QSeries, n: &Rat) -> Rat {
    match f.ord() {
        Some(v) if v < rat(0) => n - v,
        _ => n.clone(),
    }
}

/// D_q^(k) = partial_(2k-2) o ... o partial_(2) o partial_(0); D^(0) = id.
pub fn dq_iter(f: &QSeries, k: usize, n: &Rat) -> Result<QSeries, SeriesError> {
    let mut cur = f.truncate(n);
    if f.acc() < n {
        return Err(SeriesError::InsufficientAccuracy {
            acc: crate::rational::fmt_rat(f.acc()),
            requested: crate::rational::fmt_rat(n),
        });
    }
    for j in 0..k {
        cur = serre_derivative(&cur, &rat(2 * j as i64), n)?;
    }
    Ok(cur)
}

/// Applies the operator to f, returning the residual series below n.
pub fn mlde_apply(op: &MLDEOperator, f: &QSeries, n: &Rat) -> Result<QSeries, SeriesError> {
    let k = op.order();
    let mut out = dq_iter(f, k, n)?;
    let fa = forms_acc(f, n);
    for (r, fr) in op.coeffs.iter().enumerate() {
        if fr.terms.is_empty() {
            continue;
        }
        let d = dq_iter(f, k - (r + 1), n)?;
        out = out.add(&fr.expand(&fa).mul(&d).truncate(n));
    }
    Ok(out.truncate(n))
}

fn theta(r: u32, s: u32) -> FormsGenerator {
    FormsGenerator::ThetaRS(r, s)
}

fn eis(k2: u32) -> FormsGenerator {
    FormsGenerator::Eisenstein(k2)
}

/// The four built-in lowest-order operators annihilating ch[C_n].
pub fn builtin_mlde(n: i64) -> Result<MLDEOperator, MldeError> {
    let op = match n {
        2 => MLDEOperator {
            group: Group::Gamma2,
            coeffs: vec![ModFormExpr::new(
                Group::Gamma2,
                2,
                vec![
                    (ratio(-1, 8), vec![theta(1, 0)]),
                    (ratio(-1, 8), vec![theta(0, 1)]),
                ],
            )],
        },
        3 => MLDEOperator {
            group: Group::Gamma1,
            coeffs: vec![
                ModFormExpr::zero(Group::Gamma1, 2),
                ModFormExpr::new(Group::Gamma1, 4, vec![(rat(-75), vec![eis(4)])]),
            ],
        },
        4 => MLDEOperator {
            group: Group::Gamma2,
            coeffs: vec![
                ModFormExpr::new(
                    Group::Gamma2,
                    2,
                    vec![
                        (ratio(5, 16), vec![theta(1, 0)]),
                        (ratio(-5, 16), vec![theta(0, 1)]),
                    ],
                ),
                ModFormExpr::new(
                    Group::Gamma2,
                    4,
                    vec![
                        (ratio(-17, 2304), vec![theta(2, 0)]),
                        (ratio(-89, 1152), vec![theta(1, 1)]),
                        (ratio(-77, 2304), vec![theta(0, 2)]),
                    ],
                ),
                ModFormExpr::new(
                    Group::Gamma2,
                    6,
                    vec![
                        (ratio(3, 4096), vec![theta(3, 0)]),
                        (ratio(-197, 4096), vec![theta(2, 1)]),
                        (ratio(33, 4096), vec![theta(1, 2)]),
                        (ratio(33, 4096), vec![theta(0, 3)]),
                    ],
                ),
            ],
        },
        5 => MLDEOperator {
            group: Group::Gamma1,
            coeffs: vec![
                ModFormExpr::zero(Group::Gamma1, 2),
                ModFormExpr::new(Group::Gamma1, 4, vec![(rat(-161), vec![eis(4)])]),
                ModFormExpr::new(Group::Gamma1, 6, vec![(ratio(-28812, 5), vec![eis(6)])]),
                ModFormExpr::new(Group::Gamma1, 8, vec![(ratio(-8965187, 75), vec![eis(8)])]),
                ModFormExpr::new(
                    Group::Gamma1,
                    10,
                    vec![(ratio(-192787364, 125), vec![eis(10)])],
                ),
                ModFormExpr::new(
                    Group::Gamma1,
                    12,
                    vec![
                        (ratio(-5599287, 5), vec![eis(4), eis(4), eis(4)]),
                        (ratio(-48993336, 25), vec![eis(6), eis(6)]),
                    ],
                ),
            ],
        },
        other => return Err(MldeError::UnsupportedN(other)),
    };
    Ok(op)
}

/// One unknown of the search basis: a weight-2r monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElem {
    /// Index r of the operator coefficient f_r this monomial belongs to.
    pub r: usize,
    pub label: String,
    pub gens: Vec<FormsGenerator>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FindResult {
    pub basis: Vec<BasisElem>,
    pub outcome: Solution,
    pub equations: usize,
}

/// Monomial spanning set for weight 2r coefficients of the given group.
pub fn weight_basis(group: Group, r: usize) -> Vec<BasisElem> {
    let mut out = Vec::new();
    match group {
        Group::Gamma1 => {
            // E4^a E6^b with 4a + 6b = 2r, a descending
            for a in (0..=(r / 2)).rev() {
                let rem = 2 * r - 4 * a;
                if !rem.is_multiple_of(6) {
                    continue;
                }
                let b = rem / 6;
                let mut gens = Vec::new();
                let mut label = String::new();
                if a > 0 {
                    gens.extend(std::iter::repeat_n(eis(4), a));
                    label.push_str(&power_label("E4", a));
                }
                if b > 0 {
                    if !label.is_empty() {
                        label.push('*');
                    }
                    gens.extend(std::iter::repeat_n(eis(6), b));
                    label.push_str(&power_label("E6", b));
                }
                if gens.is_empty() {
                    continue;
                }
                out.push(BasisElem { r, label, gens });
            }
        }
        Group::Gamma2 => {
            for i in (0..=r).rev() {
                out.push(BasisElem {
                    r,
                    label: format!("Theta_{{{},{}}}", i, r - i),
                    gens: vec![theta(i as u32, (r - i) as u32)],
                });
            }
        }
    }
    out
}

fn power_label(base: &str, e: usize) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

/// Searches for a monic order-k MLDE annihilating f below n, with
/// coefficients in the group's monomial spanning sets. The linear system
/// equates every residual coefficient below n to zero and is solved
/// exactly; it must be overdetermined.
pub fn find_mlde(f: &QSeries, k: usize, group: Group, n: &Rat) -> Result<FindResult, MldeError> {
    assert!(k >= 1);
    let mut basis = Vec::new();
    for r in 1..=k {
        basis.extend(weight_basis(group, r));
    }
    let lhs = dq_iter(f, k, n)?;
    let fa = forms_acc(f, n);
    let mut columns: Vec<QSeries> = Vec::new();
    for be in &basis {
        let mut form = QSeries::one(fa.clone());
        for g in &be.gens {
            form = form.mul(&g.expand(&fa)).truncate(&fa);
        }
        let d = dq_iter(f, k - be.r, n)?;
        columns.push(form.mul(&d).truncate(n));
    }
    // equation per exponent in the union of supports
    let mut exps: Vec<Rat> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for s in columns.iter().chain(std::iter::once(&lhs)) {
        for (e, _) in s.iter_terms() {
            if &e < n && seen.insert(e.clone()) {
                exps.push(e);
            }
        }
    }
    exps.sort();
    assert!(
        exps.len() > basis.len(),
        "truncation order {} yields only {} equations for {} unknowns",
        crate::rational::fmt_rat(n),
        exps.len(),
        basis.len()
    );
    let rows: Vec<Vec<Rat>> = exps
        .iter()
        .map(|e| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c.coeff_at(e)).collect();
            row.push(-lhs.coeff_at(e));
            row
        })
        .collect();
    Ok(FindResult {
        outcome: solve(&rows, basis.len()),
        basis,
        equations: exps.len(),
    })
}
