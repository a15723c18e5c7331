//! Command-line front end: series expansion, identity verification, MLDE
//! verification and search, and conformal level computation, with
//! machine-readable JSON output.
//!
//! Exit codes: 0 success/equal, 1 verified-false, 2 usage or parse error,
//! 3 internal accuracy violation.

use crate::appell::{an_series, AnMethod};
use crate::cftlevels::{conformal_levels, w_charges, LevelCase};
use crate::linalg::Solution;
use crate::mlde::{builtin_mlde, find_mlde, mlde_apply, Group};
use crate::modforms::{eisenstein, eta, theta_pow4, theta_rs, triangular_delta, ThetaKind};
use crate::qser::{euler_product, product_expand, QSeries, SeriesError, Verdict};
use crate::rational::{fmt_rat, parse_rat, rat, ratio, Rat};
use crate::vachar::{
    admissible_char, affine_neg_char, bq_series, cp_char, cq_series, legendre_rhs, lemma71_rhs,
    lemma72_rhs, partition_check, sl3_char, vir_char, weyl_char, AffineFamily,
};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Exact q-series calculator for vertex algebra characters.
#[derive(Parser, Debug)]
#[command(name = "qchar", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Expand a series up to an exponent bound.
    Expand {
        /// Series spec, e.g. eta, eta:1/2, cp:3, an:thm81:2.
        spec: String,
        /// Exponent bound (exact rational).
        #[arg(long, default_value = "20")]
        order: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        quiet: bool,
    },
    /// Verify a named identity, or compare --lhs against --rhs.
    Verify {
        /// lemma71 | lemma72 | gauss | legendre | a2eta | anconsist:n | partition:J:K
        name: Option<String>,
        #[arg(long)]
        lhs: Option<String>,
        #[arg(long)]
        rhs: Option<String>,
        #[arg(long, default_value = "20")]
        order: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        quiet: bool,
    },
    /// Verify a built-in MLDE (verify:n) or search for one (find).
    Mlde {
        /// verify:n | find
        sub: String,
        #[arg(long)]
        series: Option<String>,
        /// Operator order for find.
        #[arg(long)]
        order: Option<usize>,
        /// gamma1 | gamma2 (for find).
        #[arg(long)]
        group: Option<String>,
        /// Truncation bound (exact rational).
        #[arg(long, default_value = "20")]
        trunc: String,
        #[arg(long)]
        quiet: bool,
    },
    /// Solve the conformal level equation for a built-in case.
    Levels {
        /// f4 | e8
        case: String,
        #[arg(long)]
        quiet: bool,
    },
}

/// Parsed series constructor.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSpec {
    Eta(Rat),
    Theta2P4,
    Theta3P4,
    ThetaRS(u32, u32),
    Eis(u32),
    Delta,
    Vir(i64, i64),
    AffNeg(i64, AffineFamily, i64),
    Adm(i64, i64),
    Weyl(i64),
    Sl3,
    Cp(i64),
    Bq,
    Cq,
    Legendre,
    An(AnMethod, i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecParseError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for SpecParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.msg)
    }
}

fn field_positions(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(':') {
        out.push((pos, part));
        pos += part.len() + 1;
    }
    out
}

/// Parses the textual series grammar; errors carry the byte position.
pub fn parse_series_spec(s: &str) -> Result<SeriesSpec, SpecParseError> {
    let fields = field_positions(s);
    let (_, head) = fields[0];
    let arity = |want: usize| -> Result<(), SpecParseError> {
        if fields.len() != want {
            Err(SpecParseError {
                pos: fields.get(want).map(|f| f.0).unwrap_or(s.len()),
                msg: format!("`{head}` takes {} parameter(s)", want - 1),
            })
        } else {
            Ok(())
        }
    };
    let int_at = |idx: usize| -> Result<i64, SpecParseError> {
        let (pos, f) = fields[idx];
        f.parse::<i64>().map_err(|_| SpecParseError {
            pos,
            msg: format!("expected integer, got `{f}`"),
        })
    };
    match head {
        "eta" => {
            if fields.len() == 1 {
                return Ok(SeriesSpec::Eta(rat(1)));
            }
            arity(2)?;
            let (pos, f) = fields[1];
            let r = parse_rat(f).ok_or(SpecParseError {
                pos,
                msg: format!("expected rational, got `{f}`"),
            })?;
            if r <= rat(0) {
                return Err(SpecParseError {
                    pos,
                    msg: "eta scale must be positive".into(),
                });
            }
            Ok(SeriesSpec::Eta(r))
        }
        "theta2p4" => {
            arity(1)?;
            Ok(SeriesSpec::Theta2P4)
        }
        "theta3p4" => {
            arity(1)?;
            Ok(SeriesSpec::Theta3P4)
        }
        "theta_rs" => {
            arity(3)?;
            let r = int_at(1)?;
            let s_ = int_at(2)?;
            if r < 0 || s_ < 0 {
                return Err(SpecParseError {
                    pos: fields[1].0,
                    msg: "theta_rs indices must be nonnegative".into(),
                });
            }
            Ok(SeriesSpec::ThetaRS(r as u32, s_ as u32))
        }
        "eis" => {
            arity(2)?;
            let k = int_at(1)?;
            if k < 2 || k % 2 != 0 {
                return Err(SpecParseError {
                    pos: fields[1].0,
                    msg: "Eisenstein index must be even and >= 2".into(),
                });
            }
            Ok(SeriesSpec::Eis(k as u32))
        }
        "delta" => {
            arity(1)?;
            Ok(SeriesSpec::Delta)
        }
        "vir" => {
            arity(3)?;
            let p = int_at(1)?;
            let i = int_at(2)?;
            if p < 2 || i < 1 {
                return Err(SpecParseError {
                    pos: fields[1].0,
                    msg: "vir requires p >= 2 and i >= 1".into(),
                });
            }
            Ok(SeriesSpec::Vir(p, i))
        }
        "affneg" => {
            arity(4)?;
            let p = int_at(1)?;
            if p != 3 && p != 4 {
                return Err(SpecParseError {
                    pos: fields[1].0,
                    msg: "affneg supports p in {3, 4}".into(),
                });
            }
            let fam = match fields[2].1 {
                "a" | "A" => AffineFamily::A,
                "b" | "B" => AffineFamily::B,
                other => {
                    return Err(SpecParseError {
                        pos: fields[2].0,
                        msg: format!("expected family a or b, got `{other}`"),
                    })
                }
            };
            let l = int_at(3)?;
            if l < 0 {
                return Err(SpecParseError {
                    pos: fields[3].0,
                    msg: "l must be nonnegative".into(),
                });
            }
            Ok(SeriesSpec::AffNeg(p, fam, l))
        }
        "adm" => {
            arity(3)?;
            let n = int_at(1)?;
            let l = int_at(2)?;
            if l < 0 {
                return Err(SpecParseError {
                    pos: fields[2].0,
                    msg: "l must be nonnegative".into(),
                });
            }
            Ok(SeriesSpec::Adm(n, l))
        }
        "weyl" => {
            arity(2)?;
            let m = int_at(1)?;
            if m < 1 {
                return Err(SpecParseError {
                    pos: fields[1].0,
                    msg: "weyl rank must be >= 1".into(),
                });
            }
            Ok(SeriesSpec::Weyl(m))
        }
        "sl3" => {
            arity(1)?;
            Ok(SeriesSpec::Sl3)
        }
        "cp" => {
            arity(2)?;
            let n = int_at(1)?;
            if n < 2 {
                return Err(SpecParseError {
                    pos: fields[1].0,
                    msg: "cp requires n >= 2".into(),
                });
            }
            Ok(SeriesSpec::Cp(n))
        }
        "bq" => {
            arity(1)?;
            Ok(SeriesSpec::Bq)
        }
        "cq" => {
            arity(1)?;
            Ok(SeriesSpec::Cq)
        }
        "legendre" => {
            arity(1)?;
            Ok(SeriesSpec::Legendre)
        }
        "an" => {
            arity(3)?;
            let method: AnMethod = fields[1].1.parse().map_err(|e| SpecParseError {
                pos: fields[1].0,
                msg: e,
            })?;
            let n = int_at(2)?;
            if n < 2 {
                return Err(SpecParseError {
                    pos: fields[2].0,
                    msg: "an requires n >= 2".into(),
                });
            }
            Ok(SeriesSpec::An(method, n))
        }
        other => Err(SpecParseError {
            pos: 0,
            msg: format!("unknown series `{other}`"),
        }),
    }
}

impl SeriesSpec {
    /// Expands the series with accuracy n.
    pub fn build(&self, n: &Rat) -> Result<QSeries, String> {
        Ok(match self {
            SeriesSpec::Eta(s) => eta(s, n),
            SeriesSpec::Theta2P4 => theta_pow4(ThetaKind::Theta2, n),
            SeriesSpec::Theta3P4 => theta_pow4(ThetaKind::Theta3, n),
            SeriesSpec::ThetaRS(r, s) => theta_rs(*r, *s, n),
            SeriesSpec::Eis(k) => eisenstein(*k, n),
            SeriesSpec::Delta => triangular_delta(n),
            SeriesSpec::Vir(p, i) => vir_char(*p, *i, n),
            SeriesSpec::AffNeg(p, fam, l) => {
                affine_neg_char(*p, *fam, *l, n).map_err(|e| e.to_string())?
            }
            SeriesSpec::Adm(np, l) => admissible_char(*np, *l, n),
            SeriesSpec::Weyl(m) => weyl_char(*m, n),
            SeriesSpec::Sl3 => sl3_char(n),
            SeriesSpec::Cp(np) => cp_char(*np, n),
            SeriesSpec::Bq => bq_series(n),
            SeriesSpec::Cq => cq_series(n),
            SeriesSpec::Legendre => legendre_rhs(n),
            SeriesSpec::An(m, np) => an_series(*np, *m, n).map_err(|e| e.to_string())?,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ExpandJson {
    pub object: String,
    #[serde(rename = "L")]
    pub l: u64,
    pub acc: String,
    pub terms: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct MismatchJson {
    pub exp: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct VerifyJson {
    pub name: String,
    pub order: String,
    pub equal: bool,
    pub first_mismatch: Option<MismatchJson>,
}

/// Renders a series to the expand JSON document.
pub fn expand_json(object: &str, s: &QSeries) -> ExpandJson {
    ExpandJson {
        object: object.to_string(),
        l: s.scale(),
        acc: fmt_rat(s.acc()),
        terms: s
            .iter_terms()
            .map(|(e, c)| (fmt_rat(&e), fmt_rat(c)))
            .collect(),
    }
}

fn render_term(e: &Rat, c: &Rat) -> String {
    use num::{One, Zero};
    if Zero::is_zero(e) {
        return fmt_rat(c);
    }
    let q = if e.denom().is_one() && !num::Signed::is_negative(e) {
        format!("q^{}", fmt_rat(e))
    } else {
        format!("q^({})", fmt_rat(e))
    };
    if One::is_one(c) {
        q
    } else {
        format!("{}*{}", fmt_rat(c), q)
    }
}

/// Plain-text rendering: terms ascending, joined with ` + `, plus the
/// O(q^N) tail marker.
pub fn render_series(s: &QSeries) -> String {
    let mut parts: Vec<String> = s.iter_terms().map(|(e, c)| render_term(&e, c)).collect();
    parts.push(format!("O(q^({}))", fmt_rat(s.acc())));
    parts.join(" + ")
}

fn usage(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn order_of(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("invalid rational order `{s}`"))
}

enum VerifyOutcome {
    Equal,
    Mismatch { exp: Rat, lhs: Rat, rhs: Rat },
    Report { ok: bool, detail: String },
}

fn compare_outcome(lhs: &QSeries, rhs: &QSeries, n: &Rat) -> Result<VerifyOutcome, SeriesError> {
    Ok(match lhs.compare(rhs, n)? {
        Verdict::Equal => VerifyOutcome::Equal,
        Verdict::FirstMismatch { exp, lhs, rhs } => VerifyOutcome::Mismatch { exp, lhs, rhs },
    })
}

fn margin(n: &Rat) -> Rat {
    n + rat(2)
}

fn named_verification(name: &str, n: &Rat) -> Result<Result<VerifyOutcome, SeriesError>, String> {
    let m = margin(n);
    let out = match name {
        "lemma71" => compare_outcome(&weyl_char(2, &m), &lemma71_rhs(&m), n),
        "lemma72" => compare_outcome(&sl3_char(&m), &lemma72_rhs(&m), n),
        "gauss" => {
            let lhs = triangular_delta(&m).mul(&euler_product(&m));
            let rhs: QSeries = product_expand(&rat(2), &rat(2), 1, &m)
                .map_err(|e| e.to_string())?
                .pow(2)
                .map_err(|e| e.to_string())?;
            compare_outcome(&lhs, &rhs, n)
        }
        "legendre" => {
            let lhs = triangular_delta(&m).pow(4).map_err(|e| e.to_string())?;
            compare_outcome(&lhs.truncate(&m), &legendre_rhs(&m), n)
        }
        "a2eta" => {
            let lhs = an_series(2, AnMethod::Thm81, &m).map_err(|e| e.to_string())?;
            let e1 = eta(&rat(1), &(&m + rat(2)))
                .pow(12)
                .map_err(|e| e.to_string())?;
            let eh = eta(&ratio(1, 2), &(&m + rat(2)))
                .pow(-6)
                .map_err(|e| e.to_string())?;
            let rhs = e1.mul(&eh).truncate(&m);
            compare_outcome(&lhs, &rhs, n)
        }
        other => {
            if let Some(rest) = other.strip_prefix("anconsist:") {
                let np: i64 = rest
                    .parse()
                    .map_err(|_| format!("invalid anconsist parameter `{rest}`"))?;
                if np < 2 {
                    return Err("anconsist requires n >= 2".into());
                }
                return Ok(an_consistency(np, n));
            }
            if let Some(rest) = other.strip_prefix("partition:") {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 2 {
                    return Err("partition requires J:K".into());
                }
                let j: i64 = parts[0]
                    .parse()
                    .map_err(|_| format!("invalid J `{}`", parts[0]))?;
                let k: i64 = parts[1]
                    .parse()
                    .map_err(|_| format!("invalid K `{}`", parts[1]))?;
                let report = partition_check(j, k);
                let detail = if report.ok() {
                    format!("{} pairs checked, all in exactly one class", report.checked)
                } else {
                    format!(
                        "{} pairs checked, {} violations: {:?}",
                        report.checked,
                        report.violations.len(),
                        report.violations.iter().take(5).collect::<Vec<_>>()
                    )
                };
                return Ok(Ok(VerifyOutcome::Report {
                    ok: report.ok(),
                    detail,
                }));
            }
            return Err(format!("unknown verification `{other}`"));
        }
    };
    Ok(out)
}

fn an_consistency(np: i64, n: &Rat) -> Result<VerifyOutcome, SeriesError> {
    let methods = [
        AnMethod::Thm81,
        AnMethod::Indef1,
        AnMethod::Indef2,
        AnMethod::Closed,
        AnMethod::Appell,
    ];
    let mut series = Vec::new();
    for m in methods {
        series.push(an_series(np, m, n).map_err(|e| match e {
            crate::appell::AppellError::Series(s) => s,
            other => panic!("A_n construction failed: {other}"),
        })?);
    }
    for i in 0..series.len() {
        for j in i + 1..series.len() {
            if let Verdict::FirstMismatch { exp, lhs, rhs } = series[i].compare(&series[j], n)? {
                return Ok(VerifyOutcome::Mismatch { exp, lhs, rhs });
            }
        }
    }
    Ok(VerifyOutcome::Equal)
}

fn emit_verify(name: &str, n: &Rat, outcome: &VerifyOutcome, json: bool, quiet: bool) -> i32 {
    let (equal, mismatch, detail) = match outcome {
        VerifyOutcome::Equal => (true, None, None),
        VerifyOutcome::Mismatch { exp, lhs, rhs } => (
            false,
            Some(MismatchJson {
                exp: fmt_rat(exp),
                lhs: fmt_rat(lhs),
                rhs: fmt_rat(rhs),
            }),
            None,
        ),
        VerifyOutcome::Report { ok, detail } => (*ok, None, Some(detail.clone())),
    };
    if json {
        let doc = VerifyJson {
            name: name.to_string(),
            order: fmt_rat(n),
            equal,
            first_mismatch: mismatch,
        };
        println!("{}", serde_json::to_string(&doc).expect("serialize"));
    } else if !quiet {
        if equal {
            if let Some(d) = detail {
                println!("{name}: OK");
                println!("{d}");
            } else {
                println!("{name}: EQUAL up to order {}", fmt_rat(n));
            }
        } else if let Some(m) = &mismatch {
            println!(
                "{name}: MISMATCH at q^({}): lhs = {}, rhs = {}",
                m.exp, m.lhs, m.rhs
            );
        } else {
            println!("{name}: FAILED");
            if let Some(d) = detail {
                println!("{d}");
            }
        }
    }
    if equal {
        0
    } else {
        1
    }
}

fn parse_group(s: &str) -> Result<Group, String> {
    match s {
        "gamma1" => Ok(Group::Gamma1),
        "gamma2" => Ok(Group::Gamma2),
        other => Err(format!(
            "unknown group `{other}` (expected gamma1 or gamma2)"
        )),
    }
}

fn describe_solution(res: &crate::mlde::FindResult) -> String {
    match &res.outcome {
        Solution::Unique(v) => {
            let parts: Vec<String> = res
                .basis
                .iter()
                .zip(v)
                .map(|(b, c)| format!("{} = {}", b.label, fmt_rat(c)))
                .collect();
            format!("Unique: {}", parts.join(", "))
        }
        Solution::Inconsistent => "Inconsistent".into(),
        Solution::Ambiguous { dim } => format!("Ambiguous(dim={dim})"),
    }
}

fn cmd_mlde(
    sub: &str,
    series: Option<&str>,
    order: Option<usize>,
    group: Option<&str>,
    trunc: &str,
    quiet: bool,
) -> i32 {
    let n = match order_of(trunc) {
        Ok(v) => v,
        Err(e) => return usage(&e),
    };
    if let Some(rest) = sub.strip_prefix("verify:") {
        let np: i64 = match rest.parse() {
            Ok(v) => v,
            Err(_) => return usage(&format!("invalid mlde verify parameter `{rest}`")),
        };
        let op = match builtin_mlde(np) {
            Ok(op) => op,
            Err(e) => return usage(&e.to_string()),
        };
        let f = cp_char(np, &n);
        let res = match mlde_apply(&op, &f, &n) {
            Ok(r) => r,
            Err(SeriesError::InsufficientAccuracy { .. }) => return 3,
            Err(e) => return usage(&e.to_string()),
        };
        let zero = res.is_zero_below(&n).unwrap_or(false);
        let rediscovery = find_mlde(&f, op.order(), op.group, &n);
        if zero {
            if !quiet {
                println!(
                    "mlde verify:{np}: residual vanishes below order {}",
                    fmt_rat(&n)
                );
                if let Ok(r) = &rediscovery {
                    println!("coefficients confirmed: {}", describe_solution(r));
                }
            }
            0
        } else {
            if !quiet {
                let e = res.ord().expect("nonzero residual");
                println!(
                    "mlde verify:{np}: residual head {}*q^({})",
                    fmt_rat(&res.coeff_at(&e)),
                    fmt_rat(&e)
                );
                match &rediscovery {
                    Ok(r) => println!("re-derivation at the same order: {}", describe_solution(r)),
                    Err(e) => println!("re-derivation failed: {e}"),
                }
            }
            1
        }
    } else if sub == "find" {
        let (Some(series), Some(k), Some(group)) = (series, order, group) else {
            return usage("mlde find requires --series, --order and --group");
        };
        let spec = match parse_series_spec(series) {
            Ok(s) => s,
            Err(e) => return usage(&format!("series spec {e}")),
        };
        let g = match parse_group(group) {
            Ok(g) => g,
            Err(e) => return usage(&e),
        };
        if k < 1 {
            return usage("operator order must be >= 1");
        }
        let f = match spec.build(&n) {
            Ok(f) => f,
            Err(e) => return usage(&e),
        };
        match find_mlde(&f, k, g, &n) {
            Ok(r) => {
                if !quiet {
                    println!("{}", describe_solution(&r));
                }
                0
            }
            Err(crate::mlde::MldeError::Series(SeriesError::InsufficientAccuracy { .. })) => 3,
            Err(e) => usage(&e.to_string()),
        }
    } else {
        usage(&format!("unknown mlde subcommand `{sub}`"))
    }
}

fn cmd_levels(case: &str, quiet: bool) -> i32 {
    let lc = match case {
        "f4" => LevelCase::f4(),
        "e8" => LevelCase::e8(),
        other => return usage(&format!("unknown level case `{other}` (expected f4 or e8)")),
    };
    let report = conformal_levels(&lc);
    for r in &report.roots {
        let (w, s) = w_charges(&lc, r).expect("roots avoid poles");
        assert_eq!(w, s, "root fails the defining equation");
    }
    if !quiet {
        let roots: Vec<String> = report.roots.iter().map(fmt_rat).collect();
        println!("{}: conformal levels: {}", lc.name, roots.join(", "));
        println!(
            "cleared polynomial degree {}; {}",
            report.degree,
            if report.complete() {
                "no residual factor".to_string()
            } else {
                format!("residual factor of degree {}", report.residual.len() - 1)
            }
        );
        println!("c_W(k) = c_sug(k) re-checked at every root");
    }
    0
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            if e.use_stderr() {
                e.print().expect("stderr");
                return 2;
            }
            e.print().expect("stdout");
            return 0;
        }
    };
    match cli.cmd {
        Cmd::Expand {
            spec,
            order,
            json,
            quiet,
        } => {
            let n = match order_of(&order) {
                Ok(v) => v,
                Err(e) => return usage(&e),
            };
            let parsed = match parse_series_spec(&spec) {
                Ok(p) => p,
                Err(e) => return usage(&format!("series spec {e}")),
            };
            let s = match parsed.build(&n) {
                Ok(s) => s,
                Err(e) => return usage(&e),
            };
            if json {
                let doc = expand_json(&spec, &s);
                println!("{}", serde_json::to_string(&doc).expect("serialize"));
            } else if !quiet {
                println!("{}", render_series(&s));
            }
            0
        }
        Cmd::Verify {
            name,
            lhs,
            rhs,
            order,
            json,
            quiet,
        } => {
            let n = match order_of(&order) {
                Ok(v) => v,
                Err(e) => return usage(&e),
            };
            let (label, outcome) = match (&name, &lhs, &rhs) {
                (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                    return usage("give either a named identity or --lhs/--rhs, not both")
                }
                (Some(nm), None, None) => match named_verification(nm, &n) {
                    Ok(Ok(o)) => (nm.clone(), o),
                    Ok(Err(SeriesError::InsufficientAccuracy { .. })) => return 3,
                    Ok(Err(e)) => return usage(&e.to_string()),
                    Err(e) => return usage(&e),
                },
                (None, Some(l), Some(r)) => {
                    let ls = match parse_series_spec(l) {
                        Ok(s) => s,
                        Err(e) => return usage(&format!("--lhs spec {e}")),
                    };
                    let rs = match parse_series_spec(r) {
                        Ok(s) => s,
                        Err(e) => return usage(&format!("--rhs spec {e}")),
                    };
                    let lb = match ls.build(&n) {
                        Ok(s) => s,
                        Err(e) => return usage(&e),
                    };
                    let rb = match rs.build(&n) {
                        Ok(s) => s,
                        Err(e) => return usage(&e),
                    };
                    match compare_outcome(&lb, &rb, &n) {
                        Ok(o) => (format!("{l} == {r}"), o),
                        Err(SeriesError::InsufficientAccuracy { .. }) => return 3,
                        Err(e) => return usage(&e.to_string()),
                    }
                }
                _ => return usage("verify needs a named identity or both --lhs and --rhs"),
            };
            emit_verify(&label, &n, &outcome, json, quiet)
        }
        Cmd::Mlde {
            sub,
            series,
            order,
            group,
            trunc,
            quiet,
        } => cmd_mlde(
            &sub,
            series.as_deref(),
            order,
            group.as_deref(),
            &trunc,
            quiet,
        ),
        Cmd::Levels { case, quiet } => cmd_levels(&case, quiet),
    }
}
