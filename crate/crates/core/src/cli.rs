//! Command-line front end: `profile`, `class-numbers`, `verify`, `growth`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 level cap hit.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;

use crate::chars::{char_product_identity_check, CharGroup, CharSubset};
use crate::classnum::{verify_lemma_2_1_in, verify_prop_2_2_in, ClassNumberOptions};
use crate::cyclo::DEFAULT_LEVEL_CAP;
use crate::error::{Error, Result};
use crate::exactnum::{check_odd_prime, checked_pow, is_prime, padic_valuation_int, ratio};
use crate::growth::{self, level_of, verify_theorem_main, GrowthFit, Truncation};
use crate::multorder::{mult_order, order_profile, verify_lemma31, OrderProfile};
use crate::prodval::{self, d_q, d_q_at, Regime};
use crate::report::{Check, CheckKind, Report, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Worker count for the parallel reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workers {
    Auto,
    Count(usize),
}

impl FromStr for Workers {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Workers, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Workers::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected a positive worker count or `auto`, got `{s}`")),
            Ok(n) => Ok(Workers::Count(n)),
        }
    }
}

impl fmt::Display for Workers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workers::Auto => f.write_str("auto"),
            Workers::Count(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "refclass", version, about = "Exact minus class numbers of p-power cyclotomic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Order-lifting data e, m, f_n and d_q.
    Profile(RunArgs),
    /// h_n^- and h_{n,2}^- with their p-adic valuations.
    ClassNumbers(RunArgs),
    /// Run every exact identity check over the grid n = 0..=n-max.
    Verify(RunArgs),
    /// Valuation table with the linear-fit summary.
    Growth(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Args)]
pub struct RunArgs {
    /// Odd prime p.
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(long = "n-max", default_value_t = 0)]
    pub n_max: u32,
    /// Prime q different from p.
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    pub q: i64,
    /// Largest cyclotomic level phi(p^(n+1)) that will be computed.
    #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
    pub cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads, or `auto`.
    #[arg(long, default_value = "auto")]
    pub workers: Workers,
    /// Multiply Bernoulli numbers one Galois orbit at a time.
    #[arg(long)]
    pub orbit_norms: bool,
    /// First n of the linear fit (default max(1, m)).
    #[arg(long)]
    pub fit_start: Option<u32>,
}

/// Validated run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u64,
    pub n_max: u32,
    pub q: u64,
    pub cap: u64,
    pub format: Format,
    pub workers: Workers,
    pub orbit_norms: bool,
    pub fit_start: Option<u32>,
}

impl RunConfig {
    pub fn new(p: u64, n_max: u32) -> RunConfig {
        RunConfig {
            p,
            n_max,
            q: 2,
            cap: DEFAULT_LEVEL_CAP,
            format: Format::Json,
            workers: Workers::Auto,
            orbit_norms: false,
            fit_start: None,
        }
    }

    fn from_args(a: &RunArgs) -> Result<RunConfig> {
        let p = check_odd_prime(a.p)?;
        if a.q < 2 || !is_prime(a.q as u64) {
            return Err(Error::NotPrime(a.q));
        }
        let q = a.q as u64;
        if q == p {
            return Err(Error::SamePrime { p, q });
        }
        Ok(RunConfig {
            p,
            n_max: a.n_max,
            q,
            cap: a.cap,
            format: a.format,
            workers: a.workers,
            orbit_norms: a.orbit_norms,
            fit_start: a.fit_start,
        })
    }

    fn options(&self) -> ClassNumberOptions {
        ClassNumberOptions { cap: self.cap, orbit_norms: self.orbit_norms }
    }

    /// Emitted configuration; the worker count is left out so output does not
    /// depend on it.
    fn row(&self, command: &str) -> Row {
        Row::new()
            .with("command", command)
            .with("p", self.p)
            .with("q", self.q)
            .with("n_max", self.n_max)
            .with("cap", self.cap)
            .with("format", match self.format {
                Format::Json => "json",
                Format::Csv => "csv",
            })
            .with("orbit_norms", self.orbit_norms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    VerificationFailure = 1,
    Usage = 2,
    ResourceCap = 3,
}

/// A finished run: exit status plus what goes to stdout / stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn code(&self) -> i32 {
        self.status as i32
    }
}

fn status_of(report: &Report) -> ExitStatus {
    if report.checks.iter().any(Check::failed_exact) {
        ExitStatus::VerificationFailure
    } else if report.truncated.is_some() {
        ExitStatus::ResourceCap
    } else {
        ExitStatus::Success
    }
}

fn big(x: &BigInt) -> String {
    x.to_string()
}

fn truncation_row(t: &Truncation) -> Row {
    Row::new()
        .with("n", t.n)
        .with("level", t.level)
        .with("cap", t.cap)
        .with("reason", format!("level {} exceeds cap {}", t.level, t.cap))
}

/// Values of `n` in `0..=n_max` whose level fits the cap, and the first one that does not.
fn levels_within_cap(cfg: &RunConfig) -> (Vec<u32>, Option<Truncation>) {
    let mut ns = Vec::new();
    for n in 0..=cfg.n_max {
        let level = level_of(cfg.p, n).unwrap_or(u64::MAX);
        if level > cfg.cap {
            return (ns, Some(Truncation { n, level, cap: cfg.cap }));
        }
        ns.push(n);
    }
    (ns, None)
}

fn params(p: u64, n: u32) -> Row {
    Row::new().with("p", p).with("n", n)
}

fn params_q(p: u64, n: u32, q: u64) -> Row {
    params(p, n).with("q", q)
}

fn lemma31_checks(profile: &OrderProfile, ns: impl IntoIterator<Item = u32>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in ns {
        let r = verify_lemma31(profile, n)?;
        let params = params_q(profile.p, n, profile.q).with("m", profile.m).with("f_n", r.f_n);
        out.push(
            Check::exact("lemma_3_1", params, r.passed()).sides(
                format!("f_n={} v(1-q^f_n)={} half={:?}", r.f_n, r.val_one_minus, r.half_valuations),
                format!("f_n={} v=n+1={}", r.f_n_bruteforce, n + 1),
            ),
        );
    }
    Ok(out)
}

/// `profile`: e, m, f_n per n, d_q and delta.
pub fn profile_report(cfg: &RunConfig) -> Result<Report> {
    let profile = order_profile(cfg.q, cfg.p)?;
    let d = d_q(&profile)?;
    let delta = growth::delta(cfg.p)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for n in 0..=cfg.n_max {
        let modulus = checked_pow(cfg.p, n + 1).ok();
        let closed = profile.f_n(n).ok();
        let brute = match modulus {
            Some(m) if m <= 1 << 40 => Some(mult_order(cfg.q as i64, cfg.p, n + 1)?),
            _ => None,
        };
        let regime = if n + 1 >= profile.m { "closed_form" } else { "brute_force_only" };
        rows.push(
            Row::new()
                .with("n", n)
                .with("modulus", modulus.map(|m| m.to_string()))
                .with("e", profile.e)
                .with("m", profile.m)
                .with("f_n", closed.or(brute))
                .with("f_n_bruteforce", brute)
                .with("regime", regime),
        );
        if let (Some(c), Some(b)) = (closed, brute) {
            checks.push(
                Check::exact("f_n_closed_form", params_q(cfg.p, n, cfg.q), c == b).sides(c, b),
            );
        }
        if let Some(f) = closed.or(brute) {
            let pass = f % 2 == profile.e % 2;
            checks.push(Check::exact("f_n_parity", params_q(cfg.p, n, cfg.q), pass).sides(f, profile.e));
        }
    }
    let lemma_ns = (profile.m + 1)..=cfg.n_max;
    checks.extend(lemma31_checks(&profile, lemma_ns.filter(|&n| checked_pow(cfg.p, n + 1).is_ok()))?);
    let summary = Row::new()
        .with("q", cfg.q)
        .with("p", cfg.p)
        .with("e", profile.e)
        .with("m", profile.m)
        .with("d_q", d)
        .with("delta", delta);
    Ok(Report {
        config: cfg.row("profile"),
        summary: Some(summary),
        rows,
        fit: None,
        checks,
        truncated: None,
    })
}

/// `class-numbers`: both routes to `h_{n,2}^-`, compared per row.
pub fn class_numbers_report(cfg: &RunConfig) -> Result<Report> {
    let (ns, truncated) = levels_within_cap(cfg);
    let opts = cfg.options();
    let p = cfg.p as i64;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for n in ns {
        let group = CharGroup::new(cfg.p, n, cfg.cap)?;
        let r = verify_prop_2_2_in(&group, &opts)?;
        let v = padic_valuation_int(&r.h_minus, p)?;
        let v2 = padic_valuation_int(&r.direct, p)?;
        rows.push(
            Row::new()
                .with("n", n)
                .with("level", group.order())
                .with("h_minus", big(&r.h_minus))
                .with("h_minus_refined", big(&r.direct))
                .with("h_minus_refined_via_relation", r.via_relation.to_string())
                .with("ord_p_h_minus", v.finite()?)
                .with("ord_p_h_minus_refined", v2.finite()?)
                .with("routes_agree", r.holds()),
        );
        checks.push(Check::exact("prop_2_2", params(cfg.p, n), r.holds()).sides(&r.direct, &r.via_relation));
        checks.push(positivity_check(cfg.p, n, &r.direct));
    }
    Ok(Report {
        config: cfg.row("class-numbers"),
        summary: None,
        rows,
        fit: None,
        checks,
        truncated: truncated.as_ref().map(truncation_row),
    })
}

fn positivity_check(p: u64, n: u32, h2: &BigInt) -> Check {
    let mut c = Check::new("h_minus_refined_positive", params(p, n), h2.is_positive(), CheckKind::Reported);
    if !c.pass {
        c.detail = Some(format!("h_minus_refined = {h2}"));
    }
    c
}

fn fit_row(
    fit_v2: Option<GrowthFit>,
    fit_v: Option<GrowthFit>,
    fit_start: u32,
    delta: u64,
    consistent: Option<bool>,
) -> Row {
    let base = Row::new().with("empirical", true).with("fit_start", fit_start).with("delta", delta);
    match fit_v2 {
        None => base.with("status", "insufficient"),
        Some(f) => base
            .with("status", "ok")
            .with("lambda_prime", f.lambda_prime)
            .with("c_prime", f.c_prime)
            .with("exact", f.exact)
            .with("lambda", fit_v.map(|f| f.lambda_prime))
            .with("c", fit_v.map(|f| f.c_prime))
            .with("v_exact", fit_v.map(|f| f.exact))
            .with("shift_consistent", consistent),
    }
}

/// `growth`: valuation rows, gap law per row and the empirical fit.
pub fn growth_report(cfg: &RunConfig) -> Result<Report> {
    let rep = verify_theorem_main(cfg.p, cfg.n_max, cfg.fit_start, &cfg.options())?;
    let t = &rep.table;
    let rows = t
        .records
        .iter()
        .map(|r| {
            Row::new()
                .with("n", r.n)
                .with("h_minus", big(&r.h_minus))
                .with("h_minus_refined", big(&r.h_minus_refined))
                .with("v", r.v)
                .with("v2", r.v2)
                .with("gap", r.v2 - r.v)
                .with("predicted_gap", r.predicted_gap)
                .with("gap_ok", r.gap_ok)
                .with("in_regime", r.in_regime)
        })
        .collect();
    let mut checks: Vec<Check> = t
        .records
        .iter()
        .filter(|r| r.in_regime)
        .map(|r| {
            Check::exact("gap_law", params(r.p, r.n).with("delta", t.delta), r.gap_ok)
                .sides(r.v2 - r.v, r.predicted_gap)
        })
        .collect();
    checks.push(linear_fit_check(&rep));
    Ok(Report {
        config: cfg.row("growth"),
        summary: Some(Row::new().with("delta", t.delta).with("m", t.m)),
        rows,
        fit: Some(fit_row(rep.fit_v2, rep.fit_v, rep.fit_start, t.delta, rep.shifted_fit_consistent())),
        checks,
        truncated: t.truncated.as_ref().map(truncation_row),
    })
}

fn linear_fit_check(rep: &growth::TheoremReport) -> Check {
    let consistent = rep.shifted_fit_consistent();
    let mut c = Check::new(
        "shifted_linear_fit",
        Row::new().with("p", rep.table.p).with("fit_start", rep.fit_start),
        consistent.unwrap_or(false),
        CheckKind::Empirical,
    );
    c.detail = Some(match consistent {
        None => "window too short or v not linear on it; asymptotic claim not certifiable".into(),
        Some(_) => "finite-window evidence only".into(),
    });
    c
}

/// Units used for the character-product identity: all of them for small
/// groups, otherwise a fixed sample.
fn identity_units(group: &CharGroup, q: u64) -> Vec<i64> {
    if group.order() <= 64 {
        return group.units().collect();
    }
    let g = group.generator() as i64;
    let mut out: Vec<i64> = group.units().take(6).collect();
    out.extend([group.modulus() as i64 - 1, q as i64, g, g * g % group.modulus() as i64]);
    out.sort_unstable();
    out.dedup();
    out
}

/// `verify`: every exact identity over the grid.
pub fn verify_report(cfg: &RunConfig) -> Result<Report> {
    let (ns, truncated) = levels_within_cap(cfg);
    let opts = cfg.options();
    let mut qs = vec![2, cfg.q];
    qs.dedup();
    let t_points = [ratio(1, 3), ratio(2, 1), ratio(-5, 7)];

    let mut rows = Vec::new();
    let mut checks = Vec::new();

    for &q in &qs {
        let profile = order_profile(q, cfg.p)?;
        let d = d_q(&profile)?;
        for n in profile.m..profile.m + 3 {
            let dn = d_q_at(&profile, n)?;
            checks.push(Check::exact("d_q_independent_of_n", params_q(cfg.p, n, q), dn == d).sides(dn, d));
        }
        let mut lemma_ns: Vec<u32> = vec![profile.m + 1, profile.m + 2];
        lemma_ns.extend(((profile.m + 1)..=cfg.n_max).filter(|&n| checked_pow(cfg.p, n + 1).is_ok()));
        lemma_ns.sort_unstable();
        lemma_ns.dedup();
        checks.extend(lemma31_checks(&profile, lemma_ns)?);
    }

    for &n in &ns {
        let group = CharGroup::new(cfg.p, n, cfg.cap)?;
        let mut row_ok = true;
        let mut push = |c: Check, checks: &mut Vec<Check>| {
            row_ok &= !c.failed_exact();
            checks.push(c);
        };

        let l = verify_lemma_2_1_in(&group)?;
        push(
            Check::exact("lemma_2_1", params(cfg.p, n), l.holds()).sides(&l.eulerian_product, &l.rhs),
            &mut checks,
        );
        let r = verify_prop_2_2_in(&group, &opts)?;
        push(
            Check::exact("prop_2_2", params(cfg.p, n), r.holds()).sides(&r.direct, &r.via_relation),
            &mut checks,
        );
        push(positivity_check(cfg.p, n, &r.direct), &mut checks);

        for &q in &qs {
            let pr = prodval::product_result_in(&group, q)?;
            let regime = match pr.regime {
                Regime::ClosedFormValid => "closed_form",
                Regime::BruteForceOnly => "brute_force_only",
            };
            let closed = pr.closed.as_ref().map(big).unwrap_or_else(|| "n/a".into());
            push(
                Check::exact(
                    "prop_3_2_closed_form",
                    params_q(cfg.p, n, q).with("regime", regime).with("d_q", pr.d_q),
                    pr.consistent(),
                )
                .sides(format!("{} (v={})", pr.value, pr.valuation), closed),
                &mut checks,
            );
            let qr = prodval::quotient_check_in(&group, q)?;
            push(
                Check::exact("quotient_full_over_even", params_q(cfg.p, n, q), qr.holds())
                    .sides(format!("{}/{}", qr.full, qr.even), &qr.odd),
                &mut checks,
            );
        }

        for subset in [CharSubset::All, CharSubset::Even] {
            let mut all = true;
            let mut first_failure = None;
            let units = identity_units(&group, cfg.q);
            for &a in &units {
                for t in &t_points {
                    let rep = char_product_identity_check(&group, a, t, subset)?;
                    if !rep.holds() && first_failure.is_none() {
                        first_failure = Some(format!("a={a} T={t}: lhs = {}, rhs = {}", rep.lhs, rep.rhs));
                    }
                    all &= rep.holds();
                }
            }
            let name = match subset {
                CharSubset::All => "char_identity_full",
                CharSubset::Even => "char_identity_even",
            };
            let mut c = Check::exact(name, params(cfg.p, n).with("units", units.len() as u64), all);
            c.detail = first_failure;
            push(c, &mut checks);
        }
        rows.push(Row::new().with("n", n).with("level", group.order()).with("all_exact_pass", row_ok));
    }

    let rep = verify_theorem_main(cfg.p, *ns.last().unwrap_or(&0), cfg.fit_start, &opts)?;
    let t = &rep.table;
    if !ns.is_empty() {
        for r in t.records.iter().filter(|r| r.in_regime) {
            checks.push(
                Check::exact("gap_law", params(r.p, r.n).with("delta", t.delta), r.gap_ok)
                    .sides(r.v2 - r.v, r.predicted_gap),
            );
        }
    }
    checks.push(linear_fit_check(&rep));

    Ok(Report {
        config: cfg.row("verify"),
        summary: Some(Row::new().with("delta", t.delta).with("m", t.m)),
        rows,
        fit: Some(fit_row(rep.fit_v2, rep.fit_v, rep.fit_start, t.delta, rep.shifted_fit_consistent())),
        checks,
        truncated: truncated.as_ref().map(truncation_row),
    })
}

pub fn execute(command: &Command) -> Outcome {
    let (name, args) = match command {
        Command::Profile(a) => ("profile", a),
        Command::ClassNumbers(a) => ("class-numbers", a),
        Command::Verify(a) => ("verify", a),
        Command::Growth(a) => ("growth", a),
    };
    let cfg = match RunConfig::from_args(args) {
        Ok(cfg) => cfg,
        Err(e) => return usage(format!("error: {e}\n")),
    };
    let build = || match name {
        "profile" => profile_report(&cfg),
        "class-numbers" => class_numbers_report(&cfg),
        "verify" => verify_report(&cfg),
        _ => growth_report(&cfg),
    };
    match with_workers(cfg.workers, build) {
        Ok(report) => {
            let stdout = match cfg.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            let status = status_of(&report);
            let stderr = match status {
                ExitStatus::VerificationFailure => "verification failed\n".into(),
                ExitStatus::ResourceCap => "output truncated at the level cap\n".into(),
                _ => String::new(),
            };
            Outcome { status, stdout, stderr }
        }
        Err(e @ Error::LevelCap { .. }) => Outcome {
            status: ExitStatus::ResourceCap,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(e) => Outcome {
            status: ExitStatus::VerificationFailure,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn usage(msg: String) -> Outcome {
    Outcome { status: ExitStatus::Usage, stdout: String::new(), stderr: msg }
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: Workers, f: impl FnOnce() -> T + Send) -> T {
    let threads = match workers {
        Workers::Auto => 0,
        Workers::Count(n) => n,
    };
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_workers: Workers, f: impl FnOnce() -> T) -> T {
    f()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                usage(text)
            } else {
                // --help / --version
                Outcome { status: ExitStatus::Success, stdout: text, stderr: String::new() }
            }
        }
    }
}
