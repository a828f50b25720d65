//! Valuation tables across `n` and the linear-growth relation between
//! `ord_p h_n^-` and `ord_p h_{n,2}^-`.
//!
//! For `n + 1 >= m` (with `m` the order-lifting constant of 2 at `p`) the two
//! valuations differ by exactly `(n + 1) * delta`, `delta = d_2 - 1`. The
//! eventual linearity of either sequence is an asymptotic statement; fits here
//! only describe the computed window.

use num_bigint::BigInt;

use crate::chars::CharGroup;
use crate::classnum::{class_numbers_in, ClassNumberOptions};
use crate::error::{Error, Result};
use crate::exactnum::{check_odd_prime, checked_pow};
use crate::multorder::order_profile;
use crate::par::try_map;
use crate::prodval::d_q;

/// `delta = d_2 - 1` for the prime `p`.
pub fn delta(p: u64) -> Result<u64> {
    Ok(d_q(&order_profile(2, p)?)? - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRecord {
    pub p: u64,
    pub n: u32,
    pub h_minus: BigInt,
    pub h_minus_refined: BigInt,
    /// `ord_p h_n^-`
    pub v: i64,
    /// `ord_p h_{n,2}^-`
    pub v2: i64,
    /// `(n + 1) * delta`
    pub predicted_gap: i64,
    pub gap_ok: bool,
    /// `n + 1 >= m`, where the gap law is expected to hold.
    pub in_regime: bool,
}

/// Where a table stopped because the next level exceeded the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub n: u32,
    pub level: u64,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    pub p: u64,
    pub delta: u64,
    pub m: u32,
    pub records: Vec<GrowthRecord>,
    pub truncated: Option<Truncation>,
}

impl GrowthTable {
    /// Every row in the regime satisfies the gap law.
    pub fn gap_law_holds(&self) -> bool {
        self.records.iter().filter(|r| r.in_regime).all(|r| r.gap_ok)
    }
}

/// Cyclotomic level `phi(p^(n+1))` of row `n`.
pub fn level_of(p: u64, n: u32) -> Result<u64> {
    (p - 1).checked_mul(checked_pow(p, n)?).ok_or(Error::Overflow("level"))
}

/// Rows `n = 0..=n_max`, stopping early (with a marker) at the first level above the cap.
pub fn valuation_table(p: u64, n_max: u32, opts: &ClassNumberOptions) -> Result<GrowthTable> {
    let p = check_odd_prime(p as i64)?;
    let delta = delta(p)?;
    let m = order_profile(2, p)?.m;

    let mut ns = Vec::new();
    let mut truncated = None;
    for n in 0..=n_max {
        match level_of(p, n) {
            Ok(level) if level <= opts.cap => ns.push(n),
            Ok(level) => {
                truncated = Some(Truncation { n, level, cap: opts.cap });
                break;
            }
            Err(_) => {
                truncated = Some(Truncation { n, level: u64::MAX, cap: opts.cap });
                break;
            }
        }
    }

    let records = try_map(ns, |n| {
        let group = CharGroup::new(p, n, opts.cap)?;
        let cn = class_numbers_in(&group, opts)?;
        let v = cn.val_h_minus.finite()?;
        let v2 = cn.val_h_minus_refined.finite()?;
        let predicted_gap = (n as i64 + 1) * delta as i64;
        Ok(GrowthRecord {
            p,
            n,
            h_minus: cn.h_minus,
            h_minus_refined: cn.h_minus_refined,
            v,
            v2,
            predicted_gap,
            gap_ok: v2 - v == predicted_gap,
            in_regime: n + 1 >= m,
        })
    })?;
    Ok(GrowthTable { p, delta, m, records, truncated })
}

/// An integer line through the last two points of a window, and whether
/// every point of the window lies on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthFit {
    pub lambda_prime: i64,
    pub c_prime: i64,
    pub fit_start: u32,
    pub exact: bool,
}

/// Fits `(n, value)` pairs with `n >= fit_start`.
pub fn fit_points(points: &[(u32, i64)], fit_start: u32) -> Result<GrowthFit> {
    let mut window: Vec<(u32, i64)> =
        points.iter().copied().filter(|&(n, _)| n >= fit_start).collect();
    window.sort_unstable();
    if window.len() < 2 {
        return Err(Error::InsufficientRecords(fit_start));
    }
    let (na, ya) = window[window.len() - 2];
    let (nb, yb) = window[window.len() - 1];
    let run = (nb - na) as i64;
    let rise = yb - ya;
    let slope = rise.div_euclid(run);
    let intercept = yb - slope * nb as i64;
    let exact = rise % run == 0 && window.iter().all(|&(n, y)| y == slope * n as i64 + intercept);
    Ok(GrowthFit { lambda_prime: slope, c_prime: intercept, fit_start, exact })
}

/// Fit of the refined valuations `v2`.
pub fn fit_linear(records: &[GrowthRecord], fit_start: u32) -> Result<GrowthFit> {
    let pts: Vec<(u32, i64)> = records.iter().map(|r| (r.n, r.v2)).collect();
    fit_points(&pts, fit_start)
}

/// Fit of the plain valuations `v`.
pub fn fit_plain(records: &[GrowthRecord], fit_start: u32) -> Result<GrowthFit> {
    let pts: Vec<(u32, i64)> = records.iter().map(|r| (r.n, r.v)).collect();
    fit_points(&pts, fit_start)
}

/// `max(1, m)` for the order-lifting constant `m` of 2 at `p`.
pub fn default_fit_start(p: u64) -> Result<u32> {
    Ok(order_profile(2, p)?.m.max(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub table: GrowthTable,
    pub fit_start: u32,
    /// Fit of `v` (slope lambda, intercept c); `None` with fewer than two points.
    pub fit_v: Option<GrowthFit>,
    /// Fit of `v2` (slope lambda', intercept c').
    pub fit_v2: Option<GrowthFit>,
}

impl TheoremReport {
    /// Exact part: the gap law on every row in the regime.
    pub fn gap_law_holds(&self) -> bool {
        self.table.gap_law_holds()
    }

    /// Empirical part: when `v` is exactly linear on the window, `v2` is exactly
    /// linear with slope `lambda + delta` and intercept `c + delta`.
    /// `None` when the window does not support a fit or `v` is not linear on it.
    pub fn shifted_fit_consistent(&self) -> Option<bool> {
        let (fv, fv2) = (self.fit_v?, self.fit_v2?);
        if !fv.exact {
            return None;
        }
        let d = self.table.delta as i64;
        Some(fv2.exact && fv2.lambda_prime == fv.lambda_prime + d && fv2.c_prime == fv.c_prime + d)
    }
}

pub fn verify_theorem_main(
    p: u64,
    n_max: u32,
    fit_start: Option<u32>,
    opts: &ClassNumberOptions,
) -> Result<TheoremReport> {
    let table = valuation_table(p, n_max, opts)?;
    let fit_start = match fit_start {
        Some(s) => s,
        None => default_fit_start(p)?,
    };
    let fit_v = fit_plain(&table.records, fit_start).ok();
    let fit_v2 = fit_linear(&table.records, fit_start).ok();
    Ok(TheoremReport { table, fit_start, fit_v, fit_v2 })
}
