//! Empirical exponent of the circle-counting function `N(T)`.
//!
//! A depth-`m` orbit contains every circle of curvature below `T_c`, the
//! smallest curvature any depth-`m+1` configuration would add. Above `T_c`
//! the counts are truncated, so the fit uses positive curvatures in
//! `[T_c/10, T_c)`.

use crate::error::{Error, Result};
use crate::rational;

use super::{new_circle_curvature, Packing, PackingKind};

pub const MIN_CIRCLES_FOR_DIMENSION: usize = 10_000;
pub const FIT_SAMPLES: usize = 50;
/// The fit window spans one decade below the completeness bound.
pub const WINDOW_DECADES: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub samples: usize,
    pub window: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub exponent: f64,
    pub fit: PowerLawFit,
    /// Curvature below which the truncated orbit is complete.
    pub complete_below: f64,
    pub circles_used: usize,
    /// `s` balancing the last two generations: `Σ_m b^{-s} = Σ_{m-1} b^{-s}`.
    pub generation_balance: Option<f64>,
}

/// Least-squares slope of `log N(T)` against `log T` at `samples`
/// log-uniform points from `lo` up to just below `hi`, both ends included.
/// `sorted` must be ascending.
pub fn fit_count_exponent(sorted: &[f64], lo: f64, hi: f64, samples: usize) -> Result<PowerLawFit> {
    if !(lo > 0.0 && hi > lo) || samples < 2 {
        return Err(Error::InsufficientData(format!("bad fit window [{lo}, {hi})")));
    }
    let (llo, lhi) = (lo.ln(), (hi * (1.0 - 1e-9)).ln());
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = (llo + (lhi - llo) * k as f64 / (samples - 1) as f64).exp();
        let n = sorted.partition_point(|&c| c <= t);
        if n == 0 {
            return Err(Error::InsufficientData(format!("no curvatures below {t}")));
        }
        xs.push(t.ln());
        ys.push((n as f64).ln());
    }
    let (slope, intercept) = least_squares(&xs, &ys);
    Ok(PowerLawFit {
        slope,
        intercept,
        samples,
        window: (lo, hi),
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Smallest curvature a further generation would add.
pub fn completeness_bound(p: &Packing) -> f64 {
    let mut bound = f64::INFINITY;
    for leaf in p.leaves() {
        let skip = leaf.word.first().map(|g| g.index());
        for i in (0..4).filter(|&i| Some(i) != skip) {
            let b = rational::to_f64(&new_circle_curvature(&leaf.matrix, i));
            bound = bound.min(b);
        }
    }
    bound
}

pub fn estimate_residual_dimension(p: &Packing) -> Result<DimensionEstimate> {
    if p.kind != PackingKind::Apollonian {
        return Err(Error::Precondition("dimension estimate needs an Apollonian packing".into()));
    }
    if p.circle_count() < MIN_CIRCLES_FOR_DIMENSION {
        return Err(Error::InsufficientData(format!(
            "{} circles, need at least {MIN_CIRCLES_FOR_DIMENSION}",
            p.circle_count()
        )));
    }
    let mut curv: Vec<f64> = p
        .circles
        .values()
        .map(|c| rational::to_f64(&c.row.curvature))
        .filter(|&b| b > 0.0)
        .collect();
    curv.sort_by(f64::total_cmp);

    let tc = completeness_bound(p);
    let lo = tc / 10f64.powf(WINDOW_DECADES);
    let smallest = curv.first().copied().unwrap_or(f64::INFINITY);
    if lo.is_nan() || lo <= smallest {
        return Err(Error::InsufficientData(format!(
            "the orbit is complete only below curvature {tc}, leaving no decade to fit above the smallest curvature {smallest}"
        )));
    }
    let fit = fit_count_exponent(&curv, lo, tc, FIT_SAMPLES)?;
    Ok(DimensionEstimate {
        exponent: fit.slope,
        circles_used: curv.partition_point(|&c| c < tc),
        complete_below: tc,
        generation_balance: generation_balance(p),
        fit,
    })
}

/// Root of `Σ_{level m} b^{-s} - Σ_{level m-1} b^{-s}` by bisection.
pub fn generation_balance(p: &Packing) -> Option<f64> {
    if p.depth < 2 {
        return None;
    }
    let level = |m: usize| -> Vec<f64> {
        p.circles
            .values()
            .filter(|c| c.level == m)
            .map(|c| rational::to_f64(&c.row.curvature))
            .filter(|&b| b > 0.0)
            .collect()
    };
    let last = level(p.depth);
    let prev = level(p.depth - 1);
    let f = |s: f64| -> f64 {
        last.iter().map(|b| b.powf(-s)).sum::<f64>() - prev.iter().map(|b| b.powf(-s)).sum::<f64>()
    };
    let (mut a, mut b) = (0.5, 3.0);
    if f(a).signum() == f(b).signum() {
        return None;
    }
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if f(mid).signum() == f(a).signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// `c_k = k^{1/δ}` for `k = 1..=count`, so that `N(T) = ⌊T^δ⌋`.
pub fn calibration_curvatures(exponent: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| (k as f64).powf(1.0 / exponent)).collect()
}

/// Fit on synthetic data over the decade below the largest curvature.
pub fn calibrate(exponent: f64) -> Result<PowerLawFit> {
    let c = calibration_curvatures(exponent, 100_000);
    let hi = *c.last().expect("nonempty");
    fit_count_exponent(&c, hi / 10.0, hi, FIT_SAMPLES)
}
