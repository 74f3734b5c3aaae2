//! Retrain-count bounds and the fixed-retrain-count subproblem.
//!
//! If adjacent models never differ by more than `L` in loss on any shared
//! step, the optimal schedule retrains at most `T - sqrt(alpha / L)` times.
//! `best_schedule_with_r_retrains` solves the performance-only subproblem at
//! a fixed retrain count, which is what makes that bound checkable.

use crate::cost::DecisionVector;
use crate::error::{Error, Result};
use crate::matrix::PerformanceMatrix;

/// Inputs to the retrain-count bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    /// Uniform bound on the loss gap between models trained at adjacent steps.
    pub gap_l: f64,
    pub alpha: f64,
    pub horizon_t: usize,
}

impl BoundInputs {
    pub fn new(gap_l: f64, alpha: f64, horizon_t: usize) -> Result<Self> {
        if !gap_l.is_finite() || gap_l < 0.0 {
            return Err(Error::argument(format!(
                "adjacent-model gap must be nonnegative, got {gap_l}"
            )));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::argument(format!(
                "alpha must be nonnegative, got {alpha}"
            )));
        }
        Ok(Self {
            gap_l,
            alpha,
            horizon_t,
        })
    }
}

/// Largest observed loss gap between adjacent models on a shared step:
/// `max |pe[i, t] - pe[i + 1, t]|` over all pairs with `i + 1 <= t`.
pub fn empirical_gap(pe: &PerformanceMatrix) -> Result<f64> {
    let lo = -(pe.offline_w() as i32);
    let hi = pe.horizon_t() as i32;
    if hi - lo < 1 {
        return Err(Error::argument(
            "empirical gap needs at least two models",
        ));
    }
    let mut best: Option<f64> = None;
    for i in lo..hi {
        for t in (i + 1)..=hi {
            if pe.contains(i, t) && pe.contains(i + 1, t) {
                let gap = (pe.get(i, t)? - pe.get(i + 1, t)?).abs();
                best = Some(best.map_or(gap, |b: f64| b.max(gap)));
            }
        }
    }
    best.ok_or_else(|| {
        Error::argument("no adjacent-model pairs share an evaluation step")
    })
}

/// Upper bound on the optimal retrain count: `T - sqrt(alpha / L)`.
///
/// Returns the raw real value; a result below 1 means no retraining is ever
/// justified. A zero gap makes the bound vacuous, so the horizon itself is
/// returned.
pub fn retrain_upper_bound(b: &BoundInputs) -> Result<f64> {
    if b.alpha < 0.0 {
        return Err(Error::argument("alpha must be nonnegative"));
    }
    if b.gap_l == 0.0 {
        return Ok(b.horizon_t as f64);
    }
    Ok(b.horizon_t as f64 - (b.alpha / b.gap_l).sqrt())
}

/// Smallest alpha at which the bound already rules out any retraining,
/// i.e. where `T - sqrt(alpha / L) < 1` first holds: `L * (T - 1)^2`.
pub fn never_retrain_alpha(gap_l: f64, horizon_t: usize) -> f64 {
    gap_l * ((horizon_t - 1) as f64).powi(2)
}

/// Minimizes the performance-only cost over all schedules with exactly `r`
/// retrains, by exhaustive enumeration of the increasing r-tuples of retrain
/// times. Returns the best schedule and its performance sum.
pub fn best_schedule_with_r_retrains(
    pe: &PerformanceMatrix,
    r: usize,
) -> Result<(DecisionVector, f64)> {
    let horizon_t = pe.horizon_t();
    if r > horizon_t {
        return Err(Error::argument(format!(
            "retrain count {r} exceeds horizon {horizon_t}"
        )));
    }
    let mut best_value = f64::INFINITY;
    let mut best_times: Vec<usize> = Vec::new();
    let mut times: Vec<usize> = (1..=r).collect();
    loop {
        let theta = DecisionVector::from_retrain_times(horizon_t, &times)?;
        let mut value = 0.0;
        for t in 1..=horizon_t {
            value += pe.get(theta.last_train_index(t)?, t as i32)?;
        }
        if value < best_value {
            best_value = value;
            best_times = times.clone();
        }
        if !next_combination(&mut times, horizon_t) {
            break;
        }
    }
    let theta = DecisionVector::from_retrain_times(horizon_t, &best_times)?;
    Ok((theta, best_value))
}

/// Advances `times` to the next increasing r-tuple over `1..=max`; false
/// once exhausted. The empty tuple has a single (empty) combination.
fn next_combination(times: &mut [usize], max: usize) -> bool {
    let r = times.len();
    if r == 0 {
        return false;
    }
    let mut k = r;
    while k > 0 {
        k -= 1;
        if times[k] < max - (r - 1 - k) {
            times[k] += 1;
            for j in k + 1..r {
                times[j] = times[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
