//! Cost-aware model retraining at desk scale.
//!
//! Given a horizon of drifting datasets and a retrain-to-error cost ratio,
//! this crate forecasts future model performance with calibrated
//! uncertainty and decides at each online step whether to train a fresh
//! model. It ships:
//!
//! - the cost objective, retrain-count bounds, and performance-matrix
//!   plumbing ([`cost`], [`bounds`], [`matrix`]);
//! - a moment-matched performance forecaster with Beta, Gaussian, and
//!   log-normal predictive families ([`forecaster`]);
//! - the quantile-comparison decision rule built by backward induction over
//!   Monte-Carlo cost samples ([`policy`]);
//! - baselines: the exact dynamic-programming oracle, drift-detection
//!   triggers (ADWIN, FHDDM, KSWIN), and staleness-threshold schedulers
//!   ([`baselines`]);
//! - seeded synthetic drift worlds and a small quadratic-feature base
//!   classifier ([`synthetic`]);
//! - a seeded experiment harness for alpha sweeps, AUC tables, robustness
//!   grids, and ablations ([`harness`]).

pub mod baselines;
pub mod bounds;
pub mod cost;
pub mod error;
pub mod forecaster;
pub mod harness;
pub mod matrix;
pub mod policy;
pub mod sim;
pub mod synthetic;

pub use error::{Error, Result};

/// Mixes seed material into a new 64-bit seed (splitmix64 finalizer).
///
/// Used everywhere a substream must be derived deterministically from a
/// master seed plus structural coordinates (trial index, timestep, pair
/// indices) without correlated streams.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut state = base ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        state = state.wrapping_add(p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        state = z ^ (z >> 31);
    }
    state
}
