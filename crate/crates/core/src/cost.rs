//! Retraining schedules and the cost objective.
//!
//! A schedule is a binary vector over the online horizon; its cost combines
//! the retraining charge `alpha` per set bit with the per-step loss of
//! whichever model was most recently trained. The area under the
//! cost-versus-alpha curve summarizes a policy across operating points.

use crate::error::{Error, Result};
use crate::matrix::PerformanceMatrix;

/// Binary retraining schedule over online steps `1..=T`; bit `t` set means a
/// new model is trained at step `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionVector {
    bits: Vec<bool>,
}

impl DecisionVector {
    /// All-zeros schedule of length `horizon_t`.
    pub fn zeros(horizon_t: usize) -> Self {
        Self {
            bits: vec![false; horizon_t],
        }
    }

    pub fn ones(horizon_t: usize) -> Self {
        Self {
            bits: vec![true; horizon_t],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Schedule with bits set exactly at the given online steps (1-based).
    pub fn from_retrain_times(horizon_t: usize, times: &[usize]) -> Result<Self> {
        let mut bits = vec![false; horizon_t];
        for &t in times {
            if t < 1 || t > horizon_t {
                return Err(Error::argument(format!(
                    "retrain time {t} outside 1..={horizon_t}"
                )));
            }
            bits[t - 1] = true;
        }
        Ok(Self { bits })
    }

    pub fn horizon_t(&self) -> usize {
        self.bits.len()
    }

    /// Bit at online step `t` (1-based).
    pub fn bit(&self, t: usize) -> Result<bool> {
        if t < 1 || t > self.bits.len() {
            return Err(Error::argument(format!(
                "time {t} outside 1..={}",
                self.bits.len()
            )));
        }
        Ok(self.bits[t - 1])
    }

    pub fn set(&mut self, t: usize, value: bool) -> Result<()> {
        if t < 1 || t > self.bits.len() {
            return Err(Error::argument(format!(
                "time {t} outside 1..={}",
                self.bits.len()
            )));
        }
        self.bits[t - 1] = value;
        Ok(())
    }

    /// Number of set bits.
    pub fn retrain_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Index of the model deployed at step `t`: the largest `t' <= t` with a
    /// set bit, falling back to `0` (the final offline model) when no prefix
    /// bit is set.
    pub fn last_train_index(&self, t: usize) -> Result<i32> {
        if t < 1 || t > self.bits.len() {
            return Err(Error::argument(format!(
                "time {t} outside 1..={}",
                self.bits.len()
            )));
        }
        for t_prime in (1..=t).rev() {
            if self.bits[t_prime - 1] {
                return Ok(t_prime as i32);
            }
        }
        Ok(0)
    }

    /// Retrain times (1-based) in increasing order.
    pub fn retrain_times(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(idx, &b)| b.then_some(idx + 1))
            .collect()
    }
}

impl std::fmt::Display for DecisionVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Cost parameters: `alpha` is the ratio of one retraining to the aggregate
/// per-step error cost, and `scale_e_n` rescales the whole objective.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSpec {
    pub alpha: f64,
    pub scale_e_n: f64,
    pub horizon_t: usize,
    pub offline_w: usize,
}

impl CostSpec {
    pub fn new(alpha: f64, horizon_t: usize, offline_w: usize) -> Result<Self> {
        let spec = Self {
            alpha,
            scale_e_n: 1.0,
            horizon_t,
            offline_w,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_scale(mut self, scale_e_n: f64) -> Result<Self> {
        self.scale_e_n = scale_e_n;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::argument(format!(
                "alpha must be nonnegative, got {}",
                self.alpha
            )));
        }
        if self.horizon_t < 1 {
            return Err(Error::argument("horizon must be at least 1"));
        }
        if !(self.scale_e_n > 0.0) {
            return Err(Error::argument(format!(
                "scale must be positive, got {}",
                self.scale_e_n
            )));
        }
        Ok(())
    }
}

/// Total cost of a schedule: `scale * (alpha * retrains + sum of per-step
/// losses of the deployed model)`.
pub fn total_cost(
    pe: &PerformanceMatrix,
    theta: &DecisionVector,
    spec: &CostSpec,
) -> Result<f64> {
    if theta.horizon_t() != spec.horizon_t {
        return Err(Error::argument(format!(
            "schedule length {} does not match horizon {}",
            theta.horizon_t(),
            spec.horizon_t
        )));
    }
    let mut performance = 0.0;
    for t in 1..=spec.horizon_t {
        let model = theta.last_train_index(t)?;
        performance += pe.get(model, t as i32)?;
    }
    Ok(spec.scale_e_n * (spec.alpha * theta.retrain_count() as f64 + performance))
}

/// Evenly spaced operating points from `0` to `alpha_max` inclusive.
pub fn alpha_grid(alpha_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(alpha_max > 0.0) {
        return Err(Error::argument(format!(
            "alpha_max must be positive, got {alpha_max}"
        )));
    }
    if n_points < 2 {
        return Err(Error::argument("alpha grid needs at least 2 points"));
    }
    let step = alpha_max / (n_points - 1) as f64;
    Ok((0..n_points).map(|k| k as f64 * step).collect())
}

/// Trapezoidal integral of `costs` over the (strictly increasing) grid.
pub fn auc_over_alpha(grid: &[f64], costs: &[f64]) -> Result<f64> {
    if grid.len() != costs.len() {
        return Err(Error::argument(format!(
            "grid has {} points but costs has {}",
            grid.len(),
            costs.len()
        )));
    }
    if grid.len() < 2 {
        return Err(Error::argument("need at least 2 grid points"));
    }
    for pair in grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::argument("grid must be strictly increasing"));
        }
    }
    let mut area = 0.0;
    for k in 1..grid.len() {
        area += 0.5 * (costs[k] + costs[k - 1]) * (grid[k] - grid[k - 1]);
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn constant_matrix(w: usize, t: usize, value: f64) -> PerformanceMatrix {
        let mut pe = PerformanceMatrix::new(w, t);
        for i in -(w as i32)..=(t as i32) {
            for j in i..=(t as i32) {
                pe.insert(i, j, value).unwrap();
            }
        }
        pe
    }

    #[test]
    fn last_train_index_all_zeros_falls_back_to_zero() {
        let theta = DecisionVector::zeros(6);
        assert_eq!(theta.last_train_index(5).unwrap(), 0);
    }

    #[test]
    fn last_train_index_picks_max_set_prefix_bit() {
        let theta = DecisionVector::from_bits(vec![false, true, false, false, true, false]);
        assert_eq!(theta.last_train_index(3).unwrap(), 2);
        assert_eq!(theta.last_train_index(6).unwrap(), 5);
        assert_eq!(theta.last_train_index(1).unwrap(), 0);
    }

    #[test]
    fn last_train_index_rejects_out_of_range() {
        let theta = DecisionVector::zeros(4);
        assert!(theta.last_train_index(0).is_err());
        assert!(theta.last_train_index(5).is_err());
    }

    #[test]
    fn total_cost_zero_losses_leaves_retrain_charge() {
        let pe = constant_matrix(0, 2, 0.0);
        let theta = DecisionVector::from_bits(vec![true, false]);
        let spec = CostSpec::new(0.5, 2, 0).unwrap();
        assert_eq!(total_cost(&pe, &theta, &spec).unwrap(), 0.5);
    }

    #[test]
    fn total_cost_pure_performance_sum() {
        let mut pe = PerformanceMatrix::new(0, 8);
        for t in 0..=8 {
            for i in 0..=t {
                pe.insert(i, t, 0.2).unwrap();
            }
        }
        let theta = DecisionVector::zeros(8);
        let spec = CostSpec::new(3.7, 8, 0).unwrap();
        let cost = total_cost(&pe, &theta, &spec).unwrap();
        assert!((cost - 1.6).abs() < 1e-12);
    }

    #[test]
    fn total_cost_missing_entry_is_data_error() {
        let pe = PerformanceMatrix::new(0, 2);
        let theta = DecisionVector::zeros(2);
        let spec = CostSpec::new(0.1, 2, 0).unwrap();
        assert!(matches!(
            total_cost(&pe, &theta, &spec),
            Err(crate::error::Error::MissingEntry { model: 0, time: 1 })
        ));
    }

    /// Straight-line expansion of the objective, written independently of
    /// `total_cost`: walk the steps, track the deployed model by hand.
    fn cost_by_hand(pe: &PerformanceMatrix, bits: &[bool], alpha: f64) -> f64 {
        let mut deployed: i32 = 0;
        let mut acc = 0.0;
        let mut retrains = 0usize;
        for (idx, &bit) in bits.iter().enumerate() {
            let t = (idx + 1) as i32;
            if bit {
                deployed = t;
                retrains += 1;
            }
            acc += pe.get(deployed, t).unwrap();
        }
        alpha * retrains as f64 + acc
    }

    #[test]
    fn total_cost_matches_term_by_term_expansion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t = 6usize;
            let mut pe = PerformanceMatrix::new(0, t);
            for i in 0..=t as i32 {
                for j in i..=t as i32 {
                    pe.insert(i, j, rng.random_range(0.0..1.0)).unwrap();
                }
            }
            let bits: Vec<bool> = (0..t).map(|_| rng.random_bool(0.5)).collect();
            let alpha = rng.random_range(0.0..1.0);
            let theta = DecisionVector::from_bits(bits.clone());
            let spec = CostSpec::new(alpha, t, 0).unwrap();
            let got = total_cost(&pe, &theta, &spec).unwrap();
            let want = cost_by_hand(&pe, &bits, alpha);
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn alpha_grid_linear_spacing() {
        let grid = alpha_grid(1.0, 10).unwrap();
        assert_eq!(grid.len(), 10);
        assert_eq!(grid[0], 0.0);
        assert!((grid[9] - 1.0).abs() < 1e-15);
        assert!((grid[1] - 1.0 / 9.0).abs() < 1e-15);

        let two = alpha_grid(0.5, 2).unwrap();
        assert_eq!(two, vec![0.0, 0.5]);

        let quarter = alpha_grid(0.25, 10).unwrap();
        for pair in quarter.windows(2) {
            assert!((pair[1] - pair[0] - 0.25 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn alpha_grid_rejects_bad_arguments() {
        assert!(alpha_grid(0.0, 10).is_err());
        assert!(alpha_grid(-1.0, 10).is_err());
        assert!(alpha_grid(1.0, 1).is_err());
    }

    #[test]
    fn auc_constant_is_rectangle() {
        let grid = alpha_grid(2.0, 5).unwrap();
        let costs = vec![3.0; 5];
        assert!((auc_over_alpha(&grid, &costs).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn auc_identity_line_is_triangle() {
        let grid = alpha_grid(1.0, 10).unwrap();
        let auc = auc_over_alpha(&grid, &grid).unwrap();
        assert!((auc - 0.5).abs() < 1e-12);
    }

    #[test]
    fn auc_rejects_length_mismatch_and_bad_grid() {
        assert!(auc_over_alpha(&[0.0, 1.0], &[1.0]).is_err());
        assert!(auc_over_alpha(&[0.0, 0.0], &[1.0, 1.0]).is_err());
        assert!(auc_over_alpha(&[1.0, 0.5], &[1.0, 1.0]).is_err());
    }

    /// Dense-grid quadrature over the piecewise-linear interpolant; written
    /// before the trapezoid implementation was wired in.
    fn quadrature_reference(grid: &[f64], costs: &[f64]) -> f64 {
        let steps_per_cell = 10_000usize;
        let mut area = 0.0;
        for k in 1..grid.len() {
            let (x0, x1) = (grid[k - 1], grid[k]);
            let (y0, y1) = (costs[k - 1], costs[k]);
            let h = (x1 - x0) / steps_per_cell as f64;
            for s in 0..steps_per_cell {
                let xa = x0 + s as f64 * h;
                let xb = xa + h;
                let ya = y0 + (y1 - y0) * (xa - x0) / (x1 - x0);
                let yb = y0 + (y1 - y0) * (xb - x0) / (x1 - x0);
                area += 0.5 * (ya + yb) * (xb - xa);
            }
        }
        area
    }

    #[test]
    fn auc_matches_dense_quadrature() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let grid = alpha_grid(1.0, 10).unwrap();
        let costs: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..5.0)).collect();
        let got = auc_over_alpha(&grid, &costs).unwrap();
        let want = quadrature_reference(&grid, &costs);
        assert!((got - want).abs() < 1e-9, "got {got}, want {want}");
    }

    proptest! {
        #[test]
        fn cost_is_linear_in_alpha(
            bits in proptest::collection::vec(any::<bool>(), 1..10),
            alpha in 0.0f64..2.0,
            bump in 0.0f64..2.0,
        ) {
            let t = bits.len();
            let pe = constant_matrix(0, t, 0.3);
            let theta = DecisionVector::from_bits(bits);
            let lo = CostSpec::new(alpha, t, 0).unwrap();
            let hi = CostSpec::new(alpha + bump, t, 0).unwrap();
            let c_lo = total_cost(&pe, &theta, &lo).unwrap();
            let c_hi = total_cost(&pe, &theta, &hi).unwrap();
            let expect = bump * theta.retrain_count() as f64;
            prop_assert!((c_hi - c_lo - expect).abs() < 1e-10);
        }

        #[test]
        fn last_train_index_is_monotone_in_t(
            bits in proptest::collection::vec(any::<bool>(), 1..12)
        ) {
            let theta = DecisionVector::from_bits(bits);
            let mut prev = 0;
            for t in 1..=theta.horizon_t() {
                let cur = theta.last_train_index(t).unwrap();
                prop_assert!(cur >= prev);
                prev = cur;
            }
        }

        #[test]
        fn auc_invariant_under_collinear_midpoint(
            ys in proptest::collection::vec(0.0f64..4.0, 3..8),
        ) {
            let n = ys.len();
            let grid = alpha_grid(1.0, n).unwrap();
            let base = auc_over_alpha(&grid, &ys).unwrap();

            // Insert the midpoint of the first cell on the joining segment.
            let mid_x = 0.5 * (grid[0] + grid[1]);
            let mid_y = 0.5 * (ys[0] + ys[1]);
            let mut grid2 = grid.clone();
            let mut ys2 = ys.clone();
            grid2.insert(1, mid_x);
            ys2.insert(1, mid_y);
            let refined = auc_over_alpha(&grid2, &ys2).unwrap();
            prop_assert!((base - refined).abs() < 1e-12);
        }
    }
}
