//! Limit spectra and the convergence experiments built on the solvers.
//!
//! Every grid point of a study is an independent computation; grids run in
//! parallel and tables are assembled in grid order, so results do not
//! depend on the thread count.

mod converge;
mod ims;
mod kappa;
mod lowerbound;
mod modified;
mod regimes;
mod sigma;

pub use converge::{converge_study, ConvergenceRow, ConvergenceTable};
pub use ims::{ims_general_experiment, ImsReport, ImsWellReport};
pub use kappa::{harmonic_kappa_study, ritz_upper_bounds, KappaRow, KappaStudy};
pub use lowerbound::{interval_lowerbound_experiment, IntervalReport, IntervalResult, DEFAULT_EPSILON};
pub use modified::{modified_vs_plain, ModifiedComparison, ModifiedRow};
pub use regimes::{predicted_exponent, regime_sweep, RegimeRow, RegimeSample, RegimeSweep, PRESCALED_N_CAP};
pub use sigma::{sigma_enumerate, sigma_value, SigmaEntry, SigmaSequence};

use crate::error::{invalid, Result};
use crate::potentials::Potential;

/// Doublings allowed when auto-sizing a box.
pub const MAX_DOUBLINGS: usize = 12;

/// `ln(e_i/e_{i+1}) / ln(s_{i+1}/s_i)` for consecutive grid points; the
/// observed order when `e ~ s^{-p}`.
pub(crate) fn successive_orders(steps: &[f64], errors: &[f64]) -> Vec<f64> {
    steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(s, e)| (e[0] / e[1]).ln() / (s[1] / s[0]).ln())
        .collect()
}

pub(crate) fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

pub(crate) fn check_mesh_list(list: &[u64]) -> Result<()> {
    if list.is_empty() {
        return invalid("N list is empty");
    }
    if list[0] == 0 || list.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("N list must be strictly increasing positive integers");
    }
    Ok(())
}

/// Starting half-width for `H_N`: every well at `N·a_l` plus a margin of
/// `(√(2n+1) + 8)/κ` with `κ` from the softest well frequency.
pub fn default_half_width(potential: &Potential, n: u64, gamma: f64, n_max: usize) -> Result<i64> {
    let wells = potential.wells();
    if wells.is_empty() {
        return invalid(format!("potential '{}' has no registered wells", potential.name()));
    }
    let reach = wells
        .iter()
        .flat_map(|w| w.location().iter().map(|a| a.abs()))
        .fold(0.0, f64::max);
    let omega = softest_frequency(potential);
    let kappa = (omega * (n as f64).powf(-(1.0 + gamma))).sqrt();
    let margin = (((2 * n_max + 1) as f64).sqrt() + 8.0) / kappa;
    Ok(((reach * n as f64 + margin).ceil() as i64).max(n_max as i64 + 1))
}

pub(crate) fn softest_frequency(potential: &Potential) -> f64 {
    potential
        .wells()
        .iter()
        .flat_map(|w| w.frequencies().iter().copied())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_a_power_law() {
        let s = [1.0, 2.0, 4.0];
        let e = [1.0, 0.25, 0.0625];
        for p in successive_orders(&s, &e) {
            assert!((p - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn mesh_lists() {
        assert!(check_mesh_list(&[2, 4, 8]).is_ok());
        assert!(check_mesh_list(&[2, 2]).is_err());
        assert!(check_mesh_list(&[0, 1]).is_err());
        assert!(check_mesh_list(&[]).is_err());
    }
}
