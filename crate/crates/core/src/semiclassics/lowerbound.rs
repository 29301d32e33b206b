use serde::Serialize;

use crate::eigensolve::{eigs_tridiag, verify_superharmonic, SuperharmonicCertificate};
use crate::error::{invalid, Result};
use crate::hermite::{default_radius, TestFunction};
use crate::lattice::{assemble_hkappa, assemble_modified_window, IntervalDecomposition, ModifiedPotentialParams};

/// Default `ε` in `α = -(1 - ε)κ²(2n+1)`.
pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalResult {
    pub index: i64,
    /// Truncated lattice interval actually solved on.
    pub lo: i64,
    pub hi: i64,
    pub bounded: bool,
    pub beta: f64,
    /// The spiked potential was used (unbounded intervals).
    pub modified: bool,
    pub ground_energy: f64,
    /// `E_{0,j}/κ²`.
    pub ratio: f64,
    pub certificate: SuperharmonicCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub n: usize,
    pub kappa: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: f64,
    /// `2n + 1`.
    pub target: f64,
    pub cap: i64,
    pub spike_location: i64,
    pub excluded: Vec<i64>,
    pub intervals: Vec<IntervalResult>,
    pub min_ratio: f64,
    pub certificates_hold: bool,
    /// `min_ratio ≥ (1 - ε)(2n+1)`.
    pub ratio_bound_holds: bool,
}

/// Ground energies and superharmonicity certificates on the nodal intervals
/// of `ψ_n`.
///
/// Bounded intervals carry `H_κ` restricted to the interval and the test
/// function `|ψ_n(β_j x)|`. The two unbounded intervals carry the spiked
/// potential, truncated at `cap`, with the test function frozen beyond the
/// spike.
pub fn interval_lowerbound_experiment(n: usize, kappa: f64, delta: f64, epsilon: f64) -> Result<IntervalReport> {
    if n == 0 {
        return invalid("interval lower bounds need n ≥ 1");
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
    }
    let spike = ModifiedPotentialParams::new(kappa, delta)?;
    let decomposition = IntervalDecomposition::build(n, kappa)?;
    let x_delta = spike.spike_location();
    let cap = decomposition
        .minimal_cap()
        .max(2 * x_delta)
        .max(default_radius(n, kappa));
    let k2 = kappa * kappa;
    let target = (2 * n + 1) as f64;
    let alpha = -(1.0 - epsilon) * k2 * target;
    let mut intervals = Vec::new();
    for (iv, window) in decomposition.truncated(cap)? {
        let bounded = iv.is_bounded();
        let mut u = TestFunction::new(n, kappa)?.stretched(iv.beta).absolute();
        let op = if bounded {
            assemble_hkappa(kappa, &window)?
        } else {
            u = u.with_plateau(x_delta);
            assemble_modified_window(&spike, &window)?
        };
        let values = u.sample(&window);
        let certificate = verify_superharmonic(&op, alpha, &values, &window)?;
        let ground_energy = eigs_tridiag(&op, 1, false)?.eigenvalues[0];
        intervals.push(IntervalResult {
            index: iv.index,
            lo: window.lower()[0],
            hi: window.upper()[0],
            bounded,
            beta: iv.beta,
            modified: !bounded,
            ground_energy,
            ratio: ground_energy / k2,
            certificate,
        });
    }
    let min_ratio = intervals.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(IntervalReport {
        n,
        kappa,
        delta,
        epsilon,
        alpha,
        target,
        cap,
        spike_location: x_delta,
        excluded: decomposition.excluded().to_vec(),
        certificates_hold: intervals.iter().all(|r| r.certificate.holds),
        ratio_bound_holds: min_ratio >= (1.0 - epsilon) * target,
        min_ratio,
        intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_excited_state_bounded_intervals() {
        let r = interval_lowerbound_experiment(1, 0.05, 0.25, DEFAULT_EPSILON).unwrap();
        assert_eq!(r.excluded, vec![0]);
        for iv in r.intervals.iter().filter(|i| i.bounded) {
            assert!(iv.certificate.holds, "{iv:?}");
        }
        assert!(r.intervals.iter().all(|i| i.ground_energy > 0.0));
    }

    #[test]
    fn epsilon_one_is_trivial() {
        let r = interval_lowerbound_experiment(2, 0.05, 0.25, 1.0).unwrap();
        assert_eq!(r.alpha, 0.0);
        assert!(r.certificates_hold);
        assert!(r.intervals.iter().all(|i| i.certificate.min_slack >= 0.0));
    }

    #[test]
    fn ground_state_rejected() {
        assert!(interval_lowerbound_experiment(0, 0.05, 0.25, 0.1).is_err());
    }
}
