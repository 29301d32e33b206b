use rayon::prelude::*;
use serde::Serialize;

use super::{strictly_decreasing, successive_orders, MAX_DOUBLINGS};
use crate::eigensolve::{eigs_auto, subspace_upper_bounds};
use crate::error::{invalid, Result};
use crate::hermite::{default_radius, TestFunction};
use crate::lattice::{assemble_hkappa, LatticeBox, SymmetricLatticeOperator};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaRow {
    pub kappa: f64,
    pub n: usize,
    #[serde(rename = "E_n")]
    pub energy: f64,
    /// `E_n(κ)/κ²`.
    pub ratio: f64,
    /// `2n + 1`.
    pub target: f64,
    pub abs_err: f64,
    /// Largest Ritz value of `H_κ` on `span{ψ_0, …, ψ_n}`.
    pub ritz_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaStudy {
    pub omega: f64,
    pub kappas: Vec<f64>,
    pub n_max: usize,
    /// Grouped by `κ`, then level.
    pub rows: Vec<KappaRow>,
    /// Per level, successive deviation orders in `1/κ`.
    pub orders: Vec<Vec<f64>>,
    /// Per level, whether `|E_n/κ² - (2n+1)|` strictly decreases along the list.
    pub deviations_decreasing: Vec<bool>,
    /// Final box half-width per `κ`.
    pub half_widths: Vec<i64>,
}

impl KappaStudy {
    pub fn row(&self, kappa_index: usize, n: usize) -> &KappaRow {
        &self.rows[kappa_index * (self.n_max + 1) + n]
    }

    pub fn level(&self, n: usize) -> impl Iterator<Item = &KappaRow> {
        self.rows.iter().filter(move |r| r.n == n)
    }
}

/// `θ_n` = largest Ritz value on `span{ψ_0, …, ψ_n}` for `n = 0..=n_max`.
pub fn ritz_upper_bounds(op: &SymmetricLatticeOperator, kappa: f64, n_max: usize) -> Result<Vec<f64>> {
    let lattice = op.lattice();
    if lattice.dim() != 1 {
        return invalid("Hermite test vectors live on one-dimensional boxes");
    }
    let vectors = (0..=n_max)
        .map(|n| Ok(TestFunction::new(n, kappa)?.sample(lattice)))
        .collect::<Result<Vec<_>>>()?;
    (0..=n_max)
        .map(|n| {
            let theta = subspace_upper_bounds(op, &vectors[..=n])?;
            Ok(theta[n])
        })
        .collect()
}

/// `E_n(κ)/κ²` against `2n + 1` for every `κ` in a strictly descending list.
///
/// `ω` is recorded only: `H_κ` depends on `κ` alone.
pub fn harmonic_kappa_study(omega: f64, kappas: &[f64], n_max: usize) -> Result<KappaStudy> {
    if !(omega > 0.0 && omega.is_finite()) {
        return invalid(format!("omega must be positive, got {omega}"));
    }
    if kappas.is_empty() || kappas.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return invalid("kappa list must be nonempty and positive");
    }
    if kappas.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("kappa list must be strictly descending");
    }
    let per_kappa = kappas
        .par_iter()
        .map(|&kappa| {
            let spectrum = eigs_auto(
                |m| assemble_hkappa(kappa, &LatticeBox::symmetric(1, m)?),
                default_radius(n_max, kappa),
                n_max + 1,
                false,
                MAX_DOUBLINGS,
            )?;
            let m = spectrum.box_upper[0];
            let op = assemble_hkappa(kappa, &LatticeBox::symmetric(1, m)?)?;
            let ritz = ritz_upper_bounds(&op, kappa, n_max)?;
            let k2 = kappa * kappa;
            let rows: Vec<KappaRow> = spectrum
                .eigenvalues
                .iter()
                .zip(ritz)
                .enumerate()
                .map(|(n, (&energy, ritz_bound))| {
                    let ratio = energy / k2;
                    let target = (2 * n + 1) as f64;
                    KappaRow {
                        kappa,
                        n,
                        energy,
                        ratio,
                        target,
                        abs_err: (ratio - target).abs(),
                        ritz_bound,
                    }
                })
                .collect();
            Ok((rows, m))
        })
        .collect::<Result<Vec<_>>>()?;
    let half_widths = per_kappa.iter().map(|(_, m)| *m).collect();
    let rows: Vec<KappaRow> = per_kappa.into_iter().flat_map(|(r, _)| r).collect();
    let inverse: Vec<f64> = kappas.iter().map(|k| 1.0 / k).collect();
    let mut orders = Vec::with_capacity(n_max + 1);
    let mut deviations_decreasing = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let errs: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.abs_err).collect();
        orders.push(successive_orders(&inverse, &errs));
        deviations_decreasing.push(strictly_decreasing(&errs));
    }
    Ok(KappaStudy {
        omega,
        kappas: kappas.to_vec(),
        n_max,
        rows,
        orders,
        deviations_decreasing,
        half_widths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_approach_odd_integers() {
        let s = harmonic_kappa_study(1.0, &[0.2, 0.1], 2).unwrap();
        assert_eq!(s.rows.len(), 6);
        for r in &s.rows {
            assert!(r.energy <= r.ritz_bound * (1.0 + 1e-12));
            assert!(r.abs_err < 0.3, "{r:?}");
        }
        assert!(s.deviations_decreasing.iter().all(|d| *d));
        // the lattice Laplacian lies below p², so the ground ratio rises to 1
        assert!(s.row(0, 0).ratio < s.row(1, 0).ratio && s.row(1, 0).ratio < 1.0);
    }

    #[test]
    fn ascending_kappas_rejected() {
        assert!(harmonic_kappa_study(1.0, &[0.1, 0.2], 1).is_err());
    }
}
