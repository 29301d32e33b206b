use rayon::prelude::*;
use serde::Serialize;

use super::MAX_DOUBLINGS;
use crate::eigensolve::tridiag::BISECTION_RTOL;
use crate::eigensolve::{eigs_auto, eigs_tridiag};
use crate::error::{invalid, Result};
use crate::hermite::default_radius;
use crate::lattice::{assemble_hkappa, assemble_modified, LatticeBox, ModifiedPotentialParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModifiedRow {
    pub kappa: f64,
    pub n: usize,
    pub spike_location: i64,
    /// `E_n(κ)`.
    pub plain: f64,
    /// `Ẽ_n(κ)`.
    pub modified: f64,
    /// `|Ẽ_n - E_n|/κ²`.
    pub diff_over_kappa2: f64,
    /// `Ẽ_n ≥ E_n` up to the bisection tolerance.
    pub ordered: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModifiedComparison {
    pub delta: f64,
    pub n_max: usize,
    pub kappas: Vec<f64>,
    /// Grouped by `κ`, then level.
    pub rows: Vec<ModifiedRow>,
    pub half_widths: Vec<i64>,
}

impl ModifiedComparison {
    pub fn row(&self, kappa_index: usize, n: usize) -> &ModifiedRow {
        &self.rows[kappa_index * (self.n_max + 1) + n]
    }
}

/// Low-lying spectra of `H_κ` and of the spiked `H̃_κ` on the same box.
///
/// The box is auto-sized for `H_κ`, starting wide enough to contain the
/// spikes at `±x_δ`.
pub fn modified_vs_plain(n_max: usize, kappas: &[f64], delta: f64) -> Result<ModifiedComparison> {
    if kappas.is_empty() {
        return invalid("kappa list is empty");
    }
    let per_kappa = kappas
        .par_iter()
        .map(|&kappa| {
            let spike = ModifiedPotentialParams::new(kappa, delta)?;
            let start = default_radius(n_max, kappa).max(spike.spike_location() + 1);
            let plain = eigs_auto(
                |m| assemble_hkappa(kappa, &LatticeBox::symmetric(1, m)?),
                start,
                n_max + 1,
                false,
                MAX_DOUBLINGS,
            )?;
            let m = plain.box_upper[0];
            let op = assemble_modified(&spike, &LatticeBox::symmetric(1, m)?)?;
            let modified = eigs_tridiag(&op, n_max + 1, false)?;
            let k2 = kappa * kappa;
            let rows: Vec<ModifiedRow> = plain
                .eigenvalues
                .iter()
                .zip(&modified.eigenvalues)
                .enumerate()
                .map(|(n, (&e, &et))| ModifiedRow {
                    kappa,
                    n,
                    spike_location: spike.spike_location(),
                    plain: e,
                    modified: et,
                    diff_over_kappa2: (et - e).abs() / k2,
                    ordered: et >= e - 2.0 * BISECTION_RTOL * e.abs(),
                })
                .collect();
            Ok((rows, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModifiedComparison {
        delta,
        n_max,
        kappas: kappas.to_vec(),
        half_widths: per_kappa.iter().map(|(_, m)| *m).collect(),
        rows: per_kappa.into_iter().flat_map(|(r, _)| r).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spike_raises_every_level() {
        let c = modified_vs_plain(3, &[0.1, 0.05], 0.25).unwrap();
        assert_eq!(c.rows.len(), 8);
        assert!(c.rows.iter().all(|r| r.ordered));
    }

    #[test]
    fn bad_delta_rejected() {
        assert!(modified_vs_plain(1, &[0.1], 0.5).is_err());
        assert!(modified_vs_plain(1, &[], 0.25).is_err());
    }
}
