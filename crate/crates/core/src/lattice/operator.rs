use std::io::{self, Write};

use nalgebra::DMatrix;

use super::{LatticeBox, SparseSymmetric};
use crate::error::{invalid, Result};

/// `s·Δ + diag(w)` on a Dirichlet box: diagonal `2d·s + w(x)`, coupling `-s`
/// between nearest neighbours inside the box, nothing across the boundary.
///
/// Storing the kinetic scale and the potential separately keeps the
/// operator exactly symmetric and makes the Laplace-type part available for
/// IMS computations.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricLatticeOperator {
    lattice: LatticeBox,
    kinetic: f64,
    potential: Vec<f64>,
}

impl SymmetricLatticeOperator {
    pub fn new(lattice: LatticeBox, kinetic: f64, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != lattice.size() {
            return Err(crate::Error::DimensionMismatch {
                expected: lattice.size(),
                actual: potential.len(),
            });
        }
        if !kinetic.is_finite() || potential.iter().any(|v| !v.is_finite()) {
            return invalid("operator coefficients must be finite");
        }
        Ok(Self {
            lattice,
            kinetic,
            potential,
        })
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    /// Scale `s` of the Laplacian part.
    pub fn kinetic_scale(&self) -> f64 {
        self.kinetic
    }

    /// Multiplicative part `w(x)`.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn diagonal(&self, index: usize) -> f64 {
        2.0 * self.lattice.dim() as f64 * self.kinetic + self.potential[index]
    }

    pub fn diagonal_vec(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.diagonal(i)).collect()
    }

    /// Value on each nearest-neighbour pair inside the box.
    pub fn coupling(&self) -> f64 {
        -self.kinetic
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        if row == col {
            return self.diagonal(row);
        }
        if self.lattice.neighbors(row).any(|j| j == col) {
            self.coupling()
        } else {
            0.0
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.size());
        let c = self.coupling();
        (0..self.size())
            .map(|i| {
                let nb: f64 = self.lattice.neighbors(i).map(|j| v[j]).sum();
                self.diagonal(i) * v[i] + c * nb
            })
            .collect()
    }

    /// `(diagonal, off-diagonal)` for one-dimensional boxes.
    pub fn tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.lattice.dim() != 1 {
            return None;
        }
        let n = self.size();
        Some((self.diagonal_vec(), vec![self.coupling(); n.saturating_sub(1)]))
    }

    /// The Laplace-type part `s·Δ` with the same Dirichlet truncation.
    pub fn laplace_part(&self) -> Self {
        Self {
            lattice: self.lattice.clone(),
            kinetic: self.kinetic,
            potential: vec![0.0; self.size()],
        }
    }

    /// Spectral norm of `s·Δ` on this box, from the closed-form Dirichlet
    /// spectrum `Σ_axes (2 - 2cos(kπ/(m+1)))`.
    pub fn laplace_norm(&self) -> f64 {
        let top: f64 = (0..self.lattice.dim())
            .map(|axis| {
                let m = self.lattice.extent(axis) as f64;
                2.0 - 2.0 * (m * std::f64::consts::PI / (m + 1.0)).cos()
            })
            .sum();
        self.kinetic.abs() * top
    }

    /// Rows touching the box boundary with the number of dropped neighbours.
    pub fn boundary_rows(&self) -> Vec<(usize, usize)> {
        (0..self.size())
            .filter_map(|i| {
                let dropped = self.lattice.dropped_neighbors(i);
                (dropped > 0).then_some((i, dropped))
            })
            .collect()
    }

    /// Row sums of the Laplace-type part (zero in the interior).
    pub fn laplace_row_sums(&self) -> Vec<f64> {
        let d = self.lattice.dim() as f64;
        (0..self.size())
            .map(|i| self.kinetic * (2.0 * d - self.lattice.neighbors(i).count() as f64))
            .collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        (0..self.size())
            .map(|i| self.diagonal(i).abs())
            .fold(self.kinetic.abs(), f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diagonal(i);
            for j in self.lattice.neighbors(i) {
                m[(i, j)] = self.coupling();
            }
        }
        m
    }

    pub fn to_sparse(&self) -> SparseSymmetric {
        let rows = (0..self.size())
            .map(|i| {
                let mut row: Vec<(usize, f64)> = self
                    .lattice
                    .neighbors(i)
                    .map(|j| (j, self.coupling()))
                    .collect();
                row.push((i, self.diagonal(i)));
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        SparseSymmetric::from_rows(rows)
    }

    /// Principal submatrix on `sub`: couplings across its boundary are
    /// dropped, the diagonal is kept.
    pub fn restrict(&self, sub: &LatticeBox) -> Result<Self> {
        if !sub.is_subbox_of(&self.lattice) {
            return invalid(format!(
                "restriction window {:?}..={:?} is not inside {:?}..={:?}",
                sub.lower(),
                sub.upper(),
                self.lattice.lower(),
                self.lattice.upper()
            ));
        }
        let potential = (0..sub.size())
            .map(|i| {
                let p = sub.point(i);
                self.potential[self.lattice.index_of(&p).expect("sub-box point")]
            })
            .collect();
        Ok(Self {
            lattice: sub.clone(),
            kinetic: self.kinetic,
            potential,
        })
    }

    /// Coordinate triplets `row col value`, one per nonzero, row-major.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# rows={} cols={} nnz={}", self.size(), self.size(), self.nnz())?;
        for i in 0..self.size() {
            let mut cols: Vec<usize> = self.lattice.neighbors(i).chain([i]).collect();
            cols.sort_unstable();
            for j in cols {
                writeln!(out, "{} {} {:.16e}", i, j, self.entry(i, j))?;
            }
        }
        Ok(())
    }

    fn nnz(&self) -> usize {
        (0..self.size()).map(|i| 1 + self.lattice.neighbors(i).count()).sum()
    }
}
