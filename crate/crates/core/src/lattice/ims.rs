use super::{LatticeBox, SparseSymmetric, SymmetricLatticeOperator};
use crate::error::{invalid, Error, Result};

const UNITY_TOLERANCE: f64 = 1e-12;

/// Cutoff profile `η(y) = 0 ∨ (2 - |y|) ∧ 1`.
pub fn cutoff_profile(y: f64) -> f64 {
    (2.0 - y.abs()).clamp(0.0, 1.0)
}

fn sup_distance(point: &[i64], center: &[f64]) -> f64 {
    point
        .iter()
        .zip(center)
        .map(|(p, c)| (*p as f64 - c).abs())
        .fold(0.0, f64::max)
}

/// Cube partition of unity `η_0, η_1, …, η_m` on `lattice`.
///
/// `η_l(x) = η(2|x - c_l|_∞ / r)` for `l ≥ 1` equals 1 on the cube of
/// half-width `r/2` and vanishes outside half-width `r`;
/// `η_0 = √(1 - Σ η_l²)`. Index 0 of the result is `η_0`.
pub fn ims_partition(
    centers: &[Vec<f64>],
    inner_radius: f64,
    lattice: &LatticeBox,
) -> Result<Vec<Vec<f64>>> {
    if !(inner_radius > 0.0 && inner_radius.is_finite()) {
        return invalid(format!("inner radius must be positive, got {inner_radius}"));
    }
    for c in centers {
        if c.len() != lattice.dim() {
            return Err(Error::DimensionMismatch {
                expected: lattice.dim(),
                actual: c.len(),
            });
        }
    }
    for (l, cl) in centers.iter().enumerate() {
        for (k, ck) in centers.iter().enumerate().skip(l + 1) {
            let gap = cl
                .iter()
                .zip(ck)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if gap < 2.0 * inner_radius {
                return Err(Error::OverlappingSupports {
                    first: l + 1,
                    second: k + 1,
                });
            }
        }
    }
    let size = lattice.size();
    let mut bumps: Vec<Vec<f64>> = centers
        .iter()
        .map(|c| {
            (0..size)
                .map(|i| cutoff_profile(2.0 * sup_distance(&lattice.point(i), c) / inner_radius))
                .collect()
        })
        .collect();
    let outside: Vec<f64> = (0..size)
        .map(|i| {
            let s: f64 = bumps.iter().map(|b| b[i] * b[i]).sum();
            (1.0 - s).max(0.0).sqrt()
        })
        .collect();
    bumps.insert(0, outside);
    Ok(bumps)
}

/// Largest `|Σ_j η_j(x)² - 1|` over the box.
pub fn unity_defect(etas: &[Vec<f64>]) -> f64 {
    let size = etas.first().map_or(0, Vec::len);
    (0..size)
        .map(|i| (etas.iter().map(|e| e[i] * e[i]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}

fn check_partition(op: &SymmetricLatticeOperator, etas: &[Vec<f64>]) -> Result<()> {
    if etas.is_empty() {
        return invalid("partition must contain at least one function");
    }
    for e in etas {
        if e.len() != op.size() {
            return Err(Error::DimensionMismatch {
                expected: op.size(),
                actual: e.len(),
            });
        }
    }
    let defect = unity_defect(etas);
    if defect > UNITY_TOLERANCE {
        return Err(Error::PartitionNotUnity { defect });
    }
    Ok(())
}

/// `[η, [η, L]]` for the off-diagonal part of `op`: entries
/// `L(x, y)(η(x) - η(y))²`; multiplication operators commute with `η` and
/// drop out.
pub fn double_commutator(op: &SymmetricLatticeOperator, eta: &[f64]) -> SparseSymmetric {
    let lattice = op.lattice();
    let c = op.coupling();
    let rows = (0..op.size())
        .map(|i| {
            let mut row: Vec<(usize, f64)> = lattice
                .neighbors(i)
                .map(|j| {
                    let d = eta[i] - eta[j];
                    (j, c * d * d)
                })
                .collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect();
    SparseSymmetric::from_rows(rows)
}

/// `½ Σ_j [η_j, [η_j, L]]`, assembled entrywise.
pub fn ims_remainder(op: &SymmetricLatticeOperator, etas: &[Vec<f64>]) -> Result<SparseSymmetric> {
    check_partition(op, etas)?;
    let lattice = op.lattice();
    let c = op.coupling();
    let rows = (0..op.size())
        .map(|i| {
            let mut row: Vec<(usize, f64)> = lattice
                .neighbors(i)
                .map(|j| {
                    let s: f64 = etas
                        .iter()
                        .map(|e| {
                            let d = e[i] - e[j];
                            d * d
                        })
                        .sum();
                    (j, 0.5 * c * s)
                })
                .collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect();
    Ok(SparseSymmetric::from_rows(rows))
}

/// `max |H - Σ_j η_j H η_j - remainder|` over stored entries, relative to
/// the largest entry of `H`.
pub fn ims_identity_residual(
    op: &SymmetricLatticeOperator,
    etas: &[Vec<f64>],
    remainder: &SparseSymmetric,
) -> Result<f64> {
    check_partition(op, etas)?;
    let lattice = op.lattice();
    let mut worst = 0.0f64;
    for i in 0..op.size() {
        for j in lattice.neighbors(i).chain([i]) {
            let h = op.entry(i, j);
            let localized: f64 = etas.iter().map(|e| e[i] * h * e[j]).sum();
            let r = remainder.entry(i, j);
            worst = worst.max((h - localized - r).abs());
        }
    }
    Ok(worst / op.max_abs_entry())
}

/// Largest `|η(x) - η(y)|` over nearest-neighbour pairs in the box.
pub fn step_variation(eta: &[f64], lattice: &LatticeBox) -> f64 {
    (0..lattice.size())
        .flat_map(|i| lattice.neighbors(i).map(move |j| (eta[i] - eta[j]).abs()))
        .fold(0.0, f64::max)
}
