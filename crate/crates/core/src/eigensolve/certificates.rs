use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::{LatticeBox, SymmetricLatticeOperator};
use crate::numerics::{dot, norm2};

/// Largest admissible condition number of the test-vector Gram matrix.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// Outcome of a pointwise check of `(H + α)u ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperharmonicCertificate {
    pub holds: bool,
    /// `min_x ((H + α)u)(x)` over the region.
    pub min_slack: f64,
    /// `min_x ((H + α)u)(x) / u(x)`.
    pub min_relative_slack: f64,
    /// Lattice point where the relative slack is smallest (first axis).
    pub worst_point: i64,
    pub violations: usize,
}

/// Evaluate `((H + α)u)(x)` on every `x` in `region`.
///
/// `u` is given on the operator's box (values outside it count as zero) and
/// must be strictly positive on `region`. When the check holds on the whole
/// box the ground energy of `H` is at least `-α`.
pub fn verify_superharmonic(
    op: &SymmetricLatticeOperator,
    alpha: f64,
    u: &[f64],
    region: &LatticeBox,
) -> Result<SuperharmonicCertificate> {
    if u.len() != op.size() {
        return Err(Error::DimensionMismatch {
            expected: op.size(),
            actual: u.len(),
        });
    }
    if !region.is_subbox_of(op.lattice()) {
        return invalid("certificate region must lie inside the operator box");
    }
    let lattice = op.lattice();
    let mut cert = SuperharmonicCertificate {
        holds: true,
        min_slack: f64::INFINITY,
        min_relative_slack: f64::INFINITY,
        worst_point: 0,
        violations: 0,
    };
    for r in 0..region.size() {
        let p = region.point(r);
        let i = lattice.index_of(&p).expect("region inside box");
        if !(u[i] > 0.0) {
            return Err(Error::NonPositiveFunction { index: i });
        }
        let nb: f64 = lattice.neighbors(i).map(|j| u[j]).sum();
        let value = (op.diagonal(i) + alpha) * u[i] + op.coupling() * nb;
        if value < 0.0 {
            cert.holds = false;
            cert.violations += 1;
        }
        cert.min_slack = cert.min_slack.min(value);
        let rel = value / u[i];
        if rel < cert.min_relative_slack {
            cert.min_relative_slack = rel;
            cert.worst_point = p[0];
        }
    }
    Ok(cert)
}

/// `⟨v, Hv⟩ / ⟨v, v⟩`.
pub fn rayleigh(op: &SymmetricLatticeOperator, v: &[f64]) -> Result<f64> {
    let vv = dot(v, v);
    if vv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(dot(v, &op.apply(v)) / vv)
}

/// Ritz values of `op` on `span(vectors)`, ascending. The `i`-th value is an
/// upper bound on the `i`-th eigenvalue of `op`.
pub fn subspace_upper_bounds(op: &SymmetricLatticeOperator, vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = vectors.len();
    if m == 0 {
        return invalid("at least one test vector is required");
    }
    let normalized: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            let n = norm2(v);
            if n == 0.0 {
                Err(Error::ZeroVector)
            } else {
                Ok(v.iter().map(|x| x / n).collect())
            }
        })
        .collect::<Result<_>>()?;
    let images: Vec<Vec<f64>> = normalized.iter().map(|v| op.apply(v)).collect();
    let a = DMatrix::from_fn(m, m, |i, j| {
        0.5 * (dot(&normalized[i], &images[j]) + dot(&normalized[j], &images[i]))
    });
    let b = DMatrix::from_fn(m, m, |i, j| dot(&normalized[i], &normalized[j]));
    let beig = SymmetricEigen::new(b.clone()).eigenvalues;
    let bmax = beig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bmin = beig.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if bmin > 0.0 { bmax / bmin } else { f64::INFINITY };
    if !(condition <= MAX_GRAM_CONDITION) {
        return Err(Error::IllConditionedSpan { condition });
    }
    let chol = b
        .cholesky()
        .ok_or(Error::IllConditionedSpan { condition })?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditionedSpan { condition })?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut values: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}
