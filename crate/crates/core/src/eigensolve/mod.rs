//! Low-lying spectra of assembled operators and spectral diagnostics.

mod certificates;
mod dense;
pub mod inverse;
mod nodal;
mod separable;
pub mod tridiag;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::SymmetricLatticeOperator;
use crate::numerics::norm2;

pub use certificates::{
    rayleigh, subspace_upper_bounds, verify_superharmonic, SuperharmonicCertificate,
    MAX_GRAM_CONDITION,
};
pub use dense::{dense_eigenpairs, dense_eigenvalues, DENSE_LIMIT};
pub use inverse::{eigvec_inverse_iteration, eigvecs_inverse_iteration, normalize_sign};
pub use nodal::{classify_symmetry, nodal_domains, nodal_report, NodalReport, Symmetry, NODAL_THRESHOLD};
pub use separable::{eigs_separable, eigs_separable_indexed};

/// Relative gap below which neighbouring eigenvalues form a cluster.
pub const CLUSTER_RTOL: f64 = 1e-10;
/// Box auto-sizing stops once every tracked eigenvalue moves by at most
/// this times `1 + |E|` under a doubling.
pub const TRUNCATION_RTOL: f64 = 1e-11;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// `‖Hv - λv‖₂` per eigenpair when vectors were requested.
    pub residuals: Option<Vec<f64>>,
    /// Index groups of size ≥ 2 whose consecutive gaps are below
    /// [`CLUSTER_RTOL`].
    pub clusters: Vec<Vec<usize>>,
    pub box_lower: Vec<i64>,
    pub box_upper: Vec<i64>,
    /// Largest `|ΔE_n|/(1 + |E_n|)` under the last box doubling.
    pub truncation_change: Option<f64>,
    pub doublings: usize,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_cluster_size(&self) -> usize {
        self.clusters.iter().map(Vec::len).max().unwrap_or(1)
    }

    pub fn vector(&self, n: usize) -> Option<&[f64]> {
        self.eigenvectors.as_ref().map(|v| v[n].as_slice())
    }
}

fn close(a: f64, b: f64) -> bool {
    (b - a).abs() <= CLUSTER_RTOL * a.abs().max(b.abs())
}

/// Consecutive runs of [`close`] eigenvalues, singletons included.
fn groups(values: &[f64]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(g) if close(values[*g.last().unwrap()], v) => g.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

fn clusters(values: &[f64]) -> Vec<Vec<usize>> {
    groups(values).into_iter().filter(|g| g.len() > 1).collect()
}

fn residual(op: &SymmetricLatticeOperator, lambda: f64, v: &[f64]) -> f64 {
    let hv = op.apply(v);
    let r: Vec<f64> = hv.iter().zip(v).map(|(a, b)| a - lambda * b).collect();
    norm2(&r)
}

/// Lowest `k` eigenvalues of a one-dimensional operator by Sturm bisection,
/// with eigenvectors by inverse iteration when `vectors` is set.
pub fn eigs_tridiag(op: &SymmetricLatticeOperator, k: usize, vectors: bool) -> Result<SpectrumResult> {
    let (diag, off) = op
        .tridiagonal()
        .ok_or_else(|| Error::InvalidArgument("Sturm bisection needs a one-dimensional box".into()))?;
    if k == 0 || k > diag.len() {
        return invalid(format!("requested {k} eigenvalues of a {}-point box", diag.len()));
    }
    let values = tridiag::tridiag_eigenvalues(&diag, &off, k);
    let (eigenvectors, residuals) = if vectors {
        let mut vecs = Vec::with_capacity(k);
        for g in groups(&values) {
            let lambdas: Vec<f64> = g.iter().map(|&i| values[i]).collect();
            vecs.extend(eigvecs_inverse_iteration(&diag, &off, &lambdas)?);
        }
        let res = vecs
            .iter()
            .zip(&values)
            .map(|(v, l)| residual(op, *l, v))
            .collect();
        (Some(vecs), Some(res))
    } else {
        (None, None)
    };
    Ok(SpectrumResult {
        clusters: clusters(&values),
        eigenvalues: values,
        eigenvectors,
        residuals,
        box_lower: op.lattice().lower().to_vec(),
        box_upper: op.lattice().upper().to_vec(),
        truncation_change: None,
        doublings: 0,
    })
}

/// Lowest `k` eigenpairs from the dense fallback (at most
/// [`DENSE_LIMIT`] points).
pub fn eigs_dense(op: &SymmetricLatticeOperator, k: usize, vectors: bool) -> Result<SpectrumResult> {
    if k == 0 || k > op.size() {
        return invalid(format!("requested {k} eigenvalues of a {}-point box", op.size()));
    }
    let (mut values, vecs) = if vectors {
        let (values, mut vecs) = dense_eigenpairs(op)?;
        vecs.truncate(k);
        vecs.iter_mut().for_each(|v| normalize_sign(v));
        (values, vecs)
    } else {
        (dense_eigenvalues(op)?, Vec::new())
    };
    values.truncate(k);
    let residuals = vectors.then(|| {
        vecs.iter()
            .zip(&values)
            .map(|(v, l)| residual(op, *l, v))
            .collect()
    });
    Ok(SpectrumResult {
        clusters: clusters(&values),
        eigenvalues: values,
        eigenvectors: vectors.then_some(vecs),
        residuals,
        box_lower: op.lattice().lower().to_vec(),
        box_upper: op.lattice().upper().to_vec(),
        truncation_change: None,
        doublings: 0,
    })
}

/// Bisection for `d = 1`, dense otherwise.
pub fn eigs(op: &SymmetricLatticeOperator, k: usize, vectors: bool) -> Result<SpectrumResult> {
    if op.lattice().dim() == 1 {
        eigs_tridiag(op, k, vectors)
    } else {
        eigs_dense(op, k, vectors)
    }
}

/// Solve on boxes of half-width `start, 2·start, …` built by `build` until
/// the lowest `k` eigenvalues move by at most [`TRUNCATION_RTOL`]`·(1 + |E|)`.
pub fn eigs_auto<F>(build: F, start: i64, k: usize, vectors: bool, max_doublings: usize) -> Result<SpectrumResult>
where
    F: Fn(i64) -> Result<SymmetricLatticeOperator>,
{
    if start < 1 {
        return invalid("starting half-width must be positive");
    }
    let mut m = start;
    let mut previous = eigs(&build(m)?, k, false)?;
    for doubling in 1..=max_doublings {
        m *= 2;
        let op = build(m)?;
        let current = eigs(&op, k, false)?;
        let change = previous
            .eigenvalues
            .iter()
            .zip(&current.eigenvalues)
            .map(|(a, b)| (b - a).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max);
        if change <= TRUNCATION_RTOL {
            let mut result = if vectors { eigs(&op, k, true)? } else { current };
            result.truncation_change = Some(change);
            result.doublings = doubling;
            return Ok(result);
        }
        previous = current;
    }
    Err(Error::ConvergenceFailure {
        what: format!("box auto-sizing from half-width {start}"),
        iterations: max_doublings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{assemble_hkappa, assemble_laplacian, LatticeBox};

    #[test]
    fn three_point_laplacian() {
        let op = assemble_laplacian(&LatticeBox::symmetric(1, 1).unwrap());
        let r = eigs_tridiag(&op, 3, true).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.eigenvalues[0] - (2.0 - s2)).abs() < 1e-13);
        assert!((r.eigenvalues[2] - (2.0 + s2)).abs() < 1e-12);
        let res = r.residuals.unwrap();
        assert!(res.iter().all(|x| *x < 1e-10), "{res:?}");
    }

    #[test]
    fn ground_state_is_positive() {
        let b = LatticeBox::symmetric(1, 120).unwrap();
        let r = eigs_tridiag(&assemble_hkappa(0.1, &b).unwrap(), 1, true).unwrap();
        assert!(r.vector(0).unwrap().iter().all(|x| *x > 0.0));
    }

    #[test]
    fn auto_box_converges() {
        let r = eigs_auto(
            |m| assemble_hkappa(0.2, &LatticeBox::symmetric(1, m)?),
            10,
            3,
            false,
            8,
        )
        .unwrap();
        assert!(r.truncation_change.unwrap() <= TRUNCATION_RTOL);
        assert!(r.doublings >= 1);
    }

    #[test]
    fn cluster_grouping() {
        assert_eq!(clusters(&[1.0, 1.0 + 1e-12, 2.0, 3.0]), vec![vec![0, 1]]);
        assert!(clusters(&[1.0, 2.0]).is_empty());
    }
}
