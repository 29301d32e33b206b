use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::lattice::SymmetricLatticeOperator;

/// Size cap for the dense fallback.
pub const DENSE_LIMIT: usize = 4096;

/// All eigenpairs of `op`, ascending, from a dense symmetric solve.
/// Eigenvectors are returned as columns, one `Vec` per eigenvalue.
pub fn dense_eigenpairs(op: &SymmetricLatticeOperator) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if op.size() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            size: op.size(),
            limit: DENSE_LIMIT,
        });
    }
    let eig = SymmetricEigen::new(op.to_dense());
    let mut order: Vec<usize> = (0..op.size()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Ok((values, vectors))
}

/// All eigenvalues of `op`, ascending, without forming eigenvectors.
pub fn dense_eigenvalues(op: &SymmetricLatticeOperator) -> Result<Vec<f64>> {
    if op.size() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            size: op.size(),
            limit: DENSE_LIMIT,
        });
    }
    let mut values: Vec<f64> = op.to_dense().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}
