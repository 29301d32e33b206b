use crate::eigensolve::tridiag;
use crate::numerics::norm2;

/// Row-compressed symmetric matrix, rows sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseSymmetric {
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        Self { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.rows[row]
            .binary_search_by_key(&col, |e| e.0)
            .map(|k| self.rows[row][k].1)
            .unwrap_or(0.0)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(j, a)| a * v[*j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .fold(0.0f64, |m, (_, a)| m.max(a.abs()))
    }

    /// Largest absolute row sum; an upper bound on the spectral norm.
    pub fn max_row_sum(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(_, a)| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.size();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                match j as isize - i as isize {
                    0 => diag[i] = a,
                    1 => off[i] = a,
                    -1 => {}
                    _ => return None,
                }
            }
        }
        Some((diag, off))
    }

    /// Spectral norm `max |λ|`.
    ///
    /// Exact (Sturm bisection) when the matrix is tridiagonal, otherwise the
    /// extreme Ritz values of a fully reorthogonalized Lanczos run.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.size();
        if n == 0 {
            return 0.0;
        }
        if let Some((diag, off)) = self.tridiagonal() {
            let lo = tridiag::kth_eigenvalue(&diag, &off, 0);
            let hi = tridiag::kth_eigenvalue(&diag, &off, n - 1);
            return lo.abs().max(hi.abs());
        }
        self.lanczos_extremes(n.min(300))
    }

    fn lanczos_extremes(&self, steps: usize) -> f64 {
        let n = self.size();
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
        let mut q: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662).sin()).collect();
        let nq = norm2(&q);
        q.iter_mut().for_each(|x| *x /= nq);
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut last = f64::NAN;
        for step in 0..steps {
            let mut w = self.apply(&q);
            let a: f64 = w.iter().zip(&q).map(|(x, y)| x * y).sum();
            alpha.push(a);
            basis.push(q.clone());
            for _ in 0..2 {
                for b in &basis {
                    let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let bnorm = norm2(&w);
            if bnorm <= 1e-13 * alpha.iter().fold(1.0f64, |m, v| m.max(v.abs())) {
                break;
            }
            if step % 10 == 9 {
                let current = ritz_extreme(&alpha, &beta);
                if (current - last).abs() <= 1e-12 * current {
                    return current;
                }
                last = current;
            }
            beta.push(bnorm);
            q = w.into_iter().map(|x| x / bnorm).collect();
        }
        beta.truncate(alpha.len().saturating_sub(1));
        ritz_extreme(&alpha, &beta)
    }
}

/// `max |θ|` over the Ritz values of the Lanczos tridiagonal.
fn ritz_extreme(alpha: &[f64], beta: &[f64]) -> f64 {
    let m = alpha.len();
    if m == 0 {
        return 0.0;
    }
    let lo = tridiag::kth_eigenvalue(alpha, beta, 0);
    let hi = tridiag::kth_eigenvalue(alpha, beta, m - 1);
    lo.abs().max(hi.abs())
}

#[cfg(test)]
mod tests {
    use crate::lattice::{assemble_laplacian, LatticeBox};

    #[test]
    fn laplacian_norm_tridiagonal_and_lanczos() {
        let l1 = assemble_laplacian(&LatticeBox::symmetric(1, 10).unwrap());
        let exact = l1.laplace_norm();
        assert!((l1.to_sparse().spectral_norm() - exact).abs() < 1e-12);

        let l2 = assemble_laplacian(&LatticeBox::symmetric(2, 6).unwrap());
        let exact = l2.laplace_norm();
        let lz = l2.to_sparse().spectral_norm();
        assert!((lz - exact).abs() < 1e-9, "{lz} vs {exact}");
        assert!(l2.to_sparse().max_row_sum() >= exact);
    }
}
