//! Fixtures shared by the solver benchmarks.

use lsc_core::lattice::{assemble_hkappa, LatticeBox};

/// Diagonal and off-diagonal of `H_κ` on `[-m, m]`.
pub fn hkappa_tridiagonal(kappa: f64, half_width: i64) -> (Vec<f64>, Vec<f64>) {
    let lattice = LatticeBox::symmetric(1, half_width).expect("positive half-width");
    assemble_hkappa(kappa, &lattice)
        .expect("positive kappa")
        .tridiagonal()
        .expect("one-dimensional operator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shape() {
        let (d, e) = hkappa_tridiagonal(0.1, 10);
        assert_eq!((d.len(), e.len()), (21, 20));
        assert_eq!(d[10], 2.0);
    }
}
