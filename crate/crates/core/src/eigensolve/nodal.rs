use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::LatticeBox;
use crate::numerics::{norm2, sup_norm};

/// Default zero threshold relative to `‖v‖_∞`.
pub const NODAL_THRESHOLD: f64 = 1e-9;
const SYMMETRY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalReport {
    pub index: usize,
    pub domains: usize,
    pub threshold: f64,
    pub symmetry: Option<Symmetry>,
}

/// Graph nodal domains of a vector on a path: entries below
/// `threshold_rel·‖v‖_∞` are removed, the remaining maximal runs of one
/// sign are counted.
pub fn nodal_domains(v: &[f64], threshold_rel: f64) -> Result<usize> {
    let sup = sup_norm(v);
    let cut = threshold_rel * sup;
    let mut domains = 0;
    let mut current = 0i8;
    for &x in v {
        let s = if x.abs() < cut || x == 0.0 {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        };
        if s != 0 && s != current {
            domains += 1;
        }
        current = s;
    }
    if domains == 0 {
        return Err(Error::AllZero);
    }
    Ok(domains)
}

/// Symmetry class under `x ↦ -x` on a symmetric box.
pub fn classify_symmetry(v: &[f64], lattice: &LatticeBox) -> Result<Symmetry> {
    if !lattice.is_symmetric() {
        return invalid("symmetry classification needs a box symmetric about 0");
    }
    if v.len() != lattice.size() {
        return Err(Error::DimensionMismatch {
            expected: lattice.size(),
            actual: v.len(),
        });
    }
    let n = norm2(v);
    let even: Vec<f64> = (0..v.len()).map(|i| v[i] - v[lattice.mirror(i)]).collect();
    let odd: Vec<f64> = (0..v.len()).map(|i| v[i] + v[lattice.mirror(i)]).collect();
    Ok(if norm2(&even) <= SYMMETRY_TOLERANCE * n {
        Symmetry::Symmetric
    } else if norm2(&odd) <= SYMMETRY_TOLERANCE * n {
        Symmetry::Antisymmetric
    } else {
        Symmetry::Neither
    })
}

/// Nodal count and (on symmetric one-dimensional boxes) symmetry class.
pub fn nodal_report(index: usize, v: &[f64], lattice: &LatticeBox, threshold_rel: f64) -> Result<NodalReport> {
    if lattice.dim() != 1 {
        return invalid("nodal domains are counted on one-dimensional boxes");
    }
    let domains = nodal_domains(v, threshold_rel)?;
    let symmetry = if lattice.is_symmetric() {
        Some(classify_symmetry(v, lattice)?)
    } else {
        None
    };
    Ok(NodalReport {
        index,
        domains,
        threshold: threshold_rel,
        symmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_counts() {
        assert_eq!(nodal_domains(&[1.0, -1.0, 1.0], NODAL_THRESHOLD).unwrap(), 3);
        assert_eq!(nodal_domains(&[0.0, 1.0, 2.0, 0.0], NODAL_THRESHOLD).unwrap(), 1);
        assert_eq!(nodal_domains(&[1.0, 1e-12, -1.0], NODAL_THRESHOLD).unwrap(), 2);
        assert!(matches!(nodal_domains(&[0.0, 0.0], NODAL_THRESHOLD), Err(Error::AllZero)));
    }

    #[test]
    fn symmetry_classes() {
        let b = LatticeBox::symmetric(1, 4).unwrap();
        let ones = vec![1.0; b.size()];
        assert_eq!(classify_symmetry(&ones, &b).unwrap(), Symmetry::Symmetric);
        let x: Vec<f64> = (0..b.size()).map(|i| b.point(i)[0] as f64).collect();
        assert_eq!(classify_symmetry(&x, &b).unwrap(), Symmetry::Antisymmetric);
        let mixed: Vec<f64> = x.iter().map(|v| v + 1.0).collect();
        assert_eq!(classify_symmetry(&mixed, &b).unwrap(), Symmetry::Neither);
    }
}
