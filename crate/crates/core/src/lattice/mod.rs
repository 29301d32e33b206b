//! Lattice boxes and the operators assembled on them.

mod assemble;
mod ims;
mod intervals;
mod lattice_box;
mod operator;
mod sparse;

pub use assemble::{
    assemble_hkappa, assemble_hn, assemble_hn_scaled, assemble_laplacian, assemble_modified,
    assemble_modified_window, harmonic_lattice_potential, ModifiedPotentialParams,
};
pub use ims::{
    cutoff_profile, double_commutator, ims_identity_residual, ims_partition, ims_remainder,
    step_variation, unity_defect,
};
pub use intervals::{IntervalDecomposition, NodalInterval};
pub use lattice_box::LatticeBox;
pub use operator::SymmetricLatticeOperator;
pub use sparse::SparseSymmetric;

/// Principal submatrix of `op` on `window`.
pub fn restrict(
    op: &SymmetricLatticeOperator,
    window: &LatticeBox,
) -> crate::Result<SymmetricLatticeOperator> {
    op.restrict(window)
}
