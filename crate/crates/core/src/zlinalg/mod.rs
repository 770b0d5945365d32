//! Exact integer linear algebra: Hermite and Smith forms, kernels, integer
//! solving and lattice arithmetic.
//!
//! Everything here is dense and uses arbitrary-precision entries. Pivoting is
//! deterministic (smallest nonzero absolute value, lowest index on ties) so
//! repeated runs produce identical transforms.

mod hnf;
mod lattice;
mod matrix;
mod snf;

pub use hnf::{hnf, hnf_only, kernel_basis, solve};
pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub(crate) use matrix::to_u64_mod;
pub use snf::{cokernel_invariants, invariant_factors, snf, AbelianInvariants, SmithForm};

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> Option<IntMatrix> {
    if !u.is_square() {
        return None;
    }
    let (h, w) = hnf(u);
    (h == IntMatrix::identity(u.rows())).then_some(w)
}
