//! Exact finite-level computations in towers of integral group rings
//! `Z[Γ_m]` of finite abelian p-groups.
//!
//! The crate is layered bottom-up:
//!
//! * [`zlinalg`]: Hermite/Smith forms, kernels and lattices over `Z`;
//! * [`groupring`]: finite abelian groups and their group rings;
//! * [`fpmod`]: finitely presented modules, resolutions, Tor, `H_1` and
//!   minimal generator counts;
//! * [`tower`]: towers of quotients `Γ_m` with their distinguished elements;
//! * [`verify`]: check routines producing deterministic [`CheckReport`]s.

pub mod error;
pub mod ffield;
pub mod fpmod;
pub mod groupring;
pub mod tower;
pub mod verify;
pub mod zlinalg;

mod bigint_strings;

pub use error::{Error, Result};
pub use fpmod::{FPModule, ModuleMap};
pub use groupring::{BaseRing, FiniteAbelianGroup, GroupHom, GroupRingElement, Subgroup};
pub use tower::{Tower, TowerElement, TowerModule, TowerSpec};
pub use verify::{CheckReport, DigitSequence, Expectation};
pub use zlinalg::{AbelianInvariants, IntMatrix, Lattice, SmithForm};
