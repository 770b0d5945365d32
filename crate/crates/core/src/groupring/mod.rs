//! Finite abelian groups and their group rings over `Z`, `Z/N` and `Q`.

mod element;
mod group;

pub use element::{BaseRing, GroupRingElement};
pub use group::{FiniteAbelianGroup, GroupHom, Subgroup};
