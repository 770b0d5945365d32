//! Finitely presented modules over integral group rings of finite abelian
//! groups.
//!
//! All module algebra is reduced to integer lattices through the flat form
//! described on [`FPModule`].

mod homology;
mod map;
mod mingens;
mod module;
mod resolution;

pub use homology::{homology_h1, SmithCoordinates};
pub use map::{coker_map, is_exact_at, ker_map, projection, submodule_from_generators, ModuleMap};
pub use mingens::{fs_bound, min_gens, prime_divisors, FsBound};
pub use module::FPModule;
pub use resolution::{
    base_change, coinvariants, free_resolution, subquotient_homology, tor_along,
    tor_basechange, tor_mod_n, FreeResolution,
};

