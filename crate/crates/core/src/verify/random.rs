use rand::Rng;

use crate::error::Result;
use crate::fpmod::FPModule;
use crate::groupring::{FiniteAbelianGroup, GroupRingElement};

/// A sparse random presentation over `Z[G]` with 1 or 2 generators, 1 or 2
/// relations and coefficients in `[-2, 2]`.
pub fn random_module<R: Rng>(g: &FiniteAbelianGroup, rng: &mut R) -> Result<FPModule> {
    let n = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=2);
    let rels = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let c: Vec<i64> = (0..g.order())
                        .map(|_| if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 })
                        .collect();
                    GroupRingElement::from_i64(g, &c)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FPModule::new(g, n, &rels)
}
