use num_bigint::BigInt;

use super::map::{identity_matrix, kernel_generators, ModuleMap};
use super::module::{greedy_r_generators, FPModule};
use crate::error::{Error, Result};
use crate::groupring::{GroupHom, GroupRingElement, Subgroup};
use crate::zlinalg::{AbelianInvariants, IntMatrix, Lattice};

/// A free resolution `F_k -> ... -> F_0 -> M`.
///
/// `maps[0]` is the augmentation `F_0 -> M`; `maps[i]` for `i >= 1` is the
/// differential `F_i -> F_{i-1}`. The list stops early once a kernel vanishes,
/// in which case all later differentials are zero.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub maps: Vec<ModuleMap>,
}

impl FreeResolution {
    /// Ranks `t_i` of the free modules.
    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.source().n_gens()).collect()
    }

    /// The differential `F_i -> F_{i-1}` (`i >= 1`), if nonzero.
    pub fn differential(&self, i: usize) -> Option<&ModuleMap> {
        self.maps.get(i)
    }

    /// Free module `F_i` (zero beyond the computed range).
    pub fn free_module(&self, i: usize) -> Option<&FPModule> {
        self.maps.get(i).map(|m| m.source())
    }
}

/// Free resolution of length `length`.
///
/// `F_0 -> M` sends the basis to the given generators; the first syzygies are
/// generated greedily by the given relations, later ones from the Hermite
/// basis of each kernel as in [`super::ker_map`].
pub fn free_resolution(m: &FPModule, length: usize) -> Result<FreeResolution> {
    let group = m.group();
    let f0 = FPModule::free(group, m.n_gens());
    let eps = ModuleMap::new(f0.clone(), m.clone(), identity_matrix(group, m.n_gens()))?;
    let mut maps = vec![eps];
    if length == 0 || m.relation_lattice().is_zero() {
        return Ok(FreeResolution { maps });
    }
    let rel = m.relation_lattice();
    let gens = greedy_r_generators(
        group,
        rel,
        &Lattice::zero(m.flat_dim()),
        m.flat_relations().to_vec(),
    );
    maps.push(free_map_from_columns(&f0, &gens));
    while maps.len() <= length {
        let last = maps.last().unwrap();
        let cols = kernel_generators(last);
        if cols.is_empty() {
            break;
        }
        maps.push(free_map_from_columns(last.source(), &cols));
    }
    Ok(FreeResolution { maps })
}

/// `R^k -> target` sending the `j`-th basis vector to the flat vector `cols[j]`.
fn free_map_from_columns(target: &FPModule, cols: &[Vec<BigInt>]) -> ModuleMap {
    let group = target.group();
    let src = FPModule::free(group, cols.len());
    let matrix = (0..target.n_gens())
        .map(|i| cols.iter().map(|c| target.unflatten(c)[i].clone()).collect())
        .collect();
    ModuleMap::new(src, target.clone(), matrix).expect("free source")
}

/// `Z[Γ'] ⊗ M` along a surjection `h : Γ -> Γ'`, with the natural map.
pub fn base_change(h: &GroupHom, m: &FPModule) -> Result<(FPModule, ModuleMap)> {
    if h.source() != m.group() {
        return Err(Error::GroupMismatch("base change along a hom from another group".into()));
    }
    let rels: Vec<Vec<GroupRingElement>> = m
        .relations()
        .iter()
        .map(|col| col.iter().map(|x| x.push(h)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let t = h.target();
    let mb = FPModule::new(t, m.n_gens(), &rels)?;
    let map = ModuleMap::new_along(m.clone(), mb.clone(), h.clone(), identity_matrix(t, m.n_gens()))?;
    Ok((mb, map))
}

/// `M_Δ = M / J_Δ M` over `Z[Γ/Δ]`, with the quotient map.
pub fn coinvariants(delta: &Subgroup, m: &FPModule) -> Result<(FPModule, ModuleMap)> {
    if delta.ambient() != m.group() {
        return Err(Error::GroupMismatch("subgroup of another group".into()));
    }
    let (_, h) = delta.quotient();
    base_change(&h, m)
}

/// Homology `{x : d_out x in L_prev} / (L_here + im d_in)` of a chain of
/// presented groups `Z^a/L_next -> Z^b/L_here -> Z^c/L_prev`.
pub fn subquotient_homology(
    dim: usize,
    l_here: &Lattice,
    d_in: Option<&IntMatrix>,
    d_out: Option<(&IntMatrix, &Lattice)>,
) -> Result<AbelianInvariants> {
    let cycles = match d_out {
        Some((d, l_prev)) => Lattice::preimage(d, l_prev)?,
        None => Lattice::full(dim),
    };
    let mut bounds = l_here.clone();
    if let Some(d) = d_in {
        bounds.extend(d.column_vecs());
    }
    cycles.quotient_invariants(&bounds)
}

/// `Tor_i^{Z[Γ]}(Z[Γ'], M)` for a surjection `h : Γ -> Γ'`.
pub fn tor_along(i: usize, h: &GroupHom, m: &FPModule) -> Result<AbelianInvariants> {
    let res = free_resolution(m, i + 1)?;
    let pushed = |k: usize| -> Option<IntMatrix> {
        res.differential(k)
            .filter(|_| k >= 1)
            .map(|d| pushed_flat(d, h))
    };
    let t = h.target();
    let Some(fi) = res.free_module(i) else {
        return Ok(AbelianInvariants::zero());
    };
    let dim = fi.n_gens() * t.order();
    let d_out = pushed(i);
    let d_in = pushed(i + 1);
    let zero_prev;
    let d_out_ref = match &d_out {
        Some(d) => {
            zero_prev = Lattice::zero(d.rows());
            Some((d, &zero_prev))
        }
        None => None,
    };
    subquotient_homology(dim, &Lattice::zero(dim), d_in.as_ref(), d_out_ref)
}

/// `Tor_i^{Z[Γ]}(Z[Γ/Δ], M)`.
pub fn tor_basechange(i: usize, delta: &Subgroup, m: &FPModule) -> Result<AbelianInvariants> {
    if delta.ambient() != m.group() {
        return Err(Error::GroupMismatch("subgroup of another group".into()));
    }
    let (_, h) = delta.quotient();
    tor_along(i, &h, m)
}

/// `Tor_i^{Z[Γ]}(Z[Γ]/n, M)`, from a free resolution reduced mod `n`.
pub fn tor_mod_n(i: usize, n: &BigInt, m: &FPModule) -> Result<AbelianInvariants> {
    let res = free_resolution(m, i + 1)?;
    let Some(fi) = res.free_module(i) else {
        return Ok(AbelianInvariants::zero());
    };
    let scaled = |dim: usize| {
        let gens = (0..dim).map(|k| {
            let mut v = vec![BigInt::from(0); dim];
            v[k] = n.clone();
            v
        });
        Lattice::from_generators(dim, gens)
    };
    let dim = fi.flat_dim();
    let l_here = scaled(dim);
    let d_in = res.differential(i + 1).filter(|_| i + 1 >= 1).map(|d| d.flat().clone());
    let out = if i >= 1 { res.differential(i).map(|d| d.flat().clone()) } else { None };
    let l_prev = out.as_ref().map(|d| scaled(d.rows()));
    let d_out = out.as_ref().zip(l_prev.as_ref());
    subquotient_homology(dim, &l_here, d_in.as_ref(), d_out)
}

fn pushed_flat(d: &ModuleMap, h: &GroupHom) -> IntMatrix {
    let t = h.target();
    let pm: Vec<Vec<GroupRingElement>> = d
        .matrix()
        .iter()
        .map(|row| row.iter().map(|x| x.push(h).expect("matching groups")).collect())
        .collect();
    let s = FPModule::free(t, d.source().n_gens());
    let tt = FPModule::free(t, d.target().n_gens());
    ModuleMap::new(s, tt, pm).expect("free modules").flat().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::is_exact_at;
    use crate::groupring::FiniteAbelianGroup;

    #[test]
    fn resolution_of_trivial_module_is_periodic() {
        for n in [2u64, 3, 4] {
            let g = FiniteAbelianGroup::cyclic(n);
            let z = FPModule::trivial_z(&g);
            let res = free_resolution(&z, 3).unwrap();
            assert_eq!(res.ranks(), vec![1, 1, 1, 1]);
            let w = &GroupRingElement::basis(&g, 1) - &GroupRingElement::one(&g);
            let t = GroupRingElement::partial_trace(&g, 1, n).unwrap();
            let d: Vec<GroupRingElement> =
                (1..4).map(|i| res.maps[i].matrix()[0][0].clone()).collect();
            // up to units: d1 = ±w·unit, the kernels alternate
            assert_eq!(ModuleMap::scalar(&FPModule::free(&g, 1), &d[0]).image_lattice(),
                       ModuleMap::scalar(&FPModule::free(&g, 1), &w).image_lattice());
            assert_eq!(ModuleMap::scalar(&FPModule::free(&g, 1), &d[1]).image_lattice(),
                       ModuleMap::scalar(&FPModule::free(&g, 1), &t).image_lattice());
            for i in 0..3 {
                assert!(is_exact_at(&res.maps[i + 1], &res.maps[i]).unwrap());
            }
        }
    }

    #[test]
    fn free_module_resolution_stops() {
        let g = FiniteAbelianGroup::cyclic(3);
        let res = free_resolution(&FPModule::free(&g, 2), 3).unwrap();
        assert_eq!(res.ranks(), vec![2]);
    }

    #[test]
    fn coinvariants_examples() {
        let c2 = FiniteAbelianGroup::cyclic(2);
        let w = &GroupRingElement::basis(&c2, 1) - &GroupRingElement::one(&c2);
        let (ideal, _) = FPModule::principal_ideal(&w).unwrap();
        let (co, _) = coinvariants(&Subgroup::whole(&c2), &ideal).unwrap();
        assert_eq!(co.underlying_invariants().torsion, vec![BigInt::from(2)]);
        let c4 = FiniteAbelianGroup::cyclic(4);
        let d = Subgroup::generated_by(&c4, &[2]);
        let (co, _) = coinvariants(&d, &FPModule::free(&c4, 1)).unwrap();
        assert_eq!(co.group().order(), 2);
        assert_eq!(co.underlying_invariants(), AbelianInvariants::free(2));
        let (co, _) = coinvariants(&Subgroup::trivial(&c4), &ideal_free(&c4)).unwrap();
        assert_eq!(co.underlying_invariants(), AbelianInvariants::free(4));
    }

    fn ideal_free(g: &FiniteAbelianGroup) -> FPModule {
        FPModule::free(g, 1)
    }

    #[test]
    fn tor_of_trivial_modules() {
        for n in [2u64, 3, 4, 9] {
            let g = FiniteAbelianGroup::cyclic(n);
            let z = FPModule::trivial_z(&g);
            let all = Subgroup::whole(&g);
            for i in 0..=4 {
                let t = tor_basechange(i, &all, &z).unwrap();
                let expect = if i == 0 {
                    AbelianInvariants::free(1)
                } else if i % 2 == 1 {
                    AbelianInvariants::from_cyclic_orders(&[BigInt::from(n)])
                } else {
                    AbelianInvariants::zero()
                };
                assert_eq!(t, expect, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn tor_mod_p_power_of_r_mod_p() {
        let g = FiniteAbelianGroup::cyclic(3);
        let three = GroupRingElement::one(&g).scale(&3.into());
        let m = FPModule::cyclic(&g, &[three]).unwrap();
        let t = tor_mod_n(1, &BigInt::from(3), &m).unwrap();
        assert_eq!(t.torsion, vec![BigInt::from(3); 3]);
        let t0 = tor_mod_n(1, &BigInt::from(3), &FPModule::free(&g, 1)).unwrap();
        assert!(t0.is_zero());
    }
}
