use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use super::levels::Tower;
use crate::error::{Error, Result};
use crate::fpmod::{base_change, ker_map, submodule_from_generators, FPModule, ModuleMap};
use crate::groupring::{BaseRing, FiniteAbelianGroup, GroupHom, GroupRingElement};
use crate::zlinalg::{solve, AbelianInvariants};

/// Pushes a flat vector of `Z[Γ]^n` along `h`.
pub fn push_flat(h: &GroupHom, v: &[BigInt]) -> Vec<BigInt> {
    let (ns, nt) = (h.source().order(), h.target().order());
    let blocks = v.len() / ns;
    let mut out = vec![BigInt::zero(); blocks * nt];
    for (b, chunk) in v.chunks(ns).enumerate() {
        for (x, c) in chunk.iter().enumerate() {
            if !c.is_zero() {
                out[b * nt + h.apply(x)] += c;
            }
        }
    }
    out
}

fn unit_matrix(g: &FiniteAbelianGroup, n: usize) -> Vec<Vec<GroupRingElement>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GroupRingElement::one(g)
                    } else {
                        GroupRingElement::zero(g, BaseRing::Int)
                    }
                })
                .collect()
        })
        .collect()
}

/// A tower of modules `M_(0), ..., M_(M)` with semilinear transition maps
/// `M_(m+1) -> M_(m)` over `ρ_{m+1}`.
#[derive(Clone, Debug)]
pub struct TowerModule {
    name: String,
    levels: Vec<FPModule>,
    transitions: Vec<ModuleMap>,
}

/// Failure of `R_m ⊗ M_(m+1) -> M_(m)` to be an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeDefect {
    /// The upper level `m + 1`.
    pub level: usize,
    pub kernel: AbelianInvariants,
    pub cokernel: AbelianInvariants,
}

impl TowerModule {
    pub fn new(
        t: &Tower,
        name: impl Into<String>,
        levels: Vec<FPModule>,
        transitions: Vec<ModuleMap>,
    ) -> Result<Self> {
        if levels.len() != t.max_level() + 1 || transitions.len() + 1 != levels.len() {
            return Err(Error::DimensionMismatch("tower module height".into()));
        }
        for (m, lv) in levels.iter().enumerate() {
            if lv.group() != t.group(m) {
                return Err(Error::GroupMismatch(format!("tower module level {m}")));
            }
        }
        for (m, tr) in transitions.iter().enumerate() {
            if tr.source() != &levels[m + 1] || tr.target() != &levels[m] {
                return Err(Error::NotComposable(format!("transition {} -> {m}", m + 1)));
            }
        }
        Ok(TowerModule {
            name: name.into(),
            levels,
            transitions,
        })
    }

    /// Levels given by `f`, all on the same number of generators, with the
    /// transitions sending generators to generators.
    pub fn on_generators<F>(t: &Tower, name: &str, mut f: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<FPModule>,
    {
        let levels: Vec<FPModule> = (0..=t.max_level()).map(&mut f).collect::<Result<_>>()?;
        let n = levels[0].n_gens();
        if levels.iter().any(|l| l.n_gens() != n) {
            return Err(Error::DimensionMismatch("levels with different generator counts".into()));
        }
        let transitions = (0..t.max_level())
            .map(|m| {
                ModuleMap::new_along(
                    levels[m + 1].clone(),
                    levels[m].clone(),
                    t.rho(m + 1).clone(),
                    unit_matrix(t.group(m), n),
                )
            })
            .collect::<Result<_>>()?;
        Self::new(t, name, levels, transitions)
    }

    /// `M_(m) = R_m ⊗ M` for a module `M` over the top level.
    pub fn from_top(t: &Tower, name: &str, top: &FPModule) -> Result<Self> {
        let top_level = t.max_level();
        Self::on_generators(t, name, |m| {
            if m == top_level {
                Ok(top.clone())
            } else {
                Ok(base_change(&t.projection(top_level, m)?, top)?.0)
            }
        })
    }

    /// `R_m^n`.
    pub fn free(t: &Tower, n: usize) -> Result<Self> {
        Self::on_generators(t, "free", |m| Ok(FPModule::free(t.group(m), n)))
    }

    /// `Z` with trivial action at every level.
    pub fn trivial_z(t: &Tower) -> Result<Self> {
        Self::on_generators(t, "trivial_z", |m| Ok(FPModule::trivial_z(t.group(m))))
    }

    /// `R_m / p`.
    pub fn r_mod_p(t: &Tower) -> Result<Self> {
        let p = BigInt::from(t.p());
        Self::on_generators(t, "r_mod_p", |m| {
            FPModule::cyclic(t.group(m), &[GroupRingElement::one(t.group(m)).scale(&p)])
        })
    }

    /// The ideals `R_m ϖ_m`, presented as `R_m/ann(ϖ_m)`.
    pub fn varpi_ideal(t: &Tower) -> Result<Self> {
        Self::on_generators(t, "varpi_ideal", |m| Ok(t.ideal_i_varpi(m)?.0))
    }

    /// The modules `R_m e_m`.
    pub fn idempotent_part(t: &Tower) -> Result<Self> {
        Self::on_generators(t, "idempotent_part", |m| t.idempotent_module(m))
    }

    /// The modules `Q_m = R_m e_m / R_m T_m`.
    pub fn q_tower(t: &Tower) -> Result<Self> {
        Self::on_generators(t, "q", |m| t.q_module(m))
    }

    /// The kernels `K_m = ker θ_m` of a chain, with their inclusions into
    /// `R_m^{t_in}`; transitions are found by solving on flat data.
    pub fn kernel_tower(t: &Tower, chain: &Chain) -> Result<(Self, Vec<ModuleMap>)> {
        let mut levels = Vec::new();
        let mut incls = Vec::new();
        for m in 0..=t.max_level() {
            let (k, incl) = ker_map(&chain.at_level(t, m)?)?;
            levels.push(k);
            incls.push(incl);
        }
        let mut transitions = Vec::new();
        for m in 0..t.max_level() {
            let rho = t.rho(m + 1);
            let g = t.group(m);
            let src: &ModuleMap = &incls[m + 1];
            let mut cols: Vec<Vec<GroupRingElement>> = Vec::new();
            for v in src.image_generators() {
                let w = push_flat(rho, &v);
                let x = solve(incls[m].flat(), &w)?.ok_or_else(|| {
                    Error::NotContained(format!("kernel element does not descend to level {m}"))
                })?;
                cols.push(levels[m].unflatten(&x));
            }
            let rows = levels[m].n_gens();
            let matrix: Vec<Vec<GroupRingElement>> = (0..rows)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect();
            let matrix = if cols.is_empty() {
                vec![Vec::new(); rows]
            } else {
                matrix
            };
            let _ = g;
            transitions.push(ModuleMap::new_along(
                levels[m + 1].clone(),
                levels[m].clone(),
                rho.clone(),
                matrix,
            )?);
        }
        let tm = Self::new(t, format!("ker {}", chain.name), levels, transitions)?;
        Ok((tm, incls))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[FPModule] {
        &self.levels
    }

    pub fn level(&self, m: usize) -> &FPModule {
        &self.levels[m]
    }

    /// The transition `M_(m+1) -> M_(m)`.
    pub fn transition(&self, m: usize) -> &ModuleMap {
        &self.transitions[m]
    }

    pub fn transitions(&self) -> &[ModuleMap] {
        &self.transitions
    }

    /// Levels `m` whose incoming transition `M_(m+1) -> M_(m)` is not onto.
    pub fn non_surjective_transitions(&self) -> Vec<usize> {
        (0..self.transitions.len())
            .filter(|&m| !self.transitions[m].is_surjective())
            .collect()
    }

    /// The induced map `R_m ⊗ M_(m+1) -> M_(m)`.
    pub fn base_change_map(&self, t: &Tower, m: usize) -> Result<ModuleMap> {
        let tr = &self.transitions[m];
        let (bc, _) = base_change(t.rho(m + 1), tr.source())?;
        ModuleMap::new(bc, tr.target().clone(), tr.matrix().to_vec())
    }

    /// Every consecutive pair where base change fails to be an isomorphism.
    pub fn base_change_defects(&self, t: &Tower) -> Result<Vec<BaseChangeDefect>> {
        let mut out = Vec::new();
        for m in 0..self.transitions.len() {
            let f = self.base_change_map(t, m)?;
            let kernel = f.kernel_invariants();
            let cokernel = f.cokernel_invariants();
            if !kernel.is_zero() || !cokernel.is_zero() {
                out.push(BaseChangeDefect {
                    level: m + 1,
                    kernel,
                    cokernel,
                });
            }
        }
        Ok(out)
    }

    pub fn is_pro_discrete(&self, t: &Tower) -> Result<bool> {
        Ok(self.base_change_defects(t)?.is_empty())
    }
}

/// A map `θ : R^{t_in} -> R^{t_out}` over the top level, pushed down to
/// every level.
#[derive(Clone, Debug)]
pub struct Chain {
    pub name: String,
    pub t_in: usize,
    pub t_out: usize,
    top: Vec<Vec<GroupRingElement>>,
}

impl Chain {
    /// `matrix` is `t_out x t_in` over `Γ_M`.
    pub fn from_matrix(
        t: &Tower,
        name: impl Into<String>,
        t_in: usize,
        matrix: Vec<Vec<GroupRingElement>>,
    ) -> Result<Self> {
        let top = t.group(t.max_level());
        if matrix.iter().any(|r| r.len() != t_in) {
            return Err(Error::DimensionMismatch("chain matrix rows".into()));
        }
        if matrix.iter().flatten().any(|x| x.group() != top || x.int_coeffs().is_err()) {
            return Err(Error::GroupMismatch("chain entries must be integral over the top level".into()));
        }
        Ok(Chain {
            name: name.into(),
            t_in,
            t_out: matrix.len(),
            top: matrix,
        })
    }

    /// Multiplication by `x` on `R`.
    pub fn scalar(t: &Tower, name: &str, x: GroupRingElement) -> Result<Self> {
        Self::from_matrix(t, name, 1, vec![vec![x]])
    }

    pub fn varpi(t: &Tower) -> Result<Self> {
        Self::scalar(t, "varpi", t.varpi(t.max_level()).clone())
    }

    pub fn identity(t: &Tower) -> Result<Self> {
        Self::scalar(t, "identity", GroupRingElement::one(t.group(t.max_level())))
    }

    pub fn p_mult(t: &Tower) -> Result<Self> {
        let g = t.group(t.max_level());
        Self::scalar(t, "p", GroupRingElement::one(g).scale(&BigInt::from(t.p())))
    }

    pub fn zero(t: &Tower) -> Result<Self> {
        let g = t.group(t.max_level());
        Self::scalar(t, "zero", GroupRingElement::zero(g, BaseRing::Int))
    }

    /// Entries with coefficients drawn uniformly from `[-height, height]`.
    pub fn random<R: Rng>(
        t: &Tower,
        t_in: usize,
        t_out: usize,
        height: i64,
        rng: &mut R,
    ) -> Result<Self> {
        let g = t.group(t.max_level());
        let matrix = (0..t_out)
            .map(|_| {
                (0..t_in)
                    .map(|_| {
                        let c: Vec<i64> = (0..g.order()).map(|_| rng.gen_range(-height..=height)).collect();
                        GroupRingElement::from_i64(g, &c)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_matrix(t, format!("random {t_out}x{t_in}"), t_in, matrix)
    }

    pub fn top_matrix(&self) -> &[Vec<GroupRingElement>] {
        &self.top
    }

    /// `θ_m : R_m^{t_in} -> R_m^{t_out}`.
    pub fn at_level(&self, t: &Tower, m: usize) -> Result<ModuleMap> {
        let h = t.projection(t.max_level(), m)?;
        let matrix = self
            .top
            .iter()
            .map(|r| r.iter().map(|x| x.push(&h)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let g = t.group(m);
        ModuleMap::new(FPModule::free(g, self.t_in), FPModule::free(g, self.t_out), matrix)
    }

    /// The image `ϱ_m(K_M)` of the top-level kernel in `R_m^{t_in}`, as a
    /// module with its inclusion.
    pub fn stable_kernel_image(&self, t: &Tower, m: usize) -> Result<(FPModule, ModuleMap)> {
        let top = t.max_level();
        let (_, incl) = ker_map(&self.at_level(t, top)?)?;
        let h = t.projection(top, m)?;
        let gens: Vec<Vec<BigInt>> =
            incl.image_generators().iter().map(|v| push_flat(&h, v)).collect();
        Ok(submodule_from_generators(&FPModule::free(t.group(m), self.t_in), &gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::TowerSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(p: u64, d: usize, m: usize) -> Tower {
        Tower::build(&TowerSpec::new(p, d, m), 1 << 12).unwrap()
    }

    #[test]
    fn standard_towers_are_surjective() {
        let t = tower(2, 1, 3);
        for tm in [
            TowerModule::free(&t, 2).unwrap(),
            TowerModule::trivial_z(&t).unwrap(),
            TowerModule::r_mod_p(&t).unwrap(),
            TowerModule::varpi_ideal(&t).unwrap(),
            TowerModule::idempotent_part(&t).unwrap(),
            TowerModule::q_tower(&t).unwrap(),
        ] {
            assert!(tm.non_surjective_transitions().is_empty(), "{}", tm.name());
        }
    }

    #[test]
    fn pro_discreteness() {
        let t = tower(2, 1, 2);
        assert!(TowerModule::free(&t, 1).unwrap().is_pro_discrete(&t).unwrap());
        assert!(TowerModule::trivial_z(&t).unwrap().is_pro_discrete(&t).unwrap());
        let w = TowerModule::varpi_ideal(&t).unwrap();
        let defects = w.base_change_defects(&t).unwrap();
        assert_eq!(defects[0].level, 1);
        assert_eq!(defects[0].kernel.torsion, vec![BigInt::from(2)]);
        assert!(defects[0].kernel.free_rank == 0);
    }

    #[test]
    fn varpi_chain_kernels_are_trace_ideals() {
        let t = tower(3, 1, 3);
        let chain = Chain::varpi(&t).unwrap();
        let (km, incls) = TowerModule::kernel_tower(&t, &chain).unwrap();
        for m in 0..=3 {
            assert_eq!(incls[m].image_lattice(), t.trace_ideal(m).unwrap());
        }
        assert_eq!(km.level(0).underlying_invariants(), AbelianInvariants::free(1));
        // ρ(T_{m+1}) = 3 T_m, so the kernel transitions are not onto
        assert_eq!(km.non_surjective_transitions(), vec![0, 1, 2]);
        let (s, _) = chain.stable_kernel_image(&t, 1).unwrap();
        assert_eq!(s.underlying_invariants(), AbelianInvariants::free(1));
    }

    #[test]
    fn random_chains_descend() {
        let t = tower(2, 1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let c = Chain::random(&t, 2, 1, 2, &mut rng).unwrap();
            let (km, _) = TowerModule::kernel_tower(&t, &c).unwrap();
            assert_eq!(km.height(), 2);
        }
    }
}
