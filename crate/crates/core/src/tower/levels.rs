use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::spec::{default_max_order, TowerSpec};
use crate::error::{Error, Result};
use crate::fpmod::{FPModule, ModuleMap};
use crate::groupring::{FiniteAbelianGroup, GroupHom, GroupRingElement, Subgroup};
use crate::zlinalg::{kernel_basis, Lattice};

/// One level `Γ_m` with its distinguished elements.
#[derive(Clone, Debug)]
pub struct Level {
    pub group: FiniteAbelianGroup,
    /// `ρ_m : Γ_m -> Γ_{m-1}`; `None` at level 0.
    pub rho: Option<GroupHom>,
    pub n: u32,
    pub pi: usize,
    pub varpi: GroupRingElement,
    pub trace: GroupRingElement,
    pub idempotent: GroupRingElement,
    /// `ker ρ_m` (trivial at level 0).
    pub delta: Subgroup,
}

/// The levels `0..=M` of a tower, built and checked from a [`TowerSpec`].
#[derive(Clone, Debug)]
pub struct Tower {
    spec: TowerSpec,
    levels: Vec<Level>,
}

/// Builds a tower under the default order cap.
pub fn build_tower(spec: &TowerSpec) -> Result<Tower> {
    Tower::build(spec, default_max_order())
}

impl Tower {
    pub fn build(spec: &TowerSpec, cap: u64) -> Result<Self> {
        spec.validate_with_cap(cap)?;
        let p = spec.p;
        let ns = spec.exponents();
        let mut levels: Vec<Level> = Vec::with_capacity(ns.len());
        for (m, &n) in ns.iter().enumerate() {
            let orders = if spec.schedule.is_some() {
                vec![p.pow(n)]
            } else {
                vec![p.pow(m as u32); spec.d]
            };
            let group = FiniteAbelianGroup::new(orders)?;
            let rho = match levels.last() {
                Some(prev) => Some(unit_projection(&group, &prev.group)?),
                None => None,
            };
            let delta = match &rho {
                Some(r) => r.kernel(),
                None => Subgroup::trivial(&group),
            };
            let pi = group.generator(spec.pi_coord);
            let one = GroupRingElement::one(&group);
            let varpi = &GroupRingElement::basis(&group, pi) - &one;
            let trace = GroupRingElement::partial_trace(&group, pi, p.pow(n))?;
            let idempotent = GroupRingElement::from_rational(
                &group,
                trace.numerators().to_vec(),
                BigInt::from(p).pow(n),
            )?;
            levels.push(Level {
                group,
                rho,
                n,
                pi,
                varpi,
                trace,
                idempotent,
                delta,
            });
        }
        let t = Tower {
            spec: spec.clone(),
            levels,
        };
        t.check_invariants()?;
        Ok(t)
    }

    fn check_invariants(&self) -> Result<()> {
        let p = BigInt::from(self.spec.p);
        for (m, lv) in self.levels.iter().enumerate() {
            let fail = |what: &str| Err(Error::InvalidTower(format!("level {m}: {what}")));
            if lv.group.element_order(lv.pi) != self.spec.p.pow(lv.n) {
                return fail("order of pi is not p^n");
            }
            if !lv.varpi.gr_mul(&lv.trace)?.is_zero() {
                return fail("varpi * T != 0");
            }
            if let Some(rho) = &lv.rho {
                let prev = &self.levels[m - 1];
                let k = p.clone().pow(lv.n - prev.n);
                if lv.trace.push(rho)? != prev.trace.scale(&k) {
                    return fail("rho(T_m) != p^(n_m - n_{m-1}) T_{m-1}");
                }
                if lv.idempotent.push(rho)? != prev.idempotent {
                    return fail("rho(e_m) != e_{m-1}");
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn rank(&self) -> usize {
        self.spec.d
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, m: usize) -> Result<&Level> {
        self.levels.get(m).ok_or_else(|| {
            Error::InvalidArgument(format!("level {m} above max level {}", self.max_level()))
        })
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn group(&self, m: usize) -> &FiniteAbelianGroup {
        &self.levels[m].group
    }

    /// `ρ_m`, for `1 <= m <= M`.
    pub fn rho(&self, m: usize) -> &GroupHom {
        self.levels[m].rho.as_ref().expect("no projection out of level 0")
    }

    pub fn n(&self, m: usize) -> u32 {
        self.levels[m].n
    }

    pub fn varpi(&self, m: usize) -> &GroupRingElement {
        &self.levels[m].varpi
    }

    pub fn trace(&self, m: usize) -> &GroupRingElement {
        &self.levels[m].trace
    }

    pub fn idempotent(&self, m: usize) -> &GroupRingElement {
        &self.levels[m].idempotent
    }

    pub fn delta(&self, m: usize) -> &Subgroup {
        &self.levels[m].delta
    }

    /// `T_{m,j} = sum_{i < p^{n_j}} π_m^i`.
    pub fn partial_trace(&self, m: usize, j: usize) -> Result<GroupRingElement> {
        let lv = self.level(m)?;
        let nj = self.level(j)?.n;
        GroupRingElement::partial_trace(&lv.group, lv.pi, self.spec.p.pow(nj))
    }

    /// The projection `Γ_from -> Γ_to` for `to <= from`.
    pub fn projection(&self, from: usize, to: usize) -> Result<GroupHom> {
        if to > from || from > self.max_level() {
            return Err(Error::InvalidArgument(format!("no projection from level {from} to {to}")));
        }
        unit_projection(self.group(from), self.group(to))
    }

    /// `R_m ϖ_m`, presented as `R_m/ann(ϖ_m)`, with its embedding into `R_m`.
    pub fn ideal_i_varpi(&self, m: usize) -> Result<(FPModule, ModuleMap)> {
        FPModule::principal_ideal(&self.level(m)?.varpi)
    }

    /// `R_m T_m` as a lattice in `Z^{|Γ_m|}`.
    pub fn trace_ideal(&self, m: usize) -> Result<Lattice> {
        Ok(Lattice::column_span(&self.level(m)?.trace.regular_matrix()?))
    }

    /// `R_m e_m`, presented integrally as `R_m/ann(e_m)`.
    ///
    /// `ann(e_m)` is the kernel of multiplication by `p^{n_m} e_m = T_m`.
    pub fn idempotent_module(&self, m: usize) -> Result<FPModule> {
        let lv = self.level(m)?;
        let ann = kernel_basis(&lv.trace.regular_matrix()?);
        Ok(FPModule::from_flat_relations(&lv.group, 1, ann.column_vecs()))
    }

    /// `Q_m = R_m e_m / (R_m T_m)`, with the image of `T_m` as extra relation.
    pub fn q_module(&self, m: usize) -> Result<FPModule> {
        let lv = self.level(m)?;
        let base = self.idempotent_module(m)?;
        let mut rels = base.flat_relations().to_vec();
        rels.push(lv.trace.numerators().to_vec());
        Ok(FPModule::from_flat_relations(&lv.group, 1, rels))
    }

    /// `R_m e_m / p^{n_m}`.
    pub fn q_module_by_p_power(&self, m: usize) -> Result<FPModule> {
        let lv = self.level(m)?;
        let base = self.idempotent_module(m)?;
        let mut rels = base.flat_relations().to_vec();
        let pn = BigInt::from(self.spec.p).pow(lv.n);
        rels.push(GroupRingElement::one(&lv.group).scale(&pn).numerators().to_vec());
        Ok(FPModule::from_flat_relations(&lv.group, 1, rels))
    }

    /// `|Γ_m|`.
    pub fn order(&self, m: usize) -> usize {
        self.group(m).order()
    }

    /// `p^{n_m}` as a big integer.
    pub fn p_power(&self, m: usize) -> BigInt {
        let mut x = BigInt::one();
        for _ in 0..self.n(m) {
            x *= self.spec.p;
        }
        x
    }
}

/// The hom sending each standard generator to the matching one.
fn unit_projection(from: &FiniteAbelianGroup, to: &FiniteAbelianGroup) -> Result<GroupHom> {
    let r = from.ngens();
    let images = (0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
        .collect();
    GroupHom::new(from.clone(), to.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zlinalg::AbelianInvariants;

    fn tower(p: u64, d: usize, m: usize) -> Tower {
        Tower::build(&TowerSpec::new(p, d, m), 1 << 20).unwrap()
    }

    #[test]
    fn cyclic_tower_shape() {
        let t = tower(3, 1, 3);
        for m in 0..=3 {
            assert_eq!(t.order(m), 3usize.pow(m as u32));
            assert_eq!(t.n(m), m as u32);
            assert_eq!(t.group(m).element_order(t.levels()[m].pi), 3u64.pow(m as u32));
        }
        assert!(t.varpi(0).is_zero());
        assert_eq!(t.trace(0), &GroupRingElement::one(t.group(0)));
        assert_eq!(t.trace(1).push(t.rho(1)).unwrap(), GroupRingElement::one(t.group(0)).scale(&3.into()));
        assert_eq!(t.delta(2).order(), 3);
    }

    #[test]
    fn rank_two_tower() {
        let t = tower(2, 2, 3);
        for m in 0..=3 {
            assert_eq!(t.order(m), 4usize.pow(m as u32));
            assert_eq!(t.n(m), m as u32);
        }
        assert_eq!(t.delta(3).order(), 4);
    }

    #[test]
    fn custom_schedule() {
        let t = Tower::build(&TowerSpec::with_schedule(2, vec![0, 1, 3]), 128).unwrap();
        assert_eq!(t.order(2), 8);
        assert_eq!(t.delta(2).order(), 4);
        assert_eq!(t.partial_trace(2, 1).unwrap().augmentation(), num_rational::BigRational::from_integer(2.into()));
    }

    #[test]
    fn varpi_ideal_examples() {
        let t = tower(2, 1, 2);
        assert!(t.ideal_i_varpi(0).unwrap().0.is_zero());
        let (i1, emb) = t.ideal_i_varpi(1).unwrap();
        assert_eq!(i1.underlying_invariants(), AbelianInvariants::free(1));
        assert!(emb.is_injective());
    }

    #[test]
    fn q_modules() {
        let t = tower(3, 1, 3);
        for m in 1..=3 {
            let q = t.q_module(m).unwrap();
            assert_eq!(q, t.q_module_by_p_power(m).unwrap());
            assert_eq!(q.underlying_invariants(), AbelianInvariants::from_cyclic_orders(&[t.p_power(m)]));
        }
        let t2 = tower(2, 1, 1);
        assert_eq!(t2.q_module(1).unwrap().underlying_invariants().torsion, vec![BigInt::from(2)]);
    }
}
