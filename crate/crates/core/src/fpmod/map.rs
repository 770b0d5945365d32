use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::module::{greedy_r_generators, FPModule};
use crate::error::{Error, Result};
use crate::groupring::{FiniteAbelianGroup, GroupHom, GroupRingElement};
use crate::zlinalg::{AbelianInvariants, IntMatrix, Lattice};

/// A module homomorphism `source -> target`, sending source generator `j` to
/// `sum_i matrix[i][j] * t_i`.
///
/// With `along = Some(h)` the map is semilinear over the ring map induced by
/// `h : Γ_source -> Γ_target`; otherwise both modules live over the same ring.
#[derive(Clone)]
pub struct ModuleMap {
    source: FPModule,
    target: FPModule,
    along: Option<GroupHom>,
    matrix: Vec<Vec<GroupRingElement>>,
    flat: IntMatrix,
}

impl PartialEq for ModuleMap {
    fn eq(&self, o: &Self) -> bool {
        self.source == o.source
            && self.target == o.target
            && self.along == o.along
            && self.matrix == o.matrix
    }
}

fn flat_matrix(
    source: &FPModule,
    target: &FPModule,
    along: Option<&GroupHom>,
    matrix: &[Vec<GroupRingElement>],
) -> IntMatrix {
    let gs = source.group();
    let gt = target.group();
    let (ns, nt) = (gs.order(), gt.order());
    let mut f = IntMatrix::zeros(target.flat_dim(), source.flat_dim());
    for (i, row) in matrix.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            let coeffs = a.numerators();
            for g in 0..ns {
                let pg = along.map_or(g, |h| h.apply(g));
                for (x, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        f[(i * nt + gt.add(x, pg), j * ns + g)] += c;
                    }
                }
            }
        }
    }
    f
}

impl ModuleMap {
    /// Linear map over a common group ring; fails if the map does not send
    /// relations into relations.
    pub fn new(
        source: FPModule,
        target: FPModule,
        matrix: Vec<Vec<GroupRingElement>>,
    ) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::GroupMismatch(
                "linear map between modules over different rings".into(),
            ));
        }
        Self::build(source, target, None, matrix)
    }

    /// Map semilinear over the ring map induced by `h`.
    pub fn new_along(
        source: FPModule,
        target: FPModule,
        h: GroupHom,
        matrix: Vec<Vec<GroupRingElement>>,
    ) -> Result<Self> {
        if h.source() != source.group() || h.target() != target.group() {
            return Err(Error::GroupMismatch("hom does not match module rings".into()));
        }
        Self::build(source, target, Some(h), matrix)
    }

    fn build(
        source: FPModule,
        target: FPModule,
        along: Option<GroupHom>,
        matrix: Vec<Vec<GroupRingElement>>,
    ) -> Result<Self> {
        if matrix.len() != target.n_gens()
            || matrix.iter().any(|r| r.len() != source.n_gens())
        {
            return Err(Error::DimensionMismatch(format!(
                "map matrix must be {} x {}",
                target.n_gens(),
                source.n_gens()
            )));
        }
        for a in matrix.iter().flatten() {
            if a.group() != target.group() {
                return Err(Error::GroupMismatch("map entry over the wrong group".into()));
            }
            a.int_coeffs()?;
        }
        let flat = flat_matrix(&source, &target, along.as_ref(), &matrix);
        for r in source.flat_relations() {
            let img = flat.mul_vec(r)?;
            if !target.relation_lattice().contains(&img) {
                return Err(Error::IllDefinedMap(
                    "a source relation is not sent into the target relations".into(),
                ));
            }
        }
        Ok(ModuleMap {
            source,
            target,
            along,
            matrix,
            flat,
        })
    }

    pub fn identity(m: &FPModule) -> Self {
        Self::scalar(m, &GroupRingElement::one(m.group()))
    }

    /// Multiplication by a ring element.
    pub fn scalar(m: &FPModule, a: &GroupRingElement) -> Self {
        let n = m.n_gens();
        let z = GroupRingElement::zero(m.group(), crate::groupring::BaseRing::Int);
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { a.clone() } else { z.clone() }).collect())
            .collect();
        Self::new(m.clone(), m.clone(), matrix).expect("scalars commute with relations")
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Result<Self> {
        let z = GroupRingElement::zero(target.group(), crate::groupring::BaseRing::Int);
        let matrix = vec![vec![z; source.n_gens()]; target.n_gens()];
        Self::new(source.clone(), target.clone(), matrix)
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn along(&self) -> Option<&GroupHom> {
        self.along.as_ref()
    }

    pub fn matrix(&self) -> &[Vec<GroupRingElement>] {
        &self.matrix
    }

    /// Matrix of the underlying map `Z^{source flat} -> Z^{target flat}`.
    pub fn flat(&self) -> &IntMatrix {
        &self.flat
    }

    pub fn apply_flat(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.flat.mul_vec(v).expect("flat dimension")
    }

    /// Flat images of the source generators.
    pub fn image_generators(&self) -> Vec<Vec<BigInt>> {
        (0..self.source.n_gens())
            .map(|j| self.apply_flat(&self.source.generator_vector(j)))
            .collect()
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &ModuleMap) -> Result<ModuleMap> {
        if self.target != g.source {
            return Err(Error::NotComposable(
                "target of the first map differs from the source of the second".into(),
            ));
        }
        let along = match (&self.along, &g.along) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(a.then(b)?),
        };
        let gt = g.target.group();
        let pushed: Vec<Vec<GroupRingElement>> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|a| match &g.along {
                        Some(h) => a.push(h).expect("matching groups"),
                        None => a.clone(),
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(g.target.n_gens());
        for grow in &g.matrix {
            let mut row = Vec::with_capacity(self.source.n_gens());
            for j in 0..self.source.n_gens() {
                let mut acc = GroupRingElement::zero(gt, crate::groupring::BaseRing::Int);
                for (k, b) in grow.iter().enumerate() {
                    acc = &acc + &(b * &pushed[k][j]);
                }
                row.push(acc);
            }
            out.push(row);
        }
        ModuleMap::build(self.source.clone(), g.target.clone(), along, out)
    }

    /// Whether the map is zero on the module level.
    pub fn is_zero(&self) -> bool {
        self.image_generators()
            .iter()
            .all(|v| self.target.relation_lattice().contains(v))
    }

    /// Lattice of `im(f) + relations` in the target's flat space.
    ///
    /// For a semilinear map this is the target submodule generated by the
    /// image, which is the image itself when `along` is surjective.
    pub fn image_lattice(&self) -> Lattice {
        self.target.submodule_lattice(&self.image_generators())
    }

    /// Lattice `{x : f(x) in target relations}` in the source's flat space.
    pub fn kernel_lattice(&self) -> Lattice {
        Lattice::preimage(&self.flat, self.target.relation_lattice()).expect("flat dimension")
    }

    pub fn kernel_invariants(&self) -> AbelianInvariants {
        self.kernel_lattice()
            .quotient_invariants(self.source.relation_lattice())
            .expect("relations lie in the kernel")
    }

    pub fn cokernel_invariants(&self) -> AbelianInvariants {
        self.image_lattice().cokernel_invariants()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lattice() == Lattice::full(self.target.flat_dim())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_lattice() == *self.source.relation_lattice()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Kernel of `f` as a module, with its inclusion into the source.
///
/// Generators are chosen greedily from the Hermite basis of the kernel lattice,
/// closing the span under the group after each choice.
pub fn ker_map(f: &ModuleMap) -> Result<(FPModule, ModuleMap)> {
    let gens = kernel_generators(f);
    Ok(submodule_from_generators(f.source(), &gens))
}

/// Flat `Z[Γ]`-generators of the kernel of `f`, without a presentation.
pub(crate) fn kernel_generators(f: &ModuleMap) -> Vec<Vec<BigInt>> {
    let s = f.source();
    let kl = f.kernel_lattice();
    greedy_r_generators(s.group(), &kl, s.relation_lattice(), kl.basis().to_vec())
}

/// The submodule generated by flat vectors, presented on those generators,
/// with its inclusion.
pub fn submodule_from_generators(s: &FPModule, gens: &[Vec<BigInt>]) -> (FPModule, ModuleMap) {
    let group = s.group();
    let k = gens.len();
    let free = FPModule::free(group, k);
    let matrix: Vec<Vec<GroupRingElement>> = (0..s.n_gens())
        .map(|i| (0..k).map(|j| s.unflatten(&gens[j])[i].clone()).collect())
        .collect();
    let psi = ModuleMap::new(free, s.clone(), matrix.clone()).expect("free source");
    let rel = psi.kernel_lattice();
    let km = FPModule::from_stable_lattice(group, k, rel);
    let incl = ModuleMap::new(km.clone(), s.clone(), matrix).expect("relations map to relations");
    (km, incl)
}

/// Cokernel of `f`: target relations together with the images of the source
/// generators.
pub fn coker_map(f: &ModuleMap) -> Result<FPModule> {
    let t = f.target();
    let mut rels = t.flat_relations().to_vec();
    rels.extend(f.image_generators());
    Ok(FPModule::from_flat_relations(t.group(), t.n_gens(), rels))
}

/// The projection `M -> M/(submodule)` given by the identity on generators.
pub fn projection(m: &FPModule, quotient: &FPModule) -> Result<ModuleMap> {
    let n = m.n_gens();
    let g = m.group();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GroupRingElement::one(g)
                    } else {
                        GroupRingElement::zero(g, crate::groupring::BaseRing::Int)
                    }
                })
                .collect()
        })
        .collect();
    ModuleMap::new(m.clone(), quotient.clone(), matrix)
}

/// Whether `im(f) == ker(g)`; errors unless `f` and `g` compose to zero.
pub fn is_exact_at(f: &ModuleMap, g: &ModuleMap) -> Result<bool> {
    let comp = f.then(g)?;
    if !comp.is_zero() {
        return Err(Error::NotComposable("composite is not the zero map".into()));
    }
    Ok(f.image_lattice() == g.kernel_lattice())
}

/// Identity matrix over `Z[Γ]` of size `n`.
pub(crate) fn identity_matrix(group: &FiniteAbelianGroup, n: usize) -> Vec<Vec<GroupRingElement>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GroupRingElement::one(group)
                    } else {
                        GroupRingElement::zero(group, crate::groupring::BaseRing::Int)
                    }
                })
                .collect()
        })
        .collect()
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("along", &self.along)
            .field("matrix", &self.matrix)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u64) -> (FiniteAbelianGroup, FPModule, GroupRingElement, GroupRingElement) {
        let g = FiniteAbelianGroup::cyclic(p);
        let r = FPModule::free(&g, 1);
        let w = &GroupRingElement::basis(&g, 1) - &GroupRingElement::one(&g);
        let t = GroupRingElement::partial_trace(&g, 1, p).unwrap();
        (g, r, w, t)
    }

    #[test]
    fn kernel_of_augmentation_element() {
        for p in [2u64, 3, 5] {
            let (_, r, w, t) = setup(p);
            let f = ModuleMap::scalar(&r, &w);
            let (k, incl) = ker_map(&f).unwrap();
            assert_eq!(k.underlying_invariants(), AbelianInvariants::free(1));
            assert_eq!(k.n_gens(), 1);
            assert!(incl.then(&f).unwrap().is_zero());
            assert!(incl.is_injective());
            // image of the inclusion is R*T
            let (_, tinc) = FPModule::principal_ideal(&t).unwrap();
            assert_eq!(incl.image_lattice(), tinc.image_lattice());
            assert!(is_exact_at(&incl, &f).unwrap());
        }
    }

    #[test]
    fn trivial_kernels() {
        let (_, r, _, _) = setup(3);
        let (k, _) = ker_map(&ModuleMap::identity(&r)).unwrap();
        assert!(k.is_zero());
        let (k, _) = ker_map(&ModuleMap::scalar(&r, &GroupRingElement::one(r.group()).scale(&3.into()))).unwrap();
        assert!(k.is_zero());
    }

    #[test]
    fn cokernel_examples() {
        let (g, _, _, _) = setup(2);
        let r = FPModule::free(&g, 1);
        let two = GroupRingElement::one(&g).scale(&2.into());
        let c = coker_map(&ModuleMap::scalar(&r, &two)).unwrap();
        assert_eq!(
            c.underlying_invariants(),
            AbelianInvariants::from_cyclic_orders(&[2.into(), 2.into()])
        );
        assert!(coker_map(&ModuleMap::identity(&r)).unwrap().is_zero());
        let z = ModuleMap::zero(&r, &r).unwrap();
        assert_eq!(coker_map(&z).unwrap(), r);
    }

    #[test]
    fn exactness_examples() {
        let (_, r, _, _) = setup(3);
        let id = ModuleMap::identity(&r);
        let zero = ModuleMap::zero(&r, &r).unwrap();
        assert!(is_exact_at(&id, &zero).unwrap());
        assert!(is_exact_at(&zero, &id).unwrap());
        // im(0) = 0 but ker(0) = R
        assert!(!is_exact_at(&zero, &zero).unwrap());
        assert!(is_exact_at(&id, &id).is_err());
    }

    #[test]
    fn ill_defined_map_rejected() {
        let g = FiniteAbelianGroup::cyclic(2);
        let z = FPModule::trivial_z(&g);
        let r = FPModule::free(&g, 1);
        // Z -> R, 1 -> 1 is not well defined
        let res = ModuleMap::new(z.clone(), r.clone(), vec![vec![GroupRingElement::one(&g)]]);
        assert!(matches!(res, Err(Error::IllDefinedMap(_))));
        // 1 -> T is
        let t = GroupRingElement::partial_trace(&g, 1, 2).unwrap();
        assert!(ModuleMap::new(z, r, vec![vec![t]]).is_ok());
    }
}
