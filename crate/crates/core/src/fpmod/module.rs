use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groupring::{FiniteAbelianGroup, GroupRingElement};
use crate::zlinalg::{AbelianInvariants, IntMatrix, Lattice};

/// Shifts every block of a flat vector by the group element `h`.
pub(crate) fn shift_flat(group: &FiniteAbelianGroup, v: &[BigInt], h: usize) -> Vec<BigInt> {
    let n = group.order();
    let mut out = vec![BigInt::zero(); v.len()];
    for (blk, chunk) in v.chunks(n).enumerate() {
        for (g, x) in chunk.iter().enumerate() {
            if !x.is_zero() {
                out[blk * n + group.add(g, h)] = x.clone();
            }
        }
    }
    out
}

/// All translates of `v` under the group.
pub(crate) fn orbit<'a>(
    group: &'a FiniteAbelianGroup,
    v: &'a [BigInt],
) -> impl Iterator<Item = Vec<BigInt>> + 'a {
    let g = group.clone();
    (0..group.order()).map(move |h| shift_flat(&g, v, h))
}

/// The `Z[Γ]`-submodule of `Z[Γ]^n` generated by `gens`, as a lattice.
pub(crate) fn r_span(group: &FiniteAbelianGroup, dim: usize, gens: &[Vec<BigInt>]) -> Lattice {
    let mut l = Lattice::zero(dim);
    for v in gens {
        l.extend(orbit(group, v));
    }
    l
}

/// Picks candidates, in order, until `base + R-span(chosen) == target`.
///
/// Every candidate must lie in `target` and `base ⊆ target`.
pub(crate) fn greedy_r_generators<I>(
    group: &FiniteAbelianGroup,
    target: &Lattice,
    base: &Lattice,
    candidates: I,
) -> Vec<Vec<BigInt>>
where
    I: IntoIterator<Item = Vec<BigInt>>,
{
    let mut span = base.clone();
    let mut chosen = Vec::new();
    for v in candidates {
        if span == *target {
            break;
        }
        if span.contains(&v) {
            continue;
        }
        span.extend(orbit(group, &v));
        chosen.push(v);
    }
    debug_assert!(span == *target, "candidates do not generate the target");
    chosen
}

#[derive(PartialEq, Eq)]
struct ModuleInner {
    group: FiniteAbelianGroup,
    n_gens: usize,
    relations: Vec<Vec<BigInt>>,
    lattice: Lattice,
}

/// A finitely presented `Z[Γ]`-module `Z[Γ]^n / (relations)`.
///
/// Elements of `Z[Γ]^n` are handled in flat form: `n` consecutive blocks of
/// `|Γ|` integer coefficients. The relation submodule is cached as a lattice
/// in `Z^{n|Γ|}`, so the underlying abelian group is `Z^{n|Γ|} / lattice` and
/// the action of `h` permutes coordinates inside each block.
///
/// Equality compares presentations: same group, generator count and relation
/// submodule. Cloning is cheap.
#[derive(Clone)]
pub struct FPModule(Arc<ModuleInner>);

impl PartialEq for FPModule {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (self.0.group == o.0.group
                && self.0.n_gens == o.0.n_gens
                && self.0.lattice == o.0.lattice)
    }
}

impl Eq for FPModule {}

impl FPModule {
    /// Module with relations given as columns of group-ring elements.
    pub fn new(
        group: &FiniteAbelianGroup,
        n_gens: usize,
        relations: &[Vec<GroupRingElement>],
    ) -> Result<Self> {
        let mut flat = Vec::with_capacity(relations.len());
        for col in relations {
            if col.len() != n_gens {
                return Err(Error::DimensionMismatch(format!(
                    "relation with {} entries for {} generators",
                    col.len(),
                    n_gens
                )));
            }
            let mut v = Vec::with_capacity(n_gens * group.order());
            for x in col {
                if x.group() != group {
                    return Err(Error::GroupMismatch(format!(
                        "relation over {:?} for a module over {:?}",
                        x.group(),
                        group
                    )));
                }
                v.extend_from_slice(x.int_coeffs()?);
            }
            flat.push(v);
        }
        Ok(Self::from_flat_relations(group, n_gens, flat))
    }

    /// Module with relations given in flat form.
    pub fn from_flat_relations(
        group: &FiniteAbelianGroup,
        n_gens: usize,
        relations: Vec<Vec<BigInt>>,
    ) -> Self {
        let dim = n_gens * group.order();
        let lattice = r_span(group, dim, &relations);
        FPModule(Arc::new(ModuleInner {
            group: group.clone(),
            n_gens,
            relations,
            lattice,
        }))
    }

    /// Module whose relation submodule is the given lattice, which must already
    /// be stable under the group.
    pub(crate) fn from_stable_lattice(
        group: &FiniteAbelianGroup,
        n_gens: usize,
        lattice: Lattice,
    ) -> Self {
        debug_assert_eq!(lattice.dim(), n_gens * group.order());
        let relations = lattice.basis().to_vec();
        FPModule(Arc::new(ModuleInner {
            group: group.clone(),
            n_gens,
            relations,
            lattice,
        }))
    }

    pub fn free(group: &FiniteAbelianGroup, n: usize) -> Self {
        Self::from_stable_lattice(group, n, Lattice::zero(n * group.order()))
    }

    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        Self::free(group, 0)
    }

    /// `Z[Γ] / (elements)`.
    pub fn cyclic(group: &FiniteAbelianGroup, relations: &[GroupRingElement]) -> Result<Self> {
        let cols: Vec<Vec<GroupRingElement>> = relations.iter().map(|x| vec![x.clone()]).collect();
        Self::new(group, 1, &cols)
    }

    /// `Z` with trivial action.
    pub fn trivial_z(group: &FiniteAbelianGroup) -> Self {
        let rels: Vec<GroupRingElement> = (0..group.ngens())
            .map(|i| {
                &GroupRingElement::basis(group, group.generator(i)) - &GroupRingElement::one(group)
            })
            .collect();
        Self::cyclic(group, &rels).expect("integral relations")
    }

    /// The principal ideal `Z[Γ]·x`, presented as `Z[Γ]/ann(x)`, with its
    /// embedding into `Z[Γ]`.
    pub fn principal_ideal(x: &GroupRingElement) -> Result<(Self, super::ModuleMap)> {
        let group = x.group();
        let ann = Lattice::column_span(&crate::zlinalg::kernel_basis(&x.regular_matrix()?));
        let m = Self::from_stable_lattice(group, 1, ann);
        let emb = super::ModuleMap::new(
            m.clone(),
            Self::free(group, 1),
            vec![vec![x.clone()]],
        )?;
        Ok((m, emb))
    }

    /// `Z[Γ]/ann(x)` for any element (rational ones are cleared of denominators).
    pub fn annihilator_quotient(x: &GroupRingElement) -> Result<Self> {
        let xi = GroupRingElement::from_coeffs(x.group(), x.numerators().to_vec())?;
        Ok(Self::principal_ideal(&xi)?.0)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.0.group
    }

    pub fn n_gens(&self) -> usize {
        self.0.n_gens
    }

    /// Length of flat vectors, `n_gens * |Γ|`.
    pub fn flat_dim(&self) -> usize {
        self.0.n_gens * self.0.group.order()
    }

    /// Relation columns in flat form.
    pub fn flat_relations(&self) -> &[Vec<BigInt>] {
        &self.0.relations
    }

    pub fn relations(&self) -> Vec<Vec<GroupRingElement>> {
        self.0
            .relations
            .iter()
            .map(|v| self.unflatten(v))
            .collect()
    }

    /// The relation submodule as a lattice in `Z^{flat_dim}`.
    pub fn relation_lattice(&self) -> &Lattice {
        &self.0.lattice
    }

    /// Integer presentation (the underlying group is its cokernel) and the
    /// action matrices of the standard generators of `Γ`.
    pub fn flatten(&self) -> (IntMatrix, Vec<IntMatrix>) {
        let g = self.group();
        let dim = self.flat_dim();
        let pres = self.0.lattice.basis_columns();
        let actions = (0..g.ngens())
            .map(|i| self.action_matrix(g.generator(i)))
            .collect();
        let pres = if pres.cols() == 0 { IntMatrix::zeros(dim, 0) } else { pres };
        (pres, actions)
    }

    /// Permutation matrix of the action of `h` on flat vectors.
    pub fn action_matrix(&self, h: usize) -> IntMatrix {
        let g = self.group();
        let n = g.order();
        let dim = self.flat_dim();
        let mut m = IntMatrix::zeros(dim, dim);
        for blk in 0..self.n_gens() {
            for x in 0..n {
                m[(blk * n + g.add(x, h), blk * n + x)] = BigInt::from(1);
            }
        }
        m
    }

    pub fn underlying_invariants(&self) -> AbelianInvariants {
        self.0.lattice.cokernel_invariants()
    }

    pub fn is_zero(&self) -> bool {
        self.0.lattice.rank() == self.flat_dim()
            && self.0.lattice.pivots().iter().enumerate().all(|(i, &c)| i == c)
            && self.0.lattice.basis().iter().enumerate().all(|(i, r)| r[i] == BigInt::from(1))
    }

    /// Whether two flat vectors represent the same element.
    pub fn same_element(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.0.lattice.contains(&d)
    }

    /// Canonical representative of a flat vector.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.0.lattice.reduce(v)
    }

    pub fn flatten_element(&self, v: &[GroupRingElement]) -> Result<Vec<BigInt>> {
        if v.len() != self.n_gens() {
            return Err(Error::DimensionMismatch("element length".into()));
        }
        let mut out = Vec::with_capacity(self.flat_dim());
        for x in v {
            if x.group() != self.group() {
                return Err(Error::GroupMismatch("element over another group".into()));
            }
            out.extend_from_slice(x.int_coeffs()?);
        }
        Ok(out)
    }

    pub fn unflatten(&self, v: &[BigInt]) -> Vec<GroupRingElement> {
        let n = self.group().order();
        v.chunks(n)
            .map(|c| GroupRingElement::from_coeffs(self.group(), c.to_vec()).expect("block length"))
            .collect()
    }

    /// Flat vector of the `i`-th generator.
    pub fn generator_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.flat_dim()];
        v[i * self.group().order()] = BigInt::from(1);
        v
    }

    /// Lattice of the submodule generated by flat vectors (relations included).
    pub fn submodule_lattice(&self, gens: &[Vec<BigInt>]) -> Lattice {
        let mut l = self.0.lattice.clone();
        for v in gens {
            l.extend(orbit(self.group(), v));
        }
        l
    }

    /// Whether the flat vectors generate the module.
    pub fn generated_by(&self, gens: &[Vec<BigInt>]) -> bool {
        self.submodule_lattice(gens) == Lattice::full(self.flat_dim())
    }
}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FPModule(Z[{:?}]^{} / {} relations; underlying {})",
            self.group(),
            self.n_gens(),
            self.0.relations.len(),
            self.underlying_invariants()
        )
    }
}
