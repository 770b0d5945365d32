use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zlinalg::{snf, solve, unimodular_inverse, IntMatrix, Lattice};

#[derive(Debug, PartialEq, Eq, Hash)]
struct GroupInner {
    orders: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

/// `Z/m_1 x ... x Z/m_r`.
///
/// Elements are exponent tuples; they are numbered lexicographically (first
/// coordinate most significant), which is the basis order of every group ring.
/// Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup(Arc<GroupInner>);

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|&m| m == 0) {
            return Err(Error::InvalidArgument("cyclic orders must be at least 1".into()));
        }
        let mut strides = vec![1usize; orders.len()];
        let mut acc: usize = 1;
        for i in (0..orders.len()).rev() {
            strides[i] = acc;
            acc = acc
                .checked_mul(orders[i] as usize)
                .ok_or_else(|| Error::InvalidArgument("group order overflows".into()))?;
        }
        Ok(FiniteAbelianGroup(Arc::new(GroupInner {
            orders,
            strides,
            order: acc,
        })))
    }

    pub fn trivial() -> Self {
        Self::new(vec![]).unwrap()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("positive order")
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.0.orders
    }

    pub fn ngens(&self) -> usize {
        self.0.orders.len()
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn is_trivial(&self) -> bool {
        self.0.order == 1
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the element with the given exponents (reduced mod `m_i`).
    pub fn index_of(&self, exps: &[u64]) -> usize {
        assert_eq!(exps.len(), self.ngens(), "exponent tuple length");
        exps.iter()
            .zip(&self.0.orders)
            .zip(&self.0.strides)
            .map(|((&e, &m), &s)| (e % m) as usize * s)
            .sum()
    }

    pub fn exponents(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.ngens()];
        for (i, &s) in self.0.strides.iter().enumerate() {
            out[i] = (idx / s) as u64;
            idx %= s;
        }
        out
    }

    /// Index of the `i`-th standard generator.
    pub fn generator(&self, i: usize) -> usize {
        if self.0.orders[i] == 1 {
            0
        } else {
            self.0.strides[i]
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut r = 0;
        let (mut a, mut b) = (a, b);
        for (&s, &m) in self.0.strides.iter().zip(&self.0.orders) {
            let da = a / s;
            let db = b / s;
            a %= s;
            b %= s;
            r += ((da + db) % m as usize) * s;
        }
        r
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut r = 0;
        let mut a = a;
        for (&s, &m) in self.0.strides.iter().zip(&self.0.orders) {
            let da = a / s;
            a %= s;
            r += ((m as usize - da) % m as usize) * s;
        }
        r
    }

    /// `k * a` in additive notation, i.e. the power `a^k`.
    pub fn times(&self, a: usize, k: u64) -> usize {
        let e: Vec<u64> = self
            .exponents(a)
            .iter()
            .zip(&self.0.orders)
            .map(|(&x, &m)| ((x as u128 * k as u128) % m as u128) as u64)
            .collect();
        self.index_of(&e)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.exponents(a)
            .iter()
            .zip(&self.0.orders)
            .map(|(&x, &m)| m / num_integer::gcd(x, m))
            .fold(1, num_integer::lcm)
    }

    pub fn exponent(&self) -> u64 {
        self.0.orders.iter().copied().fold(1, num_integer::lcm)
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ngens() == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.orders.iter().map(|m| format!("C{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.orders.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let orders = Vec::<u64>::deserialize(d)?;
        Self::new(orders).map_err(serde::de::Error::custom)
    }
}

/// Homomorphism given by the images of the standard generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    images: Vec<Vec<u64>>,
    table: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        let mut img_idx = Vec::with_capacity(images.len());
        for (i, im) in images.iter().enumerate() {
            if im.len() != target.ngens() {
                return Err(Error::DimensionMismatch("image tuple length".into()));
            }
            let x = target.index_of(im);
            if target.times(x, source.cyclic_orders()[i]) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "image of generator {i} does not respect its order"
                )));
            }
            img_idx.push(x);
        }
        let table = (0..source.order())
            .map(|a| {
                source
                    .exponents(a)
                    .iter()
                    .zip(&img_idx)
                    .fold(0, |acc, (&e, &g)| target.add(acc, target.times(g, e)))
            })
            .collect();
        let images = img_idx.iter().map(|&x| target.exponents(x)).collect();
        Ok(GroupHom {
            source,
            target,
            images,
            table,
        })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        let images = (0..g.ngens()).map(|i| g.exponents(g.generator(i))).collect();
        Self::new(g.clone(), g.clone(), images).unwrap()
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn generator_images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.table {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn kernel(&self) -> Subgroup {
        let elems: Vec<usize> = (0..self.source.order())
            .filter(|&a| self.table[a] == 0)
            .collect();
        Subgroup::from_elements(self.source.clone(), elems)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(Error::GroupMismatch("composition of group homomorphisms".into()));
        }
        let images = (0..self.source.ngens())
            .map(|i| {
                other
                    .target
                    .exponents(other.apply(self.apply(self.source.generator(i))))
            })
            .collect();
        GroupHom::new(self.source.clone(), other.target.clone(), images)
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} via {:?}", self.source, self.target, self.images)
    }
}

/// A subgroup, stored with its full (sorted) element list.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(g: &FiniteAbelianGroup) -> Self {
        Subgroup {
            ambient: g.clone(),
            elements: vec![0],
        }
    }

    pub fn whole(g: &FiniteAbelianGroup) -> Self {
        Subgroup {
            ambient: g.clone(),
            elements: (0..g.order()).collect(),
        }
    }

    /// Subgroup generated by the given elements (indices into `g`).
    pub fn generated_by(g: &FiniteAbelianGroup, gens: &[usize]) -> Self {
        let mut inside = vec![false; g.order()];
        inside[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &s in gens {
                let y = g.add(x, s);
                if !inside[y] {
                    inside[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        Subgroup {
            ambient: g.clone(),
            elements: elems,
        }
    }

    fn from_elements(g: FiniteAbelianGroup, mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        Subgroup {
            ambient: g,
            elements: elems,
        }
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// A small generating set: greedily adds elements until they generate.
    pub fn generators(&self) -> Vec<usize> {
        let g = &self.ambient;
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(g);
        for &x in &self.elements {
            if !span.contains(x) {
                gens.push(x);
                span = Subgroup::generated_by(g, &gens);
            }
        }
        gens
    }

    /// Elements `σ_i` of orders `n_i > 1` with `Δ = ⊕ <σ_i>`.
    ///
    /// `Δ` is `L/diag(m)` for the lattice `L` of exponent vectors; the Smith
    /// form of `diag(m)` written in a basis of `L` splits it into cyclic factors.
    pub fn cyclic_decomposition(&self) -> Vec<(usize, u64)> {
        let g = &self.ambient;
        let r = g.ngens();
        let diag: Vec<Vec<BigInt>> = (0..r)
            .map(|i| {
                let mut c = vec![BigInt::zero(); r];
                c[i] = BigInt::from(g.cyclic_orders()[i]);
                c
            })
            .collect();
        let mut lat = Lattice::from_generators(r, diag.clone());
        lat.extend(
            self.generators()
                .into_iter()
                .map(|x| g.exponents(x).into_iter().map(BigInt::from).collect::<Vec<_>>()),
        );
        let b = lat.basis_columns();
        let c_cols: Vec<Vec<BigInt>> = diag
            .iter()
            .map(|d| solve(&b, d).ok().flatten().expect("diag(m) lies in L"))
            .collect();
        let c = IntMatrix::from_columns(r, &c_cols);
        let sf = snf(&c);
        let uinv = unimodular_inverse(&sf.u).expect("Smith transform is unimodular");
        let mut out = Vec::new();
        for (i, d) in sf.invariants.iter().enumerate() {
            let n = d.to_u64().expect("finite group");
            if n <= 1 {
                continue;
            }
            let exps = b.mul_vec(&uinv.column(i)).expect("square");
            let e: Vec<u64> = exps
                .iter()
                .zip(g.cyclic_orders())
                .map(|(x, &m)| {
                    let m = BigInt::from(m);
                    (((x % &m) + &m) % &m).to_u64().unwrap()
                })
                .collect();
            out.push((g.index_of(&e), n));
        }
        out
    }

    /// `Γ/Δ` as a product of cyclic groups, with the projection.
    ///
    /// Computed from the Smith form of `[diag(m) | Δ-generators]`; trivial
    /// cyclic factors are dropped.
    pub fn quotient(&self) -> (FiniteAbelianGroup, GroupHom) {
        let g = &self.ambient;
        let r = g.ngens();
        let mut cols: Vec<Vec<BigInt>> = (0..r)
            .map(|i| {
                let mut c = vec![BigInt::zero(); r];
                c[i] = BigInt::from(g.cyclic_orders()[i]);
                c
            })
            .collect();
        for x in self.generators() {
            cols.push(g.exponents(x).into_iter().map(BigInt::from).collect());
        }
        let a = IntMatrix::from_columns(r, &cols);
        let sf = snf(&a);
        let keep: Vec<usize> = (0..sf.invariants.len().min(r))
            .filter(|&i| sf.invariants[i] != BigInt::from(1))
            .collect();
        let orders: Vec<u64> = keep
            .iter()
            .map(|&i| sf.invariants[i].to_u64().expect("finite quotient"))
            .collect();
        let q = FiniteAbelianGroup::new(orders.clone()).unwrap();
        let images = (0..r)
            .map(|j| {
                keep.iter()
                    .zip(&orders)
                    .map(|(&i, &m)| {
                        let x = &sf.u[(i, j)] % BigInt::from(m);
                        let x = if x < BigInt::zero() { x + m } else { x };
                        x.to_u64().unwrap()
                    })
                    .collect()
            })
            .collect();
        let h = GroupHom::new(g.clone(), q.clone(), images).expect("projection is well defined");
        (q, h)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} elements of {:?}>", self.order(), self.ambient)
    }
}
