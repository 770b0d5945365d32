use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::hnf::kernel_basis;
use super::matrix::IntMatrix;
use super::snf::{cokernel_invariants, AbelianInvariants};
use crate::error::{Error, Result};

/// A sublattice of `Z^dim`, kept as a row basis in reduced Hermite form.
///
/// Two lattices are equal iff their bases are equal, so `PartialEq` is lattice
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(dst: &mut [BigInt], src: &[BigInt], q: &BigInt, from: usize) {
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d -= s * q;
        }
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut l = Self::zero(dim);
        for i in 0..dim {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            l.rows.push(v);
            l.pivots.push(i);
        }
        l
    }

    pub fn from_generators<I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        let mut l = Self::zero(dim);
        l.extend(gens);
        l
    }

    /// Lattice spanned by the columns of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.column_vecs())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of a `dim x rank` matrix.
    pub fn basis_columns(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rows)
    }

    /// Adds generators and restores reduced Hermite form.
    pub fn extend<I>(&mut self, gens: I)
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        for g in gens {
            assert_eq!(g.len(), self.dim, "generator dimension");
            // reducing after every change keeps intermediate entries small
            if self.insert_raw(g) {
                self.normalize();
            }
        }
    }

    pub fn insert(&mut self, v: Vec<BigInt>) -> bool {
        let changed = self.insert_raw(v);
        if changed {
            self.normalize();
        }
        changed
    }

    fn insert_raw(&mut self, mut v: Vec<BigInt>) -> bool {
        let mut changed = false;
        loop {
            let Some(f) = first_nonzero(&v) else {
                return changed;
            };
            match self.pivots.binary_search(&f) {
                Err(pos) => {
                    if v[f].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, f);
                    return true;
                }
                Ok(pos) => {
                    let a = self.rows[pos][f].clone();
                    let b = v[f].clone();
                    let (q, r) = b.div_rem(&a);
                    if r.is_zero() {
                        axpy(&mut v, &self.rows[pos], &q, f);
                        continue;
                    }
                    let eg = a.extended_gcd(&b);
                    let (g, s, t) = (eg.gcd, eg.x, eg.y);
                    let bg = &b / &g;
                    let ag = &a / &g;
                    let row = &self.rows[pos];
                    let new_row: Vec<BigInt> = row
                        .iter()
                        .zip(&v)
                        .map(|(x, y)| &s * x + &t * y)
                        .collect();
                    let new_v: Vec<BigInt> = row
                        .iter()
                        .zip(&v)
                        .map(|(x, y)| &bg * x - &ag * y)
                        .collect();
                    self.rows[pos] = new_row;
                    if self.rows[pos][f].is_negative() {
                        self.rows[pos]
                            .iter_mut()
                            .for_each(|x| *x = -std::mem::take(x));
                    }
                    v = new_v;
                    changed = true;
                }
            }
        }
    }

    fn normalize(&mut self) {
        for i in 0..self.rows.len() {
            let c = self.pivots[i];
            let (head, tail) = self.rows.split_at_mut(i);
            let piv_row = &tail[0];
            for r in head.iter_mut() {
                let q = r[c].div_floor(&piv_row[c]);
                if !q.is_zero() {
                    axpy(r, piv_row, &q, c);
                }
            }
        }
    }

    /// Canonical representative of `v + L` (entries at pivot columns reduced
    /// into `[0, pivot)`).
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = v[c].div_floor(&row[c]);
            if !q.is_zero() {
                axpy(&mut v, row, &q, c);
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        let mut start = 0;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[start..c].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = v[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                axpy(&mut v, row, &q, c);
            }
            coords.push(q);
            start = c + 1;
        }
        v[start..].iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut l = self.clone();
        l.extend(other.rows.iter().cloned());
        l
    }

    /// Structure of `Z^dim / L`.
    pub fn cokernel_invariants(&self) -> AbelianInvariants {
        if self.rows.is_empty() {
            return AbelianInvariants::free(self.dim);
        }
        cokernel_invariants(&self.basis_columns())
    }

    /// Structure of `self / sub`; fails unless `sub ⊆ self`.
    pub fn quotient_invariants(&self, sub: &Lattice) -> Result<AbelianInvariants> {
        let mut cols = Vec::with_capacity(sub.rank());
        for r in &sub.rows {
            cols.push(self.coordinates(r).ok_or_else(|| {
                Error::NotContained("sublattice is not contained in the ambient lattice".into())
            })?);
        }
        if cols.is_empty() {
            return Ok(AbelianInvariants::free(self.rank()));
        }
        Ok(cokernel_invariants(&IntMatrix::from_columns(self.rank(), &cols)))
    }

    /// `{x in Z^cols(f) : f x in target}`.
    pub fn preimage(f: &IntMatrix, target: &Lattice) -> Result<Lattice> {
        if f.rows() != target.dim {
            return Err(Error::DimensionMismatch(format!(
                "map into Z^{} against a lattice in Z^{}",
                f.rows(),
                target.dim
            )));
        }
        let n = f.cols();
        let aug = if target.is_zero() {
            f.clone()
        } else {
            f.hstack(&target.basis_columns())?
        };
        let k = kernel_basis(&aug);
        let gens = (0..k.cols()).map(|j| (0..n).map(|i| k[(i, j)].clone()).collect());
        Ok(Lattice::from_generators(n, gens))
    }

    /// Image `f(self)`.
    pub fn image(&self, f: &IntMatrix) -> Result<Lattice> {
        let mut gens = Vec::with_capacity(self.rank());
        for r in &self.rows {
            gens.push(f.mul_vec(r)?);
        }
        Ok(Lattice::from_generators(f.rows(), gens))
    }
}
