use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::module::FPModule;
use super::resolution::subquotient_homology;
use crate::error::{Error, Result};
use crate::groupring::Subgroup;
use crate::zlinalg::{snf, unimodular_inverse, AbelianInvariants, IntMatrix, Lattice};

/// The underlying group of a module in Smith coordinates, `⊕ Z/d_i` (with
/// `d_i = 0` meaning `Z`), together with the maps to and from flat vectors.
#[derive(Clone, Debug)]
pub struct SmithCoordinates {
    pub orders: Vec<BigInt>,
    /// `k x N`: flat vector to coordinates.
    pub proj: IntMatrix,
    /// `N x k`: coordinates to a flat representative.
    pub lift: IntMatrix,
}

impl SmithCoordinates {
    pub fn of(m: &FPModule) -> Self {
        let n = m.flat_dim();
        let b = m.relation_lattice().basis_columns();
        let (u, diag) = if b.cols() == 0 {
            (IntMatrix::identity(n), vec![BigInt::zero(); n])
        } else {
            let sf = snf(&b);
            let mut d = vec![BigInt::zero(); n];
            for (i, x) in sf.invariants.iter().enumerate() {
                d[i] = x.clone();
            }
            (sf.u, d)
        };
        let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
        let uinv = unimodular_inverse(&u).expect("Smith transform is unimodular");
        SmithCoordinates {
            orders: keep.iter().map(|&i| diag[i].clone()).collect(),
            proj: u.select_rows(&keep),
            lift: uinv.select_cols(&keep),
        }
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }
}

/// `H_1(Δ, M)` for `Δ = ⊕ <σ_i>` (orders `n_i`), from the tensor product of
/// the periodic resolutions of the cyclic factors in degrees `<= 2`:
/// `d(e_i) = σ_i - 1`, `d(f_i) = N_i e_i` and
/// `d(f_ij) = (σ_i - 1) e_j - (σ_j - 1) e_i`.
pub fn homology_h1(delta: &Subgroup, m: &FPModule) -> Result<AbelianInvariants> {
    if delta.ambient() != m.group() {
        return Err(Error::GroupMismatch("subgroup of another group".into()));
    }
    let g = m.group();
    let k = m.flat_dim();
    let dec = delta.cyclic_decomposition();
    let r = dec.len();
    if r == 0 || m.is_zero() {
        return Ok(AbelianInvariants::zero());
    }
    // flat coordinates: the actions are permutations, so entries stay small
    let id = IntMatrix::identity(k);
    let mut minus_one = Vec::with_capacity(r);
    let mut norms = Vec::with_capacity(r);
    for &(x, n) in &dec {
        minus_one.push(m.action_matrix(x).checked_sub(&id)?);
        let mut nm = IntMatrix::zeros(k, k);
        for j in 0..n {
            nm = nm.checked_add(&m.action_matrix(g.times(x, j)))?;
        }
        norms.push(nm);
    }

    let mut d1 = IntMatrix::zeros(k, r * k);
    for (i, a) in minus_one.iter().enumerate() {
        put_block(&mut d1, 0, i * k, a, 1);
    }
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let mut d2 = IntMatrix::zeros(r * k, (r + pairs.len()) * k);
    for (i, nm) in norms.iter().enumerate() {
        put_block(&mut d2, i * k, i * k, nm, 1);
    }
    for (c, &(i, j)) in pairs.iter().enumerate() {
        let col = (r + c) * k;
        put_block(&mut d2, j * k, col, &minus_one[i], 1);
        put_block(&mut d2, i * k, col, &minus_one[j], -1);
    }
    let l0 = m.relation_lattice();
    let l1 = Lattice::from_generators(
        r * k,
        (0..r)
            .flat_map(|c| {
                l0.basis().iter().map(move |v| {
                    let mut w = vec![BigInt::zero(); r * k];
                    w[c * k..(c + 1) * k].clone_from_slice(v);
                    w
                })
            })
            .collect::<Vec<_>>(),
    );
    subquotient_homology(r * k, &l1, Some(&d2), Some((&d1, l0)))
}

fn put_block(dst: &mut IntMatrix, r0: usize, c0: usize, blk: &IntMatrix, sign: i64) {
    let s = BigInt::from(sign);
    for i in 0..blk.rows() {
        for j in 0..blk.cols() {
            let x = &blk[(i, j)];
            if !x.is_zero() {
                dst[(r0 + i, c0 + j)] += x * &s;
            }
        }
    }
}
