use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U * A == H`, `U` unimodular and `H` in reduced row
/// echelon form: positive pivots, entries above each pivot in `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u, _) = hnf_inner(a, true);
    (h, u.expect("transform requested"))
}

/// Hermite form without the transform; also returns the pivot columns.
pub fn hnf_only(a: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let (h, _, pivots) = hnf_inner(a, false);
    (h, pivots)
}

/// Smallest nonzero absolute value in column `c` among rows `from..`, lowest row on ties.
fn min_pivot_in_col(a: &IntMatrix, c: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for i in from..a.rows() {
        let x = &a[(i, c)];
        if x.is_zero() {
            continue;
        }
        let ax = x.abs();
        match &best {
            Some((_, b)) if &ax >= b => {}
            _ => best = Some((i, ax)),
        }
    }
    best.map(|(i, _)| i)
}

fn hnf_inner(a: &IntMatrix, track: bool) -> (IntMatrix, Option<IntMatrix>, Vec<usize>) {
    let mut h = a.clone();
    let m = h.rows();
    let mut u = track.then(|| IntMatrix::identity(m));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..h.cols() {
        if r == m {
            break;
        }
        let mut found = false;
        while let Some(p) = min_pivot_in_col(&h, c, r) {
            found = true;
            h.swap_rows(p, r);
            if let Some(u) = u.as_mut() {
                u.swap_rows(p, r);
            }
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.row_axpy(i, r, &q, c);
                if let Some(u) = u.as_mut() {
                    u.row_axpy(i, r, &q, 0);
                }
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_mut() {
                u.negate_row(r);
            }
        }
        for i in 0..r {
            if h[(i, c)].is_zero() {
                continue;
            }
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            h.row_axpy(i, r, &q, c);
            if let Some(u) = u.as_mut() {
                u.row_axpy(i, r, &q, 0);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, pivots)
}

/// Basis (as columns) of the saturated lattice `{x : A x = 0}`.
///
/// The basis is returned in Hermite form (read row-wise on the transpose), so it
/// is canonical for the kernel.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let (m, pivots, d) = fraction_free_rref(a);
    let r = pivots.len();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    // d x_P = -N x_F, so x_F ranges over {x : N x = 0 mod d}. That lattice
    // contains d Z^f, which keeps every Hermite step below d.
    let dim = r + free.len();
    let mut l = super::Lattice::zero(dim);
    l.extend((0..dim).map(|i| {
        let mut v = vec![BigInt::zero(); dim];
        v[i] = d.clone();
        v
    }));
    l.extend(free.iter().enumerate().map(|(j, &c)| {
        let mut v: Vec<BigInt> = (0..r).map(|k| m[k][c].clone()).collect();
        v.extend((0..free.len()).map(|i| BigInt::from((i == j) as i64)));
        v
    }));
    let gens = l
        .basis()
        .iter()
        .zip(l.pivots())
        .filter(|(_, &p)| p >= r)
        .map(|(row, _)| {
            let xf = &row[r..];
            let mut x = vec![BigInt::zero(); n];
            for (k, &pc) in pivots.iter().enumerate() {
                let s: BigInt = free.iter().zip(xf).map(|(&c, v)| &m[k][c] * v).sum();
                debug_assert!((&s % &d).is_zero());
                x[pc] = -(s / &d);
            }
            for (&c, v) in free.iter().zip(xf) {
                x[c] = v.clone();
            }
            x
        });
    let ker = super::Lattice::from_generators(n, gens.collect::<Vec<_>>());
    ker.basis_columns()
}

/// Fraction-free Gauss-Jordan elimination.
///
/// Returns the reduced rows, the pivot columns and the common pivot value
/// `d > 0`: row `k` reads `d x_{P[k]} + sum_{c free} M[k][c] x_c`.
fn fraction_free_rref(a: &IntMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>, BigInt) {
    let mut m: Vec<Vec<BigInt>> = a.row_vecs();
    let rows = m.len();
    let mut prev = BigInt::from(1);
    let mut pivots = Vec::new();
    let mut k = 0;
    for c in 0..a.cols() {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].bits()) else {
            continue;
        };
        m.swap(k, p);
        let piv = m[k][c].clone();
        for i in 0..rows {
            if i == k {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..a.cols() {
                let v = &piv * &m[i][j] - &f * &m[k][j];
                m[i][j] = if prev == BigInt::from(1) { v } else { v / &prev };
            }
        }
        prev = piv;
        pivots.push(c);
        k += 1;
    }
    m.truncate(k);
    if prev.is_negative() {
        for row in &mut m {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        prev = -prev;
    }
    (m, pivots, prev)
}

/// Some integer solution of `A x = b`, or `None` when none exists.
///
/// The returned solution is reduced modulo the kernel lattice (Hermite form on
/// reversed coordinates), which makes the choice deterministic.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    // U A^T = H  =>  A U^T = H^T; solve H^T y = b by forward substitution.
    let (h, u) = hnf(&a.transpose());
    let mut y: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut rank = 0;
    for i in 0..h.rows() {
        let Some(pc) = h.row(i).iter().position(|x| !x.is_zero()) else {
            break;
        };
        let mut rhs = b[pc].clone();
        for (k, yk) in y.iter().enumerate().take(i) {
            if !yk.is_zero() {
                rhs -= &h[(k, pc)] * yk;
            }
        }
        let (q, rem) = rhs.div_rem(&h[(i, pc)]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = q;
        rank = i + 1;
    }
    // Verify every equation (non-pivot columns included).
    for (j, bj) in b.iter().enumerate() {
        let mut s = BigInt::zero();
        for (k, yk) in y.iter().enumerate().take(rank) {
            if !yk.is_zero() {
                s += &h[(k, j)] * yk;
            }
        }
        if &s != bj {
            return Ok(None);
        }
    }
    let mut x: Vec<BigInt> = vec![BigInt::zero(); n];
    for (k, yk) in y.iter().enumerate().take(rank) {
        if yk.is_zero() {
            continue;
        }
        for (j, xj) in x.iter_mut().enumerate() {
            let ukj = &u[(k, j)];
            if !ukj.is_zero() {
                *xj += ukj * yk;
            }
        }
    }
    if rank < n {
        // Reduce against the kernel in Hermite form taken on reversed
        // coordinates, so trailing entries are minimised first.
        let ker_rows: Vec<usize> = (rank..n).collect();
        let rev: Vec<usize> = (0..n).rev().collect();
        let (kh, pivots) = hnf_only(&u.select_rows(&ker_rows).select_cols(&rev));
        x.reverse();
        for (i, &pc) in pivots.iter().enumerate() {
            let q = x[pc].div_floor(&kh[(i, pc)]);
            if q.is_zero() {
                continue;
            }
            for (j, xj) in x.iter_mut().enumerate() {
                let kij = &kh[(i, j)];
                if !kij.is_zero() {
                    *xj -= kij * &q;
                }
            }
        }
        x.reverse();
    }
    Ok(Some(x))
}
