//! Arithmetic over prime fields `F_l` and their extensions `F_l[x]/(f)`.
//!
//! Used for ranks modulo a prime and for building a field containing the
//! `e`-th roots of unity (`l` not dividing `e`), by splitting the cyclotomic
//! polynomial `Phi_e` with the Cantor-Zassenhaus equal-degree algorithm.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[inline]
fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    r
}

/// Inverse modulo the prime `q`; `a` must be nonzero mod `q`.
pub fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    pow_mod(a, q - 2, q)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Rank of a matrix over `F_q` (`q` prime); entries must already be reduced.
/// The matrix is destroyed.
pub fn rank_mod_p(a: &mut [Vec<u64>], q: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = inv_mod(a[rank][c], q);
        for x in a[rank][c..].iter_mut() {
            *x = mulmod(*x, inv, q);
        }
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for r in tail.iter_mut() {
            let f = r[c];
            if f == 0 {
                continue;
            }
            for (x, y) in r[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + q - mulmod(f, *y, q)) % q;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced row echelon form over `F_q`; returns the pivot columns.
pub fn rref_mod_p(a: &mut Vec<Vec<u64>>, q: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = inv_mod(a[rank][c], q);
        for x in a[rank].iter_mut() {
            *x = mulmod(*x, inv, q);
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + q - mulmod(f, *y, q)) % q;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    a.truncate(rank);
    pivots
}

/// Dense polynomial over `F_q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub q: u64,
    pub c: Vec<u64>,
}

impl Poly {
    pub fn new(q: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= q;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { q, c }
    }

    pub fn zero(q: u64) -> Self {
        Poly { q, c: vec![] }
    }

    pub fn one(q: u64) -> Self {
        Poly::new(q, vec![1])
    }

    pub fn x(q: u64) -> Self {
        Poly::new(q, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.c.last().expect("nonzero polynomial")
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)
            })
            .collect();
        Poly::new(self.q, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let q = self.q;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.c.get(i).copied().unwrap_or(0) + q - o.c.get(i).copied().unwrap_or(0))
            .collect();
        Poly::new(q, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, q)) % q;
            }
        }
        Poly::new(q, c)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let q = self.q;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.lead(), q);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(q), self.clone());
        }
        let mut quo = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let f = mulmod(r[i], inv, q);
            if f == 0 {
                continue;
            }
            quo[i - dd] = f;
            for (j, &b) in d.c.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + q - mulmod(f, b, q)) % q;
            }
        }
        (Poly::new(q, quo), Poly::new(q, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.q);
        Poly::new(self.q, self.c.iter().map(|&x| mulmod(x, inv, self.q)).collect())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut r = Poly::one(self.q).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            r = r.mulmod(&r, m);
            if e.bit(i) {
                r = r.mulmod(&base, m);
            }
        }
        r
    }
}

/// `Phi_e` over `F_q`, computed as `(x^e - 1) / prod_{d | e, d < e} Phi_d`.
pub fn cyclotomic(e: u64, q: u64) -> Poly {
    let mut c = vec![0u64; e as usize + 1];
    c[0] = q - 1;
    c[e as usize] = 1;
    let mut f = Poly::new(q, c);
    for d in 1..e {
        if e % d == 0 {
            f = f.divrem(&cyclotomic(d, q)).0;
        }
    }
    f
}

/// Multiplicative order of `q` modulo `e`.
pub fn mult_order(q: u64, e: u64) -> u64 {
    if e == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = q % e;
    while x != 1 {
        x = mulmod(x, q, e);
        k += 1;
    }
    k
}

/// Splits a squarefree monic `f` whose irreducible factors all have degree
/// `d` until one irreducible factor is isolated.
pub fn equal_degree_factor(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Poly {
    let q = f.q;
    let mut f = f.monic();
    while f.degree() != Some(d) {
        let n = f.degree().unwrap();
        let a = Poly::new(q, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.degree().map_or(true, |k| k == 0) {
            continue;
        }
        let b = if q == 2 {
            // Absolute trace into F_2: a + a^2 + ... + a^(2^(d-1)).
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = t.mulmod(&t, &f);
                s = s.add(&t);
            }
            s
        } else {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            a.powmod(&e, &f).sub(&Poly::one(q))
        };
        let g = b.gcd(&f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            // Keep the smaller side.
            let other = f.divrem(&g).0.monic();
            f = if gd <= n - gd { g } else { other };
        }
    }
    f
}

/// The field `F_q[x]/(f)` with `f` irreducible; `x` is a chosen primitive
/// `e`-th root of unity when built by [`ExtField::cyclotomic`].
#[derive(Clone, Debug)]
pub struct ExtField {
    pub q: u64,
    pub modulus: Poly,
}

/// Element of an [`ExtField`], stored as a reduced polynomial.
pub type Elt = Poly;

impl ExtField {
    /// Smallest field over `F_q` containing a primitive `e`-th root of unity.
    pub fn cyclotomic(q: u64, e: u64) -> Self {
        assert!(e % q != 0, "characteristic divides the root order");
        let phi = cyclotomic(e, q);
        let d = mult_order(q, e) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ (q << 20) ^ e);
        let f = equal_degree_factor(&phi, d, &mut rng);
        ExtField { q, modulus: f }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn zeta(&self) -> Elt {
        Poly::x(self.q).rem(&self.modulus)
    }

    pub fn from_int(&self, a: u64) -> Elt {
        Poly::new(self.q, vec![a % self.q])
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        a.mulmod(b, &self.modulus)
    }

    pub fn pow(&self, a: &Elt, e: u64) -> Elt {
        a.powmod(&BigUint::from(e), &self.modulus)
    }

    pub fn inv(&self, a: &Elt) -> Elt {
        // a^(q^d - 2)
        let e = BigUint::from(self.q).pow(self.degree() as u32) - 2u32;
        a.powmod(&e, &self.modulus)
    }

    /// Rank of a matrix with entries in this field. The matrix is destroyed.
    pub fn rank(&self, a: &mut [Vec<Elt>]) -> usize {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = self.inv(&a[rank][c]);
            let pivot: Vec<Elt> = a[rank].iter().map(|x| self.mul(x, &inv)).collect();
            for r in a[rank + 1..].iter_mut() {
                if r[c].is_zero() {
                    continue;
                }
                let f = r[c].clone();
                for (x, y) in r[c..].iter_mut().zip(&pivot[c..]) {
                    *x = x.sub(&self.mul(&f, y));
                }
            }
            a[rank] = pivot;
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_small_fields() {
        let mut a = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(rank_mod_p(&mut a, 2), 1);
        let mut b = vec![vec![1, 2], vec![3, 4]];
        assert_eq!(rank_mod_p(&mut b, 5), 2);
        let mut c = vec![vec![2, 4], vec![1, 2]];
        assert_eq!(rank_mod_p(&mut c, 7), 1);
    }

    #[test]
    fn cyclotomic_degrees() {
        for (e, deg) in [(1, 1), (2, 1), (4, 2), (8, 4), (9, 6), (25, 20)] {
            assert_eq!(cyclotomic(e, 7).degree(), Some(deg));
        }
        // Phi_4 = x^2 + 1
        assert_eq!(cyclotomic(4, 3).c, vec![1, 0, 1]);
    }

    #[test]
    fn zeta_has_exact_order() {
        for (q, e) in [(2, 9), (3, 8), (5, 27), (7, 4), (2, 3), (3, 2), (13, 16), (2, 27)] {
            let k = ExtField::cyclotomic(q, e);
            assert_eq!(k.degree() as u64, mult_order(q, e));
            let z = k.zeta();
            assert_eq!(k.pow(&z, e), k.from_int(1), "q={q} e={e}");
            for d in 1..e {
                if e % d == 0 {
                    assert_ne!(k.pow(&z, d), k.from_int(1), "q={q} e={e} d={d}");
                }
            }
        }
    }

    #[test]
    fn factor_is_irreducible_divisor() {
        let q = 3;
        let phi = cyclotomic(16, q);
        let k = ExtField::cyclotomic(q, 16);
        assert!(phi.rem(&k.modulus).is_zero());
        // x^(q^d) = x mod f for irreducible f of degree d
        let qd = BigUint::from(q).pow(k.degree() as u32);
        assert_eq!(Poly::x(q).powmod(&qd, &k.modulus), Poly::x(q));
    }

    #[test]
    fn extension_rank() {
        let k = ExtField::cyclotomic(2, 3);
        let z = k.zeta();
        let one = k.from_int(1);
        let z2 = k.mul(&z, &z);
        let mut m = vec![vec![one.clone(), z.clone()], vec![z.clone(), z2]];
        assert_eq!(k.rank(&mut m), 1);
        let mut m = vec![vec![one.clone(), z.clone()], vec![z, one]];
        assert_eq!(k.rank(&mut m), 2);
    }
}
