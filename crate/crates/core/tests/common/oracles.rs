//! Slow, independent reference computations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent tuples of `∏ Z/m_i` in lexicographic order.
pub fn group_elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &m in orders {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |e| {
                    let mut u = t.clone();
                    u.push(e);
                    u
                })
            })
            .collect();
    }
    out
}

pub fn index_of(orders: &[u64], e: &[u64]) -> usize {
    let mut idx = 0usize;
    for (&m, &x) in orders.iter().zip(e) {
        idx = idx * m as usize + (x % m) as usize;
    }
    idx
}

/// Convolution in `Z[∏ Z/m_i]` computed from exponent tuples.
pub fn convolve(orders: &[u64], x: &[i64], y: &[i64]) -> Vec<i64> {
    let els = group_elements(orders);
    let mut out = vec![0i64; els.len()];
    for (a, ea) in els.iter().enumerate() {
        if x[a] == 0 {
            continue;
        }
        for (b, eb) in els.iter().enumerate() {
            if y[b] == 0 {
                continue;
            }
            let s: Vec<u64> = ea.iter().zip(eb).map(|(u, v)| u + v).collect();
            out[index_of(orders, &s)] += x[a] * y[b];
        }
    }
    out
}

/// Non-zero-divisor test by evaluating every complex character.
pub fn nzd_by_characters(orders: &[u64], x: &[i64]) -> bool {
    let els = group_elements(orders);
    for chi in &els {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (g, e) in els.iter().enumerate() {
            if x[g] == 0 {
                continue;
            }
            let phase: f64 = chi
                .iter()
                .zip(e)
                .zip(orders)
                .map(|((&k, &a), &m)| (k * a) as f64 / m as f64)
                .sum();
            let t = 2.0 * std::f64::consts::PI * phase;
            re += x[g] as f64 * t.cos();
            im += x[g] as f64 * t.sin();
        }
        if re.hypot(im) < 1e-7 {
            return false;
        }
    }
    true
}

/// A nonzero `y` with coefficients in `[-b, b]` and `x y = 0`, by exhaustive
/// search.
pub fn zero_divisor_witness(orders: &[u64], x: &[i64], b: i64) -> Option<Vec<i64>> {
    let n = x.len();
    let mut y = vec![-b; n];
    loop {
        if y.iter().any(|&c| c != 0) && convolve(orders, x, &y).iter().all(|&c| c == 0) {
            return Some(y);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            if y[i] < b {
                y[i] += 1;
                break;
            }
            y[i] = -b;
            i += 1;
        }
    }
}

/// All `v` with entries in `[-b, b]` and `A v = 0`.
pub fn small_kernel_vectors(a: &[Vec<i64>], cols: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-b; cols];
    loop {
        if a.iter().all(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum::<i64>() == 0) {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == cols {
                return out;
            }
            if v[i] < b {
                v[i] += 1;
                break;
            }
            v[i] = -b;
            i += 1;
        }
    }
}

/// Triangular basis of the lattice spanned by `gens` in `Z^m`, if it has
/// full rank: row `c` has a positive entry at `c` and zeros before.
fn triangular_basis(m: usize, gens: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let mut pool: Vec<Vec<BigInt>> = gens.to_vec();
    let mut basis = Vec::with_capacity(m);
    for c in 0..m {
        loop {
            let nz: Vec<usize> = (0..pool.len()).filter(|&i| !pool[i][c].is_zero()).collect();
            if nz.is_empty() {
                return None;
            }
            let piv = *nz.iter().min_by_key(|&&i| pool[i][c].abs()).unwrap();
            if nz.len() == 1 {
                let mut v = pool.swap_remove(piv);
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -x.clone());
                }
                basis.push(v);
                break;
            }
            let pv = pool[piv].clone();
            for &i in &nz {
                if i == piv {
                    continue;
                }
                let q = pool[i][c].div_floor(&pv[c]);
                for (x, y) in pool[i].iter_mut().zip(&pv) {
                    *x -= &q * y;
                }
            }
        }
    }
    Some(basis)
}

/// `Z^m / L` enumerated element by element.
pub struct EnumeratedGroup {
    basis: Vec<Vec<BigInt>>,
    pub elements: Vec<Vec<BigInt>>,
}

impl EnumeratedGroup {
    /// `None` if the quotient is infinite or larger than `limit`.
    pub fn new(m: usize, gens: &[Vec<BigInt>], limit: u64) -> Option<Self> {
        let basis = triangular_basis(m, gens)?;
        let mut order = BigInt::one();
        for (c, b) in basis.iter().enumerate() {
            order *= &b[c];
        }
        if order > BigInt::from(limit) {
            return None;
        }
        let mut elements = vec![vec![]];
        for (c, b) in basis.iter().enumerate() {
            let d = b[c].to_u64().unwrap();
            elements = elements
                .into_iter()
                .flat_map(|t: Vec<BigInt>| {
                    (0..d).map(move |e| {
                        let mut u = t.clone();
                        u.push(BigInt::from(e));
                        u
                    })
                })
                .collect();
        }
        Some(EnumeratedGroup { basis, elements })
    }

    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut x = x.to_vec();
        for (c, b) in self.basis.iter().enumerate() {
            let q = x[c].div_floor(&b[c]);
            for (u, v) in x.iter_mut().zip(b) {
                *u -= &q * v;
            }
        }
        x
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_order(&self, x: &[BigInt]) -> u64 {
        let mut y = self.reduce(x);
        let mut k = 1;
        while y.iter().any(|c| !c.is_zero()) {
            let s: Vec<BigInt> = y.iter().zip(x).map(|(a, b)| a + b).collect();
            y = self.reduce(&s);
            k += 1;
        }
        k
    }

    /// `|G[k]|`, counted.
    pub fn k_torsion_count(&self, k: u64) -> usize {
        self.elements.iter().filter(|x| k % self.element_order(x) == 0).count()
    }
}

/// `|A[k]|` for `A = ⊕ Z/s_i`.
pub fn k_torsion_from_invariants(torsion: &[BigInt], k: u64) -> usize {
    torsion
        .iter()
        .map(|s| s.gcd(&BigInt::from(k)).to_usize().unwrap())
        .product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Closure of a set of vectors in `F_p^D` under addition and the given
/// linear maps.
pub fn fp_span(p: u64, gens: &[Vec<u64>], maps: &[Box<dyn Fn(&[u64]) -> Vec<u64> + '_>]) -> HashSet<Vec<u64>> {
    let dim = gens.first().map_or(0, |g| g.len());
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let zero = vec![0u64; dim];
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    let mut moves: Vec<Vec<u64>> = gens.to_vec();
    // translates of generators are generators too
    let mut frontier: BTreeSet<Vec<u64>> = gens.iter().cloned().collect();
    while let Some(v) = frontier.pop_first() {
        for f in maps {
            let w = f(&v);
            if !moves.contains(&w) {
                moves.push(w.clone());
                frontier.insert(w);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for g in &moves {
            let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % p).collect();
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Homology of `C_n` with trivial integral coefficients from the periodic
/// resolution: `Z`, then `Z/n` in odd and `0` in positive even degrees.
pub fn cyclic_group_homology(n: u64, i: usize) -> (usize, Vec<BigInt>) {
    match i {
        0 => (1, vec![]),
        _ if i % 2 == 1 && n > 1 => (0, vec![BigInt::from(n)]),
        _ => (0, vec![]),
    }
}

/// All group translates of a flat vector (blocks of `|G|` coefficients).
pub fn flat_translates(orders: &[u64], v: &[BigInt]) -> Vec<Vec<BigInt>> {
    let els = group_elements(orders);
    let n = els.len();
    els.iter()
        .map(|a| {
            let mut w = vec![BigInt::zero(); v.len()];
            for blk in 0..v.len() / n {
                for (h, eh) in els.iter().enumerate() {
                    let s: Vec<u64> = eh.iter().zip(a).map(|(x, y)| x + y).collect();
                    w[blk * n + index_of(orders, &s)] = v[blk * n + h].clone();
                }
            }
            w
        })
        .collect()
}
