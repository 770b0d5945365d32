use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::module::FPModule;
use crate::error::{Error, Result};
use crate::ffield::{is_prime, ExtField, Poly};
use crate::zlinalg::to_u64_mod;

/// Minimal number of generators of `M ⊗ Z_l` over `Z_l[Γ]`.
///
/// Every maximal ideal of `Z_l[Γ]` is the kernel of a character
/// `χ : Z[Γ] -> F` into a finite field of characteristic `l` (trivial on the
/// `l`-part of `Γ`), so by Nakayama the count is
/// `max_χ dim_F (M ⊗_χ F) = max_χ (n - rank χ(relations))`.
/// For `l = p` and `Γ` a `p`-group only the trivial character occurs, giving
/// `dim_{F_p} M/(pM + J M)`.
pub fn min_gens(m: &FPModule, ell: u64) -> Result<usize> {
    if !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not prime")));
    }
    let n = m.n_gens();
    if n == 0 {
        return Ok(0);
    }
    let g = m.group();
    let prime_to = |mut x: u64| {
        while x % ell == 0 {
            x /= ell;
        }
        x
    };
    let orders: Vec<u64> = g.cyclic_orders().iter().map(|&x| prime_to(x)).collect();
    let e = orders.iter().copied().fold(1, num_integer::lcm);
    let field = ExtField::cyclotomic(ell, e);
    let deg = field.degree();
    let zpow: Vec<Poly> = {
        let z = field.zeta();
        let mut v = vec![field.from_int(1)];
        for _ in 1..e {
            let next = field.mul(v.last().unwrap(), &z);
            v.push(next);
        }
        v
    };
    let ell_big = BigInt::from(ell);
    let rels = m.flat_relations();
    let order = g.order();
    let exps: Vec<Vec<u64>> = (0..order).map(|x| g.exponents(x)).collect();
    let mut best = 0;
    let n_chars: usize = orders.iter().map(|&x| x as usize).product();
    for c in 0..n_chars {
        // character parameters a_i in [0, orders_i)
        let mut a = vec![0u64; orders.len()];
        let mut rest = c;
        for i in (0..orders.len()).rev() {
            a[i] = (rest % orders[i] as usize) as u64;
            rest /= orders[i] as usize;
        }
        let kpow: Vec<usize> = exps
            .iter()
            .map(|ex| {
                let mut k: u64 = 0;
                for i in 0..ex.len() {
                    let step = e / orders[i];
                    k = (k + (ex[i] % orders[i].max(1)) * a[i] % e * step) % e;
                }
                k as usize
            })
            .collect();
        let mut mat: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = rels
                .iter()
                .map(|r| {
                    let mut acc = vec![0u64; deg];
                    for (x, coef) in r[i * order..(i + 1) * order].iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let c = to_u64_mod(coef, &ell_big);
                        if c == 0 {
                            continue;
                        }
                        for (j, z) in zpow[kpow[x]].c.iter().enumerate() {
                            acc[j] = ((acc[j] as u128 + c as u128 * *z as u128) % ell as u128) as u64;
                        }
                    }
                    Poly::new(ell, acc)
                })
                .collect();
            mat.push(row);
        }
        let r = if rels.is_empty() { 0 } else { field.rank(&mut mat) };
        best = best.max(n - r);
        if best == n {
            break;
        }
    }
    Ok(best)
}

/// Prime divisors of `x > 0`, by trial division.
pub fn prime_divisors(x: &BigInt) -> Result<Vec<u64>> {
    let mut x = x
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("cannot factor {x}")))?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= x {
        if x % d == 0 {
            out.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    Ok(out)
}

/// Local generator counts and the resulting global bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsBound {
    pub per_prime: BTreeMap<u64, usize>,
    pub bound: usize,
}

/// `μ` at `p` and at every prime dividing the torsion of the underlying
/// group; the bound is the maximum plus one (the base `Z` has dimension one),
/// or zero for the zero module.
pub fn fs_bound(m: &FPModule, p: u64) -> Result<FsBound> {
    let mut primes = vec![p];
    for t in &m.underlying_invariants().torsion {
        primes.extend(prime_divisors(t)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut per_prime = BTreeMap::new();
    for l in primes {
        per_prime.insert(l, min_gens(m, l)?);
    }
    let max = per_prime.values().copied().max().unwrap_or(0);
    Ok(FsBound {
        per_prime,
        bound: if max == 0 { 0 } else { max + 1 },
    })
}
