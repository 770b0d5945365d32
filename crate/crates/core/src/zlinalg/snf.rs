use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;

/// Smith normal form `U * A * V = D` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`; each entry divides the next,
    /// zeros trail.
    pub invariants: Vec<BigInt>,
}

pub fn snf(a: &IntMatrix) -> SmithForm {
    let (d, u, v) = smith_inner(a, true);
    let invariants = (0..a.rows().min(a.cols())).map(|i| d[(i, i)].clone()).collect();
    SmithForm {
        d,
        u: u.expect("tracked"),
        v: v.expect("tracked"),
        invariants,
    }
}

/// Diagonal of the Smith form, without transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = smith_inner(a, false);
    (0..a.rows().min(a.cols())).map(|i| d[(i, i)].clone()).collect()
}

/// Smallest nonzero |entry| in the lower-right block from `k`; ties go to the
/// lowest `(row, col)`.
fn min_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            match &best {
                Some((_, b)) if &ax >= b => {}
                _ => {
                    let one = ax.is_one();
                    best = Some(((i, j), ax));
                    if one {
                        return best.map(|(p, _)| p);
                    }
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

type Triple = (IntMatrix, Option<IntMatrix>, Option<IntMatrix>);

fn smith_inner(a: &IntMatrix, track: bool) -> Triple {
    let mut d = a.clone();
    let (m, n) = (d.rows(), d.cols());
    let mut u = track.then(|| IntMatrix::identity(m));
    let mut v = track.then(|| IntMatrix::identity(n));
    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_pivot(&d, k) else {
                return (d, u, v);
            };
            d.swap_rows(k, pi);
            d.swap_cols(k, pj);
            if let Some(u) = u.as_mut() {
                u.swap_rows(k, pi);
            }
            if let Some(v) = v.as_mut() {
                v.swap_cols(k, pj);
            }
            let mut clean = true;
            for i in k + 1..m {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = d[(i, k)].div_floor(&d[(k, k)]);
                d.row_axpy(i, k, &q, k);
                if let Some(u) = u.as_mut() {
                    u.row_axpy(i, k, &q, 0);
                }
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = d[(k, j)].div_floor(&d[(k, k)]);
                d.col_axpy(j, k, &q);
                if let Some(v) = v.as_mut() {
                    v.col_axpy(j, k, &q);
                }
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row k and retry.
            let piv = d[(k, k)].clone();
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_axpy(k, i, &minus_one, k);
                    if let Some(u) = u.as_mut() {
                        u.row_axpy(k, i, &minus_one, 0);
                    }
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            if let Some(u) = u.as_mut() {
                u.negate_row(k);
            }
        }
    }
    (d, u, v)
}

/// Isomorphism type of a finitely generated abelian group:
/// `Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with `t_1 | t_2 | ...` and every `t_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "crate::bigint_strings")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds the canonical form from an arbitrary list of cyclic orders
    /// (0 meaning `Z`, 1 meaning trivial).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let diag = IntMatrix::diagonal(orders);
        cokernel_invariants(&diag)
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t))
    }

    /// Exponent of the torsion subgroup (1 for torsion-free groups).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Minimal number of generators as an abelian group.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Invariants of the `n`-torsion subgroup `A[n]`.
    pub fn n_torsion(&self, n: &BigInt) -> AbelianInvariants {
        if n.is_zero() {
            return self.clone();
        }
        // Free summands contribute nothing.
        let orders: Vec<BigInt> = self.torsion.iter().map(|t| t.gcd(n)).collect();
        Self::from_cyclic_orders(&orders)
    }

    pub fn torsion_strings(&self) -> Vec<String> {
        self.torsion.iter().map(|t| t.to_string()).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Structure of `Z^rows / colspan(A)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianInvariants {
    let diag = invariant_factors(a);
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianInvariants {
        free_rank: a.rows() - nonzero,
        torsion: diag
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect(),
    }
}
