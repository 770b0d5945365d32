use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::group::{FiniteAbelianGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::zlinalg::IntMatrix;

/// Coefficient ring of a group ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "modulus")]
pub enum BaseRing {
    Int,
    #[serde(with = "bigint_string")]
    IntMod(BigInt),
    Rat,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Element of `A[Γ]` for `A` one of `Z`, `Z/N`, `Q`.
///
/// Coefficients are stored as integer numerators over a common positive
/// denominator, which is 1 unless the base is `Q`. Mod-`N` coefficients are
/// kept in `[0, N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    group: FiniteAbelianGroup,
    base: BaseRing,
    coeffs: Vec<BigInt>,
    denom: BigInt,
}

impl GroupRingElement {
    fn normalized(
        group: FiniteAbelianGroup,
        base: BaseRing,
        mut coeffs: Vec<BigInt>,
        mut denom: BigInt,
    ) -> Self {
        match &base {
            BaseRing::Int => debug_assert!(denom.is_one()),
            BaseRing::IntMod(n) => {
                for c in coeffs.iter_mut() {
                    *c = c.mod_floor(n);
                }
            }
            BaseRing::Rat => {
                let g = coeffs.iter().fold(denom.clone(), |g, c| g.gcd(c));
                if !g.is_one() && !g.is_zero() {
                    for c in coeffs.iter_mut() {
                        *c /= &g;
                    }
                    denom /= &g;
                }
                if denom.is_negative() {
                    denom = -denom;
                    coeffs.iter_mut().for_each(|c| *c = -std::mem::take(c));
                }
            }
        }
        GroupRingElement {
            group,
            base,
            coeffs,
            denom,
        }
    }

    pub fn zero(group: &FiniteAbelianGroup, base: BaseRing) -> Self {
        let n = group.order();
        Self::normalized(group.clone(), base, vec![BigInt::zero(); n], BigInt::one())
    }

    pub fn scalar(group: &FiniteAbelianGroup, base: BaseRing, k: impl Into<BigInt>) -> Self {
        let mut c = vec![BigInt::zero(); group.order()];
        c[0] = k.into();
        Self::normalized(group.clone(), base, c, BigInt::one())
    }

    pub fn one(group: &FiniteAbelianGroup) -> Self {
        Self::scalar(group, BaseRing::Int, 1)
    }

    /// The group element with index `g`, as an element of `Z[Γ]`.
    pub fn basis(group: &FiniteAbelianGroup, g: usize) -> Self {
        let mut c = vec![BigInt::zero(); group.order()];
        c[g] = BigInt::one();
        Self::normalized(group.clone(), BaseRing::Int, c, BigInt::one())
    }

    pub fn from_coeffs(group: &FiniteAbelianGroup, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Self::normalized(group.clone(), BaseRing::Int, coeffs, BigInt::one()))
    }

    pub fn from_i64(group: &FiniteAbelianGroup, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(group, coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Rational element `coeffs / denom`.
    pub fn from_rational(
        group: &FiniteAbelianGroup,
        coeffs: Vec<BigInt>,
        denom: BigInt,
    ) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimensionMismatch("coefficient count".into()));
        }
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::normalized(group.clone(), BaseRing::Rat, coeffs, denom))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    /// Numerators; divide by [`denom`](Self::denom) for the true coefficients.
    pub fn numerators(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn coeff(&self, g: usize) -> BigRational {
        BigRational::new(self.coeffs[g].clone(), self.denom.clone())
    }

    /// Integer coefficients; fails for other bases.
    pub fn int_coeffs(&self) -> Result<&[BigInt]> {
        match self.base {
            BaseRing::Int => Ok(&self.coeffs),
            _ => Err(Error::BaseMismatch(format!(
                "expected integer coefficients, found {:?}",
                self.base
            ))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Changes base along `Z -> Z/N`, `Z -> Q`, or `Q -> Z` (if integral).
    pub fn to_base(&self, base: BaseRing) -> Result<Self> {
        match (&self.base, &base) {
            (a, b) if a == b => Ok(self.clone()),
            (BaseRing::Int, _) => Ok(Self::normalized(
                self.group.clone(),
                base,
                self.coeffs.clone(),
                BigInt::one(),
            )),
            (BaseRing::Rat, BaseRing::Int) if self.denom.is_one() => Ok(Self::normalized(
                self.group.clone(),
                base,
                self.coeffs.clone(),
                BigInt::one(),
            )),
            _ => Err(Error::BaseMismatch(format!(
                "cannot convert from {:?} to {:?}",
                self.base, base
            ))),
        }
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.group != o.group {
            return Err(Error::GroupMismatch(format!("{:?} vs {:?}", self.group, o.group)));
        }
        if self.base != o.base {
            return Err(Error::BaseMismatch(format!("{:?} vs {:?}", self.base, o.base)));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let (d, c) = if self.denom == o.denom {
            let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
            (self.denom.clone(), c)
        } else {
            let c = self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a * &o.denom + b * &self.denom)
                .collect();
            (&self.denom * &o.denom, c)
        };
        Ok(Self::normalized(self.group.clone(), self.base.clone(), c, d))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let c = self.coeffs.iter().map(|x| -x).collect();
        Self::normalized(self.group.clone(), self.base.clone(), c, self.denom.clone())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let c = self.coeffs.iter().map(|x| x * k).collect();
        Self::normalized(self.group.clone(), self.base.clone(), c, self.denom.clone())
    }

    /// Convolution product.
    pub fn gr_mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let g = &self.group;
        let mut c = vec![BigInt::zero(); g.order()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                c[g.add(a, b)] += x * y;
            }
        }
        Ok(Self::normalized(
            g.clone(),
            self.base.clone(),
            c,
            &self.denom * &o.denom,
        ))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::scalar(&self.group, self.base.clone(), 1);
        for _ in 0..k {
            r = r.gr_mul(self).expect("same ring");
        }
        r
    }

    /// Multiplication by a group element (index `g`).
    pub fn shift(&self, g: usize) -> Self {
        let grp = &self.group;
        let mut c = vec![BigInt::zero(); grp.order()];
        for (a, x) in self.coeffs.iter().enumerate() {
            c[grp.add(a, g)] = x.clone();
        }
        GroupRingElement {
            group: grp.clone(),
            base: self.base.clone(),
            coeffs: c,
            denom: self.denom.clone(),
        }
    }

    /// Matrix of `x -> self * x` in the group basis (integer base only).
    pub fn regular_matrix(&self) -> Result<IntMatrix> {
        let coeffs = self.int_coeffs()?;
        let g = &self.group;
        let n = g.order();
        let mut m = IntMatrix::zeros(n, n);
        for (a, x) in coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for h in 0..n {
                m[(g.add(a, h), h)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> BigRational {
        let s: BigInt = self.coeffs.iter().sum();
        let r = BigRational::new(s, self.denom.clone());
        match &self.base {
            BaseRing::IntMod(n) => BigRational::from_integer(r.to_integer().mod_floor(n)),
            _ => r,
        }
    }

    /// Image under the ring map induced by `h`.
    pub fn push(&self, h: &GroupHom) -> Result<Self> {
        if h.source() != &self.group {
            return Err(Error::GroupMismatch(format!(
                "element of {:?} pushed along a map from {:?}",
                self.group,
                h.source()
            )));
        }
        let t = h.target();
        let mut c = vec![BigInt::zero(); t.order()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                c[h.apply(a)] += x;
            }
        }
        Ok(Self::normalized(t.clone(), self.base.clone(), c, self.denom.clone()))
    }

    /// `sum_{i < length} pi^i` with integer coefficients.
    pub fn partial_trace(group: &FiniteAbelianGroup, pi: usize, length: u64) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidArgument("partial trace of length 0".into()));
        }
        let mut c = vec![BigInt::zero(); group.order()];
        let mut x = 0;
        for _ in 0..length {
            c[x] += 1;
            x = group.add(x, pi);
        }
        Self::from_coeffs(group, c)
    }

    /// Sum of the elements of `d`, in `Z[Γ]`.
    pub fn subgroup_norm(d: &Subgroup) -> Self {
        let g = d.ambient();
        let mut c = vec![BigInt::zero(); g.order()];
        for &x in d.elements() {
            c[x] = BigInt::one();
        }
        Self::normalized(g.clone(), BaseRing::Int, c, BigInt::one())
    }

    /// `|Δ|^{-1} sum_{δ in Δ} δ`, in `Q[Γ]`.
    pub fn subgroup_idempotent(d: &Subgroup) -> Self {
        let n = Self::subgroup_norm(d);
        Self::normalized(
            n.group.clone(),
            BaseRing::Rat,
            n.coeffs,
            BigInt::from(d.order()),
        )
    }

    /// `{h - 1 : h in Δ, h != 1}`, generating the relative augmentation ideal.
    pub fn rel_aug_ideal(d: &Subgroup) -> Vec<Self> {
        let g = d.ambient();
        d.elements()
            .iter()
            .filter(|&&h| h != 0)
            .map(|&h| {
                let mut c = vec![BigInt::zero(); g.order()];
                c[h] = BigInt::one();
                c[0] = BigInt::from(-1);
                Self::normalized(g.clone(), BaseRing::Int, c, BigInt::one())
            })
            .collect()
    }

    /// Whether multiplication by `self` is injective on `Z[Γ]`.
    pub fn is_non_zero_divisor(&self) -> Result<bool> {
        Ok(!self.regular_matrix()?.det()?.is_zero())
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if a == 0 {
                terms.push(x.to_string());
            } else {
                terms.push(format!("{}*g{:?}", x, self.group.exponents(a)));
            }
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.denom.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.denom)
        }
    }
}

// Operator sugar; these panic on mismatched rings, use the `checked_*` forms
// when that can happen.
impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_add(rhs).expect("group ring mismatch")
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_sub(rhs).expect("group ring mismatch")
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.gr_mul(rhs).expect("group ring mismatch")
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.neg_ref()
    }
}
