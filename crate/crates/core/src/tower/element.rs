use super::levels::Tower;
use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;

/// A tuple `(x_0, ..., x_M)` with `x_m` in `R_m`.
///
/// It is compatible, i.e. an element of the truncated inverse limit, when
/// `ρ_{m+1}(x_{m+1}) = x_m` for every `m < M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElement {
    pub levels: Vec<GroupRingElement>,
}

impl TowerElement {
    /// Checks that level `m` lives over `Γ_m`.
    pub fn new(t: &Tower, levels: Vec<GroupRingElement>) -> Result<Self> {
        if levels.len() != t.max_level() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} levels for a tower of height {}",
                levels.len(),
                t.max_level()
            )));
        }
        for (m, x) in levels.iter().enumerate() {
            if x.group() != t.group(m) {
                return Err(Error::GroupMismatch(format!("level {m} over the wrong group")));
            }
        }
        Ok(TowerElement { levels })
    }

    /// The element with level `m` given by `f(m)`.
    pub fn from_fn<F>(t: &Tower, f: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<GroupRingElement>,
    {
        let levels = (0..=t.max_level()).map(f).collect::<Result<Vec<_>>>()?;
        Self::new(t, levels)
    }

    pub fn one(t: &Tower) -> Self {
        Self::from_fn(t, |m| Ok(GroupRingElement::one(t.group(m)))).expect("levels match")
    }

    /// `ϖ = (π_m - 1)_m`.
    pub fn varpi(t: &Tower) -> Self {
        Self::from_fn(t, |m| Ok(t.varpi(m).clone())).expect("levels match")
    }

    /// `e = (e_m)_m`.
    pub fn idempotent(t: &Tower) -> Self {
        Self::from_fn(t, |m| Ok(t.idempotent(m).clone())).expect("levels match")
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    /// The first `m` with `ρ_{m+1}(x_{m+1}) != x_m`, if any.
    pub fn first_incompatibility(&self, t: &Tower) -> Result<Option<usize>> {
        for m in 0..self.height() {
            if self.levels[m + 1].push(t.rho(m + 1))? != self.levels[m] {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn is_compatible(&self, t: &Tower) -> Result<bool> {
        Ok(self.first_incompatibility(t)?.is_none())
    }

    fn zip_with<F>(&self, o: &Self, mut f: F) -> Result<Self>
    where
        F: FnMut(&GroupRingElement, &GroupRingElement) -> Result<GroupRingElement>,
    {
        if self.levels.len() != o.levels.len() {
            return Err(Error::DimensionMismatch("tower elements of different height".into()));
        }
        let levels = self
            .levels
            .iter()
            .zip(&o.levels)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Ok(TowerElement { levels })
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a.checked_add(b))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a.checked_sub(b))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a.gr_mul(b))
    }
}
