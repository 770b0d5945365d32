use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::is_prime;

/// Environment variable overriding the group-order cap.
pub const MAX_ORDER_ENV: &str = "PROLIM_MAX_ORDER";

/// Cap used when neither the caller nor the environment sets one.
pub const DEFAULT_MAX_ORDER: u64 = 128;

/// The group-order cap: `PROLIM_MAX_ORDER` if set and valid, else 128.
pub fn default_max_order() -> u64 {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &u64| n > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

/// Parameters of a tower `Γ_m = (Z/p^m)^d`, `m <= max_level`.
///
/// A custom `schedule` `(n_0, ..., n_M)` is allowed only for `d = 1`, giving
/// `Γ_m = C_{p^{n_m}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub p: u64,
    pub d: usize,
    #[serde(alias = "M")]
    pub max_level: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub pi_coord: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u32>>,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl TowerSpec {
    pub fn new(p: u64, d: usize, max_level: usize) -> Self {
        TowerSpec {
            p,
            d,
            max_level,
            pi_coord: 0,
            schedule: None,
        }
    }

    pub fn with_schedule(p: u64, schedule: Vec<u32>) -> Self {
        TowerSpec {
            p,
            d: 1,
            max_level: schedule.len().saturating_sub(1),
            pi_coord: 0,
            schedule: Some(schedule),
        }
    }

    /// The exponents `n_0, ..., n_M`.
    pub fn exponents(&self) -> Vec<u32> {
        match &self.schedule {
            Some(s) => s.clone(),
            None => (0..=self.max_level as u32).collect(),
        }
    }

    /// Checks everything but the order cap.
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidTower(format!("p = {} is not prime", self.p)));
        }
        if self.d == 0 {
            return Err(Error::InvalidTower("rank d must be at least 1".into()));
        }
        if self.pi_coord >= self.d {
            return Err(Error::InvalidTower(format!(
                "pi coordinate {} out of range for d = {}",
                self.pi_coord, self.d
            )));
        }
        if let Some(s) = &self.schedule {
            if self.d != 1 {
                return Err(Error::InvalidTower(
                    "custom exponent schedules need d = 1".into(),
                ));
            }
            if s.len() != self.max_level + 1 {
                return Err(Error::InvalidTower(format!(
                    "schedule has {} entries for max level {}",
                    s.len(),
                    self.max_level
                )));
            }
            if s.first() != Some(&0) {
                return Err(Error::InvalidTower("schedule must start with n_0 = 0".into()));
            }
            if let Some(w) = s.windows(2).find(|w| w[1] <= w[0]) {
                return Err(Error::InvalidTower(format!(
                    "schedule not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// Order of the top group `Γ_M`, or `None` on overflow.
    pub fn top_order(&self) -> Option<u64> {
        let n = *self.exponents().last()?;
        let e = n.checked_mul(self.d as u32)?;
        self.p.checked_pow(e)
    }

    /// Full validation including `|Γ_M| <= cap`.
    pub fn validate_with_cap(&self, cap: u64) -> Result<()> {
        self.validate()?;
        match self.top_order() {
            Some(o) if o <= cap => Ok(()),
            o => Err(Error::GroupTooLarge {
                order: o.unwrap_or(u64::MAX),
                cap,
            }),
        }
    }
}
