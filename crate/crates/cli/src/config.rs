use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use prolim_core::{DigitSequence, Tower, TowerSpec};
use serde::{Deserialize, Serialize};

use crate::ConfigError;

/// A verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Prop21,
    Xa,
    Nakayama,
    Kappa,
    Torpm,
    Fsscan,
    All,
}

impl Suite {
    /// Concrete suites in run order.
    pub const ORDER: [Suite; 6] = [
        Suite::Prop21,
        Suite::Xa,
        Suite::Nakayama,
        Suite::Kappa,
        Suite::Torpm,
        Suite::Fsscan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop21 => "prop21",
            Suite::Xa => "xa",
            Suite::Nakayama => "nakayama",
            Suite::Kappa => "kappa",
            Suite::Torpm => "torpm",
            Suite::Fsscan => "fsscan",
            Suite::All => "all",
        }
    }

    /// Whether the suite draws random samples from the seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Suite::Xa | Suite::Kappa | Suite::Torpm | Suite::All)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ORDER
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| ConfigError(format!("unknown suite {s:?}")))
    }
}

/// A chain `θ : R^1 -> R^1` used by the kappa and fsscan suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainChoice {
    Varpi,
    Identity,
    P,
    Zero,
    /// `samples.chains` random chains with coefficients in `[-2, 2]`.
    Random,
}

/// Sample counts for the randomized suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Samples {
    /// Random digit sequences per tower.
    #[serde(default = "default_digits")]
    pub digits: usize,
    /// Random chains per tower.
    #[serde(default = "default_chains")]
    pub chains: usize,
    /// Random modules per tower level.
    #[serde(default = "default_modules")]
    pub modules: usize,
}

fn default_digits() -> usize {
    20
}

fn default_chains() -> usize {
    10
}

fn default_modules() -> usize {
    20
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            digits: default_digits(),
            chains: default_chains(),
            modules: default_modules(),
        }
    }
}

/// Which suites to run on which towers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub towers: Vec<TowerSpec>,
    #[serde(default)]
    pub suites: Vec<Suite>,
    /// Explicit digit sequences; each runs on every tower it is valid for.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub digits: Vec<Vec<u64>>,
    #[serde(default = "default_chain_choices")]
    pub chains: Vec<ChainChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Samples,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Expect every check to pass, including the known failures.
    #[serde(default, skip_serializing_if = "is_false")]
    pub strict: bool,
}

fn is_false(b: &bool) -> bool {
    !b
}

fn default_chain_choices() -> Vec<ChainChoice> {
    vec![ChainChoice::Varpi, ChainChoice::Random]
}

impl SuiteConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(s).map_err(|e| ConfigError(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&serde_json::to_value(self).expect("serializable"))
            .expect("serializable")
    }

    /// Suites to run, expanded and deduplicated, in run order.
    pub fn selected(&self) -> Vec<Suite> {
        let set: BTreeSet<Suite> = self.suites.iter().copied().collect();
        if set.contains(&Suite::All) {
            return Suite::ORDER.to_vec();
        }
        Suite::ORDER.iter().copied().filter(|s| set.contains(s)).collect()
    }

    /// Builds the towers, rejecting anything that would fail mid-run.
    pub fn validate(&self, max_order: u64) -> Result<Vec<Tower>, ConfigError> {
        let selected = self.selected();
        if selected.iter().any(|s| s.is_randomized()) && self.seed.is_none() {
            return Err(ConfigError("a seed is required for the xa, kappa and torpm suites".into()));
        }
        let towers = self
            .towers
            .iter()
            .map(|s| Tower::build(s, max_order).map_err(|e| ConfigError(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        for a in &self.digits {
            let fits = towers.iter().any(|t| DigitSequence::for_tower(t, a.clone()).is_ok());
            if !fits {
                return Err(ConfigError(format!("digit sequence {a:?} fits none of the towers")));
            }
        }
        Ok(towers)
    }
}
