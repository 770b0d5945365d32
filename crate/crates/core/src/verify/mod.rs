//! Check routines over a tower. Each returns a [`CheckReport`] whose
//! sub-checks name the individual identities tested, with witness data on
//! failure or where a value is of interest.

mod digits;
mod fsscan;
mod kappa;
mod nakayama;
mod prop_ses;
mod random;
mod report;
mod xa;

pub use digits::DigitSequence;
pub use fsscan::fs_scan;
pub use kappa::{check_kappa, check_tor_ppower, p_power_torsion};
pub use nakayama::{nakayama_lift, LiftedGenerator};
pub use prop_ses::verify_prop_ses;
pub use random::random_module;
pub use report::{invariants_value, CheckReport, Expectation};
pub use xa::{build_xa, y_element};
