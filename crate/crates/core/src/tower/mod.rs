//! Towers of finite quotients `Γ_m = (Z/p^m)^d` of `Z_p^d`, their
//! distinguished group-ring elements and towers of modules over them.
//!
//! At level `m` the tower fixes `π_m` (a generator of order `p^{n_m}`),
//! `ϖ_m = π_m - 1`, the trace `T_m = sum π_m^i` and the idempotent
//! `e_m = p^{-n_m} T_m`. Level 0 is the trivial group, so `R_0 = Z`,
//! `T_0 = 1` and `ϖ_0 = 0`.

mod element;
mod levels;
mod module;
mod spec;

pub use element::TowerElement;
pub use levels::{build_tower, Level, Tower};
pub use module::{push_flat, BaseChangeDefect, Chain, TowerModule};
pub use spec::{default_max_order, TowerSpec, DEFAULT_MAX_ORDER, MAX_ORDER_ENV};
