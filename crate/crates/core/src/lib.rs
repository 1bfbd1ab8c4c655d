//! Exact integer group determinants for the metacyclic groups
//! `Z_p ⋊_r Z_n = ⟨X, Y | X^p = Y^n = 1, Y X Y⁻¹ = X^r⟩`.

pub mod arith;
pub mod exact;
pub mod groups;

pub use groups::{make_group, GroupError, GroupRingElement, GroupSpec};
pub mod detengine;
pub mod conditions;
pub mod realize;
pub mod census;
pub mod par;
pub mod golden;
