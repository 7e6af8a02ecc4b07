//! Exact modular data of affine `su(2)` at level `k`.
//!
//! The crate builds the characters `χ_λ` of the level-`k` modules, their `S`
//! and `T` transformations in exact cyclotomic arithmetic, the commutant of
//! the modular group action and the physical modular invariants it contains,
//! and the sector bookkeeping of the superalgebra `L(k,0) ⊕ L(k,k)` for
//! `k = 4ρ − 2`.

pub mod cyclotomic;
mod error;
pub mod linalg;
pub mod modular_data;
pub mod qseries;
pub mod suite;
pub mod superalgebra;

pub use cyclotomic::{cos_pi_rational, cos_sum, sin_pi_rational, CosFilter, Cyclotomic};
pub use error::{Error, Result};
pub use modular_data::{
    ade_classify, commutant_basis, deven_invariant, dodd_invariant, enumerate_invariants,
    fold_label, s_commutes, t_commutes, AdeType, Enumeration, InvariantMatrix, ModularData,
};
pub use qseries::{
    affine_character, qseries_eval, theta, verify_s_transform, verify_t_transform, QSeries,
};
pub use superalgebra::{
    assemble_super_partition, conjecture_probe, module_inventory, verify_prop52, PartitionFunction,
    SectorCharacter, SectorKind,
};
