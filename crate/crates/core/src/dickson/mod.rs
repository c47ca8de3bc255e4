//! Finite subgroups of `PGL_2(F_q)` and their Dickson type: Borel, inside a
//! Cartan normalizer, exceptional (`A4`, `S4`, `A5`), or containing
//! `PSL_2` of a subfield.

mod classify;
pub mod families;
mod field;
mod matrix;

pub use classify::{
    classify, identify_structure, structural_tests, DicksonFlags, DicksonLabel, DicksonReport,
    ExceptionalType, LargeImage, LargeKind, Structure, StructuralTests, DEFAULT_BUDGET,
};
pub use field::{Fq, GFq};
pub use matrix::{closure, Closure, Mat2};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DicksonError {
    #[error("unsupported field: {0}")]
    BadField(String),
    #[error("singular generator {0}")]
    Singular(String),
    #[error("generators live over different fields")]
    MixedFields,
    #[error("classification needs p >= 7, got p = {0}")]
    SmallCharacteristic(u64),
    #[error("closure exceeded the budget of {budget} elements")]
    Overflow { budget: usize },
    #[error("unclassified group: {0}")]
    Unclassified(String),
}
