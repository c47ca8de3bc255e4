//! Imaginary quadratic orders through binary quadratic forms: reduction,
//! composition, the class group and its characters, and theta series.

mod cyclo;
mod form;
mod group;
mod theta;

pub use cyclo::{cyclotomic_polynomial, CycloValue};
pub use form::{
    checked_class_number, class_number, class_number_analytic, prime_ideal_class,
    reduced_forms, representation_counts, Discriminant, QuadForm, Splitting,
};
pub use group::{ClassCharacter, ClassGroup};
pub use theta::{
    brauer_siegel_report, brauer_siegel_row, theta_coefficients, BrauerSiegelReport,
    BrauerSiegelRow, QExpansion,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} must be a prime p = 3 (mod 4) with p >= 7")]
    BadPrime(u64),
    #[error("discriminant {0} is too small: D < -4 is required")]
    SmallDiscriminant(i64),
    #[error("discriminant {0} is not of the form -p")]
    NotMinusPrime(i64),
    #[error("discriminants differ: {0} and {1}")]
    DiscriminantMismatch(i64, i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
