//! Exact computations behind uniform bounds on mod-`p` Galois images of
//! modular abelian varieties.
//!
//! The crate is split by subject:
//!
//! * [`arith`]: residues, primality, Kronecker symbols, Bernoulli numbers.
//! * [`quad`]: binary quadratic forms, class groups of `Q(sqrt(-p))`, class
//!   characters and their theta series.
//! * [`dickson`]: subgroups of `PGL_2(F_q)` and their Dickson type.
//! * [`inertia`]: inertia-order calculus for the exceptional case.
//! * [`dims`]: genus and newform dimension formulas.
//! * [`witness`]: per-prime witness reports and range scans.
//!
//! A longer walk-through lives in the `book/` directory of the repository.

pub mod arith;
pub mod dickson;
pub mod dims;
pub mod inertia;
pub mod quad;
pub mod witness;

mod serde_util;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bernoulli.md")]
    mod bernoulli {}
    #[doc = include_str!("../../../book/src/class-groups.md")]
    mod class_groups {}
    #[doc = include_str!("../../../book/src/theta.md")]
    mod theta {}
    #[doc = include_str!("../../../book/src/dickson.md")]
    mod dickson {}
    #[doc = include_str!("../../../book/src/inertia.md")]
    mod inertia {}
    #[doc = include_str!("../../../book/src/dimensions.md")]
    mod dimensions {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
}
