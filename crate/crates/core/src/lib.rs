//! Finite, exact tools for path-incompressible trees in Cantor space.
//!
//! Measures are exact dyadic rationals. Trees are finite prefixes stored by
//! their leaves. The modules cover the tree space `T_ℓ` ([`treespace`]),
//! Kraft-Chaitin allocation ([`kc`]), hitting sets and envelopes
//! ([`hitting`]) and the densification map `T_ℓ → T_m` ([`densify`]).

pub mod bitstring;
pub mod densify;
pub mod dyadic;
pub mod error;
pub mod hitting;
pub mod kc;
pub mod measure;
pub mod rng;
pub mod scalar;
pub mod schedule;
pub mod stringset;
pub mod tree;
pub mod treespace;

pub use bitstring::BitString;
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use rng::RngSeed;
pub use schedule::LevelSchedule;
pub use stringset::StringSet;
pub use tree::FiniteTree;

/// The exact measure type used throughout.
pub type Measure = Dyadic;

/// Exact rationals, for computations that leave the dyadics.
pub type ExactRational = num_rational::BigRational;
