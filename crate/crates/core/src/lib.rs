//! Risk pooling on the Boolean lattice.
//!
//! Set functions on the subsets of a small ground set are stored as tables
//! indexed by bitmask. The central operation is the coupled convolution
//! `(f⋆g)(S) = E[f(S₁) g(S₂)]`, where `S₁` and `S₂` share one coin per element
//! of `S` and toss independent coins elsewhere. For increasing `f` and `g` it
//! is increasing in `S`, which drives the scenario models and the shipping
//! game built on top of it.
//!
//! Every algorithm is generic over [`Scalar`], implemented for `f64` and for
//! exact [`Rational`] numbers.

pub mod convolution;
pub mod error;
pub mod lattice;
pub mod montecarlo;
pub mod partition_game;
pub mod random;
pub mod scalar;
pub mod scenarios;

pub use convolution::{
    convolve, convolve_bruteforce, harris_gap, partition_expectation, refines, IndexPartition,
    IndexedFamily,
};
pub use error::{Error, Result};
pub use lattice::{
    expectation, indicator, pair_measure, up_closure, CoinVector, Ground, GroundSet,
    MonotoneFamily, SetFunction, Subset,
};
pub use montecarlo::{estimate_convolution, estimate_payoff, sample_success, EstimateReport};
pub use partition_game::{GameSpec, PartitionStrategy, StrategyProfile, SuccessTuple};
pub use scalar::{NumericMode, Rational, Scalar};
