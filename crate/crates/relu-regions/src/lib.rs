//! Exact analysis of piecewise-linear ReLU regression networks.
//!
//! Everything runs over arbitrary-precision rationals: evaluation, the
//! witness constructions (the zigzag family and its ternary counterpart),
//! compilation of bounded-integer nets to equivalent ternary nets, and exact
//! linear-region counting over box domains with an LP-backed cell enumerator
//! plus an independent 1-D breakpoint oracle.
//!
//! All public types are immutable after construction and all operations are
//! pure, so the whole API is safe to drive from multiple threads.

pub mod constructions;
pub mod json;
pub mod lp;
pub mod net;
pub mod oracle1d;
pub mod rational;
pub mod region;
pub mod ternarize;

pub use net::{
    compose, ActivationKind, ActivationPattern, AffineMap, BoxDomain, Layer, NetError, ReluNet,
    WeightClass,
};
pub use rational::{format_rational, parse_rational, rat, rat_int, Rational};
pub use region::{
    check_composition_lemma, count_regions_exact, enumerate_cells, estimate_regions_grid,
    merge_cells, CountError, EnumerationLimits, RegionCell, RegionReport,
};
