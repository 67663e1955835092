//! A numerical laboratory for circular beta ensembles and the rigidity of
//! their bulk scaling limit.
//!
//! The crate samples dimension-n circular beta ensembles through random
//! recursion coefficients ([`sampler`]), extracts eigenangles by bisection
//! on a monotone phase lift ([`prufer`]) with a five-diagonal matrix oracle
//! on the side ([`cmv`]), measures power-sum trace moments and linear
//! statistics against brute-force quadrature ([`trace_stats`], [`linstat`]),
//! constructs band-limited test functions with arbitrarily small weighted
//! seminorm ([`bandlimited`]), and runs the estimator that recovers the
//! number of points in a bounded window from the configuration outside it
//! ([`rigidity`]).
//!
//! Every Monte Carlo experiment draws replica substreams from a master seed
//! ([`rng`]) and reduces in fixed order, so results are reproducible
//! regardless of thread count. The [`experiment`] module and the `sinebeta`
//! binary wrap all of it behind configs, CSV output and sidecar metadata;
//! the `examples/` directory demonstrates each capability on its own.

pub mod bandlimited;
pub mod bump;
pub mod cmv;
pub mod error;
pub mod experiment;
pub mod linstat;
pub mod prufer;
pub mod quad;
pub mod rigidity;
pub mod rng;
pub mod sampler;
pub mod trace_stats;

pub use error::{Error, Result};
