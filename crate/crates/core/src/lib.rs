//! Combinatorial dynamics of cyclic patterns of interval maps.
//!
//! Patterns are cyclic permutations up to flip. The crate provides the
//! classifiers (block structure, division, convergence, over-rotation
//! pairs), the orders on periods and pairs, exact P-linear maps with their
//! Markov graphs, forcing decided by exact orbit realization, and
//! exhaustive bounded verification of the forcing theorems for patterns
//! with no division and no block structure.

pub mod exec;
pub mod forcing;
pub mod markov;
pub mod orders;
pub mod patterns;
pub mod verify;
pub mod walks;

pub use exec::Execution;
pub use forcing::{
    forced_patterns, forces, insert_rotation, is_twist_bounded, orp_spectrum, pattern_of_orbit,
    realize_loop, ForcingError, Orbit, Realization, TwistVerdict,
};
pub use markov::{MarkovGraph, PLinearMap, Rational};
pub use orders::{
    eta, n_r, orp_precedes, sharkovsky_precedes, star_precedes, OvrDescriptor, ShKey,
};
pub use patterns::{parse_pattern, OrpPair, Pattern, PatternError};
pub use verify::{enumerate_patterns, nd_nbs, NdNbsReport, VerificationReport};
