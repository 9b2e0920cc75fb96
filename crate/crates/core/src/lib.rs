//! Exact and simulated carries chains, riffle-shuffle descent chains and
//! their hyperoctahedral (type B) analogs.
//!
//! Every probability is an exact rational. The chain identities (semigroup
//! law, stationarity, time reversal, the shuffle/carries equivalences) hold
//! with equality and are checked against brute-force enumeration in the test
//! suites.

pub mod error;
pub mod exact;
pub mod groups;
pub mod series;

pub mod carries;
pub mod gauss;
pub mod shuffles;
pub mod symfunc;
pub mod typeb;
pub mod veronese;

pub mod verify;

pub use error::{Error, Result};
pub use exact::{ExactMatrix, ProbVector, Rational};
pub use groups::{DescentSet, GroupKind, Permutation, SignedPermutation};
pub use symfunc::Partition;
pub use veronese::HVector;
