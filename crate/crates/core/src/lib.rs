//! Connection-tableau proof search with conflict-driven constraint learning.
//!
//! The search records, for every dead end it reaches, a set of trail atoms
//! that explains why the tableau is stuck. Learned constraints prune every
//! later tableau containing the same atoms and let the search backjump over
//! inferences that played no part in the failure.

pub mod calculus;
pub mod constraints;
pub mod explain;
pub mod search;
pub mod terms;
pub mod tptp;
