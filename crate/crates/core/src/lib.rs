//! Finite combinatorics of cube complexes, their walls and completions,
//! cusped spaces and graph-of-groups bookkeeping.

pub mod complex;
pub mod hyperplanes;
pub mod geometry;
pub mod completion;
pub mod wallgraph;
pub mod group;
pub mod cusped;
pub mod gog;
pub mod corpus;
