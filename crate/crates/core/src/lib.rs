//! Exact computations with cluster patterns.

pub mod arith;
pub mod semifield;
pub mod check;
pub mod seed;
pub mod fgc;
pub mod gca;
pub mod explore;
pub mod period;
pub mod graph;
pub mod sync;
pub mod verify;
pub mod run;
