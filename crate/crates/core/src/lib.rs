//! Exact δ-invariants of log Fano pairs `(P², λC)` for plane curves of degree
//! at most four, and the threefold bounds built on them.
//!
//! Layers, bottom up: [`exact`] arithmetic, [`surface`] Zariski decompositions,
//! the [`catalog`] of singularity configurations, [`delta`] assembly,
//! [`threefold`] combinators and the [`cli`] front end.

pub mod catalog;
pub mod cli;
pub mod delta;
pub mod exact;
pub mod surface;
pub mod threefold;
