//! Graph-based dwell-time certificates for discrete-time switched linear
//! systems `x(t+1) = A_σ(t) x(t)` whose switchings follow a digraph.
//!
//! Each subsystem is reduced to a modal form (eigenvectors, or an ε-scaled
//! Jordan basis for defective matrices). Those forms weight a doubly weighted
//! switching graph whose maximum cycle ratio bounds the minimum dwell time and
//! whose maximum cycle mean bounds the average dwell time. Bimodal systems get
//! tighter bounds from diagonal rescaling of the eigenbases.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod numerics;
pub mod graph;
pub mod cycles;
pub mod dwell;
pub mod analysis;
pub mod simulation;
