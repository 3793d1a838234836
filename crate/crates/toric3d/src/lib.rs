//! 3D toric codes on cubic lattices (periodic, solid with rough
//! boundaries, and welded), with decoders for bit-flip, phase-flip and
//! erasure noise and a Monte Carlo harness for logical-failure threshold
//! estimation.
//!
//! Decoders:
//! - phase flips: shortest paths plus exact minimum-weight perfect matching
//!   with boundary nodes,
//! - bit flips: a deterministic multi-rule sweep decoder on the dual
//!   lattice with a residual-string cleanup step,
//! - erasures: peeling on the restricted Tanner graph with spanning-forest
//!   freezing (Z side), dual-lattice trapping (X side), and a GF(2) solver
//!   fallback; welded variants that unerase the shared weld qubits first.

pub mod blossom;
pub mod code;
pub mod erasure;
pub mod gf2;
pub mod lattice;
pub mod matching;
pub mod noise;
pub mod sim;
pub mod toom;
pub mod welded;
