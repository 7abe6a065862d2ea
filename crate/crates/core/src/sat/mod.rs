//! Saturation sets over the infinite carrier, the level-2
//! Boolean-membership equation, the alternation graph, and the alternation
//! probes.

pub mod equation;
pub mod graph;
pub mod probe;
pub mod sigma2;
pub mod sigma3;

pub use equation::{check_bsigma2_equation, EquationCheck};
pub use graph::{build_alternation_graph, AlternationGraph, EdgeWitness, Recursiveness};
pub use probe::{probe_alternation_finite, probe_alternation_omega, ProbeResult};
pub use sigma2::{sat_sigma2_n, sat_sigma2_pairs, Sigma2Decomp, Sigma2Saturation};
pub use sigma3::{sat_sigma3_pairs, Sigma3Decomp, Sigma3Saturation};
