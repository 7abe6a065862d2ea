//! The logical ground-truth layer: rank-bounded preorders on finite words,
//! bounded chain-set estimation, and the lasso-inequality certifier.

pub mod certify;
pub mod chains;
pub mod oracle;

pub use certify::{CertOutcome, Certifier, Derivation};
pub use chains::{ChainEngine, ChainSet, EstimateStatus, MixedChainSet, WordRelation};
pub use oracle::{CapError, EfOracle, OracleCaps};
