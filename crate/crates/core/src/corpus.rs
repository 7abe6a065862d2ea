//! The bundled example recognizers used throughout the test suite and
//! available to binaries. The files under `corpus/` at the repository root
//! are the single source of truth; they are embedded at compile time.

use crate::buchi::BuchiAutomaton;
use crate::format::{self, AlgebraDocument};

pub const INFA_ALG: &str = include_str!("../../../corpus/infa.alg");
pub const EVENA_ALG: &str = include_str!("../../../corpus/evena.alg");
pub const ALLB_ALG: &str = include_str!("../../../corpus/allb.alg");
pub const UNIVERSAL_ALG: &str = include_str!("../../../corpus/universal.alg");
pub const INFA_AUT: &str = include_str!("../../../corpus/infa.aut");
pub const EVENA_AUT: &str = include_str!("../../../corpus/evena.aut");

pub fn infa() -> AlgebraDocument {
    format::parse_algebra(INFA_ALG).expect("bundled infa.alg parses")
}

pub fn evena() -> AlgebraDocument {
    format::parse_algebra(EVENA_ALG).expect("bundled evena.alg parses")
}

pub fn allb() -> AlgebraDocument {
    format::parse_algebra(ALLB_ALG).expect("bundled allb.alg parses")
}

pub fn universal() -> AlgebraDocument {
    format::parse_algebra(UNIVERSAL_ALG).expect("bundled universal.alg parses")
}

pub fn infa_automaton() -> BuchiAutomaton {
    format::parse_automaton(INFA_AUT).expect("bundled infa.aut parses")
}

pub fn evena_automaton() -> BuchiAutomaton {
    format::parse_automaton(EVENA_AUT).expect("bundled evena.aut parses")
}

/// All bundled algebra documents with their display names.
pub fn all_algebras() -> Vec<(&'static str, AlgebraDocument)> {
    vec![
        ("infa", infa()),
        ("evena", evena()),
        ("allb", allb()),
        ("universal", universal()),
    ]
}
