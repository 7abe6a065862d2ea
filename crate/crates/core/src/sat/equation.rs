//! The level-2 Boolean-membership equation over an alphabet compatible
//! morphism: for all chain pairs `(s₁,s₂)`, `(t₁,t₂)` with
//! `content(s₁) = content(t₁)`,
//!
//! ```text
//! (s₂·t₂^ω)^∞  =  (s₂·t₂^ω)^ω · s₁ · t₁^∞
//! ```

use crate::ef::chains::ChainSet;
use crate::morphism::OmegaMorphism;
use crate::semigroup::PlusElem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationCheck {
    pub holds: bool,
    /// First counterexample `(s₁, s₂, t₁, t₂)` in canonical pair order.
    pub counterexample: Option<(PlusElem, PlusElem, PlusElem, PlusElem)>,
}

pub fn check_bsigma2_equation(m: &OmegaMorphism, pairs_plus: &ChainSet) -> EquationCheck {
    assert!(m.alphabet_compatible(), "equation needs content");
    let alg = m.algebra();
    let sg = alg.splus();
    let exp = sg.idempotent_exponent();
    for (s1, s2) in pairs_plus.pairs() {
        let c = m.content_plus(s1).expect("compatible");
        for (t1, t2) in pairs_plus.pairs() {
            if m.content_plus(t1).expect("compatible") != c {
                continue;
            }
            let x = sg.mult(s2, sg.pow(t2, exp));
            let lhs = alg.omega(x);
            let rhs = alg.mixed(sg.mult(sg.pow(x, exp), s1), alg.omega(t1));
            if lhs != rhs {
                return EquationCheck {
                    holds: false,
                    counterexample: Some((s1, s2, t1, t2)),
                };
            }
        }
    }
    EquationCheck {
        holds: true,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ef::chains::ChainEngine;
    use crate::ef::oracle::OracleCaps;
    use crate::pairing::alphabet_completion;

    #[test]
    fn one_element_algebra_satisfies_the_equation() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::universal().morphism).unwrap();
        let m = &completed.morphism;
        let pairs = engine.chains_at_rank(2, 2, 2, m, 4).unwrap();
        assert!(check_bsigma2_equation(m, &pairs).holds);
    }

    #[test]
    fn completed_infa_satisfies_the_equation() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let pairs = engine.chains_at_rank(2, 2, 2, m, 4).unwrap();
        let check = check_bsigma2_equation(m, &pairs);
        assert!(check.holds, "counterexample: {:?}", check.counterexample);
    }
}
