//! Saturation pairs at level 3, built from level-3 chain pairs and mixed
//! chains: `(r₂·(s₂·t₂^ω)^∞, r₃·(s₃·t₃^ω)^ω·s₁·t₁^∞)` over mixed triples
//! `(s₁,s₂,s₃)` and `(t₁,t₂,t₃)` with `content(s₁) = content(t₁)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::ef::chains::{ChainSet, EstimateStatus, MixedChainSet};
use crate::morphism::OmegaMorphism;
use crate::semigroup::{OptPlus, PlusElem};
use crate::wilke::InfElem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma3Decomp {
    pub r: (OptPlus, OptPlus),
    pub s: (PlusElem, PlusElem, PlusElem),
    pub t: (PlusElem, PlusElem, PlusElem),
}

#[derive(Debug, Clone)]
pub struct Sigma3Saturation {
    pub pairs: BTreeSet<(InfElem, InfElem)>,
    pub decomp: BTreeMap<(InfElem, InfElem), Sigma3Decomp>,
    pub input_status: Vec<EstimateStatus>,
}

pub fn sat_sigma3_pairs(
    m: &OmegaMorphism,
    pairs3_plus: &ChainSet,
    mixed: &MixedChainSet,
) -> Sigma3Saturation {
    assert!(m.alphabet_compatible(), "saturation needs content");
    let alg = m.algebra();
    let sg = alg.splus();
    let exp = sg.idempotent_exponent();

    let mut r_candidates: Vec<(OptPlus, OptPlus)> = vec![(OptPlus::Unit, OptPlus::Unit)];
    r_candidates.extend(
        pairs3_plus
            .pairs()
            .map(|(a, b)| (OptPlus::Elem(a), OptPlus::Elem(b))),
    );

    let mut out = Sigma3Saturation {
        pairs: BTreeSet::new(),
        decomp: BTreeMap::new(),
        input_status: vec![pairs3_plus.status, mixed.status],
    };
    for &(r2, r3) in &r_candidates {
        for &(s1, s2, s3) in &mixed.triples {
            let c_s1 = m.content_plus(s1).expect("compatible");
            for &(t1, t2, t3) in &mixed.triples {
                if m.content_plus(t1).expect("compatible") != c_s1 {
                    continue;
                }
                // first = r₂ · (s₂ t₂^ω)^∞
                let x2 = sg.mult(s2, sg.pow(t2, exp));
                let first = alg.mixed_opt(r2, alg.omega(x2));
                // second = r₃ · (s₃ t₃^ω)^ω · s₁ · t₁^∞
                let x3 = sg.mult(s3, sg.pow(t3, exp));
                let head = sg.mult(sg.mult_opt(r3, sg.pow(x3, exp)), s1);
                let second = alg.mixed(head, alg.omega(t1));
                let key = (first, second);
                out.pairs.insert(key);
                out.decomp.entry(key).or_insert(Sigma3Decomp {
                    r: (r2, r3),
                    s: (s1, s2, s3),
                    t: (t1, t2, t3),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ef::chains::ChainEngine;
    use crate::ef::oracle::OracleCaps;
    use crate::pairing::alphabet_completion;
    use crate::sat::sigma2::sat_sigma2_pairs;

    #[test]
    fn infa_sigma3_pairs_are_diagonal_and_below_sigma2() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let pairs3 = engine.chains_at_rank(3, 2, 2, m, 4).unwrap();
        let mixed = engine
            .estimate_mixed_chains(m, &[(1, 3), (2, 4)], 2)
            .unwrap();
        let sat3 = sat_sigma3_pairs(m, &pairs3, &mixed);

        // Diagonal of the infinite image is present.
        for &q in m.infinite_image() {
            assert!(sat3.pairs.contains(&(q, q)));
        }
        // On this algebra mixed chains are content-diagonal, so the level-3
        // pairs collapse to the diagonal; in particular no (INF, FIN) pair.
        let inf_ab = m.algebra().inf_index_of("(INF,{a,b})").unwrap();
        let fin_ab = m.algebra().inf_index_of("(FIN,{a,b})").unwrap();
        assert!(!sat3.pairs.contains(&(inf_ab, fin_ab)));

        // Level-3 pairs are contained in the level-2 saturation.
        let pairs2 = engine.chains_at_rank(2, 2, 2, m, 4).unwrap();
        let sat2 = sat_sigma2_pairs(m, &pairs2, m.infinite_image());
        assert!(sat3.pairs.is_subset(&sat2.pairs));
    }

    #[test]
    fn mixed_triples_project_into_level3_pairs() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let mixed = engine
            .estimate_mixed_chains(m, &[(1, 3), (2, 4)], 2)
            .unwrap();
        let pairs3 = engine.chains_at_rank(3, 2, 2, m, 4).unwrap();
        for &(_, s2, s3) in &mixed.triples {
            assert!(
                pairs3.contains(&[s2, s3]),
                "mixed triple projection missing from level-3 pairs"
            );
        }
    }
}
