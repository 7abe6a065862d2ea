//! Alternation probes: bounded search for pairs `(s,t)`, `s ≠ t`, whose
//! strict alternation `(s,t)^n` stays inside the chain sets for every
//! `n` up to the cap. A surviving pair is evidence of unbounded
//! alternation, not proof; verdicts carry the cap and the input status.

use crate::ef::chains::{ChainEngine, EstimateStatus};
use crate::ef::oracle::CapError;
use crate::morphism::OmegaMorphism;
use crate::sat::sigma2::Sigma2TupleOracle;
use crate::semigroup::PlusElem;
use crate::util::BitSet;
use crate::wilke::InfElem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeResult<T> {
    /// Pairs surviving every probe length up to the cap.
    pub survivors: Vec<(T, T)>,
    pub n_cap: usize,
    pub input_status: EstimateStatus,
}

impl<T> ProbeResult<T> {
    pub fn found_alternation(&self) -> bool {
        !self.survivors.is_empty()
    }
}

/// Finite-word probe: `(s,t)^n` must be realizable as a word chain of
/// length `2n` under the level-2 preorder at the given caps, for all
/// `n <= n_cap`. Subword closure makes survival monotone, so only the
/// longest length is tested.
pub fn probe_alternation_finite(
    engine: &mut ChainEngine,
    m: &OmegaMorphism,
    n_cap: usize,
    rank: u8,
    max_len: usize,
    input_status: EstimateStatus,
) -> Result<ProbeResult<PlusElem>, CapError> {
    assert!(n_cap >= 1);
    let words = engine.universe(max_len);
    let rel = engine.relation(2, rank, max_len)?;
    let images: Vec<PlusElem> = words
        .iter()
        .map(|w| m.eval_word(w).expect("nonempty"))
        .collect();
    let mut elem_words: std::collections::HashMap<PlusElem, BitSet> = Default::default();
    for (i, &e) in images.iter().enumerate() {
        elem_words
            .entry(e)
            .or_insert_with(|| BitSet::new(words.len()))
            .insert(i);
    }

    let mut survivors = Vec::new();
    let reach = m.reachable_plus().to_vec();
    for &s in &reach {
        for &t in &reach {
            if s == t {
                continue;
            }
            let (Some(sw), Some(tw)) = (elem_words.get(&s), elem_words.get(&t)) else {
                continue;
            };
            let mut current = sw.clone();
            let mut alive = true;
            for step in 1..2 * n_cap {
                let target = if step % 2 == 1 { tw } else { sw };
                let mut next = BitSet::new(words.len());
                for i in current.iter() {
                    next.or_assign(&rel.rows[i]);
                }
                next.and_assign(target);
                if next.is_empty() {
                    alive = false;
                    break;
                }
                current = next;
            }
            if alive {
                survivors.push((s, t));
            }
        }
    }
    Ok(ProbeResult {
        survivors,
        n_cap,
        input_status,
    })
}

/// Infinite-word probe: `(s,t)^n` must be a saturation tuple of length
/// `2n` for all `n <= n_cap`, per the recursive tuple membership.
pub fn probe_alternation_omega(
    engine: &mut ChainEngine,
    m: &OmegaMorphism,
    n_cap: usize,
    rank: u8,
    max_len: usize,
    input_status: EstimateStatus,
) -> Result<ProbeResult<InfElem>, CapError> {
    assert!(n_cap >= 1);
    let mut oracle = Sigma2TupleOracle::new(engine, m, rank, max_len)?;
    let image = m.infinite_image().to_vec();
    let mut survivors = Vec::new();
    for &s in &image {
        for &t in &image {
            if s == t {
                continue;
            }
            let mut alive = true;
            for n in 1..=n_cap {
                let mut tuple = Vec::with_capacity(2 * n);
                for _ in 0..n {
                    tuple.push(s);
                    tuple.push(t);
                }
                if !oracle.member(&tuple) {
                    alive = false;
                    break;
                }
            }
            if alive {
                survivors.push((s, t));
            }
        }
    }
    Ok(ProbeResult {
        survivors,
        n_cap,
        input_status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ef::oracle::OracleCaps;
    use crate::pairing::alphabet_completion;

    #[test]
    fn one_element_algebra_has_no_pairs() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let m = corpus::universal().morphism;
        let probe = probe_alternation_finite(
            &mut engine,
            &m,
            3,
            2,
            4,
            EstimateStatus::ExactAtRank { rank: 2, len_cap: 4 },
        )
        .unwrap();
        assert!(!probe.found_alternation());
    }

    #[test]
    fn completed_infa_finite_probe_is_empty() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let probe = probe_alternation_finite(
            &mut engine,
            &completed.morphism,
            3,
            2,
            6,
            EstimateStatus::ExactAtRank { rank: 2, len_cap: 6 },
        )
        .unwrap();
        assert!(
            !probe.found_alternation(),
            "unexpected pairs: {:?}",
            probe.survivors
        );
    }

    #[test]
    fn evena_finite_probe_finds_parity_pair() {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::evena().morphism).unwrap();
        let m = &completed.morphism;
        let probe = probe_alternation_finite(
            &mut engine,
            m,
            3,
            2,
            8,
            EstimateStatus::ExactAtRank { rank: 2, len_cap: 8 },
        )
        .unwrap();
        assert!(probe.found_alternation(), "expected a parity pair");
        // The surviving pairs include the even/odd pure a-run classes.
        let is_a_run = |e: PlusElem| {
            let name = m.algebra().splus().name(e);
            name.starts_with("(A0") || name.starts_with("(A1")
        };
        assert!(probe
            .survivors
            .iter()
            .any(|&(s, t)| is_a_run(s) && is_a_run(t)));
    }
}
