//! Rank-and-length-bounded computation of the finite-word chain sets and
//! mixed chain sets, with stabilization detection.
//!
//! The published fixpoint algorithms computing these sets exactly are used
//! as black boxes by the decision procedures in the source material; here
//! they are replaced by a bounded estimation: enumerate all words up to a
//! length cap, compute the rank-k preorder on them, and collect the image
//! tuples of monotone word chains. Growing the length cap grows the set,
//! growing the rank shrinks it; a schedule of (rank, length) points is run
//! and the result is flagged stabilized only when the final points agree.
//! Decision procedures must propagate the status; estimation never errors
//! into a wrong answer silently.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::ef::oracle::{CapError, EfOracle, OracleCaps};
use crate::morphism::OmegaMorphism;
use crate::semigroup::PlusElem;
use crate::util::BitSet;
use crate::words::{enumerate_words, Word};

/// Estimation quality of a computed chain set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EstimateStatus {
    /// Computed at one (rank, length) point; no stabilization evidence.
    ExactAtRank { rank: u8, len_cap: usize },
    /// Identical across the final `window` schedule points.
    Stabilized { first_stable_rank: u8, window: usize },
    /// Still changing at the end of the schedule, or closure checks failed.
    Unstable,
}

impl EstimateStatus {
    pub fn is_stabilized(&self) -> bool {
        matches!(self, EstimateStatus::Stabilized { .. })
    }
}

/// A set of fixed-length tuples over the finite part of an algebra,
/// realized by rank-bounded word chains, with one realizing word chain
/// retained per tuple (shortest words, first found in canonical order).
#[derive(Debug, Clone)]
pub struct ChainSet {
    pub level: u8,
    pub len: usize,
    pub tuples: BTreeSet<Vec<PlusElem>>,
    pub witnesses: BTreeMap<Vec<PlusElem>, Vec<Word>>,
    pub status: EstimateStatus,
    pub caps: (u8, usize),
}

impl ChainSet {
    pub fn contains(&self, tuple: &[PlusElem]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (PlusElem, PlusElem)> + '_ {
        self.tuples.iter().filter_map(|t| {
            if t.len() == 2 {
                Some((t[0], t[1]))
            } else {
                None
            }
        })
    }
}

/// Triples realized by a rank-bounded chain whose first step uses the
/// level-2 preorder and second step the level-3 preorder.
#[derive(Debug, Clone)]
pub struct MixedChainSet {
    pub triples: BTreeSet<(PlusElem, PlusElem, PlusElem)>,
    pub witnesses: BTreeMap<(PlusElem, PlusElem, PlusElem), Vec<Word>>,
    pub status: EstimateStatus,
    pub caps: (u8, usize),
}

/// Precomputed preorder on a bounded word universe, rows as bitsets:
/// `row(u)` is the set of words `v` with `u <= v`.
#[derive(Debug)]
pub struct WordRelation {
    pub rows: Vec<BitSet>,
}

/// Shared engine: word universes and relations are cached per
/// (level, rank, length) and reused across morphisms over the same
/// alphabet, since the preorders do not depend on the algebra.
pub struct ChainEngine {
    oracle: EfOracle,
    alphabet_len: usize,
    universes: BTreeMap<usize, Rc<Vec<Word>>>,
    relations: BTreeMap<(u8, u8, usize), Rc<WordRelation>>,
}

impl ChainEngine {
    pub fn new(alphabet_len: usize, caps: OracleCaps) -> Self {
        ChainEngine {
            oracle: EfOracle::new(caps),
            alphabet_len,
            universes: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    pub fn oracle_mut(&mut self) -> &mut EfOracle {
        &mut self.oracle
    }

    pub fn universe(&mut self, max_len: usize) -> Rc<Vec<Word>> {
        let alphabet_len = self.alphabet_len;
        Rc::clone(
            self.universes
                .entry(max_len)
                .or_insert_with(|| Rc::new(enumerate_words(alphabet_len, max_len))),
        )
    }

    pub fn relation(&mut self, level: u8, rank: u8, max_len: usize) -> Result<Rc<WordRelation>, CapError> {
        if let Some(r) = self.relations.get(&(level, rank, max_len)) {
            return Ok(Rc::clone(r));
        }
        let words = self.universe(max_len);
        let n = words.len();
        let mut rows = Vec::with_capacity(n);
        for u in words.iter() {
            let mut row = BitSet::new(n);
            for (j, v) in words.iter().enumerate() {
                if self.oracle.sigma_leq(level, rank, u, v)? {
                    row.insert(j);
                }
            }
            rows.push(row);
        }
        let rel = Rc::new(WordRelation { rows });
        self.relations.insert((level, rank, max_len), Rc::clone(&rel));
        Ok(rel)
    }

    /// All image `n`-tuples of monotone word chains at one (rank, length)
    /// point; the comparisons along the chain all use the same level.
    pub fn chains_at_rank(
        &mut self,
        level: u8,
        n: usize,
        rank: u8,
        m: &OmegaMorphism,
        max_len: usize,
    ) -> Result<ChainSet, CapError> {
        let levels = vec![level; n.saturating_sub(1)];
        let (tuples, witnesses) = self.chain_tuples(&levels, rank, m, max_len)?;
        Ok(ChainSet {
            level,
            len: n,
            tuples: tuples.into_iter().map(|t| t.to_vec()).collect(),
            witnesses: witnesses
                .into_iter()
                .map(|(t, w)| (t.to_vec(), w))
                .collect(),
            status: EstimateStatus::ExactAtRank {
                rank,
                len_cap: max_len,
            },
            caps: (rank, max_len),
        })
    }

    /// Core DP: tuples of images along chains whose j-th comparison uses
    /// `levels[j]`. The tuple length is `levels.len() + 1`.
    fn chain_tuples(
        &mut self,
        levels: &[u8],
        rank: u8,
        m: &OmegaMorphism,
        max_len: usize,
    ) -> Result<(BTreeSet<Box<[PlusElem]>>, BTreeMap<Box<[PlusElem]>, Vec<Word>>), CapError> {
        let words = self.universe(max_len);
        let n_words = words.len();
        let images: Vec<PlusElem> = words
            .iter()
            .map(|w| m.eval_word(w).expect("universe words are nonempty"))
            .collect();

        // layer: per word, the set of tuples of a chain ending at that word,
        // with the index of the predecessor word that first realized it.
        type Layer = Vec<HashMap<Box<[PlusElem]>, usize>>;
        let mut layer: Layer = (0..n_words)
            .map(|i| {
                let mut h = HashMap::new();
                h.insert(vec![images[i]].into_boxed_slice(), usize::MAX);
                h
            })
            .collect();
        let mut layers: Vec<Layer> = vec![layer.clone()];

        for &level in levels {
            let rel = self.relation(level, rank, max_len)?;
            let mut next: Layer = vec![HashMap::new(); n_words];
            // Iterate predecessors in canonical order so the first realizing
            // chain recorded per tuple is reproducible.
            for prev_idx in 0..n_words {
                for succ in rel.rows[prev_idx].iter() {
                    let img = images[succ];
                    for tuple in layer[prev_idx].keys() {
                        let mut ext: Vec<PlusElem> = tuple.to_vec();
                        ext.push(img);
                        let ext = ext.into_boxed_slice();
                        next[succ].entry(ext).or_insert(prev_idx);
                    }
                }
            }
            layer = next;
            layers.push(layer.clone());
        }

        // Collect tuples and reconstruct one witness chain per tuple.
        let mut tuples: BTreeSet<Box<[PlusElem]>> = BTreeSet::new();
        for h in &layer {
            tuples.extend(h.keys().cloned());
        }
        let mut witnesses = BTreeMap::new();
        for tuple in &tuples {
            let mut end = None;
            for (i, h) in layer.iter().enumerate() {
                if h.contains_key(tuple) {
                    end = Some(i);
                    break;
                }
            }
            let mut chain = Vec::with_capacity(levels.len() + 1);
            let mut idx = end.expect("tuple came from some layer");
            let mut t: Box<[PlusElem]> = tuple.clone();
            for j in (0..layers.len()).rev() {
                let prev = layers[j][idx][&t];
                chain.push(words[idx].clone());
                if j == 0 {
                    break;
                }
                idx = prev;
                t = t[..t.len() - 1].to_vec().into_boxed_slice();
            }
            chain.reverse();
            witnesses.insert(tuple.clone(), chain);
        }
        Ok((tuples, witnesses))
    }

    /// Runs the estimation schedule for plain chains and reports
    /// stabilization. Subword/duplication closure across lengths is checked
    /// at the final point; violations downgrade the status.
    pub fn estimate_chains(
        &mut self,
        level: u8,
        n: usize,
        m: &OmegaMorphism,
        schedule: &[(u8, usize)],
        window: usize,
    ) -> Result<ChainSet, CapError> {
        assert!(!schedule.is_empty(), "schedule must be nonempty");
        let mut sets = Vec::with_capacity(schedule.len());
        for &(k, l) in schedule {
            sets.push(self.chains_at_rank(level, n, k, m, l)?);
        }
        let mut result = sets.pop().expect("nonempty schedule");
        let (final_rank, final_len) = *schedule.last().unwrap();

        let stable = window >= 1
            && schedule.len() >= window
            && sets
                .iter()
                .rev()
                .take(window.saturating_sub(1))
                .all(|s| s.tuples == result.tuples);
        result.status = if stable {
            EstimateStatus::Stabilized {
                first_stable_rank: schedule[schedule.len() - window].0,
                window,
            }
        } else {
            EstimateStatus::Unstable
        };
        result.caps = (final_rank, final_len);

        // Closure checks at the final point (subwords drop a coordinate,
        // duplication repeats one) relate adjacent lengths.
        if result.status.is_stabilized() && n >= 2 {
            let shorter = self.chains_at_rank(level, n - 1, final_rank, m, final_len)?;
            let mut ok = true;
            for t in &result.tuples {
                for drop in 0..n {
                    let mut sub = t.clone();
                    sub.remove(drop);
                    if !shorter.tuples.contains(&sub) {
                        ok = false;
                    }
                }
            }
            for t in &shorter.tuples {
                for dup in 0..n - 1 {
                    let mut ext = t.clone();
                    ext.insert(dup, t[dup]);
                    if !result.tuples.contains(&ext) {
                        ok = false;
                    }
                }
            }
            if !ok {
                result.status = EstimateStatus::Unstable;
            }
        }
        Ok(result)
    }

    /// Mixed chains: triples with a level-2 step then a level-3 step, run
    /// along the same schedule with the same stabilization rule.
    pub fn estimate_mixed_chains(
        &mut self,
        m: &OmegaMorphism,
        schedule: &[(u8, usize)],
        window: usize,
    ) -> Result<MixedChainSet, CapError> {
        assert!(!schedule.is_empty(), "schedule must be nonempty");
        let mut sets = Vec::with_capacity(schedule.len());
        for &(k, l) in schedule {
            let (tuples, witnesses) = self.chain_tuples(&[2, 3], k, m, l)?;
            let triples: BTreeSet<(PlusElem, PlusElem, PlusElem)> =
                tuples.iter().map(|t| (t[0], t[1], t[2])).collect();
            let witnesses = witnesses
                .into_iter()
                .map(|(t, w)| ((t[0], t[1], t[2]), w))
                .collect();
            sets.push((triples, witnesses));
        }
        let (final_rank, final_len) = *schedule.last().unwrap();
        let (triples, witnesses) = sets.pop().expect("nonempty schedule");
        let stable = window >= 1
            && schedule.len() >= window
            && sets
                .iter()
                .rev()
                .take(window.saturating_sub(1))
                .all(|(t, _)| *t == triples);
        Ok(MixedChainSet {
            triples,
            witnesses,
            status: if stable {
                EstimateStatus::Stabilized {
                    first_stable_rank: schedule[schedule.len() - window].0,
                    window,
                }
            } else {
                EstimateStatus::Unstable
            },
            caps: (final_rank, final_len),
        })
    }

    /// The default estimation schedule: ranks grow to the cap while the
    /// length cap is approached in steps of two, matching the published
    /// defaults for two-letter alphabets.
    pub fn default_schedule(alphabet_len: usize, rank_cap: u8, len_cap: usize) -> Vec<(u8, usize)> {
        let len_for = |j: u8| -> usize {
            let back = (rank_cap - j) as usize * 2;
            len_cap.saturating_sub(back).max(2)
        };
        let mut schedule: Vec<(u8, usize)> = (1..=rank_cap).map(|j| (j, len_for(j))).collect();
        if alphabet_len >= 3 {
            // Cube growth makes long universes expensive; cap lengths harder.
            for (_, l) in schedule.iter_mut() {
                *l = (*l).min(6);
            }
        }
        schedule
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::pairing::alphabet_completion;

    fn engine() -> ChainEngine {
        ChainEngine::new(2, OracleCaps::default())
    }

    #[test]
    fn length_one_chains_are_reachable_images() {
        let mut e = engine();
        let m = corpus::infa().morphism;
        let c = e.chains_at_rank(2, 1, 2, &m, 4).unwrap();
        let singles: BTreeSet<PlusElem> = c.tuples.iter().map(|t| t[0]).collect();
        let expected: BTreeSet<PlusElem> = m.reachable_plus().iter().copied().collect();
        assert_eq!(singles, expected);
    }

    #[test]
    fn completed_infa_sigma1_pairs_contain_subword_pair() {
        let mut e = engine();
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let c = e.chains_at_rank(1, 2, 1, m, 3).unwrap();
        // "b" <= "ab" at level 1: pair ((0,{b}), (1,{a,b})).
        let b = m
            .eval_word(&m.alphabet().parse_word("b").unwrap())
            .unwrap();
        let ab = m
            .eval_word(&m.alphabet().parse_word("ab").unwrap())
            .unwrap();
        assert!(c.contains(&[b, ab]));
    }

    #[test]
    fn completed_infa_sigma2_pairs_are_content_diagonal() {
        let mut e = engine();
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let c = e.chains_at_rank(2, 2, 2, m, 4).unwrap();
        for t in &c.tuples {
            assert_eq!(
                m.content_plus(t[0]).unwrap(),
                m.content_plus(t[1]).unwrap(),
                "non-content-diagonal pair in level-2 chain set"
            );
        }
    }

    #[test]
    fn estimate_stabilizes_on_one_element_algebra() {
        let mut e = engine();
        let m = corpus::universal().morphism;
        let c = e
            .estimate_chains(2, 2, &m, &[(1, 3), (2, 4)], 2)
            .unwrap();
        assert!(c.status.is_stabilized());
        assert_eq!(c.tuples.len(), 1);
    }

    #[test]
    fn witnesses_realize_their_tuples() {
        let mut e = engine();
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let c = e.chains_at_rank(2, 2, 2, m, 4).unwrap();
        for (tuple, chain) in &c.witnesses {
            assert_eq!(chain.len(), tuple.len());
            for (coord, word) in tuple.iter().zip(chain) {
                assert_eq!(m.eval_word(word).unwrap(), *coord);
            }
            // consecutive chain words must be related at the set's caps
            for pair in chain.windows(2) {
                assert!(e
                    .oracle_mut()
                    .sigma_leq(2, c.caps.0, &pair[0], &pair[1])
                    .unwrap());
            }
        }
    }

    #[test]
    fn rank_nesting_at_fixed_length() {
        let mut e = engine();
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let c1 = e.chains_at_rank(2, 2, 1, m, 4).unwrap();
        let c2 = e.chains_at_rank(2, 2, 2, m, 4).unwrap();
        assert!(c2.tuples.is_subset(&c1.tuples));
    }
}
