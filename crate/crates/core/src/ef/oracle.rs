//! Exact decision of the rank-bounded logical preorders on finite words.
//!
//! `u <=_{i,k} v` holds when every sentence of the level-`i` fragment with
//! quantifier rank at most `k` satisfied by `u` is satisfied by `v`. The
//! level-`i` fragment consists of prenex sentences with at most `i`
//! quantifier blocks whose first block is existential when all `i` blocks
//! are used; sentences with strictly fewer blocks of either polarity also
//! belong, which is the same as allowing empty blocks in the `∃*∀*∃*…`
//! shape.
//!
//! The decision procedure is the alternating block game: Spoiler plays a
//! whole quantifier block of pebbles on the word where the block is
//! interpreted (the left word for existential blocks, the right word for
//! universal ones), Duplicator answers the block on the other word, the
//! induced label-and-order structure must be preserved, and a block switch
//! swaps roles. The rank budget is shared by all blocks, so the preorder is
//! the conjunction over all ways of splitting `k` pebbles into `i` blocks.
//!
//! Internally a block is processed one pebble at a time, leftmost first:
//! the remaining pebbles of the current block are then known to land in
//! the right segment, so placed pebbles become aligned cuts and the two
//! sides of a cut are independent subgames facing the remaining blocks.
//! Validated against the scattered-subword characterization of the bottom
//! level and the decomposition/composition laws in the test suites.

use std::collections::HashMap;

use thiserror::Error;

use crate::words::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapError {
    #[error("rank {got} exceeds configured cap {cap}")]
    Rank { got: u8, cap: u8 },
    #[error("word length {got} exceeds configured cap {cap}")]
    Length { got: usize, cap: usize },
    #[error("level {0} not in 1..=3")]
    Level(u8),
}

#[derive(Debug, Clone, Copy)]
pub struct OracleCaps {
    pub max_rank: u8,
    pub max_len: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_rank: 4,
            max_len: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Turn {
    Exists,
    Forall,
}

impl Turn {
    fn flip(self) -> Turn {
        match self {
            Turn::Exists => Turn::Forall,
            Turn::Forall => Turn::Exists,
        }
    }
}

/// Remaining block sizes: `blocks[0]` is the unfinished current block.
type Blocks = [u8; 3];

fn shift(blocks: Blocks) -> Blocks {
    [blocks[1], blocks[2], 0]
}

/// Memoizing oracle for the rank-bounded preorders. Queries against words
/// already interned share all subgame results; the memo is confined to the
/// oracle value.
#[derive(Debug)]
pub struct EfOracle {
    caps: OracleCaps,
    intern: HashMap<Word, u32>,
    words: Vec<Word>,
    memo: HashMap<u64, bool>,
}

impl EfOracle {
    pub fn new(caps: OracleCaps) -> Self {
        let mut oracle = EfOracle {
            caps,
            intern: HashMap::new(),
            words: Vec::new(),
            memo: HashMap::new(),
        };
        oracle.intern_word(&Word::default());
        oracle
    }

    pub fn caps(&self) -> OracleCaps {
        self.caps
    }

    fn intern_word(&mut self, w: &Word) -> u32 {
        if let Some(&id) = self.intern.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.intern.insert(w.clone(), id);
        self.words.push(w.clone());
        id
    }

    /// Decides whether every level-`i` sentence of rank at most `k` true on
    /// `u` is true on `v`. Exact within the caps; a cap violation is an
    /// explicit error, never a silent truncation.
    pub fn sigma_leq(&mut self, i: u8, k: u8, u: &Word, v: &Word) -> Result<bool, CapError> {
        if !(1..=3).contains(&i) {
            return Err(CapError::Level(i));
        }
        if k > self.caps.max_rank {
            return Err(CapError::Rank {
                got: k,
                cap: self.caps.max_rank,
            });
        }
        for w in [u, v] {
            if w.len() > self.caps.max_len {
                return Err(CapError::Length {
                    got: w.len(),
                    cap: self.caps.max_len,
                });
            }
        }
        let uid = self.intern_word(u);
        let vid = self.intern_word(v);
        // Conjunction over all splittings of the rank budget into `i`
        // blocks; smaller budgets are dominated componentwise.
        for blocks in compositions(k, i) {
            if !self.survives(blocks, Turn::Exists, uid, vid) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `u` and `v` satisfy the same level-`i` sentences of rank at most `k`.
    pub fn bsigma_eq(&mut self, i: u8, k: u8, u: &Word, v: &Word) -> Result<bool, CapError> {
        Ok(self.sigma_leq(i, k, u, v)? && self.sigma_leq(i, k, v, u)?)
    }

    fn key(blocks: Blocks, turn: Turn, u: u32, v: u32) -> u64 {
        debug_assert!(u < (1 << 24) && v < (1 << 24));
        let t = match turn {
            Turn::Exists => 0u64,
            Turn::Forall => 1u64,
        };
        (blocks[0] as u64)
            | ((blocks[1] as u64) << 4)
            | ((blocks[2] as u64) << 8)
            | (t << 12)
            | ((u as u64) << 13)
            | ((v as u64) << 37)
    }

    fn survives(&mut self, blocks: Blocks, turn: Turn, u: u32, v: u32) -> bool {
        if blocks == [0, 0, 0] {
            return true;
        }
        if blocks[0] == 0 {
            return self.survives(shift(blocks), turn.flip(), u, v);
        }
        let key = Self::key(blocks, turn, u, v);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        // Spoiler may leave the current block unfinished and move on.
        let mut result = self.survives(shift(blocks), turn.flip(), u, v);
        if result {
            result = match turn {
                Turn::Exists => self.block_move(blocks, turn, u, v, false),
                Turn::Forall => self.block_move(blocks, turn, u, v, true),
            };
        }
        self.memo.insert(key, result);
        result
    }

    /// One pebble of the current block, leftmost first: the cut's left
    /// segments face only the later blocks, the right segments continue the
    /// current block. When `swapped`, Spoiler plays on the right word.
    fn block_move(&mut self, blocks: Blocks, turn: Turn, u: u32, v: u32, swapped: bool) -> bool {
        let (sp, dp) = if swapped { (v, u) } else { (u, v) };
        let sw = self.words[sp as usize].clone();
        let dw = self.words[dp as usize].clone();
        let rest = shift(blocks);
        let cont = [blocks[0] - 1, blocks[1], blocks[2]];
        for p in 0..sw.len() {
            let c = sw.0[p];
            let (s1, s2) = self.split_ids(&sw, p);
            let mut answered = false;
            for q in 0..dw.len() {
                if dw.0[q] != c {
                    continue;
                }
                let (d1, d2) = self.split_ids(&dw, q);
                let (l1, r1) = if swapped { (d1, s1) } else { (s1, d1) };
                let (l2, r2) = if swapped { (d2, s2) } else { (s2, d2) };
                if self.survives(rest, turn.flip(), l1, r1)
                    && self.survives(cont, turn, l2, r2)
                {
                    answered = true;
                    break;
                }
            }
            if !answered {
                return false;
            }
        }
        true
    }

    fn split_ids(&mut self, w: &Word, at: usize) -> (u32, u32) {
        let left = Word(w.0[..at].to_vec());
        let right = Word(w.0[at + 1..].to_vec());
        (self.intern_word(&left), self.intern_word(&right))
    }
}

/// All ways to write `k` as an ordered sum of `i` nonnegative parts.
fn compositions(k: u8, i: u8) -> Vec<Blocks> {
    let mut out = Vec::new();
    match i {
        1 => out.push([k, 0, 0]),
        2 => {
            for a in 0..=k {
                out.push([a, k - a, 0]);
            }
        }
        3 => {
            for a in 0..=k {
                for b in 0..=(k - a) {
                    out.push([a, b, k - a - b]);
                }
            }
        }
        _ => unreachable!("level checked by caller"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, Alphabet};

    fn oracle() -> EfOracle {
        EfOracle::new(OracleCaps::default())
    }

    fn w(s: &str) -> Word {
        let a = Alphabet::new(vec!['a', 'b']).unwrap();
        a.parse_word(s).unwrap()
    }

    /// Independent characterization of the bottom level: every scattered
    /// subword of `u` of length at most `k` embeds into `v`.
    pub(crate) fn subwords_up_to(u: &Word, k: usize) -> std::collections::BTreeSet<Word> {
        let mut out = std::collections::BTreeSet::new();
        let n = u.len();
        let mut stack: Vec<(usize, Vec<u8>)> = vec![(0, Vec::new())];
        while let Some((pos, cur)) = stack.pop() {
            if !cur.is_empty() {
                out.insert(Word(cur.clone()));
            }
            if cur.len() == k {
                continue;
            }
            for p in pos..n {
                let mut next = cur.clone();
                next.push(u.0[p]);
                stack.push((p + 1, next));
            }
        }
        out
    }

    pub(crate) fn embeds(x: &Word, v: &Word) -> bool {
        let mut it = v.0.iter();
        x.0.iter().all(|c| it.any(|d| d == c))
    }

    #[test]
    fn rank_zero_relates_everything() {
        let mut o = oracle();
        for i in 1..=3 {
            assert!(o.sigma_leq(i, 0, &w("ab"), &w("b")).unwrap());
            assert!(o.sigma_leq(i, 0, &w("b"), &w("ab")).unwrap());
        }
    }

    #[test]
    fn reflexive_on_samples() {
        let mut o = oracle();
        for i in 1..=3 {
            for k in 0..=3 {
                for word in ["a", "ab", "bba", "abab"] {
                    assert!(o.sigma_leq(i, k, &w(word), &w(word)).unwrap());
                }
            }
        }
    }

    #[test]
    fn sigma1_examples_from_subword_semantics() {
        let mut o = oracle();
        // "ab" has subword a, absent from "b".
        assert!(!o.sigma_leq(1, 1, &w("ab"), &w("b")).unwrap());
        // every subword of "b" of length <= 3 embeds into "ab".
        assert!(o.sigma_leq(1, 3, &w("b"), &w("ab")).unwrap());
        // longer words embed into shorter ones when subwords allow it
        assert!(o.sigma_leq(1, 2, &w("aaa"), &w("aa")).unwrap());
        assert!(!o.sigma_leq(1, 3, &w("aaa"), &w("aa")).unwrap());
    }

    #[test]
    fn sigma1_matches_subword_characterization_short() {
        let mut o = oracle();
        let words = enumerate_words(2, 4);
        for k in 1..=3u8 {
            for u in &words {
                for v in &words {
                    let expected = subwords_up_to(u, k as usize)
                        .iter()
                        .all(|x| embeds(x, v));
                    assert_eq!(
                        o.sigma_leq(1, k, u, v).unwrap(),
                        expected,
                        "k={k} u={u:?} v={v:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn sigma2_rank_one_forces_content_equality() {
        let mut o = oracle();
        assert!(!o.sigma_leq(2, 1, &w("ab"), &w("a")).unwrap());
        assert!(!o.sigma_leq(2, 1, &w("a"), &w("ab")).unwrap());
        assert!(o.sigma_leq(2, 1, &w("ab"), &w("ba")).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let mut o = oracle();
        assert!(matches!(
            o.sigma_leq(1, 5, &w("a"), &w("a")),
            Err(CapError::Rank { .. })
        ));
        assert!(matches!(
            o.sigma_leq(4, 1, &w("a"), &w("a")),
            Err(CapError::Level(4))
        ));
        let long = Word(vec![0; 11]);
        assert!(matches!(
            o.sigma_leq(1, 1, &long, &w("a")),
            Err(CapError::Length { .. })
        ));
    }

    #[test]
    fn refinement_in_rank_and_level_on_samples() {
        let mut o = oracle();
        let words = enumerate_words(2, 4);
        for u in words.iter().step_by(3) {
            for v in words.iter().step_by(2) {
                for i in 1..=3u8 {
                    for k in 1..=2u8 {
                        if o.sigma_leq(i, k + 1, u, v).unwrap() {
                            assert!(o.sigma_leq(i, k, u, v).unwrap());
                        }
                    }
                }
                for i in 1..=2u8 {
                    for k in 1..=3u8 {
                        if o.sigma_leq(i + 1, k, u, v).unwrap() {
                            assert!(o.bsigma_eq(i, k, u, v).unwrap());
                        }
                    }
                }
            }
        }
    }
}
