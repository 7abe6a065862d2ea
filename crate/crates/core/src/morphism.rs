//! Morphisms from `(A⁺, A^∞)` into a finite Wilke algebra, recognized
//! languages, evaluation on finite and lasso words, Ramsey factorization and
//! the image of the infinite-word map.
//!
//! A morphism is determined by the letter images. Reachable elements, one
//! shortest realizing word per reachable element, the derived content map
//! (when the morphism is alphabet compatible) and the infinite-word image
//! are all computed once at construction; values are immutable afterwards.

use std::collections::VecDeque;
use std::sync::Arc;

use thiserror::Error;

use crate::semigroup::{OptPlus, PlusElem};
use crate::wilke::{InfElem, WilkeAlgebra};
use crate::words::{Alphabet, LassoWord, LetterSet, Word, WordError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("letter image list has {got} entries, alphabet has {want}")]
    LetterImageArity { got: usize, want: usize },
    #[error("letter image index {0} out of range")]
    LetterImageRange(usize),
    #[error("morphism is not alphabet compatible; content is undefined")]
    NotAlphabetCompatible,
    #[error("accept set references unknown element `{0}`")]
    UnknownAcceptElement(String),
    #[error("language `{0}` is not an omega-language")]
    NotOmegaLanguage(String),
}

#[derive(Debug, Clone)]
pub struct OmegaMorphism {
    alphabet: Alphabet,
    algebra: WilkeAlgebra,
    letter_image: Vec<PlusElem>,
    alphabet_compatible: bool,
    content_plus: Vec<LetterSet>,
    content_inf: Vec<LetterSet>,
    reach_plus: Vec<PlusElem>,
    reach_plus_mask: Vec<bool>,
    reach_word: Vec<Option<Word>>,
    inf_image: Vec<InfElem>,
    inf_witness: Vec<Option<LassoWord>>,
}

impl OmegaMorphism {
    pub fn new(
        alphabet: Alphabet,
        algebra: WilkeAlgebra,
        letter_image: Vec<PlusElem>,
    ) -> Result<Self, MorphismError> {
        if letter_image.len() != alphabet.len() {
            return Err(MorphismError::LetterImageArity {
                got: letter_image.len(),
                want: alphabet.len(),
            });
        }
        for &e in &letter_image {
            if e.0 >= algebra.splus().len() {
                return Err(MorphismError::LetterImageRange(e.0));
            }
        }

        let (reach_plus, reach_plus_mask, reach_word) =
            reachable_plus(&algebra, &alphabet, &letter_image);
        let (alphabet_compatible, content_plus, content_inf) =
            derive_content(&algebra, &alphabet, &letter_image, &reach_plus);
        let (inf_image, inf_witness) =
            infinite_image_of(&algebra, &reach_plus, &reach_word);

        Ok(OmegaMorphism {
            alphabet,
            algebra,
            letter_image,
            alphabet_compatible,
            content_plus,
            content_inf,
            reach_plus,
            reach_plus_mask,
            reach_word,
            inf_image,
            inf_witness,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn algebra(&self) -> &WilkeAlgebra {
        &self.algebra
    }

    pub fn letter_image(&self, letter: u8) -> PlusElem {
        self.letter_image[letter as usize]
    }

    pub fn alphabet_compatible(&self) -> bool {
        self.alphabet_compatible
    }

    /// Image of a nonempty finite word: the left-to-right product of letter
    /// images.
    pub fn eval_word(&self, w: &Word) -> Result<PlusElem, MorphismError> {
        let mut it = w.0.iter();
        let first = it.next().ok_or(WordError::EmptyWord)?;
        let mut acc = self.letter_image(*first);
        for &c in it {
            acc = self.algebra.splus().mult(acc, self.letter_image(c));
        }
        Ok(acc)
    }

    pub fn eval_word_opt(&self, w: &Word) -> OptPlus {
        match self.eval_word(w) {
            Ok(e) => OptPlus::Elem(e),
            Err(_) => OptPlus::Unit,
        }
    }

    /// Image of an ultimately periodic infinite word: mixed product of the
    /// prefix image with the ω-power of the loop image, the prefix factor
    /// omitted when empty. Well-definedness under unrolling and rotation is
    /// guaranteed by the algebra axioms.
    pub fn eval_lasso(&self, w: &LassoWord) -> InfElem {
        let loop_img = self.eval_word(&w.cycle).expect("loop is nonempty");
        let tail = self.algebra.omega(loop_img);
        self.algebra.mixed_opt(self.eval_word_opt(&w.prefix), tail)
    }

    /// Reachable elements of `S₊` (images of nonempty words), in the order
    /// they are first produced by a shortest-first, alphabetic search.
    pub fn reachable_plus(&self) -> &[PlusElem] {
        &self.reach_plus
    }

    pub fn is_reachable_plus(&self, e: PlusElem) -> bool {
        self.reach_plus_mask[e.0]
    }

    /// A shortest (then lexicographically least) word realizing a reachable
    /// element.
    pub fn realizing_word(&self, e: PlusElem) -> Option<&Word> {
        self.reach_word[e.0].as_ref()
    }

    /// The set of images of all infinite words, in first-discovered order:
    /// `{ s · e^∞ : s reachable or absent, e a reachable idempotent }`.
    /// By Ramsey factorization this is exactly the image of the infinite
    /// word map.
    pub fn infinite_image(&self) -> &[InfElem] {
        &self.inf_image
    }

    pub fn in_infinite_image(&self, w: InfElem) -> bool {
        self.inf_witness[w.0].is_some()
    }

    /// A lasso word realizing an element of the infinite-word image.
    pub fn inf_witness(&self, w: InfElem) -> Option<&LassoWord> {
        self.inf_witness[w.0].as_ref()
    }

    /// Content (letter set of every preimage) of a finite-part element;
    /// empty for elements with no preimage. Requires alphabet compatibility.
    pub fn content_plus(&self, e: PlusElem) -> Result<LetterSet, MorphismError> {
        if !self.alphabet_compatible {
            return Err(MorphismError::NotAlphabetCompatible);
        }
        Ok(self.content_plus[e.0])
    }

    pub fn content_inf(&self, w: InfElem) -> Result<LetterSet, MorphismError> {
        if !self.alphabet_compatible {
            return Err(MorphismError::NotAlphabetCompatible);
        }
        Ok(self.content_inf[w.0])
    }

    /// Ramsey factorization of a lasso word: a prefix word and an idempotent
    /// block word such that the word is prefix followed by infinitely many
    /// blocks, all blocks sharing the idempotent image.
    pub fn ramsey_factorize(&self, w: &LassoWord) -> RamseyFactorization {
        let sg = self.algebra.splus();
        let loop_img = self.eval_word(&w.cycle).expect("loop is nonempty");
        let mut n = 1;
        let mut img = loop_img;
        while !sg.is_idempotent(img) {
            n += 1;
            img = sg.mult(img, loop_img);
        }
        let block_word = w.cycle.repeat(n);
        let prefix_word = if w.prefix.is_empty() {
            block_word.clone()
        } else {
            w.prefix.clone()
        };
        RamseyFactorization {
            prefix_image: self.eval_word(&prefix_word).expect("nonempty"),
            idempotent: img,
            prefix_word,
            block_word,
        }
    }
}

/// Decomposition of an infinite word into a finite prefix and infinitely
/// many blocks sharing one idempotent image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyFactorization {
    pub prefix_image: PlusElem,
    pub idempotent: PlusElem,
    pub prefix_word: Word,
    pub block_word: Word,
}

impl RamseyFactorization {
    /// Re-evaluates the factorization: `prefix_image · idempotent^∞`.
    pub fn reconstruct(&self, m: &OmegaMorphism) -> InfElem {
        let alg = m.algebra();
        alg.mixed(self.prefix_image, alg.omega(self.idempotent))
    }
}

fn reachable_plus(
    algebra: &WilkeAlgebra,
    alphabet: &Alphabet,
    letter_image: &[PlusElem],
) -> (Vec<PlusElem>, Vec<bool>, Vec<Option<Word>>) {
    let n = algebra.splus().len();
    let mut order = Vec::new();
    let mut mask = vec![false; n];
    let mut word: Vec<Option<Word>> = vec![None; n];
    let mut queue = VecDeque::new();
    for c in 0..alphabet.len() as u8 {
        let e = letter_image[c as usize];
        if !mask[e.0] {
            mask[e.0] = true;
            word[e.0] = Some(Word(vec![c]));
            order.push(e);
            queue.push_back(e);
        }
    }
    while let Some(e) = queue.pop_front() {
        let base = word[e.0].clone().unwrap();
        for c in 0..alphabet.len() as u8 {
            let next = algebra.splus().mult(e, letter_image[c as usize]);
            if !mask[next.0] {
                mask[next.0] = true;
                let mut w = base.0.clone();
                w.push(c);
                word[next.0] = Some(Word(w));
                order.push(next);
                queue.push_back(next);
            }
        }
    }
    (order, mask, word)
}

/// Closes (element, letter set) pairs under right multiplication by letters
/// and the derived infinite operations. If every reachable element carries a
/// unique letter set the morphism is alphabet compatible and the letter sets
/// are its content map.
fn derive_content(
    algebra: &WilkeAlgebra,
    alphabet: &Alphabet,
    letter_image: &[PlusElem],
    reach_plus: &[PlusElem],
) -> (bool, Vec<LetterSet>, Vec<LetterSet>) {
    let np = algebra.splus().len();
    let ni = algebra.inf_len();
    let mut plus_content: Vec<Option<LetterSet>> = vec![None; np];
    let mut inf_content: Vec<Option<LetterSet>> = vec![None; ni];
    let mut compatible = true;

    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    for c in 0..alphabet.len() as u8 {
        let pair = (letter_image[c as usize], LetterSet::singleton(c));
        if seen.insert(pair) {
            queue.push_back(pair);
        }
    }
    while let Some((e, set)) = queue.pop_front() {
        match plus_content[e.0] {
            None => plus_content[e.0] = Some(set),
            Some(prev) if prev != set => compatible = false,
            _ => {}
        }
        for c in 0..alphabet.len() as u8 {
            let pair = (
                algebra.splus().mult(e, letter_image[c as usize]),
                set.insert(c),
            );
            if seen.insert(pair) {
                queue.push_back(pair);
            }
        }
    }

    // Infinite part: omega-powers of reachable (element, content) pairs,
    // closed under mixed products with reachable pairs. Content of an
    // infinite power is the content of its base.
    let plus_pairs: Vec<(PlusElem, LetterSet)> = {
        let mut v: Vec<(PlusElem, LetterSet)> = seen.iter().copied().collect();
        v.sort();
        v
    };
    let mut inf_seen = std::collections::HashSet::new();
    let mut inf_queue = VecDeque::new();
    for &(e, set) in &plus_pairs {
        let pair = (algebra.omega(e), set);
        if inf_seen.insert(pair) {
            inf_queue.push_back(pair);
        }
    }
    while let Some((w, set)) = inf_queue.pop_front() {
        match inf_content[w.0] {
            None => inf_content[w.0] = Some(set),
            Some(prev) if prev != set => compatible = false,
            _ => {}
        }
        for &(e, eset) in &plus_pairs {
            let pair = (algebra.mixed(e, w), eset.union(set));
            if inf_seen.insert(pair) {
                inf_queue.push_back(pair);
            }
        }
    }

    let _ = reach_plus;
    (
        compatible,
        plus_content
            .into_iter()
            .map(|s| s.unwrap_or(LetterSet::EMPTY))
            .collect(),
        inf_content
            .into_iter()
            .map(|s| s.unwrap_or(LetterSet::EMPTY))
            .collect(),
    )
}

fn infinite_image_of(
    algebra: &WilkeAlgebra,
    reach_plus: &[PlusElem],
    reach_word: &[Option<Word>],
) -> (Vec<InfElem>, Vec<Option<LassoWord>>) {
    let mut image = Vec::new();
    let mut witness: Vec<Option<LassoWord>> = vec![None; algebra.inf_len()];
    let idempotents: Vec<PlusElem> = reach_plus
        .iter()
        .copied()
        .filter(|&e| algebra.splus().is_idempotent(e))
        .collect();
    let mut prefixes: Vec<OptPlus> = vec![OptPlus::Unit];
    prefixes.extend(reach_plus.iter().copied().map(OptPlus::Elem));
    for &s in &prefixes {
        for &e in &idempotents {
            let val = algebra.mixed_opt(s, algebra.omega(e));
            if witness[val.0].is_none() {
                let prefix = match s {
                    OptPlus::Unit => Word::default(),
                    OptPlus::Elem(p) => reach_word[p.0].clone().unwrap(),
                };
                let cycle = reach_word[e.0].clone().unwrap();
                witness[val.0] = Some(LassoWord { prefix, cycle });
                image.push(val);
            }
        }
    }
    (image, witness)
}

/// Which carrier an accept set lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcceptSet {
    /// An ω-language: subset of `S∞`.
    Inf(std::collections::BTreeSet<InfElem>),
    /// A finite-word language: subset of `S₊`.
    Plus(std::collections::BTreeSet<PlusElem>),
}

/// A named language recognized by a morphism through an accept set.
#[derive(Debug, Clone)]
pub struct RecognizedLanguage {
    pub name: String,
    pub morphism: Arc<OmegaMorphism>,
    pub accept: AcceptSet,
}

impl RecognizedLanguage {
    pub fn accept_inf(&self) -> Result<&std::collections::BTreeSet<InfElem>, MorphismError> {
        match &self.accept {
            AcceptSet::Inf(s) => Ok(s),
            AcceptSet::Plus(_) => Err(MorphismError::NotOmegaLanguage(self.name.clone())),
        }
    }

    pub fn contains_lasso(&self, w: &LassoWord) -> Result<bool, MorphismError> {
        let accept = self.accept_inf()?;
        Ok(accept.contains(&self.morphism.eval_lasso(w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn infa_letter_and_word_evaluation() {
        let m = corpus::infa().morphism;
        let a = m.alphabet().clone();
        let eval = |s: &str| m.eval_word(&a.parse_word(s).unwrap()).unwrap();
        assert_eq!(m.algebra().splus().name(eval("b")), "0");
        assert_eq!(m.algebra().splus().name(eval("ba")), "1");
        assert_eq!(m.algebra().splus().name(eval("a")), "1");
    }

    #[test]
    fn infa_lasso_evaluation() {
        let m = corpus::infa().morphism;
        let a = m.alphabet().clone();
        let eval = |s: &str| {
            let w = crate::words::parse_lasso(&a, s).unwrap();
            m.algebra().inf_name(m.eval_lasso(&w)).to_string()
        };
        assert_eq!(eval("b(ab)^w"), "INF");
        assert_eq!(eval("a(b)^w"), "FIN");
    }

    #[test]
    fn infa_is_not_alphabet_compatible() {
        // Words "a" and "ab" share the image 1 but have different contents.
        let m = corpus::infa().morphism;
        assert!(!m.alphabet_compatible());
    }

    #[test]
    fn one_element_algebra_infinite_image_is_singleton() {
        let m = corpus::universal().morphism;
        assert_eq!(m.infinite_image().len(), 1);
    }

    #[test]
    fn ramsey_factorization_blocks_are_idempotent_and_consistent() {
        let m = corpus::infa().morphism;
        let a = m.alphabet().clone();
        let w = crate::words::parse_lasso(&a, "b(ab)^w").unwrap();
        let f = m.ramsey_factorize(&w);
        assert!(m.algebra().splus().is_idempotent(f.idempotent));
        assert_eq!(m.eval_word(&f.block_word).unwrap(), f.idempotent);
        assert_eq!(f.reconstruct(&m), m.eval_lasso(&w));
    }
}
