//! Alphabets, finite words, lasso words and letter sets.
//!
//! Words are stored as sequences of letter indices into an [`Alphabet`].
//! Infinite words are only ever manipulated through their ultimately
//! periodic representatives ([`LassoWord`], denoting `u·v·v·v···`).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate letter '{0}' in alphabet")]
    DuplicateLetter(char),
    #[error("alphabet has {0} letters, at most {max} supported", max = Alphabet::MAX_LETTERS)]
    AlphabetTooLarge(usize),
    #[error("unknown letter '{0}'")]
    UnknownLetter(char),
    #[error("empty word where a nonempty word is required")]
    EmptyWord,
    #[error("lasso loop must be nonempty")]
    EmptyLoop,
    #[error("malformed lasso syntax: expected `u(v)^w`, got `{0}`")]
    MalformedLasso(String),
}

/// A fixed ordered set of single-character letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub const MAX_LETTERS: usize = 8;

    pub fn new(letters: Vec<char>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if letters.len() > Self::MAX_LETTERS {
            return Err(WordError::AlphabetTooLarge(letters.len()));
        }
        for (i, &c) in letters.iter().enumerate() {
            if letters[..i].contains(&c) {
                return Err(WordError::DuplicateLetter(c));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, idx: u8) -> char {
        self.letters[idx as usize]
    }

    pub fn index_of(&self, c: char) -> Result<u8, WordError> {
        self.letters
            .iter()
            .position(|&l| l == c)
            .map(|i| i as u8)
            .ok_or(WordError::UnknownLetter(c))
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    /// Parses a string into a word over this alphabet. Empty input gives an
    /// empty word; callers that need nonempty words must check.
    pub fn parse_word(&self, s: &str) -> Result<Word, WordError> {
        let mut out = Vec::with_capacity(s.len());
        for c in s.chars() {
            out.push(self.index_of(c)?);
        }
        Ok(Word(out))
    }

    pub fn render(&self, w: &Word) -> String {
        w.0.iter().map(|&i| self.letter(i)).collect()
    }

    pub fn render_lasso(&self, w: &LassoWord) -> String {
        format!("{}({})^w", self.render(&w.prefix), self.render(&w.cycle))
    }

    pub fn render_letter_set(&self, s: LetterSet) -> String {
        let mut out = String::from("{");
        let mut first = true;
        for i in 0..self.len() as u8 {
            if s.contains(i) {
                if !first {
                    out.push(',');
                }
                out.push(self.letter(i));
                first = false;
            }
        }
        out.push('}');
        out
    }
}

/// A finite (possibly empty) word as letter indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn letter_set(&self) -> LetterSet {
        let mut s = LetterSet::EMPTY;
        for &c in &self.0 {
            s = s.insert(c);
        }
        s
    }
}

/// An ultimately periodic infinite word `prefix·cycle·cycle···`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LassoWord {
    pub prefix: Word,
    pub cycle: Word,
}

impl LassoWord {
    pub fn new(prefix: Word, cycle: Word) -> Result<Self, WordError> {
        if cycle.is_empty() {
            return Err(WordError::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// Letters occurring in the denoted infinite word: every letter of the
    /// prefix and of the loop occurs at least once.
    pub fn letter_set(&self) -> LetterSet {
        self.prefix.letter_set().union(self.cycle.letter_set())
    }

    /// Prepends a finite word.
    pub fn with_prefix(&self, pre: &Word) -> LassoWord {
        LassoWord {
            prefix: pre.concat(&self.prefix),
            cycle: self.cycle.clone(),
        }
    }

    /// The canonical representative of the denoted infinite word: the loop is
    /// reduced to its primitive root and rolled back into the prefix as far
    /// as possible, so two lassos denote the same infinite word iff their
    /// canonical forms are equal.
    pub fn canonical(&self) -> LassoWord {
        let mut cycle = primitive_root(&self.cycle);
        let mut prefix = self.prefix.0.clone();
        while let Some(&last) = prefix.last() {
            if *cycle.0.last().unwrap() == last {
                prefix.pop();
                cycle.0.rotate_right(1);
            } else {
                break;
            }
        }
        LassoWord {
            prefix: Word(prefix),
            cycle,
        }
    }

    pub fn denotes_same_word(&self, other: &LassoWord) -> bool {
        self.canonical() == other.canonical()
    }

    /// The finite word `prefix·cycle^n`.
    pub fn unrolled(&self, n: usize) -> Word {
        self.prefix.concat(&self.cycle.repeat(n))
    }
}

fn primitive_root(w: &Word) -> Word {
    let n = w.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| w.0[i] == w.0[i % d]) {
            return Word(w.0[..d].to_vec());
        }
    }
    w.clone()
}

/// Parses `u(v)^w` lasso syntax; `u` may be empty, `v` must not be.
pub fn parse_lasso(alphabet: &Alphabet, text: &str) -> Result<LassoWord, WordError> {
    let open = text
        .find('(')
        .ok_or_else(|| WordError::MalformedLasso(text.to_string()))?;
    let rest = &text[open + 1..];
    let close = rest
        .find(')')
        .ok_or_else(|| WordError::MalformedLasso(text.to_string()))?;
    let tail = &rest[close + 1..];
    if tail != "^w" {
        return Err(WordError::MalformedLasso(text.to_string()));
    }
    let prefix = alphabet.parse_word(&text[..open])?;
    let cycle = alphabet.parse_word(&rest[..close])?;
    if cycle.is_empty() {
        return Err(WordError::EmptyLoop);
    }
    LassoWord::new(prefix, cycle)
}

/// A set of letters as a bitmask over alphabet indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LetterSet(pub u16);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn singleton(i: u8) -> LetterSet {
        LetterSet(1 << i)
    }

    pub fn insert(self, i: u8) -> LetterSet {
        LetterSet(self.0 | (1 << i))
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn union(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#06b}", self.0)
    }
}

/// Enumerates all nonempty words of length at most `max_len`, shortest first
/// and lexicographic within a length. This ordering is relied upon for
/// reproducible witness selection.
pub fn enumerate_words(alphabet_len: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut current: Vec<Word> = vec![Word(vec![])];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(current.len() * alphabet_len);
        for w in &current {
            for c in 0..alphabet_len as u8 {
                let mut v = w.0.clone();
                v.push(c);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(vec!['a', 'b']).unwrap()
    }

    #[test]
    fn parse_lasso_basic() {
        let a = ab();
        let w = parse_lasso(&a, "ab(ba)^w").unwrap();
        assert_eq!(a.render(&w.prefix), "ab");
        assert_eq!(a.render(&w.cycle), "ba");
    }

    #[test]
    fn parse_lasso_empty_prefix() {
        let a = ab();
        let w = parse_lasso(&a, "(b)^w").unwrap();
        assert!(w.prefix.is_empty());
        assert_eq!(a.render(&w.cycle), "b");
    }

    #[test]
    fn parse_lasso_empty_loop_rejected() {
        let a = ab();
        assert_eq!(parse_lasso(&a, "ab()^w"), Err(WordError::EmptyLoop));
    }

    #[test]
    fn parse_lasso_malformed() {
        let a = ab();
        assert!(matches!(
            parse_lasso(&a, "abba"),
            Err(WordError::MalformedLasso(_))
        ));
        assert!(matches!(
            parse_lasso(&a, "a(b)w"),
            Err(WordError::MalformedLasso(_))
        ));
        assert!(matches!(
            parse_lasso(&a, "a(c)^w"),
            Err(WordError::UnknownLetter('c'))
        ));
    }

    #[test]
    fn canonical_lasso_identifies_unrollings() {
        let a = ab();
        let w1 = parse_lasso(&a, "(ab)^w").unwrap();
        let w2 = parse_lasso(&a, "ab(ab)^w").unwrap();
        let w3 = parse_lasso(&a, "a(ba)^w").unwrap();
        let w4 = parse_lasso(&a, "(abab)^w").unwrap();
        assert!(w1.denotes_same_word(&w2));
        assert!(w1.denotes_same_word(&w3));
        assert!(w1.denotes_same_word(&w4));
        let other = parse_lasso(&a, "b(ab)^w").unwrap();
        assert!(!w1.denotes_same_word(&other));
    }

    #[test]
    fn word_enumeration_is_length_then_lex() {
        let ws = enumerate_words(2, 2);
        let a = ab();
        let rendered: Vec<String> = ws.iter().map(|w| a.render(w)).collect();
        assert_eq!(rendered, vec!["a", "b", "aa", "ab", "ba", "bb"]);
    }
}
