//! Finite semigroups with dense multiplication tables.

use thiserror::Error;

/// Index of an element of the finite part `S₊` of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlusElem(pub usize);

/// An element of `S₊` extended with an adjoined neutral element. The unit is
/// used by constructions that quantify over "a prefix or no prefix at all"
/// (saturation sets, the alternation graph) even when `S₊` is a monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OptPlus {
    Unit,
    Elem(PlusElem),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("no elements declared")]
    Empty,
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("unknown element id `{0}` referenced by {1}")]
    UnknownId(String, String),
    #[error("multiplication table is missing entry for ({0}, {1})")]
    MissingMult(String, String),
    #[error("mixed product table is missing entry for ({0}, {1})")]
    MissingMixed(String, String),
    #[error("omega-power table is missing entry for {0}")]
    MissingOmega(String),
}

/// A finite semigroup: named elements and a total multiplication table.
///
/// Associativity is not enforced at construction; it is an axiom checked by
/// the algebra validator so that violations can be reported with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    names: Vec<String>,
    mult: Vec<usize>, // row-major |S| x |S|
}

impl FiniteSemigroup {
    pub fn new(names: Vec<String>, mult: Vec<usize>) -> Result<Self, StructureError> {
        let n = names.len();
        if n == 0 {
            return Err(StructureError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(StructureError::DuplicateId(name.clone()));
            }
        }
        assert_eq!(mult.len(), n * n, "multiplication table shape");
        for &e in &mult {
            assert!(e < n, "multiplication table entry out of range");
        }
        Ok(FiniteSemigroup { names, mult })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: PlusElem) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elems(&self) -> impl Iterator<Item = PlusElem> {
        (0..self.len()).map(PlusElem)
    }

    pub fn index_of(&self, name: &str) -> Option<PlusElem> {
        self.names.iter().position(|n| n == name).map(PlusElem)
    }

    pub fn mult(&self, a: PlusElem, b: PlusElem) -> PlusElem {
        PlusElem(self.mult[a.0 * self.len() + b.0])
    }

    pub fn mult_opt(&self, a: OptPlus, b: PlusElem) -> PlusElem {
        match a {
            OptPlus::Unit => b,
            OptPlus::Elem(e) => self.mult(e, b),
        }
    }

    /// `a^n` for `n >= 1`.
    pub fn pow(&self, a: PlusElem, n: usize) -> PlusElem {
        assert!(n >= 1);
        let mut acc = a;
        for _ in 1..n {
            acc = self.mult(acc, a);
        }
        acc
    }

    pub fn is_idempotent(&self, e: PlusElem) -> bool {
        self.mult(e, e) == e
    }

    pub fn idempotents(&self) -> Vec<PlusElem> {
        self.elems().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// The least `n >= 1` such that `s^n` is idempotent for every `s`.
    ///
    /// Powers of each element enter a cycle after at most `|S|` steps, so the
    /// scan below terminates within `lcm of cycle lengths * |S|` steps.
    pub fn idempotent_exponent(&self) -> usize {
        'outer: for n in 1.. {
            for s in self.elems() {
                let p = self.pow(s, n);
                if !self.is_idempotent(p) {
                    continue 'outer;
                }
            }
            return n;
        }
        unreachable!()
    }

    /// `a^omega` where omega is the idempotent exponent: the unique
    /// idempotent power of `a`.
    pub fn idempotent_power(&self, a: PlusElem) -> PlusElem {
        self.pow(a, self.idempotent_exponent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> FiniteSemigroup {
        FiniteSemigroup::new(vec!["e".into()], vec![0]).unwrap()
    }

    fn cyclic3() -> FiniteSemigroup {
        // Z/3Z under addition: element i at index i.
        let mut mult = vec![0; 9];
        for i in 0..3 {
            for j in 0..3 {
                mult[i * 3 + j] = (i + j) % 3;
            }
        }
        FiniteSemigroup::new(vec!["0".into(), "1".into(), "2".into()], mult).unwrap()
    }

    #[test]
    fn exponent_of_trivial_semigroup_is_one() {
        assert_eq!(trivial().idempotent_exponent(), 1);
    }

    #[test]
    fn exponent_of_cyclic_group_of_order_three() {
        assert_eq!(cyclic3().idempotent_exponent(), 3);
    }

    #[test]
    fn exponent_is_minimal_and_makes_all_powers_idempotent() {
        for sg in [trivial(), cyclic3()] {
            let w = sg.idempotent_exponent();
            for s in sg.elems() {
                assert!(sg.is_idempotent(sg.pow(s, w)));
            }
            for n in 1..w {
                assert!(sg.elems().any(|s| !sg.is_idempotent(sg.pow(s, n))));
            }
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert_eq!(
            FiniteSemigroup::new(vec!["x".into(), "x".into()], vec![0, 0, 0, 0]),
            Err(StructureError::DuplicateId("x".into()))
        );
    }
}
