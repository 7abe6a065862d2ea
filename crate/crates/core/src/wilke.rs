//! Finite ω-semigroups in Wilke's finite representation: a finite semigroup
//! `S₊`, a finite set `S∞`, a mixed product `S₊ × S∞ → S∞` and an ω-power
//! map `S₊ → S∞` standing in for the infinite product.

use std::fmt;

use crate::semigroup::{FiniteSemigroup, OptPlus, PlusElem, StructureError};

/// Index of an element of the infinite part `S∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfElem(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilkeAlgebra {
    splus: FiniteSemigroup,
    inf_names: Vec<String>,
    mixed: Vec<usize>, // row-major |S₊| x |S∞|
    omega: Vec<usize>, // |S₊|
}

impl WilkeAlgebra {
    pub fn new(
        splus: FiniteSemigroup,
        inf_names: Vec<String>,
        mixed: Vec<usize>,
        omega: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if inf_names.is_empty() {
            return Err(StructureError::Empty);
        }
        for (i, name) in inf_names.iter().enumerate() {
            if inf_names[..i].contains(name) {
                return Err(StructureError::DuplicateId(name.clone()));
            }
        }
        let np = splus.len();
        let ni = inf_names.len();
        assert_eq!(mixed.len(), np * ni, "mixed product table shape");
        assert_eq!(omega.len(), np, "omega-power table shape");
        for &e in &mixed {
            assert!(e < ni, "mixed table entry out of range");
        }
        for &e in &omega {
            assert!(e < ni, "omega table entry out of range");
        }
        Ok(WilkeAlgebra {
            splus,
            inf_names,
            mixed,
            omega,
        })
    }

    pub fn splus(&self) -> &FiniteSemigroup {
        &self.splus
    }

    pub fn inf_len(&self) -> usize {
        self.inf_names.len()
    }

    pub fn inf_name(&self, w: InfElem) -> &str {
        &self.inf_names[w.0]
    }

    pub fn inf_names(&self) -> &[String] {
        &self.inf_names
    }

    pub fn inf_elems(&self) -> impl Iterator<Item = InfElem> {
        (0..self.inf_len()).map(InfElem)
    }

    pub fn inf_index_of(&self, name: &str) -> Option<InfElem> {
        self.inf_names.iter().position(|n| n == name).map(InfElem)
    }

    pub fn mixed(&self, s: PlusElem, w: InfElem) -> InfElem {
        InfElem(self.mixed[s.0 * self.inf_len() + w.0])
    }

    pub fn mixed_opt(&self, s: OptPlus, w: InfElem) -> InfElem {
        match s {
            OptPlus::Unit => w,
            OptPlus::Elem(e) => self.mixed(e, w),
        }
    }

    pub fn omega(&self, s: PlusElem) -> InfElem {
        InfElem(self.omega[s.0])
    }

    /// Checks every algebra axiom exhaustively and reports violations with
    /// the offending elements. An empty report means the tables form a
    /// genuine Wilke algebra.
    pub fn validate(&self) -> ValidationReport {
        let sg = &self.splus;
        let mut violations = Vec::new();
        for a in sg.elems() {
            for b in sg.elems() {
                for c in sg.elems() {
                    if sg.mult(sg.mult(a, b), c) != sg.mult(a, sg.mult(b, c)) {
                        violations.push(Violation::Associativity {
                            a: sg.name(a).into(),
                            b: sg.name(b).into(),
                            c: sg.name(c).into(),
                        });
                    }
                }
            }
        }
        for s in sg.elems() {
            for t in sg.elems() {
                for w in self.inf_elems() {
                    if self.mixed(sg.mult(s, t), w) != self.mixed(s, self.mixed(t, w)) {
                        violations.push(Violation::MixedAssociativity {
                            s: sg.name(s).into(),
                            t: sg.name(t).into(),
                            w: self.inf_name(w).into(),
                        });
                    }
                }
            }
        }
        for s in sg.elems() {
            if self.omega(s) != self.mixed(s, self.omega(s)) {
                violations.push(Violation::OmegaAbsorption {
                    s: sg.name(s).into(),
                });
            }
        }
        // Powers of s take at most |S₊| distinct values, so checking
        // n <= |S₊| + 1 covers omega(s^n) = omega(s) for every n >= 1.
        for s in sg.elems() {
            for n in 2..=sg.len() + 1 {
                if self.omega(sg.pow(s, n)) != self.omega(s) {
                    violations.push(Violation::PowerCoherence {
                        s: sg.name(s).into(),
                        n,
                    });
                }
            }
        }
        for s in sg.elems() {
            for t in sg.elems() {
                if self.mixed(s, self.omega(sg.mult(t, s))) != self.omega(sg.mult(s, t)) {
                    violations.push(Violation::Rotation {
                        s: sg.name(s).into(),
                        t: sg.name(t).into(),
                    });
                }
            }
        }
        ValidationReport { violations }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Associativity { a: String, b: String, c: String },
    MixedAssociativity { s: String, t: String, w: String },
    OmegaAbsorption { s: String },
    PowerCoherence { s: String, n: usize },
    Rotation { s: String, t: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
            Violation::MixedAssociativity { s, t, w } => {
                write!(f, "mixed associativity fails on ({s}, {t}, {w})")
            }
            Violation::OmegaAbsorption { s } => {
                write!(f, "omega-power absorption fails on {s}")
            }
            Violation::PowerCoherence { s, n } => {
                write!(f, "omega-power coherence fails on {s} at power {n}")
            }
            Violation::Rotation { s, t } => write!(f, "rotation fails on ({s}, {t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_element(omega_to: usize, mixed_to: Vec<usize>, inf: Vec<&str>) -> WilkeAlgebra {
        let sg = FiniteSemigroup::new(vec!["e".into()], vec![0]).unwrap();
        WilkeAlgebra::new(
            sg,
            inf.into_iter().map(String::from).collect(),
            mixed_to,
            vec![omega_to],
        )
        .unwrap()
    }

    #[test]
    fn trivial_algebra_is_clean() {
        let alg = one_element(0, vec![0], vec!["T"]);
        assert!(alg.validate().is_clean());
    }

    #[test]
    fn broken_absorption_is_reported_with_witness() {
        // omega(e) = T but mixed(e, T) = B != T.
        let alg = one_element(0, vec![1, 1], vec!["T", "B"]);
        let report = alg.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::OmegaAbsorption { s } if s == "e")));
    }
}
