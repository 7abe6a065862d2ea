//! On-disk formats: algebra files and Büchi automaton files.
//!
//! Both are TOML documents. An algebra file transcribes the finite
//! representation of an ω-semigroup directly: element lists plus the three
//! tables, the letter map, and named accept sets. Missing table entries are
//! structural errors, reported before any axiom checking.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::buchi::BuchiAutomaton;
use crate::morphism::{AcceptSet, MorphismError, OmegaMorphism, RecognizedLanguage};
use crate::semigroup::{FiniteSemigroup, PlusElem, StructureError};
use crate::wilke::WilkeAlgebra;
use crate::words::{Alphabet, WordError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("TOML parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("letter `{0}` must be a single character")]
    BadLetter(String),
    #[error("table key `{0}` is not of the form `s,t`")]
    BadTableKey(String),
    #[error("automaton: unknown state `{0}`")]
    UnknownState(String),
    #[error("automaton: transition entry must have exactly 3 fields, got {0}")]
    BadTransition(usize),
    #[error("automaton: no states declared")]
    NoStates,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub alphabet: Vec<String>,
    pub splus: Vec<String>,
    pub sinf: Vec<String>,
    pub mult: BTreeMap<String, String>,
    pub mixed: BTreeMap<String, String>,
    pub omega: BTreeMap<String, String>,
    pub letters: BTreeMap<String, String>,
    #[serde(default)]
    pub languages: BTreeMap<String, LanguageDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LanguageDef {
    pub accept: Vec<String>,
}

/// A parsed algebra file: the morphism plus its named languages.
#[derive(Debug, Clone)]
pub struct AlgebraDocument {
    pub morphism: Arc<OmegaMorphism>,
    pub languages: BTreeMap<String, RecognizedLanguage>,
}

impl AlgebraDocument {
    pub fn language(&self, name: &str) -> Option<&RecognizedLanguage> {
        self.languages.get(name)
    }
}

fn single_char(s: &str) -> Result<char, FormatError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(FormatError::BadLetter(s.to_string())),
    }
}

fn split_key(key: &str) -> Result<(&str, &str), FormatError> {
    key.split_once(',')
        .ok_or_else(|| FormatError::BadTableKey(key.to_string()))
}

pub fn parse_algebra(text: &str) -> Result<AlgebraDocument, FormatError> {
    let file: AlgebraFile = toml::from_str(text)?;

    let mut letters = Vec::with_capacity(file.alphabet.len());
    for l in &file.alphabet {
        letters.push(single_char(l)?);
    }
    let alphabet = Alphabet::new(letters)?;

    let np = file.splus.len();
    let ni = file.sinf.len();
    let plus_index = |name: &str, ctx: &str| -> Result<usize, FormatError> {
        file.splus
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| StructureError::UnknownId(name.to_string(), ctx.to_string()).into())
    };
    let inf_index = |name: &str, ctx: &str| -> Result<usize, FormatError> {
        file.sinf
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| StructureError::UnknownId(name.to_string(), ctx.to_string()).into())
    };

    let mut mult = vec![0usize; np * np];
    for (i, a) in file.splus.iter().enumerate() {
        for (j, b) in file.splus.iter().enumerate() {
            let key = format!("{a},{b}");
            let target = file
                .mult
                .get(&key)
                .ok_or_else(|| StructureError::MissingMult(a.clone(), b.clone()))?;
            mult[i * np + j] = plus_index(target, "mult")?;
        }
    }
    // Reject entries that mention undeclared elements rather than silently
    // ignoring them.
    for key in file.mult.keys() {
        let (a, b) = split_key(key)?;
        plus_index(a, "mult")?;
        plus_index(b, "mult")?;
    }

    let mut mixed = vec![0usize; np * ni];
    for (i, s) in file.splus.iter().enumerate() {
        for (j, w) in file.sinf.iter().enumerate() {
            let key = format!("{s},{w}");
            let target = file
                .mixed
                .get(&key)
                .ok_or_else(|| StructureError::MissingMixed(s.clone(), w.clone()))?;
            mixed[i * ni + j] = inf_index(target, "mixed")?;
        }
    }
    for key in file.mixed.keys() {
        let (s, w) = split_key(key)?;
        plus_index(s, "mixed")?;
        inf_index(w, "mixed")?;
    }

    let mut omega = vec![0usize; np];
    for (i, s) in file.splus.iter().enumerate() {
        let target = file
            .omega
            .get(s)
            .ok_or_else(|| StructureError::MissingOmega(s.clone()))?;
        omega[i] = inf_index(target, "omega")?;
    }

    let semigroup = FiniteSemigroup::new(file.splus.clone(), mult)?;
    let algebra = WilkeAlgebra::new(semigroup, file.sinf.clone(), mixed, omega)?;

    let mut letter_image = Vec::with_capacity(alphabet.len());
    for &c in alphabet.letters() {
        let name = file
            .letters
            .get(&c.to_string())
            .ok_or_else(|| StructureError::UnknownId(c.to_string(), "letters".into()))?;
        letter_image.push(PlusElem(plus_index(name, "letters")?));
    }

    let morphism = Arc::new(OmegaMorphism::new(alphabet, algebra, letter_image)?);

    let mut languages = BTreeMap::new();
    for (name, def) in &file.languages {
        let mut accept = std::collections::BTreeSet::new();
        for id in &def.accept {
            let idx = morphism
                .algebra()
                .inf_index_of(id)
                .ok_or_else(|| MorphismError::UnknownAcceptElement(id.clone()))?;
            accept.insert(idx);
        }
        languages.insert(
            name.clone(),
            RecognizedLanguage {
                name: name.clone(),
                morphism: Arc::clone(&morphism),
                accept: AcceptSet::Inf(accept),
            },
        );
    }

    Ok(AlgebraDocument {
        morphism,
        languages,
    })
}

/// Serializes a morphism (and named accept sets) back to the file format.
pub fn render_algebra(
    m: &OmegaMorphism,
    languages: &BTreeMap<String, Vec<String>>,
) -> String {
    let alg = m.algebra();
    let sg = alg.splus();
    let mut mult = BTreeMap::new();
    for a in sg.elems() {
        for b in sg.elems() {
            mult.insert(
                format!("{},{}", sg.name(a), sg.name(b)),
                sg.name(sg.mult(a, b)).to_string(),
            );
        }
    }
    let mut mixed = BTreeMap::new();
    for s in sg.elems() {
        for w in alg.inf_elems() {
            mixed.insert(
                format!("{},{}", sg.name(s), alg.inf_name(w)),
                alg.inf_name(alg.mixed(s, w)).to_string(),
            );
        }
    }
    let mut omega = BTreeMap::new();
    for s in sg.elems() {
        omega.insert(sg.name(s).to_string(), alg.inf_name(alg.omega(s)).to_string());
    }
    let mut letters = BTreeMap::new();
    for (i, &c) in m.alphabet().letters().iter().enumerate() {
        letters.insert(c.to_string(), sg.name(m.letter_image(i as u8)).to_string());
    }
    let file = AlgebraFile {
        alphabet: m.alphabet().letters().iter().map(|c| c.to_string()).collect(),
        splus: sg.names().to_vec(),
        sinf: alg.inf_names().to_vec(),
        mult,
        mixed,
        omega,
        letters,
        languages: languages
            .iter()
            .map(|(k, v)| (k.clone(), LanguageDef { accept: v.clone() }))
            .collect(),
        content: None,
    };
    toml::to_string(&file).expect("algebra file serialization")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AutomatonFile {
    #[serde(default = "default_name")]
    pub name: String,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<Vec<String>>,
}

fn default_name() -> String {
    "L".to_string()
}

pub fn parse_automaton(text: &str) -> Result<BuchiAutomaton, FormatError> {
    let file: AutomatonFile = toml::from_str(text)?;
    if file.states.is_empty() {
        return Err(FormatError::NoStates);
    }
    let mut letters = Vec::with_capacity(file.alphabet.len());
    for l in &file.alphabet {
        letters.push(single_char(l)?);
    }
    let alphabet = Alphabet::new(letters)?;
    let state_index = |name: &str| -> Result<usize, FormatError> {
        file.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| FormatError::UnknownState(name.to_string()))
    };
    let initial = state_index(&file.initial)?;
    let mut accepting = vec![false; file.states.len()];
    for s in &file.accepting {
        accepting[state_index(s)?] = true;
    }
    let mut transitions = Vec::with_capacity(file.transitions.len());
    for t in &file.transitions {
        if t.len() != 3 {
            return Err(FormatError::BadTransition(t.len()));
        }
        let src = state_index(&t[0])?;
        let letter = alphabet.index_of(single_char(&t[1])?)?;
        let dst = state_index(&t[2])?;
        transitions.push((src, letter, dst));
    }
    Ok(BuchiAutomaton::new(
        file.name,
        file.states.clone(),
        alphabet,
        initial,
        accepting,
        transitions,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_files_parse() {
        for text in [
            corpus::INFA_ALG,
            corpus::EVENA_ALG,
            corpus::ALLB_ALG,
            corpus::UNIVERSAL_ALG,
        ] {
            parse_algebra(text).unwrap();
        }
        for text in [corpus::INFA_AUT, corpus::EVENA_AUT] {
            parse_automaton(text).unwrap();
        }
    }

    #[test]
    fn missing_mult_entry_is_structural_error() {
        let doc = corpus::INFA_ALG.replace("\"0,0\" = \"0\"\n", "");
        match parse_algebra(&doc) {
            Err(FormatError::Structure(StructureError::MissingMult(a, b))) => {
                assert_eq!((a.as_str(), b.as_str()), ("0", "0"));
            }
            other => panic!("expected missing-entry error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_accept_element_is_rejected() {
        let doc = corpus::INFA_ALG.replace("accept = [\"INF\"]", "accept = [\"BOGUS\"]");
        assert!(matches!(
            parse_algebra(&doc),
            Err(FormatError::Morphism(MorphismError::UnknownAcceptElement(_)))
        ));
    }

    #[test]
    fn algebra_round_trips_through_render() {
        let doc = parse_algebra(corpus::INFA_ALG).unwrap();
        let langs: BTreeMap<String, Vec<String>> = doc
            .languages
            .iter()
            .map(|(k, l)| {
                let ids = match &l.accept {
                    crate::morphism::AcceptSet::Inf(s) => s
                        .iter()
                        .map(|&w| doc.morphism.algebra().inf_name(w).to_string())
                        .collect(),
                    _ => vec![],
                };
                (k.clone(), ids)
            })
            .collect();
        let rendered = render_algebra(&doc.morphism, &langs);
        let doc2 = parse_algebra(&rendered).unwrap();
        assert_eq!(
            doc.morphism.algebra().inf_names(),
            doc2.morphism.algebra().inf_names()
        );
        assert!(doc2.morphism.algebra().validate().is_clean());
    }
}
