//! Product and completion constructions on morphisms.
//!
//! `pair_product` builds the reachable part of the componentwise product of
//! two morphisms over the same alphabet; accept sets lift through cylinder
//! projections. `alphabet_completion` adjoins the content coordinate
//! (product with the union semigroup on letter sets) when the input is not
//! already alphabet compatible.
//!
//! All generate-and-close worklists run in first-seen order so element ids
//! are reproducible.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::morphism::{MorphismError, OmegaMorphism};
use crate::semigroup::{FiniteSemigroup, PlusElem};
use crate::wilke::{InfElem, WilkeAlgebra};
use crate::words::LetterSet;

/// The product morphism together with the coordinate projections needed to
/// lift accept sets.
#[derive(Debug, Clone)]
pub struct PairedMorphism {
    pub morphism: OmegaMorphism,
    pub plus_proj: Vec<(PlusElem, PlusElem)>,
    pub inf_proj: Vec<(InfElem, InfElem)>,
}

impl PairedMorphism {
    pub fn lift_inf_left(&self, accept: &BTreeSet<InfElem>) -> BTreeSet<InfElem> {
        self.inf_proj
            .iter()
            .enumerate()
            .filter(|(_, (l, _))| accept.contains(l))
            .map(|(i, _)| InfElem(i))
            .collect()
    }

    pub fn lift_inf_right(&self, accept: &BTreeSet<InfElem>) -> BTreeSet<InfElem> {
        self.inf_proj
            .iter()
            .enumerate()
            .filter(|(_, (_, r))| accept.contains(r))
            .map(|(i, _)| InfElem(i))
            .collect()
    }
}

pub fn pair_product(
    m0: &OmegaMorphism,
    m1: &OmegaMorphism,
) -> Result<PairedMorphism, MorphismError> {
    if m0.alphabet() != m1.alphabet() {
        return Err(MorphismError::Word(crate::words::WordError::UnknownLetter(
            '?',
        )));
    }
    let a0 = m0.algebra();
    let a1 = m1.algebra();
    let alphabet = m0.alphabet().clone();

    // Finite part: closure of the paired letter images under products.
    let mut plus_pairs: Vec<(PlusElem, PlusElem)> = Vec::new();
    let mut plus_index: HashMap<(PlusElem, PlusElem), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut letter_image = Vec::with_capacity(alphabet.len());
    for c in 0..alphabet.len() as u8 {
        let pair = (m0.letter_image(c), m1.letter_image(c));
        let id = *plus_index.entry(pair).or_insert_with(|| {
            plus_pairs.push(pair);
            queue.push_back(plus_pairs.len() - 1);
            plus_pairs.len() - 1
        });
        letter_image.push(PlusElem(id));
    }
    while let Some(i) = queue.pop_front() {
        let mut j = 0;
        while j < plus_pairs.len() {
            for (x, y) in [(i, j), (j, i)] {
                let (xl, xr) = plus_pairs[x];
                let (yl, yr) = plus_pairs[y];
                let pair = (a0.splus().mult(xl, yl), a1.splus().mult(xr, yr));
                if !plus_index.contains_key(&pair) {
                    plus_index.insert(pair, plus_pairs.len());
                    plus_pairs.push(pair);
                    queue.push_back(plus_pairs.len() - 1);
                }
            }
            j += 1;
        }
    }

    let np = plus_pairs.len();
    let mut mult = vec![0usize; np * np];
    for i in 0..np {
        for j in 0..np {
            let pair = (
                a0.splus().mult(plus_pairs[i].0, plus_pairs[j].0),
                a1.splus().mult(plus_pairs[i].1, plus_pairs[j].1),
            );
            mult[i * np + j] = plus_index[&pair];
        }
    }

    // Infinite part: omega-powers of every finite pair, closed under mixed
    // products with finite pairs.
    let mut inf_pairs: Vec<(InfElem, InfElem)> = Vec::new();
    let mut inf_index: HashMap<(InfElem, InfElem), usize> = HashMap::new();
    let mut inf_queue = VecDeque::new();
    for &(l, r) in &plus_pairs {
        let pair = (a0.omega(l), a1.omega(r));
        if !inf_index.contains_key(&pair) {
            inf_index.insert(pair, inf_pairs.len());
            inf_pairs.push(pair);
            inf_queue.push_back(inf_pairs.len() - 1);
        }
    }
    while let Some(i) = inf_queue.pop_front() {
        let (wl, wr) = inf_pairs[i];
        for &(l, r) in &plus_pairs {
            let pair = (a0.mixed(l, wl), a1.mixed(r, wr));
            if !inf_index.contains_key(&pair) {
                inf_index.insert(pair, inf_pairs.len());
                inf_pairs.push(pair);
                inf_queue.push_back(inf_pairs.len() - 1);
            }
        }
    }

    let ni = inf_pairs.len();
    let mut mixed = vec![0usize; np * ni];
    for i in 0..np {
        for j in 0..ni {
            let pair = (
                a0.mixed(plus_pairs[i].0, inf_pairs[j].0),
                a1.mixed(plus_pairs[i].1, inf_pairs[j].1),
            );
            mixed[i * ni + j] = inf_index[&pair];
        }
    }
    let mut omega = vec![0usize; np];
    for i in 0..np {
        let pair = (a0.omega(plus_pairs[i].0), a1.omega(plus_pairs[i].1));
        omega[i] = inf_index[&pair];
    }

    let plus_names: Vec<String> = plus_pairs
        .iter()
        .map(|&(l, r)| format!("({},{})", a0.splus().name(l), a1.splus().name(r)))
        .collect();
    let inf_names: Vec<String> = inf_pairs
        .iter()
        .map(|&(l, r)| format!("({},{})", a0.inf_name(l), a1.inf_name(r)))
        .collect();

    let semigroup = FiniteSemigroup::new(plus_names, mult).expect("product semigroup tables");
    let algebra =
        WilkeAlgebra::new(semigroup, inf_names, mixed, omega).expect("product algebra tables");
    let morphism = OmegaMorphism::new(alphabet, algebra, letter_image)?;

    Ok(PairedMorphism {
        morphism,
        plus_proj: plus_pairs,
        inf_proj: inf_pairs,
    })
}

/// The alphabet completion with projections back to the base morphism.
#[derive(Debug, Clone)]
pub struct CompletedMorphism {
    pub morphism: OmegaMorphism,
    /// base element of each completed finite element
    pub plus_base: Vec<PlusElem>,
    pub inf_base: Vec<InfElem>,
}

impl CompletedMorphism {
    pub fn lift_inf(&self, accept: &BTreeSet<InfElem>) -> BTreeSet<InfElem> {
        self.inf_base
            .iter()
            .enumerate()
            .filter(|(_, b)| accept.contains(b))
            .map(|(i, _)| InfElem(i))
            .collect()
    }
}

pub fn alphabet_completion(m: &OmegaMorphism) -> Result<CompletedMorphism, MorphismError> {
    if m.alphabet_compatible() {
        return Ok(CompletedMorphism {
            plus_base: (0..m.algebra().splus().len()).map(PlusElem).collect(),
            inf_base: (0..m.algebra().inf_len()).map(InfElem).collect(),
            morphism: m.clone(),
        });
    }
    let alg = m.algebra();
    let alphabet = m.alphabet().clone();

    let mut plus_elems: Vec<(PlusElem, LetterSet)> = Vec::new();
    let mut plus_index: HashMap<(PlusElem, LetterSet), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut letter_image = Vec::with_capacity(alphabet.len());
    for c in 0..alphabet.len() as u8 {
        let pair = (m.letter_image(c), LetterSet::singleton(c));
        let id = *plus_index.entry(pair).or_insert_with(|| {
            plus_elems.push(pair);
            queue.push_back(plus_elems.len() - 1);
            plus_elems.len() - 1
        });
        letter_image.push(PlusElem(id));
    }
    while let Some(i) = queue.pop_front() {
        let mut j = 0;
        while j < plus_elems.len() {
            for (x, y) in [(i, j), (j, i)] {
                let (xe, xs) = plus_elems[x];
                let (ye, ys) = plus_elems[y];
                let pair = (alg.splus().mult(xe, ye), xs.union(ys));
                if !plus_index.contains_key(&pair) {
                    plus_index.insert(pair, plus_elems.len());
                    plus_elems.push(pair);
                    queue.push_back(plus_elems.len() - 1);
                }
            }
            j += 1;
        }
    }

    let np = plus_elems.len();
    let mut mult = vec![0usize; np * np];
    for i in 0..np {
        for j in 0..np {
            let pair = (
                alg.splus().mult(plus_elems[i].0, plus_elems[j].0),
                plus_elems[i].1.union(plus_elems[j].1),
            );
            mult[i * np + j] = plus_index[&pair];
        }
    }

    // Content of an infinite power is the content of its base.
    let mut inf_elems: Vec<(InfElem, LetterSet)> = Vec::new();
    let mut inf_index: HashMap<(InfElem, LetterSet), usize> = HashMap::new();
    let mut inf_queue = VecDeque::new();
    for &(e, s) in &plus_elems {
        let pair = (alg.omega(e), s);
        if !inf_index.contains_key(&pair) {
            inf_index.insert(pair, inf_elems.len());
            inf_elems.push(pair);
            inf_queue.push_back(inf_elems.len() - 1);
        }
    }
    while let Some(i) = inf_queue.pop_front() {
        let (w, ws) = inf_elems[i];
        for &(e, es) in &plus_elems {
            let pair = (alg.mixed(e, w), es.union(ws));
            if !inf_index.contains_key(&pair) {
                inf_index.insert(pair, inf_elems.len());
                inf_elems.push(pair);
                inf_queue.push_back(inf_elems.len() - 1);
            }
        }
    }

    let ni = inf_elems.len();
    let mut mixed = vec![0usize; np * ni];
    for i in 0..np {
        for j in 0..ni {
            let pair = (
                alg.mixed(plus_elems[i].0, inf_elems[j].0),
                plus_elems[i].1.union(inf_elems[j].1),
            );
            mixed[i * ni + j] = inf_index[&pair];
        }
    }
    let mut omega = vec![0usize; np];
    for i in 0..np {
        let pair = (alg.omega(plus_elems[i].0), plus_elems[i].1);
        omega[i] = inf_index[&pair];
    }

    let plus_names: Vec<String> = plus_elems
        .iter()
        .map(|&(e, s)| format!("({},{})", alg.splus().name(e), alphabet.render_letter_set(s)))
        .collect();
    let inf_names: Vec<String> = inf_elems
        .iter()
        .map(|&(w, s)| format!("({},{})", alg.inf_name(w), alphabet.render_letter_set(s)))
        .collect();

    let semigroup = FiniteSemigroup::new(plus_names, mult).expect("completion semigroup tables");
    let algebra =
        WilkeAlgebra::new(semigroup, inf_names, mixed, omega).expect("completion algebra tables");
    let morphism = OmegaMorphism::new(alphabet, algebra, letter_image)?;

    Ok(CompletedMorphism {
        plus_base: plus_elems.iter().map(|&(e, _)| e).collect(),
        inf_base: inf_elems.iter().map(|&(w, _)| w).collect(),
        morphism,
    })
}
