//! Syntactic quotienting of a recognized ω-language.
//!
//! Two finite-part elements are merged when no context over the algebra can
//! tell them apart with respect to the accept set: contexts are `x·s·y·w`
//! with `x, y` reachable-or-absent and `w` a reachable infinite element, and
//! the ω-contexts `x·(s·y)^∞`. Infinite elements are merged when `x·w ∈ F`
//! agrees for every reachable-or-absent `x`. Unreachable elements are
//! dropped before quotienting.

use std::collections::BTreeSet;

use crate::morphism::{AcceptSet, MorphismError, OmegaMorphism, RecognizedLanguage};
use crate::semigroup::{FiniteSemigroup, OptPlus, PlusElem};
use crate::wilke::{InfElem, WilkeAlgebra};

/// The quotient morphism, the projected accept set, and the class maps from
/// reachable elements of the original morphism.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub morphism: OmegaMorphism,
    pub accept: BTreeSet<InfElem>,
    pub plus_class: Vec<Option<PlusElem>>,
    pub inf_class: Vec<Option<InfElem>>,
}

pub fn syntactic_quotient(lang: &RecognizedLanguage) -> Result<QuotientResult, MorphismError> {
    let m = &lang.morphism;
    let alg = m.algebra();
    let sg = alg.splus();
    let accept = match &lang.accept {
        AcceptSet::Inf(s) => s,
        AcceptSet::Plus(_) => {
            return Err(MorphismError::NotOmegaLanguage(lang.name.clone()));
        }
    };

    let reach: Vec<PlusElem> = m.reachable_plus().to_vec();
    let inf_image: Vec<InfElem> = m.infinite_image().to_vec();
    let mut contexts: Vec<OptPlus> = vec![OptPlus::Unit];
    contexts.extend(reach.iter().copied().map(OptPlus::Elem));

    // Signature of a finite element: the accept pattern of all word contexts
    // and all ω-contexts.
    let plus_signature = |s: PlusElem| -> Vec<bool> {
        let mut sig = Vec::new();
        for &x in &contexts {
            for &y in &contexts {
                let sy = match y {
                    OptPlus::Unit => s,
                    OptPlus::Elem(e) => sg.mult(s, e),
                };
                let xsy = sg.mult_opt(x, sy);
                for &w in &inf_image {
                    sig.push(accept.contains(&alg.mixed(xsy, w)));
                }
                sig.push(accept.contains(&alg.mixed_opt(x, alg.omega(sy))));
            }
        }
        sig
    };
    let inf_signature = |w: InfElem| -> Vec<bool> {
        contexts
            .iter()
            .map(|&x| accept.contains(&alg.mixed_opt(x, w)))
            .collect()
    };

    // Group reachable elements by signature, first occurrence fixing class
    // order.
    let mut plus_class: Vec<Option<PlusElem>> = vec![None; sg.len()];
    let mut plus_reps: Vec<PlusElem> = Vec::new();
    let mut plus_members: Vec<Vec<PlusElem>> = Vec::new();
    let mut sigs: Vec<Vec<bool>> = Vec::new();
    for &s in &reach {
        let sig = plus_signature(s);
        let class = match sigs.iter().position(|x| *x == sig) {
            Some(i) => i,
            None => {
                sigs.push(sig);
                plus_reps.push(s);
                plus_members.push(Vec::new());
                sigs.len() - 1
            }
        };
        plus_members[class].push(s);
        plus_class[s.0] = Some(PlusElem(class));
    }

    let mut inf_class: Vec<Option<InfElem>> = vec![None; alg.inf_len()];
    let mut inf_reps: Vec<InfElem> = Vec::new();
    let mut inf_members: Vec<Vec<InfElem>> = Vec::new();
    let mut inf_sigs: Vec<Vec<bool>> = Vec::new();
    for &w in &inf_image {
        let sig = inf_signature(w);
        let class = match inf_sigs.iter().position(|x| *x == sig) {
            Some(i) => i,
            None => {
                inf_sigs.push(sig);
                inf_reps.push(w);
                inf_members.push(Vec::new());
                inf_sigs.len() - 1
            }
        };
        inf_members[class].push(w);
        inf_class[w.0] = Some(InfElem(class));
    }

    let np = plus_reps.len();
    let ni = inf_reps.len();

    let class_name = |members: &[PlusElem]| -> String {
        members
            .iter()
            .map(|&e| sg.name(e))
            .collect::<Vec<_>>()
            .join("+")
    };
    let inf_class_name = |members: &[InfElem]| -> String {
        members
            .iter()
            .map(|&w| alg.inf_name(w))
            .collect::<Vec<_>>()
            .join("+")
    };

    let mut mult = vec![0usize; np * np];
    for i in 0..np {
        for j in 0..np {
            let prod = sg.mult(plus_reps[i], plus_reps[j]);
            mult[i * np + j] = plus_class[prod.0].expect("products of reachable are reachable").0;
        }
    }
    let mut mixed = vec![0usize; np * ni];
    for i in 0..np {
        for j in 0..ni {
            let prod = alg.mixed(plus_reps[i], inf_reps[j]);
            mixed[i * ni + j] = inf_class[prod.0]
                .expect("mixed products of reachable are reachable")
                .0;
        }
    }
    let mut omega = vec![0usize; np];
    for i in 0..np {
        let o = alg.omega(plus_reps[i]);
        omega[i] = inf_class[o.0].expect("omega powers of reachable are reachable").0;
    }

    let plus_names: Vec<String> = plus_members.iter().map(|m| class_name(m)).collect();
    let inf_names: Vec<String> = inf_members.iter().map(|m| inf_class_name(m)).collect();
    let semigroup = FiniteSemigroup::new(plus_names, mult).expect("quotient semigroup tables");
    let algebra =
        WilkeAlgebra::new(semigroup, inf_names, mixed, omega).expect("quotient algebra tables");

    let letter_image: Vec<PlusElem> = (0..m.alphabet().len() as u8)
        .map(|c| plus_class[m.letter_image(c).0].expect("letters are reachable"))
        .collect();
    let morphism = OmegaMorphism::new(m.alphabet().clone(), algebra, letter_image)?;

    let accept_classes: BTreeSet<InfElem> = accept
        .iter()
        .filter_map(|&w| inf_class[w.0])
        .collect();

    Ok(QuotientResult {
        morphism,
        accept: accept_classes,
        plus_class,
        inf_class,
    })
}
