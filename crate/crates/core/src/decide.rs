//! Top-level decision procedures with certificates.
//!
//! Separation at levels 2 and 3 pairs the two recognizers, completes the
//! alphabet, estimates the finite-word chain sets, computes the saturation
//! set and looks for a pair hitting both accept sets. Membership for
//! Boolean combinations at level 2 quotients, completes, and combines the
//! finite alternation probe with the equation check.
//!
//! Because the finite-word chain sets are estimated, "separable" means "no
//! obstruction found with stabilized estimates"; non-separability is backed
//! where possible by machine-certified witness lassos. Verdicts carry their
//! confidence and every cap that produced them.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ef::certify::{CertOutcome, Certifier};
use crate::ef::chains::{ChainEngine, ChainSet, EstimateStatus, MixedChainSet};
use crate::ef::oracle::{CapError, OracleCaps};
use crate::morphism::{AcceptSet, MorphismError, OmegaMorphism, RecognizedLanguage};
use crate::pairing::{alphabet_completion, pair_product, CompletedMorphism, PairedMorphism};
use crate::quotient::syntactic_quotient;
use crate::sat::equation::{check_bsigma2_equation, EquationCheck};
use crate::sat::graph::{build_alternation_graph, AlternationGraph, Recursiveness};
use crate::sat::probe::{probe_alternation_finite, probe_alternation_omega, ProbeResult};
use crate::sat::sigma2::{sat_sigma2_pairs, Sigma2Decomp, Sigma2Saturation};
use crate::sat::sigma3::{sat_sigma3_pairs, Sigma3Decomp};
use crate::semigroup::OptPlus;
use crate::wilke::InfElem;
use crate::words::{LassoWord, Word};

#[derive(Debug, Error)]
pub enum DecideError {
    #[error("languages are over different alphabets")]
    AlphabetMismatch,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Cap(#[from] CapError),
    #[error("chain witness missing for tuple {0}")]
    MissingWitness(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct DecideConfig {
    pub rank_cap: u8,
    pub len_cap: usize,
    pub window: usize,
    pub n_cap: usize,
    pub witness_ranks: Vec<u8>,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            rank_cap: 3,
            len_cap: 8,
            window: 2,
            n_cap: 3,
            witness_ranks: vec![1, 2, 3],
        }
    }
}

impl DecideConfig {
    pub fn schedule(&self, alphabet_len: usize) -> Vec<(u8, usize)> {
        ChainEngine::default_schedule(alphabet_len, self.rank_cap, self.len_cap)
    }

    /// Oracle caps wide enough for both chain estimation and witness
    /// certification (certifier prefixes can exceed the enumeration cap).
    pub fn oracle_caps(&self) -> OracleCaps {
        OracleCaps {
            max_rank: self.rank_cap.max(4),
            max_len: self.len_cap.max(24),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Problem {
    Sigma2Separation,
    Sigma3Separation,
    BSigma2Membership,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Answer {
    Separable,
    NotSeparable,
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Confidence {
    Certified,
    Empirical { notes: Vec<String> },
}

impl Confidence {
    pub fn is_certified(&self) -> bool {
        matches!(self, Confidence::Certified)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub rank: u8,
    pub w1: String,
    pub w2: String,
    pub certified: bool,
    pub derivation: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub enum Certificate {
    /// A saturation pair meeting both accept sets, with its decomposition
    /// and the generated witness lassos per rank.
    SeparationObstruction {
        pair: (String, String),
        decomposition: String,
        witnesses: Vec<WitnessReport>,
    },
    /// No saturation pair meets the accept sets at the stated caps.
    NoObstructionAtCaps { statuses: Vec<String> },
    /// Membership analysis payload: equation result and probe result, plus
    /// the graph diagnostics.
    MembershipAnalysis {
        equation_holds: bool,
        equation_counterexample: Option<[String; 4]>,
        alternating_pairs: Vec<(String, String)>,
        graph_recursive: bool,
        diagnostics_consistent: bool,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub schema: u32,
    pub problem: Problem,
    pub inputs: Vec<String>,
    pub answer: Answer,
    pub confidence: Confidence,
    pub rank_cap: u8,
    pub len_cap: usize,
    pub window: usize,
    pub n_cap: usize,
    pub certificate: Certificate,
}

impl Verdict {
    /// Exit code contract: 0 for certified/stabilized reports, 2 for
    /// empirical or inconclusive ones.
    pub fn exit_code(&self) -> i32 {
        if self.confidence.is_certified() {
            0
        } else {
            2
        }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

fn status_note(status: &EstimateStatus) -> String {
    match status {
        EstimateStatus::ExactAtRank { rank, len_cap } => {
            format!("exact-at-rank({rank},{len_cap})")
        }
        EstimateStatus::Stabilized {
            first_stable_rank,
            window,
        } => format!("stabilized({first_stable_rank},window={window})"),
        EstimateStatus::Unstable => "unstable".into(),
    }
}

/// The separation pipeline state retained for inspection and reporting.
pub struct SeparationOutcome {
    pub verdict: Verdict,
    pub paired: PairedMorphism,
    pub completed: CompletedMorphism,
    pub chain: ChainSet,
    pub mixed: Option<MixedChainSet>,
    pub sat_pairs: BTreeSet<(InfElem, InfElem)>,
    pub obstruction: Option<(InfElem, InfElem)>,
    pub witnesses: Vec<(u8, LassoWord, LassoWord, CertOutcome)>,
}

/// Builds the common alphabet-compatible morphism and the lifted accept
/// sets for a separation query.
fn separation_pipeline(
    l1: &RecognizedLanguage,
    l2: &RecognizedLanguage,
) -> Result<
    (
        PairedMorphism,
        CompletedMorphism,
        BTreeSet<InfElem>,
        BTreeSet<InfElem>,
    ),
    DecideError,
> {
    if l1.morphism.alphabet() != l2.morphism.alphabet() {
        return Err(DecideError::AlphabetMismatch);
    }
    let paired = pair_product(&l1.morphism, &l2.morphism)?;
    let completed = alphabet_completion(&paired.morphism)?;
    let f1 = completed.lift_inf(&paired.lift_inf_left(l1.accept_inf()?));
    let f2 = completed.lift_inf(&paired.lift_inf_right(l2.accept_inf()?));
    Ok((paired, completed, f1, f2))
}

/// Is `L1` separable from `L2` by a level-2 sentence-definable language?
/// The query order matters: the level is not closed under complement.
pub fn separability_sigma2(
    l1: &RecognizedLanguage,
    l2: &RecognizedLanguage,
    config: &DecideConfig,
) -> Result<SeparationOutcome, DecideError> {
    let (paired, completed, f1, f2) = separation_pipeline(l1, l2)?;
    let m = completed.morphism.clone();
    let alphabet_len = m.alphabet().len();
    let mut engine = ChainEngine::new(alphabet_len, config.oracle_caps());
    let schedule = config.schedule(alphabet_len);
    let chain = engine.estimate_chains(2, 2, &m, &schedule, config.window)?;
    let sat = sat_sigma2_pairs(&m, &chain, m.infinite_image());

    let obstruction = sat
        .pairs
        .iter()
        .find(|(a, b)| f1.contains(a) && f2.contains(b))
        .copied();

    let mut witnesses = Vec::new();
    let mut all_certified = true;
    if let Some(pair) = obstruction {
        let decomp = sat.decomp[&pair].clone();
        for &k in &config.witness_ranks {
            let (w1, w2, cert) =
                make_sigma2_witnesses(&mut engine, &m, &chain, &decomp, k)?;
            all_certified &= cert.is_proved();
            witnesses.push((k, w1, w2, cert));
        }
    }

    let answer = if obstruction.is_some() {
        Answer::NotSeparable
    } else {
        Answer::Separable
    };
    let mut notes = Vec::new();
    if !chain.status.is_stabilized() {
        notes.push(format!("chain pairs {}", status_note(&chain.status)));
    }
    if obstruction.is_some() && !all_certified {
        notes.push("witness certification incomplete".into());
    }
    let confidence = if notes.is_empty() {
        Confidence::Certified
    } else {
        Confidence::Empirical { notes }
    };

    let verdict = Verdict {
        schema: SCHEMA_VERSION,
        problem: Problem::Sigma2Separation,
        inputs: vec![l1.name.clone(), l2.name.clone()],
        answer,
        confidence,
        rank_cap: config.rank_cap,
        len_cap: config.len_cap,
        window: config.window,
        n_cap: config.n_cap,
        certificate: separation_certificate(&m, &sat_statuses_sigma2(&sat), obstruction, &witnesses),
    };
    Ok(SeparationOutcome {
        verdict,
        paired,
        completed,
        chain,
        mixed: None,
        sat_pairs: sat.pairs,
        obstruction,
        witnesses,
    })
}

fn sat_statuses_sigma2(sat: &Sigma2Saturation) -> Vec<EstimateStatus> {
    vec![sat.input_status]
}

fn separation_certificate(
    m: &OmegaMorphism,
    statuses: &[EstimateStatus],
    obstruction: Option<(InfElem, InfElem)>,
    witnesses: &[(u8, LassoWord, LassoWord, CertOutcome)],
) -> Certificate {
    match obstruction {
        Some((a, b)) => Certificate::SeparationObstruction {
            pair: (
                m.algebra().inf_name(a).to_string(),
                m.algebra().inf_name(b).to_string(),
            ),
            decomposition: "see witnesses".into(),
            witnesses: witnesses
                .iter()
                .map(|(k, w1, w2, cert)| WitnessReport {
                    rank: *k,
                    w1: m.alphabet().render_lasso(w1),
                    w2: m.alphabet().render_lasso(w2),
                    certified: cert.is_proved(),
                    derivation: match cert {
                        CertOutcome::Proved(d) => Some(d.describe()),
                        CertOutcome::Unknown => None,
                    },
                })
                .collect(),
        },
        None => Certificate::NoObstructionAtCaps {
            statuses: statuses.iter().map(status_note).collect(),
        },
    }
}

/// Builds the witness lassos of a level-2 saturation decomposition at rank
/// `k`: `w1 = x₁(y₁)^∞` and `w2 = x₂·y₂^(2^k·ω)·v`, and certifies
/// `w1 <=_{2,k} w2`.
pub fn make_sigma2_witnesses(
    engine: &mut ChainEngine,
    m: &OmegaMorphism,
    chain: &ChainSet,
    decomp: &Sigma2Decomp,
    k: u8,
) -> Result<(LassoWord, LassoWord, CertOutcome), DecideError> {
    let (x1, x2) = prefix_words(m, chain, decomp.r)?;
    let key = vec![decomp.s.0, decomp.s.1];
    let ys = chain
        .witnesses
        .get(&key)
        .ok_or_else(|| DecideError::MissingWitness(format!("{key:?}")))?;
    let (y1, y2) = (ys[0].clone(), ys[1].clone());
    let v = m
        .inf_witness(decomp.t2)
        .ok_or_else(|| DecideError::MissingWitness("t2 preimage".into()))?
        .clone();

    let exp = m.algebra().splus().idempotent_exponent();
    let copies = (1usize << k) * exp;
    let w1 = LassoWord::new(x1, y1).expect("loop words are nonempty");
    let w2 = v.with_prefix(&x2.concat(&y2.repeat(copies)));
    let cert = Certifier::new(engine.oracle_mut()).certify(2, k, &w1, &w2);
    Ok((w1, w2, cert))
}

fn prefix_words(
    m: &OmegaMorphism,
    chain: &ChainSet,
    r: (OptPlus, OptPlus),
) -> Result<(Word, Word), DecideError> {
    match r {
        (OptPlus::Unit, OptPlus::Unit) => Ok((Word::default(), Word::default())),
        (OptPlus::Elem(r1), OptPlus::Elem(r2)) => {
            let key = vec![r1, r2];
            let xs = chain
                .witnesses
                .get(&key)
                .ok_or_else(|| DecideError::MissingWitness(format!("{key:?}")))?;
            Ok((xs[0].clone(), xs[1].clone()))
        }
        _ => {
            let _ = m;
            Err(DecideError::MissingWitness("mixed unit prefix".into()))
        }
    }
}

/// Level-3 separation: same driver over level-3 chain pairs, mixed chains
/// and the level-3 saturation set.
pub fn separability_sigma3(
    l1: &RecognizedLanguage,
    l2: &RecognizedLanguage,
    config: &DecideConfig,
) -> Result<SeparationOutcome, DecideError> {
    let (paired, completed, f1, f2) = separation_pipeline(l1, l2)?;
    let m = completed.morphism.clone();
    let alphabet_len = m.alphabet().len();
    let mut engine = ChainEngine::new(alphabet_len, config.oracle_caps());
    let schedule = config.schedule(alphabet_len);
    let pairs3 = engine.estimate_chains(3, 2, &m, &schedule, config.window)?;
    let mixed = engine.estimate_mixed_chains(&m, &schedule, config.window)?;
    let sat = sat_sigma3_pairs(&m, &pairs3, &mixed);

    let obstruction = sat
        .pairs
        .iter()
        .find(|(a, b)| f1.contains(a) && f2.contains(b))
        .copied();

    let mut witnesses = Vec::new();
    let mut all_certified = true;
    if let Some(pair) = obstruction {
        let decomp = sat.decomp[&pair].clone();
        for &k in &config.witness_ranks {
            let (w2, w3, cert) =
                make_sigma3_witnesses(&mut engine, &m, &pairs3, &mixed, &decomp, k)?;
            all_certified &= cert.is_proved();
            witnesses.push((k, w2, w3, cert));
        }
    }

    let answer = if obstruction.is_some() {
        Answer::NotSeparable
    } else {
        Answer::Separable
    };
    let mut notes = Vec::new();
    for (label, status) in [("level-3 pairs", pairs3.status), ("mixed chains", mixed.status)] {
        if !status.is_stabilized() {
            notes.push(format!("{label} {}", status_note(&status)));
        }
    }
    if obstruction.is_some() && !all_certified {
        notes.push("witness certification incomplete".into());
    }
    let confidence = if notes.is_empty() {
        Confidence::Certified
    } else {
        Confidence::Empirical { notes }
    };

    let statuses: Vec<EstimateStatus> = sat.input_status.clone();
    let verdict = Verdict {
        schema: SCHEMA_VERSION,
        problem: Problem::Sigma3Separation,
        inputs: vec![l1.name.clone(), l2.name.clone()],
        answer,
        confidence,
        rank_cap: config.rank_cap,
        len_cap: config.len_cap,
        window: config.window,
        n_cap: config.n_cap,
        certificate: separation_certificate(&m, &statuses, obstruction, &witnesses),
    };
    Ok(SeparationOutcome {
        verdict,
        paired,
        completed,
        chain: pairs3,
        mixed: Some(mixed),
        sat_pairs: sat.pairs,
        obstruction,
        witnesses,
    })
}

/// Level-3 witnesses: `w2 = x₂(y₂·z₂^(2^k·ω))^∞` and
/// `w3 = x₃(y₃·z₃^(2^k·ω))^(2^k·ω)·y₁·(z₁)^∞`.
pub fn make_sigma3_witnesses(
    engine: &mut ChainEngine,
    m: &OmegaMorphism,
    pairs3: &ChainSet,
    mixed: &MixedChainSet,
    decomp: &Sigma3Decomp,
    k: u8,
) -> Result<(LassoWord, LassoWord, CertOutcome), DecideError> {
    let (x2, x3) = prefix_words(m, pairs3, decomp.r)?;
    let ys = mixed
        .witnesses
        .get(&decomp.s)
        .ok_or_else(|| DecideError::MissingWitness(format!("{:?}", decomp.s)))?;
    let zs = mixed
        .witnesses
        .get(&decomp.t)
        .ok_or_else(|| DecideError::MissingWitness(format!("{:?}", decomp.t)))?;
    let (y1, y2, y3) = (ys[0].clone(), ys[1].clone(), ys[2].clone());
    let (z1, z2, z3) = (zs[0].clone(), zs[1].clone(), zs[2].clone());

    let exp = m.algebra().splus().idempotent_exponent();
    let copies = (1usize << k) * exp;
    let u2 = y2.concat(&z2.repeat(copies));
    let u3 = y3.concat(&z3.repeat(copies));
    let w2 = LassoWord::new(x2, u2).expect("loop nonempty");
    let w3 = LassoWord::new(x3.concat(&u3.repeat(copies)).concat(&y1), z1)
        .expect("loop nonempty");
    let cert = Certifier::new(engine.oracle_mut()).certify(3, k, &w2, &w3);
    Ok((w2, w3, cert))
}

/// Membership pipeline state.
pub struct MembershipOutcome {
    pub verdict: Verdict,
    pub pipeline_morphism: Arc<OmegaMorphism>,
    pub chain: ChainSet,
    pub equation: EquationCheck,
    pub probe_finite: ProbeResult<crate::semigroup::PlusElem>,
    pub probe_omega: Option<ProbeResult<InfElem>>,
    pub graph: AlternationGraph,
    pub recursiveness: Recursiveness,
}

/// Is the ω-language a Boolean combination of level-2 sentences? Decided on
/// the alphabet completion of the syntactic quotient: member iff the finite
/// probe finds no alternating pair and the equation holds.
pub fn membership_bsigma2(
    lang: &RecognizedLanguage,
    config: &DecideConfig,
) -> Result<MembershipOutcome, DecideError> {
    let quotient = syntactic_quotient(lang)?;
    let quotient_lang = RecognizedLanguage {
        name: lang.name.clone(),
        morphism: Arc::new(quotient.morphism.clone()),
        accept: AcceptSet::Inf(quotient.accept.clone()),
    };
    let completed = alphabet_completion(&quotient_lang.morphism)?;
    let m = Arc::new(completed.morphism.clone());

    let alphabet_len = m.alphabet().len();
    let mut engine = ChainEngine::new(alphabet_len, config.oracle_caps());
    let schedule = config.schedule(alphabet_len);
    let chain = engine.estimate_chains(2, 2, &m, &schedule, config.window)?;
    let (final_rank, final_len) = *schedule.last().unwrap();

    let probe_fin = probe_alternation_finite(
        &mut engine,
        &m,
        config.n_cap,
        final_rank,
        final_len,
        chain.status,
    )?;
    let equation = check_bsigma2_equation(&m, &chain);

    let answer = if !probe_fin.found_alternation() && equation.holds {
        Answer::Member
    } else {
        Answer::NonMember
    };

    // Diagnostics: the graph must not be recursive when the equation holds;
    // bounded finite probe plus a non-recursive graph must give an empty
    // omega-level probe.
    let graph = build_alternation_graph(&m, &chain);
    let recursiveness = graph.is_recursive();
    let mut diagnostics_consistent = true;
    if equation.holds && recursiveness.is_recursive() {
        diagnostics_consistent = false;
    }
    let probe_omega = if !probe_fin.found_alternation() && !recursiveness.is_recursive() {
        let po = probe_alternation_omega(
            &mut engine,
            &m,
            config.n_cap,
            final_rank,
            final_len,
            chain.status,
        )?;
        if po.found_alternation() {
            diagnostics_consistent = false;
        }
        Some(po)
    } else {
        None
    };

    let mut notes = Vec::new();
    if !chain.status.is_stabilized() {
        notes.push(format!("chain pairs {}", status_note(&chain.status)));
    }
    if !diagnostics_consistent {
        notes.push("graph diagnostics disagree with probe/equation".into());
    }
    if answer == Answer::NonMember && probe_fin.found_alternation() {
        // Alternation evidence is bounded by the cap.
        notes.push(format!("alternating pair evidence at n_cap={}", config.n_cap));
    }
    let confidence = if notes.is_empty() {
        Confidence::Certified
    } else {
        Confidence::Empirical { notes }
    };

    let sg = m.algebra().splus();
    let verdict = Verdict {
        schema: SCHEMA_VERSION,
        problem: Problem::BSigma2Membership,
        inputs: vec![lang.name.clone()],
        answer,
        confidence,
        rank_cap: config.rank_cap,
        len_cap: config.len_cap,
        window: config.window,
        n_cap: config.n_cap,
        certificate: Certificate::MembershipAnalysis {
            equation_holds: equation.holds,
            equation_counterexample: equation.counterexample.map(|(s1, s2, t1, t2)| {
                [
                    sg.name(s1).to_string(),
                    sg.name(s2).to_string(),
                    sg.name(t1).to_string(),
                    sg.name(t2).to_string(),
                ]
            }),
            alternating_pairs: probe_fin
                .survivors
                .iter()
                .map(|&(s, t)| (sg.name(s).to_string(), sg.name(t).to_string()))
                .collect(),
            graph_recursive: recursiveness.is_recursive(),
            diagnostics_consistent,
        },
    };
    Ok(MembershipOutcome {
        verdict,
        pipeline_morphism: m,
        chain,
        equation,
        probe_finite: probe_fin,
        probe_omega,
        graph,
        recursiveness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn cfg() -> DecideConfig {
        DecideConfig::default()
    }

    #[test]
    fn fin_is_sigma2_separable_from_inf() {
        let doc = corpus::infa();
        let out = separability_sigma2(
            doc.language("FIN").unwrap(),
            doc.language("INF").unwrap(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(out.verdict.answer, Answer::Separable);
        assert!(out.verdict.confidence.is_certified());
    }

    #[test]
    fn inf_is_not_sigma2_separable_from_fin() {
        let doc = corpus::infa();
        let out = separability_sigma2(
            doc.language("INF").unwrap(),
            doc.language("FIN").unwrap(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(out.verdict.answer, Answer::NotSeparable);
        assert!(out.verdict.confidence.is_certified());
        let (a, b) = out.obstruction.unwrap();
        let m = &out.completed.morphism;
        assert_eq!(m.algebra().inf_name(a), "((INF,INF),{a,b})");
        assert_eq!(m.algebra().inf_name(b), "((FIN,FIN),{a,b})");
    }

    #[test]
    fn same_language_is_never_separable_from_itself() {
        let doc = corpus::infa();
        let out = separability_sigma2(
            doc.language("INF").unwrap(),
            doc.language("INF").unwrap(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(out.verdict.answer, Answer::NotSeparable);
    }

    #[test]
    fn inf_is_sigma3_separable_from_fin() {
        let doc = corpus::infa();
        let out = separability_sigma3(
            doc.language("INF").unwrap(),
            doc.language("FIN").unwrap(),
            &cfg(),
        )
        .unwrap();
        assert_eq!(out.verdict.answer, Answer::Separable);
    }

    #[test]
    fn inf_is_a_bsigma2_member() {
        let doc = corpus::infa();
        let out = membership_bsigma2(doc.language("INF").unwrap(), &cfg()).unwrap();
        assert_eq!(out.verdict.answer, Answer::Member);
    }

    #[test]
    fn evena_is_not_a_bsigma2_member() {
        let doc = corpus::evena();
        let out = membership_bsigma2(doc.language("EVENA").unwrap(), &cfg()).unwrap();
        assert_eq!(out.verdict.answer, Answer::NonMember);
        assert!(out.probe_finite.found_alternation());
    }

    #[test]
    fn universal_language_is_a_member() {
        let doc = corpus::universal();
        let out = membership_bsigma2(doc.language("ALL").unwrap(), &cfg()).unwrap();
        assert_eq!(out.verdict.answer, Answer::Member);
    }
}
