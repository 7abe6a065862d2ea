//! Rendering of verdicts: a human-readable text form and a structured TOML
//! form with a stable schema version. Both are byte-reproducible for a
//! fixed configuration; timing is only attached on request.

use std::fmt::Write as _;

use crate::decide::{Answer, Certificate, Confidence, Problem, Verdict};

pub fn answer_str(a: Answer) -> &'static str {
    match a {
        Answer::Separable => "separable",
        Answer::NotSeparable => "not-separable",
        Answer::Member => "member",
        Answer::NonMember => "non-member",
        Answer::Inconclusive => "inconclusive",
    }
}

pub fn problem_str(p: Problem) -> &'static str {
    match p {
        Problem::Sigma2Separation => "sigma2-separation",
        Problem::Sigma3Separation => "sigma3-separation",
        Problem::BSigma2Membership => "bsigma2-membership",
    }
}

pub fn render_text(v: &Verdict, timing_ms: Option<u128>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem: {}", problem_str(v.problem));
    let _ = writeln!(out, "inputs: {}", v.inputs.join(", "));
    let _ = writeln!(out, "answer: {}", answer_str(v.answer));
    match &v.confidence {
        Confidence::Certified => {
            let _ = writeln!(out, "confidence: certified");
        }
        Confidence::Empirical { notes } => {
            let _ = writeln!(out, "confidence: empirical ({})", notes.join("; "));
        }
    }
    let _ = writeln!(
        out,
        "caps: rank={} len={} window={} n_cap={}",
        v.rank_cap, v.len_cap, v.window, v.n_cap
    );
    match &v.certificate {
        Certificate::SeparationObstruction {
            pair,
            decomposition,
            witnesses,
        } => {
            let _ = writeln!(out, "certificate: saturation pair ({}, {})", pair.0, pair.1);
            let _ = writeln!(out, "decomposition: {decomposition}");
            for w in witnesses {
                let _ = writeln!(
                    out,
                    "witness rank {}: {} <= {} [{}{}]",
                    w.rank,
                    w.w1,
                    w.w2,
                    if w.certified { "proved" } else { "unknown" },
                    w.derivation
                        .as_deref()
                        .map(|d| format!(": {d}"))
                        .unwrap_or_default()
                );
            }
        }
        Certificate::NoObstructionAtCaps { statuses } => {
            let _ = writeln!(
                out,
                "certificate: no obstruction found at caps ({})",
                statuses.join(", ")
            );
        }
        Certificate::MembershipAnalysis {
            equation_holds,
            equation_counterexample,
            alternating_pairs,
            graph_recursive,
            diagnostics_consistent,
        } => {
            let _ = writeln!(out, "equation: {}", if *equation_holds { "holds" } else { "fails" });
            if let Some([s1, s2, t1, t2]) = equation_counterexample {
                let _ = writeln!(out, "equation counterexample: s1={s1} s2={s2} t1={t1} t2={t2}");
            }
            if alternating_pairs.is_empty() {
                let _ = writeln!(out, "alternating pairs: none up to cap");
            } else {
                for (s, t) in alternating_pairs {
                    let _ = writeln!(out, "alternating pair: ({s}, {t})");
                }
            }
            let _ = writeln!(
                out,
                "graph: {}",
                if *graph_recursive { "recursive" } else { "not recursive" }
            );
            let _ = writeln!(
                out,
                "diagnostics: {}",
                if *diagnostics_consistent { "consistent" } else { "inconsistent" }
            );
        }
    }
    if let Some(ms) = timing_ms {
        let _ = writeln!(out, "timing_ms: {ms}");
    }
    out
}

pub fn render_structured(v: &Verdict, timing_ms: Option<u128>) -> String {
    #[derive(serde::Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        verdict: &'a Verdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        timing_ms: Option<u128>,
    }
    toml::to_string(&Doc {
        verdict: v,
        timing_ms,
    })
    .expect("verdict serialization")
}
