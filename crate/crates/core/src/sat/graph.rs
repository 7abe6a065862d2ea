//! The alternation graph of an alphabet compatible morphism.
//!
//! Nodes are pairs of a reachable-or-absent finite element and a reachable
//! infinite element. For a letter set `B` there is a `B`-labeled edge
//! `(s₊,s∞) → (t₊,·)` when chain pairs `(p₁,p₂)`, `(q₁,q₂)` and a reachable
//! `q` exist, all of content `B`, with `s₊·p₁·q₁^∞ = s∞` and
//! `s₊·p₂·q₂^ω·q = t₊`. Edges do not depend on the target's infinite
//! coordinate. The graph is recursive when some single-label cycle carries
//! two nodes with distinct infinite coordinates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ef::chains::ChainSet;
use crate::morphism::OmegaMorphism;
use crate::semigroup::{OptPlus, PlusElem};
use crate::util::strongly_connected_components;
use crate::wilke::InfElem;
use crate::words::LetterSet;

/// The chain pairs and multiplier justifying one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWitness {
    pub p: (PlusElem, PlusElem),
    pub q: (PlusElem, PlusElem),
    pub mult: PlusElem,
}

#[derive(Debug, Clone)]
pub struct AlternationGraph {
    pub nodes: Vec<(OptPlus, InfElem)>,
    /// Per label: edges as (source node index, target finite coordinate),
    /// expanding to every node with that finite coordinate.
    pub edges: BTreeMap<LetterSet, Vec<(usize, PlusElem, EdgeWitness)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recursiveness {
    Recursive {
        label: LetterSet,
        /// Two same-cycle nodes with distinct infinite coordinates.
        witness: (usize, usize),
    },
    NotRecursive,
}

impl Recursiveness {
    pub fn is_recursive(&self) -> bool {
        matches!(self, Recursiveness::Recursive { .. })
    }
}

pub fn build_alternation_graph(m: &OmegaMorphism, pairs_plus: &ChainSet) -> AlternationGraph {
    assert!(m.alphabet_compatible(), "graph needs content");
    let alg = m.algebra();
    let sg = alg.splus();
    let exp = sg.idempotent_exponent();

    let mut plus_coords: Vec<OptPlus> = vec![OptPlus::Unit];
    plus_coords.extend(m.reachable_plus().iter().copied().map(OptPlus::Elem));
    let inf_coords: Vec<InfElem> = m.infinite_image().to_vec();

    let mut nodes = Vec::new();
    for &p in &plus_coords {
        for &w in &inf_coords {
            nodes.push((p, w));
        }
    }

    // Labels range over contents realized by reachable finite elements.
    let mut labels: Vec<LetterSet> = m
        .reachable_plus()
        .iter()
        .map(|&e| m.content_plus(e).expect("compatible"))
        .collect();
    labels.sort();
    labels.dedup();

    let mut edges: BTreeMap<LetterSet, Vec<(usize, PlusElem, EdgeWitness)>> = BTreeMap::new();
    for &label in &labels {
        let p_pairs: Vec<(PlusElem, PlusElem)> = pairs_plus
            .pairs()
            .filter(|&(p1, _)| m.content_plus(p1).expect("compatible") == label)
            .collect();
        let q_mults: Vec<PlusElem> = m
            .reachable_plus()
            .iter()
            .copied()
            .filter(|&q| m.content_plus(q).expect("compatible") == label)
            .collect();
        let mut out = Vec::new();
        for (node_idx, &(s_plus, s_inf)) in nodes.iter().enumerate() {
            for &(p1, p2) in &p_pairs {
                for &(q1, q2) in &p_pairs {
                    let lhs = alg.mixed_opt(s_plus, alg.mixed(p1, alg.omega(q1)));
                    if lhs != s_inf {
                        continue;
                    }
                    for &q in &q_mults {
                        let t_plus =
                            sg.mult(sg.mult_opt(s_plus, sg.mult(p2, sg.pow(q2, exp))), q);
                        out.push((
                            node_idx,
                            t_plus,
                            EdgeWitness {
                                p: (p1, p2),
                                q: (q1, q2),
                                mult: q,
                            },
                        ));
                    }
                }
            }
        }
        out.sort_by_key(|(from, to, _)| (*from, to.0));
        out.dedup_by_key(|(from, to, _)| (*from, to.0));
        edges.insert(label, out);
    }

    AlternationGraph { nodes, edges }
}

impl AlternationGraph {
    /// Adjacency expansion of one label: the edge goes to every node whose
    /// finite coordinate matches.
    pub fn adjacency(&self, label: LetterSet) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        if let Some(edges) = self.edges.get(&label) {
            for &(from, t_plus, _) in edges {
                for (idx, &(p, _)) in self.nodes.iter().enumerate() {
                    if p == OptPlus::Elem(t_plus) {
                        adj[from].push(idx);
                    }
                }
            }
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        adj
    }

    pub fn is_recursive(&self) -> Recursiveness {
        for (&label, _) in &self.edges {
            let adj = self.adjacency(label);
            for comp in strongly_connected_components(&adj) {
                let members: std::collections::HashSet<usize> = comp.iter().copied().collect();
                let has_edge = comp
                    .iter()
                    .any(|&v| adj[v].iter().any(|t| members.contains(t)));
                if !has_edge {
                    continue;
                }
                for (i, &a) in comp.iter().enumerate() {
                    for &b in &comp[i + 1..] {
                        if self.nodes[a].1 != self.nodes[b].1 {
                            return Recursiveness::Recursive {
                                label,
                                witness: (a, b),
                            };
                        }
                    }
                }
            }
        }
        Recursiveness::NotRecursive
    }

    /// DOT rendering with deterministic node and edge order.
    pub fn to_dot(&self, m: &OmegaMorphism) -> String {
        let alg = m.algebra();
        let sg = alg.splus();
        let plus_name = |p: OptPlus| match p {
            OptPlus::Unit => "1".to_string(),
            OptPlus::Elem(e) => sg.name(e).to_string(),
        };
        let mut out = String::from("digraph alternation {\n");
        for (i, &(p, w)) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}|{}\"];",
                plus_name(p),
                alg.inf_name(w)
            );
        }
        for (label, edges) in &self.edges {
            for &(from, t_plus, _) in edges {
                for (to, &(p, _)) in self.nodes.iter().enumerate() {
                    if p == OptPlus::Elem(t_plus) {
                        let _ = writeln!(
                            out,
                            "  n{from} -> n{to} [label=\"{}\"];",
                            m.alphabet().render_letter_set(*label)
                        );
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ef::chains::ChainEngine;
    use crate::ef::oracle::OracleCaps;
    use crate::pairing::alphabet_completion;

    fn infa_graph() -> (AlternationGraph, crate::pairing::CompletedMorphism) {
        let mut engine = ChainEngine::new(2, OracleCaps::default());
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let pairs = engine
            .chains_at_rank(2, 2, 2, &completed.morphism, 4)
            .unwrap();
        (
            build_alternation_graph(&completed.morphism, &pairs),
            completed,
        )
    }

    #[test]
    fn empty_pair_set_gives_edgeless_graph() {
        let completed = alphabet_completion(&corpus::infa().morphism).unwrap();
        let m = &completed.morphism;
        let empty = ChainSet {
            level: 2,
            len: 2,
            tuples: Default::default(),
            witnesses: Default::default(),
            status: crate::ef::chains::EstimateStatus::Unstable,
            caps: (2, 4),
        };
        let g = build_alternation_graph(m, &empty);
        assert!(g.edges.values().all(|e| e.is_empty()));
        assert_eq!(g.is_recursive(), Recursiveness::NotRecursive);
    }

    #[test]
    fn infa_graph_has_expected_edge_and_is_not_recursive() {
        let (g, completed) = infa_graph();
        let m = &completed.morphism;
        // Edge from (1, (INF,{a,b})) with label {a,b} exists.
        let inf_ab = m.algebra().inf_index_of("(INF,{a,b})").unwrap();
        let unit_inf = g
            .nodes
            .iter()
            .position(|&(p, w)| p == OptPlus::Unit && w == inf_ab)
            .unwrap();
        let ab: LetterSet = m
            .alphabet()
            .parse_word("ab")
            .unwrap()
            .letter_set();
        let edges = &g.edges[&ab];
        assert!(edges.iter().any(|&(from, _, _)| from == unit_inf));
        assert_eq!(g.is_recursive(), Recursiveness::NotRecursive);
    }

    #[test]
    fn edges_are_transitive_per_label() {
        let (g, _) = infa_graph();
        for (&label, _) in &g.edges {
            let adj = g.adjacency(label);
            for a in 0..adj.len() {
                for &b in &adj[a] {
                    for &c in &adj[b] {
                        assert!(
                            adj[a].contains(&c),
                            "label {label}: edge {a}->{b}->{c} not transitive"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn edges_ignore_target_infinite_coordinate() {
        let (g, _) = infa_graph();
        for (_, edges) in &g.edges {
            for &(from, t_plus, _) in edges {
                // Expansion hits every node with the finite coordinate.
                let targets: Vec<usize> = g
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, &(p, _))| p == OptPlus::Elem(t_plus))
                    .map(|(i, _)| i)
                    .collect();
                assert!(!targets.is_empty());
                let _ = from;
            }
        }
    }
}
