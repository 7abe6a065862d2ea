//! Nondeterministic Büchi automata: direct lasso acceptance (the
//! independent oracle) and conversion to a Wilke-algebra morphism.
//!
//! The conversion builds the semigroup of three-valued transition matrices
//! generated by the letter matrices. Entry values: 0 = no path, 1 = a path,
//! 2 = a path through an accepting state. `S∞` consists of the reachable
//! acceptance vectors over the state set; correctness is enforced by the
//! exhaustive agreement tests against direct acceptance rather than by a
//! construction-level proof.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::morphism::{AcceptSet, MorphismError, OmegaMorphism, RecognizedLanguage};
use crate::semigroup::{FiniteSemigroup, PlusElem};
use crate::util::strongly_connected_components;
use crate::wilke::WilkeAlgebra;
use crate::words::{Alphabet, LassoWord};

#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    pub name: String,
    pub state_names: Vec<String>,
    pub alphabet: Alphabet,
    pub initial: usize,
    pub accepting: Vec<bool>,
    /// delta[state][letter] -> successor states
    pub delta: Vec<Vec<Vec<usize>>>,
}

impl BuchiAutomaton {
    pub fn new(
        name: String,
        state_names: Vec<String>,
        alphabet: Alphabet,
        initial: usize,
        accepting: Vec<bool>,
        transitions: Vec<(usize, u8, usize)>,
    ) -> Self {
        let n = state_names.len();
        let mut delta = vec![vec![Vec::new(); alphabet.len()]; n];
        for (src, letter, dst) in transitions {
            let succ = &mut delta[src][letter as usize];
            if !succ.contains(&dst) {
                succ.push(dst);
            }
        }
        for row in &mut delta {
            for succ in row.iter_mut() {
                succ.sort_unstable();
            }
        }
        BuchiAutomaton {
            name,
            state_names,
            alphabet,
            initial,
            accepting,
            delta,
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    /// Direct acceptance of an ultimately periodic word, by reachability in
    /// the finite product of states with loop positions: accepted iff some
    /// reachable product node lies in a cycle of the loop graph that visits
    /// an accepting state.
    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        // States reachable after reading the prefix.
        let mut current: Vec<bool> = vec![false; self.state_count()];
        current[self.initial] = true;
        for &c in &w.prefix.0 {
            let mut next = vec![false; self.state_count()];
            for q in 0..self.state_count() {
                if current[q] {
                    for &r in &self.delta[q][c as usize] {
                        next[r] = true;
                    }
                }
            }
            current = next;
        }

        // Product graph: (state, position in loop). Edge on the letter at
        // that position.
        let period = w.cycle.len();
        let n = self.state_count();
        let node = |q: usize, pos: usize| q * period + pos;
        let mut adj = vec![Vec::new(); n * period];
        for q in 0..n {
            for pos in 0..period {
                let c = w.cycle.0[pos];
                for &r in &self.delta[q][c as usize] {
                    adj[node(q, pos)].push(node(r, (pos + 1) % period));
                }
            }
        }

        // Restrict to nodes reachable from the post-prefix states at
        // position 0.
        let mut reach = vec![false; n * period];
        let mut queue = VecDeque::new();
        for q in 0..n {
            if current[q] {
                reach[node(q, 0)] = true;
                queue.push_back(node(q, 0));
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w2 in &adj[v] {
                if !reach[w2] {
                    reach[w2] = true;
                    queue.push_back(w2);
                }
            }
        }

        // Accepting run exists iff some reachable SCC contains an edge and an
        // accepting-state node.
        let comps = strongly_connected_components(&adj);
        for comp in comps {
            if !comp.iter().any(|&v| reach[v]) {
                continue;
            }
            let in_comp: std::collections::HashSet<usize> = comp.iter().copied().collect();
            let has_edge = comp
                .iter()
                .any(|&v| adj[v].iter().any(|t| in_comp.contains(t)));
            if !has_edge {
                continue;
            }
            if comp.iter().any(|&v| self.accepting[v / period]) {
                return true;
            }
        }
        false
    }

    /// Converts the automaton to a morphism into a finite Wilke algebra plus
    /// the recognized language (acceptance vectors marking the initial
    /// state).
    pub fn to_algebra(&self) -> Result<(Arc<OmegaMorphism>, RecognizedLanguage), MorphismError> {
        let n = self.state_count();

        let compose = |x: &Vec<u8>, y: &Vec<u8>| -> Vec<u8> {
            let mut out = vec![0u8; n * n];
            for p in 0..n {
                for r in 0..n {
                    let a = x[p * n + r];
                    if a == 0 {
                        continue;
                    }
                    for q in 0..n {
                        let b = y[r * n + q];
                        if b == 0 {
                            continue;
                        }
                        let v = a.max(b);
                        let cell = &mut out[p * n + q];
                        *cell = (*cell).max(v);
                    }
                }
            }
            out
        };

        // Letter matrices; destination-state acceptance marks a visit.
        let mut letter_mats = Vec::with_capacity(self.alphabet.len());
        for c in 0..self.alphabet.len() {
            let mut m = vec![0u8; n * n];
            for p in 0..n {
                for &q in &self.delta[p][c] {
                    m[p * n + q] = if self.accepting[q] { 2 } else { 1 };
                }
            }
            letter_mats.push(m);
        }

        // Generate the matrix semigroup, worklist in first-seen order.
        let mut mats: Vec<Vec<u8>> = Vec::new();
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut letter_image = Vec::with_capacity(self.alphabet.len());
        let mut queue = VecDeque::new();
        for m in &letter_mats {
            let id = *index.entry(m.clone()).or_insert_with(|| {
                mats.push(m.clone());
                queue.push_back(mats.len() - 1);
                mats.len() - 1
            });
            letter_image.push(PlusElem(id));
        }
        while let Some(i) = queue.pop_front() {
            for lm in &letter_mats {
                let prod = compose(&mats[i], lm);
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), mats.len());
                    mats.push(prod);
                    queue.push_back(mats.len() - 1);
                }
            }
        }
        // Close under arbitrary products (right multiplication by letters
        // only reaches images of words; the table must be total over the
        // generated set, which it is because every generated matrix is a
        // word image and products of word images are word images).
        let count = mats.len();
        let mut mult = vec![0usize; count * count];
        for i in 0..count {
            for j in 0..count {
                let prod = compose(&mats[i], &mats[j]);
                let k = *index
                    .get(&prod)
                    .expect("matrix semigroup closed under products");
                mult[i * count + j] = k;
            }
        }

        // omega-power of a matrix by lasso analysis: from q, reach some q'
        // in j <= n steps, then an accepting cycle q' -> q' of length
        // m <= n. Choosing q' adjacent to the marked edge keeps m within n.
        let omega_vec = |s: &Vec<u8>| -> Vec<u8> {
            let mut powers = Vec::with_capacity(n + 1);
            let mut acc = s.clone();
            powers.push(s.clone()); // s^1
            for _ in 1..n {
                acc = compose(&acc, s);
                powers.push(acc.clone());
            }
            let mut v = vec![0u8; n];
            for q in 0..n {
                'search: for qp in 0..n {
                    let reachable = q == qp
                        || powers.iter().any(|m| m[q * n + qp] != 0);
                    if !reachable {
                        continue;
                    }
                    for m in &powers {
                        if m[qp * n + qp] == 2 {
                            v[q] = 1;
                            break 'search;
                        }
                    }
                }
            }
            v
        };

        let mixed_vec = |s: &Vec<u8>, v: &Vec<u8>| -> Vec<u8> {
            let mut out = vec![0u8; n];
            for q in 0..n {
                for r in 0..n {
                    if s[q * n + r] != 0 && v[r] == 1 {
                        out[q] = 1;
                        break;
                    }
                }
            }
            out
        };

        // Generate the reachable acceptance vectors.
        let mut vecs: Vec<Vec<u8>> = Vec::new();
        let mut vindex: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut vqueue = VecDeque::new();
        for m in &mats {
            let v = omega_vec(m);
            if !vindex.contains_key(&v) {
                vindex.insert(v.clone(), vecs.len());
                vecs.push(v.clone());
                vqueue.push_back(vecs.len() - 1);
            }
        }
        while let Some(i) = vqueue.pop_front() {
            for m in &mats {
                let v = mixed_vec(m, &vecs[i]);
                if !vindex.contains_key(&v) {
                    vindex.insert(v.clone(), vecs.len());
                    vecs.push(v.clone());
                    vqueue.push_back(vecs.len() - 1);
                }
            }
        }

        let vcount = vecs.len();
        let mut mixed = vec![0usize; count * vcount];
        for i in 0..count {
            for j in 0..vcount {
                let v = mixed_vec(&mats[i], &vecs[j]);
                mixed[i * vcount + j] = vindex[&v];
            }
        }
        let mut omega = vec![0usize; count];
        for i in 0..count {
            omega[i] = vindex[&omega_vec(&mats[i])];
        }

        let plus_names: Vec<String> = (0..count).map(|i| format!("m{i}")).collect();
        let inf_names: Vec<String> = (0..vcount).map(|i| format!("v{i}")).collect();
        let semigroup = FiniteSemigroup::new(plus_names, mult).expect("valid semigroup tables");
        let algebra =
            WilkeAlgebra::new(semigroup, inf_names, mixed, omega).expect("valid algebra tables");
        let morphism = Arc::new(OmegaMorphism::new(
            self.alphabet.clone(),
            algebra,
            letter_image,
        )?);

        let accept: std::collections::BTreeSet<crate::wilke::InfElem> = vecs
            .iter()
            .enumerate()
            .filter(|(_, v)| v[self.initial] == 1)
            .map(|(i, _)| crate::wilke::InfElem(i))
            .collect();
        let language = RecognizedLanguage {
            name: self.name.clone(),
            morphism: Arc::clone(&morphism),
            accept: AcceptSet::Inf(accept),
        };
        Ok((morphism, language))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::words::{enumerate_words, Word};

    #[test]
    fn direct_acceptance_on_inf_many_a() {
        let aut = corpus::infa_automaton();
        let a = aut.alphabet.clone();
        let acc = |s: &str| aut.accepts_lasso(&crate::words::parse_lasso(&a, s).unwrap());
        assert!(acc("b(ab)^w"));
        assert!(!acc("a(b)^w"));
        assert!(acc("(a)^w"));
        assert!(!acc("(b)^w"));
    }

    #[test]
    fn empty_accepting_set_rejects_everything() {
        let mut aut = corpus::infa_automaton();
        aut.accepting = vec![false, false];
        let a = aut.alphabet.clone();
        for loop_w in enumerate_words(2, 3) {
            let w = LassoWord::new(Word::default(), loop_w).unwrap();
            assert!(!aut.accepts_lasso(&w));
        }
        let (m, lang) = aut.to_algebra().unwrap();
        let accept = lang.accept_inf().unwrap();
        for q in m.infinite_image() {
            assert!(!accept.contains(q));
        }
    }

    #[test]
    fn universal_single_state_automaton() {
        let alphabet = Alphabet::new(vec!['a', 'b']).unwrap();
        let aut = BuchiAutomaton::new(
            "ALL".into(),
            vec!["s".into()],
            alphabet,
            0,
            vec![true],
            vec![(0, 0, 0), (0, 1, 0)],
        );
        let (m, lang) = aut.to_algebra().unwrap();
        // Every omega-word accepted; only one reachable acceptance vector.
        assert_eq!(m.infinite_image().len(), 1);
        let accept = lang.accept_inf().unwrap();
        assert_eq!(accept.len(), 1);
    }

    #[test]
    fn algebra_agrees_with_direct_acceptance_on_short_lassos() {
        for aut in [corpus::infa_automaton(), corpus::evena_automaton()] {
            let (m, lang) = aut.to_algebra().unwrap();
            let mut prefixes = vec![Word::default()];
            prefixes.extend(enumerate_words(2, 3));
            for prefix in &prefixes {
                for cycle in enumerate_words(2, 3) {
                    let w = LassoWord::new(prefix.clone(), cycle).unwrap();
                    assert_eq!(
                        lang.contains_lasso(&w).unwrap(),
                        aut.accepts_lasso(&w),
                        "disagreement on {}",
                        m.alphabet().render_lasso(&w)
                    );
                }
            }
        }
    }
}
