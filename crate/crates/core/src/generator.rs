use std::collections::BTreeMap;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

pub type StateId = usize;

/// Deterministic finite generator `(Q, Σ, f, q0, Qm)` with a partial
/// transition function.
///
/// Values are immutable once built; every operator returns a new generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: StateId,
    marked: Vec<bool>,
    /// `delta[state][event]`, event indexed by position in `alphabet`.
    delta: Vec<Vec<Option<StateId>>>,
}

impl Generator {
    /// Canonical empty-language generator: one unmarked state, no transitions.
    pub fn empty(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Generator { alphabet, names: vec!["q0".into()], initial: 0, marked: vec![false], delta: vec![vec![None; n]] }
    }

    /// Generator for the finite language `words` (a trie). Marks exactly the
    /// listed words; the generated language is their prefix closure.
    pub fn from_words<W, S>(alphabet: Alphabet, words: &[W]) -> Result<Self>
    where
        W: AsRef<[S]>,
        S: AsRef<str>,
    {
        let n = alphabet.len();
        let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; n]];
        let mut marked = vec![false];
        for w in words {
            let mut q = 0;
            for ev in w.as_ref() {
                let e = alphabet
                    .position(ev.as_ref())
                    .ok_or_else(|| Error::Invariant(format!("word uses unknown event `{}`", ev.as_ref())))?;
                q = match delta[q][e] {
                    Some(next) => next,
                    None => {
                        delta.push(vec![None; n]);
                        marked.push(false);
                        let next = delta.len() - 1;
                        delta[q][e] = Some(next);
                        next
                    }
                };
            }
            marked[q] = true;
        }
        Ok(Generator::from_raw(alphabet, 0, marked, delta))
    }

    /// Assembles a generator from a dense table. States are named `q0..`.
    pub(crate) fn from_raw(
        alphabet: Alphabet,
        initial: StateId,
        marked: Vec<bool>,
        delta: Vec<Vec<Option<StateId>>>,
    ) -> Self {
        debug_assert_eq!(marked.len(), delta.len());
        debug_assert!(delta.iter().all(|row| row.len() == alphabet.len()));
        let names = (0..delta.len()).map(|i| format!("q{i}")).collect();
        Generator { alphabet, names, initial, marked, delta }
    }

    pub fn builder(alphabet: Alphabet) -> GeneratorBuilder {
        GeneratorBuilder { alphabet, names: Vec::new(), index: BTreeMap::new(), marked: Vec::new(), delta: Vec::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(|row| row.iter().flatten().count()).sum()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.marked[q]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.marked[q])
    }

    /// Successor on the event at alphabet position `event`.
    pub fn step(&self, q: StateId, event: usize) -> Option<StateId> {
        self.delta[q][event]
    }

    pub fn step_named(&self, q: StateId, event: &str) -> Option<StateId> {
        self.alphabet.position(event).and_then(|e| self.delta[q][e])
    }

    /// `(src, event index, dst)` in state-then-event order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, usize, StateId)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(e, t)| t.map(|d| (q, e, d))))
    }

    /// State reached by `word` from the initial state.
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Option<StateId> {
        word.iter().try_fold(self.initial, |q, ev| self.step_named(q, ev.as_ref()))
    }

    /// `word ∈ L(G)`.
    pub fn generates<S: AsRef<str>>(&self, word: &[S]) -> bool {
        self.run(word).is_some()
    }

    /// `word ∈ L_m(G)`.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        self.run(word).is_some_and(|q| self.marked[q])
    }

    /// Same generator with every state marked, so `L_m = L`.
    pub fn with_all_marked(&self) -> Generator {
        let mut g = self.clone();
        g.marked.iter_mut().for_each(|m| *m = true);
        g
    }

    /// Same transition structure over a reordered but set-equal alphabet.
    pub(crate) fn reindexed(&self, alphabet: &Alphabet) -> Generator {
        debug_assert!(self.alphabet.same_events(alphabet));
        let map: Vec<usize> = alphabet.names().map(|n| self.alphabet.position(n).unwrap()).collect();
        let delta = self.delta.iter().map(|row| map.iter().map(|&old| row[old]).collect()).collect();
        Generator {
            alphabet: alphabet.clone(),
            names: self.names.clone(),
            initial: self.initial,
            marked: self.marked.clone(),
            delta,
        }
    }

    /// Same transition structure with a new marking.
    pub(crate) fn with_marking(&self, marked: Vec<bool>) -> Generator {
        assert_eq!(marked.len(), self.num_states());
        Generator { marked, ..self.clone() }
    }

    /// Same transition structure started from `q`.
    pub(crate) fn with_initial(&self, q: StateId) -> Generator {
        Generator { initial: q, ..self.clone() }
    }

    /// Same generator with states renamed `q0, q1, ...` by index.
    pub fn renamed(self) -> Generator {
        let names = (0..self.delta.len()).map(|i| format!("q{i}")).collect();
        self.with_names(names)
    }

    pub(crate) fn with_names(mut self, names: Vec<String>) -> Generator {
        debug_assert_eq!(names.len(), self.delta.len());
        self.names = names;
        self
    }
}

/// Incremental construction from named states and transitions.
pub struct GeneratorBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    index: BTreeMap<String, StateId>,
    marked: Vec<bool>,
    delta: Vec<Vec<Option<StateId>>>,
}

impl GeneratorBuilder {
    /// Adds a state, or updates the marking of an existing one.
    pub fn state(&mut self, name: &str, marked: bool) -> StateId {
        if let Some(&q) = self.index.get(name) {
            self.marked[q] |= marked;
            return q;
        }
        let q = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), q);
        self.marked.push(marked);
        self.delta.push(vec![None; self.alphabet.len()]);
        q
    }

    pub fn transition(&mut self, src: &str, event: &str, dst: &str) -> Result<&mut Self> {
        let e = self
            .alphabet
            .position(event)
            .ok_or_else(|| Error::Invariant(format!("transition uses event `{event}` outside the alphabet")))?;
        let s = *self.index.get(src).ok_or_else(|| Error::Invariant(format!("unknown state `{src}`")))?;
        let d = *self.index.get(dst).ok_or_else(|| Error::Invariant(format!("unknown state `{dst}`")))?;
        match self.delta[s][e] {
            Some(prev) if prev != d => {
                return Err(Error::Invariant(format!("deterministic: state `{src}` has two `{event}` successors")))
            }
            Some(_) => return Err(Error::Invariant(format!("duplicate transition ({src}, {event}, {dst})"))),
            None => self.delta[s][e] = Some(d),
        }
        Ok(self)
    }

    pub fn build(self, initial: &str) -> Result<Generator> {
        let q0 = *self
            .index
            .get(initial)
            .ok_or_else(|| Error::Invariant(format!("initial state `{initial}` is not a state")))?;
        Ok(Generator {
            alphabet: self.alphabet,
            names: self.names,
            initial: q0,
            marked: self.marked,
            delta: self.delta,
        })
    }
}
