//! Language-level operators on generators: synchronous product, natural
//! projection, inverse projection, trimming, prefix closure, minimization,
//! inclusion and nonconflict checks.
//!
//! Derived generators name their states `q0, q1, ...` in breadth-first
//! discovery order, exploring events in alphabet order, so results are
//! deterministic.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::generator::{Generator, StateId};
use crate::verdict::{Counterexample, Reason, Verdict, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LanguageKind {
    Generated,
    Marked,
}

/// Breadth-first exploration bookkeeping shared by the product constructions.
struct Explorer<K> {
    index: HashMap<K, usize>,
    keys: Vec<K>,
    parent: Vec<Option<(usize, usize)>>,
    queue: VecDeque<usize>,
}

impl<K: Clone + Eq + std::hash::Hash> Explorer<K> {
    fn new(start: K) -> Self {
        let mut ex = Explorer { index: HashMap::new(), keys: Vec::new(), parent: Vec::new(), queue: VecDeque::new() };
        ex.visit(start, None);
        ex
    }

    /// Returns the id of `key`, registering it if new.
    fn visit(&mut self, key: K, parent: Option<(usize, usize)>) -> usize {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.keys.len();
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.parent.push(parent);
        self.queue.push_back(id);
        id
    }

    fn next(&mut self) -> Option<usize> {
        self.queue.pop_front()
    }

    /// Event-index path from the start to `id`.
    fn path(&self, mut id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, e)) = self.parent[id] {
            out.push(e);
            id = p;
        }
        out.reverse();
        out
    }
}

pub(crate) fn names_of(alphabet: &Alphabet, path: &[usize]) -> Word {
    path.iter().map(|&e| alphabet.event(e).name.clone()).collect()
}

/// Synchronous product `g1 ‖ g2`, restricted to its reachable part.
pub fn compose(g1: &Generator, g2: &Generator) -> Result<Generator> {
    let alphabet = g1.alphabet().union(g2.alphabet())?;
    let map: Vec<(Option<usize>, Option<usize>)> =
        alphabet.names().map(|n| (g1.alphabet().position(n), g2.alphabet().position(n))).collect();
    let mut ex = Explorer::new((g1.initial(), g2.initial()));
    let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
    let mut marked = Vec::new();
    while let Some(id) = ex.next() {
        let (q1, q2) = ex.keys[id];
        if delta.len() <= id {
            delta.resize(id + 1, vec![None; alphabet.len()]);
            marked.resize(id + 1, false);
        }
        marked[id] = g1.is_marked(q1) && g2.is_marked(q2);
        for (e, &(i1, i2)) in map.iter().enumerate() {
            let n1 = match i1 {
                Some(i) => match g1.step(q1, i) {
                    Some(x) => x,
                    None => continue,
                },
                None => q1,
            };
            let n2 = match i2 {
                Some(i) => match g2.step(q2, i) {
                    Some(x) => x,
                    None => continue,
                },
                None => q2,
            };
            let next = ex.visit((n1, n2), Some((id, e)));
            delta[id][e] = Some(next);
        }
    }
    delta.resize(ex.keys.len(), vec![None; alphabet.len()]);
    marked.resize(ex.keys.len(), false);
    Ok(Generator::from_raw(alphabet, 0, marked, delta))
}

/// Left-to-right synchronous product of several generators.
pub fn compose_all(gs: &[&Generator]) -> Result<Generator> {
    let (first, rest) = gs
        .split_first()
        .ok_or_else(|| Error::PreconditionViolation("compose_all needs at least one generator".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, g| compose(&acc, g))
}

/// Natural projection `P: source* → target*`.
#[derive(Clone, Debug)]
pub struct ProjectionSpec {
    source: Alphabet,
    target: Alphabet,
}

impl ProjectionSpec {
    pub fn new(source: &Alphabet, target: &Alphabet) -> Result<Self> {
        if !target.is_subset(source) {
            source.check_compatible(target)?;
            return Err(Error::AlphabetBounds(format!("projection target {target} is not a subset of {source}")));
        }
        Ok(ProjectionSpec { source: source.clone(), target: target.clone() })
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// Projects a word.
    pub fn apply_word<S: AsRef<str>>(&self, word: &[S]) -> Word {
        word.iter().filter(|e| self.target.contains(e.as_ref())).map(|e| e.as_ref().to_string()).collect()
    }

    pub fn apply(&self, g: &Generator) -> Result<Generator> {
        if !g.alphabet().same_events(&self.source) {
            return Err(Error::AlphabetMismatch(format!(
                "projection source {} differs from generator alphabet {}",
                self.source,
                g.alphabet()
            )));
        }
        Ok(subset_construction(g, &self.target))
    }
}

/// Projection of `g` onto `target ⊆ Σ(g)`, by subset construction. A subset
/// state is marked iff it contains a marked state.
pub fn project(g: &Generator, target: &Alphabet) -> Result<Generator> {
    ProjectionSpec::new(g.alphabet(), target)?.apply(g)
}

/// Projection onto `sigma ∩ Σ(g)`, in `sigma`'s order.
pub fn project_onto(g: &Generator, sigma: &Alphabet) -> Generator {
    subset_construction(g, &sigma.intersection(g.alphabet()))
}

fn subset_construction(g: &Generator, target: &Alphabet) -> Generator {
    let src = g.alphabet();
    let silent: Vec<usize> = (0..src.len()).filter(|&e| !target.contains(&src.event(e).name)).collect();
    let observed: Vec<usize> = target.names().map(|n| src.position(n).unwrap()).collect();

    let silent_closure = |seed: &mut BTreeSet<StateId>| {
        let mut stack: Vec<StateId> = seed.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &e in &silent {
                if let Some(n) = g.step(q, e) {
                    if seed.insert(n) {
                        stack.push(n);
                    }
                }
            }
        }
    };

    let mut start = BTreeSet::from([g.initial()]);
    silent_closure(&mut start);
    let mut ex = Explorer::new(start);
    let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
    let mut marked = Vec::new();
    while let Some(id) = ex.next() {
        let members = ex.keys[id].clone();
        delta.resize(ex.keys.len().max(id + 1), vec![None; target.len()]);
        marked.resize(delta.len(), false);
        marked[id] = members.iter().any(|&q| g.is_marked(q));
        for (te, &e) in observed.iter().enumerate() {
            let mut next: BTreeSet<StateId> = members.iter().filter_map(|&q| g.step(q, e)).collect();
            if next.is_empty() {
                continue;
            }
            silent_closure(&mut next);
            let nid = ex.visit(next, Some((id, te)));
            delta[id][te] = Some(nid);
        }
    }
    delta.resize(ex.keys.len(), vec![None; target.len()]);
    marked.resize(ex.keys.len(), false);
    Generator::from_raw(target.clone(), 0, marked, delta)
}

/// Inverse projection onto `superset ⊇ Σ(g)`: a self-loop on every state for
/// each event of `superset ∖ Σ(g)`.
pub fn inverse_lift(g: &Generator, superset: &Alphabet) -> Result<Generator> {
    if !g.alphabet().is_subset(superset) {
        superset.check_compatible(g.alphabet())?;
        return Err(Error::AlphabetBounds(format!("{} is not a subset of {}", g.alphabet(), superset)));
    }
    let map: Vec<Option<usize>> = superset.names().map(|n| g.alphabet().position(n)).collect();
    let delta = (0..g.num_states())
        .map(|q| {
            map.iter()
                .map(|m| match m {
                    Some(e) => g.step(q, *e),
                    None => Some(q),
                })
                .collect()
        })
        .collect();
    let marked = (0..g.num_states()).map(|q| g.is_marked(q)).collect();
    Ok(Generator::from_raw(superset.clone(), g.initial(), marked, delta).with_names(g.state_names().to_vec()))
}

pub(crate) fn reachable(g: &Generator) -> Vec<bool> {
    let mut seen = vec![false; g.num_states()];
    let mut stack = vec![g.initial()];
    seen[g.initial()] = true;
    while let Some(q) = stack.pop() {
        for e in 0..g.alphabet().len() {
            if let Some(n) = g.step(q, e) {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
    }
    seen
}

pub(crate) fn coreachable(g: &Generator) -> Vec<bool> {
    let n = g.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (s, _, d) in g.transitions() {
        preds[d].push(s);
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<StateId> = g.marked_states().collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Sub-generator on the states flagged in `keep`, renumbered in BFS order
/// from the initial state; original state names are preserved. Returns the
/// canonical empty generator when the initial state is dropped.
pub(crate) fn restrict(g: &Generator, keep: &[bool]) -> Generator {
    if !keep[g.initial()] {
        return Generator::empty(g.alphabet().clone());
    }
    let mut order = vec![g.initial()];
    let mut newid = vec![usize::MAX; g.num_states()];
    newid[g.initial()] = 0;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        for e in 0..g.alphabet().len() {
            if let Some(n) = g.step(q, e) {
                if keep[n] && newid[n] == usize::MAX {
                    newid[n] = order.len();
                    order.push(n);
                }
            }
        }
    }
    let delta = order
        .iter()
        .map(|&q| (0..g.alphabet().len()).map(|e| g.step(q, e).filter(|&n| keep[n]).map(|n| newid[n])).collect())
        .collect();
    let marked = order.iter().map(|&q| g.is_marked(q)).collect();
    let names = order.iter().map(|&q| g.state_name(q).to_string()).collect();
    Generator::from_raw(g.alphabet().clone(), 0, marked, delta).with_names(names)
}

/// Reachable part of `g`.
pub fn accessible(g: &Generator) -> Generator {
    restrict(g, &reachable(g))
}

/// Keeps exactly the states that are reachable and co-reachable.
pub fn trim(g: &Generator) -> Generator {
    let r = reachable(g);
    let c = coreachable(g);
    let keep: Vec<bool> = r.iter().zip(&c).map(|(a, b)| *a && *b).collect();
    restrict(g, &keep)
}

/// `L(g) = closure(L_m(g))`: every reachable state is co-reachable.
pub fn is_nonblocking(g: &Generator) -> bool {
    blocking_word(g).is_none()
}

/// Shortest (length-lexicographic) word leading to a reachable state from
/// which no marked state can be reached.
pub fn blocking_word(g: &Generator) -> Option<Word> {
    let co = coreachable(g);
    let mut ex = Explorer::new(g.initial());
    while let Some(id) = ex.next() {
        let q = ex.keys[id];
        if !co[q] {
            return Some(names_of(g.alphabet(), &ex.path(id)));
        }
        for e in 0..g.alphabet().len() {
            if let Some(n) = g.step(q, e) {
                ex.visit(n, Some((id, e)));
            }
        }
    }
    None
}

/// Trim with every remaining state marked: `L_m = L = closure(L_m(g))`.
pub fn prefix_closure(g: &Generator) -> Generator {
    let t = trim(g);
    if is_empty_marked(&t) {
        return t;
    }
    t.with_all_marked()
}

/// True when `L_m(g)` is empty.
pub fn is_empty_marked(g: &Generator) -> bool {
    !coreachable(g)[g.initial()]
}

/// Minimal trim generator with the same marked language (Moore partition
/// refinement over the trim part; missing transitions act as a dead sink).
pub fn minimize(g: &Generator) -> Generator {
    let t = trim(g);
    let n = t.num_states();
    let ne = t.alphabet().len();
    let mut block: Vec<usize> = (0..n).map(|q| usize::from(t.is_marked(q))).collect();
    loop {
        let mut sigs: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let sig = (block[q], (0..ne).map(|e| t.step(q, e).map(|d| block[d])).collect());
            let len = sigs.len();
            next[q] = *sigs.entry(sig).or_insert(len);
        }
        let before = block.iter().collect::<BTreeSet<_>>().len();
        let after = sigs.len();
        block = next;
        if before == after {
            break;
        }
    }
    // Quotient, then renumber by BFS.
    let nb = block.iter().max().map_or(0, |m| m + 1);
    let mut delta = vec![vec![None; ne]; nb];
    let mut marked = vec![false; nb];
    for q in 0..n {
        marked[block[q]] = t.is_marked(q);
        for (e, slot) in delta[block[q]].iter_mut().enumerate() {
            *slot = t.step(q, e).map(|d| block[d]);
        }
    }
    let quotient = Generator::from_raw(t.alphabet().clone(), block[t.initial()], marked, delta);
    let renamed = accessible(&quotient);
    let n = renamed.num_states();
    renamed.with_names((0..n).map(|i| format!("q{i}")).collect())
}

fn check_same_alphabet(a: &Generator, b: &Generator) -> Result<()> {
    if !a.alphabet().same_events(b.alphabet()) {
        return Err(Error::AlphabetMismatch(format!("{} vs {}", a.alphabet(), b.alphabet())));
    }
    Ok(())
}

/// Decides `L(a) ⊆ L(b)` or `L_m(a) ⊆ L_m(b)`. On failure returns the
/// shortest violating word, ties broken by `a`'s alphabet order.
pub fn language_inclusion(a: &Generator, b: &Generator, kind: LanguageKind) -> Result<Verdict> {
    check_same_alphabet(a, b)?;
    let map: Vec<usize> = a.alphabet().names().map(|n| b.alphabet().position(n).unwrap()).collect();
    // `None` on the right is the completion sink of `b`.
    let mut ex: Explorer<(StateId, Option<StateId>)> = Explorer::new((a.initial(), Some(b.initial())));
    while let Some(id) = ex.next() {
        let (qa, qb) = ex.keys[id];
        if kind == LanguageKind::Marked && a.is_marked(qa) && !qb.is_some_and(|q| b.is_marked(q)) {
            let w = names_of(a.alphabet(), &ex.path(id));
            return Ok(Verdict::Fails(Counterexample::new(w, Reason::InclusionViolation)));
        }
        for (e, &eb) in map.iter().enumerate() {
            let Some(na) = a.step(qa, e) else { continue };
            let nb = qb.and_then(|q| b.step(q, eb));
            if kind == LanguageKind::Generated && nb.is_none() {
                let mut w = names_of(a.alphabet(), &ex.path(id));
                w.push(a.alphabet().event(e).name.clone());
                return Ok(Verdict::Fails(Counterexample::new(w, Reason::InclusionViolation)));
            }
            ex.visit((na, nb), Some((id, e)));
        }
    }
    Ok(Verdict::Holds)
}

/// Language equality, reporting a word of the symmetric difference.
pub fn language_equal(a: &Generator, b: &Generator, kind: LanguageKind) -> Result<Verdict> {
    match language_inclusion(a, b, kind)? {
        Verdict::Holds => Ok(language_inclusion(b, a, kind)?.annotate("right ⊄ left")),
        fail => Ok(fail.annotate("left ⊄ right")),
    }
}

/// Synchronous nonconflict: `closure(L_m(a) ‖ L_m(b)) = closure(L_m(a)) ‖ closure(L_m(b))`,
/// decided as nonblocking of `trim(a) ‖ trim(b)`.
pub fn is_nonconflicting(a: &Generator, b: &Generator) -> Result<Verdict> {
    a.alphabet().check_compatible(b.alphabet())?;
    if is_empty_marked(a) || is_empty_marked(b) {
        return Ok(Verdict::Holds);
    }
    let product = compose(&trim(a), &trim(b))?;
    Ok(blocking_word(&product).map(|w| Counterexample::new(w, Reason::NonconflictViolation)).into())
}

/// Whether `L_m(g)` is prefix-closed.
pub fn is_prefix_closed(g: &Generator) -> Result<Verdict> {
    language_inclusion(&prefix_closure(g), g, LanguageKind::Marked)
}
