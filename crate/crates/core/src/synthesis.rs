//! Monolithic supervisory control: controllability, supremal controllable
//! sublanguage (`sup C`) and infimal prefix-closed controllable
//! superlanguage (`inf C`).

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::alphabet::EventSet;
use crate::automata::{self, LanguageKind};
use crate::error::{Error, Result};
use crate::generator::{Generator, StateId};
use crate::verdict::{Counterexample, Reason, Verdict};

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub supervisor: Generator,
    /// Fixpoint rounds (one uncontrollability sweep plus one co-accessibility sweep each).
    pub iterations: usize,
    /// Product states discarded by the fixpoint.
    pub removed_states: usize,
}

fn check_alphabets(k: &Generator, plant: &Generator) -> Result<Vec<usize>> {
    if !k.alphabet().same_events(plant.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "specification over {} but plant over {}",
            k.alphabet(),
            plant.alphabet()
        )));
    }
    Ok(plant.alphabet().names().map(|n| k.alphabet().position(n).unwrap()).collect())
}

fn uncontrollable_mask(plant: &Generator, sigma_u: &EventSet) -> Vec<bool> {
    plant.alphabet().names().map(|n| sigma_u.contains(n)).collect()
}

/// Decides `closure(L_m(k)) Σu ∩ L(plant) ⊆ closure(L_m(k))`. The
/// counterexample is the shortest `su` leaving the closure.
pub fn is_controllable(k: &Generator, plant: &Generator, sigma_u: &EventSet) -> Result<Verdict> {
    let map = check_alphabets(k, plant)?;
    let kt = automata::trim(k);
    if automata::is_empty_marked(&kt) {
        return Ok(Verdict::Holds);
    }
    let unc = uncontrollable_mask(plant, sigma_u);
    let alph = plant.alphabet();
    let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
    let mut keys = vec![(kt.initial(), plant.initial())];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    index.insert(keys[0], 0);
    let mut queue = VecDeque::from([0usize]);
    let word_to = |parent: &[Option<(usize, usize)>], mut id: usize| {
        let mut w = Vec::new();
        while let Some((p, e)) = parent[id] {
            w.push(e);
            id = p;
        }
        w.reverse();
        w
    };
    while let Some(id) = queue.pop_front() {
        let (qk, qp) = keys[id];
        for e in 0..alph.len() {
            let Some(np) = plant.step(qp, e) else { continue };
            match kt.step(qk, map[e]) {
                Some(nk) => {
                    if let Entry::Vacant(slot) = index.entry((nk, np)) {
                        let nid = keys.len();
                        slot.insert(nid);
                        keys.push((nk, np));
                        parent.push(Some((id, e)));
                        queue.push_back(nid);
                    }
                }
                None if unc[e] => {
                    let mut w = automata::names_of(alph, &word_to(&parent, id));
                    w.push(alph.event(e).name.clone());
                    return Ok(Verdict::Fails(Counterexample::new(w, Reason::ControllabilityViolation)));
                }
                None => {}
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Supremal controllable sublanguage of `L_m(k) ∩ L_m(plant)` with respect
/// to `L(plant)`. The result is controllable, nonblocking and trim; an empty
/// supremal language yields the canonical empty generator.
pub fn sup_con(k: &Generator, plant: &Generator, sigma_u: &EventSet) -> Result<SynthesisResult> {
    let map = check_alphabets(k, plant)?;
    let unc = uncontrollable_mask(plant, sigma_u);
    let alph = plant.alphabet().clone();
    let ne = alph.len();

    // Reachable part of k × plant; `plant_only[x][e]` records plant moves the
    // product lacks.
    let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
    let mut keys = vec![(k.initial(), plant.initial())];
    index.insert(keys[0], 0);
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (qk, qp) = keys[i];
        let mut row = vec![None; ne];
        for e in 0..ne {
            let Some(np) = plant.step(qp, e) else { continue };
            if let Some(nk) = k.step(qk, map[e]) {
                let len = keys.len();
                let nid = *index.entry((nk, np)).or_insert_with(|| {
                    keys.push((nk, np));
                    len
                });
                row[e] = Some(nid);
            }
        }
        delta.push(row);
        i += 1;
    }
    let n = keys.len();
    let marked: Vec<bool> = keys.iter().map(|&(qk, qp)| k.is_marked(qk) && plant.is_marked(qp)).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, row) in delta.iter().enumerate() {
        for d in row.iter().flatten() {
            preds[*d].push(x);
        }
    }

    let mut alive = vec![true; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        // Uncontrollability sweep.
        let bad: Vec<usize> = (0..n)
            .filter(|&x| alive[x])
            .filter(|&x| {
                let qp = keys[x].1;
                (0..ne).any(|e| unc[e] && plant.step(qp, e).is_some() && !delta[x][e].is_some_and(|d| alive[d]))
            })
            .collect();
        for x in bad {
            alive[x] = false;
            changed = true;
        }
        // Co-accessibility sweep.
        let mut co = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&x| alive[x] && marked[x]).collect();
        for &x in &stack {
            co[x] = true;
        }
        while let Some(x) = stack.pop() {
            for &p in &preds[x] {
                if alive[p] && !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        for x in 0..n {
            if alive[x] && !co[x] {
                alive[x] = false;
                changed = true;
            }
        }
        if !changed || !alive[0] {
            break;
        }
    }
    let removed_states = alive.iter().filter(|a| !**a).count();
    let product = Generator::from_raw(alph, 0, marked, delta);
    let supervisor = automata::restrict(&product, &alive);
    let supervisor = if alive[0] { supervisor.renamed() } else { supervisor };
    Ok(SynthesisResult { supervisor, iterations, removed_states })
}

/// Infimal prefix-closed controllable superlanguage of `closure(L_m(k))`
/// within `L(plant)`, i.e. `closure(L_m(k)) Σu* ∩ L(plant)`. Every state of
/// the result is marked.
///
/// Built as a two-zone product: the inside zone tracks `k` and the plant in
/// lockstep; an uncontrollable plant move that `k` does not follow escapes
/// to a zone that tracks the plant alone and only admits uncontrollable
/// events.
pub fn inf_con_closed(k: &Generator, plant: &Generator, sigma_u: &EventSet) -> Result<SynthesisResult> {
    check_alphabets(k, plant)?;
    let closure = automata::prefix_closure(k);
    if automata::is_empty_marked(&closure) {
        return Ok(SynthesisResult {
            supervisor: Generator::empty(plant.alphabet().clone()),
            iterations: 1,
            removed_states: 0,
        });
    }
    let aligned = closure.reindexed(plant.alphabet());
    if let Verdict::Fails(c) = automata::language_inclusion(&aligned, plant, LanguageKind::Generated)? {
        return Err(Error::SpecOutsidePlant(c));
    }
    let unc = uncontrollable_mask(plant, sigma_u);
    let ne = plant.alphabet().len();

    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Zone {
        Inside(StateId, StateId),
        Escaped(StateId),
    }
    let mut index: HashMap<Zone, usize> = HashMap::new();
    let mut keys = vec![Zone::Inside(aligned.initial(), plant.initial())];
    index.insert(keys[0], 0);
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let mut row = vec![None; ne];
        for e in 0..ne {
            let next = match keys[i] {
                Zone::Inside(qk, qp) => match (aligned.step(qk, e), plant.step(qp, e)) {
                    (Some(nk), Some(np)) => Some(Zone::Inside(nk, np)),
                    (None, Some(np)) if unc[e] => Some(Zone::Escaped(np)),
                    _ => None,
                },
                Zone::Escaped(qp) => plant.step(qp, e).filter(|_| unc[e]).map(Zone::Escaped),
            };
            if let Some(z) = next {
                let len = keys.len();
                let nid = *index.entry(z).or_insert_with(|| {
                    keys.push(z);
                    len
                });
                row[e] = Some(nid);
            }
        }
        delta.push(row);
        i += 1;
    }
    let n = keys.len();
    let supervisor = Generator::from_raw(plant.alphabet().clone(), 0, vec![true; n], delta);
    Ok(SynthesisResult { supervisor, iterations: 1, removed_states: 0 })
}
