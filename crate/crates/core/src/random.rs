//! Seeded random generators for the randomized test campaigns.
//!
//! All randomness goes through [`ChaCha8Rng`] so campaigns are reproducible;
//! [`rng_from_env`] honours `MODSUP_SEED` to replay a particular run.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Event};
use crate::generator::Generator;

pub const SEED_VAR: &str = "MODSUP_SEED";

/// Seed from `MODSUP_SEED` if set and numeric, otherwise `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

pub fn rng_from_env(default: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_from_env(default))
}

/// Shape parameters for [`random_generator`].
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    /// Probability that a given (state, event) pair has a transition.
    pub density: f64,
    pub marked_prob: f64,
    /// Only forward transitions (state i to j > i), so the language is finite.
    pub acyclic: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_states: 4, density: 0.5, marked_prob: 0.4, acyclic: false }
    }
}

/// A pool of events `e0, e1, ...` with controllability fixed once, so that
/// alphabets drawn from the same pool always agree on shared events.
#[derive(Clone, Debug)]
pub struct EventPool {
    events: Vec<Event>,
}

impl EventPool {
    pub fn new<R: Rng>(rng: &mut R, size: usize) -> Self {
        let events = (0..size).map(|i| Event { name: format!("e{i}"), controllable: rng.gen_bool(0.5) }).collect();
        EventPool { events }
    }

    pub fn all(&self) -> Alphabet {
        Alphabet::new(self.events.iter().cloned()).expect("pool names are distinct")
    }

    /// Random non-empty sub-alphabet with between `min` and `max` events, in pool order.
    pub fn subset<R: Rng>(&self, rng: &mut R, min: usize, max: usize) -> Alphabet {
        let max = max.min(self.events.len());
        let n = rng.gen_range(min.min(max)..=max);
        let mut idx: Vec<usize> = (0..self.events.len()).collect();
        idx.shuffle(rng);
        idx.truncate(n);
        idx.sort_unstable();
        Alphabet::new(idx.into_iter().map(|i| self.events[i].clone())).expect("subset of pool")
    }
}

pub fn random_generator<R: Rng>(rng: &mut R, alphabet: &Alphabet, shape: Shape) -> Generator {
    let n = rng.gen_range(1..=shape.max_states.max(1));
    let marked: Vec<bool> = (0..n).map(|_| rng.gen_bool(shape.marked_prob)).collect();
    let delta = (0..n)
        .map(|q| {
            (0..alphabet.len())
                .map(|_| {
                    if !rng.gen_bool(shape.density) {
                        return None;
                    }
                    if shape.acyclic {
                        (q + 1 < n).then(|| rng.gen_range(q + 1..n))
                    } else {
                        Some(rng.gen_range(0..n))
                    }
                })
                .collect()
        })
        .collect();
    Generator::from_raw(alphabet.clone(), 0, marked, delta)
}

/// Random generator whose marked language is non-empty: draws until trim
/// keeps a state, falling back to marking the initial state.
pub fn random_nonempty<R: Rng>(rng: &mut R, alphabet: &Alphabet, shape: Shape) -> Generator {
    for _ in 0..16 {
        let g = random_generator(rng, alphabet, shape);
        if !crate::automata::is_empty_marked(&g) {
            return g;
        }
    }
    let g = random_generator(rng, alphabet, shape);
    let mut marked: Vec<bool> = (0..g.num_states()).map(|q| g.is_marked(q)).collect();
    marked[g.initial()] = true;
    g.with_marking(marked)
}

/// `Σ1 ∩ Σ2` plus each remaining event of `Σ1 ∪ Σ2` with probability `p`.
pub fn random_sigma_k<R: Rng>(rng: &mut R, sigma1: &Alphabet, sigma2: &Alphabet, p: f64) -> Alphabet {
    let union = sigma1.union(sigma2).expect("alphabets drawn from one pool agree");
    let events = union
        .events()
        .iter()
        .filter(|e| (sigma1.contains(&e.name) && sigma2.contains(&e.name)) || rng.gen_bool(p))
        .cloned();
    Alphabet::new(events).expect("subset of a valid alphabet")
}

/// A trim generator whose language is a random non-empty part of
/// `L(plant)`: the product of the plant with a random generator, marked at
/// random.
pub fn random_sublanguage<R: Rng>(rng: &mut R, plant: &Generator, shape: Shape) -> Generator {
    let r = random_generator(rng, plant.alphabet(), Shape { marked_prob: 1.0, ..shape });
    let p = crate::automata::compose(plant, &r).expect("same alphabet");
    let mut marked: Vec<bool> = (0..p.num_states()).map(|_| rng.gen_bool(shape.marked_prob)).collect();
    let p = p.with_marking(marked.clone());
    if crate::automata::is_empty_marked(&p) {
        marked[p.initial()] = true;
    }
    crate::automata::trim(&p.with_marking(marked))
}
