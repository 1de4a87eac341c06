#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modsup::automata::{compose, prefix_closure};
use modsup::random::{random_nonempty, random_sigma_k, random_sublanguage, EventPool, Shape};
use modsup::solver::{ProblemInstance, SolveOptions};
use modsup::{Alphabet, Error, Generator};

pub fn alph(names: &[&str], controllable: &[&str]) -> Alphabet {
    Alphabet::with_controllable(names, controllable).unwrap()
}

pub fn lang(sigma: &Alphabet, words: &[&str]) -> Generator {
    let ws: Vec<Vec<&str>> = words.iter().map(|w| w.split_whitespace().collect()).collect();
    Generator::from_words(sigma.clone(), &ws).unwrap()
}

pub fn w(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

pub struct ExampleOne {
    pub g1: Generator,
    pub g2: Generator,
    pub k: Generator,
    pub sigma_k: Alphabet,
}

/// Two assembly lines sharing `a` (start) and `d` (finish); `b`, `c` controllable.
pub fn example_one() -> ExampleOne {
    let s1 = alph(&["a", "a1", "b", "d"], &["b"]);
    let s2 = alph(&["a", "a2", "c", "d"], &["c"]);
    let all = s1.union(&s2).unwrap();
    ExampleOne {
        g1: lang(&s1, &["a a1 b d"]),
        g2: lang(&s2, &["a a2 c d"]),
        k: lang(&all, &["a a1 a2", "a a2 a1"]),
        sigma_k: alph(&["a", "d"], &[]),
    }
}

pub fn example_one_problem() -> ProblemInstance {
    let ex = example_one();
    ProblemInstance::new(ex.g1, ex.g2, ex.k, &ex.sigma_k).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random problem with `K` inside the plant product; `None` when the drawn
/// instance admits no decomposable coordinator alphabet.
pub fn random_problem(seed: u64, all_marked: bool, closed_spec: bool) -> Option<ProblemInstance> {
    let mut rng = rng(seed);
    let shape = Shape { max_states: 4, ..Shape::default() };
    let pool = EventPool::new(&mut rng, 5);
    let s1 = pool.subset(&mut rng, 2, 4);
    let s2 = pool.subset(&mut rng, 2, 4);
    let mut g1 = random_nonempty(&mut rng, &s1, shape);
    let mut g2 = random_nonempty(&mut rng, &s2, shape);
    if all_marked {
        g1 = g1.with_all_marked();
        g2 = g2.with_all_marked();
    }
    let plant = compose(&g1, &g2).unwrap();
    let mut k = random_sublanguage(&mut rng, &plant, shape);
    if closed_spec {
        k = prefix_closure(&k);
    }
    let p = rng.gen_range(0.0..0.4);
    let sk = random_sigma_k(&mut rng, &s1, &s2, p);
    let options = SolveOptions { auto_extend_cd: true, ..SolveOptions::default() };
    match ProblemInstance::with_options(g1, g2, k, &sk, options) {
        Ok(inst) => Some(inst),
        Err(Error::PreconditionViolation(_)) => None,
        Err(e) => panic!("unexpected error: {e}"),
    }
}
