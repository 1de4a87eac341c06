//! Brute-force reference semantics over bounded languages.
//!
//! Everything here works on explicit finite word sets and evaluates the
//! textbook definitions directly. It shares no code with the automaton
//! operators beyond reading transitions during [`enumerate`], and is meant
//! to cross-check them on small instances.
//!
//! A [`BoundedLanguage`] holds the words of a language up to a depth. Set
//! operators are exact on the words they are given; callers that compare
//! against automata pick the enumeration depth (the padded horizon) so that
//! the answers at the depth of interest are complete. As a rule: closure of
//! the words up to depth `d` needs the language up to `d + |Q| - 1`, since
//! any completion from a co-reachable state is shorter than the state count.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{Alphabet, EventSet};
use crate::automata::LanguageKind;
use crate::error::{Error, Result};
use crate::generator::{Generator, StateId};
use crate::verdict::Word;

/// Default cap on the number of words a single enumeration may produce.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Finite set of words over `alphabet`, all of length at most `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedLanguage {
    alphabet: Alphabet,
    depth: usize,
    words: BTreeSet<Word>,
}

impl BoundedLanguage {
    pub fn new(alphabet: Alphabet, depth: usize, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        for w in &words {
            if w.len() > depth {
                return Err(Error::PreconditionViolation(format!("word of length {} exceeds depth {depth}", w.len())));
            }
            if let Some(e) = w.iter().find(|e| !alphabet.contains(e)) {
                return Err(Error::PreconditionViolation(format!("event `{e}` outside {alphabet}")));
            }
        }
        Ok(BoundedLanguage { alphabet, depth, words })
    }

    fn from_parts(alphabet: Alphabet, depth: usize, words: BTreeSet<Word>) -> Self {
        BoundedLanguage { alphabet, depth, words }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains<S: AsRef<str>>(&self, w: &[S]) -> bool {
        let w: Word = w.iter().map(|e| e.as_ref().to_string()).collect();
        self.words.contains(&w)
    }

    /// Words sorted length-lexicographically by the alphabet's event order.
    pub fn sorted(&self) -> Vec<Word> {
        let mut v: Vec<Word> = self.words.iter().cloned().collect();
        v.sort_by(|a, b| lenlex(&self.alphabet, a, b));
        v
    }

    /// Words of length at most `depth`.
    pub fn truncate(&self, depth: usize) -> BoundedLanguage {
        let d = depth.min(self.depth);
        BoundedLanguage::from_parts(
            self.alphabet.clone(),
            d,
            self.words.iter().filter(|w| w.len() <= d).cloned().collect(),
        )
    }

    pub fn union(&self, other: &BoundedLanguage) -> BoundedLanguage {
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        BoundedLanguage::from_parts(self.alphabet.clone(), self.depth.max(other.depth), words)
    }

    pub fn intersection(&self, other: &BoundedLanguage) -> BoundedLanguage {
        BoundedLanguage::from_parts(
            self.alphabet.clone(),
            self.depth.min(other.depth),
            self.words.intersection(&other.words).cloned().collect(),
        )
    }

    pub fn difference(&self, other: &BoundedLanguage) -> BoundedLanguage {
        BoundedLanguage::from_parts(
            self.alphabet.clone(),
            self.depth,
            self.words.difference(&other.words).cloned().collect(),
        )
    }

    pub fn is_subset(&self, other: &BoundedLanguage) -> bool {
        self.words.is_subset(&other.words)
    }

    /// Length-lexicographically least word, if any.
    pub fn first(&self) -> Option<Word> {
        self.words.iter().min_by(|a, b| lenlex(&self.alphabet, a, b)).cloned()
    }
}

/// Length-lexicographic order with the alphabet's declared event order.
pub fn lenlex(alphabet: &Alphabet, a: &[String], b: &[String]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let ka = a.iter().map(|e| alphabet.position(e));
        let kb = b.iter().map(|e| alphabet.position(e));
        ka.cmp(kb)
    })
}

fn prefixes(w: &[String]) -> impl Iterator<Item = &[String]> {
    (0..=w.len()).map(move |i| &w[..i])
}

/// All words of the selected language of `g` up to `depth`, by BFS.
pub fn enumerate(g: &Generator, depth: usize, kind: LanguageKind) -> Result<BoundedLanguage> {
    enumerate_with_budget(g, depth, kind, DEFAULT_BUDGET)
}

pub fn enumerate_with_budget(
    g: &Generator,
    depth: usize,
    kind: LanguageKind,
    budget: usize,
) -> Result<BoundedLanguage> {
    let alph = g.alphabet();
    let mut words = BTreeSet::new();
    let mut frontier: Vec<(Word, usize)> = vec![(Vec::new(), g.initial())];
    let mut seen = 0usize;
    for len in 0..=depth {
        let mut next = Vec::new();
        for (w, q) in frontier {
            seen += 1;
            if seen > budget {
                return Err(Error::DepthOverflow { budget });
            }
            if kind == LanguageKind::Generated || g.is_marked(q) {
                words.insert(w.clone());
            }
            if len == depth {
                continue;
            }
            for e in 0..alph.len() {
                if let Some(n) = g.step(q, e) {
                    let mut w2 = w.clone();
                    w2.push(alph.event(e).name.clone());
                    next.push((w2, n));
                }
            }
        }
        frontier = next;
    }
    Ok(BoundedLanguage::from_parts(alph.clone(), depth, words))
}

/// Words of length at most `depth` that extend to a marked word within
/// `lookahead` further steps: `closure(Lm(g))` up to `depth` once
/// `lookahead ≥ |Q|`, without materialising the padded marked language.
pub fn enumerate_closure(g: &Generator, depth: usize, lookahead: usize) -> Result<BoundedLanguage> {
    let generated = enumerate(g, depth, LanguageKind::Generated)?;
    let mut memo = HashMap::new();
    let words = generated
        .words
        .into_iter()
        .filter(|w| {
            let q = g.run(w).expect("generated word runs");
            completes(g, q, lookahead, &mut memo)
        })
        .collect();
    Ok(BoundedLanguage::from_parts(g.alphabet().clone(), depth, words))
}

fn completes(g: &Generator, q: StateId, steps: usize, memo: &mut HashMap<(StateId, usize), bool>) -> bool {
    if g.is_marked(q) {
        return true;
    }
    if steps == 0 {
        return false;
    }
    if let Some(&r) = memo.get(&(q, steps)) {
        return r;
    }
    let r = (0..g.alphabet().len()).any(|e| g.step(q, e).is_some_and(|n| completes(g, n, steps - 1, memo)));
    memo.insert((q, steps), r);
    r
}

/// Every prefix of every word.
pub fn closure(l: &BoundedLanguage) -> BoundedLanguage {
    let words = l.words.iter().flat_map(|w| prefixes(w).map(<[String]>::to_vec)).collect();
    BoundedLanguage::from_parts(l.alphabet.clone(), l.depth, words)
}

/// Image under the natural projection onto `target`.
pub fn project(l: &BoundedLanguage, target: &Alphabet) -> BoundedLanguage {
    let words = l.words.iter().map(|w| w.iter().filter(|e| target.contains(e)).cloned().collect()).collect();
    BoundedLanguage::from_parts(target.clone(), l.depth, words)
}

fn project_word(w: &[String], target: &Alphabet) -> Word {
    w.iter().filter(|e| target.contains(e)).cloned().collect()
}

/// Enumerates words over `alphabet` up to `depth`, extending only words
/// accepted by `keep_prefix` and collecting those accepted by `accept`.
fn search(
    alphabet: &Alphabet,
    depth: usize,
    budget: usize,
    keep_prefix: impl Fn(&[String]) -> bool,
    accept: impl Fn(&[String]) -> bool,
) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Word> = vec![Vec::new()];
    let mut seen = 0usize;
    for len in 0..=depth {
        let mut next = Vec::new();
        for w in frontier {
            seen += 1;
            if seen > budget {
                return Err(Error::DepthOverflow { budget });
            }
            if accept(&w) {
                out.insert(w.clone());
            }
            if len == depth {
                continue;
            }
            for e in alphabet.names() {
                let mut w2 = w.clone();
                w2.push(e.to_string());
                if keep_prefix(&w2) {
                    next.push(w2);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// `{ w ∈ superset* : |w| ≤ depth, P(w) ∈ l }`.
pub fn inverse_project(
    l: &BoundedLanguage,
    superset: &Alphabet,
    depth: usize,
    budget: usize,
) -> Result<BoundedLanguage> {
    let pre = closure(l);
    let words = search(
        superset,
        depth,
        budget,
        |w| pre.words.contains(&project_word(w, &l.alphabet)),
        |w| l.words.contains(&project_word(w, &l.alphabet)),
    )?;
    Ok(BoundedLanguage::from_parts(superset.clone(), depth, words))
}

/// Synchronous product by definition: `P1⁻¹(l1) ∩ P2⁻¹(l2)` up to `depth`.
pub fn shuffle_sync(
    l1: &BoundedLanguage,
    l2: &BoundedLanguage,
    depth: usize,
    budget: usize,
) -> Result<BoundedLanguage> {
    let alphabet = l1.alphabet.union(&l2.alphabet)?;
    let (c1, c2) = (closure(l1), closure(l2));
    let words = search(
        &alphabet,
        depth,
        budget,
        |w| c1.words.contains(&project_word(w, &l1.alphabet)) && c2.words.contains(&project_word(w, &l2.alphabet)),
        |w| l1.words.contains(&project_word(w, &l1.alphabet)) && l2.words.contains(&project_word(w, &l2.alphabet)),
    )?;
    Ok(BoundedLanguage::from_parts(alphabet, depth, words))
}

/// Least violation `su` of `closure(k) Σu ∩ plant ⊆ closure(k)`, considering
/// words of `plant` (a generated language) only.
pub fn controllability_violation(k: &BoundedLanguage, plant: &BoundedLanguage, sigma_u: &EventSet) -> Option<Word> {
    let kc = closure(k);
    plant
        .words
        .iter()
        .filter(|w| {
            w.last().is_some_and(|u| sigma_u.contains(u))
                && kc.words.contains(&w[..w.len() - 1])
                && !kc.words.contains(*w)
        })
        .min_by(|a, b| lenlex(&plant.alphabet, a, b))
        .cloned()
}

/// Supremal controllable sublanguage of `k ∩ plant_marked` with respect to
/// the generated language `plant`, by the word-level fixpoint
/// `C ← { s ∈ C : every prefix p, u ∈ Σu, pu ∈ plant ⇒ pu ∈ closure(C) }`.
/// Exact when `plant` and `k` are complete (finite languages).
pub fn supcon(
    k: &BoundedLanguage,
    plant: &BoundedLanguage,
    plant_marked: &BoundedLanguage,
    sigma_u: &EventSet,
) -> BoundedLanguage {
    let unc: Vec<&String> =
        plant.alphabet.events().iter().filter(|e| sigma_u.contains(&e.name)).map(|e| &e.name).collect();
    let mut c: BTreeSet<Word> = k.words.intersection(&plant_marked.words).cloned().collect();
    loop {
        let cl: BTreeSet<Word> = c.iter().flat_map(|w| prefixes(w).map(<[String]>::to_vec)).collect();
        let good_prefix = |p: &[String]| {
            unc.iter().all(|u| {
                let mut pu = p.to_vec();
                pu.push((*u).clone());
                !plant.words.contains(&pu) || cl.contains(&pu)
            })
        };
        let next: BTreeSet<Word> = c.iter().filter(|s| prefixes(s).all(good_prefix)).cloned().collect();
        if next == c {
            break;
        }
        c = next;
    }
    BoundedLanguage::from_parts(k.alphabet.clone(), k.depth.min(plant.depth), c)
}

/// `closure(k) Σu* ∩ plant`, restricted to the words of `plant`.
pub fn infcon(k: &BoundedLanguage, plant: &BoundedLanguage, sigma_u: &EventSet) -> BoundedLanguage {
    let kc = closure(k);
    let words = plant
        .words
        .iter()
        .filter(|w| (0..=w.len()).any(|i| kc.words.contains(&w[..i]) && w[i..].iter().all(|e| sigma_u.contains(e))))
        .cloned()
        .collect();
    BoundedLanguage::from_parts(plant.alphabet.clone(), plant.depth, words)
}

/// Least word of `P1k(k) ‖ P2k(k)` outside `k`, for a complete finite `k`.
pub fn cd_violation(
    k: &BoundedLanguage,
    sigma1: &Alphabet,
    sigma2: &Alphabet,
    sigma_k: &Alphabet,
    budget: usize,
) -> Result<Option<Word>> {
    let s1k = sigma1.union(sigma_k)?;
    let s2k = sigma2.union(sigma_k)?;
    let p1 = project(k, &s1k);
    let p2 = project(k, &s2k);
    let longest = |l: &BoundedLanguage| l.words.iter().map(Vec::len).max().unwrap_or(0);
    let depth = longest(&p1) + longest(&p2);
    let comp = shuffle_sync(&p1, &p2, depth, budget)?;
    Ok(comp.words.iter().filter(|w| !k.words.contains(*w)).min_by(|a, b| lenlex(&comp.alphabet, a, b)).cloned())
}

/// Direct evaluation of the observer definition on a complete finite
/// language `l`: for all `t ∈ P(l)` and `s ∈ closure(l)` with `P(s)` a
/// prefix of `t`, some `u` has `su ∈ l` and `P(su) = t`. Returns the least
/// violating `(s, t)`.
pub fn observer_violation(l: &BoundedLanguage, sigma0: &Alphabet) -> Option<(Word, Word)> {
    let targets: Vec<Word> = {
        let mut v: Vec<Word> = project(l, sigma0).words.into_iter().collect();
        v.sort_by(|a, b| lenlex(sigma0, a, b));
        v
    };
    let mut strings: Vec<Word> = closure(l).words.into_iter().collect();
    strings.sort_by(|a, b| lenlex(&l.alphabet, a, b));
    for s in &strings {
        let ps = project_word(s, sigma0);
        for t in &targets {
            if !t.starts_with(&ps) {
                continue;
            }
            let ok = l.words.iter().any(|w| w.starts_with(s) && project_word(w, sigma0) == *t);
            if !ok {
                return Some((s.clone(), t.clone()));
            }
        }
    }
    None
}

/// Least word of `closure(a) ‖ closure(b)` outside `closure(a ‖ b)`, with
/// everything computed up to `depth`.
pub fn nonconflict_violation(
    a: &BoundedLanguage,
    b: &BoundedLanguage,
    depth: usize,
    budget: usize,
) -> Result<Option<Word>> {
    let joint = closure(&shuffle_sync(a, b, depth, budget)?);
    let separate = shuffle_sync(&closure(a), &closure(b), depth, budget)?;
    Ok(separate.difference(&joint).first())
}

/// Least word of `generated` that is not a prefix of a word of `marked`.
pub fn blocking_violation(generated: &BoundedLanguage, marked: &BoundedLanguage) -> Option<Word> {
    generated.difference(&closure(marked)).first()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Generator;

    fn sig(names: &[&str]) -> Alphabet {
        Alphabet::with_controllable(names, &["b", "c"]).unwrap()
    }

    fn lang(names: &[&str], words: &[&str], depth: usize) -> BoundedLanguage {
        BoundedLanguage::new(
            sig(names),
            depth,
            words.iter().map(|w| w.split_whitespace().map(str::to_string).collect()),
        )
        .unwrap()
    }

    #[test]
    fn enumerate_coordinator_of_example_one() {
        let gk = Generator::from_words(sig(&["a", "d"]), &[vec!["a", "d"]]).unwrap();
        let m = enumerate(&gk, 2, LanguageKind::Marked).unwrap();
        assert_eq!(m.sorted(), vec![vec!["a".to_string(), "d".to_string()]]);
    }

    #[test]
    fn closure_lookahead_matches_padded_enumeration() {
        let g = Generator::from_words(sig(&["a", "b", "c"]), &[vec!["a", "b", "c", "c"], vec!["b"]]).unwrap();
        let direct = enumerate_closure(&g, 2, g.num_states()).unwrap();
        let padded = closure(&enumerate(&g, 2 + g.num_states(), LanguageKind::Marked).unwrap()).truncate(2);
        assert_eq!(direct.words(), padded.words());
        assert!(direct.contains(&["a", "b"]) && !direct.contains(&["b", "b"]));
    }

    #[test]
    fn depth_zero() {
        let gk = Generator::from_words(sig(&["a", "d"]), &[vec!["a", "d"]]).unwrap();
        assert!(enumerate(&gk, 0, LanguageKind::Marked).unwrap().is_empty());
        let g = enumerate(&gk, 0, LanguageKind::Generated).unwrap();
        assert_eq!(g.sorted(), vec![Vec::<String>::new()]);
    }

    #[test]
    fn supcon_example_one_is_empty() {
        let k = lang(&["a", "d"], &["a"], 2);
        let plant = lang(&["a", "d"], &["", "a", "a d"], 2);
        let u = sig(&["a", "d"]).uncontrollable();
        assert!(supcon(&k, &plant, &plant, &u).is_empty());
    }

    #[test]
    fn observer_identity_projection() {
        let l = lang(&["a", "b", "c"], &["a b", "c"], 2);
        assert!(observer_violation(&l, l.alphabet()).is_none());
        let (s, t) = observer_violation(&l, &sig(&["b"])).unwrap();
        // s = a cannot reach P⁻¹(ε) in l? it can't: a is only completed by b.
        assert!(!s.is_empty());
        assert!(t.len() <= 1);
    }

    #[test]
    fn shuffle_of_disjoint_alphabets_interleaves() {
        let a = lang(&["a"], &["a"], 1);
        let b = lang(&["b"], &["b"], 1);
        let s = shuffle_sync(&a, &b, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let s = sig(&["a", "b"]);
        let mut b = Generator::builder(s);
        b.state("x", true);
        b.transition("x", "a", "x").unwrap();
        b.transition("x", "b", "x").unwrap();
        let g = b.build("x").unwrap();
        assert!(matches!(enumerate_with_budget(&g, 20, LanguageKind::Marked, 1000), Err(Error::DepthOverflow { .. })));
    }
}
