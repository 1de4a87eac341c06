//! Agreement checks between the automaton operators and the bounded-language
//! oracle.
//!
//! Each check compares answers on words of length at most `depth`, after
//! enumerating the operands far enough that those answers are complete:
//! a closure lookahead needs `|Q|` extra steps, and finite-language
//! operators (sup C, observer, decomposability) need the whole language.
//! The latter are only meaningful for generators with finite marked
//! languages; [`language_bound`] reports whether that holds.

use std::fmt;

use crate::alphabet::{Alphabet, EventSet};
use crate::automata::{self, compose, project_onto, trim, LanguageKind};
use crate::coordination::{is_conditionally_decomposable, is_observer};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::oracle::{self, BoundedLanguage, DEFAULT_BUDGET};
use crate::synthesis::{inf_con_closed, is_controllable, sup_con};
use crate::verdict::{word_to_string, Verdict, Word};

/// Result of one comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub agrees: bool,
    pub detail: String,
}

impl Agreement {
    fn ok(detail: impl Into<String>) -> Self {
        Agreement { agrees: true, detail: detail.into() }
    }

    fn mismatch(detail: impl Into<String>) -> Self {
        Agreement { agrees: false, detail: detail.into() }
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.agrees { "agree" } else { "DISAGREE" };
        write!(f, "{tag}: {}", self.detail)
    }
}

/// Length of the longest word of `L(trim(g))`, or `None` if the trimmed
/// generator has a cycle (infinite marked language).
pub fn language_bound(g: &Generator) -> Option<usize> {
    let t = trim(g);
    if automata::is_empty_marked(&t) {
        return Some(0);
    }
    let n = t.num_states();
    let mut indeg = vec![0usize; n];
    for (_, _, d) in t.transitions() {
        indeg[d] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&q| indeg[q] == 0).collect();
    while let Some(q) = stack.pop() {
        order.push(q);
        for e in 0..t.alphabet().len() {
            if let Some(d) = t.step(q, e) {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    stack.push(d);
                }
            }
        }
    }
    if order.len() < n {
        return None;
    }
    let mut longest = vec![0usize; n];
    for &q in order.iter().rev() {
        for e in 0..t.alphabet().len() {
            if let Some(d) = t.step(q, e) {
                longest[q] = longest[q].max(longest[d] + 1);
            }
        }
    }
    Some(longest[t.initial()])
}

fn complete(g: &Generator, kind: LanguageKind) -> Result<BoundedLanguage> {
    let bound = language_bound(g)
        .ok_or_else(|| Error::PreconditionViolation("oracle check needs a generator with a finite language".into()))?;
    oracle::enumerate(&trim(g), bound, kind)
}

fn short(cx: Option<&Word>, depth: usize) -> Option<&Word> {
    cx.filter(|w| w.len() <= depth)
}

fn show(w: Option<&Word>) -> String {
    w.map_or_else(|| "none".into(), |w| format!("`{}`", word_to_string(w)))
}

fn compare_words(what: &str, automaton: Option<&Word>, oracle: Option<&Word>) -> Agreement {
    let detail = format!("{what}: automaton {}, oracle {}", show(automaton), show(oracle));
    if automaton == oracle {
        Agreement::ok(detail)
    } else {
        Agreement::mismatch(detail)
    }
}

fn compare_languages(what: &str, automaton: &BoundedLanguage, oracle: &BoundedLanguage) -> Agreement {
    let extra = automaton.difference(oracle).first();
    let missing = oracle.difference(automaton).first();
    match (extra, missing) {
        (None, None) => Agreement::ok(format!("{what}: {} words", automaton.len())),
        (e, m) => Agreement::mismatch(format!(
            "{what}: only automaton {}, only oracle {}",
            show(e.as_ref()),
            show(m.as_ref())
        )),
    }
}

/// Controllability verdicts and shortest counterexamples up to `depth`.
pub fn controllable(k: &Generator, plant: &Generator, sigma_u: &EventSet, depth: usize) -> Result<Agreement> {
    let v = is_controllable(k, plant, sigma_u)?;
    let kl = oracle::enumerate_closure(k, depth, k.num_states())?;
    let pl = oracle::enumerate(plant, depth, LanguageKind::Generated)?;
    let o = oracle::controllability_violation(&kl, &pl, sigma_u);
    Ok(compare_words("controllability", short(v.counterexample().map(|c| &c.word), depth), o.as_ref()))
}

/// `sup C` marked languages; requires finite languages.
pub fn supcon(k: &Generator, plant: &Generator, sigma_u: &EventSet) -> Result<Agreement> {
    let s = sup_con(k, plant, sigma_u)?.supervisor;
    let kl = complete(k, LanguageKind::Marked)?;
    let bound = language_bound(&plant.with_all_marked())
        .ok_or_else(|| Error::PreconditionViolation("oracle sup C needs a plant with a finite language".into()))?;
    let pg = oracle::enumerate(plant, bound, LanguageKind::Generated)?;
    let pm = oracle::enumerate(plant, bound, LanguageKind::Marked)?;
    let o = oracle::supcon(&kl, &pg, &pm, sigma_u);
    let a = oracle::enumerate(&s, bound, LanguageKind::Marked)?;
    let mut agreement = compare_languages("sup C", &a, &o);
    if agreement.agrees && oracle::controllability_violation(&o, &pg, sigma_u).is_some() {
        agreement = Agreement::mismatch("oracle sup C is not controllable");
    }
    Ok(agreement)
}

/// `inf C` languages up to `depth`.
pub fn infcon(k: &Generator, plant: &Generator, sigma_u: &EventSet, depth: usize) -> Result<Agreement> {
    let t = inf_con_closed(k, plant, sigma_u)?.supervisor;
    let kl = oracle::enumerate_closure(k, depth, k.num_states())?;
    let pl = oracle::enumerate(plant, depth, LanguageKind::Generated)?;
    let o = oracle::infcon(&kl, &pl, sigma_u);
    let a = oracle::enumerate(&t, depth, LanguageKind::Marked)?;
    Ok(compare_languages("inf C", &a, &o))
}

/// Nonconflict verdicts and shortest counterexamples; requires finite
/// languages.
pub fn nonconflicting(a: &Generator, b: &Generator) -> Result<Agreement> {
    let v = automata::is_nonconflicting(a, b)?;
    let al = complete(a, LanguageKind::Marked)?;
    let bl = complete(b, LanguageKind::Marked)?;
    let depth = al.depth() + bl.depth();
    let o = oracle::nonconflict_violation(&al, &bl, depth, DEFAULT_BUDGET)?;
    Ok(compare_words("nonconflict", v.counterexample().map(|c| &c.word), o.as_ref()))
}

/// Conditional decomposability; requires a finite specification. The
/// counterexamples must have equal length and the automaton's must be a
/// genuine violation (tie-breaking orders differ between the two sides).
pub fn decomposable(k: &Generator, sigma1: &Alphabet, sigma2: &Alphabet, sigma_k: &Alphabet) -> Result<Agreement> {
    let v = is_conditionally_decomposable(k, sigma1, sigma2, sigma_k)?;
    let kl = complete(k, LanguageKind::Marked)?;
    let o = oracle::cd_violation(&kl, sigma1, sigma2, sigma_k, DEFAULT_BUDGET)?;
    let a = v.counterexample().map(|c| &c.word);
    let detail = format!("decomposability: automaton {}, oracle {}", show(a), show(o.as_ref()));
    let agrees = match (a, &o) {
        (None, None) => true,
        (Some(w), Some(ow)) => {
            w.len() == ow.len() && !kl.words().contains(w) && {
                let s1k = sigma1.union(sigma_k)?;
                let s2k = sigma2.union(sigma_k)?;
                let p = |s: &Alphabet| oracle::project(&kl, s);
                let w1: Word = w.iter().filter(|e| s1k.contains(e)).cloned().collect();
                let w2: Word = w.iter().filter(|e| s2k.contains(e)).cloned().collect();
                p(&s1k).words().contains(&w1) && p(&s2k).words().contains(&w2)
            }
        }
        _ => false,
    };
    Ok(Agreement { agrees, detail })
}

/// Observer property; requires a finite marked language. The automaton's
/// counterexample must be a genuine violation of the definition.
pub fn observer(g: &Generator, sigma0: &Alphabet) -> Result<Agreement> {
    let v = is_observer(g, sigma0)?;
    let l = complete(g, LanguageKind::Marked)?;
    let o = oracle::observer_violation(&l, sigma0);
    let p = |w: &[String]| -> Word { w.iter().filter(|e| sigma0.contains(e)).cloned().collect() };
    let detail = format!(
        "observer: automaton {}, oracle {}",
        v.counterexample().map_or("holds".to_string(), |c| c.to_string()),
        o.as_ref().map_or("holds".to_string(), |(s, t)| format!("s=`{}` t=`{}`", word_to_string(s), word_to_string(t)))
    );
    let agrees = match (v, &o) {
        (Verdict::Holds, None) => true,
        (Verdict::Fails(cx), Some(_)) => {
            let s = &cx.word;
            let t = cx.target.clone().unwrap_or_default();
            let closure = oracle::closure(&l);
            closure.words().contains(s)
                && oracle::project(&l, sigma0).words().contains(&t)
                && t.starts_with(&p(s))
                && !l.words().iter().any(|w| w.starts_with(s) && p(w) == t)
        }
        _ => false,
    };
    Ok(Agreement { agrees, detail })
}

/// `Pk(L1 ‖ L2) = Pk(L1) ‖ Pk(L2)`: the automaton constructions are
/// compared by enumeration up to `depth` and then exactly; when both
/// languages are finite the identity is also evaluated purely on word sets.
pub fn projection_distributes(
    g1: &Generator,
    g2: &Generator,
    sigma_k: &Alphabet,
    kind: LanguageKind,
    depth: usize,
) -> Result<Agreement> {
    let whole = project_onto(&compose(g1, g2)?, sigma_k);
    let parts = compose(&project_onto(g1, sigma_k), &project_onto(g2, sigma_k))?;
    let lhs = oracle::enumerate(&whole, depth, kind)?;
    let rhs = oracle::enumerate(&parts, depth, kind)?;
    let a = compare_languages("Pk(L1 ‖ L2) vs Pk(L1) ‖ Pk(L2)", &lhs, &rhs);
    if !a.agrees {
        return Ok(a);
    }
    if let Verdict::Fails(cx) = automata::language_equal(&whole, &parts, kind)? {
        return Ok(Agreement::mismatch(format!("languages differ beyond depth {depth}: {cx}")));
    }
    let finite = |g: &Generator| match kind {
        LanguageKind::Generated => language_bound(&g.with_all_marked()),
        LanguageKind::Marked => language_bound(g),
    };
    if let (Some(b1), Some(b2)) = (finite(g1), finite(g2)) {
        let l1 = oracle::enumerate(&trim_for(g1, kind), b1, kind)?;
        let l2 = oracle::enumerate(&trim_for(g2, kind), b2, kind)?;
        let joint = oracle::shuffle_sync(&l1, &l2, b1 + b2, DEFAULT_BUDGET)?;
        let k1 = sigma_k.intersection(g1.alphabet());
        let k2 = sigma_k.intersection(g2.alphabet());
        let (p1, p2) = (oracle::project(&l1, &k1), oracle::project(&l2, &k2));
        let set_lhs = oracle::project(&joint, &k1.union(&k2)?);
        let set_rhs = oracle::shuffle_sync(&p1, &p2, b1 + b2, DEFAULT_BUDGET)?;
        let s = compare_languages("set-level Pk(L1 ‖ L2) vs Pk(L1) ‖ Pk(L2)", &set_lhs, &set_rhs);
        if !s.agrees {
            return Ok(s);
        }
        let auto = oracle::enumerate(&whole, b1 + b2, kind)?;
        let s = compare_languages("automaton vs set-level Pk(L1 ‖ L2)", &auto, &set_lhs);
        if !s.agrees {
            return Ok(s);
        }
    }
    Ok(a)
}

fn trim_for(g: &Generator, kind: LanguageKind) -> Generator {
    match kind {
        LanguageKind::Generated => automata::accessible(g),
        LanguageKind::Marked => trim(g),
    }
}

/// `enumerate(a ‖ b) = shuffle(enumerate(a), enumerate(b))` at `depth`.
pub fn composition(a: &Generator, b: &Generator, kind: LanguageKind, depth: usize) -> Result<Agreement> {
    let c = oracle::enumerate(&compose(a, b)?, depth, kind)?;
    let al = oracle::enumerate(a, depth, kind)?;
    let bl = oracle::enumerate(b, depth, kind)?;
    let s = oracle::shuffle_sync(&al, &bl, depth, DEFAULT_BUDGET)?;
    Ok(compare_languages("composition", &c, &s))
}
