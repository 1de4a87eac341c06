//! Coordination control: coordinators, conditional decomposability, the
//! observer property, (relaxed) conditional controllability and the
//! distributed supervisor fixpoints.
//!
//! Supremal controllable sublanguages here are always taken with respect to
//! the generated language of the local plant, so plants are passed to
//! [`sup_con`] with every state marked.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::alphabet::Alphabet;
use crate::automata::{
    self, compose, is_empty_marked, is_nonconflicting, language_inclusion, minimize, prefix_closure, project_onto,
    trim, LanguageKind,
};
use crate::error::{Error, Result};
use crate::generator::{Generator, StateId};
use crate::synthesis::{is_controllable, sup_con};
use crate::verdict::{Counterexample, Reason, Verdict, Word};

/// Checks `Σ1 ∩ Σ2 ⊆ Σk ⊆ Σ1 ∪ Σ2`.
pub fn check_sandwich(sigma1: &Alphabet, sigma2: &Alphabet, sigma_k: &Alphabet) -> Result<()> {
    let union = sigma1.union(sigma2)?;
    union.check_compatible(sigma_k)?;
    if let Some(e) = sigma_k.names().find(|e| !union.contains(e)) {
        return Err(Error::AlphabetBounds(format!("coordinator event `{e}` is in neither plant alphabet")));
    }
    if let Some(e) = sigma1.intersection(sigma2).names().find(|e| !sigma_k.contains(e)) {
        return Err(Error::AlphabetBounds(format!("shared event `{e}` missing from the coordinator alphabet")));
    }
    Ok(())
}

/// `Pk(G1) ‖ Pk(G2)` over `Σk`.
pub fn build_coordinator(g1: &Generator, g2: &Generator, sigma_k: &Alphabet) -> Result<Generator> {
    check_sandwich(g1.alphabet(), g2.alphabet(), sigma_k)?;
    let gk = compose(&project_onto(g1, sigma_k), &project_onto(g2, sigma_k))?;
    let sigma_k = sigma_k_flags(g1.alphabet(), g2.alphabet(), sigma_k)?;
    Ok(gk.reindexed(&sigma_k))
}

/// `Σk` with the controllability flags of the plants, in `Σk`'s order.
fn sigma_k_flags(sigma1: &Alphabet, sigma2: &Alphabet, sigma_k: &Alphabet) -> Result<Alphabet> {
    let names: Vec<&str> = sigma_k.names().collect();
    sigma1.union(sigma2)?.restrict(&names)
}

/// Plant generated language as a marked language.
fn closed(g: &Generator) -> Generator {
    g.with_all_marked()
}

/// Problem data shared by the coordination frameworks.
#[derive(Clone, Debug)]
pub struct CoordinationInstance {
    g1: Generator,
    g2: Generator,
    spec: Generator,
    sigma_k: Alphabet,
    coordinator: Generator,
}

impl CoordinationInstance {
    /// Validates the alphabets and builds the coordinator `Pk(G1) ‖ Pk(G2)`.
    pub fn new(g1: Generator, g2: Generator, spec: Generator, sigma_k: &Alphabet) -> Result<Self> {
        check_sandwich(g1.alphabet(), g2.alphabet(), sigma_k)?;
        let union = g1.alphabet().union(g2.alphabet())?;
        if !spec.alphabet().same_events(&union) || union.check_compatible(spec.alphabet()).is_err() {
            return Err(Error::AlphabetMismatch(format!(
                "specification alphabet {} differs from Σ1∪Σ2 = {}",
                spec.alphabet(),
                union
            )));
        }
        let sigma_k = sigma_k_flags(g1.alphabet(), g2.alphabet(), sigma_k)?;
        let coordinator = build_coordinator(&g1, &g2, &sigma_k)?;
        Ok(CoordinationInstance { g1, g2, spec, sigma_k, coordinator })
    }

    /// Replaces the coordinator (it must be a generator over `Σk`).
    pub fn with_coordinator(mut self, coordinator: Generator) -> Result<Self> {
        if !coordinator.alphabet().same_events(&self.sigma_k) {
            return Err(Error::AlphabetMismatch(format!(
                "coordinator alphabet {} differs from Σk = {}",
                coordinator.alphabet(),
                self.sigma_k
            )));
        }
        self.coordinator = coordinator.reindexed(&self.sigma_k);
        Ok(self)
    }

    pub fn plant(&self, i: usize) -> &Generator {
        match i {
            1 => &self.g1,
            2 => &self.g2,
            _ => panic!("subsystem index must be 1 or 2"),
        }
    }

    pub fn spec(&self) -> &Generator {
        &self.spec
    }

    pub fn sigma_k(&self) -> &Alphabet {
        &self.sigma_k
    }

    pub fn coordinator(&self) -> &Generator {
        &self.coordinator
    }

    /// `Σi ∪ Σk`.
    pub fn sigma_ik(&self, i: usize) -> Alphabet {
        self.plant(i).alphabet().union(&self.sigma_k).expect("validated at construction")
    }

    /// `P_{i+k}(K)`.
    pub fn spec_part(&self, i: usize) -> Generator {
        project_onto(&self.spec, &self.sigma_ik(i))
    }

    /// `Pk(K)`.
    pub fn spec_k(&self) -> Generator {
        project_onto(&self.spec, &self.sigma_k)
    }

    /// `Gi ‖ Gk`.
    pub fn local_plant(&self, i: usize) -> Result<Generator> {
        compose(self.plant(i), &self.coordinator)
    }

    pub fn is_conditionally_decomposable(&self) -> Result<Verdict> {
        is_conditionally_decomposable(&self.spec, self.g1.alphabet(), self.g2.alphabet(), &self.sigma_k)
    }

    fn require_cd(&self) -> Result<()> {
        match self.is_conditionally_decomposable()? {
            Verdict::Holds => Ok(()),
            Verdict::Fails(cx) => {
                Err(Error::PreconditionViolation(format!("specification is not conditionally decomposable ({cx})")))
            }
        }
    }
}

/// Whether `Lm(k) = P1k(Lm(k)) ‖ P2k(Lm(k))`; the counterexample is the
/// shortest word of the composition outside `Lm(k)`.
pub fn is_conditionally_decomposable(
    k: &Generator,
    sigma1: &Alphabet,
    sigma2: &Alphabet,
    sigma_k: &Alphabet,
) -> Result<Verdict> {
    check_sandwich(sigma1, sigma2, sigma_k)?;
    let union = sigma1.union(sigma2)?;
    if !k.alphabet().same_events(&union) {
        return Err(Error::AlphabetBounds(format!(
            "specification alphabet {} differs from Σ1∪Σ2 = {}",
            k.alphabet(),
            union
        )));
    }
    let k = trim(k);
    let parts = compose(&project_onto(&k, &sigma1.union(sigma_k)?), &project_onto(&k, &sigma2.union(sigma_k)?))?;
    Ok(match language_inclusion(&parts, &k, LanguageKind::Marked)? {
        Verdict::Holds => Verdict::Holds,
        Verdict::Fails(cx) => Verdict::Fails(
            Counterexample::new(cx.word, Reason::CdViolation).with_detail("in P1+k(K) ‖ P2+k(K) but not in K"),
        ),
    })
}

/// Greedily enlarges `Σk0` until both `K` and its closure are conditionally
/// decomposable: each round adds the first event of the shortest
/// counterexample that is not yet in `Σk`.
pub fn extend_for_cd(k: &Generator, sigma1: &Alphabet, sigma2: &Alphabet, sigma_k0: &Alphabet) -> Result<Alphabet> {
    let union = sigma1.union(sigma2)?;
    let mut sigma_k = sigma_k_flags(sigma1, sigma2, sigma_k0)?;
    let closure = prefix_closure(k);
    loop {
        let mut failure = None;
        for lang in [k, &closure] {
            if let Verdict::Fails(cx) = is_conditionally_decomposable(lang, sigma1, sigma2, &sigma_k)? {
                failure = Some(cx.word);
                break;
            }
        }
        let Some(word) = failure else { return Ok(sigma_k) };
        let next = word
            .iter()
            .find(|e| !sigma_k.contains(e))
            .cloned()
            .or_else(|| union.names().find(|e| !sigma_k.contains(e)).map(str::to_string));
        let Some(next) = next else {
            return Err(Error::Invariant("Σk = Σ1∪Σ2 but conditional decomposability fails".into()));
        };
        sigma_k = sigma_k.with_event(union.get(&next).expect("event of Σ1∪Σ2").clone())?;
    }
}

/// Exact observer check for the projection onto `sigma0` and `Lm(g)`.
///
/// Walks the product of `trim(g)` with the determinized projection. At a
/// pair `(q, d)` reached by `s`, the continuations that the projection
/// promises are `Lm(D from d)`; the ones `g` can deliver are
/// `P(Lm(g from q))`. The property holds iff the first is included in the
/// second at every reachable pair. A failure yields `s` and the target
/// `t = P(s)·v` that no continuation of `s` can realize.
pub fn is_observer(g: &Generator, sigma0: &Alphabet) -> Result<Verdict> {
    if let Some(e) = sigma0.names().find(|e| !g.alphabet().contains(e)) {
        return Err(Error::AlphabetBounds(format!("observed event `{e}` is not in {}", g.alphabet())));
    }
    let t = trim(g);
    if is_empty_marked(&t) {
        return Ok(Verdict::Holds);
    }
    let alph = t.alphabet().clone();
    let d = project_onto(&t, sigma0);
    let observed: Vec<Option<usize>> = alph.names().map(|n| d.alphabet().position(n)).collect();

    let mut local: HashMap<StateId, Generator> = HashMap::new();
    let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    let mut keys: Vec<(StateId, StateId)> = Vec::new();
    let mut queue = VecDeque::new();
    let start = (t.initial(), d.initial());
    index.insert(start, 0);
    keys.push(start);
    parent.push(None);
    queue.push_back(0);

    while let Some(id) = queue.pop_front() {
        let (q, x) = keys[id];
        let from_q = local.entry(q).or_insert_with(|| project_onto(&t.with_initial(q), sigma0));
        if let Verdict::Fails(cx) = language_inclusion(&d.with_initial(x), from_q, LanguageKind::Marked)? {
            let s = path_word(&alph, &parent, id);
            let mut target: Word = s.iter().filter(|e| sigma0.contains(e)).cloned().collect();
            target.extend(cx.word);
            return Ok(Verdict::Fails(
                Counterexample::new(s, Reason::ObserverViolation)
                    .with_target(target)
                    .with_detail("no continuation realizes the projected target"),
            ));
        }
        for (e, obs) in observed.iter().enumerate() {
            let Some(nq) = t.step(q, e) else { continue };
            let nx = match obs {
                Some(oe) => d.step(x, *oe).expect("projection of a trim generator covers its words"),
                None => x,
            };
            if let Entry::Vacant(slot) = index.entry((nq, nx)) {
                slot.insert(keys.len());
                keys.push((nq, nx));
                parent.push(Some((id, e)));
                queue.push_back(keys.len() - 1);
            }
        }
    }
    Ok(Verdict::Holds)
}

fn path_word(alph: &Alphabet, parent: &[Option<(usize, usize)>], mut id: usize) -> Word {
    let mut w = Vec::new();
    while let Some((p, e)) = parent[id] {
        w.push(alph.event(e).name.clone());
        id = p;
    }
    w.reverse();
    w
}

/// Greedily enlarges `sigma0` until the projection is an `Lm(g)`-observer:
/// each round adds the last unobserved event of the counterexample prefix
/// (where the silent continuation went astray), else the first unobserved
/// event in alphabet order.
pub fn extend_for_observer(g: &Generator, sigma0: &Alphabet) -> Result<Alphabet> {
    let alph = g.alphabet();
    let names: Vec<&str> = sigma0.names().collect();
    let mut sigma = alph
        .restrict(&names)
        .map_err(|_| Error::AlphabetBounds(format!("observed alphabet {sigma0} is not a subset of {alph}")))?;
    loop {
        let Verdict::Fails(cx) = is_observer(g, &sigma)? else { return Ok(sigma) };
        let next = cx
            .word
            .iter()
            .rev()
            .find(|e| !sigma.contains(e))
            .cloned()
            .or_else(|| alph.names().find(|e| !sigma.contains(e)).map(str::to_string));
        let Some(next) = next else {
            return Err(Error::Invariant("identity projection reported as non-observer".into()));
        };
        sigma = sigma.with_event(alph.get(&next).expect("event of g").clone())?;
    }
}

/// `P_{i+k}(K)` controllable w.r.t. `L(Gi ‖ Gk)` for `i = 1, 2`.
pub fn is_relaxed_cond_controllable(inst: &CoordinationInstance) -> Result<Verdict> {
    inst.require_cd()?;
    for i in [1, 2] {
        let plant = inst.local_plant(i)?;
        let v = is_controllable(&inst.spec_part(i), &plant, &inst.sigma_ik(i).uncontrollable())?;
        if !v.holds() {
            return Ok(v.annotate(format!("P{i}+k(K) vs L(G{i} ‖ Gk)")));
        }
    }
    Ok(Verdict::Holds)
}

/// The original conditions: `Pk(K)` controllable w.r.t. `L(Gk)`, and
/// `P_{i+k}(K)` controllable w.r.t. `L(Gi) ‖ closure(Pk(K))`.
pub fn is_cond_controllable(inst: &CoordinationInstance) -> Result<Verdict> {
    inst.require_cd()?;
    let pk = inst.spec_k();
    let v = is_controllable(&pk, inst.coordinator(), &inst.sigma_k().uncontrollable())?;
    if !v.holds() {
        return Ok(v.annotate("Pk(K) vs L(Gk)"));
    }
    let pk_closed = prefix_closure(&pk);
    for i in [1, 2] {
        let plant = if is_empty_marked(&pk_closed) {
            Generator::empty(inst.sigma_ik(i))
        } else {
            compose(inst.plant(i), &pk_closed)?
        };
        let v = is_controllable(&inst.spec_part(i), &plant, &inst.sigma_ik(i).uncontrollable())?;
        if !v.holds() {
            return Ok(v.annotate(format!("P{i}+k(K) vs L(G{i}) ‖ closure(Pk(K))")));
        }
    }
    Ok(Verdict::Holds)
}

/// Local supervisors over `Σi ∪ Σk`, plus the coordinator-level supervisor
/// when the framework uses one.
#[derive(Clone, Debug)]
pub struct DistributedSupervisors {
    pub s1k: Generator,
    pub s2k: Generator,
    pub k_prime: Option<Generator>,
}

impl DistributedSupervisors {
    pub fn part(&self, i: usize) -> &Generator {
        match i {
            1 => &self.s1k,
            2 => &self.s2k,
            _ => panic!("subsystem index must be 1 or 2"),
        }
    }

    /// `Lm(s1k) ‖ Lm(s2k)` (and `k_prime` when present).
    pub fn composition(&self) -> Result<Generator> {
        let mut g = compose(&self.s1k, &self.s2k)?;
        if let Some(k) = &self.k_prime {
            g = compose(&g, k)?;
        }
        Ok(g)
    }
}

/// `sup rC_{i+k} = sup C(P_{i+k}(K), L(Gi ‖ Gk), Σ_{i+k,u})`.
pub fn sup_rc_parts(inst: &CoordinationInstance) -> Result<DistributedSupervisors> {
    inst.require_cd()?;
    let part = |i| -> Result<Generator> {
        let plant = closed(&inst.local_plant(i)?);
        Ok(sup_con(&inst.spec_part(i), &plant, &inst.sigma_ik(i).uncontrollable())?.supervisor)
    };
    Ok(DistributedSupervisors { s1k: part(1)?, s2k: part(2)?, k_prime: None })
}

/// Original framework: `sup C_k = sup C(Pk(K), L(Gk))` and
/// `sup C_{i+k} = sup C(P_{i+k}(K), L(Gi) ‖ closure(sup C_k))`.
pub fn sup_cc_parts(inst: &CoordinationInstance) -> Result<DistributedSupervisors> {
    inst.require_cd()?;
    let k_prime = sup_con(&inst.spec_k(), &closed(inst.coordinator()), &inst.sigma_k().uncontrollable())?.supervisor;
    let part = |i| -> Result<Generator> {
        let sigma = inst.sigma_ik(i);
        if is_empty_marked(&k_prime) {
            return Ok(Generator::empty(sigma));
        }
        let plant = closed(&compose(inst.plant(i), &prefix_closure(&k_prime))?);
        Ok(sup_con(&inst.spec_part(i), &plant, &sigma.uncontrollable())?.supervisor)
    };
    Ok(DistributedSupervisors { s1k: part(1)?, s2k: part(2)?, k_prime: Some(k_prime) })
}

/// Outcome of the sufficient test for `s1k ‖ s2k` being the supremal
/// relaxed conditionally controllable sublanguage.
#[derive(Clone, Debug)]
pub enum CompositionVerdict {
    Supremal,
    NeedsKPrime(Counterexample),
}

impl CompositionVerdict {
    pub fn is_supremal(&self) -> bool {
        matches!(self, CompositionVerdict::Supremal)
    }
}

fn coordinator_projections(parts: &DistributedSupervisors, coordinator: &Generator) -> [Generator; 2] {
    let sk = coordinator.alphabet();
    [project_onto(&parts.s1k, sk).reindexed(sk), project_onto(&parts.s2k, sk).reindexed(sk)]
}

/// Tests the two sufficient conditions: the parts are nonconflicting, and
/// `Pk(s1k) ∩ Pk(s2k)` is controllable w.r.t. `L(Gk)`.
pub fn check_optimal_composition(
    parts: &DistributedSupervisors,
    coordinator: &Generator,
) -> Result<CompositionVerdict> {
    if let Verdict::Fails(cx) = is_nonconflicting(&parts.s1k, &parts.s2k)? {
        return Ok(CompositionVerdict::NeedsKPrime(cx.with_detail("s1k and s2k conflict")));
    }
    let [p1, p2] = coordinator_projections(parts, coordinator);
    let meet = compose(&p1, &p2)?;
    let v = is_controllable(&meet, coordinator, &coordinator.alphabet().uncontrollable())?;
    Ok(match v {
        Verdict::Holds => CompositionVerdict::Supremal,
        Verdict::Fails(cx) => {
            CompositionVerdict::NeedsKPrime(cx.with_detail("Pk(s1k) ∩ Pk(s2k) not controllable w.r.t. L(Gk)"))
        }
    })
}

/// `sup C'_k = sup C(Pk(s1k) ∩ Pk(s2k), L(Gk), Σ_{k,u})`.
pub fn sup_c_k_prime(parts: &DistributedSupervisors, coordinator: &Generator) -> Result<Generator> {
    let [p1, p2] = coordinator_projections(parts, coordinator);
    let meet = compose(&p1, &p2)?;
    Ok(sup_con(&meet, &closed(coordinator), &coordinator.alphabet().uncontrollable())?.supervisor)
}

/// The two local factors `sup C(Pk(s_ik), L(Gk))` whose intersection is the
/// distributed form of `sup C'_k`.
pub fn sup_c_k_prime_local(parts: &DistributedSupervisors, coordinator: &Generator) -> Result<[Generator; 2]> {
    let sigma_u = coordinator.alphabet().uncontrollable();
    let plant = closed(coordinator);
    let [p1, p2] = coordinator_projections(parts, coordinator);
    Ok([sup_con(&p1, &plant, &sigma_u)?.supervisor, sup_con(&p2, &plant, &sigma_u)?.supervisor])
}

/// Coordinator for nonconflictingness:
/// `L_C = sup C(P0(s1k) ‖ P0(s2k), closure(P0(s1k)) ‖ closure(P0(s2k)), Σ_{0,u})`,
/// returned as a minimal nonblocking generator over `Σ0`.
pub fn nonconflict_coordinator(parts: &DistributedSupervisors, sigma0: &Alphabet) -> Result<Generator> {
    let union = parts.s1k.alphabet().union(parts.s2k.alphabet())?;
    if let Some(e) = sigma0.names().find(|e| !union.contains(e)) {
        return Err(Error::AlphabetBounds(format!("Σ0 event `{e}` is outside both supervisors")));
    }
    let names: Vec<&str> = sigma0.names().collect();
    let sigma0 = union.restrict(&names)?;
    for s in [&parts.s1k, &parts.s2k] {
        if let Verdict::Fails(cx) = is_observer(s, &sigma0.intersection(s.alphabet()))? {
            return Err(Error::ObserverViolation(cx));
        }
    }
    if is_empty_marked(&parts.s1k) || is_empty_marked(&parts.s2k) {
        return Ok(Generator::empty(sigma0));
    }
    let p1 = project_onto(&parts.s1k, &sigma0);
    let p2 = project_onto(&parts.s2k, &sigma0);
    let spec = compose(&p1, &p2)?;
    let plant = compose(&prefix_closure(&p1), &prefix_closure(&p2))?;
    let lc = sup_con(&spec, &plant, &sigma0.uncontrollable())?.supervisor;
    Ok(minimize(&automata::trim(&lc)).reindexed(&sigma0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> CoordinationInstance {
        let s1 = Alphabet::with_controllable(&["a", "a1", "b", "d"], &["b"]).unwrap();
        let s2 = Alphabet::with_controllable(&["a", "a2", "c", "d"], &["c"]).unwrap();
        let all = s1.union(&s2).unwrap();
        let g1 = Generator::from_words(s1, &[vec!["a", "a1", "b", "d"]]).unwrap();
        let g2 = Generator::from_words(s2, &[vec!["a", "a2", "c", "d"]]).unwrap();
        let k = Generator::from_words(all, &[vec!["a", "a1", "a2"], vec!["a", "a2", "a1"]]).unwrap();
        let sk = Alphabet::with_controllable(&["a", "d"], &[]).unwrap();
        CoordinationInstance::new(g1, g2, k, &sk).unwrap()
    }

    #[test]
    fn example_one_coordinator_and_cd() {
        let inst = ex1();
        let gk = inst.coordinator();
        assert!(gk.accepts(&["a", "d"]));
        assert_eq!(gk.num_states(), 3);
        assert!(inst.is_conditionally_decomposable().unwrap().holds());
        assert!(is_relaxed_cond_controllable(&inst).unwrap().holds());
        let v = is_cond_controllable(&inst).unwrap();
        assert_eq!(v.counterexample().unwrap().word, vec!["a", "d"]);
    }

    #[test]
    fn example_one_parts() {
        let inst = ex1();
        let rc = sup_rc_parts(&inst).unwrap();
        assert!(rc.s1k.accepts(&["a", "a1"]) && rc.s2k.accepts(&["a", "a2"]));
        let cc = sup_cc_parts(&inst).unwrap();
        assert!(is_empty_marked(cc.k_prime.as_ref().unwrap()));
        assert!(is_empty_marked(&cc.s1k) && is_empty_marked(&cc.s2k));
        let verdict = check_optimal_composition(&rc, inst.coordinator()).unwrap();
        assert!(!verdict.is_supremal());
        assert!(is_empty_marked(&sup_c_k_prime(&rc, inst.coordinator()).unwrap()));
    }

    #[test]
    fn sandwich_violations() {
        let inst = ex1();
        let bad = Alphabet::with_controllable(&["d"], &[]).unwrap();
        assert!(matches!(build_coordinator(inst.plant(1), inst.plant(2), &bad), Err(Error::AlphabetBounds(_))));
    }

    #[test]
    fn observer_example() {
        let s = Alphabet::with_controllable(&["a", "b", "c"], &[]).unwrap();
        let g = Generator::from_words(s.clone(), &[vec!["a", "b"], vec!["c"]]).unwrap();
        let s0 = s.restrict(&["b"]).unwrap();
        let v = is_observer(&g, &s0).unwrap();
        let cx = v.counterexample().unwrap();
        // `a` can only complete to `ab`, so the target ε is unreachable from it.
        assert_eq!(cx.word, vec!["a"]);
        assert_eq!(cx.target.as_deref(), Some(&[][..]));
        assert!(is_observer(&g, &s).unwrap().holds());
        let ext = extend_for_observer(&g, &s0).unwrap();
        assert!(is_observer(&g, &ext).unwrap().holds());
        assert!(ext.contains("c"));
    }

    #[test]
    fn shuffle_spec_is_not_cd_without_coordinator() {
        let s1 = Alphabet::with_controllable(&["a"], &[]).unwrap();
        let s2 = Alphabet::with_controllable(&["b"], &[]).unwrap();
        let all = s1.union(&s2).unwrap();
        let k = Generator::from_words(all.clone(), &[vec!["a", "b"]]).unwrap();
        let v = is_conditionally_decomposable(&k, &s1, &s2, &Alphabet::empty()).unwrap();
        assert_eq!(v.counterexample().unwrap().word, vec!["b", "a"]);
        let ext = extend_for_cd(&k, &s1, &s2, &Alphabet::empty()).unwrap();
        assert!(is_conditionally_decomposable(&k, &s1, &s2, &ext).unwrap().holds());
        let both = Generator::from_words(all, &[vec!["a", "b"], vec!["b", "a"]]).unwrap();
        assert!(is_conditionally_decomposable(&both, &s1, &s2, &Alphabet::empty()).unwrap().holds());
    }
}
