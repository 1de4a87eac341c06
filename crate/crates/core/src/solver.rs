//! End-to-end solution of the distributed supervision problem: existence
//! test on the prefix-closure, marking lift, verification of the closed
//! loop, and the relaxed coordination fallback.
//!
//! Supervisors are marking supervisors: a supervisor `S` for plant `G`
//! yields the closed loop `L(S/G) = L(S) ∩ L(G)` and
//! `Lm(S/G) = Lm(S) ∩ L(G)`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::automata::{
    self, compose, is_empty_marked, is_nonconflicting, is_prefix_closed, language_equal, language_inclusion, minimize,
    prefix_closure, project_onto, trim, LanguageKind,
};
use crate::coordination::{
    self, extend_for_cd, extend_for_observer, is_observer, nonconflict_coordinator, sup_rc_parts, CoordinationInstance,
    DistributedSupervisors,
};
use crate::error::{Error, Result};
use crate::generator::{Generator, StateId};
use crate::synthesis::{inf_con_closed, is_controllable};
use crate::verdict::{word_to_string, Counterexample, Reason, Verdict};

/// Knobs for instance construction and the fallback pipeline.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Enlarge `Σk` until `K` and its closure are conditionally decomposable.
    pub auto_extend_cd: bool,
    /// Enlarge `Σ0` until the observer precondition of the nonconflict
    /// coordinator holds; otherwise a violation is an error.
    pub auto_extend_observer: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { auto_extend_cd: false, auto_extend_observer: true }
    }
}

/// A validated problem: plants, a specification `K ⊆ L(G1 ‖ G2)` with `K`
/// and its closure conditionally decomposable, and the coordinator.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    coord: CoordinationInstance,
    options: SolveOptions,
}

impl ProblemInstance {
    pub fn new(g1: Generator, g2: Generator, spec: Generator, sigma_k: &Alphabet) -> Result<Self> {
        Self::with_options(g1, g2, spec, sigma_k, SolveOptions::default())
    }

    pub fn with_options(
        g1: Generator,
        g2: Generator,
        spec: Generator,
        sigma_k: &Alphabet,
        options: SolveOptions,
    ) -> Result<Self> {
        let sigma_k = if options.auto_extend_cd {
            coordination::check_sandwich(g1.alphabet(), g2.alphabet(), sigma_k)?;
            extend_for_cd(&spec, g1.alphabet(), g2.alphabet(), sigma_k)?
        } else {
            sigma_k.clone()
        };
        let coord = CoordinationInstance::new(g1, g2, spec, &sigma_k)?;
        let spec = trim(coord.spec());
        let plant = compose(coord.plant(1), coord.plant(2))?.with_all_marked();
        if let Verdict::Fails(cx) = language_inclusion(&spec, &plant, LanguageKind::Marked)? {
            return Err(Error::SpecOutsidePlant(cx));
        }
        for (what, k) in [("K", coord.spec().clone()), ("closure(K)", prefix_closure(coord.spec()))] {
            let v = coordination::is_conditionally_decomposable(
                &k,
                coord.plant(1).alphabet(),
                coord.plant(2).alphabet(),
                coord.sigma_k(),
            )?;
            if let Verdict::Fails(cx) = v {
                return Err(Error::PreconditionViolation(format!("{what} is not conditionally decomposable: {cx}")));
            }
        }
        Ok(ProblemInstance { coord, options })
    }

    pub fn coordination(&self) -> &CoordinationInstance {
        &self.coord
    }

    pub fn options(&self) -> SolveOptions {
        self.options
    }

    pub fn sigma_k(&self) -> &Alphabet {
        self.coord.sigma_k()
    }

    pub fn coordinator(&self) -> &Generator {
        self.coord.coordinator()
    }

    /// The same problem for `closure(K)`. Plants keep their generated
    /// languages but have every state marked, since `closure(K)` need not
    /// lie in `Lm(G1 ‖ G2)`.
    pub fn closure_instance(&self) -> Result<ProblemInstance> {
        ProblemInstance::with_options(
            self.coord.plant(1).with_all_marked(),
            self.coord.plant(2).with_all_marked(),
            prefix_closure(self.coord.spec()),
            self.coord.sigma_k(),
            SolveOptions { auto_extend_cd: false, ..self.options },
        )
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Certificate {
    fn new(name: impl Into<String>, v: &Verdict) -> Self {
        Certificate { name: name.into(), holds: v.holds(), counterexample: v.counterexample().map(ToString::to_string) }
    }
}

fn check_part_alphabet(s: &Generator, inst: &ProblemInstance, i: usize) -> Result<()> {
    let sigma = inst.coord.sigma_ik(i);
    if !s.alphabet().same_events(&sigma) {
        return Err(Error::AlphabetMismatch(format!("supervisor {i} is over {} but Σ{i}∪Σk = {sigma}", s.alphabet())));
    }
    Ok(())
}

/// `S / (Gi ‖ Gk)` under marking-supervisor semantics.
fn closed_loop(s: &Generator, inst: &ProblemInstance, i: usize) -> Result<Generator> {
    compose(s, &inst.coord.local_plant(i)?.with_all_marked())
}

/// Evaluates every clause of the characterization and reports each one:
/// (a), (b) the projected equations, (c) nonblocking and controllability
/// of each closed loop, (d) nonconflict, and the resulting equalities with
/// `K` and its closure.
pub fn verify_clauses(s1: &Generator, s2: &Generator, inst: &ProblemInstance) -> Result<Vec<Certificate>> {
    check_part_alphabet(s1, inst, 1)?;
    check_part_alphabet(s2, inst, 2)?;
    let sk = inst.sigma_k();
    let sup = [s1, s2];
    let loops = [closed_loop(s1, inst, 1)?, closed_loop(s2, inst, 2)?];
    let mut out = Vec::new();
    for (i, clause) in [(1usize, "a"), (2, "b")] {
        let other = project_onto(sup[2 - i], sk);
        let lhs = compose(&loops[i - 1], &other)?;
        let v = language_equal(&lhs, &inst.coord.spec_part(i), LanguageKind::Marked)?;
        out.push(Certificate::new(format!("({clause}) Lm(S{i}/(G{i}‖Gk)) ‖ Pk(S{}) = P{i}+k(K)", 3 - i), &v));
    }
    for i in [1, 2] {
        let v: Verdict =
            automata::blocking_word(&loops[i - 1]).map(|w| Counterexample::new(w, Reason::Blocking)).into();
        out.push(Certificate::new(format!("(c) S{i}/(G{i}‖Gk) nonblocking"), &v));
        let v = is_controllable(
            &trim(&loops[i - 1]),
            &inst.coord.local_plant(i)?,
            &inst.coord.sigma_ik(i).uncontrollable(),
        )?;
        out.push(Certificate::new(format!("(c) Lm(S{i}/(G{i}‖Gk)) controllable"), &v));
    }
    let v = is_nonconflicting(&loops[0], &loops[1])?;
    out.push(Certificate::new("(d) closed loops nonconflicting", &v));
    let joint = compose(&loops[0], &loops[1])?;
    let v = language_equal(&joint, inst.coord.spec(), LanguageKind::Marked)?;
    out.push(Certificate::new("Lm(S1/(G1‖Gk)) ‖ Lm(S2/(G2‖Gk)) = K", &v));
    let v = language_equal(&accessible_closed(&joint), &prefix_closure(inst.coord.spec()), LanguageKind::Generated)?;
    out.push(Certificate::new("L(S1/(G1‖Gk)) ‖ L(S2/(G2‖Gk)) = closure(K)", &v));
    Ok(out)
}

fn accessible_closed(g: &Generator) -> Generator {
    automata::accessible(g).with_all_marked()
}

/// Whether `s1`, `s2` solve the problem, judged by the characterization's
/// clauses; the counterexample names the first failing clause.
pub fn verify_distributed_solution(s1: &Generator, s2: &Generator, inst: &ProblemInstance) -> Result<Verdict> {
    let sk = inst.sigma_k();
    let loops = [closed_loop(s1, inst, 1)?, closed_loop(s2, inst, 2)?];
    for i in [1usize, 2] {
        check_part_alphabet([s1, s2][i - 1], inst, i)?;
        let other = project_onto([s1, s2][2 - i], sk);
        let lhs = compose(&loops[i - 1], &other)?;
        let clause = if i == 1 { "a" } else { "b" };
        if let Verdict::Fails(cx) = language_equal(&lhs, &inst.coord.spec_part(i), LanguageKind::Marked)? {
            return Ok(Verdict::Fails(cx.with_detail(format!("clause ({clause})"))));
        }
    }
    for i in [1, 2] {
        if let Some(w) = automata::blocking_word(&loops[i - 1]) {
            let cx = Counterexample::new(w, Reason::Blocking).with_detail(format!("clause (c), supervisor {i}"));
            return Ok(Verdict::Fails(cx));
        }
        let v = is_controllable(
            &trim(&loops[i - 1]),
            &inst.coord.local_plant(i)?,
            &inst.coord.sigma_ik(i).uncontrollable(),
        )?;
        if !v.holds() {
            return Ok(v.annotate(format!("clause (c), supervisor {i} not admissible")));
        }
    }
    Ok(is_nonconflicting(&loops[0], &loops[1])?.annotate("clause (d)"))
}

/// Existence test for a prefix-closed specification with its witnesses
/// `Ti = inf C(P_{i+k}(K), Gi ‖ Gk)`.
#[derive(Clone, Debug)]
pub struct ClosedExistence {
    pub verdict: Verdict,
    pub t1: Generator,
    pub t2: Generator,
}

/// Computes `T1`, `T2` and checks `Ti ‖ Pk(Tj) = P_{i+k}(K)` for both sides.
pub fn exists_solution_closed(inst: &ProblemInstance) -> Result<ClosedExistence> {
    if let Verdict::Fails(cx) = is_prefix_closed(inst.coord.spec())? {
        return Err(Error::NotPrefixClosed(cx));
    }
    let t = |i| -> Result<Generator> {
        let plant = inst.coord.local_plant(i)?;
        Ok(inf_con_closed(&inst.coord.spec_part(i), &plant, &inst.coord.sigma_ik(i).uncontrollable())?.supervisor)
    };
    let ts = [t(1)?, t(2)?];
    let mut verdict = Verdict::Holds;
    for i in [1usize, 2] {
        let lhs = compose(&ts[i - 1], &project_onto(&ts[2 - i], inst.sigma_k()))?;
        let v = language_equal(&lhs, &inst.coord.spec_part(i), LanguageKind::Marked)?;
        if !v.holds() {
            verdict = v.annotate(format!("T{i} ‖ Pk(T{}) ≠ P{i}+k(K)", 3 - i));
            break;
        }
    }
    let [t1, t2] = ts;
    Ok(ClosedExistence { verdict, t1, t2 })
}

/// Re-marks a solution of the prefix-closed problem:
/// `Lm(GSi) = P_{i+k}(K) ∪ (L(GSi) ∖ closure(P_{i+k}(K)))`.
///
/// Realized on `GSi × R` with `R` a trim recognizer of `P_{i+k}(K)`: a pair
/// is marked when `R` is in a marked state, or when `R` has been left, i.e.
/// the word is outside the closure.
pub fn lift_marking(gs1: &Generator, gs2: &Generator, inst: &ProblemInstance) -> Result<(Generator, Generator)> {
    Ok((lift_one(gs1, inst, 1)?, lift_one(gs2, inst, 2)?))
}

fn lift_one(gs: &Generator, inst: &ProblemInstance, i: usize) -> Result<Generator> {
    check_part_alphabet(gs, inst, i)?;
    let gs = automata::accessible(gs);
    let alph = gs.alphabet().clone();
    let target = inst.coord.spec_part(i);
    if let Verdict::Fails(cx) =
        language_inclusion(&target.reindexed(&alph), &gs.with_all_marked(), LanguageKind::Marked)?
    {
        return Err(Error::PreconditionViolation(format!("P{i}+k(K) is not generated by the supervisor: {cx}")));
    }
    let r = trim(&target.reindexed(&alph));
    let r_live = !is_empty_marked(&r);

    let mut index: HashMap<(StateId, Option<StateId>), usize> = HashMap::new();
    let start = (gs.initial(), r_live.then(|| r.initial()));
    let mut keys = vec![start];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; alph.len()]];
    while let Some(id) = queue.pop_front() {
        let (q, rq) = keys[id];
        for e in 0..alph.len() {
            let Some(nq) = gs.step(q, e) else { continue };
            let key = (nq, rq.and_then(|x| r.step(x, e)));
            let nid = *index.entry(key).or_insert_with(|| {
                keys.push(key);
                delta.push(vec![None; alph.len()]);
                queue.push_back(keys.len() - 1);
                keys.len() - 1
            });
            delta[id][e] = Some(nid);
        }
    }
    let marked = keys.iter().map(|&(_, rq)| rq.is_none_or(|x| r.is_marked(x))).collect();
    Ok(Generator::from_raw(alph, 0, marked, delta).renamed())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionStatus {
    /// Supervisors achieve `K` exactly.
    Exact,
    /// The relaxed parts are nonconflicting; they achieve a sublanguage of `K`.
    RelaxedSublanguage,
    /// The relaxed parts conflict and a nonconflict coordinator was added.
    RelaxedWithNcCoordinator,
    /// Nothing nonempty is achievable by the pipeline.
    Empty,
}

/// Size of one artifact, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct ArtifactStats {
    pub name: String,
    pub states: usize,
    pub transitions: usize,
}

impl ArtifactStats {
    pub fn of(name: impl Into<String>, g: &Generator) -> Self {
        ArtifactStats { name: name.into(), states: g.num_states(), transitions: g.num_transitions() }
    }
}

/// Machine-readable account of a solver run.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub status: SolutionStatus,
    pub sigma_k: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_0: Option<Vec<String>>,
    pub existence: Certificate,
    pub artifacts: Vec<ArtifactStats>,
    pub certificates: Vec<Certificate>,
    /// Size of `trim(S1 ‖ S2)`, the equivalent monolithic supervisor. Only
    /// reported, never returned.
    pub monolithic: ArtifactStats,
}

#[derive(Clone, Debug)]
pub struct SolutionBundle {
    pub status: SolutionStatus,
    pub s1: Generator,
    pub s2: Generator,
    pub coordinator: Generator,
    pub nc_coordinator: Option<Generator>,
    pub sigma0: Option<Alphabet>,
    pub report: SolveReport,
}

impl SolutionBundle {
    /// `Lm(S1/(G1‖Gk)) ‖ Lm(S2/(G2‖Gk))`, composed with `C` when present.
    pub fn composed(&self, inst: &ProblemInstance) -> Result<Generator> {
        let mut g = compose(&closed_loop(&self.s1, inst, 1)?, &closed_loop(&self.s2, inst, 2)?)?;
        if let Some(c) = &self.nc_coordinator {
            g = compose(&g, c)?;
        }
        Ok(g)
    }
}

fn base_artifacts(inst: &ProblemInstance) -> Vec<ArtifactStats> {
    let c = &inst.coord;
    vec![
        ArtifactStats::of("G1", c.plant(1)),
        ArtifactStats::of("G2", c.plant(2)),
        ArtifactStats::of("K", c.spec()),
        ArtifactStats::of("Gk", c.coordinator()),
    ]
}

fn names(a: &Alphabet) -> Vec<String> {
    a.names().map(str::to_string).collect()
}

/// Decides existence on the prefix-closure; on success lifts the witnesses
/// to supervisors for `K`, otherwise falls back to [`run_algorithm1`].
pub fn solve(inst: &ProblemInstance) -> Result<SolutionBundle> {
    let closed = inst.closure_instance()?;
    let ex = exists_solution_closed(&closed)?;
    if ex.verdict.holds() {
        exact_bundle(inst, ex)
    } else {
        fallback(inst, ex)
    }
}

/// Algorithm 1: existence test, relaxed parts, observer extension of
/// `Σ0 := Σk`, and the coordinator for nonconflictingness.
pub fn run_algorithm1(inst: &ProblemInstance) -> Result<SolutionBundle> {
    solve(inst)
}

fn exact_bundle(inst: &ProblemInstance, ex: ClosedExistence) -> Result<SolutionBundle> {
    let (s1, s2) = lift_marking(&ex.t1, &ex.t2, inst)?;
    let certificates = verify_clauses(&s1, &s2, inst)?;
    if let Some(bad) = certificates.iter().find(|c| !c.holds) {
        return Err(Error::Invariant(format!(
            "lifted supervisors fail `{}`: {}",
            bad.name,
            bad.counterexample.as_deref().unwrap_or("")
        )));
    }
    let mut artifacts = base_artifacts(inst);
    artifacts.extend([
        ArtifactStats::of("T1", &ex.t1),
        ArtifactStats::of("T2", &ex.t2),
        ArtifactStats::of("S1", &s1),
        ArtifactStats::of("S2", &s2),
    ]);
    let report = SolveReport {
        status: SolutionStatus::Exact,
        sigma_k: names(inst.sigma_k()),
        sigma_0: None,
        existence: Certificate::new("T1, T2 satisfy the closed-specification equations", &ex.verdict),
        artifacts,
        certificates,
        monolithic: ArtifactStats::of("trim(S1 ‖ S2)", &trim(&compose(&s1, &s2)?)),
    };
    Ok(SolutionBundle {
        status: SolutionStatus::Exact,
        s1,
        s2,
        coordinator: inst.coordinator().clone(),
        nc_coordinator: None,
        sigma0: None,
        report,
    })
}

/// Smallest `Σ0 ⊇ Σk` (by greedy extension) making the projection an
/// observer for both parts.
fn observer_alphabet(parts: &DistributedSupervisors, sigma_k: &Alphabet) -> Result<Alphabet> {
    let mut sigma0 = sigma_k.clone();
    loop {
        let mut changed = false;
        for s in [&parts.s1k, &parts.s2k] {
            let local = sigma0.intersection(s.alphabet());
            if is_observer(s, &local)?.holds() {
                continue;
            }
            for e in extend_for_observer(s, &local)?.events() {
                if !sigma0.contains(&e.name) {
                    sigma0 = sigma0.with_event(e.clone())?;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(sigma0);
        }
    }
}

fn fallback(inst: &ProblemInstance, ex: ClosedExistence) -> Result<SolutionBundle> {
    let coord = &inst.coord;
    let parts = sup_rc_parts(coord)?;
    let mut artifacts = base_artifacts(inst);
    artifacts.extend([
        ArtifactStats::of("T1", &ex.t1),
        ArtifactStats::of("T2", &ex.t2),
        ArtifactStats::of("supRC1+k", &parts.s1k),
        ArtifactStats::of("supRC2+k", &parts.s2k),
    ]);
    let empty_parts = is_empty_marked(&parts.s1k) || is_empty_marked(&parts.s2k);
    let conflicting = !is_nonconflicting(&parts.s1k, &parts.s2k)?.holds();

    let (mut status, nc, sigma0) = if empty_parts {
        (SolutionStatus::Empty, None, None)
    } else if !conflicting {
        (SolutionStatus::RelaxedSublanguage, None, None)
    } else {
        let sigma0 = if inst.options.auto_extend_observer {
            observer_alphabet(&parts, coord.sigma_k())?
        } else {
            coord.sigma_k().clone()
        };
        let c = nonconflict_coordinator(&parts, &sigma0)?;
        artifacts.push(ArtifactStats::of("C", &c));
        (SolutionStatus::RelaxedWithNcCoordinator, Some(c), Some(sigma0))
    };

    let mut bundle = SolutionBundle {
        status,
        s1: parts.s1k,
        s2: parts.s2k,
        coordinator: coord.coordinator().clone(),
        nc_coordinator: nc,
        sigma0: sigma0.clone(),
        report: SolveReport {
            status,
            sigma_k: names(coord.sigma_k()),
            sigma_0: sigma0.as_ref().map(names),
            existence: Certificate::new("T1, T2 satisfy the closed-specification equations", &ex.verdict),
            artifacts,
            certificates: Vec::new(),
            monolithic: ArtifactStats { name: String::new(), states: 0, transitions: 0 },
        },
    };
    let composed = bundle.composed(inst)?;
    if status != SolutionStatus::Empty && is_empty_marked(&composed) {
        status = SolutionStatus::Empty;
        bundle.status = status;
        bundle.report.status = status;
    }
    bundle.report.certificates = fallback_certificates(inst, &composed)?;
    bundle.report.monolithic = ArtifactStats::of("trim(S1 ‖ S2)", &minimize(&trim(&composed)));
    Ok(bundle)
}

/// Safety, nonblocking and controllability of the composed closed loop.
fn fallback_certificates(inst: &ProblemInstance, composed: &Generator) -> Result<Vec<Certificate>> {
    let coord = &inst.coord;
    let sigma = coord.spec().alphabet().clone();
    let mut out = Vec::new();
    let v = language_inclusion(composed, coord.spec(), LanguageKind::Marked)?;
    out.push(Certificate::new("composed marked language ⊆ K", &v));
    let v: Verdict = automata::blocking_word(composed).map(|w| Counterexample::new(w, Reason::Blocking)).into();
    out.push(Certificate::new("composed closed loop nonblocking", &v));
    let plant = compose(coord.plant(1), coord.plant(2))?;
    let v = is_controllable(&trim(composed), &plant, &sigma.uncontrollable())?;
    out.push(Certificate::new("closure of the composition controllable w.r.t. G1 ‖ G2", &v));
    Ok(out)
}

/// Renders a verdict line for reports and the command line.
pub fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Holds => "holds".into(),
        Verdict::Fails(cx) => format!("fails: {cx} (word `{}`)", word_to_string(&cx.word)),
    }
}
