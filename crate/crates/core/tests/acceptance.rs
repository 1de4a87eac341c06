//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Randomized criteria use `MODSUP_SEED` (default below).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use modsup::automata::{
    accessible, compose, is_empty_marked, language_equal, language_inclusion, prefix_closure, project_onto, trim,
    LanguageKind,
};
use modsup::coordination::{
    is_cond_controllable, is_conditionally_decomposable, is_relaxed_cond_controllable, sup_rc_parts,
};
use modsup::oracle::{enumerate, BoundedLanguage};
use modsup::random::{
    random_generator, random_nonempty, random_sigma_k, random_sublanguage, rng_from_env, EventPool, Shape,
};
use modsup::solver::{solve, verify_distributed_solution, ProblemInstance, SolutionStatus, SolveOptions};
use modsup::synthesis::{is_controllable, sup_con};
use modsup::{crosscheck, Alphabet, Error, Generator, Result};

const DEFAULT_SEED: u64 = 20_240_611;

/// Collected failure messages of one criterion.
#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn result<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn(&mut Failures) -> String,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "Example 1 regression", limit: Some(Duration::from_secs(1)), run: example_one },
        Criterion {
            id: 2,
            title: "Example 1 exact pipeline",
            limit: Some(Duration::from_secs(1)),
            run: example_one_solve,
        },
        Criterion {
            id: 3,
            title: "projection distributes over products",
            limit: Some(Duration::from_secs(30)),
            run: projection_suite,
        },
        Criterion {
            id: 4,
            title: "prefix-closed round trip and marking lift",
            limit: Some(Duration::from_secs(60)),
            run: round_trip,
        },
        Criterion {
            id: 5,
            title: "oracle equivalence",
            limit: Some(Duration::from_secs(120)),
            run: oracle_equivalence,
        },
        Criterion { id: 6, title: "nonconflict coordinator fallback", limit: None, run: fallback_family },
        Criterion {
            id: 7,
            title: "distributed result within monolithic sup C",
            limit: None,
            run: inclusion_in_supremal,
        },
        Criterion { id: 8, title: "report carries artifact sizes", limit: None, run: report_sizes },
    ];
    let mut failed = 0;
    for c in &criteria {
        let mut f = Failures::default();
        let start = Instant::now();
        let summary = (c.run)(&mut f);
        let took = start.elapsed();
        if let Some(limit) = c.limit {
            f.check(took <= limit, format!("took {:.2} s, limit {:.0} s", took.as_secs_f64(), limit.as_secs_f64()));
        }
        let tag = if f.0.is_empty() { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {} — {summary} ({:.2} s)", c.id, c.title, took.as_secs_f64());
        for msg in f.0.iter().take(5) {
            println!("      {msg}");
        }
        if f.0.len() > 5 {
            println!("      ... {} more", f.0.len() - 5);
        }
        if !f.0.is_empty() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn words(ws: &[&[&str]]) -> Vec<Vec<String>> {
    ws.iter().map(|w| w.iter().map(|e| e.to_string()).collect()).collect()
}

fn language_is(f: &mut Failures, l: Result<BoundedLanguage>, expected: &[&[&str]], what: &str) {
    if let Some(l) = f.result(l, what) {
        let want = words(expected);
        let got = l.sorted();
        f.check(got.len() == want.len() && want.iter().all(|w| l.contains(w)), format!("{what}: got {got:?}"));
    }
}

struct ExampleOne {
    g1: Generator,
    g2: Generator,
    k: Generator,
    sigma_k: Alphabet,
}

fn example_one_data() -> ExampleOne {
    let s1 = Alphabet::with_controllable(&["a", "a1", "b", "d"], &["b"]).unwrap();
    let s2 = Alphabet::with_controllable(&["a", "a2", "c", "d"], &["c"]).unwrap();
    let all = s1.union(&s2).unwrap();
    ExampleOne {
        g1: Generator::from_words(s1, &[vec!["a", "a1", "b", "d"]]).unwrap(),
        g2: Generator::from_words(s2, &[vec!["a", "a2", "c", "d"]]).unwrap(),
        k: Generator::from_words(all, &[vec!["a", "a1", "a2"], vec!["a", "a2", "a1"]]).unwrap(),
        sigma_k: Alphabet::with_controllable(&["a", "d"], &[]).unwrap(),
    }
}

fn example_one(f: &mut Failures) -> String {
    let ex = example_one_data();
    let Some(inst) = f.result(
        modsup::coordination::CoordinationInstance::new(ex.g1.clone(), ex.g2.clone(), ex.k.clone(), &ex.sigma_k),
        "instance",
    ) else {
        return "instance rejected".into();
    };
    let cd = is_conditionally_decomposable(&ex.k, ex.g1.alphabet(), ex.g2.alphabet(), &ex.sigma_k);
    f.check(cd.as_ref().is_ok_and(|v| v.holds()), format!("(a) K not CD: {cd:?}"));

    let pk = project_onto(&ex.k, &ex.sigma_k);
    let gk = inst.coordinator();
    language_is(f, enumerate(&pk, 6, LanguageKind::Marked), &[&["a"]], "(b) Pk(K)");
    language_is(f, enumerate(gk, 6, LanguageKind::Marked), &[&["a", "d"]], "(b) Lm(Gk)");
    let want_pk = Generator::from_words(ex.sigma_k.clone(), &[vec!["a"]]).unwrap();
    let want_gk = Generator::from_words(ex.sigma_k.clone(), &[vec!["a", "d"]]).unwrap();
    for (what, a, b) in [("Pk(K)", &pk, &want_pk), ("Lm(Gk)", gk, &want_gk)] {
        let v = language_equal(a, b, LanguageKind::Marked);
        f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("(b) {what} automaton equality: {v:?}"));
    }

    let su = ex.sigma_k.uncontrollable();
    let v = is_controllable(&pk, gk, &su);
    f.check(v.as_ref().is_ok_and(|v| !v.holds()), format!("(c) Pk(K) reported controllable: {v:?}"));
    let sup = sup_con(&pk, &gk.with_all_marked(), &su);
    f.check(sup.as_ref().is_ok_and(|s| is_empty_marked(&s.supervisor)), "(c) sup C(Pk(K), L(Gk)) not empty");

    let rcc = is_relaxed_cond_controllable(&inst);
    f.check(rcc.as_ref().is_ok_and(|v| v.holds()), format!("(d) not relaxed conditionally controllable: {rcc:?}"));
    let cc = is_cond_controllable(&inst);
    f.check(cc.as_ref().is_ok_and(|v| !v.holds()), format!("(d) reported conditionally controllable: {cc:?}"));
    "CD, Pk(K) = {a}, Lm(Gk) = {ad}, sup C empty, relaxed but not conditional".into()
}

fn example_one_solve(f: &mut Failures) -> String {
    let ex = example_one_data();
    let Some(inst) = f.result(ProblemInstance::new(ex.g1, ex.g2, ex.k.clone(), &ex.sigma_k), "instance") else {
        return "instance rejected".into();
    };
    let Some(bundle) = f.result(solve(&inst), "solve") else {
        return "solve failed".into();
    };
    f.check(bundle.status == SolutionStatus::Exact, format!("status {:?}", bundle.status));
    let v = verify_distributed_solution(&bundle.s1, &bundle.s2, &inst);
    f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("verify: {v:?}"));
    if let Some(joint) = f.result(bundle.composed(&inst), "compose closed loops") {
        let marked = language_equal(&joint, &ex.k, LanguageKind::Marked);
        f.check(marked.as_ref().is_ok_and(|v| v.holds()), format!("marked equation: {marked:?}"));
        let closed = language_equal(&accessible(&joint), &prefix_closure(&ex.k), LanguageKind::Generated);
        f.check(closed.as_ref().is_ok_and(|v| v.holds()), format!("closure equation: {closed:?}"));
        same_languages(f, &joint, &ex.k, 6, "oracle");
    }
    format!("status {:?}, verified and enumerated at depth 6", bundle.status)
}

/// Oracle enumeration of the closed-loop equations up to `depth`.
fn same_languages(f: &mut Failures, joint: &Generator, k: &Generator, depth: usize, what: &str) {
    let pairs = [
        (enumerate(joint, depth, LanguageKind::Marked), enumerate(k, depth, LanguageKind::Marked), "marked"),
        (
            enumerate(&accessible(joint), depth, LanguageKind::Generated),
            enumerate(&trim(k), depth, LanguageKind::Generated),
            "generated",
        ),
    ];
    for (a, b, kind) in pairs {
        if let (Some(a), Some(b)) = (f.result(a, what), f.result(b, what)) {
            f.check(a.words() == b.words(), format!("{what}: {kind} languages differ at depth {depth}"));
        }
    }
}

fn small_pair(rng: &mut ChaCha8Rng, pool: &EventPool, shape: Shape) -> (Generator, Generator) {
    let s1 = pool.subset(rng, 1, 4);
    let s2 = pool.subset(rng, 1, 4);
    (random_generator(rng, &s1, shape), random_generator(rng, &s2, shape))
}

fn projection_suite(f: &mut Failures) -> String {
    let mut rng = rng_from_env(DEFAULT_SEED);
    let shape = Shape { max_states: 5, ..Shape::default() };
    for i in 0..200 {
        let pool = EventPool::new(&mut rng, 5);
        let (g1, g2) = small_pair(&mut rng, &pool, shape);
        let sk = random_sigma_k(&mut rng, g1.alphabet(), g2.alphabet(), 0.3);
        for kind in [LanguageKind::Generated, LanguageKind::Marked] {
            if let Some(a) = f.result(crosscheck::projection_distributes(&g1, &g2, &sk, kind, 8), "projection") {
                f.check(a.agrees, format!("pair {i} ({kind:?}): {a}"));
            }
        }
    }
    "200 cyclic pairs, generated and marked, depth 8".into()
}

/// Random instance with `K` a sublanguage of the plant product, or `None`
/// when no decomposable extension of `Σk` exists for it.
fn random_instance(
    rng: &mut ChaCha8Rng,
    shape: Shape,
    all_marked: bool,
    closed_spec: bool,
) -> Result<Option<ProblemInstance>> {
    let pool = EventPool::new(rng, 5);
    let s1 = pool.subset(rng, 2, 4);
    let s2 = pool.subset(rng, 2, 4);
    let mut g1 = random_nonempty(rng, &s1, shape);
    let mut g2 = random_nonempty(rng, &s2, shape);
    if all_marked {
        g1 = g1.with_all_marked();
        g2 = g2.with_all_marked();
    }
    let plant = compose(&g1, &g2)?;
    let mut k = random_sublanguage(rng, &plant, shape);
    if closed_spec {
        k = prefix_closure(&k);
    }
    let sk = random_sigma_k(rng, &s1, &s2, 0.2);
    let options = SolveOptions { auto_extend_cd: true, ..SolveOptions::default() };
    match ProblemInstance::with_options(g1, g2, k, &sk, options) {
        Ok(inst) => Ok(Some(inst)),
        Err(Error::PreconditionViolation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn round_trip(f: &mut Failures) -> String {
    let mut rng = rng_from_env(DEFAULT_SEED ^ 4);
    let shape = Shape { max_states: 4, ..Shape::default() };
    let (mut solvable, mut attempts, mut unsolvable) = (0, 0, 0);
    while solvable < 100 && attempts < 5_000 {
        attempts += 1;
        let Some(Some(inst)) = f.result(random_instance(&mut rng, shape, false, false), "instance") else {
            continue;
        };
        let Some(closed) = f.result(inst.closure_instance(), "closure instance") else { continue };
        let (Some(b), Some(bc)) = (f.result(solve(&inst), "solve K"), f.result(solve(&closed), "solve closure(K)"))
        else {
            continue;
        };
        let exact = b.status == SolutionStatus::Exact;
        f.check(
            exact == (bc.status == SolutionStatus::Exact),
            format!("attempt {attempts}: {:?} vs {:?}", b.status, bc.status),
        );
        if !exact {
            unsolvable += 1;
            continue;
        }
        solvable += 1;
        let v = verify_distributed_solution(&b.s1, &b.s2, &inst);
        f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("attempt {attempts}: lifted supervisors: {v:?}"));
        let v = verify_distributed_solution(&bc.s1, &bc.s2, &closed);
        f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("attempt {attempts}: closure supervisors: {v:?}"));
        if let Some(joint) = f.result(b.composed(&inst), "compose") {
            same_languages(f, &joint, inst.coordination().spec(), 8, &format!("attempt {attempts}"));
        }
    }
    f.check(solvable == 100, format!("only {solvable} solvable instances in {attempts} attempts"));
    format!("{solvable} solvable instances ({unsolvable} unsolvable agreed) in {attempts} attempts")
}

fn oracle_equivalence(f: &mut Failures) -> String {
    let mut rng = rng_from_env(DEFAULT_SEED ^ 5);
    let cyclic = Shape { max_states: 5, ..Shape::default() };
    let acyclic = Shape { acyclic: true, ..cyclic };
    let mut verdicts = [0usize; 2];
    for i in 0..200 {
        let pool = EventPool::new(&mut rng, 4);
        let sigma = pool.subset(&mut rng, 1, 4);
        let su = sigma.uncontrollable();

        // Cyclic plants: closure-lookahead operators are exact at the padded horizon.
        let plant = random_nonempty(&mut rng, &sigma, cyclic);
        let sub = random_sublanguage(&mut rng, &plant, cyclic);
        let k = if rng.gen_bool(0.5) { sub.clone() } else { random_generator(&mut rng, &sigma, cyclic) };
        let checks = [
            ("controllable", crosscheck::controllable(&k, &plant, &su, 8)),
            ("inf C", crosscheck::infcon(&prefix_closure(&sub), &plant, &su, 8)),
        ];
        for (what, a) in checks {
            if let Some(a) = f.result(a, what) {
                f.check(a.agrees, format!("{what} #{i}: {a}"));
            }
        }

        // Finite languages for the fixpoint and quantifier checks.
        let plant = random_nonempty(&mut rng, &sigma, acyclic);
        let k = random_sublanguage(&mut rng, &plant, acyclic);
        if let Some(a) = f.result(crosscheck::supcon(&k, &plant, &su), "sup C") {
            f.check(a.agrees, format!("sup C #{i}: {a}"));
        }
        let g = random_nonempty(&mut rng, &sigma, acyclic);
        let sigma0 = pool.subset(&mut rng, 0, 4).intersection(&sigma);
        if let Some(a) = f.result(crosscheck::observer(&g, &sigma0), "observer") {
            f.check(a.agrees, format!("observer #{i}: {a}"));
        }
        let s1 = pool.subset(&mut rng, 1, 3);
        let s2 = pool.subset(&mut rng, 1, 3);
        let union = s1.union(&s2).unwrap();
        let spec = random_nonempty(&mut rng, &union, acyclic);
        let sk = random_sigma_k(&mut rng, &s1, &s2, 0.3);
        if let Some(a) = f.result(crosscheck::decomposable(&spec, &s1, &s2, &sk), "CD") {
            f.check(a.agrees, format!("CD #{i}: {a}"));
        }
        let (a, b) = small_pair(&mut rng, &pool, acyclic);
        if let Some(r) = f.result(modsup::automata::is_nonconflicting(&a, &b), "nonconflicting") {
            verdicts[usize::from(r.holds())] += 1;
        }
        if let Some(r) = f.result(crosscheck::nonconflicting(&a, &b), "nonconflicting") {
            f.check(r.agrees, format!("nonconflicting #{i}: {r}"));
        }
    }
    format!("6 operators × 200 instances ({} conflicting pairs)", verdicts[0])
}

/// `a p^n x + b y` against `x u + y` (or the mirror image with the
/// uncontrollable tail after `y`): the local supremal parts conflict after
/// `a` (resp. `b`).
fn conflicting_instance(n: usize, mirrored: bool) -> ProblemInstance {
    let s1 = Alphabet::with_controllable(&["a", "b", "p", "x", "y"], &["a", "b", "p", "x", "y"]).unwrap();
    let s2 = Alphabet::with_controllable(&["x", "y", "u"], &["x", "y"]).unwrap();
    let chain: Vec<&str> = std::iter::once("a").chain(std::iter::repeat_n("p", n)).chain(["x"]).collect();
    let g1 = Generator::from_words(s1.clone(), &[chain.clone(), vec!["b", "y"]]).unwrap();
    let g2_words = if mirrored { [vec!["x"], vec!["y", "u"]] } else { [vec!["x", "u"], vec!["y"]] };
    let g2 = Generator::from_words(s2.clone(), &g2_words).unwrap();
    let all = s1.union(&s2).unwrap();
    let k = Generator::from_words(all, &[chain, vec!["b", "y"]]).unwrap();
    let sk = Alphabet::with_controllable(&["x", "y"], &["x", "y"]).unwrap();
    ProblemInstance::new(g1.with_all_marked(), g2.with_all_marked(), k, &sk).unwrap()
}

fn fallback_family(f: &mut Failures) -> String {
    let mut count = 0;
    for n in 0..7 {
        for mirrored in [false, true] {
            count += 1;
            let what = format!("n={n}, mirrored={mirrored}");
            let inst = conflicting_instance(n, mirrored);
            let Some(parts) = f.result(sup_rc_parts(inst.coordination()), &what) else { continue };
            let nc = modsup::automata::is_nonconflicting(&parts.s1k, &parts.s2k);
            f.check(nc.as_ref().is_ok_and(|v| !v.holds()), format!("{what}: parts do not conflict"));
            let Some(b) = f.result(solve(&inst), &what) else { continue };
            f.check(b.status == SolutionStatus::RelaxedWithNcCoordinator, format!("{what}: status {:?}", b.status));
            let Some(joint) = f.result(b.composed(&inst), &what) else { continue };
            f.check(!is_empty_marked(&joint), format!("{what}: empty closed loop"));
            f.check(modsup::automata::is_nonblocking(&joint), format!("{what}: composition blocks"));
            let plant = compose(inst.coordination().plant(1), inst.coordination().plant(2)).unwrap();
            let su = plant.alphabet().uncontrollable();
            let v = is_controllable(&trim(&joint), &plant, &su);
            f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("{what}: not controllable: {v:?}"));
            let v = language_inclusion(&joint, inst.coordination().spec(), LanguageKind::Marked);
            f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("{what}: outside K: {v:?}"));
            f.check(b.report.certificates.iter().all(|c| c.holds), format!("{what}: failing certificate"));
        }
    }
    format!("{count} conflicting instances")
}

fn inclusion_in_supremal(f: &mut Failures) -> String {
    let mut rng = rng_from_env(DEFAULT_SEED ^ 7);
    let shape = Shape { max_states: 4, ..Shape::default() };
    let (mut checked, mut attempts, mut strict) = (0, 0, 0);
    while checked < 200 && attempts < 2_000 {
        attempts += 1;
        let Some(Some(inst)) = f.result(random_instance(&mut rng, shape, true, true), "instance") else {
            continue;
        };
        let coord = inst.coordination();
        let Some(parts) = f.result(sup_rc_parts(coord), "parts") else { continue };
        let Ok(plant) = compose(coord.plant(1), coord.plant(2)) else { continue };
        let su = plant.alphabet().uncontrollable();
        let Some(sup) = f.result(sup_con(coord.spec(), &plant, &su), "sup C") else { continue };
        let Some(joint) = f.result(compose(&parts.s1k, &parts.s2k), "compose") else { continue };
        checked += 1;
        let v = language_inclusion(&joint, &sup.supervisor, LanguageKind::Marked);
        f.check(v.as_ref().is_ok_and(|v| v.holds()), format!("attempt {attempts}: {v:?}"));
        if language_inclusion(&sup.supervisor, &joint, LanguageKind::Marked).is_ok_and(|v| !v.holds()) {
            strict += 1;
        }
    }
    f.check(checked == 200, format!("only {checked} instances in {attempts} attempts"));
    format!("{checked} prefix-closed instances ({strict} strictly below sup C)")
}

fn report_sizes(f: &mut Failures) -> String {
    let ex = example_one_data();
    let exact = ProblemInstance::new(ex.g1, ex.g2, ex.k, &ex.sigma_k).unwrap();
    let cases = [
        (exact, &["G1", "G2", "K", "Gk", "T1", "T2", "S1", "S2"][..]),
        (conflicting_instance(2, false), &["G1", "G2", "K", "Gk", "T1", "T2", "supRC1+k", "supRC2+k", "C"][..]),
    ];
    let mut total = 0;
    for (inst, expected) in cases {
        let Some(b) = f.result(solve(&inst), "solve") else { continue };
        let json = modsup::io::render_json(&b.report);
        let Some(v) = f.result(
            serde_json::from_str::<serde_json::Value>(&json).map_err(|e| Error::Invariant(e.to_string())),
            "json",
        ) else {
            continue;
        };
        let artifacts = v["artifacts"].as_array().cloned().unwrap_or_default();
        for name in expected {
            let entry = artifacts.iter().find(|a| a["name"] == *name);
            let sized = entry.is_some_and(|a| a["states"].is_u64() && a["transitions"].is_u64());
            f.check(sized, format!("{name} missing sizes"));
        }
        let mono = &v["monolithic"];
        f.check(mono["states"].is_u64() && mono["transitions"].is_u64(), "monolithic sizes missing");
        total += artifacts.len() + 1;
    }
    format!("{total} artifacts sized across an exact and a fallback report")
}
