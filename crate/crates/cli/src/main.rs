//! `modsup` command line: generator operations, property checks, the
//! coordination pipeline and oracle cross-checks.
//!
//! Exit status: 0 when the verdict holds (or the command succeeded), 1 when it
//! fails (the counterexample is printed), 2 on usage, parse or precondition
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use modsup::automata::{compose_all, is_nonconflicting, project};
use modsup::coordination::{
    build_coordinator, check_sandwich, extend_for_cd, extend_for_observer, is_cond_controllable,
    is_conditionally_decomposable, is_observer, is_relaxed_cond_controllable, CoordinationInstance,
};
use modsup::crosscheck::{self, Agreement};
use modsup::io::{load_generator, load_manifest, parse_event_list, render_generator, save_generator, split_event_list};
use modsup::solver::{solve, verify_distributed_solution, ArtifactStats, ProblemInstance, SolveOptions};
use modsup::synthesis::{inf_con_closed, is_controllable, sup_con};
use modsup::verdict::word_to_string;
use modsup::{Alphabet, Error, Generator, Result, Verdict};

#[derive(Parser)]
#[command(name = "modsup", version, about = "Coordination control synthesis for modular discrete-event systems")]
struct Cli {
    /// Also write a JSON run report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronous product of the plants.
    Compose {
        #[arg(long = "plant", required = true, value_name = "GEN")]
        plants: Vec<PathBuf>,
        #[arg(long, value_name = "GEN")]
        out: Option<PathBuf>,
    },
    /// Natural projection onto a sub-alphabet.
    Project {
        #[arg(long, value_name = "GEN")]
        plant: PathBuf,
        #[arg(long, value_name = "EVENTS")]
        sigma: String,
        #[arg(long, value_name = "GEN")]
        out: Option<PathBuf>,
    },
    /// Supremal controllable sublanguage of the specification.
    Supcon {
        #[command(flatten)]
        pair: SpecPlant,
        #[arg(long, value_name = "GEN")]
        out: Option<PathBuf>,
    },
    /// Infimal prefix-closed controllable superlanguage of the specification.
    Infcon {
        #[command(flatten)]
        pair: SpecPlant,
        #[arg(long, value_name = "GEN")]
        out: Option<PathBuf>,
    },
    /// Coordinator Pk(G1) ‖ Pk(G2).
    Coordinator {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_name = "GEN")]
        out: Option<PathBuf>,
    },
    /// Decide a property.
    #[command(subcommand)]
    Check(Check),
    /// Enlarge an alphabet until a property holds.
    #[command(subcommand)]
    Extend(Extend),
    /// Run the full pipeline and write supervisors to a directory.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        /// Enlarge Σk until K and its closure are conditionally decomposable.
        #[arg(long)]
        auto_extend_cd: bool,
    },
    /// Check candidate supervisors against the problem.
    Verify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_name = "GEN")]
        s1: PathBuf,
        #[arg(long, value_name = "GEN")]
        s2: PathBuf,
    },
    /// Compare an operator with its bounded-language reference.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand)]
enum Check {
    /// K = P1+k(K) ‖ P2+k(K).
    Cd(Inputs),
    /// The projection onto Σ0 is an Lm-observer.
    Observer(GenSigma),
    /// Spec controllable with respect to the plant's generated language.
    Controllable(SpecPlant),
    /// Relaxed conditional controllability.
    Rcc(Inputs),
    /// Conditional controllability.
    Cc(Inputs),
    /// The two generators are nonconflicting.
    Nonconflicting(Pair),
}

#[derive(Subcommand)]
enum Extend {
    /// Smallest found Σk making K and its closure decomposable.
    Cd(Inputs),
    /// Σ0 ⊇ the given events making the projection an observer.
    Observer(GenSigma),
}

#[derive(Subcommand)]
enum Oracle {
    Controllable {
        #[command(flatten)]
        pair: SpecPlant,
        #[arg(long, default_value_t = 8)]
        oracle_depth: usize,
    },
    Supcon(SpecPlant),
    Infcon {
        #[command(flatten)]
        pair: SpecPlant,
        #[arg(long, default_value_t = 8)]
        oracle_depth: usize,
    },
    Nonconflicting(Pair),
    Cd(Inputs),
    Observer(GenSigma),
}

/// A two-plant problem, either from a manifest or from individual files.
#[derive(Args)]
struct Inputs {
    #[arg(long, value_name = "TOML", conflicts_with_all = ["plants", "spec", "sigma_k"])]
    manifest: Option<PathBuf>,
    #[arg(long = "plant", value_name = "GEN")]
    plants: Vec<PathBuf>,
    #[arg(long, value_name = "GEN")]
    spec: Option<PathBuf>,
    /// Coordinator alphabet; defaults to the events shared by the plants.
    #[arg(long, value_name = "EVENTS")]
    sigma_k: Option<String>,
}

#[derive(Args)]
struct SpecPlant {
    #[arg(long, value_name = "GEN")]
    spec: PathBuf,
    #[arg(long, value_name = "GEN")]
    plant: PathBuf,
}

#[derive(Args)]
struct Pair {
    #[arg(long = "plant", value_name = "GEN", num_args = 1, required = true)]
    plants: Vec<PathBuf>,
}

#[derive(Args)]
struct GenSigma {
    #[arg(long, value_name = "GEN")]
    plant: PathBuf,
    #[arg(long, value_name = "EVENTS", default_value = "")]
    sigma: String,
}

/// What a command reports: verdict, printed lines and the JSON report.
struct Outcome {
    holds: bool,
    lines: Vec<String>,
    report: Value,
}

impl Outcome {
    fn done(lines: Vec<String>, report: Value) -> Self {
        Outcome { holds: true, lines, report }
    }

    fn verdict(command: &str, v: &Verdict) -> Self {
        let line = match v {
            Verdict::Holds => "true".to_string(),
            Verdict::Fails(cx) => format!("false: counterexample `{}` ({cx})", word_to_string(&cx.word)),
        };
        let cx = v.counterexample().map(|c| serde_json::to_value(c).expect("serializable"));
        Outcome {
            holds: v.holds(),
            lines: vec![line],
            report: json!({ "command": command, "holds": v.holds(), "counterexample": cx }),
        }
    }

    fn agreement(command: &str, a: &Agreement) -> Self {
        Outcome {
            holds: a.agrees,
            lines: vec![a.to_string()],
            report: json!({ "command": command, "agrees": a.agrees, "detail": a.detail }),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for l in &out.lines {
                println!("{l}");
            }
            if let Some(path) = &cli.report {
                if let Err(e) = modsup::io::write_report(path, &out.report) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Generator> {
    load_generator(path).map(|(_, g)| g)
}

fn events(list: &str, universe: &Alphabet) -> Result<Alphabet> {
    parse_event_list(&split_event_list(list), universe)
}

fn names(a: &Alphabet) -> Vec<String> {
    a.names().map(str::to_string).collect()
}

fn usage(msg: impl Into<String>) -> Error {
    Error::PreconditionViolation(msg.into())
}

/// Writes `g` to `out` or prints it; reports its size.
fn emit(name: &str, g: &Generator, out: Option<&Path>) -> Result<Outcome> {
    let stats = ArtifactStats::of(name, g);
    let report = json!({ "command": name, "artifacts": [stats] });
    match out {
        Some(path) => {
            let file_name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(name);
            save_generator(path, file_name, g)?;
            let line =
                format!("{name}: {} states, {} transitions -> {}", stats.states, stats.transitions, path.display());
            Ok(Outcome::done(vec![line], report))
        }
        None => Ok(Outcome::done(vec![render_generator(name, g).trim_end().to_string()], report)),
    }
}

struct Problem {
    g1: Generator,
    g2: Generator,
    spec: Option<Generator>,
    sigma_k: Alphabet,
    options: SolveOptions,
}

impl Problem {
    fn spec(&self) -> Result<&Generator> {
        self.spec.as_ref().ok_or_else(|| usage("this command needs --spec (or --manifest)"))
    }

    fn coordination(&self) -> Result<CoordinationInstance> {
        CoordinationInstance::new(self.g1.clone(), self.g2.clone(), self.spec()?.clone(), &self.sigma_k)
    }

    fn instance(&self) -> Result<ProblemInstance> {
        ProblemInstance::with_options(
            self.g1.clone(),
            self.g2.clone(),
            self.spec()?.clone(),
            &self.sigma_k,
            self.options,
        )
    }
}

fn problem(inputs: &Inputs) -> Result<Problem> {
    if let Some(m) = &inputs.manifest {
        let m = load_manifest(m)?;
        let options = m.solve_options();
        return Ok(Problem { g1: m.g1, g2: m.g2, spec: Some(m.spec), sigma_k: m.sigma_k, options });
    }
    let [p1, p2] = inputs.plants.as_slice() else {
        return Err(usage("exactly two --plant files are required (or --manifest)"));
    };
    let (g1, g2) = (load(p1)?, load(p2)?);
    let union = g1.alphabet().union(g2.alphabet())?;
    let sigma_k = match &inputs.sigma_k {
        Some(list) => events(list, &union)?,
        None => g1.alphabet().intersection(g2.alphabet()),
    };
    check_sandwich(g1.alphabet(), g2.alphabet(), &sigma_k)?;
    let spec = inputs.spec.as_deref().map(load).transpose()?;
    Ok(Problem { g1, g2, spec, sigma_k, options: SolveOptions::default() })
}

fn pair(p: &Pair) -> Result<(Generator, Generator)> {
    match p.plants.as_slice() {
        [a, b] => Ok((load(a)?, load(b)?)),
        _ => Err(usage("exactly two --plant files are required")),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Compose { plants, out } => {
            let gs = plants.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
            let g = compose_all(&gs.iter().collect::<Vec<_>>())?;
            emit("compose", &g, out.as_deref())
        }
        Command::Project { plant, sigma, out } => {
            let g = load(plant)?;
            let target = events(sigma, g.alphabet())?;
            emit("project", &project(&g, &target)?, out.as_deref())
        }
        Command::Supcon { pair, out } => {
            let (k, g) = (load(&pair.spec)?, load(&pair.plant)?);
            let r = sup_con(&k, &g, &g.alphabet().uncontrollable())?;
            emit("supcon", &r.supervisor, out.as_deref())
        }
        Command::Infcon { pair, out } => {
            let (k, g) = (load(&pair.spec)?, load(&pair.plant)?);
            let r = inf_con_closed(&k, &g, &g.alphabet().uncontrollable())?;
            emit("infcon", &r.supervisor, out.as_deref())
        }
        Command::Coordinator { inputs, out } => {
            let p = problem(inputs)?;
            emit("coordinator", &build_coordinator(&p.g1, &p.g2, &p.sigma_k)?, out.as_deref())
        }
        Command::Check(c) => check(c),
        Command::Extend(e) => extend(e),
        Command::Solve { inputs, out_dir, auto_extend_cd } => {
            let mut p = problem(inputs)?;
            p.options.auto_extend_cd |= auto_extend_cd;
            solve_to(&p.instance()?, out_dir)
        }
        Command::Verify { inputs, s1, s2 } => {
            let inst = problem(inputs)?.instance()?;
            let v = verify_distributed_solution(&load(s1)?, &load(s2)?, &inst)?;
            Ok(Outcome::verdict("verify", &v))
        }
        Command::Oracle(o) => oracle(o),
    }
}

fn check(c: &Check) -> Result<Outcome> {
    match c {
        Check::Cd(inputs) => {
            let p = problem(inputs)?;
            let v = is_conditionally_decomposable(p.spec()?, p.g1.alphabet(), p.g2.alphabet(), &p.sigma_k)?;
            Ok(Outcome::verdict("check cd", &v))
        }
        Check::Observer(gs) => {
            let g = load(&gs.plant)?;
            let v = is_observer(&g, &events(&gs.sigma, g.alphabet())?)?;
            Ok(Outcome::verdict("check observer", &v))
        }
        Check::Controllable(sp) => {
            let (k, g) = (load(&sp.spec)?, load(&sp.plant)?);
            let v = is_controllable(&k, &g, &g.alphabet().uncontrollable())?;
            Ok(Outcome::verdict("check controllable", &v))
        }
        Check::Rcc(inputs) => {
            let v = is_relaxed_cond_controllable(&problem(inputs)?.coordination()?)?;
            Ok(Outcome::verdict("check rcc", &v))
        }
        Check::Cc(inputs) => {
            let v = is_cond_controllable(&problem(inputs)?.coordination()?)?;
            Ok(Outcome::verdict("check cc", &v))
        }
        Check::Nonconflicting(p) => {
            let (a, b) = pair(p)?;
            Ok(Outcome::verdict("check nonconflicting", &is_nonconflicting(&a, &b)?))
        }
    }
}

fn extend(e: &Extend) -> Result<Outcome> {
    let (command, result) = match e {
        Extend::Cd(inputs) => {
            let p = problem(inputs)?;
            ("extend cd", extend_for_cd(p.spec()?, p.g1.alphabet(), p.g2.alphabet(), &p.sigma_k)?)
        }
        Extend::Observer(gs) => {
            let g = load(&gs.plant)?;
            ("extend observer", extend_for_observer(&g, &events(&gs.sigma, g.alphabet())?)?)
        }
    };
    let list = names(&result);
    Ok(Outcome::done(vec![list.join(",")], json!({ "command": command, "alphabet": list })))
}

fn solve_to(inst: &ProblemInstance, dir: &Path) -> Result<Outcome> {
    let bundle = solve(inst)?;
    std::fs::create_dir_all(dir)?;
    save_generator(&dir.join("s1.gen"), "s1", &bundle.s1)?;
    save_generator(&dir.join("s2.gen"), "s2", &bundle.s2)?;
    save_generator(&dir.join("coordinator.gen"), "coordinator", &bundle.coordinator)?;
    if let Some(c) = &bundle.nc_coordinator {
        save_generator(&dir.join("c.gen"), "c", c)?;
    }
    let report = serde_json::to_value(&bundle.report).expect("serializable");
    modsup::io::write_report(&dir.join("report.json"), &report)?;

    let r = &bundle.report;
    let mut lines = vec![format!("status: {}", report["status"].as_str().unwrap_or_default())];
    lines.push(format!("sigma_k: {}", r.sigma_k.join(",")));
    if let Some(s0) = &r.sigma_0 {
        lines.push(format!("sigma_0: {}", s0.join(",")));
    }
    for a in r.artifacts.iter().chain([&r.monolithic]) {
        lines.push(format!("  {:<16} {:>6} states {:>7} transitions", a.name, a.states, a.transitions));
    }
    for c in &r.certificates {
        let mark = if c.holds { "ok  " } else { "FAIL" };
        lines.push(format!("  [{mark}] {}", c.name));
    }
    Ok(Outcome::done(lines, report))
}

fn oracle(o: &Oracle) -> Result<Outcome> {
    let (command, a) = match o {
        Oracle::Controllable { pair, oracle_depth } => {
            let (k, g) = (load(&pair.spec)?, load(&pair.plant)?);
            ("oracle controllable", crosscheck::controllable(&k, &g, &g.alphabet().uncontrollable(), *oracle_depth)?)
        }
        Oracle::Supcon(pair) => {
            let (k, g) = (load(&pair.spec)?, load(&pair.plant)?);
            ("oracle supcon", crosscheck::supcon(&k, &g, &g.alphabet().uncontrollable())?)
        }
        Oracle::Infcon { pair, oracle_depth } => {
            let (k, g) = (load(&pair.spec)?, load(&pair.plant)?);
            ("oracle infcon", crosscheck::infcon(&k, &g, &g.alphabet().uncontrollable(), *oracle_depth)?)
        }
        Oracle::Nonconflicting(p) => {
            let (a, b) = pair(p)?;
            ("oracle nonconflicting", crosscheck::nonconflicting(&a, &b)?)
        }
        Oracle::Cd(inputs) => {
            let p = problem(inputs)?;
            ("oracle cd", crosscheck::decomposable(p.spec()?, p.g1.alphabet(), p.g2.alphabet(), &p.sigma_k)?)
        }
        Oracle::Observer(gs) => {
            let g = load(&gs.plant)?;
            ("oracle observer", crosscheck::observer(&g, &events(&gs.sigma, g.alphabet())?)?)
        }
    };
    Ok(Outcome::agreement(command, &a))
}
