//! Generator files, instance manifests and run reports.
//!
//! A generator file is TOML:
//!
//! ```toml
//! name = "G1"
//! states = ["s0", "s1"]
//! initial = "s0"
//! marked = ["s1"]
//! transitions = [["s0", "a", "s1"]]
//!
//! [[events]]
//! name = "a"
//! controllable = false
//! ```
//!
//! Saving writes the canonical form: events and states sorted by name,
//! transitions by `(source, event)`. Loading accepts any order.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::alphabet::{valid_event_name, Alphabet, Event};
use crate::coordination::check_sandwich;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::solver::{ProblemInstance, SolveOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventEntry {
    pub name: String,
    pub controllable: bool,
}

/// On-disk form of a [`Generator`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    #[serde(default)]
    pub marked: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<(String, String, String)>,
    pub events: Vec<EventEntry>,
}

impl GeneratorFile {
    /// Canonical file for `g`.
    pub fn from_generator(name: &str, g: &Generator) -> Self {
        let mut events: Vec<EventEntry> = g
            .alphabet()
            .events()
            .iter()
            .map(|e| EventEntry { name: e.name.clone(), controllable: e.controllable })
            .collect();
        events.sort_by(|a, b| a.name.cmp(&b.name));
        let mut states: Vec<String> = g.state_names().to_vec();
        states.sort();
        let mut marked: Vec<String> = g.marked_states().map(|q| g.state_name(q).to_string()).collect();
        marked.sort();
        let mut transitions: Vec<(String, String, String)> = g
            .transitions()
            .map(|(s, e, d)| {
                (g.state_name(s).to_string(), g.alphabet().event(e).name.clone(), g.state_name(d).to_string())
            })
            .collect();
        transitions.sort();
        GeneratorFile {
            name: name.to_string(),
            states,
            initial: g.state_name(g.initial()).to_string(),
            marked,
            transitions,
            events,
        }
    }

    /// Builds the generator, checking every reference and invariant.
    pub fn to_generator(&self, origin: &str) -> Result<Generator> {
        let parse = |field: String, message: String| Error::Parse { location: format!("{origin}: {field}"), message };
        for (i, e) in self.events.iter().enumerate() {
            if !valid_event_name(&e.name) {
                return Err(parse(format!("events[{i}]"), format!("invalid event name `{}`", e.name)));
            }
        }
        let alphabet =
            Alphabet::new(self.events.iter().map(|e| Event { name: e.name.clone(), controllable: e.controllable }))?;
        let mut b = Generator::builder(alphabet.clone());
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(Error::Invariant(format!("unique state names: `{s}` is listed twice")));
            }
            b.state(s, false);
        }
        for (i, m) in self.marked.iter().enumerate() {
            if !self.states.contains(m) {
                return Err(parse(format!("marked[{i}]"), format!("unknown state `{m}`")));
            }
            b.state(m, true);
        }
        for (i, (s, e, d)) in self.transitions.iter().enumerate() {
            if !alphabet.contains(e) {
                return Err(parse(format!("transitions[{i}]"), format!("unknown event `{e}`")));
            }
            for q in [s, d] {
                if !self.states.contains(q) {
                    return Err(parse(format!("transitions[{i}]"), format!("unknown state `{q}`")));
                }
            }
            b.transition(s, e, d)?;
        }
        if !self.states.contains(&self.initial) {
            return Err(parse("initial".into(), format!("unknown state `{}`", self.initial)));
        }
        b.build(&self.initial)
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn toml_error(origin: &str, text: &str, e: toml::de::Error) -> Error {
    let location = match e.span() {
        Some(span) => {
            let (line, col) = line_col(text, span.start);
            format!("{origin}:{line}:{col}")
        }
        None => origin.to_string(),
    };
    Error::Parse { location, message: e.message().to_string() }
}

/// Parses generator-file text; `origin` names the source in errors.
pub fn parse_generator(text: &str, origin: &str) -> Result<(String, Generator)> {
    let file: GeneratorFile = toml::from_str(text).map_err(|e| toml_error(origin, text, e))?;
    let g = file.to_generator(origin)?;
    Ok((file.name, g))
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn inline_list<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    let items: Vec<String> = items.into_iter().map(|s| quote(s)).collect();
    format!("[{}]", items.join(", "))
}

/// Canonical text for `g`: one transition per line, events last.
pub fn render_generator(name: &str, g: &Generator) -> String {
    let file = GeneratorFile::from_generator(name, g);
    let mut out = String::new();
    out.push_str(&format!("name = {}\n", quote(&file.name)));
    out.push_str(&format!("states = {}\n", inline_list(&file.states)));
    out.push_str(&format!("initial = {}\n", quote(&file.initial)));
    out.push_str(&format!("marked = {}\n", inline_list(&file.marked)));
    if file.transitions.is_empty() {
        out.push_str("transitions = []\n");
    } else {
        out.push_str("transitions = [\n");
        for (s, e, d) in &file.transitions {
            out.push_str(&format!("    {},\n", inline_list([s, e, d])));
        }
        out.push_str("]\n");
    }
    for e in &file.events {
        out.push_str(&format!("\n[[events]]\nname = {}\ncontrollable = {}\n", quote(&e.name), e.controllable));
    }
    out
}

pub fn load_generator(path: &Path) -> Result<(String, Generator)> {
    let text = fs::read_to_string(path)?;
    parse_generator(&text, &path.display().to_string())
}

pub fn save_generator(path: &Path, name: &str, g: &Generator) -> Result<()> {
    write_atomic(path, render_generator(name, g).as_bytes())
}

/// Writes via a sibling temporary file and a rename, so readers never see
/// a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let file_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{file_name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn write_report<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, render_json(value).as_bytes())
}

/// Graphviz rendering, for inspection only.
pub fn to_dot(name: &str, g: &Generator) -> String {
    let mut out = format!("digraph \"{name}\" {{\n  rankdir=LR;\n  init [shape=point];\n");
    for q in 0..g.num_states() {
        let shape = if g.is_marked(q) { "doublecircle" } else { "circle" };
        out.push_str(&format!("  \"{}\" [shape={shape}];\n", g.state_name(q)));
    }
    out.push_str(&format!("  init -> \"{}\";\n", g.state_name(g.initial())));
    for (s, e, d) in g.transitions() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            g.state_name(s),
            g.state_name(d),
            g.alphabet().event(e).name
        ));
    }
    out.push_str("}\n");
    out
}

fn default_true() -> bool {
    true
}

fn default_depth() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestOptions {
    #[serde(default)]
    pub auto_extend_cd: bool,
    #[serde(default = "default_true")]
    pub auto_extend_observer: bool,
    #[serde(default = "default_depth")]
    pub oracle_depth: usize,
}

impl Default for ManifestOptions {
    fn default() -> Self {
        ManifestOptions { auto_extend_cd: false, auto_extend_observer: true, oracle_depth: default_depth() }
    }
}

/// A problem instance on disk: two plant files, a specification file and
/// optionally `Σk` (default: the shared events). Paths are relative to the
/// manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceManifest {
    pub plants: Vec<PathBuf>,
    pub spec: PathBuf,
    #[serde(default)]
    pub sigma_k: Option<Vec<String>>,
    #[serde(default)]
    pub options: ManifestOptions,
}

/// Generators and settings read from a manifest.
#[derive(Clone, Debug)]
pub struct LoadedManifest {
    pub g1: Generator,
    pub g2: Generator,
    pub spec: Generator,
    pub sigma_k: Alphabet,
    pub options: ManifestOptions,
}

impl LoadedManifest {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            auto_extend_cd: self.options.auto_extend_cd,
            auto_extend_observer: self.options.auto_extend_observer,
        }
    }

    pub fn problem(&self) -> Result<ProblemInstance> {
        ProblemInstance::with_options(
            self.g1.clone(),
            self.g2.clone(),
            self.spec.clone(),
            &self.sigma_k,
            self.solve_options(),
        )
    }
}

/// Resolves `names` against `universe`, keeping the controllability flags.
pub fn parse_event_list(names: &[String], universe: &Alphabet) -> Result<Alphabet> {
    for n in names {
        if !valid_event_name(n) {
            return Err(Error::Parse { location: "event list".into(), message: format!("invalid event name `{n}`") });
        }
        if !universe.contains(n) {
            return Err(Error::AlphabetBounds(format!("event `{n}` is not in {universe}")));
        }
    }
    universe.restrict(names)
}

/// Splits a comma-separated list, ignoring blanks.
pub fn split_event_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|n| !n.is_empty()).map(str::to_string).collect()
}

pub fn parse_manifest(text: &str, origin: &str) -> Result<InstanceManifest> {
    let m: InstanceManifest = toml::from_str(text).map_err(|e| toml_error(origin, text, e))?;
    if m.plants.len() != 2 {
        return Err(Error::Parse {
            location: format!("{origin}: plants"),
            message: format!("exactly two plants are required, found {}", m.plants.len()),
        });
    }
    Ok(m)
}

pub fn load_manifest(path: &Path) -> Result<LoadedManifest> {
    let text = fs::read_to_string(path)?;
    let m = parse_manifest(&text, &path.display().to_string())?;
    let base = path.parent().unwrap_or(Path::new("."));
    let load = |p: &Path| load_generator(&base.join(p)).map(|(_, g)| g);
    let g1 = load(&m.plants[0])?;
    let g2 = load(&m.plants[1])?;
    let spec = load(&m.spec)?;
    let union = g1.alphabet().union(g2.alphabet())?;
    let sigma_k = match &m.sigma_k {
        Some(names) => parse_event_list(names, &union)?,
        None => g1.alphabet().intersection(g2.alphabet()),
    };
    check_sandwich(g1.alphabet(), g2.alphabet(), &sigma_k)?;
    Ok(LoadedManifest { g1, g2, spec, sigma_k, options: m.options })
}
