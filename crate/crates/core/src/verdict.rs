use std::fmt;

use serde::{Deserialize, Serialize};

/// A word, as a sequence of event names.
pub type Word = Vec<String>;

pub fn word_to_string(word: &[String]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        word.join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    InclusionViolation,
    ControllabilityViolation,
    Blocking,
    CdViolation,
    ObserverViolation,
    NonconflictViolation,
}

/// Evidence that a property fails. `word` replays on the generators the
/// check was run against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub word: Word,
    pub reason: Reason,
    /// Observer violations: the projected target word `t` that `word` cannot
    /// be completed to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Word>,
    /// Which clause, side or component failed, when the check has several.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Counterexample {
    pub fn new(word: Word, reason: Reason) -> Self {
        Counterexample { word, reason, target: None, detail: String::new() }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn with_target(mut self, target: Word) -> Self {
        self.target = Some(target);
        self
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} on `{}`", self.reason, word_to_string(&self.word))?;
        if let Some(t) = &self.target {
            write!(f, " (target `{}`)", word_to_string(t))?;
        }
        if !self.detail.is_empty() {
            write!(f, " [{}]", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of a decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }

    pub fn into_counterexample(self) -> Option<Counterexample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }

    /// Rewrites the detail of a failing verdict.
    pub fn annotate(self, detail: impl Into<String>) -> Verdict {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(c) => Verdict::Fails(c.with_detail(detail)),
        }
    }
}

impl From<Option<Counterexample>> for Verdict {
    fn from(c: Option<Counterexample>) -> Self {
        match c {
            None => Verdict::Holds,
            Some(c) => Verdict::Fails(c),
        }
    }
}
