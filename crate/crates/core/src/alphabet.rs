use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Set of event names, used for uncontrollable-event arguments.
pub type EventSet = BTreeSet<String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
}

impl Event {
    pub fn controllable(name: impl Into<String>) -> Self {
        Event { name: name.into(), controllable: true }
    }

    pub fn uncontrollable(name: impl Into<String>) -> Self {
        Event { name: name.into(), controllable: false }
    }
}

/// An ordered set of events. The declared order fixes the order in which
/// words are enumerated and counterexamples are chosen.
///
/// `==` compares the ordered sequence; use [`Alphabet::same_events`] when
/// only membership matters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    events: Vec<Event>,
}

pub(crate) fn valid_event_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut out = Alphabet::default();
        for ev in events {
            if ev.name.is_empty() {
                return Err(Error::Invariant("event names must be non-empty".into()));
            }
            if out.position(&ev.name).is_some() {
                return Err(Error::Invariant(format!("duplicate event `{}`", ev.name)));
            }
            out.events.push(ev);
        }
        Ok(out)
    }

    /// Builds an alphabet from names; events listed in `controllable` are
    /// controllable, all others uncontrollable.
    pub fn with_controllable(names: &[&str], controllable: &[&str]) -> Result<Self> {
        Alphabet::new(names.iter().map(|n| Event { name: (*n).to_string(), controllable: controllable.contains(n) }))
    }

    pub fn empty() -> Self {
        Alphabet::default()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, idx: usize) -> &Event {
        &self.events[idx]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.events.iter().map(|e| e.name.as_str())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|e| e.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Event> {
        self.events.iter().find(|e| e.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn uncontrollable(&self) -> EventSet {
        self.events.iter().filter(|e| !e.controllable).map(|e| e.name.clone()).collect()
    }

    pub fn controllable_events(&self) -> EventSet {
        self.events.iter().filter(|e| e.controllable).map(|e| e.name.clone()).collect()
    }

    pub fn name_set(&self) -> EventSet {
        self.names().map(str::to_string).collect()
    }

    /// Same events with the same controllability, ignoring order.
    pub fn same_events(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }

    /// Every event of `self` occurs in `other` with the same controllability.
    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.events.iter().all(|e| other.get(&e.name) == Some(e))
    }

    /// Checks that shared events agree on controllability.
    pub fn check_compatible(&self, other: &Alphabet) -> Result<()> {
        for e in &self.events {
            if let Some(o) = other.get(&e.name) {
                if o.controllable != e.controllable {
                    return Err(Error::ControllabilityMismatch(e.name.clone()));
                }
            }
        }
        Ok(())
    }

    /// Events of `self` followed by the events of `other` not already present.
    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        self.check_compatible(other)?;
        let mut events = self.events.clone();
        events.extend(other.events.iter().filter(|e| !self.contains(&e.name)).cloned());
        Ok(Alphabet { events })
    }

    /// Events of `self` that also occur in `other`, in `self`'s order.
    pub fn intersection(&self, other: &Alphabet) -> Alphabet {
        Alphabet { events: self.events.iter().filter(|e| other.contains(&e.name)).cloned().collect() }
    }

    pub fn difference(&self, other: &Alphabet) -> Alphabet {
        Alphabet { events: self.events.iter().filter(|e| !other.contains(&e.name)).cloned().collect() }
    }

    /// Sub-alphabet of the named events, in `self`'s order. Unknown names are
    /// an error.
    pub fn restrict<S: AsRef<str>>(&self, names: &[S]) -> Result<Alphabet> {
        for n in names {
            if !self.contains(n.as_ref()) {
                return Err(Error::AlphabetBounds(format!("unknown event `{}`", n.as_ref())));
            }
        }
        Ok(Alphabet {
            events: self.events.iter().filter(|e| names.iter().any(|n| n.as_ref() == e.name)).cloned().collect(),
        })
    }

    pub fn with_event(&self, event: Event) -> Result<Alphabet> {
        self.union(&Alphabet { events: vec![event] })
    }

    /// Events sorted by name.
    pub fn sorted(&self) -> Alphabet {
        let mut events = self.events.clone();
        events.sort_by(|a, b| a.name.cmp(&b.name));
        Alphabet { events }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e.name)?;
            if e.controllable {
                write!(f, "!")?;
            }
        }
        write!(f, "}}")
    }
}
