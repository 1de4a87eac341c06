//! Distributed supervisor synthesis for modular discrete-event systems.
//!
//! Two plants `G1`, `G2` are supervised locally, each together with a
//! coordinator `Gk` built from their projections onto a shared alphabet
//! `Σk`. The crate decides whether a specification admits such local
//! supervisors, constructs them when it does, and otherwise falls back to a
//! coordination-control pipeline that yields a controllable sublanguage plus
//! an optional coordinator for nonconflict.
//!
//! Modules, bottom-up:
//! - [`automata`]: generators and language-level operators
//! - [`synthesis`]: controllability, supremal controllable sublanguage,
//!   infimal prefix-closed controllable superlanguage
//! - [`coordination`]: coordinators, conditional decomposability, observers,
//!   (relaxed) conditional controllability, distributed supervisors
//! - [`solver`]: the end-to-end pipeline
//! - [`oracle`]: brute-force reference semantics on bounded languages, and
//!   [`crosscheck`] comparing it against the automaton operators
//! - [`random`]: seeded instance generation for property campaigns
//! - [`io`]: generator files, manifests and run reports

pub mod alphabet;
pub mod automata;
pub mod coordination;
pub mod crosscheck;
pub mod error;
pub mod generator;
pub mod io;
pub mod oracle;
pub mod random;
pub mod solver;
pub mod synthesis;
pub mod verdict;

pub use alphabet::{Alphabet, Event, EventSet};
pub use automata::LanguageKind;
pub use error::{Error, Result};
pub use generator::{Generator, StateId};
pub use verdict::{Counterexample, Reason, Verdict, Word};
