//! Finite traces, operation intervals, and their line-oriented text format.
//!
//! ```text
//! b=0 y=1
//! --writer:toggle-->
//! b=0 y=2
//! ```
//!
//! One state per line as sorted `name=value` pairs; each label line explains
//! the transition between the state lines around it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, TraceError};
use crate::state::{State, VarName};
use crate::value::Value;

/// Who took a step and which step it was.
///
/// Actors are process names. Whether a step counts as a program step or an
/// environment step depends on whose operation is being checked: every actor
/// other than the program under check is environment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepLabel {
    pub actor: String,
    pub detail: String,
}

impl StepLabel {
    pub fn new(actor: impl Into<String>, detail: impl Into<String>) -> Self {
        StepLabel {
            actor: actor.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "--{}:{}-->", self.actor, self.detail)
    }
}

impl FromStr for StepLabel {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| TraceError::TraceFormat {
            line: 0,
            msg: format!("{msg}: `{s}`"),
        };
        let body = s
            .strip_prefix("--")
            .and_then(|b| b.strip_suffix("-->"))
            .ok_or_else(|| bad("label must look like --actor:detail-->"))?;
        let (actor, detail) = body.split_once(':').ok_or_else(|| bad("label has no `:`"))?;
        if actor.is_empty() {
            return Err(bad("empty actor"));
        }
        Ok(StepLabel::new(actor, detail))
    }
}

/// A closed index range `[lo, hi]` into a trace's states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Indices of the labels (steps) taken inside the interval.
    pub fn steps(&self) -> std::ops::Range<usize> {
        self.lo..self.hi
    }

    pub fn is_within(&self, outer: Interval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }
}

/// An alternating sequence of states and step labels; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trace {
    states: Vec<State>,
    labels: Vec<StepLabel>,
}

impl Trace {
    pub fn new(initial: State) -> Self {
        Trace {
            states: vec![initial],
            labels: Vec::new(),
        }
    }

    /// Builds a trace whose steps are all labelled `env:step`.
    ///
    /// # Panics
    ///
    /// If `states` is empty.
    pub fn from_states(states: Vec<State>) -> Self {
        assert!(!states.is_empty(), "a trace has at least one state");
        let labels = vec![StepLabel::new("env", "step"); states.len() - 1];
        Trace { states, labels }
    }

    pub fn from_parts(states: Vec<State>, labels: Vec<StepLabel>) -> Result<Self> {
        if states.is_empty() || labels.len() + 1 != states.len() {
            return Err(TraceError::TraceFormat {
                line: 0,
                msg: format!("{} states need {} labels, got {}", states.len(), states.len().saturating_sub(1), labels.len()),
            });
        }
        Ok(Trace { states, labels })
    }

    pub fn push(&mut self, label: StepLabel, next: State) {
        self.labels.push(label);
        self.states.push(next);
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn labels(&self) -> &[StepLabel] {
        &self.labels
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("traces are nonempty")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn whole(&self) -> Interval {
        Interval::new(0, self.states.len() - 1)
    }

    pub fn check(&self, iv: Interval) -> Result<()> {
        if iv.lo <= iv.hi && iv.hi < self.states.len() {
            Ok(())
        } else {
            Err(TraceError::Interval {
                lo: iv.lo,
                hi: iv.hi,
                len: self.states.len(),
            })
        }
    }

    /// Step `i` as (before, label, after).
    pub fn step(&self, i: usize) -> (&State, &StepLabel, &State) {
        (&self.states[i], &self.labels[i], &self.states[i + 1])
    }

    /// The sub-trace covering `iv`.
    pub fn slice(&self, iv: Interval) -> Result<Trace> {
        self.check(iv)?;
        Ok(Trace {
            states: self.states[iv.lo..=iv.hi].to_vec(),
            labels: self.labels[iv.lo..iv.hi].to_vec(),
        })
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.states[0])?;
        for (label, state) in self.labels.iter().zip(&self.states[1..]) {
            writeln!(f, "{label}")?;
            writeln!(f, "{state}")?;
        }
        Ok(())
    }
}

fn parse_state(line: &str, lineno: usize) -> Result<State> {
    let mut out = State::new();
    for binding in line.split_whitespace() {
        let (name, value) = binding.split_once('=').ok_or_else(|| TraceError::TraceFormat {
            line: lineno,
            msg: format!("expected name=value, got `{binding}`"),
        })?;
        let value: Value = value.parse().map_err(|e| TraceError::TraceFormat {
            line: lineno,
            msg: format!("bad value for {name}: {e}"),
        })?;
        out.set(VarName::parse(name), value);
    }
    Ok(out)
}

/// Parses the format produced by `Display`.
impl FromStr for Trace {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Trace> {
        let mut states = Vec::new();
        let mut labels = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let lineno = i + 1;
            if i % 2 == 0 {
                states.push(parse_state(line, lineno)?);
            } else {
                let label = line.parse::<StepLabel>().map_err(|e| match e {
                    TraceError::TraceFormat { msg, .. } => TraceError::TraceFormat { line: lineno, msg },
                    other => other,
                })?;
                labels.push(label);
            }
        }
        if states.len() != labels.len() + 1 {
            return Err(TraceError::TraceFormat {
                line: s.lines().count(),
                msg: "trace must end with a state line".into(),
            });
        }
        Ok(Trace { states, labels })
    }
}
