use std::fmt;

use acm_trace::Trace;

use crate::obligation::ObligationKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Vacuous,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// A trace leading to a violation. For step obligations the last step of
/// the trace is the offending one; for state invariants the last state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trace: Trace,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObligationVerdict {
    pub id: String,
    pub kind: ObligationKind,
    pub anchor: String,
    pub description: String,
    pub status: Status,
    /// How many states or steps the obligation was evaluated on.
    pub checks: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationReport {
    pub machine: String,
    pub reachable_states: usize,
    pub transitions: usize,
    /// Reachable states in which every process has finished.
    pub complete_states: usize,
    /// Set when the state cap stopped the search early.
    pub truncated: bool,
    pub state_cap: usize,
    pub verdicts: Vec<ObligationVerdict>,
}

impl ExplorationReport {
    /// No failures and the search ran to completion.
    pub fn passed(&self) -> bool {
        !self.truncated && self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn verdict(&self, id: &str) -> Option<&ObligationVerdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ObligationVerdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }
}

impl fmt::Display for ExplorationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} states, {} transitions, {} complete{}",
            self.machine,
            self.reachable_states,
            self.transitions,
            self.complete_states,
            if self.truncated { " (TRUNCATED at state cap)" } else { "" }
        )?;
        for v in &self.verdicts {
            writeln!(f, "  {:<8} {:<22} {} [{} checks]", v.status, v.id, v.anchor, v.checks)?;
        }
        Ok(())
    }
}
