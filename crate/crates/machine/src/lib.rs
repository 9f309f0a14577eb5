//! Interleaving state machines for the buffers and their representation levels.
//!
//! Each machine is a pair of sequential processes whose steps interleave
//! arbitrarily. States are small hashable values so that an explorer can
//! enumerate them exhaustively; [`Machine::observe`] flattens a state into a
//! named-variable [`acm_trace::State`] over which obligations are written.
//!
//! * [`FourSlotMachine`]: Simpson's four-slot code, one line per step, with the
//!   payload copy split into a begin and an end step.
//! * [`IntermediateMachine`]: the index-based abstraction with a set `X` of
//!   slots, a last-written index, a claimed writer index, and the reader's
//!   claimed indices.
//! * [`OnePlaceMachine`]: the flag-synchronised one-place buffer.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use acm_trace::StepLabel;
use thiserror::Error;

mod fourslot;
mod intermediate;
mod oneplace;

pub use fourslot::{
    Content, FourSlotConfig, FourSlotMachine, FourSlotState, InitMode, ReaderOp, SlotCell, WriterOp,
};
pub use intermediate::{AbstractStep, IntermediateMachine, IntermediateState, SigmaState};
pub use oneplace::{OnePlaceMachine, OnePlaceState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("step {0} is not enabled")]
    Disabled(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown machine `{0}` (expected fourslot, oneplace or intermediate:<n>)")]
    UnknownMachine(String),
    #[error("unknown mutation `{0}` (expected swap-pair, early-commit or no-indirection)")]
    UnknownMutation(String),
    #[error("abstract step {step} not allowed: {why}")]
    AbstractStep { step: String, why: String },
}

pub type Result<T> = std::result::Result<T, MachineError>;

/// A closed system of interleaving processes.
pub trait Machine {
    type State: Clone + Eq + Hash + fmt::Debug;

    /// Identifier as accepted by [`MachineId::from_str`], plus the mutation if any.
    fn id(&self) -> String;

    fn initial_states(&self) -> Vec<Self::State>;

    /// Every enabled step with its successor, in a fixed order. Each process
    /// contributes at most one step, except where a nondeterministic choice
    /// is expanded into one label per option.
    fn successors(&self, s: &Self::State) -> Vec<(StepLabel, Self::State)>;

    /// The state as named variables: shared variables by name, process
    /// locals as `process.name`.
    fn observe(&self, s: &Self::State) -> acm_trace::State;

    /// Whether every process has finished its scheduled operations.
    fn is_complete(&self, s: &Self::State) -> bool;

    fn enabled_steps(&self, s: &Self::State) -> Vec<StepLabel> {
        self.successors(s).into_iter().map(|(l, _)| l).collect()
    }

    fn apply_step(&self, s: &Self::State, label: &StepLabel) -> Result<Self::State> {
        self.successors(s)
            .into_iter()
            .find(|(l, _)| l == label)
            .map(|(_, next)| next)
            .ok_or_else(|| MachineError::Disabled(label.to_string()))
    }

    /// The processes of the machine, in the order their steps are listed.
    fn processes(&self) -> Vec<&'static str>;
}

/// Deliberately broken variants of the four-slot code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Writer picks the reader's pair: `cpw <- cpr`.
    SwapPair,
    /// Writer flips `sw(cpw)` before the payload copy ends.
    EarlyCommit,
    /// Reader looks up the slot through a second, separate read of `lpw`.
    NoIndirection,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::SwapPair, Mutation::EarlyCommit, Mutation::NoIndirection];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::SwapPair => "swap-pair",
            Mutation::EarlyCommit => "early-commit",
            Mutation::NoIndirection => "no-indirection",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = MachineError;

    fn from_str(s: &str) -> Result<Self> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| MachineError::UnknownMutation(s.to_string()))
    }
}

/// The shipped mutations.
pub fn mutations() -> Vec<Mutation> {
    Mutation::ALL.to_vec()
}

/// Machine selector: `fourslot`, `intermediate:<n>` or `oneplace`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MachineId {
    FourSlot,
    Intermediate(usize),
    OnePlace,
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineId::FourSlot => f.write_str("fourslot"),
            MachineId::Intermediate(n) => write!(f, "intermediate:{n}"),
            MachineId::OnePlace => f.write_str("oneplace"),
        }
    }
}

impl FromStr for MachineId {
    type Err = MachineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourslot" => Ok(MachineId::FourSlot),
            "oneplace" => Ok(MachineId::OnePlace),
            _ => {
                let n = s
                    .strip_prefix("intermediate:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| MachineError::UnknownMachine(s.to_string()))?;
                if n < 3 {
                    return Err(MachineError::Config(format!(
                        "intermediate needs at least 3 indices, got {n}"
                    )));
                }
                Ok(MachineId::Intermediate(n))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_ids_parse() {
        assert_eq!("fourslot".parse(), Ok(MachineId::FourSlot));
        assert_eq!("intermediate:4".parse(), Ok(MachineId::Intermediate(4)));
        assert_eq!("oneplace".parse(), Ok(MachineId::OnePlace));
        assert!("intermediate:2".parse::<MachineId>().is_err());
        assert!("intermediate:".parse::<MachineId>().is_err());
        assert!("threeslot".parse::<MachineId>().is_err());
        for id in [MachineId::FourSlot, MachineId::Intermediate(5), MachineId::OnePlace] {
            assert_eq!(id.to_string().parse(), Ok(id));
        }
    }

    #[test]
    fn mutations_parse() {
        assert_eq!(mutations().len(), 3);
        for m in mutations() {
            assert_eq!(m.name().parse(), Ok(m));
        }
        assert!("none".parse::<Mutation>().is_err());
    }
}
