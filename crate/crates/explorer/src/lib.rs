//! Exhaustive checking of the machines in `acm-machine`.
//!
//! * [`explore`] enumerates every interleaving breadth-first with visited-state
//!   memoization and evaluates a set of [`Obligation`]s on every reachable
//!   state and step. Failures come with a trace that [`replay`] re-executes.
//! * [`standard_obligations`] collects the conditions the four-slot
//!   derivation relies on, the intermediate machine's index discipline and
//!   the one-place buffer's guarantees.
//! * [`check_fourslot_refinement`] checks that the four-slot code simulates
//!   the intermediate machine under the retrieve function.
//! * [`validate_law`] checks the possible-values refinement laws against
//!   every bounded environment.
//! * [`oracle`] holds depth-first enumerators used to cross-check the explorer.

use thiserror::Error;

mod explore;
mod laws;
mod obligation;
pub mod oracle;
mod phase;
mod refinement;
mod replay;
mod report;
mod scenario;
mod standard;

pub use explore::{explore, reachable, ExploreOptions, Graph, DEFAULT_STATE_CAP};
pub use laws::{validate_law, Law, LawConfig, LawReport, MAX_ENV_STEPS, MAX_LAW_VALUES};
pub use obligation::{Body, Obligation, ObligationKind, PhaseContract, PhasePart, StepScope};
pub use phase::{check_phase_contract, PhaseVerdict};
pub use refinement::{check_fourslot_refinement, RefinementReport};
pub use replay::replay;
pub use report::{Counterexample, ExplorationReport, ObligationVerdict, Status};
pub use scenario::{run_scenario, standard_obligations, Scenario};
pub use standard::{fourslot_obligations, intermediate_obligations, monotonic_reads, oneplace_obligations};

#[derive(Debug, Error)]
pub enum ExplorerError {
    #[error(transparent)]
    Machine(#[from] acm_machine::MachineError),
    #[error(transparent)]
    Trace(#[from] acm_trace::TraceError),
    #[error("obligation {obligation}: {source}")]
    Eval {
        obligation: String,
        source: acm_trace::TraceError,
    },
    #[error("replay failed at step {step}: {why}")]
    Replay { step: usize, why: String },
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, ExplorerError>;
