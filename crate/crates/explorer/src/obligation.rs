use std::collections::BTreeSet;
use std::fmt;

use acm_trace::{holds, Expr, State, StepLabel, Value, VarName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObligationKind {
    StateInvariant,
    StepGuarantee,
    StepRely,
    IntervalPost,
    PhaseContract,
}

impl ObligationKind {
    pub fn name(self) -> &'static str {
        match self {
            ObligationKind::StateInvariant => "state-invariant",
            ObligationKind::StepGuarantee => "step-guarantee",
            ObligationKind::StepRely => "step-rely",
            ObligationKind::IntervalPost => "interval-post",
            ObligationKind::PhaseContract => "phase-contract",
        }
    }
}

impl fmt::Display for ObligationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which steps a step obligation applies to.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepScope {
    pub actor: Option<String>,
    pub detail_prefix: Option<String>,
}

impl StepScope {
    pub fn any() -> Self {
        StepScope::default()
    }

    pub fn by(actor: &str) -> Self {
        StepScope {
            actor: Some(actor.into()),
            detail_prefix: None,
        }
    }

    pub fn step(actor: &str, detail_prefix: &str) -> Self {
        StepScope {
            actor: Some(actor.into()),
            detail_prefix: Some(detail_prefix.into()),
        }
    }

    pub fn matches(&self, label: &StepLabel) -> bool {
        self.actor.as_ref().is_none_or(|a| *a == label.actor)
            && self.detail_prefix.as_ref().is_none_or(|p| label.detail.starts_with(p.as_str()))
    }
}

/// A rely/guarantee pair that only holds while `owner`'s pc is inside `phase`.
///
/// The owner must enter the phase in a state satisfying `entry`; while
/// inside, each of its steps satisfies `guar` and each step of any other
/// process satisfies `rely`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseContract {
    pub owner: String,
    pub phase: BTreeSet<i64>,
    pub entry: Expr,
    pub guar: Expr,
    pub rely: Expr,
}

impl PhaseContract {
    pub fn new(owner: &str, phase: impl IntoIterator<Item = i64>, entry: Expr, guar: Expr, rely: Expr) -> Self {
        PhaseContract {
            owner: owner.into(),
            phase: phase.into_iter().collect(),
            entry,
            guar,
            rely,
        }
    }

    /// Whether the owner's pc in `s` lies in the phase.
    pub fn inside(&self, s: &State) -> bool {
        match s.get(&VarName::local(&self.owner, "pc")) {
            Some(Value::Int(pc)) => self.phase.contains(pc),
            _ => false,
        }
    }

    pub(crate) fn entry_holds(&self, s: &State) -> acm_trace::Result<bool> {
        holds(&self.entry, s)
    }
}

/// Which part of a phase contract a step broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasePart {
    Entry,
    Guarantee,
    Rely,
}

impl fmt::Display for PhasePart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhasePart::Entry => "entry condition",
            PhasePart::Guarantee => "strengthened guarantee",
            PhasePart::Rely => "strengthened rely",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    /// Holds in every reachable state.
    State(Expr),
    /// Holds of every matching step, as a relation over before and after.
    Step(StepScope, Expr),
    Phase(PhaseContract),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obligation {
    pub id: String,
    pub kind: ObligationKind,
    /// The condition as it is usually written down.
    pub anchor: String,
    pub description: String,
    pub body: Body,
}

impl Obligation {
    pub fn state(id: &str, anchor: &str, description: &str, e: Expr) -> Self {
        Obligation {
            id: id.into(),
            kind: ObligationKind::StateInvariant,
            anchor: anchor.into(),
            description: description.into(),
            body: Body::State(e),
        }
    }

    pub fn step(id: &str, kind: ObligationKind, anchor: &str, description: &str, scope: StepScope, r: Expr) -> Self {
        Obligation {
            id: id.into(),
            kind,
            anchor: anchor.into(),
            description: description.into(),
            body: Body::Step(scope, r),
        }
    }

    pub fn phase(id: &str, anchor: &str, description: &str, pc: PhaseContract) -> Self {
        Obligation {
            id: id.into(),
            kind: ObligationKind::PhaseContract,
            anchor: anchor.into(),
            description: description.into(),
            body: Body::Phase(pc),
        }
    }
}
