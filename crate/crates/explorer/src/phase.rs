use acm_trace::{check_relation, Trace};

use crate::obligation::{PhaseContract, PhasePart};
use crate::report::Status;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseVerdict {
    pub status: Status,
    /// Maximal runs of states with the owner inside the phase.
    pub spans: usize,
    /// First failing check: the part broken and the index of the step, or
    /// of the state for an initial entry.
    pub failure: Option<(PhasePart, usize)>,
}

/// Checks a phase contract along one trace.
///
/// For each span in which the owner's pc is inside the phase, the first
/// state must satisfy the entry condition and each owner step the
/// strengthened guarantee. Steps of other processes must satisfy the
/// strengthened rely only in spans whose entry condition held and whose
/// owner steps, so far, kept the guarantee.
pub fn check_phase_contract(tr: &Trace, pc: &PhaseContract) -> Result<PhaseVerdict> {
    let states = tr.states();
    let mut spans = 0;
    // Whether the current span's entry and owner steps have held so far.
    let mut assumed = false;
    let mut owner_failure = None;
    let mut rely_failure = None;
    for (i, s) in states.iter().enumerate() {
        let inside = pc.inside(s);
        let entered = inside && (i == 0 || !pc.inside(&states[i - 1]));
        if entered {
            spans += 1;
            assumed = pc.entry_holds(s)?;
            if !assumed && owner_failure.is_none() {
                owner_failure = Some((PhasePart::Entry, i));
            }
        }
        if !inside || i + 1 == states.len() {
            continue;
        }
        let (before, label, after) = tr.step(i);
        if label.actor == pc.owner {
            if !check_relation(&pc.guar, before, after)? {
                assumed = false;
                owner_failure.get_or_insert((PhasePart::Guarantee, i));
            }
        } else if assumed && !check_relation(&pc.rely, before, after)? {
            rely_failure.get_or_insert((PhasePart::Rely, i));
        }
    }
    let failure = match (owner_failure, rely_failure) {
        (Some(a), Some(b)) => Some(if a.1 <= b.1 { a } else { b }),
        (a, b) => a.or(b),
    };
    let status = match (failure, spans) {
        (Some(_), _) => Status::Fail,
        (None, 0) => Status::Vacuous,
        (None, _) => Status::Pass,
    };
    Ok(PhaseVerdict { status, spans, failure })
}
