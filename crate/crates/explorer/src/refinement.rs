//! Simulation of the intermediate machine by the four-slot code.

use acm_machine::{FourSlotMachine, Machine};
use acm_trace::Trace;

use crate::explore::reachable;
use crate::{ExplorerError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport {
    pub states: usize,
    pub steps: usize,
    /// Steps at which `b` changed.
    pub commits: usize,
    /// First offending step: the trace ending in it, and what went wrong.
    pub failure: Option<(Trace, String)>,
}

impl RefinementReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks, on every reachable state and step, that the masked retrieve of
/// the after-state equals the matching intermediate step applied to the
/// masked retrieve of the before-state, and that `b` changes only at a
/// commit step.
pub fn check_fourslot_refinement(m: &FourSlotMachine, cap: usize) -> Result<RefinementReport> {
    let g = reachable(m, cap);
    if g.truncated {
        return Err(ExplorerError::Config(format!("refinement check needs more than {cap} states")));
    }
    let mut report = RefinementReport {
        states: g.states.len(),
        steps: 0,
        commits: 0,
        failure: None,
    };
    for (i, s) in g.states.iter().enumerate() {
        let abs = m.project(s);
        for (k, (label, next)) in m.successors(s).into_iter().enumerate() {
            report.steps += 1;
            let step = m.abstract_step(s, &label)?;
            let problem = match abs.apply(&step) {
                Err(e) => Some(e.to_string()),
                Ok(want) if want != m.project(&next) => Some(format!(
                    "{label} as {step} gives {want:?}, retrieve gives {:?}",
                    m.project(&next)
                )),
                Ok(_) => None,
            };
            let moved = s.retrieve_b() != next.retrieve_b();
            if moved {
                report.commits += 1;
            }
            let problem = problem.or_else(|| {
                (moved && !m.is_commit_step(s, &label)).then(|| format!("b changed at non-commit step {label}"))
            });
            if let Some(why) = problem {
                report.failure = Some((g.trace_to(m, i, Some(k)), why));
                return Ok(report);
            }
        }
    }
    Ok(report)
}
