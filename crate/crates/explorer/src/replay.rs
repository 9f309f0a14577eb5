use acm_machine::Machine;
use acm_trace::Trace;

use crate::{ExplorerError, Result};

/// Re-executes `tr` on `m` through [`Machine::apply_step`], checking each
/// observed state, and returns the concrete states the trace can end in.
pub fn replay<M: Machine>(m: &M, tr: &Trace) -> Result<Vec<M::State>> {
    let mut current: Vec<M::State> = m
        .initial_states()
        .into_iter()
        .filter(|s| m.observe(s) == tr.states()[0])
        .collect();
    if current.is_empty() {
        return Err(ExplorerError::Replay {
            step: 0,
            why: "no initial state matches the first state".into(),
        });
    }
    for (i, label) in tr.labels().iter().enumerate() {
        let want = &tr.states()[i + 1];
        let mut next = Vec::new();
        for s in &current {
            if let Ok(n) = m.apply_step(s, label) {
                if m.observe(&n) == *want && !next.contains(&n) {
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            return Err(ExplorerError::Replay {
                step: i + 1,
                why: format!("{label} is disabled or reaches a different state"),
            });
        }
        current = next;
    }
    Ok(current)
}
