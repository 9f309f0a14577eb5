//! Memoized breadth-first exploration.

use std::collections::HashMap;

use acm_machine::Machine;
use acm_trace::{check_relation, holds, State, StepLabel, Trace};

use crate::obligation::{Body, Obligation, PhasePart};
use crate::report::{Counterexample, ExplorationReport, ObligationVerdict, Status};
use crate::{ExplorerError, Result};

pub const DEFAULT_STATE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    pub state_cap: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl ExploreOptions {
    /// Defaults, with the state cap taken from `ACM_STATE_CAP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("ACM_STATE_CAP") {
            Ok(v) => {
                let cap = v
                    .trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|c| *c > 0)
                    .ok_or_else(|| ExplorerError::Config(format!("ACM_STATE_CAP must be a positive integer, got `{v}`")))?;
                Ok(ExploreOptions { state_cap: cap })
            }
            Err(_) => Ok(ExploreOptions::default()),
        }
    }
}

const ROOT: u32 = u32::MAX;

/// Where an obligation first failed: a state, or the `k`th successor step of one.
#[derive(Debug, Clone, Copy)]
struct Failure {
    at: u32,
    step: Option<usize>,
    part: Option<PhasePart>,
}

#[derive(Default)]
struct Tally {
    checks: u64,
    failure: Option<Failure>,
}

/// The visited-state graph built by breadth-first search.
pub struct Graph<S> {
    pub states: Vec<S>,
    parent: Vec<(u32, u16)>,
    pub transitions: usize,
    pub truncated: bool,
}

impl<S: Clone + Eq + std::hash::Hash> Graph<S> {
    /// Path of state indices from an initial state to `i`.
    fn path(&self, mut i: u32) -> Vec<u32> {
        let mut out = vec![i];
        while self.parent[i as usize].0 != ROOT {
            i = self.parent[i as usize].0;
            out.push(i);
        }
        out.reverse();
        out
    }

    /// The observed trace reaching state `i`, extended by its `step`th
    /// successor if given.
    pub fn trace_to<M: Machine<State = S>>(&self, m: &M, i: usize, step: Option<usize>) -> Trace {
        let path = self.path(i as u32);
        let mut tr = Trace::new(m.observe(&self.states[path[0] as usize]));
        for w in path.windows(2) {
            let pos = self.parent[w[1] as usize].1 as usize;
            let (label, next) = m.successors(&self.states[w[0] as usize]).swap_remove(pos);
            tr.push(label, m.observe(&next));
        }
        if let Some(k) = step {
            let (label, next) = m.successors(&self.states[i]).swap_remove(k);
            tr.push(label, m.observe(&next));
        }
        tr
    }
}

/// Every state reachable from the initial states, in breadth-first order.
///
/// Stops adding states once `cap` have been found.
pub fn reachable<M: Machine>(m: &M, cap: usize) -> Graph<M::State> {
    let mut g = Graph {
        states: Vec::new(),
        parent: Vec::new(),
        transitions: 0,
        truncated: false,
    };
    walk(m, cap, &mut g, |_, _, _| Ok(())).expect("no visitor errors");
    g
}

/// Breadth-first search calling `visit(i, k, next)` for each state `i`
/// with `k = None`, then for each successor `k`.
fn walk<M, F>(m: &M, cap: usize, g: &mut Graph<M::State>, mut visit: F) -> Result<()>
where
    M: Machine,
    F: FnMut(&Graph<M::State>, usize, Option<(usize, &StepLabel, &M::State)>) -> Result<()>,
{
    let mut index: HashMap<M::State, u32> = HashMap::new();
    for s in m.initial_states() {
        if index.len() >= cap {
            g.truncated = true;
            break;
        }
        if !index.contains_key(&s) {
            index.insert(s.clone(), g.states.len() as u32);
            g.states.push(s);
            g.parent.push((ROOT, 0));
        }
    }
    let mut i = 0;
    while i < g.states.len() {
        visit(g, i, None)?;
        let succ = m.successors(&g.states[i]);
        for (k, (label, next)) in succ.iter().enumerate() {
            g.transitions += 1;
            visit(g, i, Some((k, label, next)))?;
            if !index.contains_key(next) {
                if g.states.len() >= cap {
                    g.truncated = true;
                    continue;
                }
                index.insert(next.clone(), g.states.len() as u32);
                g.states.push(next.clone());
                g.parent.push((i as u32, k as u16));
            }
        }
        i += 1;
    }
    Ok(())
}

fn eval_err(id: &str) -> impl Fn(acm_trace::TraceError) -> ExplorerError + '_ {
    move |source| ExplorerError::Eval {
        obligation: id.to_string(),
        source,
    }
}

/// Evaluates `obligations` over every reachable state and transition of `m`.
pub fn explore<M: Machine>(m: &M, obligations: &[Obligation], opts: &ExploreOptions) -> Result<ExplorationReport> {
    let mut tallies: Vec<Tally> = obligations.iter().map(|_| Tally::default()).collect();
    let needs_after = obligations.iter().any(|o| !matches!(o.body, Body::State(_)));
    let mut g = Graph {
        states: Vec::new(),
        parent: Vec::new(),
        transitions: 0,
        truncated: false,
    };
    let mut complete = 0;
    let mut before: State = State::new();

    walk(m, opts.state_cap, &mut g, |g, i, step| {
        let s = &g.states[i];
        let Some((k, label, next)) = step else {
            before = m.observe(s);
            if m.is_complete(s) {
                complete += 1;
            }
            for (o, t) in obligations.iter().zip(&mut tallies) {
                let fail = match &o.body {
                    Body::State(e) => {
                        t.checks += 1;
                        (!holds(e, &before).map_err(eval_err(&o.id))?).then_some(None)
                    }
                    Body::Phase(pc) if g.parent[i].0 == ROOT && pc.inside(&before) => {
                        t.checks += 1;
                        (!pc.entry_holds(&before).map_err(eval_err(&o.id))?).then_some(Some(PhasePart::Entry))
                    }
                    _ => None,
                };
                if let (Some(part), None) = (fail, &t.failure) {
                    t.failure = Some(Failure { at: i as u32, step: None, part });
                }
            }
            return Ok(());
        };
        if !needs_after {
            return Ok(());
        }
        let after = m.observe(next);
        for (o, t) in obligations.iter().zip(&mut tallies) {
            let fail = match &o.body {
                Body::State(_) => None,
                Body::Step(scope, r) => {
                    if !scope.matches(label) {
                        continue;
                    }
                    t.checks += 1;
                    (!check_relation(r, &before, &after).map_err(eval_err(&o.id))?).then_some(None)
                }
                Body::Phase(pc) => {
                    let was = pc.inside(&before);
                    let own = label.actor == pc.owner;
                    if !was && !(own && pc.inside(&after)) {
                        continue;
                    }
                    t.checks += 1;
                    let (part, ok) = match (was, own) {
                        (false, _) => (PhasePart::Entry, pc.entry_holds(&after).map_err(eval_err(&o.id))?),
                        (true, true) => (
                            PhasePart::Guarantee,
                            check_relation(&pc.guar, &before, &after).map_err(eval_err(&o.id))?,
                        ),
                        (true, false) => (
                            PhasePart::Rely,
                            check_relation(&pc.rely, &before, &after).map_err(eval_err(&o.id))?,
                        ),
                    };
                    (!ok).then_some(Some(part))
                }
            };
            if let (Some(part), None) = (fail, &t.failure) {
                t.failure = Some(Failure {
                    at: i as u32,
                    step: Some(k),
                    part,
                });
            }
        }
        Ok(())
    })?;

    let verdicts = obligations
        .iter()
        .zip(tallies)
        .map(|(o, t)| {
            let status = match (&t.failure, t.checks) {
                (Some(_), _) => Status::Fail,
                (None, 0) => Status::Vacuous,
                (None, _) => Status::Pass,
            };
            let counterexample = t.failure.map(|f| {
                let trace = g.trace_to(m, f.at as usize, f.step);
                let what = if f.step.is_some() { "last step" } else { "last state" };
                let note = match f.part {
                    Some(part) => format!("{what} breaks the {part}"),
                    None => format!("{what} violates {}", o.id),
                };
                Counterexample { trace, note }
            });
            ObligationVerdict {
                id: o.id.clone(),
                kind: o.kind,
                anchor: o.anchor.clone(),
                description: o.description.clone(),
                status,
                checks: t.checks,
                counterexample,
            }
        })
        .collect();

    Ok(ExplorationReport {
        machine: m.id(),
        reachable_states: g.states.len(),
        transitions: g.transitions,
        complete_states: complete,
        truncated: g.truncated,
        state_cap: opts.state_cap,
        verdicts,
    })
}
