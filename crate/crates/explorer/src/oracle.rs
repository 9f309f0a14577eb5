//! Depth-first enumerators kept independent of the breadth-first explorer,
//! for cross-checking it.

use std::collections::HashSet;

use acm_machine::{Content, FourSlotMachine, Machine};
use acm_trace::{posvals, Expr, Interval, Trace, Value};

/// What a path-by-path enumeration saw.
#[derive(Debug, Clone)]
pub struct PathSummary<S> {
    pub states: HashSet<S>,
    /// Maximal paths followed to the end.
    pub paths: u64,
    /// Paths cut because a process spun more than the budget.
    pub diverged: u64,
}

/// Follows every path from every initial state without memoization.
///
/// A step that leaves the state unchanged is a spin; a process may spin at
/// most `spin_budget` times on a path, after which that branch counts as
/// diverged.
pub fn reachable_by_paths<M: Machine>(m: &M, spin_budget: usize) -> PathSummary<M::State> {
    let procs = m.processes();
    let mut out = PathSummary {
        states: HashSet::new(),
        paths: 0,
        diverged: 0,
    };
    for s in m.initial_states() {
        let mut spins = vec![0; procs.len()];
        descend(m, &procs, spin_budget, s, &mut spins, &mut out);
    }
    out
}

fn descend<M: Machine>(
    m: &M,
    procs: &[&str],
    budget: usize,
    s: M::State,
    spins: &mut [usize],
    out: &mut PathSummary<M::State>,
) {
    let succ = m.successors(&s);
    out.states.insert(s.clone());
    if succ.is_empty() {
        out.paths += 1;
        return;
    }
    for (label, next) in succ {
        if next == s {
            let p = procs.iter().position(|p| *p == label.actor).expect("known actor");
            if spins[p] == budget {
                out.diverged += 1;
                continue;
            }
            spins[p] += 1;
            descend(m, procs, budget, next, spins, out);
            spins[p] -= 1;
        } else {
            descend(m, procs, budget, next, spins, out);
        }
    }
}

/// Reachable states by a memoized depth-first search over an explicit stack.
pub fn reachable_by_dfs<M: Machine>(m: &M) -> HashSet<M::State> {
    let mut seen = HashSet::new();
    let mut stack = m.initial_states();
    stack.reverse();
    while let Some(s) = stack.pop() {
        if seen.contains(&s) {
            continue;
        }
        for (_, next) in m.successors(&s).into_iter().rev() {
            if !seen.contains(&next) {
                stack.push(next);
            }
        }
        seen.insert(s);
    }
    seen
}

/// Read results audited along every path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReadAudit {
    pub paths: u64,
    pub reads: u64,
    pub torn: u64,
    /// Results that `b` never held during the read.
    pub stale: u64,
    /// Results older than the previous read's.
    pub nonmonotonic: u64,
}

impl ReadAudit {
    pub fn clean(&self) -> bool {
        self.torn == 0 && self.stale == 0 && self.nonmonotonic == 0
    }
}

/// Walks every path of the four-slot machine, recomputing from the
/// concrete states which values `b` held during each read.
pub fn audit_fourslot_reads(m: &FourSlotMachine) -> ReadAudit {
    let mut audit = ReadAudit::default();
    for s in m.initial_states() {
        let mut history = vec![s.retrieve_b()];
        audit_path(m, s, &mut history, None, None, &mut audit);
    }
    audit
}

fn audit_path(
    m: &FourSlotMachine,
    s: acm_machine::FourSlotState,
    history: &mut Vec<Content>,
    read_start: Option<usize>,
    last: Option<u8>,
    audit: &mut ReadAudit,
) {
    let succ = m.successors(&s);
    if succ.is_empty() {
        audit.paths += 1;
        return;
    }
    for (label, next) in succ {
        history.push(next.retrieve_b());
        let mut start = read_start;
        let mut prev = last;
        if label.actor == "reader" {
            if s.reader_pc == 0 {
                start = Some(history.len() - 2);
            }
            if next.reads_done > s.reads_done {
                audit.reads += 1;
                match next.r.expect("read result") {
                    Content::Torn => audit.torn += 1,
                    Content::Val(v) => {
                        let from = start.expect("read started");
                        if !history[from..].contains(&Content::Val(v)) {
                            audit.stale += 1;
                        }
                        if prev.is_some_and(|p| v < p) {
                            audit.nonmonotonic += 1;
                        }
                        prev = Some(v);
                    }
                }
                start = None;
            }
        }
        audit_path(m, next, history, start, prev, audit);
        history.pop();
    }
}

/// Every maximal path of `m` as an observed trace.
pub fn for_each_complete_trace<M: Machine>(m: &M, mut f: impl FnMut(&Trace)) {
    for s in m.initial_states() {
        let mut tr = Trace::new(m.observe(&s));
        traces_from(m, s, &mut tr, &mut f);
    }
}

fn traces_from<M: Machine>(m: &M, s: M::State, tr: &mut Trace, f: &mut impl FnMut(&Trace)) {
    let succ = m.successors(&s);
    if succ.is_empty() {
        f(tr);
        return;
    }
    for (label, next) in succ {
        let mut ext = tr.clone();
        ext.push(label, m.observe(&next));
        traces_from(m, next, &mut ext, f);
    }
}

/// Read intervals of a four-slot trace: from the state before each
/// `load-t` to the state after the matching `read`.
pub fn read_intervals(tr: &Trace) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, label) in tr.labels().iter().enumerate() {
        match (label.actor.as_str(), label.detail.as_str()) {
            ("reader", "load-t") => start = Some(i),
            ("reader", "read") => {
                if let Some(lo) = start.take() {
                    out.push(Interval::new(lo, i + 1));
                }
            }
            _ => {}
        }
    }
    out
}

/// Checks `reader.r` against `[b]` over each read interval of `tr`.
/// Returns the first interval whose result is outside.
pub fn stale_read(tr: &Trace) -> acm_trace::Result<Option<Interval>> {
    let b = Expr::var("b");
    let r = acm_trace::VarName::local("reader", "r");
    for iv in read_intervals(tr) {
        let got = tr.states()[iv.hi].get(&r).cloned().unwrap_or(Value::Undef);
        if got == Value::Torn || !posvals(tr, iv, &b)?.contains(&got) {
            return Ok(Some(iv));
        }
    }
    Ok(None)
}
