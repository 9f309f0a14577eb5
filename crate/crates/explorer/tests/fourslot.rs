use std::collections::{BTreeSet, HashSet};

use acm::{PairIndex, SlotIndex};
use acm_explorer::oracle::{audit_fourslot_reads, for_each_complete_trace, reachable_by_dfs, reachable_by_paths, stale_read};
use acm_explorer::{
    check_fourslot_refinement, check_phase_contract, explore, fourslot_obligations, reachable, replay, run_scenario,
    standard_obligations, Body, ExploreOptions, Scenario, Status,
};
use acm_machine::{Content, FourSlotConfig, FourSlotMachine, InitMode, Machine, Mutation};
use acm_trace::{State, Trace, Value, VarName};

fn machine(w: usize, r: usize) -> FourSlotMachine {
    FourSlotMachine::new(FourSlotConfig::new(w, r)).unwrap()
}

fn canonical(w: usize, r: usize, m: Option<Mutation>) -> FourSlotMachine {
    FourSlotMachine::new(FourSlotConfig::new(w, r).init(InitMode::Canonical).mutation(m)).unwrap()
}

fn opts() -> ExploreOptions {
    ExploreOptions::default()
}

#[test]
fn seven_standard_obligations() {
    let ids: Vec<String> = standard_obligations(&Scenario::fourslot(1, 1)).unwrap().into_iter().map(|o| o.id).collect();
    assert_eq!(
        ids,
        ["write-frame", "write-guarantee", "read-freshness", "reader-rely", "read-phase", "slot-disjointness", "pair-choice"]
    );
}

#[test]
fn unmutated_passes_across_bounds() {
    for w in 0..=3 {
        for r in 0..=3 {
            let rep = run_scenario(&Scenario::fourslot(w, r), &opts()).unwrap();
            assert!(rep.passed(), "W={w} R={r}\n{rep}");
            if w > 0 && r > 0 {
                assert!(rep.verdicts.iter().all(|v| v.status == Status::Pass), "W={w} R={r}\n{rep}");
            }
        }
    }
}

#[test]
fn each_symmetric_start_passes_on_its_own() {
    let m = machine(2, 2);
    let all = m.initial_states();
    let obligations = fourslot_obligations(&m);
    for start in all {
        let single = Single { inner: &m, start };
        let rep = explore(&single, &obligations, &opts()).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

/// A four-slot machine restricted to one initial state.
struct Single<'a> {
    inner: &'a FourSlotMachine,
    start: acm_machine::FourSlotState,
}

impl Machine for Single<'_> {
    type State = acm_machine::FourSlotState;
    fn id(&self) -> String {
        self.inner.id()
    }
    fn initial_states(&self) -> Vec<Self::State> {
        vec![self.start.clone()]
    }
    fn successors(&self, s: &Self::State) -> Vec<(acm_trace::StepLabel, Self::State)> {
        self.inner.successors(s)
    }
    fn observe(&self, s: &Self::State) -> State {
        self.inner.observe(s)
    }
    fn is_complete(&self, s: &Self::State) -> bool {
        self.inner.is_complete(s)
    }
    fn processes(&self) -> Vec<&'static str> {
        self.inner.processes()
    }
}

#[test]
fn reports_are_deterministic() {
    let a = run_scenario(&Scenario::fourslot(2, 2), &opts()).unwrap();
    let b = run_scenario(&Scenario::fourslot(2, 2), &opts()).unwrap();
    assert_eq!(a, b);
    let a = run_scenario(&Scenario::fourslot(2, 2).mutated(Mutation::SwapPair), &opts()).unwrap();
    let b = run_scenario(&Scenario::fourslot(2, 2).mutated(Mutation::SwapPair), &opts()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn path_enumeration_agrees_with_bfs() {
    for (w, r) in [(0, 0), (1, 0), (0, 2), (1, 1), (2, 1), (1, 2), (2, 2)] {
        let m = machine(w, r);
        let bfs: HashSet<_> = reachable(&m, usize::MAX).states.into_iter().collect();
        let paths = reachable_by_paths(&m, 0);
        assert_eq!(paths.diverged, 0);
        assert_eq!(bfs, paths.states, "W={w} R={r}");
    }
}

#[test]
fn memoized_dfs_agrees_with_bfs_at_three() {
    let m = machine(3, 3);
    let g = reachable(&m, usize::MAX);
    let bfs: HashSet<_> = g.states.into_iter().collect();
    assert_eq!(bfs.len(), 13_272);
    assert_eq!(bfs, reachable_by_dfs(&m));
}

#[test]
fn mutations_agree_between_enumerators() {
    for mutation in Mutation::ALL {
        let m = FourSlotMachine::new(FourSlotConfig::new(2, 1).mutation(Some(mutation))).unwrap();
        let bfs: HashSet<_> = reachable(&m, usize::MAX).states.into_iter().collect();
        assert_eq!(bfs, reachable_by_paths(&m, 0).states, "{mutation}");
    }
}

#[test]
fn path_audit_finds_every_read_fresh() {
    for (w, r) in [(1, 1), (2, 2), (3, 1)] {
        let audit = audit_fourslot_reads(&machine(w, r));
        assert!(audit.clean(), "W={w} R={r}: {audit:?}");
        assert!(audit.reads > 0);
    }
}

#[test]
fn path_audit_catches_mutants() {
    // Early commit only tears a read from a start where lpw = cpw.
    let m = FourSlotMachine::new(FourSlotConfig::new(1, 1).mutation(Some(Mutation::EarlyCommit))).unwrap();
    let torn = audit_fourslot_reads(&m);
    assert!(torn.torn > 0, "{torn:?}");
    let swapped = audit_fourslot_reads(&canonical(2, 2, Some(Mutation::SwapPair)));
    assert!(!swapped.clean(), "{swapped:?}");
    let m = FourSlotMachine::new(FourSlotConfig::new(2, 1).mutation(Some(Mutation::NoIndirection))).unwrap();
    let indirect = audit_fourslot_reads(&m);
    assert!(!indirect.clean(), "{indirect:?}");
}

#[test]
fn posvals_on_every_trace_agrees_with_window() {
    let mut traces = 0;
    for_each_complete_trace(&machine(1, 1), |tr| {
        traces += 1;
        assert_eq!(stale_read(tr).unwrap(), None, "\n{tr}");
    });
    // Each of the 64 starts has C(9, 4) interleavings of 5 writer and 4 reader steps.
    assert_eq!(traces, 64 * 126);

    let mut bad = 0;
    let m = FourSlotMachine::new(FourSlotConfig::new(1, 1).mutation(Some(Mutation::EarlyCommit))).unwrap();
    for_each_complete_trace(&m, |tr| {
        bad += usize::from(stale_read(tr).unwrap().is_some());
    });
    assert!(bad > 0);
}

fn read_results(m: &FourSlotMachine) -> BTreeSet<Content> {
    reachable(m, usize::MAX)
        .states
        .into_iter()
        .filter(|s| s.reads_done == 1)
        .filter_map(|s| s.r)
        .collect()
}

#[test]
fn overlapping_one_write_returns_old_or_new() {
    assert_eq!(read_results(&canonical(1, 1, None)), [Content::Val(0), Content::Val(1)].into());
}

#[test]
fn overlapping_three_writes_returns_any_of_them() {
    let all: BTreeSet<Content> = (0..=3).map(Content::Val).collect();
    assert_eq!(read_results(&canonical(3, 1, None)), all);
}

#[test]
fn two_writes_then_read_returns_second() {
    let m = canonical(2, 1, None);
    let mut s = m.initial_states().remove(0);
    // The writer is listed first, so following the first successor runs it to completion.
    while let Some((_, next)) = m.successors(&s).into_iter().next() {
        s = next;
    }
    assert_eq!(s.r, Some(Content::Val(2)));
}

#[test]
fn mutant_counterexamples_replay() {
    for mutation in Mutation::ALL {
        let sc = Scenario::fourslot(2, 2).mutated(mutation);
        let rep = run_scenario(&sc, &opts()).unwrap();
        let m = FourSlotMachine::new(FourSlotConfig::new(2, 2).mutation(Some(mutation))).unwrap();
        assert!(rep.failures().count() > 0, "{mutation} passed");
        for v in rep.failures() {
            let cx = v.counterexample.as_ref().expect("failures carry traces");
            let ends = replay(&m, &cx.trace).unwrap_or_else(|e| panic!("{mutation}/{}: {e}", v.id));
            assert!(!ends.is_empty());
        }
    }
}

#[test]
fn swap_pair_breaks_slot_disjointness() {
    let rep = run_scenario(&Scenario::fourslot(2, 2).mutated(Mutation::SwapPair), &opts()).unwrap();
    let v = rep.verdict("slot-disjointness").unwrap();
    assert_eq!(v.status, Status::Fail);
    let last = v.counterexample.as_ref().unwrap().trace.last().clone();
    let get = |n: &str| last.get(&VarName::parse(n)).cloned().unwrap();
    assert_eq!(get("reader.reading"), Value::Bool(true));
    assert_eq!(get("writer.writing"), Value::Bool(true));
}

#[test]
fn early_commit_reads_torn() {
    let rep = run_scenario(&Scenario::fourslot(2, 2).mutated(Mutation::EarlyCommit), &opts()).unwrap();
    let v = rep.verdict("read-freshness").unwrap();
    assert_eq!(v.status, Status::Fail);
    let tr = &v.counterexample.as_ref().unwrap().trace;
    assert_eq!(tr.labels().last().unwrap().detail, "read");
    assert_eq!(tr.last().get(&VarName::local("reader", "r")), Some(&Value::Torn));
}

#[test]
fn counterexample_for_replay_is_checked() {
    let m = canonical(1, 1, None);
    let mut tr = Trace::new(m.observe(&m.initial_states()[0]));
    let (label, next) = m.successors(&m.initial_states()[0]).remove(0);
    tr.push(label.clone(), m.observe(&next));
    assert_eq!(replay(&m, &tr).unwrap(), vec![next]);
    // Same label, wrong recorded state.
    let mut bad = Trace::new(m.observe(&m.initial_states()[0]));
    bad.push(label, m.observe(&m.initial_states()[0]));
    assert!(replay(&m, &bad).is_err());
}

#[test]
fn refinement_holds_at_two_two() {
    let r = check_fourslot_refinement(&machine(2, 2), usize::MAX).unwrap();
    assert!(r.passed(), "{:?}", r.failure);
    assert_eq!(r.states, reachable(&machine(2, 2), usize::MAX).states.len());
    assert!(r.commits > 0);
}

#[test]
fn refinement_catches_early_commit() {
    let m = FourSlotMachine::new(FourSlotConfig::new(2, 1).mutation(Some(Mutation::EarlyCommit))).unwrap();
    let r = check_fourslot_refinement(&m, usize::MAX).unwrap();
    assert!(!r.passed());
}

fn read_phase(m: &FourSlotMachine) -> acm_explorer::PhaseContract {
    fourslot_obligations(m)
        .into_iter()
        .find_map(|o| match o.body {
            Body::Phase(pc) => Some(pc),
            _ => None,
        })
        .unwrap()
}

#[test]
fn read_phase_holds_on_every_trace() {
    let m = canonical(2, 2, None);
    let pc = read_phase(&m);
    let mut n = 0;
    for_each_complete_trace(&m, |tr| {
        n += 1;
        let v = check_phase_contract(tr, &pc).unwrap();
        assert_eq!(v.status, Status::Pass, "\n{tr}");
        assert_eq!(v.spans, 2);
    });
    assert!(n > 0);
}

#[test]
fn read_phase_fails_under_swap_pair() {
    let m = canonical(2, 2, Some(Mutation::SwapPair));
    let pc = read_phase(&m);
    let mut failing = 0;
    for_each_complete_trace(&m, |tr| {
        failing += usize::from(check_phase_contract(tr, &pc).unwrap().status == Status::Fail);
    });
    assert!(failing > 0);
}

#[test]
fn read_phase_is_vacuous_without_reads() {
    let m = canonical(2, 0, None);
    let pc = read_phase(&m);
    for_each_complete_trace(&m, |tr| {
        assert_eq!(check_phase_contract(tr, &pc).unwrap().status, Status::Vacuous);
    });
}

#[test]
fn state_cap_truncates() {
    let rep = run_scenario(&Scenario::fourslot(1, 1).mutated(Mutation::SwapPair), &ExploreOptions { state_cap: 100 }).unwrap();
    assert!(rep.truncated);
    assert!(!rep.passed());
    assert_eq!(rep.reachable_states, 100);
}

#[test]
fn retrieve_of_canonical_start() {
    let m = canonical(0, 0, None);
    let s = &m.initial_states()[0];
    assert_eq!(s.retrieve_b(), Content::Val(0));
    let a = s.retrieve_intermediate();
    assert_eq!(a.lw, Value::pair_slot(PairIndex::P0, SlotIndex::S0));
}
