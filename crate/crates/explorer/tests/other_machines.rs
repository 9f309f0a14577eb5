use std::collections::HashSet;

use acm_explorer::oracle::{reachable_by_dfs, reachable_by_paths};
use acm_explorer::{
    explore, intermediate_obligations, reachable, replay, run_scenario, standard_obligations, ExploreOptions, Obligation,
    ObligationKind, Scenario, Status, StepScope,
};
use acm_machine::{IntermediateMachine, Machine, MachineId, Mutation, OnePlaceMachine};
use acm_trace::parse_expr;

fn scenario(machine: MachineId, w: usize, r: usize) -> Scenario {
    Scenario {
        machine,
        writes: w,
        reads: r,
        mutation: None,
    }
}

#[test]
fn intermediate_passes() {
    for n in 3..=5 {
        for (w, r) in [(1, 1), (2, 2), (3, 2)] {
            let rep = run_scenario(&scenario(MachineId::Intermediate(n), w, r), &ExploreOptions::default()).unwrap();
            assert!(rep.passed(), "{rep}");
            assert!(rep.verdicts.iter().all(|v| v.status == Status::Pass), "{rep}");
        }
    }
}

#[test]
fn intermediate_obligation_ids() {
    let ids: Vec<String> = standard_obligations(&scenario(MachineId::Intermediate(4), 1, 1))
        .unwrap()
        .into_iter()
        .map(|o| o.id)
        .collect();
    assert_eq!(ids, ["index-domain", "write-choice", "write-guarantee", "read-freshness"]);
}

#[test]
fn intermediate_enumerators_agree() {
    let m = IntermediateMachine::new(4, 2, 2).unwrap();
    let bfs: HashSet<_> = reachable(&m, usize::MAX).states.into_iter().collect();
    assert_eq!(bfs, reachable_by_paths(&m, 0).states);
    assert_eq!(bfs, reachable_by_dfs(&m));
}

#[test]
fn write_choice_would_catch_a_bad_pick() {
    // A deliberately wrong obligation: the writer never picks an index outside
    // the reader's claim. It must fail, and the trace must replay.
    let m = IntermediateMachine::new(3, 2, 1).unwrap();
    let wrong = Obligation::step(
        "always-claimed",
        ObligationKind::StepGuarantee,
        "cw in pr",
        "",
        StepScope::step("writer", "ch:"),
        parse_expr("cw' in pr").unwrap(),
    );
    let rep = explore(&m, &[wrong], &ExploreOptions::default()).unwrap();
    let v = &rep.verdicts[0];
    assert_eq!(v.status, Status::Fail);
    replay(&m, &v.counterexample.as_ref().unwrap().trace).unwrap();
}

#[test]
fn oneplace_guarantees_hold() {
    let rep = run_scenario(&scenario(MachineId::OnePlace, 2, 2), &ExploreOptions::default()).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!(rep.verdicts.iter().all(|v| v.status == Status::Pass), "{rep}");
    assert_eq!(rep.verdicts.len(), 5);
}

#[test]
fn oneplace_completes_in_order() {
    let m = OnePlaceMachine::counting(2).unwrap();
    let g = reachable(&m, usize::MAX);
    let done: Vec<_> = g.states.iter().filter(|s| m.is_complete(s)).collect();
    assert_eq!(done.len(), 1);
    assert_eq!(done[0].r, Some(2));
}

#[test]
fn oneplace_consumer_alone_never_completes() {
    // Without a producer value the consumer can only spin: explore a machine
    // whose producer has already stopped.
    let m = OnePlaceMachine::counting(1).unwrap();
    let start = &m.initial_states()[0];
    let (label, next) = m.successors(start).pop().unwrap();
    assert_eq!(label.detail, "spin");
    assert!(!m.is_complete(&next));
}

#[test]
fn oneplace_spin_budget_bounds_paths() {
    let m = OnePlaceMachine::counting(2).unwrap();
    let budget = 2 * m.values().len() * OnePlaceMachine::STEPS_PER_VALUE;
    let paths = reachable_by_paths(&m, budget);
    assert!(paths.diverged > 0);
    let bfs: HashSet<_> = reachable(&m, usize::MAX).states.into_iter().collect();
    assert_eq!(bfs, paths.states);
}

#[test]
fn mutations_rejected_off_fourslot() {
    let sc = scenario(MachineId::OnePlace, 1, 1);
    assert!(run_scenario(&Scenario { mutation: Some(Mutation::SwapPair), ..sc }, &ExploreOptions::default()).is_err());
    let sc = scenario(MachineId::Intermediate(3), 1, 1);
    assert!(standard_obligations(&Scenario { mutation: Some(Mutation::EarlyCommit), ..sc }).is_err());
}

#[test]
fn intermediate_obligations_evaluate_on_initial_state() {
    let m = IntermediateMachine::new(3, 1, 1).unwrap();
    let s = m.observe(&m.initial_states()[0]);
    for o in intermediate_obligations(&m) {
        if let acm_explorer::Body::State(e) = &o.body {
            assert!(acm_trace::holds(e, &s).unwrap(), "{}", o.id);
        }
    }
}
