use acm_machine::{
    FourSlotConfig, FourSlotMachine, IntermediateMachine, MachineId, Mutation, OnePlaceMachine,
};

use crate::explore::{explore, ExploreOptions};
use crate::obligation::Obligation;
use crate::refinement::check_fourslot_refinement;
use crate::report::{Counterexample, ExplorationReport, ObligationVerdict, Status};
use crate::standard::{fourslot_obligations, intermediate_obligations, monotonic_reads, oneplace_obligations};
use crate::{ExplorerError, Result};

/// A machine with its bounds: what `explore` on the command line selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    pub machine: MachineId,
    pub writes: usize,
    pub reads: usize,
    pub mutation: Option<Mutation>,
}

impl Scenario {
    pub fn fourslot(writes: usize, reads: usize) -> Self {
        Scenario {
            machine: MachineId::FourSlot,
            writes,
            reads,
            mutation: None,
        }
    }

    pub fn mutated(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    fn fourslot_machine(&self) -> Result<FourSlotMachine> {
        Ok(FourSlotMachine::new(
            FourSlotConfig::new(self.writes, self.reads).mutation(self.mutation),
        )?)
    }

    fn no_mutation(&self) -> Result<()> {
        match self.mutation {
            Some(m) => Err(ExplorerError::Config(format!("mutation {m} only applies to fourslot"))),
            None => Ok(()),
        }
    }

    /// Number of values the one-place producer sends: the larger bound.
    fn oneplace_values(&self) -> usize {
        self.writes.max(self.reads)
    }
}

/// The standard obligations for the scenario's machine.
pub fn standard_obligations(sc: &Scenario) -> Result<Vec<Obligation>> {
    match sc.machine {
        MachineId::FourSlot => Ok(fourslot_obligations(&sc.fourslot_machine()?)),
        MachineId::Intermediate(n) => {
            sc.no_mutation()?;
            Ok(intermediate_obligations(&IntermediateMachine::new(n, sc.writes, sc.reads)?))
        }
        MachineId::OnePlace => {
            sc.no_mutation()?;
            Ok(oneplace_obligations(&OnePlaceMachine::counting(sc.oneplace_values())?))
        }
    }
}

/// Explores the scenario against its standard obligations. Four-slot runs
/// also check read monotonicity and, unmutated, the simulation of the
/// intermediate machine.
pub fn run_scenario(sc: &Scenario, opts: &ExploreOptions) -> Result<ExplorationReport> {
    match sc.machine {
        MachineId::FourSlot => {
            let m = sc.fourslot_machine()?;
            let mut obligations = fourslot_obligations(&m);
            obligations.push(monotonic_reads());
            let mut report = explore(&m, &obligations, opts)?;
            if sc.mutation.is_none() && !report.truncated {
                let r = check_fourslot_refinement(&m, opts.state_cap)?;
                report.verdicts.push(ObligationVerdict {
                    id: "retrieve-simulation".into(),
                    kind: crate::ObligationKind::StepGuarantee,
                    anchor: "retrieve commutes with the intermediate steps".into(),
                    description: "every step maps to an intermediate step under the retrieve function, \
                                  and b changes only at the commit steps"
                        .into(),
                    status: if r.failure.is_some() { Status::Fail } else { Status::Pass },
                    checks: r.steps as u64,
                    counterexample: r.failure.map(|(trace, note)| Counterexample { trace, note }),
                });
            }
            Ok(report)
        }
        MachineId::Intermediate(n) => {
            sc.no_mutation()?;
            let m = IntermediateMachine::new(n, sc.writes, sc.reads)?;
            explore(&m, &intermediate_obligations(&m), opts)
        }
        MachineId::OnePlace => {
            sc.no_mutation()?;
            let m = OnePlaceMachine::counting(sc.oneplace_values())?;
            explore(&m, &oneplace_obligations(&m), opts)
        }
    }
}
