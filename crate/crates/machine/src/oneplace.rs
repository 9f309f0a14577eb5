//! The flag-synchronised one-place buffer.
//!
//! ```text
//! producer                         consumer
//!   while f = rd do skip od          while f = wr do skip od
//!   b <- v                           r <- b
//!   f <- rd                          f <- wr
//! ```
//!
//! A failed loop test is a `spin` step that leaves the state unchanged.

use acm::Flag;
use acm_trace::{State, StepLabel, Value};

use crate::{Machine, MachineError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OnePlaceState {
    pub b: i64,
    pub f: Flag,
    pub producer_pc: u8,
    pub produced: u8,
    pub consumer_pc: u8,
    pub consumed: u8,
    pub r: Option<i64>,
}

const WAIT: u8 = 0;
const MOVE: u8 = 1;
const FLAG: u8 = 2;

#[derive(Debug, Clone)]
pub struct OnePlaceMachine {
    values: Vec<i64>,
}

impl OnePlaceMachine {
    /// A producer that sends `values` in order and a consumer that takes as many.
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(MachineError::Config("the one-place buffer needs at least one value".into()));
        }
        if values.len() > 255 {
            return Err(MachineError::Config("at most 255 values".into()));
        }
        Ok(OnePlaceMachine { values })
    }

    /// Sends `1, 2, ..., n`.
    pub fn counting(n: usize) -> Result<Self> {
        Self::new((1..=n as i64).collect())
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Steps each process makes per transferred value, spins excluded.
    pub const STEPS_PER_VALUE: usize = 3;

    fn n(&self) -> u8 {
        self.values.len() as u8
    }
}

impl Machine for OnePlaceMachine {
    type State = OnePlaceState;

    fn id(&self) -> String {
        "oneplace".into()
    }

    fn initial_states(&self) -> Vec<OnePlaceState> {
        vec![OnePlaceState {
            b: 0,
            f: Flag::Wr,
            producer_pc: WAIT,
            produced: 0,
            consumer_pc: WAIT,
            consumed: 0,
            r: None,
        }]
    }

    fn successors(&self, s: &OnePlaceState) -> Vec<(StepLabel, OnePlaceState)> {
        let mut out = Vec::with_capacity(2);
        if s.produced < self.n() {
            let mut n = s.clone();
            let detail = match s.producer_pc {
                WAIT if s.f == Flag::Rd => "spin",
                WAIT => {
                    n.producer_pc = MOVE;
                    "enter"
                }
                MOVE => {
                    n.b = self.values[usize::from(s.produced)];
                    n.producer_pc = FLAG;
                    "put"
                }
                _ => {
                    n.f = Flag::Rd;
                    n.producer_pc = WAIT;
                    n.produced += 1;
                    "raise"
                }
            };
            out.push((StepLabel::new("producer", detail), n));
        }
        if s.consumed < self.n() {
            let mut n = s.clone();
            let detail = match s.consumer_pc {
                WAIT if s.f == Flag::Wr => "spin",
                WAIT => {
                    n.consumer_pc = MOVE;
                    "enter"
                }
                MOVE => {
                    n.r = Some(s.b);
                    n.consumer_pc = FLAG;
                    "take"
                }
                _ => {
                    n.f = Flag::Wr;
                    n.consumer_pc = WAIT;
                    n.consumed += 1;
                    "lower"
                }
            };
            out.push((StepLabel::new("consumer", detail), n));
        }
        out
    }

    fn observe(&self, s: &OnePlaceState) -> State {
        let at = |k: u8| self.values.get(usize::from(k)).map_or(Value::Undef, |v| Value::Int(*v));
        State::new()
            .with("b", s.b)
            .with("f", s.f)
            .with("producer.pc", i64::from(s.producer_pc))
            .with("producer.done", i64::from(s.produced))
            .with("producer.v", at(s.produced))
            .with("consumer.pc", i64::from(s.consumer_pc))
            .with("consumer.done", i64::from(s.consumed))
            .with("consumer.r", s.r.map_or(Value::Undef, Value::Int))
            .with("consumer.expected", at(s.consumed))
    }

    fn is_complete(&self, s: &OnePlaceState) -> bool {
        s.produced == self.n() && s.consumed == self.n()
    }

    fn processes(&self) -> Vec<&'static str> {
        vec!["producer", "consumer"]
    }
}
