//! The index-based intermediate representation.
//!
//! Values live in a map `dw` over a finite index set `X`. The writer chooses
//! an index that is neither the last committed one (`lw`) nor any the reader
//! might be using (`pr`), fills it, and commits it by moving `lw`. The reader
//! claims and selects an index, then accesses it. The abstract buffer is
//! `dw(lw)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use acm_trace::{State, StepLabel, Value};

use crate::{Machine, MachineError, Result};

/// The data part of the intermediate representation.
///
/// `cw` is `None` while the writer holds no chosen index, `cr` while the
/// reader has not selected one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntermediateState {
    pub dw: BTreeMap<Value, Value>,
    pub lw: Value,
    pub cw: Option<Value>,
    pub cr: Option<Value>,
    pub pr: BTreeSet<Value>,
}

/// A step of the intermediate level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AbstractStep {
    /// Write-ch: claim a free index.
    Choose(Value),
    /// First half of Write-upd: the claimed slot is being overwritten.
    UpdateBegin,
    /// Second half of Write-upd: the claimed slot now holds the value.
    UpdateEnd(Value),
    /// The written index stops being represented as claimed but is not yet
    /// committed.
    Seal,
    /// Write-com: expose the written index.
    Commit(Value),
    /// The reader announces the indices it might use.
    Claim(BTreeSet<Value>),
    /// Read-sel: fix the index to read.
    Select(Value),
    /// Read-acc: the value read.
    Access(Value),
    Stutter,
}

impl fmt::Display for AbstractStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractStep::Choose(x) => write!(f, "ch({x})"),
            AbstractStep::UpdateBegin => f.write_str("upd-begin"),
            AbstractStep::UpdateEnd(v) => write!(f, "upd-end({v})"),
            AbstractStep::Seal => f.write_str("seal"),
            AbstractStep::Commit(x) => write!(f, "com({x})"),
            AbstractStep::Claim(xs) => write!(f, "claim({})", Value::set(xs.iter().cloned())),
            AbstractStep::Select(x) => write!(f, "sel({x})"),
            AbstractStep::Access(v) => write!(f, "acc({v})"),
            AbstractStep::Stutter => f.write_str("stutter"),
        }
    }
}

impl IntermediateState {
    /// Every slot holds `initial`; `lw` is the first index.
    pub fn new(indices: impl IntoIterator<Item = Value>, initial: Value) -> Self {
        let dw: BTreeMap<Value, Value> = indices.into_iter().map(|x| (x, initial.clone())).collect();
        let lw = dw.keys().next().expect("nonempty index set").clone();
        IntermediateState {
            dw,
            lw,
            cw: None,
            cr: None,
            pr: BTreeSet::new(),
        }
    }

    /// The abstract buffer value `dw(lw)`.
    pub fn b(&self) -> &Value {
        &self.dw[&self.lw]
    }

    /// Indices the writer may choose: neither `lw` nor in `pr`.
    pub fn admissible(&self) -> impl Iterator<Item = &Value> {
        self.dw.keys().filter(|x| **x != self.lw && !self.pr.contains(*x))
    }

    /// Applies `step`, checking its guard.
    pub fn apply(&self, step: &AbstractStep) -> Result<IntermediateState> {
        let refuse = |why: &str| MachineError::AbstractStep {
            step: step.to_string(),
            why: why.to_string(),
        };
        let mut next = self.clone();
        match step {
            AbstractStep::Choose(x) => {
                if !self.dw.contains_key(x) {
                    return Err(refuse("index outside X"));
                }
                if *x == self.lw || self.pr.contains(x) {
                    return Err(refuse("index is last written or claimed by the reader"));
                }
                next.cw = Some(x.clone());
            }
            AbstractStep::UpdateBegin | AbstractStep::UpdateEnd(_) => {
                let cw = self.cw.clone().ok_or_else(|| refuse("no index chosen"))?;
                let v = match step {
                    AbstractStep::UpdateEnd(v) => v.clone(),
                    _ => Value::Torn,
                };
                next.dw.insert(cw, v);
            }
            AbstractStep::Seal => {
                if self.cw.is_none() {
                    return Err(refuse("no index chosen"));
                }
                next.cw = None;
            }
            AbstractStep::Commit(x) => {
                match self.dw.get(x) {
                    None => return Err(refuse("index outside X")),
                    Some(Value::Torn) => return Err(refuse("slot is still being written")),
                    Some(_) => {}
                }
                if self.cw.as_ref().is_some_and(|cw| cw != x) {
                    return Err(refuse("commits an index other than the chosen one"));
                }
                next.lw = x.clone();
                next.cw = None;
            }
            AbstractStep::Claim(xs) => {
                if !xs.iter().all(|x| self.dw.contains_key(x)) {
                    return Err(refuse("index outside X"));
                }
                next.pr = xs.clone();
            }
            AbstractStep::Select(x) => {
                if !self.pr.contains(x) {
                    return Err(refuse("selected index was not claimed"));
                }
                next.cr = Some(x.clone());
            }
            AbstractStep::Access(v) => {
                let cr = self.cr.as_ref().ok_or_else(|| refuse("no index selected"))?;
                if &self.dw[cr] != v {
                    return Err(refuse("value differs from the selected slot"));
                }
                next.cr = None;
            }
            AbstractStep::Stutter => {}
        }
        Ok(next)
    }

    /// Shared variables `dw`, `lw`, `cw`, `cr`, `pr` and the derived `b`.
    pub fn observe_into(&self, out: &mut State) {
        out.set(acm_trace::VarName::shared("dw"), Value::map(self.dw.clone()));
        out.set(acm_trace::VarName::shared("lw"), self.lw.clone());
        out.set(acm_trace::VarName::shared("cw"), self.cw.clone().unwrap_or(Value::Undef));
        out.set(acm_trace::VarName::shared("cr"), self.cr.clone().unwrap_or(Value::Undef));
        out.set(acm_trace::VarName::shared("pr"), Value::set(self.pr.iter().cloned()));
        out.set(acm_trace::VarName::shared("b"), self.b().clone());
    }
}

/// State of the intermediate machine: the data plus both processes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaState {
    pub data: IntermediateState,
    pub writer_pc: u8,
    pub writes_done: u8,
    pub reader_pc: u8,
    pub reads_done: u8,
    pub r: Value,
    /// Values of `b` seen since the current read began.
    pub window: BTreeSet<Value>,
}

/// The intermediate level run as a machine over `X = {0, .., size-1}`.
///
/// The writer performs `Write(1)`, ..., `Write(writes)` as choose, update
/// (two steps) and commit; the reader performs `reads` reads as an atomic
/// claim-and-select followed by an access. Index exchange is atomic.
#[derive(Debug, Clone)]
pub struct IntermediateMachine {
    size: usize,
    writes: u8,
    reads: u8,
}

const W_CHOOSE: u8 = 0;
const W_BEGIN: u8 = 1;
const W_END: u8 = 2;
const W_COMMIT: u8 = 3;

impl IntermediateMachine {
    pub fn new(size: usize, writes: usize, reads: usize) -> Result<Self> {
        if size < 3 {
            return Err(MachineError::Config(format!("intermediate needs at least 3 indices, got {size}")));
        }
        if size > 64 || writes > 14 || reads > 14 {
            return Err(MachineError::Config("bounds too large to explore".into()));
        }
        Ok(IntermediateMachine {
            size,
            writes: writes as u8,
            reads: reads as u8,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn indices(&self) -> Vec<Value> {
        (0..self.size as i64).map(Value::Int).collect()
    }

    fn step(&self, s: &SigmaState, label: StepLabel, data: IntermediateState, edit: impl FnOnce(&mut SigmaState)) -> (StepLabel, SigmaState) {
        let mut next = s.clone();
        next.data = data;
        edit(&mut next);
        if next.reader_pc == 1 {
            next.window.insert(next.data.b().clone());
        }
        (label, next)
    }
}

impl Machine for IntermediateMachine {
    type State = SigmaState;

    fn id(&self) -> String {
        format!("intermediate:{}", self.size)
    }

    fn initial_states(&self) -> Vec<SigmaState> {
        vec![SigmaState {
            data: IntermediateState::new(self.indices(), Value::Int(0)),
            writer_pc: W_CHOOSE,
            writes_done: 0,
            reader_pc: 0,
            reads_done: 0,
            r: Value::Undef,
            window: BTreeSet::new(),
        }]
    }

    fn successors(&self, s: &SigmaState) -> Vec<(StepLabel, SigmaState)> {
        let mut out = Vec::new();
        let d = &s.data;
        let apply = |step: AbstractStep| d.apply(&step).expect("machine only takes enabled abstract steps");
        if s.writes_done < self.writes {
            let v = Value::Int(i64::from(s.writes_done) + 1);
            match s.writer_pc {
                W_CHOOSE => {
                    for x in d.admissible() {
                        let data = apply(AbstractStep::Choose(x.clone()));
                        out.push(self.step(s, StepLabel::new("writer", format!("ch:{x}")), data, |n| n.writer_pc = W_BEGIN));
                    }
                }
                W_BEGIN => {
                    let data = apply(AbstractStep::UpdateBegin);
                    out.push(self.step(s, StepLabel::new("writer", "upd-begin"), data, |n| n.writer_pc = W_END));
                }
                W_END => {
                    let data = apply(AbstractStep::UpdateEnd(v));
                    out.push(self.step(s, StepLabel::new("writer", "upd-end"), data, |n| n.writer_pc = W_COMMIT));
                }
                _ => {
                    let cw = d.cw.clone().expect("index chosen before commit");
                    let data = apply(AbstractStep::Commit(cw));
                    out.push(self.step(s, StepLabel::new("writer", "com"), data, |n| {
                        n.writer_pc = W_CHOOSE;
                        n.writes_done += 1;
                    }));
                }
            }
        }
        if s.reads_done < self.reads {
            if s.reader_pc == 0 {
                let claimed = apply(AbstractStep::Claim([d.lw.clone()].into()));
                let data = claimed.apply(&AbstractStep::Select(d.lw.clone())).expect("lw was just claimed");
                out.push(self.step(s, StepLabel::new("reader", "sel"), data, |n| {
                    n.reader_pc = 1;
                    n.window = BTreeSet::new();
                }));
            } else {
                let cr = d.cr.as_ref().expect("index selected before access");
                let r = d.dw[cr].clone();
                let data = apply(AbstractStep::Access(r.clone()));
                out.push(self.step(s, StepLabel::new("reader", "acc"), data, |n| {
                    n.reader_pc = 0;
                    n.reads_done += 1;
                    n.r = r;
                    n.window = BTreeSet::new();
                }));
            }
        }
        out
    }

    fn observe(&self, s: &SigmaState) -> State {
        let mut out = State::new();
        s.data.observe_into(&mut out);
        let writing = s.writes_done < self.writes;
        out = out
            .with("writer.pc", i64::from(s.writer_pc))
            .with("writer.done", i64::from(s.writes_done))
            .with(
                "writer.v",
                if writing { Value::Int(i64::from(s.writes_done) + 1) } else { Value::Undef },
            )
            .with("reader.pc", i64::from(s.reader_pc))
            .with("reader.done", i64::from(s.reads_done))
            .with("reader.r", s.r.clone())
            .with("reader.window", Value::set(s.window.iter().cloned()));
        out
    }

    fn is_complete(&self, s: &SigmaState) -> bool {
        s.writes_done == self.writes && s.reads_done == self.reads
    }

    fn processes(&self) -> Vec<&'static str> {
        vec!["writer", "reader"]
    }
}
