//! Simpson's four-slot code as an interleaving machine.
//!
//! Writer, one step per line except the payload copy:
//!
//! ```text
//! choose      cpw <- !cpr
//! begin-copy  dsw(cpw, !sw(cpw)) starts being overwritten with v
//! end-copy    dsw(cpw, !sw(cpw)) holds v
//! toggle      sw(cpw) <- !sw(cpw)
//! publish     lpw <- cpw
//! ```
//!
//! Reader:
//!
//! ```text
//! load-t      t <- lpw
//! claim-pair  cpr <- t
//! claim-slot  csr <- sw(cpr)
//! read        r <- dsw(cpr, csr)      (torn if that cell is mid-copy)
//! ```
//!
//! The writer performs `Write(1)`, ..., `Write(W)`; every slot initially
//! holds `0`, so the value of write `i` is also its commit index.

use std::collections::BTreeSet;

use acm::{PairIndex, SlotIndex};
use acm_trace::{State, StepLabel, Value, VarName};

use crate::intermediate::{AbstractStep, IntermediateState};
use crate::{Machine, MachineError, Mutation, Result};

/// Observable content of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Content {
    Val(u8),
    Torn,
}

impl Content {
    pub fn to_value(self) -> Value {
        match self {
            Content::Val(v) => Value::Int(i64::from(v)),
            Content::Torn => Value::Torn,
        }
    }

    fn bit(self) -> u16 {
        match self {
            Content::Val(v) => 1 << v,
            Content::Torn => 1 << 15,
        }
    }
}

/// A data slot. While unstable it holds the value being copied in, which
/// nobody can observe until the copy ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlotCell {
    pub value: u8,
    pub stable: bool,
}

impl SlotCell {
    pub fn content(self) -> Content {
        if self.stable {
            Content::Val(self.value)
        } else {
            Content::Torn
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WriterOp {
    Choose,
    /// `cpw <- cpr`, the swap-pair mutation.
    ChooseReaderPair,
    BeginCopy,
    EndCopy,
    Toggle,
    Publish,
}

impl WriterOp {
    pub fn name(self) -> &'static str {
        match self {
            WriterOp::Choose => "choose",
            WriterOp::ChooseReaderPair => "choose-reader-pair",
            WriterOp::BeginCopy => "begin-copy",
            WriterOp::EndCopy => "end-copy",
            WriterOp::Toggle => "toggle",
            WriterOp::Publish => "publish",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReaderOp {
    LoadT,
    ClaimPair,
    ClaimSlot,
    /// `u <- lpw`, the no-indirection mutation's second look at `lpw`.
    ReloadLatest,
    /// `csr <- sw(u)`.
    ClaimSlotOfReload,
    Read,
}

impl ReaderOp {
    pub fn name(self) -> &'static str {
        match self {
            ReaderOp::LoadT => "load-t",
            ReaderOp::ClaimPair => "claim-pair",
            ReaderOp::ClaimSlot => "claim-slot",
            ReaderOp::ReloadLatest => "reload-lpw",
            ReaderOp::ClaimSlotOfReload => "claim-slot-of-reload",
            ReaderOp::Read => "read",
        }
    }
}

/// Which initial control states to start from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InitMode {
    /// `lpw = cpw = cpr = P0`, `sw = (S0, S0)`, `csr = S0`: the library's choice.
    Canonical,
    /// Every assignment of the six control bits.
    #[default]
    AllSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourSlotConfig {
    pub writes: usize,
    pub reads: usize,
    pub init: InitMode,
    pub mutation: Option<Mutation>,
}

impl FourSlotConfig {
    pub fn new(writes: usize, reads: usize) -> Self {
        FourSlotConfig {
            writes,
            reads,
            init: InitMode::default(),
            mutation: None,
        }
    }

    pub fn init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    pub fn mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }
}

/// Full machine state. `pc` fields index into the process's op list and
/// are reset to 0 when an operation completes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FourSlotState {
    pub dsw: [[SlotCell; 2]; 2],
    pub sw: [SlotIndex; 2],
    pub lpw: PairIndex,
    pub cpw: PairIndex,
    pub cpr: PairIndex,
    pub csr: SlotIndex,
    pub writer_pc: u8,
    pub writes_done: u8,
    /// Slot the current write copies into, fixed when the copy begins.
    pub target: Option<(PairIndex, SlotIndex)>,
    pub reader_pc: u8,
    pub reads_done: u8,
    pub t: Option<PairIndex>,
    pub u: Option<PairIndex>,
    /// Result of the most recent read.
    pub r: Option<Content>,
    /// Bitmask of the values `b` has taken since the current read began.
    pub window: u16,
}

impl FourSlotState {
    pub fn cell(&self, p: PairIndex, s: SlotIndex) -> SlotCell {
        self.dsw[p.index()][s.index()]
    }

    fn cell_mut(&mut self, p: PairIndex, s: SlotIndex) -> &mut SlotCell {
        &mut self.dsw[p.index()][s.index()]
    }

    pub fn sw(&self, p: PairIndex) -> SlotIndex {
        self.sw[p.index()]
    }

    /// `b = dsw(lpw, sw(lpw))`.
    pub fn retrieve_b(&self) -> Content {
        self.cell(self.lpw, self.sw(self.lpw)).content()
    }

    /// `(cpw, !sw(cpw))`, the slot a write in progress is filling.
    pub fn writer_slot(&self) -> (PairIndex, SlotIndex) {
        (self.cpw, !self.sw(self.cpw))
    }

    /// `(cpr, csr)`.
    pub fn reader_slot(&self) -> (PairIndex, SlotIndex) {
        (self.cpr, self.csr)
    }

    /// Representation of the intermediate state, following the bullets:
    /// `dw` is `dsw` over `X = P x S`, `lw = (lpw, sw(lpw))`,
    /// `cw = (cpw, !sw(cpw))`, `cr = (cpr, csr)`, `pr = {(cpr, s) | s in S}`.
    pub fn retrieve_intermediate(&self) -> IntermediateState {
        let x = |(p, s): (PairIndex, SlotIndex)| Value::pair_slot(p, s);
        IntermediateState {
            dw: all_slots().map(|ps| (x(ps), self.cell(ps.0, ps.1).content().to_value())).collect(),
            lw: x((self.lpw, self.sw(self.lpw))),
            cw: Some(x(self.writer_slot())),
            cr: Some(x(self.reader_slot())),
            pr: SlotIndex::ALL.into_iter().map(|s| x((self.cpr, s))).collect(),
        }
    }

    /// Values in `window` as a set.
    pub fn window_values(&self) -> BTreeSet<Content> {
        let mut out: BTreeSet<Content> = (0..15).filter(|i| self.window & (1 << i) != 0).map(Content::Val).collect();
        if self.window & (1 << 15) != 0 {
            out.insert(Content::Torn);
        }
        out
    }
}

fn all_slots() -> impl Iterator<Item = (PairIndex, SlotIndex)> {
    PairIndex::ALL.into_iter().flat_map(|p| SlotIndex::ALL.into_iter().map(move |s| (p, s)))
}

#[derive(Debug, Clone)]
pub struct FourSlotMachine {
    cfg: FourSlotConfig,
    writer: Vec<WriterOp>,
    reader: Vec<ReaderOp>,
}

impl FourSlotMachine {
    pub fn new(cfg: FourSlotConfig) -> Result<Self> {
        if cfg.writes > 14 {
            return Err(MachineError::Config(format!("at most 14 writes, got {}", cfg.writes)));
        }
        if cfg.reads > 255 {
            return Err(MachineError::Config(format!("at most 255 reads, got {}", cfg.reads)));
        }
        use ReaderOp::*;
        use WriterOp::*;
        let writer = match cfg.mutation {
            Some(Mutation::SwapPair) => vec![ChooseReaderPair, BeginCopy, EndCopy, Toggle, Publish],
            Some(Mutation::EarlyCommit) => vec![Choose, BeginCopy, Toggle, EndCopy, Publish],
            _ => vec![Choose, BeginCopy, EndCopy, Toggle, Publish],
        };
        let reader = match cfg.mutation {
            Some(Mutation::NoIndirection) => vec![LoadT, ClaimPair, ReloadLatest, ClaimSlotOfReload, Read],
            _ => vec![LoadT, ClaimPair, ClaimSlot, Read],
        };
        Ok(FourSlotMachine { cfg, writer, reader })
    }

    pub fn config(&self) -> &FourSlotConfig {
        &self.cfg
    }

    pub fn writer_program(&self) -> &[WriterOp] {
        &self.writer
    }

    pub fn reader_program(&self) -> &[ReaderOp] {
        &self.reader
    }

    /// Next op of the writer, if it has writes left.
    pub fn writer_next(&self, s: &FourSlotState) -> Option<WriterOp> {
        (usize::from(s.writes_done) < self.cfg.writes).then(|| self.writer[usize::from(s.writer_pc)])
    }

    pub fn reader_next(&self, s: &FourSlotState) -> Option<ReaderOp> {
        (usize::from(s.reads_done) < self.cfg.reads).then(|| self.reader[usize::from(s.reader_pc)])
    }

    /// Whether the payload copy of the current write has begun but not ended.
    pub fn copying(&self, s: &FourSlotState) -> bool {
        s.target.is_some_and(|(p, sl)| !s.cell(p, sl).stable)
    }

    /// Whether the writer is inside its write phase: it has chosen `cpw`
    /// and has not yet flipped `sw(cpw)`.
    pub fn writing(&self, s: &FourSlotState) -> bool {
        let toggle = self.writer.iter().position(|op| *op == WriterOp::Toggle).expect("toggle in program");
        self.writer_next(s).is_some() && s.writer_pc > 0 && usize::from(s.writer_pc) <= toggle
    }

    /// Whether the reader's next step is the slot read.
    pub fn reading(&self, s: &FourSlotState) -> bool {
        self.reader_next(s) == Some(ReaderOp::Read)
    }

    /// Reader pc of the slot read.
    pub fn read_pc(&self) -> i64 {
        self.reader.len() as i64 - 1
    }

    fn control_states(&self) -> Vec<FourSlotState> {
        let base = FourSlotState {
            dsw: [[SlotCell { value: 0, stable: true }; 2]; 2],
            sw: [SlotIndex::S0; 2],
            lpw: PairIndex::P0,
            cpw: PairIndex::P0,
            cpr: PairIndex::P0,
            csr: SlotIndex::S0,
            writer_pc: 0,
            writes_done: 0,
            target: None,
            reader_pc: 0,
            reads_done: 0,
            t: None,
            u: None,
            r: None,
            window: 0,
        };
        match self.cfg.init {
            InitMode::Canonical => vec![base],
            InitMode::AllSymmetric => (0u8..64)
                .map(|bits| {
                    let bit = |i: u8| bits & (1 << i) != 0;
                    FourSlotState {
                        lpw: PairIndex::from_bit(bit(0)),
                        cpw: PairIndex::from_bit(bit(1)),
                        cpr: PairIndex::from_bit(bit(2)),
                        csr: SlotIndex::from_bit(bit(3)),
                        sw: [SlotIndex::from_bit(bit(4)), SlotIndex::from_bit(bit(5))],
                        ..base.clone()
                    }
                })
                .collect(),
        }
    }

    fn writer_step(&self, s: &FourSlotState, op: WriterOp) -> FourSlotState {
        let mut n = s.clone();
        let v = s.writes_done + 1;
        n.writer_pc += 1;
        match op {
            WriterOp::Choose => n.cpw = !s.cpr,
            WriterOp::ChooseReaderPair => n.cpw = s.cpr,
            WriterOp::BeginCopy => {
                let (p, sl) = s.writer_slot();
                n.target = Some((p, sl));
                *n.cell_mut(p, sl) = SlotCell { value: v, stable: false };
            }
            WriterOp::EndCopy => {
                let (p, sl) = s.target.expect("copy began");
                n.cell_mut(p, sl).stable = true;
            }
            WriterOp::Toggle => n.sw[s.cpw.index()] = !s.sw(s.cpw),
            WriterOp::Publish => n.lpw = s.cpw,
        }
        if usize::from(n.writer_pc) == self.writer.len() {
            n.writer_pc = 0;
            n.writes_done += 1;
            n.target = None;
        }
        n
    }

    fn reader_step(&self, s: &FourSlotState, op: ReaderOp) -> FourSlotState {
        let mut n = s.clone();
        n.reader_pc += 1;
        match op {
            ReaderOp::LoadT => {
                n.t = Some(s.lpw);
                n.window = 0;
            }
            ReaderOp::ClaimPair => n.cpr = s.t.expect("t loaded"),
            ReaderOp::ClaimSlot => n.csr = s.sw(s.cpr),
            ReaderOp::ReloadLatest => n.u = Some(s.lpw),
            ReaderOp::ClaimSlotOfReload => n.csr = s.sw(s.u.expect("u loaded")),
            ReaderOp::Read => n.r = Some(s.cell(s.cpr, s.csr).content()),
        }
        if usize::from(n.reader_pc) == self.reader.len() {
            n.reader_pc = 0;
            n.reads_done += 1;
            n.t = None;
            n.u = None;
            n.window = 0;
        }
        n
    }

    /// Records `b` in the reader's window while a read is in progress.
    fn track_window(&self, mut n: FourSlotState) -> FourSlotState {
        if n.reader_pc > 0 {
            n.window |= n.retrieve_b().bit();
        }
        n
    }

    /// The cw/cr-masked intermediate state: `cw` is only represented by
    /// `(cpw, !sw(cpw))` between choosing the pair and flipping `sw(cpw)`,
    /// and `cr` by `(cpr, csr)` between selecting the slot and reading it.
    pub fn project(&self, s: &FourSlotState) -> IntermediateState {
        let mut a = s.retrieve_intermediate();
        if !self.writing(s) {
            a.cw = None;
        }
        if !self.reading(s) {
            a.cr = None;
        }
        a
    }

    /// The intermediate-level step that a concrete step implements.
    ///
    /// Only meaningful for the unmutated code.
    pub fn abstract_step(&self, s: &FourSlotState, label: &StepLabel) -> Result<AbstractStep> {
        let x = |(p, sl): (PairIndex, SlotIndex)| Value::pair_slot(p, sl);
        let disabled = || MachineError::Disabled(label.to_string());
        let next = self.apply_step(s, label)?;
        Ok(match label.actor.as_str() {
            "writer" => match self.writer_next(s).ok_or_else(disabled)? {
                WriterOp::Choose | WriterOp::ChooseReaderPair => AbstractStep::Choose(x(next.writer_slot())),
                WriterOp::BeginCopy => AbstractStep::UpdateBegin,
                WriterOp::EndCopy => AbstractStep::UpdateEnd(Value::Int(i64::from(s.writes_done) + 1)),
                WriterOp::Toggle if s.lpw == s.cpw => AbstractStep::Commit(x(s.target.expect("copy began"))),
                WriterOp::Toggle => AbstractStep::Seal,
                WriterOp::Publish if s.lpw == s.cpw => AbstractStep::Stutter,
                WriterOp::Publish => AbstractStep::Commit(x((s.cpw, s.sw(s.cpw)))),
            },
            _ => match self.reader_next(s).ok_or_else(disabled)? {
                ReaderOp::LoadT | ReaderOp::ReloadLatest => AbstractStep::Stutter,
                ReaderOp::ClaimPair => {
                    AbstractStep::Claim(SlotIndex::ALL.into_iter().map(|sl| x((next.cpr, sl))).collect())
                }
                ReaderOp::ClaimSlot | ReaderOp::ClaimSlotOfReload => AbstractStep::Select(x(next.reader_slot())),
                ReaderOp::Read => AbstractStep::Access(next.r.expect("read done").to_value()),
            },
        })
    }

    /// Whether `label` applied to `s` is one of the two steps at which the
    /// abstract buffer may change: `toggle` when `lpw = cpw`, or `publish`
    /// when they differ.
    pub fn is_commit_step(&self, s: &FourSlotState, label: &StepLabel) -> bool {
        if label.actor != "writer" {
            return false;
        }
        match self.writer_next(s) {
            Some(WriterOp::Toggle) => s.lpw == s.cpw,
            Some(WriterOp::Publish) => s.lpw != s.cpw,
            _ => false,
        }
    }
}

fn pair_slot_map(s: &FourSlotState) -> Value {
    Value::map(all_slots().map(|(p, sl)| (Value::pair_slot(p, sl), s.cell(p, sl).content().to_value())))
}

fn opt<T: Into<Value>>(x: Option<T>) -> Value {
    x.map_or(Value::Undef, Into::into)
}

impl Machine for FourSlotMachine {
    type State = FourSlotState;

    fn id(&self) -> String {
        match self.cfg.mutation {
            Some(m) => format!("fourslot/{m}"),
            None => "fourslot".into(),
        }
    }

    fn initial_states(&self) -> Vec<FourSlotState> {
        self.control_states()
    }

    fn successors(&self, s: &FourSlotState) -> Vec<(StepLabel, FourSlotState)> {
        let mut out = Vec::with_capacity(2);
        if let Some(op) = self.writer_next(s) {
            out.push((StepLabel::new("writer", op.name()), self.track_window(self.writer_step(s, op))));
        }
        if let Some(op) = self.reader_next(s) {
            out.push((StepLabel::new("reader", op.name()), self.track_window(self.reader_step(s, op))));
        }
        out
    }

    fn observe(&self, s: &FourSlotState) -> State {
        let sh = VarName::shared;
        let w = |n: &str| VarName::local("writer", n);
        let r = |n: &str| VarName::local("reader", n);
        let writing = usize::from(s.writes_done) < self.cfg.writes;
        let mut o = State::new();
        o.set(sh("dsw"), pair_slot_map(s));
        o.set(sh("sw"), Value::map(PairIndex::ALL.map(|p| (Value::Pair(p), Value::Slot(s.sw(p))))));
        o.set(sh("lpw"), s.lpw);
        o.set(sh("cpw"), s.cpw);
        o.set(sh("cpr"), s.cpr);
        o.set(sh("csr"), s.csr);
        o.set(sh("b"), s.retrieve_b().to_value());

        o.set(w("pc"), i64::from(s.writer_pc));
        o.set(w("done"), i64::from(s.writes_done));
        o.set(w("v"), if writing { Value::Int(i64::from(s.writes_done) + 1) } else { Value::Undef });
        o.set(w("target"), opt(s.target.map(|(p, sl)| Value::pair_slot(p, sl))));
        o.set(w("writing"), self.writing(s));
        o.set(w("copying"), self.copying(s));
        o.set(w("in_write"), s.writer_pc > 0);

        o.set(r("pc"), i64::from(s.reader_pc));
        o.set(r("done"), i64::from(s.reads_done));
        o.set(r("t"), opt(s.t));
        o.set(r("u"), opt(s.u));
        o.set(r("r"), opt(s.r.map(Content::to_value)));
        o.set(r("window"), Value::set(s.window_values().into_iter().map(Content::to_value)));
        o.set(r("holds_t"), s.t.is_some());
        o.set(r("reading"), self.reading(s));
        o
    }

    fn is_complete(&self, s: &FourSlotState) -> bool {
        usize::from(s.writes_done) == self.cfg.writes && usize::from(s.reads_done) == self.cfg.reads
    }

    fn processes(&self) -> Vec<&'static str> {
        vec!["writer", "reader"]
    }
}
