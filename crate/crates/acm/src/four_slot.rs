//! Simpson's four-slot mechanism.
//!
//! Storage is two pairs of two slots. The writer always fills the slot of
//! the pair the reader is *not* using, choosing inside that pair the slot
//! that does not hold the pair's latest value. Once the copy is complete it
//! flips the pair's latest-slot bit and then publishes the pair. The reader
//! picks up the latest pair, announces it, looks up the pair's latest slot
//! and copies that slot out.
//!
//! Control state is a handful of single-bit variables, each owned by exactly
//! one side:
//!
//! | variable      | owner  | meaning                              |
//! |---------------|--------|--------------------------------------|
//! | `latest_slot` | writer | latest written slot of each pair     |
//! | `latest_pair` | writer | pair written most recently           |
//! | `write_pair`  | writer | pair the current write is using      |
//! | `read_pair`   | reader | pair claimed by the current read     |
//! | `read_slot`   | reader | slot claimed by the current read     |
//!
//! Both operations execute a fixed sequence of steps with no loops or
//! retries, so each completes in a bounded number of its own steps whatever
//! the other side is doing.
//!
//! Every control access is sequentially consistent. Payload words are
//! relaxed atomics; the release/acquire edges of the surrounding control
//! accesses order them.

use crate::error::Result;
use crate::index::{PairIndex, SlotIndex};
use crate::payload::{check_len, Cell, Payload};
use crate::sync::{Arc, AtomicBool, Ordering};

const SC: Ordering = Ordering::SeqCst;

/// A primitive step of [`Writer::write`], reported to an observer before the
/// step executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WriterStep {
    /// Pick the pair opposite to the reader's claim.
    ChoosePair,
    /// Look up which slot of that pair is free.
    SelectSlot,
    /// Copy one payload word into the free slot.
    CopyWord(usize),
    /// Flip the pair's latest-slot bit to the freshly written slot.
    Commit,
    /// Publish the pair as the latest one.
    Publish,
}

/// A primitive step of [`Reader::read`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReaderStep {
    /// Sample the latest pair into a local.
    LoadLatest,
    /// Announce the sampled pair.
    ClaimPair,
    /// Look up and record the pair's latest slot.
    ClaimSlot,
    /// Copy one payload word out.
    CopyWord(usize),
}

/// Number of primitive steps executed by one write of a `words`-word payload.
pub const fn write_steps(words: usize) -> usize {
    words + 4
}

/// Number of primitive steps executed by one read of a `words`-word payload.
pub const fn read_steps(words: usize) -> usize {
    words + 3
}

struct Shared {
    words: usize,
    slots: [[Cell; 2]; 2],
    latest_slot: [AtomicBool; 2],
    latest_pair: AtomicBool,
    write_pair: AtomicBool,
    read_pair: AtomicBool,
    read_slot: AtomicBool,
}

impl Shared {
    #[inline]
    fn cell(&self, pair: PairIndex, slot: SlotIndex) -> &Cell {
        &self.slots[pair.index()][slot.index()]
    }
}

/// A four-slot buffer prior to being split into its two endpoints.
pub struct FourSlotBuffer {
    shared: Arc<Shared>,
}

impl FourSlotBuffer {
    /// Creates a buffer whose four slots all hold `initial`.
    ///
    /// Control bits start at `P0`/`S0` everywhere, so a read that precedes
    /// every write returns `initial`.
    pub fn new(payload_words: usize, initial: &[u64]) -> Result<Self> {
        if payload_words == 0 {
            return Err(crate::AcmError::EmptyPayload);
        }
        check_len(payload_words, initial.len())?;
        let cell = || Cell::new(initial);
        let shared = Shared {
            words: payload_words,
            slots: [[cell(), cell()], [cell(), cell()]],
            latest_slot: [AtomicBool::new(false), AtomicBool::new(false)],
            latest_pair: AtomicBool::new(false),
            write_pair: AtomicBool::new(false),
            read_pair: AtomicBool::new(false),
            read_slot: AtomicBool::new(false),
        };
        Ok(FourSlotBuffer {
            shared: Arc::new(shared),
        })
    }

    pub fn from_payload(initial: &Payload) -> Self {
        Self::new(initial.len(), initial.words()).expect("payload length is consistent")
    }

    pub fn payload_words(&self) -> usize {
        self.shared.words
    }

    /// Splits the buffer into its writer and reader endpoints.
    pub fn split(self) -> (Writer, Reader) {
        let writer = Writer {
            shared: Arc::clone(&self.shared),
        };
        let reader = Reader {
            shared: self.shared,
        };
        (writer, reader)
    }
}

/// Creates a four-slot buffer holding `initial` and returns its endpoints.
pub fn four_slot(initial: &Payload) -> (Writer, Reader) {
    FourSlotBuffer::from_payload(initial).split()
}

/// The unique writing endpoint.
pub struct Writer {
    shared: Arc<Shared>,
}

impl Writer {
    pub fn payload_words(&self) -> usize {
        self.shared.words
    }

    /// Writes `value`. Never blocks.
    pub fn write(&mut self, value: &[u64]) -> Result<()> {
        self.write_observed(value, |_| {})
    }

    /// Writes `value`, calling `observe` before every primitive step.
    pub fn write_observed<F>(&mut self, value: &[u64], mut observe: F) -> Result<()>
    where
        F: FnMut(WriterStep),
    {
        let sh = &*self.shared;
        check_len(sh.words, value.len())?;

        observe(WriterStep::ChoosePair);
        let pair = !PairIndex::from_bit(sh.read_pair.load(SC));
        sh.write_pair.store(pair.bit(), SC);

        observe(WriterStep::SelectSlot);
        let slot = !SlotIndex::from_bit(sh.latest_slot[pair.index()].load(SC));

        let cell = sh.cell(pair, slot);
        for (i, &word) in value.iter().enumerate() {
            observe(WriterStep::CopyWord(i));
            cell.store_word(i, word);
        }

        observe(WriterStep::Commit);
        sh.latest_slot[pair.index()].store(slot.bit(), SC);

        observe(WriterStep::Publish);
        sh.latest_pair.store(pair.bit(), SC);
        Ok(())
    }
}

/// The unique reading endpoint.
pub struct Reader {
    shared: Arc<Shared>,
}

impl Reader {
    pub fn payload_words(&self) -> usize {
        self.shared.words
    }

    /// Reads the freshest available value. Never blocks.
    pub fn read(&mut self) -> Payload {
        let mut out = vec![0; self.shared.words];
        self.read_observed(&mut out, |_| {})
            .expect("buffer sized from the payload width");
        Payload::new(out).expect("payload width is at least one word")
    }

    /// Reads into `out`, which must be exactly one payload wide.
    pub fn read_into(&mut self, out: &mut [u64]) -> Result<()> {
        self.read_observed(out, |_| {})
    }

    /// Reads into `out`, calling `observe` before every primitive step.
    pub fn read_observed<F>(&mut self, out: &mut [u64], mut observe: F) -> Result<()>
    where
        F: FnMut(ReaderStep),
    {
        let sh = &*self.shared;
        check_len(sh.words, out.len())?;

        observe(ReaderStep::LoadLatest);
        let t = PairIndex::from_bit(sh.latest_pair.load(SC));

        observe(ReaderStep::ClaimPair);
        sh.read_pair.store(t.bit(), SC);

        observe(ReaderStep::ClaimSlot);
        let slot = SlotIndex::from_bit(sh.latest_slot[t.index()].load(SC));
        sh.read_slot.store(slot.bit(), SC);

        let cell = sh.cell(t, slot);
        debug_assert_eq!(cell.len(), out.len());
        for (i, word) in out.iter_mut().enumerate() {
            observe(ReaderStep::CopyWord(i));
            *word = cell.load_word(i);
        }
        Ok(())
    }
}
