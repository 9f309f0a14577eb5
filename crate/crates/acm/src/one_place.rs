//! Flag-synchronised one-place buffer.
//!
//! The producer may only touch the value while the flag says `wr`, the
//! consumer only while it says `rd`; each hands the value over by flipping
//! the flag. Values therefore pass losslessly and in order, but either side
//! busy-waits while the other holds the turn, so unlike the four-slot buffer
//! this mechanism is not wait-free.

use crate::error::Result;
use crate::index::Flag;
use crate::payload::{check_len, Cell, Payload};
use crate::sync::{spin_hint, Arc, AtomicBool, Ordering};

struct Shared {
    words: usize,
    /// `true` while the flag is `rd`.
    flag: AtomicBool,
    value: Cell,
}

impl Shared {
    fn flag(&self) -> Flag {
        Flag::from_bit(self.flag.load(Ordering::SeqCst))
    }
}

/// Creates a one-place buffer for `payload_words`-word values.
///
/// The flag starts at `wr`; the stored value is all zeroes and is never
/// observable before the first produce.
pub fn one_place(payload_words: usize) -> Result<(Producer, Consumer)> {
    if payload_words == 0 {
        return Err(crate::AcmError::EmptyPayload);
    }
    let shared = Arc::new(Shared {
        words: payload_words,
        flag: AtomicBool::new(Flag::Wr.bit()),
        value: Cell::new(&vec![0; payload_words]),
    });
    Ok((
        Producer {
            shared: Arc::clone(&shared),
        },
        Consumer { shared },
    ))
}

pub struct Producer {
    shared: Arc<Shared>,
}

impl Producer {
    /// Waits for the turn, stores `value` and hands it to the consumer.
    pub fn produce(&mut self, value: &[u64]) -> Result<()> {
        self.try_produce(value, None).map(|_| ())
    }

    /// Like [`produce`](Self::produce) but gives up after `max_spins` failed
    /// checks of the flag. Returns whether the value was stored.
    pub fn try_produce(&mut self, value: &[u64], max_spins: Option<u64>) -> Result<bool> {
        let sh = &*self.shared;
        check_len(sh.words, value.len())?;
        let mut spins = 0u64;
        while sh.flag() == Flag::Rd {
            if max_spins.is_some_and(|m| spins >= m) {
                return Ok(false);
            }
            spin_hint(spins);
            spins += 1;
        }
        for (i, &w) in value.iter().enumerate() {
            sh.value.store_word(i, w);
        }
        sh.flag.store(Flag::Rd.bit(), Ordering::SeqCst);
        Ok(true)
    }
}

pub struct Consumer {
    shared: Arc<Shared>,
}

impl Consumer {
    /// Waits for a value and takes it.
    pub fn consume(&mut self) -> Payload {
        self.try_consume(None).expect("unbounded wait always yields")
    }

    /// Like [`consume`](Self::consume) but gives up after `max_spins` failed
    /// checks of the flag.
    pub fn try_consume(&mut self, max_spins: Option<u64>) -> Option<Payload> {
        let sh = &*self.shared;
        let mut spins = 0u64;
        while sh.flag() == Flag::Wr {
            if max_spins.is_some_and(|m| spins >= m) {
                return None;
            }
            spin_hint(spins);
            spins += 1;
        }
        let words = (0..sh.words).map(|i| sh.value.load_word(i)).collect();
        sh.flag.store(Flag::Wr.bit(), Ordering::SeqCst);
        Some(Payload::new(words).expect("width is at least one"))
    }
}
