//! Single-writer/single-reader communication mechanisms.
//!
//! [`four_slot`] is Simpson's four-slot asynchronous communication
//! mechanism: neither side ever waits for the other, reads always return a
//! completely written value, and that value is at least as fresh as the last
//! write that finished before the read began.
//!
//! [`one_place`] is the classic flag-synchronised one-place buffer, kept as
//! the blocking baseline.
//!
//! ```
//! use acm::{four_slot, Payload};
//!
//! let (mut writer, mut reader) = four_slot(&Payload::filled(4, 0).unwrap());
//! assert_eq!(reader.read().words(), &[0; 4]);
//! writer.write(&[1; 4]).unwrap();
//! assert_eq!(reader.read().words(), &[1; 4]);
//! ```

mod error;
mod four_slot;
mod index;
mod one_place;
mod payload;
mod sync;

pub use error::{AcmError, Result};
pub use four_slot::{
    four_slot, read_steps, write_steps, FourSlotBuffer, Reader, ReaderStep, Writer, WriterStep,
};
pub use index::{Flag, PairIndex, SlotIndex};
pub use one_place::{one_place, Consumer, Producer};
pub use payload::{Payload, DEFAULT_PAYLOAD_WORDS};
