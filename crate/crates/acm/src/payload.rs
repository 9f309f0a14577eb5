use std::fmt;

use crate::error::{AcmError, Result};
use crate::sync::{AtomicU64, Ordering};

/// Word count used when the caller has no preference.
pub const DEFAULT_PAYLOAD_WORDS: usize = 8;

/// A fixed-length multi-word value carried by the buffers.
///
/// Payloads are deliberately wider than one atomic word: the buffers copy
/// them word by word, so a reader that raced with a writer on the same cell
/// would observe a mixture of two payloads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Payload(Box<[u64]>);

impl Payload {
    pub fn new(words: Vec<u64>) -> Result<Self> {
        if words.is_empty() {
            return Err(AcmError::EmptyPayload);
        }
        Ok(Payload(words.into_boxed_slice()))
    }

    /// A payload of `len` copies of `word`.
    pub fn filled(len: usize, word: u64) -> Result<Self> {
        Self::new(vec![word; len])
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Returns the common word if every word is equal.
    pub fn uniform(&self) -> Option<u64> {
        let first = self.0[0];
        self.0.iter().all(|&w| w == first).then_some(first)
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Payload").field(&self.0).finish()
    }
}

impl AsRef<[u64]> for Payload {
    fn as_ref(&self) -> &[u64] {
        &self.0
    }
}

impl TryFrom<Vec<u64>> for Payload {
    type Error = AcmError;

    fn try_from(words: Vec<u64>) -> Result<Self> {
        Payload::new(words)
    }
}

/// Storage for one payload. Words are individually atomic but the cell as a
/// whole is not.
pub(crate) struct Cell {
    words: Box<[AtomicU64]>,
}

impl Cell {
    pub(crate) fn new(initial: &[u64]) -> Self {
        Cell {
            words: initial.iter().map(|&w| AtomicU64::new(w)).collect(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub(crate) fn store_word(&self, i: usize, word: u64) {
        self.words[i].store(word, Ordering::Relaxed);
    }

    #[inline]
    pub(crate) fn load_word(&self, i: usize) -> u64 {
        self.words[i].load(Ordering::Relaxed)
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(AcmError::PayloadLength { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_payload_is_rejected() {
        assert_eq!(Payload::new(vec![]), Err(AcmError::EmptyPayload));
        assert_eq!(Payload::filled(0, 3), Err(AcmError::EmptyPayload));
    }

    #[test]
    fn uniform_detects_mixed_words() {
        assert_eq!(Payload::filled(4, 9).unwrap().uniform(), Some(9));
        assert_eq!(Payload::new(vec![1, 1, 2]).unwrap().uniform(), None);
    }
}
