//! Two-valued index types used by the four-slot representation.
//!
//! Pairs and slots are kept as distinct types, even though both are a
//! single bit, so that using a slot where a pair is expected is a type error.

use std::fmt;
use std::ops::Not;

/// One of the two slot pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum PairIndex {
    #[default]
    P0,
    P1,
}

/// One of the two slots inside a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum SlotIndex {
    #[default]
    S0,
    S1,
}

/// Access flag of the one-place buffer: whose turn it is to touch the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Flag {
    /// The value may be read by the consumer.
    Rd,
    /// The value may be written by the producer.
    #[default]
    Wr,
}

macro_rules! binary_index {
    ($ty:ident, $zero:ident, $one:ident, $zs:literal, $os:literal) => {
        impl $ty {
            pub const ALL: [$ty; 2] = [$ty::$zero, $ty::$one];

            #[inline]
            pub const fn from_bit(bit: bool) -> Self {
                if bit {
                    $ty::$one
                } else {
                    $ty::$zero
                }
            }

            #[inline]
            pub const fn bit(self) -> bool {
                matches!(self, $ty::$one)
            }

            #[inline]
            pub const fn index(self) -> usize {
                self.bit() as usize
            }
        }

        impl Not for $ty {
            type Output = $ty;

            #[inline]
            fn not(self) -> $ty {
                $ty::from_bit(!self.bit())
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(if self.bit() { $os } else { $zs })
            }
        }
    };
}

binary_index!(PairIndex, P0, P1, "P0", "P1");
binary_index!(SlotIndex, S0, S1, "S0", "S1");
binary_index!(Flag, Wr, Rd, "wr", "rd");
