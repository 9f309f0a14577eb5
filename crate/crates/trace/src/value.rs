use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use acm::{Flag, PairIndex, SlotIndex};

/// A value bound to a variable or produced by an expression.
///
/// Everything is finite so that all evaluation stays brute-forceable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Pair(PairIndex),
    Slot(SlotIndex),
    Flag(Flag),
    Tuple(Vec<Value>),
    Map(Arc<BTreeMap<Value, Value>>),
    Set(Arc<BTreeSet<Value>>),
    /// Content of a cell observed while it was being overwritten.
    Torn,
    /// Placeholder for a local that has not been assigned yet.
    Undef,
}

impl Value {
    pub fn map<I>(entries: I) -> Value
    where
        I: IntoIterator<Item = (Value, Value)>,
    {
        Value::Map(Arc::new(entries.into_iter().collect()))
    }

    pub fn set<I>(items: I) -> Value
    where
        I: IntoIterator<Item = Value>,
    {
        Value::Set(Arc::new(items.into_iter().collect()))
    }

    pub fn pair_slot(p: PairIndex, s: SlotIndex) -> Value {
        Value::Tuple(vec![Value::Pair(p), Value::Slot(s)])
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Bool(_) => "bool",
            Value::Pair(_) => "pair",
            Value::Slot(_) => "slot",
            Value::Flag(_) => "flag",
            Value::Tuple(_) => "tuple",
            Value::Map(_) => "map",
            Value::Set(_) => "set",
            Value::Torn => "torn",
            Value::Undef => "undef",
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<PairIndex> for Value {
    fn from(p: PairIndex) -> Self {
        Value::Pair(p)
    }
}

impl From<SlotIndex> for Value {
    fn from(s: SlotIndex) -> Self {
        Value::Slot(s)
    }
}

impl From<Flag> for Value {
    fn from(f: Flag) -> Self {
        Value::Flag(f)
    }
}

fn comma_separated<T, F>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = T>, mut each: F) -> fmt::Result
where
    F: FnMut(&mut fmt::Formatter<'_>, T) -> fmt::Result,
{
    for (i, item) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        each(f, item)?;
    }
    Ok(())
}

/// Rendering never contains whitespace, which the trace text format relies on.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Pair(p) => write!(f, "{p}"),
            Value::Slot(s) => write!(f, "{s}"),
            Value::Flag(x) => write!(f, "{x}"),
            Value::Tuple(items) => {
                f.write_str("(")?;
                comma_separated(f, items.iter(), |f, v| write!(f, "{v}"))?;
                f.write_str(")")
            }
            Value::Map(m) => {
                f.write_str("{")?;
                comma_separated(f, m.iter(), |f, (k, v)| write!(f, "{k}:{v}"))?;
                f.write_str("}")
            }
            Value::Set(s) => {
                f.write_str("#{")?;
                comma_separated(f, s.iter(), |f, v| write!(f, "{v}"))?;
                f.write_str("}")
            }
            Value::Torn => f.write_str("torn"),
            Value::Undef => f.write_str("undef"),
        }
    }
}
