use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{op}` expects {expected}, got {got}")]
    Type {
        op: &'static str,
        expected: &'static str,
        got: String,
    },
    #[error("key {key} not in the domain of {map}")]
    MissingKey { key: String, map: String },
    #[error("integer overflow in `{0}`")]
    Overflow(String),
    #[error("primed reference `{0}` with no after state")]
    NoAfterState(String),
    #[error("`{0}` needs an operation interval")]
    NoInterval(String),
    #[error("possible-evaluations of `{expr}` needs {needed} valuations, cap is {cap}")]
    EvalCap { expr: String, needed: u128, cap: u64 },
    /// A `[e]` or `[[e]]` term used anywhere except as the right operand of
    /// a positively occurring `in`.
    #[error("malformed possible-values term in `{0}`")]
    MalformedSetTerm(String),
    #[error("interval [{lo},{hi}] is invalid for a trace of {len} states")]
    Interval { lo: usize, hi: usize, len: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("trace line {line}: {msg}")]
    TraceFormat { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, TraceError>;
