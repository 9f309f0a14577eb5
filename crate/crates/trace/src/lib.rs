//! States, traces, and the possible-values semantics of expressions.
//!
//! An operation that runs concurrently with its environment does not see a
//! single state. [`posvals`] gives the set of values an expression takes in
//! the states of an execution interval; [`evalvals`] the (larger) set obtained
//! when every variable occurrence is sampled at a different moment.
//!
//! ```
//! use acm_trace::{evalvals, parse_expr, posvals, State, Trace, Value};
//!
//! let tr = Trace::from_states(vec![State::new().with("y", 1), State::new().with("y", 2)]);
//! let e = parse_expr("y + y").unwrap();
//! let p: Vec<_> = posvals(&tr, tr.whole(), &e).unwrap().into_iter().collect();
//! let q: Vec<_> = evalvals(&tr, tr.whole(), &e).unwrap().into_iter().collect();
//! assert_eq!(p, [Value::Int(2), Value::Int(4)]);
//! assert_eq!(q, [Value::Int(2), Value::Int(3), Value::Int(4)]);
//! ```

mod contract;
mod error;
mod eval;
mod expr;
mod parse;
mod state;
mod trace;
mod value;

pub use contract::{check_operation_contract, check_set_terms, OperationContract, Outcome, Verdict};
pub use error::{Result, TraceError};
pub use eval::{check_relation, eval_expr, evalvals, evalvals_capped, holds, posvals, DEFAULT_EVALVALS_CAP};
pub use expr::{BinOp, Builtin, Expr, Time, VarRef};
pub use parse::parse_expr;
pub use state::{Scope, State, VarName};
pub use trace::{Interval, StepLabel, Trace};
pub use value::Value;
