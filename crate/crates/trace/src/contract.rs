//! Checking one operation execution against a pre/rely/guarantee/post contract.

use std::fmt;

use crate::error::{Result, TraceError};
use crate::eval::{check_relation, holds, Frame};
use crate::expr::{BinOp, Expr};
use crate::trace::{Interval, Trace};

/// A rely/guarantee specification of one operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationContract {
    /// Actor whose steps are program steps; every other actor is environment.
    pub program: String,
    /// Predicate on the state the operation starts in.
    pub pre: Expr,
    /// Relation every environment step inside the interval is assumed to satisfy.
    pub rely: Expr,
    /// Relation every program step must satisfy.
    pub guar: Expr,
    /// Relation between first and last state; may contain `x' in [e]` terms.
    pub post: Expr,
}

impl OperationContract {
    pub fn new(program: impl Into<String>) -> Self {
        OperationContract {
            program: program.into(),
            pre: Expr::val(true),
            rely: Expr::val(true),
            guar: Expr::val(true),
            post: Expr::val(true),
        }
    }

    pub fn pre(mut self, e: Expr) -> Self {
        self.pre = e;
        self
    }

    pub fn rely(mut self, e: Expr) -> Self {
        self.rely = e;
        self
    }

    pub fn guar(mut self, e: Expr) -> Self {
        self.guar = e;
        self
    }

    pub fn post(mut self, e: Expr) -> Self {
        self.post = e;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    /// Failed, but only in a run where the assumptions (pre or rely) were broken.
    Vacuous,
    Fail,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Vacuous => "vacuous",
            Outcome::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pre_holds: bool,
    /// Step indices of environment steps violating the rely.
    pub rely_violations: Vec<usize>,
    /// Step indices of program steps violating the guarantee.
    pub guar_violations: Vec<usize>,
    pub guarantee: Outcome,
    pub post: Outcome,
}

impl Verdict {
    pub fn assumptions_hold(&self) -> bool {
        self.pre_holds && self.rely_violations.is_empty()
    }

    /// The worse of the guarantee and post outcomes.
    pub fn overall(&self) -> Outcome {
        self.guarantee.max(self.post)
    }
}

/// Rejects `[e]`/`[[e]]` anywhere except as the right operand of an `in`
/// that occurs positively.
pub fn check_set_terms(post: &Expr) -> Result<()> {
    fn walk(e: &Expr, positive: bool, root: &Expr) -> Result<()> {
        let bad = || Err(TraceError::MalformedSetTerm(root.to_string()));
        match e {
            Expr::Posvals(_) | Expr::Evalvals(_) => bad(),
            Expr::Const(_) | Expr::Var(_) => Ok(()),
            Expr::Not(inner) => walk(inner, !positive, root),
            Expr::Bin(BinOp::In, lhs, rhs) if matches!(**rhs, Expr::Posvals(_) | Expr::Evalvals(_)) => {
                if !positive {
                    return bad();
                }
                let (Expr::Posvals(inner) | Expr::Evalvals(inner)) = &**rhs else {
                    unreachable!()
                };
                walk(lhs, positive, root)?;
                if inner.mentions_post() {
                    return bad();
                }
                walk(inner, positive, root)
            }
            Expr::Bin(BinOp::Implies, a, b) => {
                walk(a, !positive, root)?;
                walk(b, positive, root)
            }
            Expr::Bin(BinOp::And | BinOp::Or, a, b) => {
                walk(a, positive, root)?;
                walk(b, positive, root)
            }
            Expr::Bin(_, a, b) => {
                walk(a, positive, root)?;
                walk(b, positive, root)
            }
            Expr::Apply(f, args) => {
                walk(f, positive, root)?;
                args.iter().try_for_each(|a| walk(a, positive, root))
            }
            Expr::Tuple(items) => items.iter().try_for_each(|a| walk(a, positive, root)),
            Expr::Call(_, inner) => walk(inner, positive, root),
        }
    }
    walk(post, true, post)
}

fn no_set_terms(e: &Expr) -> Result<()> {
    let mut found = false;
    e.visit(&mut |n| found |= matches!(n, Expr::Posvals(_) | Expr::Evalvals(_)));
    if found {
        Err(TraceError::MalformedSetTerm(e.to_string()))
    } else {
        Ok(())
    }
}

/// Audits the execution `iv` of `tr` against `c`.
///
/// Environment steps are audited against the rely, program steps against the
/// guarantee, and the post is evaluated between the interval's first and last
/// states with `[e]` terms resolved over the interval. When the pre or rely
/// was broken, guarantee and post failures are reported as vacuous.
pub fn check_operation_contract(tr: &Trace, iv: Interval, c: &OperationContract) -> Result<Verdict> {
    tr.check(iv)?;
    check_set_terms(&c.post)?;
    for e in [&c.pre, &c.rely, &c.guar] {
        no_set_terms(e)?;
    }

    let pre_holds = holds(&c.pre, &tr.states()[iv.lo])?;
    let mut rely_violations = Vec::new();
    let mut guar_violations = Vec::new();
    for i in iv.steps() {
        let (before, label, after) = tr.step(i);
        if label.actor == c.program {
            if !check_relation(&c.guar, before, after)? {
                guar_violations.push(i);
            }
        } else if !check_relation(&c.rely, before, after)? {
            rely_violations.push(i);
        }
    }

    let frame = Frame {
        after: Some(&tr.states()[iv.hi]),
        span: Some((tr, iv)),
        ..Frame::single(&tr.states()[iv.lo])
    };
    let post_holds = match frame.eval(&c.post)? {
        crate::Value::Bool(b) => b,
        other => {
            return Err(TraceError::Type {
                op: "post",
                expected: "bool",
                got: other.to_string(),
            })
        }
    };

    let assumed = pre_holds && rely_violations.is_empty();
    let grade = |ok: bool| match (ok, assumed) {
        (true, _) => Outcome::Pass,
        (false, true) => Outcome::Fail,
        (false, false) => Outcome::Vacuous,
    };
    Ok(Verdict {
        pre_holds,
        guarantee: grade(guar_violations.is_empty()),
        post: grade(post_holds),
        rely_violations,
        guar_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use crate::state::State;
    use crate::trace::StepLabel;

    fn e(src: &str) -> Expr {
        parse_expr(src).unwrap()
    }

    /// `x <- y` by `prog` at step `at`, with the environment bumping y around it.
    fn assignment_trace(env_touches_x_after: bool) -> Trace {
        let mut tr = Trace::new(State::new().with("x", 0).with("y", 1));
        tr.push(StepLabel::new("env", "y"), State::new().with("x", 0).with("y", 2));
        tr.push(StepLabel::new("prog", "x<-y"), State::new().with("x", 2).with("y", 2));
        tr.push(StepLabel::new("env", "y"), State::new().with("x", 2).with("y", 3));
        if env_touches_x_after {
            tr.push(StepLabel::new("env", "x"), State::new().with("x", 9).with("y", 3));
        }
        tr
    }

    fn assignment_contract() -> OperationContract {
        OperationContract::new("prog")
            .rely(e("x' = x"))
            .post(e("x' in [y]"))
    }

    #[test]
    fn post_holds_when_rely_respected() {
        let tr = assignment_trace(false);
        let v = check_operation_contract(&tr, tr.whole(), &assignment_contract()).unwrap();
        assert!(v.assumptions_hold());
        assert_eq!(v.post, Outcome::Pass);
        assert_eq!(v.overall(), Outcome::Pass);
    }

    #[test]
    fn rely_violation_makes_failure_vacuous() {
        let tr = assignment_trace(true);
        let v = check_operation_contract(&tr, tr.whole(), &assignment_contract()).unwrap();
        assert_eq!(v.rely_violations, vec![3]);
        assert_eq!(v.post, Outcome::Vacuous);
    }

    #[test]
    fn spurious_program_write_fails_guarantee() {
        let c = OperationContract::new("writer").guar(e("b' != b => b' = v"));
        let mut tr = Trace::new(State::new().with("b", 1).with("v", 9));
        tr.push(StepLabel::new("writer", "junk"), State::new().with("b", 4).with("v", 9));
        tr.push(StepLabel::new("writer", "commit"), State::new().with("b", 9).with("v", 9));
        let v = check_operation_contract(&tr, tr.whole(), &c).unwrap();
        assert_eq!(v.guar_violations, vec![0]);
        assert_eq!(v.guarantee, Outcome::Fail);
    }

    #[test]
    fn negated_posvals_is_rejected() {
        let tr = assignment_trace(false);
        for bad in ["!(x' in [y])", "x' in [y] => true", "card([y]) = 1", "x' in [y']"] {
            let c = OperationContract::new("prog").post(e(bad));
            assert!(
                matches!(check_operation_contract(&tr, tr.whole(), &c), Err(TraceError::MalformedSetTerm(_))),
                "{bad}"
            );
        }
        let c = OperationContract::new("prog").rely(e("x' in [y]"));
        assert!(check_operation_contract(&tr, tr.whole(), &c).is_err());
    }

    #[test]
    fn failed_pre_is_vacuous() {
        let tr = assignment_trace(false);
        let c = assignment_contract().pre(e("x = 5")).post(e("false"));
        let v = check_operation_contract(&tr, tr.whole(), &c).unwrap();
        assert_eq!(v.post, Outcome::Vacuous);
    }
}
