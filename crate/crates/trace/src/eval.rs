//! Evaluation of expressions, relations, and possible-values terms.

use std::collections::BTreeSet;

use crate::error::{Result, TraceError};
use crate::expr::{BinOp, Builtin, Expr, Time, VarRef};
use crate::state::State;
use crate::trace::{Interval, Trace};
use crate::value::Value;

/// Default bound on the number of valuations [`evalvals`] enumerates.
pub const DEFAULT_EVALVALS_CAP: u64 = 1_000_000;

/// Where variable references are resolved.
#[derive(Clone, Copy)]
pub(crate) struct Frame<'a> {
    pub before: &'a State,
    pub after: Option<&'a State>,
    /// Interval against which `[e]` and `[[e]]` terms are resolved.
    pub span: Option<(&'a Trace, Interval)>,
    /// When set, the k-th variable occurrence (pre-order) takes `choice[k]`.
    pub choice: Option<&'a [Value]>,
    pub cap: u64,
}

impl<'a> Frame<'a> {
    pub fn single(s: &'a State) -> Self {
        Frame {
            before: s,
            after: None,
            span: None,
            choice: None,
            cap: DEFAULT_EVALVALS_CAP,
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<Value> {
        let mut occ = 0;
        self.go(e, &mut occ)
    }

    fn lookup(&self, r: &VarRef) -> Result<Value> {
        let state = match r.time {
            Time::Pre => self.before,
            Time::Post => self.after.ok_or_else(|| TraceError::NoAfterState(r.to_string()))?,
        };
        state.get(&r.var).cloned().ok_or_else(|| TraceError::Unbound(r.to_string()))
    }

    fn go(&self, e: &Expr, occ: &mut usize) -> Result<Value> {
        match e {
            Expr::Const(v) => Ok(v.clone()),
            Expr::Var(r) => {
                let k = *occ;
                *occ += 1;
                match self.choice {
                    Some(choice) => Ok(choice[k].clone()),
                    None => self.lookup(r),
                }
            }
            Expr::Not(inner) => match self.go(inner, occ)? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                Value::Pair(p) => Ok(Value::Pair(!p)),
                Value::Slot(s) => Ok(Value::Slot(!s)),
                Value::Flag(f) => Ok(Value::Flag(!f)),
                other => type_err("!", "bool or two-valued index", &other),
            },
            Expr::Bin(op, a, b) => self.binary(*op, a, b, occ),
            Expr::Apply(f, args) => {
                let fv = self.go(f, occ)?;
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.go(a, occ)?);
                }
                let key = if vals.len() == 1 {
                    vals.pop().unwrap()
                } else {
                    Value::Tuple(vals)
                };
                match &fv {
                    Value::Map(m) => m.get(&key).cloned().ok_or_else(|| TraceError::MissingKey {
                        key: key.to_string(),
                        map: f.to_string(),
                    }),
                    other => type_err("application", "map", other),
                }
            }
            Expr::Tuple(items) => {
                let mut vals = Vec::with_capacity(items.len());
                for a in items {
                    vals.push(self.go(a, occ)?);
                }
                Ok(Value::Tuple(vals))
            }
            Expr::Call(b, inner) => {
                let v = self.go(inner, occ)?;
                match (b, &v) {
                    (Builtin::Dom, Value::Map(m)) => Ok(Value::set(m.keys().cloned())),
                    (Builtin::Dom, other) => type_err("dom", "map", other),
                    (Builtin::Card, Value::Map(m)) => Ok(Value::Int(m.len() as i64)),
                    (Builtin::Card, Value::Set(s)) => Ok(Value::Int(s.len() as i64)),
                    (Builtin::Card, Value::Tuple(t)) => Ok(Value::Int(t.len() as i64)),
                    (Builtin::Card, other) => type_err("card", "map, set or tuple", other),
                }
            }
            Expr::Posvals(inner) | Expr::Evalvals(inner) => {
                *occ += inner.occurrences();
                let (tr, iv) = self.span.ok_or_else(|| TraceError::NoInterval(e.to_string()))?;
                let set = if matches!(e, Expr::Posvals(_)) {
                    posvals(tr, iv, inner)?
                } else {
                    evalvals_capped(tr, iv, inner, self.cap)?
                };
                Ok(Value::Set(set.into()))
            }
        }
    }

    fn binary(&self, op: BinOp, a: &Expr, b: &Expr, occ: &mut usize) -> Result<Value> {
        let sym = op.symbol();
        match op {
            BinOp::And | BinOp::Or | BinOp::Implies => {
                let lhs = bool_of(sym, self.go(a, occ)?)?;
                let decided = match op {
                    BinOp::And => (!lhs).then_some(false),
                    BinOp::Or => lhs.then_some(true),
                    _ => (!lhs).then_some(true),
                };
                if let Some(v) = decided {
                    *occ += b.occurrences();
                    return Ok(Value::Bool(v));
                }
                Ok(Value::Bool(bool_of(sym, self.go(b, occ)?)?))
            }
            _ => {
                let x = self.go(a, occ)?;
                let y = self.go(b, occ)?;
                match op {
                    BinOp::Eq => Ok(Value::Bool(x == y)),
                    BinOp::Ne => Ok(Value::Bool(x != y)),
                    BinOp::In => match &y {
                        Value::Set(s) => Ok(Value::Bool(s.contains(&x))),
                        Value::Map(m) => Ok(Value::Bool(m.contains_key(&x))),
                        other => type_err("in", "set or map", other),
                    },
                    _ => {
                        let (i, j) = (int_of(sym, &x)?, int_of(sym, &y)?);
                        let overflow = || TraceError::Overflow(format!("{x} {sym} {y}"));
                        Ok(match op {
                            BinOp::Add => Value::Int(i.checked_add(j).ok_or_else(overflow)?),
                            BinOp::Sub => Value::Int(i.checked_sub(j).ok_or_else(overflow)?),
                            BinOp::Lt => Value::Bool(i < j),
                            _ => Value::Bool(i <= j),
                        })
                    }
                }
            }
        }
    }
}

fn type_err<T>(op: &'static str, expected: &'static str, got: &Value) -> Result<T> {
    Err(TraceError::Type {
        op,
        expected,
        got: format!("{} `{got}`", got.type_name()),
    })
}

fn bool_of(op: &'static str, v: Value) -> Result<bool> {
    match v {
        Value::Bool(b) => Ok(b),
        other => type_err(op, "bool", &other),
    }
}

fn int_of(op: &'static str, v: &Value) -> Result<i64> {
    match v {
        Value::Int(i) => Ok(*i),
        other => type_err(op, "int", other),
    }
}

/// Value of `e` with every variable read from `s`.
pub fn eval_expr(e: &Expr, s: &State) -> Result<Value> {
    Frame::single(s).eval(e)
}

/// Truth of relation `r`: unprimed references read `before`, primed ones `after`.
pub fn check_relation(r: &Expr, before: &State, after: &State) -> Result<bool> {
    let f = Frame {
        after: Some(after),
        ..Frame::single(before)
    };
    bool_of("relation", f.eval(r)?)
}

/// Truth of a state predicate.
pub fn holds(p: &Expr, s: &State) -> Result<bool> {
    bool_of("predicate", eval_expr(p, s)?)
}

fn single_state_only(e: &Expr) -> Result<()> {
    let mut bad = false;
    e.visit(&mut |n| {
        bad |= matches!(n, Expr::Posvals(_) | Expr::Evalvals(_));
        if let Expr::Var(r) = n {
            bad |= r.time == Time::Post;
        }
    });
    if bad {
        Err(TraceError::MalformedSetTerm(e.to_string()))
    } else {
        Ok(())
    }
}

/// `[e]`: the values of `e` in each state of the interval.
pub fn posvals(tr: &Trace, iv: Interval, e: &Expr) -> Result<BTreeSet<Value>> {
    tr.check(iv)?;
    single_state_only(e)?;
    tr.states()[iv.lo..=iv.hi].iter().map(|s| eval_expr(e, s)).collect()
}

/// `[[e]]` with the default valuation cap.
pub fn evalvals(tr: &Trace, iv: Interval, e: &Expr) -> Result<BTreeSet<Value>> {
    evalvals_capped(tr, iv, e, DEFAULT_EVALVALS_CAP)
}

/// `[[e]]`: values of `e` when each variable occurrence independently takes
/// any value its variable has somewhere in the interval. Faults if more than
/// `cap` valuations would be needed.
pub fn evalvals_capped(tr: &Trace, iv: Interval, e: &Expr, cap: u64) -> Result<BTreeSet<Value>> {
    tr.check(iv)?;
    single_state_only(e)?;
    let states = &tr.states()[iv.lo..=iv.hi];

    let mut domains: Vec<Vec<Value>> = Vec::new();
    let mut fault = None;
    e.visit(&mut |n| {
        if let Expr::Var(r) = n {
            let mut seen = BTreeSet::new();
            for s in states {
                match s.get(&r.var) {
                    Some(v) => {
                        seen.insert(v.clone());
                    }
                    None => fault = Some(TraceError::Unbound(r.to_string())),
                }
            }
            domains.push(seen.into_iter().collect());
        }
    });
    if let Some(err) = fault {
        return Err(err);
    }
    let needed = domains.iter().map(|d| d.len() as u128).product::<u128>();
    if needed > u128::from(cap) {
        return Err(TraceError::EvalCap {
            expr: e.to_string(),
            needed,
            cap,
        });
    }

    let mut out = BTreeSet::new();
    let mut odometer = vec![0usize; domains.len()];
    let mut choice: Vec<Value> = domains.iter().map(|d| d[0].clone()).collect();
    loop {
        let f = Frame {
            choice: Some(&choice),
            ..Frame::single(&states[0])
        };
        out.insert(f.eval(e)?);
        // Advance the mixed-radix counter.
        let mut k = 0;
        loop {
            if k == domains.len() {
                return Ok(out);
            }
            odometer[k] += 1;
            if odometer[k] < domains[k].len() {
                choice[k] = domains[k][odometer[k]].clone();
                break;
            }
            odometer[k] = 0;
            choice[k] = domains[k][0].clone();
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use acm::{Flag, PairIndex};

    fn e(src: &str) -> Expr {
        parse_expr(src).unwrap()
    }

    fn ints(xs: &[i64]) -> BTreeSet<Value> {
        xs.iter().map(|&i| Value::Int(i)).collect()
    }

    fn y_trace(ys: &[i64]) -> Trace {
        Trace::from_states(ys.iter().map(|&y| State::new().with("y", y)).collect())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_expr(&e("y + y"), &State::new().with("y", 3)), Ok(Value::Int(6)));
        let d = Value::map([(0.into(), 10.into()), (1.into(), 20.into())]);
        let s = State::new().with("d", d).with("v", 1);
        assert_eq!(eval_expr(&e("d(v)"), &s), Ok(Value::Int(20)));
        let s = State::new().with("p", PairIndex::P0);
        assert_eq!(eval_expr(&e("!p"), &s), Ok(Value::Pair(PairIndex::P1)));
        assert_eq!(eval_expr(&e("!!p"), &s), Ok(Value::Pair(PairIndex::P0)));
    }

    #[test]
    fn eval_faults() {
        let s = State::new().with("y", 1).with("b", true);
        assert!(matches!(eval_expr(&e("z"), &s), Err(TraceError::Unbound(_))));
        assert!(matches!(eval_expr(&e("y + b"), &s), Err(TraceError::Type { .. })));
        assert!(matches!(eval_expr(&e("y'"), &s), Err(TraceError::NoAfterState(_))));
        assert!(matches!(eval_expr(&e("[y]"), &s), Err(TraceError::NoInterval(_))));
        let big = State::new().with("m", i64::MAX);
        assert!(matches!(eval_expr(&e("m + 1"), &big), Err(TraceError::Overflow(_))));
    }

    #[test]
    fn short_circuit_skips_faults() {
        let s = State::new().with("b", false);
        assert_eq!(eval_expr(&e("b && missing"), &s), Ok(Value::Bool(false)));
        assert_eq!(eval_expr(&e("b => missing"), &s), Ok(Value::Bool(true)));
    }

    #[test]
    fn relation_examples() {
        let r = e("f = rd => b' = b");
        let before = State::new().with("f", Flag::Rd).with("b", 5);
        assert_eq!(check_relation(&r, &before, &before.clone()), Ok(true));
        let after = State::new().with("f", Flag::Rd).with("b", 6);
        assert_eq!(check_relation(&r, &before, &after), Ok(false));

        let g = e("b' != b => b' = v");
        let before = State::new().with("b", 1).with("v", 9);
        let after = State::new().with("b", 9).with("v", 9);
        assert_eq!(check_relation(&g, &before, &after), Ok(true));
    }

    #[test]
    fn posvals_examples() {
        let tr = y_trace(&[1, 1, 2, 3, 2]);
        assert_eq!(posvals(&tr, tr.whole(), &e("y")), Ok(ints(&[1, 2, 3])));

        let tr = y_trace(&[1, 2]);
        let got = posvals(&tr, tr.whole(), &e("y + y")).unwrap();
        assert_eq!(got, ints(&[2, 4]));
        assert!(!got.contains(&Value::Int(3)));

        let tr = y_trace(&[7]);
        assert_eq!(posvals(&tr, tr.whole(), &e("y")), Ok(ints(&[7])));
    }

    #[test]
    fn evalvals_examples() {
        let tr = y_trace(&[1, 2]);
        assert_eq!(evalvals(&tr, tr.whole(), &e("y + y")), Ok(ints(&[2, 3, 4])));
        assert_eq!(evalvals(&tr, tr.whole(), &e("41 + 1")), Ok(ints(&[42])));
        assert_eq!(evalvals(&tr, tr.whole(), &e("y + 1")), posvals(&tr, tr.whole(), &e("y + 1")));
    }

    #[test]
    fn evalvals_cap_faults() {
        let tr = y_trace(&[1, 2, 3, 4]);
        let many = e("y + y + y + y + y + y + y + y + y + y + y");
        assert!(matches!(
            evalvals_capped(&tr, tr.whole(), &many, 1000),
            Err(TraceError::EvalCap { needed: 4_194_304, .. })
        ));
    }

    #[test]
    fn interval_bounds_checked() {
        let tr = y_trace(&[1, 2]);
        assert!(matches!(
            posvals(&tr, Interval::new(1, 2), &e("y")),
            Err(TraceError::Interval { .. })
        ));
    }
}
