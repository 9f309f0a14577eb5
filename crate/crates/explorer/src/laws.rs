//! Brute-force validation of the possible-values refinement laws.
//!
//! Each law pairs a specification `x' in [e]` (or a containment between
//! possible-value sets) with a small program. The environment is an
//! adversary that changes one shared location per step, filtered by the
//! law's rely condition; the validator enumerates every such environment
//! with at most `env_steps` steps and every placement of the program's
//! steps among them, and checks the specification on each resulting trace.
//! Environment steps may also follow the program's last step, before the
//! command returns.

use std::fmt;
use std::str::FromStr;

use acm_trace::{check_relation, eval_expr, parse_expr, posvals, Expr, Interval, State, StepLabel, Trace, Value, VarName};

use crate::report::Status;
use crate::{ExplorerError, Result};

pub const MAX_LAW_VALUES: usize = 4;
pub const MAX_ENV_STEPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// `rely x' = x |- x' in [y]` is refined by `x <- y`.
    PosvalsAssign,
    /// `rely x' = x && z' = z |- x' in [y + z]` is refined by `x <- y + z`
    /// when `y` is referenced once and `z` is stable.
    SingleReference,
    /// `r' in [d(x)]` is refined by `t <- x; r' in [d(t)]` under the rely
    /// `x' != t && t' = t => d'(t) = d(t)`.
    PreAssignment,
}

impl Law {
    pub const ALL: [Law; 3] = [Law::PosvalsAssign, Law::SingleReference, Law::PreAssignment];

    pub fn name(self) -> &'static str {
        match self {
            Law::PosvalsAssign => "posvals-assign",
            Law::SingleReference => "single-reference",
            Law::PreAssignment => "pre-assignment",
        }
    }

    /// The law's number on the command line.
    pub fn number(self) -> u8 {
        match self {
            Law::PosvalsAssign => 2,
            Law::SingleReference => 3,
            Law::PreAssignment => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.number() == n)
    }

    /// The law as usually written.
    pub fn statement(self) -> &'static str {
        match self {
            Law::PosvalsAssign => "rely x' = x |- x: [x' in [y]] refined by x <- y",
            Law::SingleReference => "rely x' = x && z' = z |- x: [x' in [y + z]] refined by x <- y + z",
            Law::PreAssignment => "t,r: [r' in [d(x)]] refined by <t <- x>; r: [r' in [d(t)]]",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = ExplorerError;

    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s || s.parse::<u8>().ok() == Some(l.number()))
            .ok_or_else(|| ExplorerError::Config(format!("unknown law `{s}` (expected 2, 3 or 4)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawConfig {
    /// Size of the value domain `{0, ..., values - 1}`.
    pub values: usize,
    pub env_steps: usize,
    /// Drop the side condition that makes the law valid: `x' = x` for the
    /// assignment law, `z' = z` for the single-reference law, and the
    /// stability rely for the pre-assignment law.
    pub weakened: bool,
}

impl LawConfig {
    pub fn new(values: usize, env_steps: usize) -> Self {
        LawConfig {
            values,
            env_steps,
            weakened: false,
        }
    }

    pub fn weakened(mut self) -> Self {
        self.weakened = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub config: LawConfig,
    pub status: Status,
    /// Complete traces checked.
    pub traces: u64,
    /// Environment steps discarded by the rely.
    pub rejected_env_steps: u64,
    pub counterexample: Option<Trace>,
}

type Action = Box<dyn Fn(&State) -> Result<State>>;
type Check = Box<dyn Fn(&Trace, usize) -> Result<bool>>;

struct Setup {
    /// Shared locations and the values each may take.
    locations: Vec<(Location, Vec<Value>)>,
    program: Vec<(&'static str, Action)>,
    rely: Expr,
    /// Judges a trace whose last program step has run, given the index of
    /// the state after the first program step.
    check: Check,
}

/// A shared variable, or one entry of a shared map.
#[derive(Debug, Clone)]
enum Location {
    Var(&'static str),
    Entry(&'static str, Value),
}

impl Location {
    fn get(&self, s: &State) -> Value {
        match self {
            Location::Var(v) => s.get(&VarName::shared(v)).cloned().unwrap_or(Value::Undef),
            Location::Entry(map, k) => match s.get(&VarName::shared(map)) {
                Some(Value::Map(m)) => m.get(k).cloned().unwrap_or(Value::Undef),
                _ => Value::Undef,
            },
        }
    }

    fn set(&self, s: &State, v: Value) -> State {
        let mut out = s.clone();
        match self {
            Location::Var(name) => out.set(VarName::shared(name), v),
            Location::Entry(map, k) => {
                let Some(Value::Map(m)) = s.get(&VarName::shared(map)) else {
                    unreachable!("map location")
                };
                let mut m = (**m).clone();
                m.insert(k.clone(), v);
                out.set(VarName::shared(map), Value::map(m));
            }
        }
        out
    }

    fn describe(&self, v: &Value) -> String {
        match self {
            Location::Var(name) => format!("{name}<-{v}"),
            Location::Entry(map, k) => format!("{map}({k})<-{v}"),
        }
    }
}

fn ex(src: &str) -> Expr {
    parse_expr(src).unwrap_or_else(|err| panic!("built-in formula `{src}`: {err}"))
}

fn local(name: &str) -> VarName {
    VarName::local("prog", name)
}

fn assign(target: VarName, src: &str) -> Action {
    let e = ex(src);
    Box::new(move |s| {
        let mut out = s.clone();
        out.set(target.clone(), eval_expr(&e, s)?);
        Ok(out)
    })
}

/// `target` in the final state lies in `[e]` over the whole trace.
fn final_in_posvals(target: &str, e: &str) -> impl Fn(&Trace) -> Result<bool> {
    let (target, e) = (ex(target), ex(e));
    move |tr| {
        let got = eval_expr(&target, tr.last())?;
        Ok(posvals(tr, tr.whole(), &e)?.contains(&got))
    }
}

fn setup(law: Law, cfg: &LawConfig) -> Setup {
    let dom: Vec<Value> = (0..cfg.values as i64).map(Value::Int).collect();
    match law {
        Law::PosvalsAssign => {
            let post = final_in_posvals("x", "y");
            Setup {
                locations: vec![(Location::Var("x"), dom.clone()), (Location::Var("y"), dom)],
                program: vec![
                    ("fetch-y", assign(local("a"), "y")),
                    ("store-x", assign(VarName::shared("x"), "prog.a")),
                ],
                rely: ex(if cfg.weakened { "true" } else { "x' = x" }),
                check: Box::new(move |tr, _| post(tr)),
            }
        }
        Law::SingleReference => {
            let post = final_in_posvals("x", "y + z");
            Setup {
                locations: vec![
                    (Location::Var("x"), dom.clone()),
                    (Location::Var("y"), dom.clone()),
                    (Location::Var("z"), dom),
                ],
                program: vec![
                    ("fetch-y", assign(local("a"), "y")),
                    ("fetch-z", assign(local("c"), "z")),
                    ("store-x", assign(VarName::shared("x"), "prog.a + prog.c")),
                ],
                rely: ex(if cfg.weakened { "x' = x" } else { "x' = x && z' = z" }),
                check: Box::new(move |tr, _| post(tr)),
            }
        }
        Law::PreAssignment => {
            let post = final_in_posvals("prog.r", "d(x)");
            let (inner, outer) = (ex("d(prog.t)"), ex("d(x)"));
            Setup {
                locations: vec![
                    (Location::Var("x"), vec![Value::Int(0), Value::Int(1)]),
                    (Location::Entry("d", Value::Int(0)), dom.clone()),
                    (Location::Entry("d", Value::Int(1)), dom),
                ],
                program: vec![("t<-x", assign(local("t"), "x")), ("r<-d(t)", assign(local("r"), "d(prog.t)"))],
                rely: ex(if cfg.weakened {
                    "true"
                } else {
                    "prog.t != undef && x' != prog.t && prog.t' = prog.t => d'(prog.t) = d(prog.t)"
                }),
                check: Box::new(move |tr, t_at| {
                    let suffix = Interval::new(t_at, tr.len() - 1);
                    let inner = posvals(tr, suffix, &inner)?;
                    let outer = posvals(tr, tr.whole(), &outer)?;
                    Ok(inner.is_subset(&outer) && post(tr)?)
                }),
            }
        }
    }
}

fn initial_states(setup: &Setup, law: Law) -> Vec<State> {
    let mut out = vec![State::new()];
    for (loc, dom) in &setup.locations {
        out = out
            .into_iter()
            .flat_map(|s| {
                dom.iter().map(move |v| match loc {
                    Location::Entry(map, _) if s.get(&VarName::shared(map)).is_none() => {
                        let mut s = s.clone();
                        s.set(VarName::shared(map), Value::map([(Value::Int(0), Value::Undef), (Value::Int(1), Value::Undef)]));
                        loc.set(&s, v.clone())
                    }
                    _ => loc.set(&s, v.clone()),
                })
            })
            .collect();
    }
    let locals: &[&str] = match law {
        Law::PosvalsAssign => &["a"],
        Law::SingleReference => &["a", "c"],
        Law::PreAssignment => &["t", "r"],
    };
    for s in &mut out {
        for l in locals {
            s.set(local(l), Value::Undef);
        }
    }
    out
}

/// Enumerates every rely-respecting environment of at most
/// `cfg.env_steps` steps and every placement of the program among them.
pub fn validate_law(law: Law, cfg: LawConfig) -> Result<LawReport> {
    if cfg.values == 0 || cfg.values > MAX_LAW_VALUES {
        return Err(ExplorerError::Config(format!(
            "value domain size must be 1..={MAX_LAW_VALUES}, got {}",
            cfg.values
        )));
    }
    if cfg.env_steps > MAX_ENV_STEPS {
        return Err(ExplorerError::Config(format!(
            "at most {MAX_ENV_STEPS} environment steps, got {}",
            cfg.env_steps
        )));
    }
    let setup = setup(law, &cfg);
    let mut report = LawReport {
        law,
        config: cfg,
        status: Status::Pass,
        traces: 0,
        rejected_env_steps: 0,
        counterexample: None,
    };
    for s in initial_states(&setup, law) {
        let mut tr = Trace::new(s);
        search(&setup, &mut tr, 0, 0, None, &cfg, &mut report)?;
        if report.counterexample.is_some() {
            report.status = Status::Fail;
            break;
        }
    }
    Ok(report)
}

fn search(
    setup: &Setup,
    tr: &mut Trace,
    pc: usize,
    env: usize,
    t_at: Option<usize>,
    cfg: &LawConfig,
    report: &mut LawReport,
) -> Result<()> {
    if report.counterexample.is_some() {
        return Ok(());
    }
    let s = tr.last().clone();
    if pc == setup.program.len() {
        // The command may return now or after further environment steps.
        report.traces += 1;
        if !(setup.check)(tr, t_at.unwrap_or(0))? {
            report.counterexample = Some(tr.clone());
            return Ok(());
        }
    } else {
        let (name, action) = &setup.program[pc];
        let mut ext = tr.clone();
        ext.push(StepLabel::new("prog", *name), action(&s)?);
        let t_at = t_at.or((pc == 0).then_some(ext.len() - 1));
        search(setup, &mut ext, pc + 1, env, t_at, cfg, report)?;
    }

    if env == cfg.env_steps {
        return Ok(());
    }
    for (loc, dom) in &setup.locations {
        let old = loc.get(&s);
        for v in dom.iter().filter(|v| **v != old) {
            let next = loc.set(&s, v.clone());
            if !check_relation(&setup.rely, &s, &next)? {
                report.rejected_env_steps += 1;
                continue;
            }
            let mut ext = tr.clone();
            ext.push(StepLabel::new("env", loc.describe(v)), next);
            search(setup, &mut ext, pc, env + 1, t_at, cfg, report)?;
        }
    }
    Ok(())
}
