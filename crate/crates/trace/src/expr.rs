//! Expression and relation syntax.
//!
//! A single AST serves both roles: an expression is evaluated over one state,
//! a relation over a (before, after) pair where primed references `x'` read
//! the after state. Set-valued `[e]` (possible values) and `[[e]]` (possible
//! evaluations) terms additionally need an operation interval.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! e => e            implication (right associative)
//! e || e            disjunction
//! e && e            conjunction
//! e = e | e != e | e < e | e <= e | e in e
//! e + e | e - e
//! !e                boolean negation, or flip of a two-valued index
//! f(e, ...)         map application; several arguments form a tuple key
//! x | x' | p.x | 3 | true | P0 | S1 | rd | wr | torn | (e, e) | [e] | [[e]]
//! dom(e) | card(e)  built-ins on maps and sets
//! ```

use std::fmt;

use crate::state::VarName;
use crate::value::Value;

/// Whether a reference reads the before (`x`) or after (`x'`) state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Time {
    Pre,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRef {
    pub var: VarName,
    pub time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Eq,
    Ne,
    Lt,
    Le,
    And,
    Or,
    Implies,
    In,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Implies => "=>",
            BinOp::In => "in",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Implies => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::In => 4,
            BinOp::Add | BinOp::Sub => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Key set of a map.
    Dom,
    /// Size of a set, map or tuple.
    Card,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Value),
    Var(VarRef),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Apply(Box<Expr>, Vec<Expr>),
    Tuple(Vec<Expr>),
    Call(Builtin, Box<Expr>),
    /// `[e]`: values of `e` in each state of the interval.
    Posvals(Box<Expr>),
    /// `[[e]]`: values of `e` with each variable occurrence sampled from any
    /// state of the interval independently.
    Evalvals(Box<Expr>),
}

impl Expr {
    pub fn int(i: i64) -> Expr {
        Expr::Const(Value::Int(i))
    }

    pub fn val(v: impl Into<Value>) -> Expr {
        Expr::Const(v.into())
    }

    /// Unprimed reference; `proc.x` names a local of `proc`.
    pub fn var(name: &str) -> Expr {
        Expr::Var(VarRef {
            var: VarName::parse(name),
            time: Time::Pre,
        })
    }

    /// Primed (after-state) reference.
    pub fn post(name: &str) -> Expr {
        Expr::Var(VarRef {
            var: VarName::parse(name),
            time: Time::Post,
        })
    }

    pub fn tuple(items: Vec<Expr>) -> Expr {
        Expr::Tuple(items)
    }

    pub fn posvals(e: Expr) -> Expr {
        Expr::Posvals(Box::new(e))
    }

    pub fn evalvals(e: Expr) -> Expr {
        Expr::Evalvals(Box::new(e))
    }

    fn bin(self, op: BinOp, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(self), Box::new(rhs))
    }

    pub fn plus(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Add, rhs)
    }

    pub fn minus(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Sub, rhs)
    }

    pub fn equals(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Eq, rhs)
    }

    pub fn differs(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Ne, rhs)
    }

    pub fn less(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Lt, rhs)
    }

    pub fn at_most(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Le, rhs)
    }

    pub fn and(self, rhs: Expr) -> Expr {
        self.bin(BinOp::And, rhs)
    }

    pub fn or(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Or, rhs)
    }

    pub fn implies(self, rhs: Expr) -> Expr {
        self.bin(BinOp::Implies, rhs)
    }

    pub fn member_of(self, set: Expr) -> Expr {
        self.bin(BinOp::In, set)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Expr {
        Expr::Not(Box::new(self))
    }

    pub fn apply(self, args: Vec<Expr>) -> Expr {
        Expr::Apply(Box::new(self), args)
    }

    /// Number of variable occurrences, counting each syntactic reference.
    pub fn occurrences(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| {
            if matches!(e, Expr::Var(_)) {
                n += 1;
            }
        });
        n
    }

    /// Whether any reference is primed.
    pub fn mentions_post(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Expr::Var(r) = e {
                found |= r.time == Time::Post;
            }
        });
        found
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self {
            Expr::Const(_) | Expr::Var(_) => {}
            Expr::Not(e) | Expr::Call(_, e) | Expr::Posvals(e) | Expr::Evalvals(e) => e.visit(f),
            Expr::Bin(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Apply(g, args) => {
                g.visit(f);
                args.iter().for_each(|a| a.visit(f));
            }
            Expr::Tuple(items) => items.iter().for_each(|a| a.visit(f)),
        }
    }

    /// Replaces every reference to `from` (either time) by `to`, keeping the
    /// reference's time. This is the `e[t/v]` substitution of variable names.
    pub fn rename(&self, from: &VarName, to: &VarName) -> Expr {
        match self {
            Expr::Var(r) if &r.var == from => Expr::Var(VarRef {
                var: to.clone(),
                time: r.time,
            }),
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Not(e) => Expr::Not(Box::new(e.rename(from, to))),
            Expr::Call(b, e) => Expr::Call(*b, Box::new(e.rename(from, to))),
            Expr::Posvals(e) => Expr::Posvals(Box::new(e.rename(from, to))),
            Expr::Evalvals(e) => Expr::Evalvals(Box::new(e.rename(from, to))),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.rename(from, to)), Box::new(b.rename(from, to))),
            Expr::Apply(g, args) => Expr::Apply(
                Box::new(g.rename(from, to)),
                args.iter().map(|a| a.rename(from, to)).collect(),
            ),
            Expr::Tuple(items) => Expr::Tuple(items.iter().map(|a| a.rename(from, to)).collect()),
        }
    }

    /// The same expression with every reference primed.
    pub fn primed(&self) -> Expr {
        match self {
            Expr::Var(r) => Expr::Var(VarRef {
                var: r.var.clone(),
                time: Time::Post,
            }),
            Expr::Const(_) => self.clone(),
            Expr::Not(e) => Expr::Not(Box::new(e.primed())),
            Expr::Call(b, e) => Expr::Call(*b, Box::new(e.primed())),
            Expr::Posvals(e) => Expr::Posvals(Box::new(e.primed())),
            Expr::Evalvals(e) => Expr::Evalvals(Box::new(e.primed())),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.primed()), Box::new(b.primed())),
            Expr::Apply(g, args) => Expr::Apply(Box::new(g.primed()), args.iter().map(Expr::primed).collect()),
            Expr::Tuple(items) => Expr::Tuple(items.iter().map(Expr::primed).collect()),
        }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.var)?;
        if self.time == Time::Post {
            f.write_str("'")?;
        }
        Ok(())
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl Expr {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Var(r) => write!(f, "{r}"),
            Expr::Not(e) => {
                f.write_str("!")?;
                e.fmt_prec(f, 6)
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                let paren = p < ctx;
                if paren {
                    f.write_str("(")?;
                }
                // Implication associates to the right, comparisons not at all,
                // everything else to the left.
                let (lp, rp) = match op {
                    BinOp::Implies => (p + 1, p),
                    BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::In => (p + 1, p + 1),
                    _ => (p, p + 1),
                };
                a.fmt_prec(f, lp)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f, rp)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Expr::Apply(g, args) => {
                g.fmt_prec(f, 7)?;
                f.write_str("(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Expr::Tuple(items) => {
                f.write_str("(")?;
                write_list(f, items)?;
                f.write_str(")")
            }
            Expr::Call(b, e) => {
                let name = match b {
                    Builtin::Dom => "dom",
                    Builtin::Card => "card",
                };
                write!(f, "{name}({e})")
            }
            Expr::Posvals(e) => write!(f, "[{e}]"),
            Expr::Evalvals(e) => write!(f, "[[{e}]]"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
