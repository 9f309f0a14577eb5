//! Recursive-descent parser for [`Expr`] and a reader for rendered [`Value`]s.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use acm::{Flag, PairIndex, SlotIndex};

use crate::error::{Result, TraceError};
use crate::expr::{BinOp, Builtin, Expr, Time, VarRef};
use crate::state::VarName;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
}

const SYMBOLS: &[(&str, &str)] = &[
    ("=>", "=>"),
    ("⇒", "=>"),
    ("||", "||"),
    ("∨", "||"),
    ("&&", "&&"),
    ("∧", "&&"),
    ("!=", "!="),
    ("≠", "!="),
    ("<=", "<="),
    ("≤", "<="),
    ("∈", "in"),
    ("¬", "!"),
    ("=", "="),
    ("<", "<"),
    ("+", "+"),
    ("-", "-"),
    ("!", "!"),
    ("(", "("),
    (")", ")"),
    ("[", "["),
    ("]", "]"),
    (",", ","),
    ("'", "'"),
    ("′", "'"),
];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut i = 0;
    let bytes = src.as_bytes();
    'outer: while i < src.len() {
        let c = src[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < src.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse::<u64>().map_err(|_| TraceError::Parse {
                pos: start,
                msg: "integer literal out of range".into(),
            })?;
            out.push((start, Tok::Int(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < src.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'.') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
            continue;
        }
        for (text, sym) in SYMBOLS {
            if src[i..].starts_with(text) {
                out.push((i, Tok::Sym(sym)));
                i += text.len();
                continue 'outer;
            }
        }
        return Err(TraceError::Parse {
            pos: i,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    src: &'s str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.src.len(), |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(TraceError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn peek_binop(&self) -> Option<BinOp> {
        match self.peek()? {
            Tok::Sym(s) => Some(match *s {
                "=>" => BinOp::Implies,
                "||" => BinOp::Or,
                "&&" => BinOp::And,
                "=" => BinOp::Eq,
                "!=" => BinOp::Ne,
                "<" => BinOp::Lt,
                "<=" => BinOp::Le,
                "in" => BinOp::In,
                "+" => BinOp::Add,
                "-" => BinOp::Sub,
                _ => return None,
            }),
            Tok::Ident(s) if s == "in" => Some(BinOp::In),
            _ => None,
        }
    }

    /// Precedence climbing; `min` is the loosest operator accepted.
    fn binary(&mut self, min: u8) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek_binop() {
            let p = op.precedence();
            if p < min {
                break;
            }
            self.at += 1;
            let next = match op {
                BinOp::Implies => p,
                _ => p + 1,
            };
            let rhs = self.binary(next)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
            if p == 4 && self.peek_binop().is_some_and(|o| o.precedence() == 4) {
                return self.err("comparisons do not chain; add parentheses");
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if matches!(self.peek(), Some(Tok::Sym("-"))) && matches!(self.toks.get(self.at + 1), Some((_, Tok::Int(_)))) {
            self.at += 1;
            let Some((_, Tok::Int(n))) = self.toks.get(self.at).cloned() else {
                unreachable!()
            };
            self.at += 1;
            let v = 0i64.checked_sub_unsigned(n).ok_or_else(|| TraceError::Parse {
                pos: self.pos(),
                msg: "integer literal out of range".into(),
            })?;
            return self.postfix(Expr::int(v));
        }
        let e = self.primary()?;
        self.postfix(e)
    }

    fn postfix(&mut self, mut e: Expr) -> Result<Expr> {
        while self.eat("(") {
            let args = self.list(")")?;
            if args.is_empty() {
                return self.err("application needs at least one argument");
            }
            e = Expr::Apply(Box::new(e), args);
        }
        Ok(e)
    }

    fn list(&mut self, close: &str) -> Result<Vec<Expr>> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        loop {
            items.push(self.binary(0)?);
            if self.eat(close) {
                return Ok(items);
            }
            self.expect(",")?;
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Int(n) => match i64::try_from(n) {
                Ok(v) => Ok(Expr::int(v)),
                Err(_) => Err(TraceError::Parse {
                    pos: start,
                    msg: "integer literal out of range".into(),
                }),
            },
            Tok::Sym("(") => {
                let mut items = self.list(")")?;
                match items.len() {
                    0 => self.err("empty parentheses"),
                    1 => Ok(items.pop().unwrap()),
                    _ => Ok(Expr::Tuple(items)),
                }
            }
            Tok::Sym("[") => {
                // `[[` with no gap opens a possible-evaluations term.
                let adjacent = matches!(self.toks.get(self.at), Some((p, Tok::Sym("["))) if *p == start + 1);
                if adjacent {
                    self.at += 1;
                    let inner = self.binary(0)?;
                    let close = self.pos();
                    self.expect("]")?;
                    if !matches!(self.toks.get(self.at), Some((p, Tok::Sym("]"))) if *p == close + 1) {
                        return self.err("expected `]]`");
                    }
                    self.at += 1;
                    Ok(Expr::Evalvals(Box::new(inner)))
                } else {
                    let inner = self.binary(0)?;
                    self.expect("]")?;
                    Ok(Expr::Posvals(Box::new(inner)))
                }
            }
            Tok::Ident(name) => self.ident(name, start),
            Tok::Sym(s) => Err(TraceError::Parse {
                pos: start,
                msg: format!("unexpected `{s}`"),
            }),
        }
    }

    fn ident(&mut self, name: String, start: usize) -> Result<Expr> {
        if let Some(v) = keyword_value(&name) {
            return Ok(Expr::Const(v));
        }
        let builtin = match name.as_str() {
            "dom" => Some(Builtin::Dom),
            "card" => Some(Builtin::Card),
            _ => None,
        };
        if let Some(b) = builtin {
            self.expect("(")?;
            let arg = self.binary(0)?;
            self.expect(")")?;
            return Ok(Expr::Call(b, Box::new(arg)));
        }
        if name == "in" || name.ends_with('.') || name.starts_with('.') || name.matches('.').count() > 1 {
            return Err(TraceError::Parse {
                pos: start,
                msg: format!("bad identifier `{name}`"),
            });
        }
        let time = if self.eat("'") { Time::Post } else { Time::Pre };
        Ok(Expr::Var(VarRef {
            var: VarName::parse(&name),
            time,
        }))
    }
}

fn keyword_value(word: &str) -> Option<Value> {
    Some(match word {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        "P0" => Value::Pair(PairIndex::P0),
        "P1" => Value::Pair(PairIndex::P1),
        "S0" => Value::Slot(SlotIndex::S0),
        "S1" => Value::Slot(SlotIndex::S1),
        "rd" => Value::Flag(Flag::Rd),
        "wr" => Value::Flag(Flag::Wr),
        "torn" => Value::Torn,
        "undef" => Value::Undef,
        _ => return None,
    })
}

/// Parses an expression or relation.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        src,
    };
    let e = p.binary(0)?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl FromStr for Expr {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Expr> {
        parse_expr(s)
    }
}

struct ValueReader<'s> {
    src: &'s str,
    at: usize,
}

impl ValueReader<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(TraceError::Parse {
            pos: self.at,
            msg: msg.to_string(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.at..]
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.at += s.len();
            true
        } else {
            false
        }
    }

    fn seq(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> Result<()>) -> Result<()> {
        if self.eat(close) {
            return Ok(());
        }
        loop {
            item(self)?;
            if self.eat(close) {
                return Ok(());
            }
            if !self.eat(",") {
                return self.err("expected `,`");
            }
        }
    }

    fn value(&mut self) -> Result<Value> {
        if self.eat("(") {
            let mut items = Vec::new();
            self.seq(")", |r| {
                items.push(r.value()?);
                Ok(())
            })?;
            return Ok(Value::Tuple(items));
        }
        if self.eat("#{") {
            let mut items = BTreeSet::new();
            self.seq("}", |r| {
                items.insert(r.value()?);
                Ok(())
            })?;
            return Ok(Value::Set(items.into()));
        }
        if self.eat("{") {
            let mut entries = BTreeMap::new();
            self.seq("}", |r| {
                let k = r.value()?;
                if !r.eat(":") {
                    return r.err("expected `:`");
                }
                let v = r.value()?;
                entries.insert(k, v);
                Ok(())
            })?;
            return Ok(Value::Map(entries.into()));
        }
        let end = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .map_or(self.src.len(), |n| self.at + n);
        let word = &self.src[self.at..end];
        if word.is_empty() {
            return self.err("expected a value");
        }
        let v = match keyword_value(word) {
            Some(v) => v,
            None => match word.parse::<i64>() {
                Ok(i) => Value::Int(i),
                Err(_) => return self.err("expected a value"),
            },
        };
        self.at = end;
        Ok(v)
    }
}

/// Parses the rendering produced by `Value`'s `Display`.
impl FromStr for Value {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Value> {
        let mut r = ValueReader { src: s, at: 0 };
        let v = r.value()?;
        if r.at != s.len() {
            return r.err("trailing input");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) {
        let e = parse_expr(src).unwrap();
        assert_eq!(e.to_string(), src, "display of {e:?}");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn canonical_forms_roundtrip() {
        roundtrip("y + y");
        roundtrip("f = rd => b' = b");
        roundtrip("b' != b => b' = v");
        roundtrip("x' in [y]");
        roundtrip("[[d(x)]]");
        roundtrip("dsw'(t, sw'(t)) = dsw(t, sw(t))");
        roundtrip("(cpr, csr) != (cpw, !sw(cpw))");
        roundtrip("!(a = b)");
        roundtrip("reader.t = writer.cpw || a && b");
        roundtrip("(a => b) => c");
        roundtrip("a => b => c");
        roundtrip("x - (y - z)");
        roundtrip("x + -3");
        roundtrip("card(dom(dw)) = 4");
    }

    #[test]
    fn precedence() {
        let e = parse_expr("a = 1 || b = 2 && c").unwrap();
        let want = Expr::var("a")
            .equals(Expr::int(1))
            .or(Expr::var("b").equals(Expr::int(2)).and(Expr::var("c")));
        assert_eq!(e, want);
        assert_eq!(parse_expr("a - b - c").unwrap(), Expr::var("a").minus(Expr::var("b")).minus(Expr::var("c")));
    }

    #[test]
    fn unicode_operators() {
        assert_eq!(parse_expr("¬p").unwrap(), parse_expr("!p").unwrap());
        assert_eq!(parse_expr("x′ ∈ [y]").unwrap(), parse_expr("x' in [y]").unwrap());
        assert_eq!(parse_expr("a ⇒ b ∧ c ≠ d").unwrap(), parse_expr("a => b && c != d").unwrap());
    }

    #[test]
    fn nested_brackets_are_not_evalvals() {
        let e = parse_expr("[x in [y]]").unwrap();
        assert!(matches!(e, Expr::Posvals(_)));
        let e = parse_expr("[ [y] ]").unwrap();
        assert!(matches!(e, Expr::Posvals(ref inner) if matches!(**inner, Expr::Posvals(_))));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "a +", "(a", "a = b = c", "x @ y", "[[y]", "f()", "a..b"] {
            assert!(parse_expr(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn values_roundtrip() {
        let vals = [
            Value::Int(-4),
            Value::Bool(true),
            Value::pair_slot(PairIndex::P1, SlotIndex::S0),
            Value::map([(Value::Int(0), Value::Int(10)), (Value::Int(1), Value::Torn)]),
            Value::set([Value::Flag(Flag::Rd), Value::Flag(Flag::Wr)]),
            Value::Tuple(vec![]),
            Value::Undef,
        ];
        for v in vals {
            assert_eq!(v.to_string().parse::<Value>().unwrap(), v);
        }
        assert!("1,2".parse::<Value>().is_err());
        assert!("{1}".parse::<Value>().is_err());
    }
}
