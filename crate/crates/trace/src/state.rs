use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::value::Value;

/// Who may write a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scope {
    Shared,
    /// Local to the named process.
    Local(Arc<str>),
}

/// A variable name. Locals render as `process.name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarName {
    scope: Scope,
    name: Arc<str>,
}

impl VarName {
    pub fn shared(name: &str) -> Self {
        VarName {
            scope: Scope::Shared,
            name: name.into(),
        }
    }

    pub fn local(process: &str, name: &str) -> Self {
        VarName {
            scope: Scope::Local(process.into()),
            name: name.into(),
        }
    }

    /// Parses `name` or `process.name`.
    pub fn parse(text: &str) -> Self {
        match text.split_once('.') {
            Some((proc, name)) => VarName::local(proc, name),
            None => VarName::shared(text),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn owner(&self) -> Option<&str> {
        match &self.scope {
            Scope::Shared => None,
            Scope::Local(p) => Some(p),
        }
    }

    pub fn is_shared(&self) -> bool {
        matches!(self.scope, Scope::Shared)
    }

    fn sort_key(&self) -> (&str, &str) {
        match &self.scope {
            Scope::Shared => (&self.name, ""),
            Scope::Local(p) => (p, &self.name),
        }
    }
}

/// Orders names the way they render, so states print sorted.
impl Ord for VarName {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a0, a1) = self.sort_key();
        let (b0, b1) = other.sort_key();
        // Compare as if rendered "a0.a1" (or "a0" for shared names).
        a0.cmp(b0)
            .then_with(|| match (self.is_shared(), other.is_shared()) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (false, false) => a1.cmp(b1),
            })
    }
}

impl PartialOrd for VarName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.scope {
            Scope::Shared => f.write_str(&self.name),
            Scope::Local(p) => write!(f, "{p}.{}", self.name),
        }
    }
}

/// A total binding of variables to values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct State {
    vars: BTreeMap<VarName, Value>,
}

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn get(&self, name: &VarName) -> Option<&Value> {
        self.vars.get(name)
    }

    pub fn set(&mut self, name: VarName, value: impl Into<Value>) {
        self.vars.insert(name, value.into());
    }

    /// Builder-style [`set`](Self::set) taking a `name` or `proc.name` string.
    pub fn with(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.set(VarName::parse(name), value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Value)> {
        self.vars.iter()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Names whose binding differs between `self` and `other`, including names
    /// bound in only one of them.
    pub fn changed_vars<'a>(&'a self, other: &'a State) -> Vec<&'a VarName> {
        let mut out: Vec<&VarName> = self
            .vars
            .iter()
            .filter(|(k, v)| other.vars.get(*k) != Some(*v))
            .map(|(k, _)| k)
            .collect();
        out.extend(other.vars.keys().filter(|k| !self.vars.contains_key(*k)));
        out
    }
}

impl FromIterator<(VarName, Value)> for State {
    fn from_iter<I: IntoIterator<Item = (VarName, Value)>>(iter: I) -> Self {
        State {
            vars: iter.into_iter().collect(),
        }
    }
}

/// Renders as space-separated `name=value` pairs in name order.
impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_sort_as_rendered() {
        let mut names = [
            VarName::local("writer", "v"),
            VarName::shared("lpw"),
            VarName::local("reader", "t"),
            VarName::shared("b"),
            VarName::shared("reader"),
        ];
        names.sort();
        let rendered: Vec<String> = names.iter().map(|n| n.to_string()).collect();
        let mut sorted = rendered.clone();
        sorted.sort();
        assert_eq!(rendered, sorted);
    }

    #[test]
    fn display_is_sorted_pairs() {
        let s = State::new().with("y", 3).with("reader.t", true).with("b", 1);
        assert_eq!(s.to_string(), "b=1 reader.t=true y=3");
    }

    #[test]
    fn changed_vars_reports_differences() {
        let a = State::new().with("x", 1).with("y", 2);
        let b = State::new().with("x", 1).with("y", 3).with("z", 0);
        let changed: Vec<String> = a.changed_vars(&b).iter().map(|n| n.to_string()).collect();
        assert_eq!(changed, vec!["y", "z"]);
    }
}
