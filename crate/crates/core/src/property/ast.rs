// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::signals::{Namespace, Signal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignalRef {
    pub ns: Namespace,
    pub signal: Signal,
}

impl fmt::Display for SignalRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.ns, self.signal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Signal(SignalRef),
    Literal(u64),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Signal(r) => r.fmt(f),
            Atom::Literal(v) => write!(f, "{v}"),
        }
    }
}

/// Boolean expression over signal equalities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The constant `1`.
    True,
    Eq(Atom, Atom),
    /// Two or more conjuncts.
    And(Vec<Expr>),
    Paren(Box<Expr>),
}

impl Expr {
    /// Every signal reference, in textual order.
    pub fn signal_refs(&self) -> Vec<SignalRef> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<SignalRef>) {
        match self {
            Expr::True => {}
            Expr::Eq(a, b) => {
                for atom in [a, b] {
                    if let Atom::Signal(r) = atom {
                        out.push(*r);
                    }
                }
            }
            Expr::And(terms) => terms.iter().for_each(|t| t.collect_refs(out)),
            Expr::Paren(inner) => inner.collect_refs(out),
        }
    }

    /// Dictionary signals referenced in either namespace.
    pub fn support(&self) -> BTreeSet<Signal> {
        self.signal_refs().into_iter().map(|r| r.signal).collect()
    }

    /// Top-level conjuncts with parentheses stripped.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        match self {
            Expr::And(terms) => terms.iter().flat_map(|t| t.conjuncts()).collect(),
            Expr::Paren(inner) => inner.conjuncts(),
            other => vec![other],
        }
    }

    pub fn is_constant_true(&self) -> bool {
        self.conjuncts().iter().all(|c| matches!(c, Expr::True))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::True => f.write_str("1"),
            Expr::Eq(a, b) => write!(f, "{a} == {b}"),
            Expr::And(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" && ")?;
                    }
                    t.fmt(f)?;
                }
                Ok(())
            }
            Expr::Paren(inner) => write!(f, "({inner})"),
        }
    }
}

/// Implication `antecedent |-> consequent` over a single evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Property {
    pub name: String,
    pub antecedent: Expr,
    pub consequent: Expr,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "property {};", self.name)?;
        writeln!(f, "  {}", self.antecedent)?;
        writeln!(f, "  |-> {};", self.consequent)?;
        write!(f, "endproperty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Assert,
    Assume,
    Cover,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Assert => "assert",
            Role::Assume => "assume",
            Role::Cover => "cover",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Directive {
    pub label: Option<String>,
    pub role: Role,
    pub target: String,
}

impl Directive {
    /// Report name: the label when present, otherwise the target property.
    pub fn name(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.target)
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            write!(f, "{label}: ")?;
        }
        write!(f, "{} property({});", self.role, self.target)
    }
}

/// A parsed property text: declarations and directives in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PropertyFile {
    pub properties: Vec<Property>,
    pub directives: Vec<Directive>,
}

impl PropertyFile {
    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn count(&self, role: Role) -> usize {
        self.directives.iter().filter(|d| d.role == role).count()
    }

    /// Concatenates two files; name clashes surface when the result is re-parsed or elaborated.
    pub fn extend(&mut self, other: PropertyFile) {
        self.properties.extend(other.properties);
        self.directives.extend(other.directives);
    }
}

impl fmt::Display for PropertyFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            writeln!(f, "{p}\n")?;
        }
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
