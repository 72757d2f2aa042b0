// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::Serialize;

use super::ast::{Atom, Directive, Expr, Property, PropertyFile, Role};
use crate::error::{Error, Result};
use crate::float::FloatFormat;
use crate::signals::{ModelTrace, Namespace, Signal, SignalClass, SignalTrace};
use crate::stages::Stage;

/// Result of one implication on one trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Vacuous,
}

fn atom_value(atom: &Atom, trace: &SignalTrace) -> Result<u64> {
    match atom {
        Atom::Literal(v) => Ok(*v),
        Atom::Signal(r) => trace.get(r.ns, r.signal).map(|b| b.value).ok_or_else(|| {
            Error::Evaluation(format!("signal `{r}` is not present in the trace"))
        }),
    }
}

/// Evaluates an expression directly on a trace.
pub fn eval_expr(expr: &Expr, trace: &SignalTrace) -> Result<bool> {
    Ok(match expr {
        Expr::True => true,
        Expr::Eq(a, b) => atom_value(a, trace)? == atom_value(b, trace)?,
        Expr::And(terms) => {
            let mut all = true;
            for t in terms {
                all &= eval_expr(t, trace)?;
            }
            all
        }
        Expr::Paren(inner) => eval_expr(inner, trace)?,
    })
}

/// Vacuous iff the antecedent is false; otherwise pass or fail on the consequent.
pub fn eval_property(p: &Property, trace: &SignalTrace) -> Result<Outcome> {
    for r in p.antecedent.signal_refs().into_iter().chain(p.consequent.signal_refs()) {
        if trace.get(r.ns, r.signal).is_none() {
            return Err(Error::Evaluation(format!(
                "property `{}` references `{r}`, which is not present in the trace",
                p.name
            )));
        }
    }
    Ok(if !eval_expr(&p.antecedent, trace)? {
        Outcome::Vacuous
    } else if eval_expr(&p.consequent, trace)? {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

/// The pair of model traces a compiled expression reads from.
#[derive(Clone, Copy)]
pub struct Models<'a> {
    pub imp: &'a ModelTrace,
    pub spec: &'a ModelTrace,
}

impl Models<'_> {
    #[inline]
    fn get(&self, ns: Namespace, s: Signal) -> u64 {
        match ns {
            Namespace::Impl => self.imp.raw(s),
            Namespace::Spec => self.spec.raw(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CAtom {
    Sig(Namespace, Signal),
    Lit(u64),
}

/// Expression with resolved, width-checked operands; parentheses flattened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledExpr {
    terms: Vec<(CAtom, CAtom)>,
}

impl CompiledExpr {
    #[inline]
    pub fn eval(&self, m: Models<'_>) -> bool {
        self.terms.iter().all(|(a, b)| {
            let v = |x: &CAtom| match *x {
                CAtom::Sig(ns, s) => m.get(ns, s),
                CAtom::Lit(v) => v,
            };
            v(a) == v(b)
        })
    }
}

/// Which namespaces evaluation will supply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Namespaces {
    Both,
    ImplOnly,
}

/// Resolves an expression against the dictionary for `fmt`.
pub fn compile_expr(expr: &Expr, fmt: FloatFormat, namespaces: Namespaces, context: &str) -> Result<CompiledExpr> {
    let err = |message: String| Error::Elaboration {
        property: context.to_string(),
        message,
    };
    let mut terms = Vec::new();
    for c in expr.conjuncts() {
        let Expr::Eq(a, b) = c else {
            continue;
        };
        let resolve = |atom: &Atom| -> Result<(CAtom, Option<u32>)> {
            match atom {
                Atom::Literal(v) => Ok((CAtom::Lit(*v), None)),
                Atom::Signal(r) => {
                    if r.ns == Namespace::Spec && namespaces == Namespaces::ImplOnly {
                        return Err(err(format!(
                            "`{r}` refers to the reference model, which is absent in standalone mode"
                        )));
                    }
                    Ok((CAtom::Sig(r.ns, r.signal), Some(r.signal.width(fmt))))
                }
            }
        };
        let (ca, wa) = resolve(a)?;
        let (cb, wb) = resolve(b)?;
        match (wa, wb, ca, cb) {
            (Some(x), Some(y), _, _) if x != y => {
                return Err(err(format!("cannot compare `{a}` ({x} bits) with `{b}` ({y} bits)")));
            }
            (Some(w), None, _, CAtom::Lit(v)) | (None, Some(w), CAtom::Lit(v), _) => {
                if w < 64 && v >> w != 0 {
                    let sig = if wa.is_some() { a } else { b };
                    return Err(err(format!("literal {v} does not fit the {w}-bit signal `{sig}`")));
                }
            }
            _ => {}
        }
        terms.push((ca, cb));
    }
    Ok(CompiledExpr { terms })
}

/// Stage whose signals a property's consequent observes: add-round if it names
/// any add-round signal, alignment if it names alignment signals only.
pub fn observed_stage(p: &Property) -> Option<Stage> {
    let mut stages = p.consequent.support().into_iter().filter_map(|s| match s.class() {
        SignalClass::Stage(stage) => Some(stage),
        SignalClass::Input => None,
    });
    let first = stages.next()?;
    Some(stages.fold(first, |acc, s| if s == Stage::AddRound { s } else { acc }))
}

#[derive(Clone, Debug)]
pub struct CompiledProperty {
    pub property: Property,
    pub antecedent: CompiledExpr,
    pub consequent: CompiledExpr,
    pub observes: Option<Stage>,
}

impl CompiledProperty {
    #[inline]
    pub fn eval(&self, m: Models<'_>) -> Outcome {
        if !self.antecedent.eval(m) {
            Outcome::Vacuous
        } else if self.consequent.eval(m) {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// Signals named anywhere in the property.
    pub fn support(&self) -> BTreeSet<Signal> {
        let mut s = self.property.antecedent.support();
        s.extend(self.property.consequent.support());
        s
    }
}

#[derive(Clone, Debug)]
pub struct CompiledDirective {
    pub directive: Directive,
    pub property: CompiledProperty,
}

impl CompiledDirective {
    pub fn name(&self) -> &str {
        self.directive.name()
    }

    pub fn role(&self) -> Role {
        self.directive.role
    }
}

/// All directives of a property file, resolved and ready for evaluation.
#[derive(Clone, Debug)]
pub struct Elaborated {
    pub fmt: FloatFormat,
    pub namespaces: Namespaces,
    pub directives: Vec<CompiledDirective>,
}

impl Elaborated {
    pub fn of_role(&self, role: Role) -> impl Iterator<Item = (usize, &CompiledDirective)> {
        self.directives
            .iter()
            .enumerate()
            .filter(move |(_, d)| d.role() == role)
    }
}

pub fn elaborate(file: &PropertyFile, fmt: FloatFormat, namespaces: Namespaces) -> Result<Elaborated> {
    let mut directives = Vec::with_capacity(file.directives.len());
    for d in &file.directives {
        let p = file.property(&d.target).ok_or_else(|| Error::Elaboration {
            property: d.target.clone(),
            message: "directive targets an undeclared property".into(),
        })?;
        directives.push(CompiledDirective {
            directive: d.clone(),
            property: CompiledProperty {
                property: p.clone(),
                antecedent: compile_expr(&p.antecedent, fmt, namespaces, &p.name)?,
                consequent: compile_expr(&p.consequent, fmt, namespaces, &p.name)?,
                observes: observed_stage(p),
            },
        });
    }
    Ok(Elaborated {
        fmt,
        namespaces,
        directives,
    })
}
