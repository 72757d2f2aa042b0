// SPDX-License-Identifier: Apache-2.0

//! Implication properties over published signals.
//!
//! ```text
//! property p;
//!   (impl.e1 == spec.e1) && (impl.e2 == spec.e2) |-> impl.expdiff == spec.expdiff;
//! endproperty
//! assert property(p);
//! ```

mod ast;
mod corpus;
mod eval;
mod parser;

pub use ast::{Atom, Directive, Expr, Property, PropertyFile, Role, SignalRef};
pub use corpus::{corpus, CORPUS_NAMES};
pub use eval::{
    compile_expr, elaborate, eval_expr, eval_property, observed_stage, CompiledDirective, CompiledExpr,
    CompiledProperty, Elaborated, Models, Namespaces, Outcome,
};
pub use parser::{parse, parse_expr};
