// SPDX-License-Identifier: Apache-2.0

//! Equivalence checking toolkit for floating-point adder datapaths.
//!
//! A bit-accurate reference adder ([`float`]) and a two-stage implementation
//! adder ([`adder`]) publish the same named signals. Implication properties
//! written in a small assertion language ([`property`]) are checked over their
//! lockstep or assume-constrained execution by enumeration ([`checker`]).
//! Catalogued faults ([`fault`]) mutate the implementation, failures are
//! localized to a stage, and [`coverage`] measures which datapath decisions the
//! stimulus reached and the properties observe.

pub mod adder;
pub mod campaign;
pub mod checker;
pub mod coverage;
pub mod error;
pub mod fault;
pub mod float;
pub mod oracle;
pub mod property;
pub mod sampling;
pub mod signals;
pub mod stages;

pub use error::{Error, Result};
