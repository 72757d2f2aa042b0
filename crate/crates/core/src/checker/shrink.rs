// SPDX-License-Identifier: Apache-2.0

//! Greedy counterexample minimization over primary inputs.

use super::{Checker, Counterexample, Stimulus};
use crate::error::Result;
use crate::signals::Namespace;

#[derive(Clone, Copy)]
enum Target {
    Both,
    One(Namespace),
}

fn apply(s: Stimulus, target: Target, field: usize, value: u64) -> Stimulus {
    match target {
        Target::Both => s
            .with_field(Namespace::Impl, field, value)
            .with_field(Namespace::Spec, field, value),
        Target::One(ns) => s.with_field(ns, field, value),
    }
}

/// Values between `v` and `goal` to try, nearest to the goal first.
fn candidates(v: u64, goal: u64) -> Vec<u64> {
    let mut out = vec![goal];
    let mid = if v > goal { goal + (v - goal) / 2 } else { goal - (goal - v) / 2 };
    let step = if v > goal { v - 1 } else { v + 1 };
    for c in [mid, step] {
        if c != v && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

impl Checker<'_> {
    /// Minimizes a counterexample of `directive` one field at a time: signs
    /// toward 0, exponents toward the bias, mantissas toward 0. A candidate is
    /// kept only while it is admitted and still fails. Deterministic.
    pub fn shrink(&self, directive: usize, cex: &Counterexample) -> Result<Counterexample> {
        let bias = self.fmt().bias() as u64;
        let goal = |field: usize| if field % 3 == 1 { bias } else { 0 };
        let mut s = cex.stimulus;
        if !self.fails(directive, &s) {
            return Ok(cex.clone());
        }
        loop {
            let mut changed = false;
            for field in 0..6 {
                let targets: &[Target] = if self.space.tied[field] {
                    &[Target::Both]
                } else {
                    &[Target::Both, Target::One(Namespace::Impl), Target::One(Namespace::Spec)]
                };
                for &target in targets {
                    let (iv, sv) = (s.fields(Namespace::Impl)[field], s.fields(Namespace::Spec)[field]);
                    let v = match target {
                        Target::Both if iv != sv => continue,
                        Target::Both | Target::One(Namespace::Impl) => iv,
                        Target::One(Namespace::Spec) => sv,
                    };
                    if v == goal(field) {
                        continue;
                    }
                    for c in candidates(v, goal(field)) {
                        let next = apply(s, target, field, c);
                        if self.fails(directive, &next) {
                            s = next;
                            changed = true;
                            break;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if s == cex.stimulus {
            return Ok(cex.clone());
        }
        self.counterexample(directive, None, &s)
    }
}

#[cfg(test)]
mod tests {
    use super::candidates;

    #[test]
    fn candidate_order() {
        assert_eq!(candidates(7, 0), [0, 3, 6]);
        assert_eq!(candidates(1, 0), [0]);
        assert_eq!(candidates(2, 7), [7, 5, 3]);
    }
}
