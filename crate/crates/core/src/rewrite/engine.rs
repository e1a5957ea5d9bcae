//! Bounded evolution: full traces for inspection and a lean runner for censuses.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::machine::{Machine, Mode};
use super::{apply_all, step, step_count, Ordering, Redex, Strategy};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Limits {
    pub max_steps: u64,
    pub max_size: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_steps: 10_000,
            max_size: 1_000_000,
        }
    }
}

impl Limits {
    pub fn steps(max_steps: u64) -> Limits {
        Limits {
            max_steps,
            ..Limits::default()
        }
    }
}

/// How an evolution ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Outcome {
    /// Reached a term without redexes after `steps` steps.
    FixedPoint { steps: u64 },
    /// A term recurred: the term at step `start + period` equals the one at step `start`.
    Cycle { start: u64, period: u64 },
    StepLimit,
    SizeLimit,
}

impl Outcome {
    pub fn is_fixed_point(&self) -> bool {
        matches!(self, Outcome::FixedPoint { .. })
    }

    /// Stopped by a limit rather than by the dynamics.
    pub fn is_truncated(&self) -> bool {
        matches!(self, Outcome::StepLimit | Outcome::SizeLimit)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::FixedPoint { .. } => "fixedPoint",
            Outcome::Cycle { .. } => "cycle",
            Outcome::StepLimit => "stepLimit",
            Outcome::SizeLimit => "sizeLimit",
        }
    }
}

/// One complete evolution. `terms[i + 1]` is `terms[i]` with `events[i]` applied.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub strategy: Strategy,
    pub terms: Vec<Term>,
    pub events: Vec<Vec<Redex>>,
    pub sizes: Vec<u64>,
    pub outcome: Outcome,
}

impl Trace {
    pub fn steps(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn last(&self) -> &Term {
        self.terms.last().expect("a trace holds its initial term")
    }

    pub fn max_size(&self) -> u64 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Re-applies every recorded event and checks that each step reproduces the next term.
    pub fn replays(&self) -> bool {
        self.terms.windows(2).zip(&self.events).all(|(w, ev)| {
            !ev.is_empty() && apply_all(&w[0], ev).is_ok_and(|t| t == w[1])
        })
    }
}

/// Evolves `t` until it reaches a fixed point, repeats a term, or trips a limit.
pub fn evolve(t: &Term, strategy: Strategy, limits: Limits) -> Trace {
    let mut trace = Trace {
        strategy,
        terms: vec![t.clone()],
        events: Vec::new(),
        sizes: vec![t.size()],
        outcome: Outcome::StepLimit,
    };
    if t.size() > limits.max_size {
        trace.outcome = Outcome::SizeLimit;
        return trace;
    }
    let mut seen: HashMap<u64, Vec<u64>> = HashMap::new();
    seen.entry(t.structural_hash()).or_default().push(0);
    let mut cur = t.clone();
    loop {
        if cur.is_normal() {
            trace.outcome = Outcome::FixedPoint {
                steps: trace.steps(),
            };
            return trace;
        }
        if trace.steps() >= limits.max_steps {
            trace.outcome = Outcome::StepLimit;
            return trace;
        }
        let (next, events) = step(&cur, strategy);
        let index = trace.steps() + 1;
        trace.sizes.push(next.size());
        trace.terms.push(next.clone());
        trace.events.push(events);
        if next.size() > limits.max_size {
            trace.outcome = Outcome::SizeLimit;
            return trace;
        }
        let bucket = seen.entry(next.structural_hash()).or_default();
        if let Some(&start) = bucket.iter().find(|&&i| trace.terms[i as usize] == next) {
            trace.outcome = Outcome::Cycle {
                start,
                period: index - start,
            };
            return trace;
        }
        bucket.push(index);
        cur = next;
    }
}

/// Summary of an evolution without the intermediate terms.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunStats {
    pub outcome: Outcome,
    /// Steps performed.
    pub steps: u64,
    /// Largest size seen, initial term included.
    pub max_size: u64,
    pub final_term: Term,
    /// Total redexes rewritten (exceeds `steps` for parallel strategies and budgets above 1).
    pub events: u64,
}

/// Same dynamics as [`evolve`] with constant extra memory. Repetition is found with Brent's
/// method, so a cycle is reported up to one period late and `start` is the exact first index.
pub fn run(t: &Term, strategy: Strategy, limits: Limits) -> RunStats {
    let mut stats = RunStats {
        outcome: Outcome::StepLimit,
        steps: 0,
        max_size: t.size(),
        final_term: t.clone(),
        events: 0,
    };
    if t.size() > limits.max_size {
        stats.outcome = Outcome::SizeLimit;
        return stats;
    }
    if let Strategy::Scheme { ordering, budget: 1 } = strategy {
        let mode = match ordering {
            Ordering::LeftmostOutermost => Some(Mode::Outermost),
            Ordering::LeftmostInnermost => Some(Mode::Innermost),
            _ => None,
        };
        if let Some(mode) = mode {
            return run_machine(t, mode, strategy, limits, stats);
        }
    }
    let mut cur = t.clone();
    // Brent: compare against a checkpoint refreshed at powers of two.
    let mut checkpoint = t.clone();
    let mut power: u64 = 1;
    let mut lam: u64 = 0;
    loop {
        if cur.is_normal() {
            stats.outcome = Outcome::FixedPoint { steps: stats.steps };
            break;
        }
        if stats.steps >= limits.max_steps {
            stats.outcome = Outcome::StepLimit;
            break;
        }
        let (next, n) = step_count(&cur, strategy);
        stats.steps += 1;
        stats.events += n;
        stats.max_size = stats.max_size.max(next.size());
        cur = next;
        if cur.size() > limits.max_size {
            stats.outcome = Outcome::SizeLimit;
            break;
        }
        lam += 1;
        if cur == checkpoint {
            stats.outcome = Outcome::Cycle {
                start: cycle_start(t, strategy, lam),
                period: lam,
            };
            break;
        }
        if lam == power {
            checkpoint = cur.clone();
            power *= 2;
            lam = 0;
        }
    }
    stats.final_term = cur;
    stats
}

fn run_machine(t: &Term, mode: Mode, strategy: Strategy, limits: Limits, mut stats: RunStats) -> RunStats {
    let mut m = Machine::new(t, mode);
    let mut checkpoint = t.clone();
    let mut power: u64 = 1;
    let mut lam: u64 = 0;
    loop {
        if stats.steps >= limits.max_steps {
            // the step limit only counts if there is still something to do
            if m.term().is_normal() {
                stats.outcome = Outcome::FixedPoint { steps: stats.steps };
            } else {
                stats.outcome = Outcome::StepLimit;
            }
            break;
        }
        if !m.step() {
            stats.outcome = Outcome::FixedPoint { steps: stats.steps };
            break;
        }
        stats.steps += 1;
        stats.events += 1;
        stats.max_size = stats.max_size.max(m.size());
        if m.size() > limits.max_size {
            stats.outcome = Outcome::SizeLimit;
            break;
        }
        lam += 1;
        if m.size() == checkpoint.size() && m.term() == checkpoint {
            stats.outcome = Outcome::Cycle {
                start: cycle_start(t, strategy, lam),
                period: lam,
            };
            break;
        }
        if lam == power {
            checkpoint = m.term();
            power *= 2;
            lam = 0;
        }
    }
    stats.final_term = m.term();
    stats
}

/// First index `mu` with `x_mu = x_{mu + period}`.
fn cycle_start(t: &Term, strategy: Strategy, period: u64) -> u64 {
    let advance = |x: &Term| step_count(x, strategy).0;
    let mut tortoise = t.clone();
    let mut hare = t.clone();
    for _ in 0..period {
        hare = advance(&hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = advance(&tortoise);
        hare = advance(&hare);
        mu += 1;
    }
    mu
}
