//! Whole-population runs: every term of one size evolved under one strategy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::engine::{run, Limits, Outcome};
use super::Strategy;
use crate::enumerate::TermSpace;
use crate::notation::{print, Notation};
use crate::par;
use crate::term::Term;

/// Result for one term of a census.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusRecord {
    pub index: u64,
    pub term: String,
    pub outcome: Outcome,
    pub steps: u64,
    pub max_size: u64,
    pub final_size: u64,
}

/// Aggregated census. Histograms are keyed by step count and by final size over the
/// terms that reached a fixed point; everything else is presumed nonterminating.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusReport {
    pub total: u64,
    pub terminating: u64,
    pub halting_times: BTreeMap<u64, u64>,
    pub final_sizes: BTreeMap<u64, u64>,
    /// Largest intermediate size among terminating terms, with the first term reaching it.
    pub max_intermediate_size: u64,
    pub max_intermediate_term: Option<Term>,
    /// Longest halting time and every term achieving it, in enumeration order.
    pub champion_steps: u64,
    pub champions: Vec<Term>,
    /// Terms that tripped a limit or entered a cycle.
    pub nonterminating: Vec<Term>,
    /// How many of those hit a limit (the rest cycled, which proves nontermination).
    pub truncated: u64,
}

impl CensusReport {
    fn add(&mut self, term: Term, outcome: Outcome, steps: u64, max_size: u64, final_size: u64) {
        self.total += 1;
        match outcome {
            Outcome::FixedPoint { .. } => {
                self.terminating += 1;
                *self.halting_times.entry(steps).or_default() += 1;
                *self.final_sizes.entry(final_size).or_default() += 1;
                if max_size > self.max_intermediate_size || self.max_intermediate_term.is_none() {
                    self.max_intermediate_size = max_size;
                    self.max_intermediate_term = Some(term.clone());
                }
                if steps > self.champion_steps || self.champions.is_empty() {
                    self.champion_steps = steps;
                    self.champions = vec![term];
                } else if steps == self.champion_steps {
                    self.champions.push(term);
                }
            }
            other => {
                if other.is_truncated() {
                    self.truncated += 1;
                }
                self.nonterminating.push(term);
            }
        }
    }

    /// Combines two reports whose terms come in that order.
    pub fn merge(mut self, other: CensusReport) -> CensusReport {
        self.total += other.total;
        self.terminating += other.terminating;
        self.truncated += other.truncated;
        for (k, v) in other.halting_times {
            *self.halting_times.entry(k).or_default() += v;
        }
        for (k, v) in other.final_sizes {
            *self.final_sizes.entry(k).or_default() += v;
        }
        if other.max_intermediate_term.is_some()
            && (self.max_intermediate_term.is_none() || other.max_intermediate_size > self.max_intermediate_size)
        {
            self.max_intermediate_size = other.max_intermediate_size;
            self.max_intermediate_term = other.max_intermediate_term;
        }
        if !other.champions.is_empty() {
            if self.champions.is_empty() || other.champion_steps > self.champion_steps {
                self.champion_steps = other.champion_steps;
                self.champions = other.champions;
            } else if other.champion_steps == self.champion_steps {
                self.champions.extend(other.champions);
            }
        }
        self.nonterminating.extend(other.nonterminating);
        self
    }

    pub fn nonterminating_count(&self) -> u64 {
        self.nonterminating.len() as u64
    }
}

pub fn census(space: &TermSpace, strategy: Strategy, limits: Limits) -> CensusReport {
    par::fold_range(
        0..space.len(),
        CensusReport::default,
        |mut report, i| {
            let t = space.get(i).expect("index in range");
            let r = run(&t, strategy, limits);
            report.add(t, r.outcome, r.steps, r.max_size, r.final_term.size());
            report
        },
        CensusReport::merge,
    )
}

/// Per-term records in enumeration order.
pub fn census_records(space: &TermSpace, strategy: Strategy, limits: Limits) -> Vec<CensusRecord> {
    par::map_range(0..space.len(), |i| {
        let t = space.get(i).expect("index in range");
        let r = run(&t, strategy, limits);
        CensusRecord {
            index: i,
            term: print(&t, Notation::CompactLeft),
            outcome: r.outcome,
            steps: r.steps,
            max_size: r.max_size,
            final_size: r.final_term.size(),
        }
    })
}
