//! How many distinct fixed points does a population of terms flow into?

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::enumerate::TermSpace;
use crate::par;
use crate::rewrite::{run, Limits, Strategy};
use crate::term::Term;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AttractorReport {
    pub total: u64,
    pub terminating: u64,
    pub distinct_fixed_points: u64,
    /// Sizes of the distinct fixed points.
    pub fixed_point_sizes: BTreeMap<u64, u64>,
    /// Distinct fixed points in order of first appearance.
    pub fixed_points: Vec<Term>,
}

/// Evolves every term of the space leftmost-outermost and collects the normal forms.
pub fn attractor_census(space: &TermSpace, limits: Limits) -> AttractorReport {
    let finals: Vec<Option<Term>> = par::map_range(0..space.len(), |i| {
        let t = space.get(i).expect("index in range");
        let r = run(&t, Strategy::LEFTMOST_OUTERMOST, limits);
        r.outcome.is_fixed_point().then_some(r.final_term)
    });
    let mut report = AttractorReport {
        total: space.len(),
        ..AttractorReport::default()
    };
    let mut seen: HashSet<Term> = HashSet::new();
    for t in finals.into_iter().flatten() {
        report.terminating += 1;
        if seen.insert(t.clone()) {
            *report.fixed_point_sizes.entry(t.size()).or_default() += 1;
            report.fixed_points.push(t);
        }
    }
    report.distinct_fixed_points = report.fixed_points.len() as u64;
    report
}
