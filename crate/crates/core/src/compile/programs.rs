//! Empirical computation: which closed S/K programs `e` make `e[x]` normalize to a term
//! built only from `x`, how long that takes, and how much room it needs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::{sk, TermSpace};
use crate::error::{Error, Result};
use crate::par;
use crate::rewrite::{run, Limits, Strategy};
use crate::term::{Atom, Term};

/// A program and its leftmost-outermost run on `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Found {
    pub program: Term,
    pub size: u64,
    /// Rewrites until the normal form.
    pub steps: u64,
    /// States visited, counting both ends (`steps + 1`).
    pub time: u64,
    /// Largest state, the initial `e[x]` included.
    pub memory: u64,
    pub object: Term,
}

fn x() -> Term {
    Term::var("x")
}

fn only_x(t: &Term) -> bool {
    t.atoms() == [Atom::var("x")]
}

/// Runs every program of one size on `x`, keeping those whose normal form is an `x`-only
/// object. Results are in enumeration order.
fn objects_of_size(size: usize, limits: Limits) -> Result<Vec<Found>> {
    let space = TermSpace::new(size, &sk())?;
    let found = par::map_range(0..space.len(), |i| {
        let e = space.get(i).expect("index in range");
        let r = run(&Term::app(e.clone(), x()), Strategy::LEFTMOST_OUTERMOST, limits);
        (r.outcome.is_fixed_point() && only_x(&r.final_term)).then(|| Found {
            program: e,
            size: size as u64,
            steps: r.steps,
            time: r.steps + 1,
            memory: r.max_size,
            object: r.final_term,
        })
    });
    Ok(found.into_iter().flatten().collect())
}

/// All programs of size at most `max_size` computing `target`, smallest first.
pub fn program_search(target: &Term, max_size: usize, limits: Limits) -> Result<Vec<Found>> {
    if !only_x(target) {
        return Err(Error::Invalid(format!("target {target} must be built from x alone")));
    }
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(objects_of_size(n, limits)?.into_iter().filter(|f| &f.object == target));
    }
    Ok(out)
}

/// Objects computed by programs of exactly `size`, with how many programs compute
/// each, ordered by object size and then by first appearance.
pub fn objects_census(size: usize, limits: Limits) -> Result<Vec<(Term, u64)>> {
    let mut counts: HashMap<Term, (usize, u64)> = HashMap::new();
    for (i, f) in objects_of_size(size, limits)?.into_iter().enumerate() {
        counts.entry(f.object).or_insert((i, 0)).1 += 1;
    }
    let mut out: Vec<(Term, usize, u64)> = counts.into_iter().map(|(t, (first, n))| (t, first, n)).collect();
    out.sort_by_key(|(t, first, _)| (t.size(), *first));
    Ok(out.into_iter().map(|(t, _, n)| (t, n)).collect())
}

/// For every object reachable with programs of size at most `max_size`, the first
/// program found (smallest size, then enumeration order).
pub fn shortest_programs(max_size: usize, limits: Limits) -> Result<Vec<Found>> {
    let mut seen: HashMap<Term, ()> = HashMap::new();
    let mut out = Vec::new();
    for n in 1..=max_size {
        for f in objects_of_size(n, limits)? {
            if seen.insert(f.object.clone(), ()).is_none() {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Summary of the programs of one size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProgramStats {
    pub size: u64,
    pub programs: u64,
    pub min_time: u64,
    pub min_memory: u64,
    pub max_time: u64,
    pub max_memory: u64,
    pub median_time: f64,
    pub median_memory: f64,
}

fn median(mut v: Vec<u64>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

impl ProgramStats {
    /// One row per size present in `found`, in increasing size.
    pub fn table(found: &[Found]) -> Vec<ProgramStats> {
        let mut sizes: Vec<u64> = found.iter().map(|f| f.size).collect();
        sizes.dedup();
        sizes
            .into_iter()
            .map(|size| {
                let group: Vec<&Found> = found.iter().filter(|f| f.size == size).collect();
                let time: Vec<u64> = group.iter().map(|f| f.time).collect();
                let mem: Vec<u64> = group.iter().map(|f| f.memory).collect();
                ProgramStats {
                    size,
                    programs: group.len() as u64,
                    min_time: *time.iter().min().expect("non-empty"),
                    min_memory: *mem.iter().min().expect("non-empty"),
                    max_time: *time.iter().max().expect("non-empty"),
                    max_memory: *mem.iter().max().expect("non-empty"),
                    median_time: median(time),
                    median_memory: median(mem),
                }
            })
            .collect()
    }
}
