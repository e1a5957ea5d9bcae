//! Redexes, evaluation orders, and single rewrite steps.

mod census;
mod engine;
mod machine;

pub use census::{census, census_records, CensusRecord, CensusReport};
pub use engine::{evolve, run, Limits, Outcome, RunStats, Trace};

use std::cmp::Ordering as CmpOrdering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{Position, Rule, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Redex {
    pub position: Position,
    pub rule: Rule,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.rule, self.position)
    }
}

/// The eight ways of ranking redex positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Ordering {
    LeftmostOutermost,
    LeftmostInnermost,
    RightmostOutermost,
    RightmostInnermost,
    OutermostLeftmost,
    OutermostRightmost,
    InnermostLeftmost,
    InnermostRightmost,
}

impl Ordering {
    pub const ALL: [Ordering; 8] = [
        Ordering::LeftmostOutermost,
        Ordering::LeftmostInnermost,
        Ordering::RightmostOutermost,
        Ordering::RightmostInnermost,
        Ordering::OutermostLeftmost,
        Ordering::OutermostRightmost,
        Ordering::InnermostLeftmost,
        Ordering::InnermostRightmost,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Ordering::LeftmostOutermost => "lo",
            Ordering::LeftmostInnermost => "li",
            Ordering::RightmostOutermost => "ro",
            Ordering::RightmostInnermost => "ri",
            Ordering::OutermostLeftmost => "ol",
            Ordering::OutermostRightmost => "or",
            Ordering::InnermostLeftmost => "il",
            Ordering::InnermostRightmost => "ir",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ordering::LeftmostOutermost => "leftmostOutermost",
            Ordering::LeftmostInnermost => "leftmostInnermost",
            Ordering::RightmostOutermost => "rightmostOutermost",
            Ordering::RightmostInnermost => "rightmostInnermost",
            Ordering::OutermostLeftmost => "outermostLeftmost",
            Ordering::OutermostRightmost => "outermostRightmost",
            Ordering::InnermostLeftmost => "innermostLeftmost",
            Ordering::InnermostRightmost => "innermostRightmost",
        }
    }

    /// Position digit that sorts first among siblings.
    fn first_child(self) -> u8 {
        match self {
            Ordering::LeftmostOutermost
            | Ordering::LeftmostInnermost
            | Ordering::OutermostLeftmost
            | Ordering::InnermostLeftmost => 0,
            _ => 1,
        }
    }

    /// Total order on positions.
    pub fn compare(self, p: &Position, q: &Position) -> CmpOrdering {
        let flip = self.first_child() == 1;
        let lex = |p: &Position, q: &Position, prefix_first: bool| {
            for (a, b) in p.steps().iter().zip(q.steps()) {
                if a != b {
                    let c = a.cmp(b);
                    return if flip { c.reverse() } else { c };
                }
            }
            let c = p.len().cmp(&q.len());
            if prefix_first {
                c
            } else {
                c.reverse()
            }
        };
        match self {
            Ordering::LeftmostOutermost | Ordering::RightmostOutermost => lex(p, q, true),
            Ordering::LeftmostInnermost | Ordering::RightmostInnermost => lex(p, q, false),
            Ordering::OutermostLeftmost | Ordering::OutermostRightmost => {
                p.len().cmp(&q.len()).then_with(|| lex(p, q, true))
            }
            Ordering::InnermostLeftmost | Ordering::InnermostRightmost => {
                q.len().cmp(&p.len()).then_with(|| lex(p, q, true))
            }
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ordering> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Ordering::ALL
            .into_iter()
            .find(|o| key == o.short_name() || key == o.name().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// How redexes are chosen at each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Strategy {
    /// The first `budget` mutually disjoint redexes in `ordering`.
    Scheme { ordering: Ordering, budget: u32 },
    /// Every redex that has no redex above it.
    SimultaneousOutermost,
    /// Every redex that has no redex below it.
    ParallelInnermost,
}

impl Strategy {
    pub fn scheme(ordering: Ordering) -> Strategy {
        Strategy::Scheme { ordering, budget: 1 }
    }

    pub const LEFTMOST_OUTERMOST: Strategy = Strategy::Scheme {
        ordering: Ordering::LeftmostOutermost,
        budget: 1,
    };

    /// The eight budget-1 schemes followed by the two parallel strategies.
    pub fn all() -> Vec<Strategy> {
        Ordering::ALL
            .into_iter()
            .map(Strategy::scheme)
            .chain([Strategy::SimultaneousOutermost, Strategy::ParallelInnermost])
            .collect()
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Scheme { ordering, budget: 1 } => f.write_str(ordering.short_name()),
            Strategy::Scheme { ordering, budget } => write!(f, "{}:{budget}", ordering.short_name()),
            Strategy::SimultaneousOutermost => f.write_str("simultaneousOutermost"),
            Strategy::ParallelInnermost => f.write_str("parallelInnermost"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Accepts `lo`, `leftmostOutermost`, `lo:3` (budget 3), `simultaneousOutermost` / `so`,
    /// `parallelInnermost` / `pi`.
    fn from_str(s: &str) -> Result<Strategy> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == ':')
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "so" | "simultaneousoutermost" | "simultaneous" => return Ok(Strategy::SimultaneousOutermost),
            "pi" | "parallelinnermost" | "parallel" => return Ok(Strategy::ParallelInnermost),
            _ => {}
        }
        let (name, budget) = match key.split_once(':') {
            Some((name, b)) => (
                name,
                b.parse::<u32>()
                    .ok()
                    .filter(|&b| b >= 1)
                    .ok_or_else(|| Error::UnknownStrategy(s.to_string()))?,
            ),
            None => (key.as_str(), 1),
        };
        let ordering = name.parse::<Ordering>().map_err(|_| Error::UnknownStrategy(s.to_string()))?;
        Ok(Strategy::Scheme { ordering, budget })
    }
}

/// Contracts the term at its root if it is a redex.
pub fn contract(t: &Term) -> Option<Term> {
    let rule = t.redex_rule()?;
    let (f, arg) = t.as_app()?;
    match rule {
        Rule::K => f.as_app().map(|(_, x)| x.clone()),
        Rule::S => {
            let (g, y) = f.as_app()?;
            let (_, x) = g.as_app()?;
            Some(Term::app(Term::app(x.clone(), arg.clone()), Term::app(y.clone(), arg.clone())))
        }
    }
}

/// All redexes, children before parents, function side before argument side.
pub fn find_redexes(t: &Term) -> Vec<Redex> {
    enum Visit<'a> {
        Enter(&'a Term, Position),
        Emit(Rule, Position),
    }
    let mut out = Vec::new();
    let mut stack = vec![Visit::Enter(t, Position::root())];
    while let Some(v) = stack.pop() {
        match v {
            Visit::Emit(rule, position) => out.push(Redex { position, rule }),
            Visit::Enter(t, pos) => {
                if !t.has_redex() {
                    continue;
                }
                if let Some(rule) = t.redex_rule() {
                    stack.push(Visit::Emit(rule, pos.clone()));
                }
                if let Some((f, x)) = t.as_app() {
                    stack.push(Visit::Enter(x, pos.child(1)));
                    stack.push(Visit::Enter(f, pos.child(0)));
                }
            }
        }
    }
    out
}

pub fn order_redexes(mut redexes: Vec<Redex>, ordering: Ordering) -> Vec<Redex> {
    redexes.sort_by(|a, b| ordering.compare(&a.position, &b.position));
    redexes
}

/// Greedy prefix of `ordered`, skipping redexes nested inside or around chosen ones.
pub fn select_matches(ordered: &[Redex], budget: usize) -> Vec<Redex> {
    let mut chosen: Vec<Redex> = Vec::new();
    for r in ordered {
        if chosen.len() >= budget {
            break;
        }
        if chosen.iter().all(|c| !c.position.overlaps(&r.position)) {
            chosen.push(r.clone());
        }
    }
    chosen
}

/// Rewrites the redex `r` of `t`.
pub fn apply_at(t: &Term, r: &Redex) -> Result<Term> {
    let sub = t
        .at(&r.position)
        .ok_or_else(|| Error::InvalidPosition(r.position.to_string()))?;
    if sub.redex_rule() != Some(r.rule) {
        return Err(Error::NotARedex {
            rule: r.rule.to_string(),
            position: r.position.to_string(),
        });
    }
    let replacement = contract(sub).expect("redex contracts");
    t.replace_at(&r.position, replacement)
}

/// Applies mutually disjoint redexes, deepest first.
pub fn apply_all(t: &Term, redexes: &[Redex]) -> Result<Term> {
    let mut order: Vec<&Redex> = redexes.iter().collect();
    order.sort_by_key(|r| std::cmp::Reverse(r.position.len()));
    let mut out = t.clone();
    for r in order {
        out = apply_at(&out, r)?;
    }
    Ok(out)
}

/// The redex a budget-1 scheme picks, found by walking down the cached redex summaries.
pub fn first_redex(t: &Term, ordering: Ordering) -> Option<Redex> {
    if !t.has_redex() {
        return None;
    }
    let mut pos = Position::root();
    let mut cur = t;
    let first = ordering.first_child();
    loop {
        let here = cur.redex_rule();
        let Some((f, x)) = cur.as_app() else {
            unreachable!("atoms hold no redex")
        };
        let (a, b) = if first == 0 { (f, x) } else { (x, f) };
        let (da, db) = (first, 1 - first);
        let next = match ordering {
            Ordering::LeftmostOutermost | Ordering::RightmostOutermost => {
                if here.is_some() {
                    None
                } else if a.has_redex() {
                    Some(da)
                } else {
                    Some(db)
                }
            }
            Ordering::LeftmostInnermost | Ordering::RightmostInnermost => {
                if a.has_redex() {
                    Some(da)
                } else if b.has_redex() {
                    Some(db)
                } else {
                    None
                }
            }
            Ordering::OutermostLeftmost | Ordering::OutermostRightmost => {
                if here.is_some() {
                    None
                } else if a.shallowest_redex() <= b.shallowest_redex() {
                    Some(da)
                } else {
                    Some(db)
                }
            }
            Ordering::InnermostLeftmost | Ordering::InnermostRightmost => {
                let depth = |t: &Term| t.has_redex().then(|| t.deepest_redex());
                match (depth(a), depth(b)) {
                    (None, None) => None,
                    (Some(_), None) => Some(da),
                    (None, Some(_)) => Some(db),
                    (Some(p), Some(q)) => Some(if p >= q { da } else { db }),
                }
            }
        };
        match next {
            None => {
                return Some(Redex {
                    position: pos,
                    rule: here.expect("walk ends on a redex"),
                })
            }
            Some(d) => {
                pos.push(d);
                cur = if d == 0 { f } else { x };
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Parallel {
    Outermost,
    Innermost,
}

fn parallel_selected(t: &Term, mode: Parallel) -> bool {
    match mode {
        Parallel::Outermost => t.redex_rule().is_some(),
        Parallel::Innermost => {
            t.redex_rule().is_some() && t.as_app().is_some_and(|(f, x)| !f.has_redex() && !x.has_redex())
        }
    }
}

/// Rewrites every selected redex at once. Shared subterms are rewritten once, so terms with
/// heavy sharing keep it.
fn rewrite_parallel(t: &Term, mode: Parallel) -> Term {
    let mut memo: HashMap<*const (), Term> = HashMap::new();
    let id = |t: &Term| t.node_ptr();
    let mut stack: Vec<(&Term, bool)> = vec![(t, false)];
    while let Some((node, expanded)) = stack.pop() {
        let k = id(node);
        if memo.contains_key(&k) {
            continue;
        }
        if !node.has_redex() {
            memo.insert(k, node.clone());
            continue;
        }
        if parallel_selected(node, mode) {
            memo.insert(k, contract(node).expect("selected node is a redex"));
            continue;
        }
        let (f, x) = node.as_app().expect("redex holder is an application");
        if expanded {
            let nf = memo[&id(f)].clone();
            let nx = memo[&id(x)].clone();
            memo.insert(k, Term::app(nf, nx));
        } else {
            stack.push((node, true));
            stack.push((x, false));
            stack.push((f, false));
        }
    }
    memo.remove(&id(t)).expect("root rewritten")
}

/// Positions of the redexes a parallel strategy rewrites, in left-to-right order.
fn parallel_positions(t: &Term, mode: Parallel) -> Vec<Redex> {
    let mut out = Vec::new();
    let mut stack = vec![(t, Position::root())];
    while let Some((node, pos)) = stack.pop() {
        if !node.has_redex() {
            continue;
        }
        if parallel_selected(node, mode) {
            out.push(Redex {
                position: pos,
                rule: node.redex_rule().expect("selected"),
            });
            continue;
        }
        let (f, x) = node.as_app().expect("application");
        stack.push((x, pos.child(1)));
        stack.push((f, pos.child(0)));
    }
    out
}

/// Number of redexes a parallel strategy rewrites, counting every occurrence in shared subterms.
fn parallel_count(t: &Term, mode: Parallel) -> u64 {
    t.sum_over(|n| {
        if !n.has_redex() {
            Some(0)
        } else if parallel_selected(n, mode) {
            Some(1)
        } else {
            None
        }
    })
}

/// One step. Returns the new term and the redexes applied (empty at a fixed point).
pub fn step(t: &Term, strategy: Strategy) -> (Term, Vec<Redex>) {
    match strategy {
        Strategy::Scheme { ordering, budget: 1 } => match first_redex(t, ordering) {
            None => (t.clone(), Vec::new()),
            Some(r) => {
                let next = apply_at(t, &r).expect("redex found in this term");
                (next, vec![r])
            }
        },
        Strategy::Scheme { ordering, budget } => {
            let ordered = order_redexes(find_redexes(t), ordering);
            let chosen = select_matches(&ordered, budget as usize);
            let next = apply_all(t, &chosen).expect("disjoint redexes of this term");
            (next, chosen)
        }
        Strategy::SimultaneousOutermost => {
            let events = parallel_positions(t, Parallel::Outermost);
            (rewrite_parallel(t, Parallel::Outermost), events)
        }
        Strategy::ParallelInnermost => {
            let events = parallel_positions(t, Parallel::Innermost);
            (rewrite_parallel(t, Parallel::Innermost), events)
        }
    }
}

/// Like [`step`] but reports only how many redexes were rewritten. Parallel strategies on
/// heavily shared terms avoid listing every position.
pub fn step_count(t: &Term, strategy: Strategy) -> (Term, u64) {
    match strategy {
        Strategy::SimultaneousOutermost => (
            rewrite_parallel(t, Parallel::Outermost),
            parallel_count(t, Parallel::Outermost),
        ),
        Strategy::ParallelInnermost => (
            rewrite_parallel(t, Parallel::Innermost),
            parallel_count(t, Parallel::Innermost),
        ),
        _ => {
            let (next, events) = step(t, strategy);
            (next, events.len() as u64)
        }
    }
}

/// Every term reachable by rewriting exactly one redex, paired with that redex.
pub fn successors(t: &Term) -> Vec<(Redex, Term)> {
    find_redexes(t)
        .into_iter()
        .map(|r| {
            let next = apply_at(t, &r).expect("redex of this term");
            (r, next)
        })
        .collect()
}
