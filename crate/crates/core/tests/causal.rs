use std::collections::HashMap;

use sklab::causal::*;
use sklab::enumerate::{sk, TermSpace};
use sklab::term::View;
use sklab::{evolve, parse, Atom, Limits, Notation, Ordering, Strategy, Term};

// Naive token-carrying tree, rebuilt by cloning on every step.
#[derive(Clone, Debug)]
enum N {
    Leaf(Atom, u64),
    App(Box<N>, Box<N>, u64),
}

impl N {
    fn from(t: &Term, next: &mut u64) -> N {
        match t.view() {
            View::Atom(a) => {
                *next += 1;
                N::Leaf(a.clone(), *next - 1)
            }
            View::App(f, x) => {
                let f = N::from(f, next);
                let x = N::from(x, next);
                *next += 1;
                N::App(Box::new(f), Box::new(x), *next - 1)
            }
        }
    }

    fn tok(&self) -> u64 {
        match self {
            N::Leaf(_, t) | N::App(_, _, t) => *t,
        }
    }

    fn tokens(&self, out: &mut Vec<u64>) {
        out.push(self.tok());
        if let N::App(f, x, _) = self {
            f.tokens(out);
            x.tokens(out);
        }
    }

    fn head_args(&self) -> (&N, Vec<&N>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let N::App(f, x, _) = cur {
            args.push(&**x);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    fn is_redex(&self) -> bool {
        match self.head_args() {
            (N::Leaf(Atom::S, _), a) => a.len() == 3,
            (N::Leaf(Atom::K, _), a) => a.len() == 2,
            _ => false,
        }
    }

    /// Leftmost-outermost contraction; returns the discarded K argument or the duplicated
    /// S argument.
    fn step(&mut self, next: &mut u64) -> Option<(bool, N)> {
        if self.is_redex() {
            let (head, args) = self.head_args();
            let (new, dropped) = match head {
                N::Leaf(Atom::K, _) => (args[0].clone(), (true, args[1].clone())),
                _ => {
                    let (x, y, z) = (args[0].clone(), args[1].clone(), args[2].clone());
                    let copied = z.clone();
                    let xz = N::App(Box::new(x), Box::new(z.clone()), *next);
                    let yz = N::App(Box::new(y), Box::new(z), *next + 1);
                    let top = N::App(Box::new(xz), Box::new(yz), *next + 2);
                    *next += 3;
                    (top, (false, copied))
                }
            };
            *self = new;
            return Some(dropped);
        }
        match self {
            N::Leaf(..) => None,
            N::App(f, x, _) => f.step(next).or_else(|| x.step(next)),
        }
    }
}

fn multiset_minus(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut count: HashMap<u64, i64> = HashMap::new();
    for t in a {
        *count.entry(*t).or_default() += 1;
    }
    for t in b {
        *count.entry(*t).or_default() -= 1;
    }
    let mut out: Vec<u64> = count.into_iter().flat_map(|(t, c)| std::iter::repeat_n(t, c.max(0) as usize)).collect();
    out.sort_unstable();
    out
}

fn check_against_oracle(t: &Term) {
    let log = evolve_with_tokens(t, Strategy::LEFTMOST_OUTERMOST, Limits::steps(40));
    let mut next = 0;
    let mut tree = N::from(t, &mut next);
    for e in &log.events {
        let mut before = Vec::new();
        tree.tokens(&mut before);
        let (is_k, arg) = tree.step(&mut next).expect("oracle finds a redex");
        let mut after = Vec::new();
        tree.tokens(&mut after);
        let mut arg_tokens = Vec::new();
        arg.tokens(&mut arg_tokens);
        let consumed = if is_k {
            // only the root of the discarded argument counts
            multiset_minus(&multiset_minus(&before, &after), &arg_tokens[1..])
        } else {
            // the duplicated z legitimately appears twice afterwards
            before.extend(&arg_tokens);
            multiset_minus(&before, &after)
        };
        let mut created: Vec<u64> = after.iter().copied().filter(|t| !before.contains(t)).collect();
        created.sort_unstable();
        created.dedup();
        let mut got = e.consumed.clone();
        got.sort_unstable();
        assert_eq!(got, consumed, "{t} event {}", e.index);
        let mut got = e.created.clone();
        got.sort_unstable();
        assert_eq!(got, created, "{t} event {}", e.index);
    }
    assert!(tree.step(&mut next).is_none() || log.events.len() == 40);
}

#[test]
fn token_flow_matches_naive_oracle() {
    let five_step = TermSpace::new(6, &sk())
        .unwrap()
        .iter()
        .find(|t| evolve(t, Strategy::LEFTMOST_OUTERMOST, Limits::default()).steps() == 5)
        .expect("a 5-step size-6 term");
    check_against_oracle(&five_step);
    for n in 1..=6 {
        for t in TermSpace::new(n, &sk()).unwrap().iter() {
            check_against_oracle(&t);
        }
    }
}

#[test]
fn logs_replay_their_traces() {
    let strategies = [
        Strategy::LEFTMOST_OUTERMOST,
        Strategy::Scheme {
            ordering: Ordering::RightmostInnermost,
            budget: 1,
        },
        Strategy::Scheme {
            ordering: Ordering::LeftmostOutermost,
            budget: 3,
        },
        Strategy::SimultaneousOutermost,
        Strategy::ParallelInnermost,
    ];
    for t in TermSpace::new(6, &sk()).unwrap().iter().step_by(11) {
        for s in strategies {
            let limits = Limits::steps(30);
            let log = evolve_with_tokens(&t, s, limits);
            let trace = evolve(&t, s, limits);
            assert!(log.is_consistent());
            assert_eq!(log.replay().unwrap(), trace.terms, "{t} {s}");
            let total: usize = trace.events.iter().map(Vec::len).sum();
            assert_eq!(log.len(), total);
            let g = causal_graph(&log);
            assert!(g.edges.iter().all(|&(a, b)| a < b));
        }
    }
}

#[test]
fn unread_events_have_no_out_edges() {
    let t = parse("SSS(SS)SS", Notation::CompactLeft).unwrap();
    let log = evolve_with_tokens(&t, Strategy::LEFTMOST_OUTERMOST, Limits::steps(120));
    let g = causal_graph(&log);
    let read: std::collections::HashSet<u64> = log.events.iter().flat_map(|e| e.consumed.iter().copied()).collect();
    for e in &log.events {
        let has_out = g.edges.iter().any(|&(a, _)| a == e.index);
        assert_eq!(has_out, e.created.iter().any(|t| read.contains(t)), "event {}", e.index);
    }
}

// Kahn peeling with longest-path relaxation, independent of CausalGraph::layers.
fn oracle_widths(g: &CausalGraph) -> Vec<usize> {
    let n = g.nodes.len();
    let mut indeg = vec![0; n + 1];
    let mut succ = vec![Vec::new(); n + 1];
    for &(a, b) in &g.edges {
        indeg[b] += 1;
        succ[a].push(b);
    }
    let mut depth = vec![0usize; n + 1];
    let mut queue: std::collections::VecDeque<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            depth[w] = depth[w].max(depth[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    let mut widths = vec![0; depth[1..].iter().max().map_or(0, |m| m + 1)];
    for d in &depth[1..] {
        widths[*d] += 1;
    }
    widths
}

#[test]
fn widths_match_layering_oracle() {
    for (s, policy) in [("SSS(SS)SS", CopyPolicy::Share), ("SSS(SS)SS", CopyPolicy::Fresh), ("S(SSS)S(SS)K", CopyPolicy::Share)] {
        let t = parse(s, Notation::CompactLeft).unwrap();
        let log = evolve_with_copies(&t, Strategy::LEFTMOST_OUTERMOST, Limits::steps(200), policy);
        let g = causal_graph(&log);
        assert_eq!(g.widths(), oracle_widths(&g));
        assert_eq!(g.widths().iter().sum::<usize>(), log.len());
    }
}

/// First layer of every side loop (a run of layers holding more than one event).
fn loop_starts(widths: &[usize]) -> Vec<usize> {
    (0..widths.len()).filter(|&i| widths[i] > 1 && (i == 0 || widths[i - 1] == 1)).collect()
}

#[test]
fn growing_term_is_a_chain_with_spreading_loops() {
    let t = parse("SSS(SS)SS", Notation::CompactLeft).unwrap();
    let log = evolve_with_copies(&t, Strategy::LEFTMOST_OUTERMOST, Limits::steps(290), CopyPolicy::Fresh);
    let g = causal_graph(&log);
    let w = g.widths();
    assert!(w.iter().all(|&x| x <= 3));
    assert!(w[..14].iter().all(|&x| x == 1));
    // loops come in alternating long/short kinds; the period of the pattern keeps growing
    // once the start-up transient is over
    let starts: Vec<usize> = loop_starts(&w).into_iter().filter(|&s| s >= 58).collect();
    let periods: Vec<usize> = starts.windows(3).map(|s| s[2] - s[0]).collect();
    assert!(periods.len() >= 10, "{periods:?}");
    assert!(periods.windows(2).all(|p| p[0] < p[1]), "{periods:?}");
    // sharing duplicated tokens links distant events and keeps several events per layer
    let shared = causal_graph(&evolve_with_tokens(&t, Strategy::LEFTMOST_OUTERMOST, Limits::steps(290)));
    assert!(shared.widths().len() < w.len());
    assert!(shared.widths().iter().filter(|&&x| x > 1).count() > w.iter().filter(|&&x| x > 1).count());
}

#[test]
fn exports() {
    let t = parse("S(SK)(SK)(SK)", Notation::CompactLeft).unwrap();
    let g = causal_graph(&evolve_with_tokens(&t, Strategy::LEFTMOST_OUTERMOST, Limits::default()));
    assert_eq!(g.to_dot().matches("->").count(), g.edges.len());
    assert_eq!(g.to_json()["nodes"].as_array().unwrap().len(), g.nodes.len());
    assert_eq!(g.widths_csv().lines().count(), g.widths().len() + 1);
}
