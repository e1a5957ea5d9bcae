use sklab::enumerate::{sk, TermSpace};
use sklab::multiway::*;
use sklab::{parse, run, Limits, Notation, Strategy, Term};

fn b(s: &str) -> Term {
    parse(s, Notation::Brackets).unwrap()
}

fn small() -> MultiwayLimits {
    MultiwayLimits {
        max_depth: 60,
        max_nodes: 5_000,
    }
}

#[test]
fn complete_graphs_have_one_terminal() {
    for n in 1..=6 {
        for t in TermSpace::new(n, &sk()).unwrap().iter() {
            let g = build_multiway(std::slice::from_ref(&t), small());
            if !g.is_complete() {
                continue;
            }
            let reach = g.reachable(g.seeds[0]);
            let terms: Vec<_> = g.terminals().into_iter().filter(|&i| reach[i]).collect();
            assert!(terms.len() <= 1, "{t}: {} terminals", terms.len());
        }
    }
}

#[test]
fn edges_replay_on_small_terms() {
    for t in TermSpace::new(5, &sk()).unwrap().iter() {
        assert!(build_multiway(&[t], small()).edges_replay());
    }
}

#[test]
fn leftmost_outermost_finds_terminal() {
    for n in 1..=7 {
        for t in TermSpace::new(n, &sk()).unwrap().iter() {
            let g = build_multiway(std::slice::from_ref(&t), small());
            if !g.is_complete() || g.terminals().is_empty() {
                continue;
            }
            let p = g.strategy_path(g.seeds[0], Strategy::LEFTMOST_OUTERMOST, 10_000);
            assert_eq!(p.end, PathEnd::Terminal, "{t}");
        }
    }
}

#[test]
fn applied_seed_with_477_states() {
    let g = build_multiway(&[b("s[s[s[s]]][k[s[k]]][s][x]")], MultiwayLimits::default());
    assert!(g.is_complete());
    assert_eq!(g.len(), 477);
    let seed = g.seeds[0];
    let lo = g.strategy_path(seed, Strategy::LEFTMOST_OUTERMOST, 1000);
    assert_eq!(lo.end, PathEnd::Terminal);
    assert_eq!(lo.len(), 11);
    assert_eq!(g.shortest_path_to_terminal(seed), Some(10));
    // without the argument the combinator's own graph is tiny
    assert_eq!(build_multiway(&[b("s[s[s[s]]][k[s[k]]][s]")], MultiwayLimits::default()).len(), 15);
}

#[test]
fn four_expressions_join_at_sk() {
    for t in ["s[s][k][k][s[k]]", "s[s[s]][s][k][k]", "s[s][s][k][s][k]", "s[k[s]][k[k]][k]"] {
        let r = joinable(&b(t), &b("s[k]"), JoinLimits::default());
        assert_eq!(r.proof().expect(t).meet, b("s[k]"), "{t}");
    }
}

#[test]
fn diverging_pair_joins() {
    let x = b("s[s[s][s]][s][s[s][k]]");
    let y = b("s[s][k][s[s[s][k]]][k]");
    for t in [&x, &y] {
        assert!(!run(t, Strategy::LEFTMOST_OUTERMOST, Limits::steps(2000)).outcome.is_fixed_point());
    }
    let r = joinable(&x, &y, JoinLimits::default());
    let p = r.proof().unwrap();
    assert_eq!(p.meet, b("s[s[s][k]][s[s[s][k]]][s[s[s][k]]]"));
    for (start, path) in [(&x, &p.path_a), (&y, &p.path_b)] {
        let mut cur = start.clone();
        for (redex, next) in path {
            cur = sklab::rewrite::apply_at(&cur, redex).unwrap();
            assert_eq!(&cur, next);
        }
        assert_eq!(cur, p.meet);
    }
}

#[test]
fn joinable_agrees_with_normal_forms() {
    let terms: Vec<Term> = TermSpace::new(5, &sk()).unwrap().iter().step_by(7).collect();
    let nf = |t: &Term| run(t, Strategy::LEFTMOST_OUTERMOST, Limits::default()).final_term;
    for a in &terms {
        for c in &terms {
            let r = joinable(a, c, JoinLimits::default());
            assert_eq!(r.proof().is_some(), nf(a) == nf(c), "{a} {c}");
            let back = joinable(c, a, JoinLimits::default());
            assert_eq!(r.proof().is_some(), back.proof().is_some());
        }
    }
}

fn torus(l: usize) -> BranchialGraph {
    let id = |x: usize, y: usize| (y % l) * l + (x % l);
    let mut edges = Vec::new();
    for y in 0..l {
        for x in 0..l {
            edges.push((id(x, y), id(x + 1, y)));
            edges.push((id(x, y), id(x, y + 1)));
        }
    }
    BranchialGraph::from_edges(l * l, edges)
}

#[test]
fn lattice_dimension_oracle() {
    // a diamond of radius r in the square lattice holds 2r^2 + 2r + 1 vertices
    let g = torus(200);
    let v = ball_growth(&g, 0, 100);
    for r in [0u64, 1, 7, 99] {
        assert_eq!(v[r as usize], 2 * r * r + 2 * r + 1);
    }
    let diam = g.diameter_estimate(0);
    assert_eq!(diam, 200);
    let d = dimension_estimate(&v, diam as usize / 2).unwrap();
    assert!((d - 2.0).abs() <= 0.15, "{d}");
}

#[test]
fn branchial_without_shared_parents_is_empty() {
    // a single deterministic chain never branches
    let g = build_multiway(&[b("k[k[k][s]][s]")], MultiwayLimits::default());
    for layer in 0..g.layer_counts().len() as u32 {
        assert!(branchial_graph(&g, layer).edges.is_empty());
    }
}

#[test]
fn branchial_layer_of_growing_term() {
    let g = build_multiway(
        &[b("s[s][s][s[s]][s][s]")],
        MultiwayLimits {
            max_depth: 18,
            max_nodes: 1_000_000,
        },
    );
    let br = branchial_graph(&g, 18);
    assert_eq!(br.len(), 1906);
    let c = br.largest_component();
    assert_eq!(c.len(), 646);
    assert!(c.components().len() == 1);
}

#[test]
fn attractors_small_sizes() {
    let r = attractor_census(&TermSpace::new(6, &sklab::enumerate::s_only()).unwrap(), Limits::default());
    assert_eq!((r.total, r.terminating, r.distinct_fixed_points), (42, 42, 27));
    let r = attractor_census(&TermSpace::new(1, &sk()).unwrap(), Limits::default());
    assert_eq!(r.distinct_fixed_points, 2);
}
