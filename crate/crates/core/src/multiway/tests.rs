use super::*;
use crate::notation::{parse, Notation};

fn b(s: &str) -> Term {
    parse(s, Notation::Brackets).unwrap()
}

#[test]
fn small_graph_shape() {
    // s[k][k][k[s][s]] has an outer S redex and an inner K redex
    let g = build_multiway(&[b("s[k][k][k[s][s]]")], MultiwayLimits::default());
    assert!(g.is_complete());
    assert!(g.edges_replay());
    assert_eq!(g.layer_counts()[0], 1);
    assert_eq!(g.terminals().len(), 1);
    assert_eq!(g.nodes[g.terminals()[0]], b("s"));
}

#[test]
fn seed_with_74_states() {
    let g = build_multiway(&[b("s[s[s[s]]][s][s][s]")], MultiwayLimits::default());
    assert!(g.is_complete());
    assert_eq!(g.len(), 74);
    assert_eq!(g.longest_path(g.seeds[0]), Some(15));
    assert!(g.edges_replay());
}

#[test]
fn node_cap_leaves_frontier() {
    let g = build_multiway(
        &[b("s[s[s[s]]][s][s][s]")],
        MultiwayLimits {
            max_depth: 1000,
            max_nodes: 20,
        },
    );
    assert!(g.len() <= 20);
    assert!(!g.is_complete());
}

#[test]
fn depth_cap() {
    let g = build_multiway(
        &[b("s[s][s][s[s]][s][s]")],
        MultiwayLimits {
            max_depth: 3,
            max_nodes: 100_000,
        },
    );
    assert_eq!(g.layer_counts().len(), 4);
    assert!(!g.is_complete());
}

#[test]
fn strategy_path_follows_edges() {
    let g = build_multiway(&[b("s[s[s[s]]][s][s][s]")], MultiwayLimits::default());
    let p = g.strategy_path(g.seeds[0], Strategy::LEFTMOST_OUTERMOST, 1000);
    assert_eq!(p.end, PathEnd::Terminal);
    assert!(p.edges.iter().all(Option::is_some));
    assert!(g.is_terminal(*p.nodes.last().unwrap()));
}

#[test]
fn join_identical_and_trivial() {
    let t = b("s[k][k][s]");
    let r = joinable(&t, &t, JoinLimits::default());
    assert!(r.proof().unwrap().path_a.is_empty());
    let r = joinable(&b("k[s][k]"), &b("s[k][s][s]"), JoinLimits::default());
    let p = r.proof().unwrap();
    assert_eq!(p.meet, b("s"));
}

#[test]
fn distinct_normal_forms_are_disjoint() {
    let r = joinable(&b("k[s][k]"), &b("k[k][s]"), JoinLimits::default());
    assert!(matches!(r, Joinability::Disjoint));
}

#[test]
fn dot_and_json() {
    let g = build_multiway(&[b("k[s][k[k][s]]")], MultiwayLimits::default());
    let dot = g.to_dot();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), g.edges.len());
    let j = g.to_json();
    assert_eq!(j["nodes"].as_array().unwrap().len(), g.len());
    assert_eq!(j["complete"], true);
}
