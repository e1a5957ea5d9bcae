use std::collections::HashMap;

use proptest::prelude::*;
use sklab::dag::{DagNode, NodeStore};
use sklab::enumerate::TermSpace;
use sklab::models::*;
use sklab::rewrite::successors;
use sklab::{Atom, Limits, Rule, Term};

fn fixture(name: &str) -> Model {
    let path = format!("{}/fixtures/models/{name}.csv", env!("CARGO_MANIFEST_DIR"));
    Model::from_csv(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn limits() -> Limits {
    Limits {
        max_steps: 2000,
        max_size: 100_000,
    }
}

// Straight quadruple loop over every (table, s) pair, without the library.
fn oracle_count(k: usize) -> usize {
    let cells = k * k;
    let mut count = 0;
    for code in 0..k.pow(cells as u32) {
        let mut t = vec![0; cells];
        let mut c = code;
        for cell in t.iter_mut() {
            *cell = c % k;
            c /= k;
        }
        let m = |a: usize, b: usize| t[a * k + b];
        for s in 0..k {
            let mut ok = true;
            for x in 0..k {
                for y in 0..k {
                    for z in 0..k {
                        ok &= m(m(m(s, x), y), z) == m(m(x, z), m(y, z));
                    }
                }
            }
            count += ok as usize;
        }
    }
    count
}

#[test]
fn exact_s_model_counts() {
    assert_eq!(search_exact_models(1, &[Atom::S]).unwrap().len(), 1);
    for k in 2..=3u8 {
        let found = search_exact_models(k, &[Atom::S]).unwrap();
        assert_eq!(found.len(), oracle_count(k as usize));
        assert!(found.iter().all(Model::satisfies_s_axiom));
    }
    assert_eq!(search_exact_models(2, &[Atom::S]).unwrap().len(), 8);
    assert_eq!(search_exact_models(3, &[Atom::S]).unwrap().len(), 285);
    assert!(search_exact_models(5, &[Atom::S]).is_err());
}

#[test]
fn k_has_only_the_trivial_model() {
    assert_eq!(search_exact_models(1, &[Atom::S, Atom::K]).unwrap().len(), 1);
    for k in 2..=3 {
        assert!(search_exact_models(k, &[Atom::K]).unwrap().is_empty());
        assert!(search_exact_models(k, &[Atom::S, Atom::K]).unwrap().is_empty());
    }
}

#[test]
fn fixtures_load() {
    let two = fixture("two_valued");
    assert_eq!((two.k, two.apply(1, 1), two.apply(1, 2), two.value_of(&Atom::S)), (2, 2, 1, Some(1)));
    assert_eq!(fixture("three_valued_a").apply(3, 3), 1);
    assert_eq!(fixture("three_valued_b").apply(2, 2), 1);
    assert!(!two.satisfies_s_axiom());
}

#[test]
fn constant_model_never_discriminates() {
    assert_eq!(discriminate(9, &Model::constant(1, &[Atom::S]), limits()).unwrap(), None);
}

#[test]
fn size_five_classes_agree_on_values() {
    let scan = scan_size(5, &fixture("two_valued"), limits()).unwrap();
    assert_eq!((scan.scanned, scan.skipped, scan.classes), (14, 0, 10));
    assert_eq!(scan.clash, None);
}

#[test]
fn two_valued_table_survives_through_size_nine() {
    assert_eq!(discriminate(9, &fixture("two_valued"), limits()).unwrap(), None);
}

#[test]
fn leaf_count_equals_size() {
    for t in TermSpace::new(6, &sklab::enumerate::sk()).unwrap().iter() {
        assert_eq!(Valuation::leaf_count().eval(&t).unwrap(), t.size());
    }
}

// Evaluates over the interned DAG, one node at a time in id order.
fn dag_eval(m: &Model, t: &Term) -> u8 {
    let mut store = NodeStore::new();
    let root = store.intern(t).unwrap();
    let mut vals: HashMap<u32, u8> = HashMap::new();
    for id in store.reachable(&[root]) {
        let v = match store.node(id) {
            DagNode::Atom { name } => m.atoms[name.name()],
            DagNode::App { function, argument } => m.apply(vals[function], vals[argument]),
        };
        vals.insert(id, v);
    }
    vals[&root]
}

fn arb_s_term() -> BoxedStrategy<Term> {
    Just(Term::s())
        .prop_recursive(6, 12, 2, |inner| (inner.clone(), inner).prop_map(|(f, x)| Term::app(f, x)))
        .boxed()
}

fn exact_models() -> Vec<Model> {
    let mut all = search_exact_models(2, &[Atom::S]).unwrap();
    all.extend(search_exact_models(3, &[Atom::S]).unwrap().into_iter().step_by(19));
    all
}

proptest! {
    #[test]
    fn tree_and_dag_evaluation_agree(t in arb_s_term(), pick in 0usize..1000) {
        let models = exact_models();
        let m = &models[pick % models.len()];
        prop_assert_eq!(m.eval(&t).unwrap(), dag_eval(m, &t));
        let two = fixture("three_valued_a");
        prop_assert_eq!(two.eval(&t).unwrap(), dag_eval(&two, &t));
    }

    #[test]
    fn exact_models_are_invariant_under_s_steps(t in arb_s_term(), pick in 0usize..1000) {
        let models = exact_models();
        let m = &models[pick % models.len()];
        let v = m.eval(&t).unwrap();
        for (r, next) in successors(&t) {
            prop_assert_eq!(r.rule, Rule::S);
            prop_assert_eq!(m.eval(&next).unwrap(), v);
        }
    }

    #[test]
    fn evaluation_is_compositional(f in arb_s_term(), x in arb_s_term()) {
        let m = fixture("three_valued_b");
        let whole = m.eval(&Term::app(f.clone(), x.clone())).unwrap();
        prop_assert_eq!(whole, m.apply(m.eval(&f).unwrap(), m.eval(&x).unwrap()));
    }
}

#[test]
fn s_axiom_agrees_with_direct_check_for_all_tables_up_to_three() {
    for k in 1..=3u8 {
        let cells = k as u32 * k as u32;
        for code in 0..(k as u64).pow(cells) {
            let mut table = Vec::new();
            let mut c = code;
            for _ in 0..cells {
                table.push((c % k as u64) as u8 + 1);
                c /= k as u64;
            }
            for s in 1..=k {
                let m = Model::with_s(&table.chunks(k as usize).collect::<Vec<_>>(), s).unwrap();
                let direct = (1..=k).all(|x| {
                    (1..=k).all(|y| (1..=k).all(|z| m.apply(m.apply(m.apply(s, x), y), z) == m.apply(m.apply(x, z), m.apply(y, z))))
                });
                assert_eq!(m.satisfies_s_axiom(), direct);
            }
        }
    }
}

