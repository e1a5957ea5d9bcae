//! Finite interpretations of terms: multiplication tables over `1..=k`, exact models of
//! the S axiom, and tables used as heuristic discriminators between normal forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::enumerate::{s_only, TermSpace};
use crate::error::{Error, Result};
use crate::par;
use crate::rewrite::{run, Limits, Strategy};
use crate::term::{Atom, Position, Term};

/// A `k`-valued table with values for some atoms. Values are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    pub k: u8,
    /// Row-major: `table[(a - 1) * k + (b - 1)]` is `a · b`.
    pub table: Vec<u8>,
    pub atoms: BTreeMap<String, u8>,
}

impl Model {
    pub fn new(k: u8, table: Vec<u8>, atoms: BTreeMap<String, u8>) -> Result<Model> {
        if k == 0 {
            return Err(Error::Model("k must be positive".into()));
        }
        if table.len() != k as usize * k as usize {
            return Err(Error::Model(format!("expected {} entries, got {}", k as usize * k as usize, table.len())));
        }
        if let Some(v) = table.iter().chain(atoms.values()).find(|&&v| v == 0 || v > k) {
            return Err(Error::Model(format!("value {v} outside 1..={k}")));
        }
        Ok(Model { k, table, atoms })
    }

    /// Table given as rows, with `S` assigned `s`.
    pub fn with_s(rows: &[&[u8]], s: u8) -> Result<Model> {
        let k = u8::try_from(rows.len()).map_err(|_| Error::Model("too many rows".into()))?;
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::Model("table is not square".into()));
        }
        Model::new(k, rows.concat(), BTreeMap::from([("s".to_string(), s)]))
    }

    /// Every product equals `1`.
    pub fn constant(k: u8, atoms: &[Atom]) -> Model {
        let atoms = atoms.iter().map(|a| (a.name().to_string(), 1)).collect();
        Model {
            k,
            table: vec![1; k as usize * k as usize],
            atoms,
        }
    }

    pub fn apply(&self, a: u8, b: u8) -> u8 {
        self.table[(a as usize - 1) * self.k as usize + (b as usize - 1)]
    }

    pub fn value_of(&self, atom: &Atom) -> Option<u8> {
        self.atoms.get(atom.name()).copied()
    }

    pub fn eval(&self, t: &Term) -> Result<u8> {
        self.valuation().eval(t)
    }

    pub fn valuation(&self) -> Valuation<u8> {
        let m = self.clone();
        let atoms = self.atoms.iter().map(|(n, &v)| (Atom::var(n), v)).collect();
        Valuation::new(atoms, move |a: &u8, b: &u8| m.apply(*a, *b))
    }

    /// `((S·x)·y)·z = (x·z)·(y·z)` for every `x, y, z`. False if `S` has no value.
    pub fn satisfies_s_axiom(&self) -> bool {
        let Some(s) = self.atoms.get("s").copied() else {
            return false;
        };
        let vals = 1..=self.k;
        vals.clone().all(|x| {
            let sx = self.apply(s, x);
            vals.clone().all(|y| {
                let sxy = self.apply(sx, y);
                vals.clone().all(|z| self.apply(sxy, z) == self.apply(self.apply(x, z), self.apply(y, z)))
            })
        })
    }

    /// `(K·x)·y = x` for every `x, y`. False if `K` has no value.
    pub fn satisfies_k_axiom(&self) -> bool {
        let Some(k) = self.atoms.get("k").copied() else {
            return false;
        };
        (1..=self.k).all(|x| (1..=self.k).all(|y| self.apply(self.apply(k, x), y) == x))
    }

    /// First line `name=value,...`, then one CSV row per table row.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = self.atoms.iter().map(|(n, v)| format!("{n}={v}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for row in self.table.chunks(self.k as usize) {
            let row: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Model> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Model("empty model file".into()))?;
        let mut atoms = BTreeMap::new();
        for field in header.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (name, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Model(format!("expected name=value, got `{field}`")))?;
            atoms.insert(name.trim().to_lowercase(), parse_value(v)?);
        }
        let rows: Vec<Vec<u8>> = lines
            .map(|l| l.split(',').map(parse_value).collect::<Result<Vec<u8>>>())
            .collect::<Result<_>>()?;
        let rows: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
        let k = u8::try_from(rows.len()).map_err(|_| Error::Model("too many rows".into()))?;
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::Model("table is not square".into()));
        }
        Model::new(k, rows.concat(), atoms)
    }
}

fn parse_value(s: &str) -> Result<u8> {
    s.trim().parse().map_err(|_| Error::Model(format!("bad value `{}`", s.trim())))
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms.iter().map(|(n, v)| format!("{n}={v}")).collect();
        let rows: Vec<String> = self
            .table
            .chunks(self.k as usize)
            .map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{} | {}", atoms.join(" "), rows.join(" / "))
    }
}

type Combiner<V> = Arc<dyn Fn(&V, &V) -> V + Send + Sync>;

/// Atom values plus a binary combiner over any value type.
#[derive(Clone)]
pub struct Valuation<V> {
    pub atoms: HashMap<Atom, V>,
    combine: Combiner<V>,
}

impl<V: Clone> Valuation<V> {
    pub fn new(atoms: HashMap<Atom, V>, combine: impl Fn(&V, &V) -> V + Send + Sync + 'static) -> Valuation<V> {
        Valuation {
            atoms,
            combine: Arc::new(combine),
        }
    }

    pub fn combine(&self, a: &V, b: &V) -> V {
        (self.combine)(a, b)
    }

    /// Bottom-up fold; shared subterms are evaluated once.
    pub fn eval(&self, t: &Term) -> Result<V> {
        if let Some(a) = t.atoms().into_iter().find(|a| !self.atoms.contains_key(a)) {
            return Err(Error::MissingValue(a.name().to_string()));
        }
        Ok(t.fold(|a| self.atoms[a].clone(), |f, x| self.combine(f, x)))
    }

    /// Positions (preorder) of the subterms whose value satisfies `witness`.
    pub fn witness_scan(&self, t: &Term, witness: impl Fn(&V) -> bool) -> Result<Vec<Position>> {
        let mut hits = Vec::new();
        for (pos, sub) in t.subterms() {
            if witness(&self.eval(&sub)?) {
                hits.push(pos);
            }
        }
        Ok(hits)
    }
}

impl Valuation<u64> {
    /// `s = k = 1` and addition: the value is the leaf count.
    pub fn leaf_count() -> Valuation<u64> {
        Valuation::new(HashMap::from([(Atom::S, 1), (Atom::K, 1)]), |a, b| a + b)
    }
}

impl<V> fmt::Debug for Valuation<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Valuation").field("atoms", &self.atoms.len()).finish_non_exhaustive()
    }
}

/// Every `k`-valued table and assignment of the given atoms that satisfies the S axiom
/// (when `s` is among the atoms) and the K axiom (when `k` is). Tables in lexicographic
/// order of their row-major entries, assignments likewise.
pub fn search_exact_models(k: u8, atoms: &[Atom]) -> Result<Vec<Model>> {
    if k == 0 {
        return Err(Error::Model("k must be positive".into()));
    }
    let cells = k as u32 * k as u32;
    let tables = (k as u64).checked_pow(cells).filter(|&n| n <= 1 << 24).ok_or_else(|| {
        Error::ResourceLimit(format!("{k}^{cells} tables is too many to enumerate"))
    })?;
    let names: Vec<String> = atoms.iter().map(|a| a.name().to_string()).collect();
    let assignments = (k as u64).pow(names.len() as u32);
    let digits = |mut i: u64, n: usize| -> Vec<u8> {
        let mut out = vec![1; n];
        for d in out.iter_mut().rev() {
            *d = (i % k as u64) as u8 + 1;
            i /= k as u64;
        }
        out
    };
    let found = par::map_range(0..tables, |i| {
        let table = digits(i, cells as usize);
        (0..assignments)
            .filter_map(|j| {
                let vals = digits(j, names.len());
                let m = Model {
                    k,
                    table: table.clone(),
                    atoms: names.iter().cloned().zip(vals).collect(),
                };
                let s_ok = !m.atoms.contains_key("s") || m.satisfies_s_axiom();
                let k_ok = !m.atoms.contains_key("k") || m.satisfies_k_axiom();
                (s_ok && k_ok).then_some(m)
            })
            .collect::<Vec<_>>()
    });
    Ok(found.into_iter().flatten().collect())
}

/// Two terms with the same normal form but different values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Discrepancy {
    pub size: u64,
    pub normal_form: Term,
    pub first: Term,
    pub first_value: u8,
    pub second: Term,
    pub second_value: u8,
}

/// Outcome of grouping the normalizing S-only terms of one size by normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SizeScan {
    pub size: u64,
    pub scanned: u64,
    /// Terms that did not normalize within the limits.
    pub skipped: u64,
    pub classes: u64,
    /// First clash in enumeration order.
    pub clash: Option<Discrepancy>,
}

/// Groups the terms of one size; terms of different sizes are never compared.
pub fn scan_size(size: usize, model: &Model, limits: Limits) -> Result<SizeScan> {
    if !model.atoms.contains_key("s") {
        return Err(Error::MissingValue("s".into()));
    }
    let space = TermSpace::new(size, &s_only())?;
    let evaluated = par::map_range(0..space.len(), |i| {
        let t = space.get(i).expect("index in range");
        let r = run(&t, Strategy::LEFTMOST_OUTERMOST, limits);
        r.outcome.is_fixed_point().then(|| {
            let v = model.eval(&t).expect("s has a value");
            (t, r.final_term, v)
        })
    });
    let mut scan = SizeScan {
        size: size as u64,
        ..SizeScan::default()
    };
    let mut groups: HashMap<Term, (Term, u8)> = HashMap::new();
    for item in evaluated {
        scan.scanned += 1;
        let Some((t, nf, v)) = item else {
            scan.skipped += 1;
            continue;
        };
        match groups.get(&nf) {
            Some((first, fv)) if *fv != v && scan.clash.is_none() => {
                scan.clash = Some(Discrepancy {
                    size: size as u64,
                    normal_form: nf.clone(),
                    first: first.clone(),
                    first_value: *fv,
                    second: t,
                    second_value: v,
                });
            }
            Some(_) => {}
            None => {
                groups.insert(nf, (t, v));
            }
        }
    }
    scan.classes = groups.len() as u64;
    Ok(scan)
}

/// Scans sizes `1..=max_size`, calling `progress` after each, and stops at the first
/// size with a clash.
pub fn discriminate_with(
    max_size: usize,
    model: &Model,
    limits: Limits,
    mut progress: impl FnMut(&SizeScan),
) -> Result<Option<Discrepancy>> {
    for n in 1..=max_size {
        let scan = scan_size(n, model, limits)?;
        progress(&scan);
        if scan.clash.is_some() {
            return Ok(scan.clash);
        }
    }
    Ok(None)
}

pub fn discriminate(max_size: usize, model: &Model, limits: Limits) -> Result<Option<Discrepancy>> {
    discriminate_with(max_size, model, limits, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, Notation};

    #[test]
    fn csv_round_trip() {
        let m = Model::with_s(&[&[2, 3, 2], &[2, 2, 2], &[2, 2, 1]], 3).unwrap();
        assert_eq!(Model::from_csv(&m.to_csv()).unwrap(), m);
        assert!(Model::from_csv("s=1\n1,2\n1\n").is_err());
        assert!(Model::from_csv("s=3\n1,2\n1,1\n").is_err());
    }

    #[test]
    fn leaf_count_valuation() {
        let t = parse("S(SK)(KKS)", Notation::CompactLeft).unwrap();
        assert_eq!(Valuation::leaf_count().eval(&t).unwrap(), t.size());
        let m = Model::with_s(&[&[1]], 1).unwrap();
        assert_eq!(m.eval(&t), Err(Error::MissingValue("k".into())));
    }

    #[test]
    fn witness_positions() {
        let t = parse("S(SS)", Notation::CompactLeft).unwrap();
        let hits = Valuation::leaf_count().witness_scan(&t, |&v| v == 2).unwrap();
        assert_eq!(hits, vec![Position::from_digits(&[1]).unwrap()]);
    }

    #[test]
    fn one_valued_model_satisfies_both_axioms() {
        let m = Model::constant(1, &[Atom::S, Atom::K]);
        assert!(m.satisfies_s_axiom() && m.satisfies_k_axiom());
    }
}
