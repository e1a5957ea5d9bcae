//! Immutable binary application trees over the atoms `s`, `k` and free variables.
//!
//! A [`Term`] is a reference-counted node. Subterms are shared freely (the S rule
//! duplicates its third argument by sharing it), so a term of leaf count 10^6 may
//! occupy only a few thousand nodes. Every node caches its leaf count, depth, a
//! structural hash and a summary of where redexes sit below it; the rewrite
//! engine relies on the redex summary to find the redex a scheme would pick in
//! time proportional to the tree depth.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A leaf of a term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    S,
    K,
    Var(Arc<str>),
}

impl Atom {
    pub fn var(name: &str) -> Atom {
        match name {
            "s" => Atom::S,
            "k" => Atom::K,
            other => Atom::Var(Arc::from(other)),
        }
    }

    /// Name as written in bracket notation (`s`, `k`, or the variable name).
    pub fn name(&self) -> &str {
        match self {
            Atom::S => "s",
            Atom::K => "k",
            Atom::Var(v) => v,
        }
    }

    pub fn is_combinator(&self) -> bool {
        matches!(self, Atom::S | Atom::K)
    }

    fn structural_hash(&self) -> u64 {
        match self {
            Atom::S => mix(0x5f),
            Atom::K => mix(0x6b),
            Atom::Var(v) => {
                // FNV-1a, then a finalizer
                let mut h: u64 = 0xcbf2_9ce4_8422_2325;
                for b in v.bytes() {
                    h ^= b as u64;
                    h = h.wrapping_mul(0x0100_0000_01b3);
                }
                mix(h ^ 0x7661_7200)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Atom, D::Error> {
        Ok(Atom::var(&String::deserialize(deserializer)?))
    }
}

/// Which rewrite rule a redex matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// `s[x][y][z] -> x[z][y[z]]`
    S,
    /// `k[x][y] -> x`
    K,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::S => f.write_str("S"),
            Rule::K => f.write_str("K"),
        }
    }
}

const NONE: u32 = u32::MAX;

pub(crate) enum Kind {
    Atom(Atom),
    App(Term, Term),
}

pub(crate) struct Node {
    kind: Kind,
    size: u64,
    hash: u64,
    depth: u32,
    rule: Option<Rule>,
    // relative depth of the shallowest / deepest redex in this subtree, NONE if there is none
    shallow: u32,
    deep: u32,
}

/// An immutable combinator term. Cloning is O(1).
#[derive(Clone)]
pub struct Term(Arc<Node>);

/// Borrowed view of a term's top constructor.
pub enum View<'a> {
    Atom(&'a Atom),
    App(&'a Term, &'a Term),
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Term {
    pub fn atom(atom: Atom) -> Term {
        let hash = atom.structural_hash();
        Term(Arc::new(Node {
            kind: Kind::Atom(atom),
            size: 1,
            hash,
            depth: 0,
            rule: None,
            shallow: NONE,
            deep: NONE,
        }))
    }

    pub fn s() -> Term {
        Term::atom(Atom::S)
    }

    pub fn k() -> Term {
        Term::atom(Atom::K)
    }

    pub fn var(name: &str) -> Term {
        Term::atom(Atom::var(name))
    }

    /// `function[argument]`
    pub fn app(function: Term, argument: Term) -> Term {
        let rule = redex_rule(&function);
        let f = &function.0;
        let a = &argument.0;
        let child = |x: u32| if x == NONE { NONE } else { x + 1 };
        let (fs, as_) = (child(f.shallow), child(a.shallow));
        let (fd, ad) = (child(f.deep), child(a.deep));
        let shallow = if rule.is_some() { 0 } else { fs.min(as_) };
        let deep = match (fd, ad) {
            (NONE, NONE) => {
                if rule.is_some() {
                    0
                } else {
                    NONE
                }
            }
            (NONE, d) | (d, NONE) => d,
            (x, y) => x.max(y),
        };
        let hash = mix(f.hash.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ a.hash.rotate_left(29) ^ 0xa5a5);
        let node = Node {
            size: f.size + a.size,
            hash,
            depth: 1 + f.depth.max(a.depth),
            rule,
            shallow,
            deep,
            kind: Kind::App(function, argument),
        };
        Term(Arc::new(node))
    }

    /// Left-associated application `head[a1][a2]...`.
    pub fn apply_all<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn view(&self) -> View<'_> {
        match &self.0.kind {
            Kind::Atom(a) => View::Atom(a),
            Kind::App(f, x) => View::App(f, x),
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match &self.0.kind {
            Kind::Atom(a) => Some(a),
            Kind::App(..) => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match &self.0.kind {
            Kind::Atom(_) => None,
            Kind::App(f, x) => Some((f, x)),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.0.kind, Kind::Atom(_))
    }

    /// Leaf count.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Number of application nodes on the longest root-to-leaf path (atoms have depth 0).
    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// The rule this node matches at its root, if it is a redex.
    pub fn redex_rule(&self) -> Option<Rule> {
        self.0.rule
    }

    /// True iff some subterm (including the term itself) is a redex.
    pub fn has_redex(&self) -> bool {
        self.0.shallow != NONE
    }

    pub fn is_normal(&self) -> bool {
        !self.has_redex()
    }

    pub(crate) fn shallowest_redex(&self) -> u32 {
        self.0.shallow
    }

    pub(crate) fn deepest_redex(&self) -> u32 {
        self.0.deep
    }

    pub fn ptr_eq(a: &Term, b: &Term) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }

    /// Subterm at `pos`, or `None` if the path leaves the tree.
    pub fn at(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &step in pos.steps() {
            let (f, x) = cur.as_app()?;
            cur = if step == 0 { f } else { x };
        }
        Some(cur)
    }

    /// Replace the subterm at `pos` by `replacement`, rebuilding the ancestors.
    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Result<Term> {
        let mut spine: Vec<&Term> = Vec::with_capacity(pos.len());
        let mut cur = self;
        for &step in pos.steps() {
            let (f, x) = cur
                .as_app()
                .ok_or_else(|| Error::InvalidPosition(pos.to_string()))?;
            spine.push(cur);
            cur = if step == 0 { f } else { x };
        }
        let mut out = replacement;
        for (node, &step) in spine.iter().zip(pos.steps()).rev() {
            let (f, x) = node.as_app().expect("spine holds applications");
            out = if step == 0 {
                Term::app(out, x.clone())
            } else {
                Term::app(f.clone(), out)
            };
        }
        Ok(out)
    }

    /// Iterates over the atoms in left-to-right order.
    pub fn leaves(&self) -> Leaves<'_> {
        Leaves { stack: vec![self] }
    }

    /// Pre-order traversal of every subterm together with its position.
    pub fn subterms(&self) -> Vec<(Position, Term)> {
        let mut out = Vec::new();
        let mut stack = vec![(Position::root(), self.clone())];
        while let Some((pos, t)) = stack.pop() {
            if let Some((f, x)) = t.as_app() {
                stack.push((pos.child(1), x.clone()));
                stack.push((pos.child(0), f.clone()));
            }
            out.push((pos, t));
        }
        out
    }

    /// Bottom-up fold that visits each shared node once.
    pub fn fold<T: Clone>(&self, mut leaf: impl FnMut(&Atom) -> T, mut app: impl FnMut(&T, &T) -> T) -> T {
        let key = |t: &Term| Arc::as_ptr(&t.0) as usize;
        let mut memo: HashMap<usize, T> = HashMap::new();
        let mut stack: Vec<(&Term, bool)> = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            if memo.contains_key(&key(t)) {
                continue;
            }
            match t.view() {
                View::Atom(a) => {
                    memo.insert(key(t), leaf(a));
                }
                View::App(f, x) if expanded => {
                    let v = app(&memo[&key(f)], &memo[&key(x)]);
                    memo.insert(key(t), v);
                }
                View::App(f, x) => {
                    stack.push((t, true));
                    stack.push((x, false));
                    stack.push((f, false));
                }
            }
        }
        memo.remove(&key(self)).expect("root evaluated")
    }

    pub(crate) fn node_ptr(&self) -> *const () {
        Arc::as_ptr(&self.0) as *const ()
    }

    /// Sums over the tree (counting shared subterms once per occurrence): `stop` gives a
    /// node's value directly, or `None` to add up its two children.
    pub(crate) fn sum_over(&self, mut stop: impl FnMut(&Term) -> Option<u64>) -> u64 {
        let mut memo: HashMap<*const (), u64> = HashMap::new();
        let mut stack: Vec<(&Term, bool)> = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            let k = t.node_ptr();
            if memo.contains_key(&k) {
                continue;
            }
            if !expanded {
                if let Some(v) = stop(t) {
                    memo.insert(k, v);
                    continue;
                }
            }
            match t.view() {
                View::Atom(_) => {
                    memo.insert(k, 0);
                }
                View::App(f, x) if expanded => {
                    let v = memo[&f.node_ptr()].saturating_add(memo[&x.node_ptr()]);
                    memo.insert(k, v);
                }
                View::App(f, x) => {
                    stack.push((t, true));
                    stack.push((x, false));
                    stack.push((f, false));
                }
            }
        }
        memo[&self.node_ptr()]
    }

    /// True iff only `s` and `k` occur.
    pub fn is_closed(&self) -> bool {
        self.leaves().all(Atom::is_combinator)
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        self.leaves().any(|a| a == atom)
    }

    /// Distinct atoms, in order of first occurrence.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        for a in self.leaves() {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        out
    }
}

fn redex_rule(function: &Term) -> Option<Rule> {
    let (g, _) = function.as_app()?;
    match &g.0.kind {
        Kind::Atom(Atom::K) => Some(Rule::K),
        Kind::App(h, _) => match h.as_atom() {
            Some(Atom::S) => Some(Rule::S),
            _ => None,
        },
        _ => None,
    }
}

pub struct Leaves<'a> {
    stack: Vec<&'a Term>,
}

impl<'a> Iterator for Leaves<'a> {
    type Item = &'a Atom;

    fn next(&mut self) -> Option<&'a Atom> {
        while let Some(t) = self.stack.pop() {
            match &t.0.kind {
                Kind::Atom(a) => return Some(a),
                Kind::App(f, x) => {
                    self.stack.push(x);
                    self.stack.push(f);
                }
            }
        }
        None
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        let mut stack: Vec<(&Term, &Term)> = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            if Arc::ptr_eq(&a.0, &b.0) {
                continue;
            }
            if a.0.hash != b.0.hash || a.0.size != b.0.size {
                return false;
            }
            match (&a.0.kind, &b.0.kind) {
                (Kind::Atom(x), Kind::Atom(y)) => {
                    if x != y {
                        return false;
                    }
                }
                (Kind::App(f1, x1), Kind::App(f2, x2)) => {
                    stack.push((x1, x2));
                    stack.push((f1, f2));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Drop for Node {
    fn drop(&mut self) {
        // Iterative teardown: long spines would otherwise recurse once per level.
        let Kind::App(..) = self.kind else { return };
        let mut stack = Vec::new();
        if let Kind::App(f, x) = std::mem::replace(&mut self.kind, Kind::Atom(Atom::S)) {
            stack.push(f);
            stack.push(x);
        }
        while let Some(t) = stack.pop() {
            if let Some(mut node) = Arc::into_inner(t.0) {
                if let Kind::App(f, x) = std::mem::replace(&mut node.kind, Kind::Atom(Atom::S)) {
                    stack.push(f);
                    stack.push(x);
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print(self, crate::notation::Notation::Brackets))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print(self, crate::notation::Notation::Brackets))
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&crate::notation::print(self, crate::notation::Notation::Brackets))
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Term, D::Error> {
        let text = String::deserialize(deserializer)?;
        crate::notation::parse(&text, crate::notation::Notation::Brackets).map_err(serde::de::Error::custom)
    }
}

/// A head/argument path from the root: `0` descends into the function, `1` into the argument.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u8>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    /// Builds a position from digits; anything other than 0 or 1 is rejected.
    pub fn from_digits(digits: &[u8]) -> Result<Position> {
        if digits.iter().any(|&d| d > 1) {
            return Err(Error::InvalidPosition(format!("{digits:?}")));
        }
        Ok(Position(digits.to_vec()))
    }

    pub fn child(&self, step: u8) -> Position {
        debug_assert!(step <= 1);
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(step);
        Position(v)
    }

    pub(crate) fn push(&mut self, step: u8) {
        self.0.push(step);
    }

    pub fn steps(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Prefix test; a position is a prefix of itself.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// True when one position is an ancestor of (or equal to) the other.
    pub fn overlaps(&self, other: &Position) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }
}

impl std::str::FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Position> {
        let digits: Option<Vec<u8>> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '{' | '}'))
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        digits
            .map(Position)
            .ok_or_else(|| Error::InvalidPosition(s.to_string()))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({self})")
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let digits: String = self.0.iter().map(|d| char::from(b'0' + d)).collect();
        serializer.serialize_str(&digits)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Position, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
