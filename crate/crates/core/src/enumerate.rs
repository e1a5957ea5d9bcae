//! Exhaustive enumeration of all terms of a given leaf count.
//!
//! Order: tree shapes are the outer loop, leaf labellings the inner loop. Shapes of size
//! `n` are ordered by the leaf count of the function part (1 up to `n - 1`), then by the
//! function's shape, then by the argument's shape. Labellings run lexicographically over
//! the alphabet as given, first leaf most significant. Every index in `0..len()` can be
//! decoded directly, so a census can be split into index ranges.

use crate::error::{Error, Result};
use crate::term::{Atom, Term};

/// Catalan numbers, `catalan(n) = (2n)! / (n! (n+1)!)`; `None` on overflow.
pub fn catalan(n: u64) -> Option<u128> {
    let mut c: u128 = 1;
    for i in 0..n {
        // C(i+1) = C(i) * 2(2i+1) / (i+2)
        c = c.checked_mul(2 * (2 * i as u128 + 1))? / (i as u128 + 2);
    }
    Some(c)
}

/// Number of terms with `size` leaves over an alphabet of `alphabet` atoms.
pub fn term_count(size: u64, alphabet: u64) -> Option<u128> {
    if size == 0 {
        return Some(0);
    }
    let labels = (alphabet as u128).checked_pow(u32::try_from(size).ok()?)?;
    catalan(size - 1)?.checked_mul(labels)
}

/// All terms of one size over one alphabet, addressable by index.
#[derive(Clone, Debug)]
pub struct TermSpace {
    size: usize,
    alphabet: Vec<Atom>,
    // each shape in Polish form: true = application, false = leaf
    shapes: Vec<Vec<bool>>,
    labellings: u64,
}

/// Default ceiling on the number of shapes a [`TermSpace`] will materialise.
pub const MAX_SHAPES: u64 = 10_000_000;

impl TermSpace {
    pub fn new(size: usize, alphabet: &[Atom]) -> Result<TermSpace> {
        TermSpace::with_cap(size, alphabet, u64::MAX)
    }

    /// Fails with a resource-limit error if more than `max_terms` terms would be produced.
    pub fn with_cap(size: usize, alphabet: &[Atom], max_terms: u64) -> Result<TermSpace> {
        if size == 0 {
            return Err(Error::Invalid("term size must be at least 1".into()));
        }
        if alphabet.is_empty() {
            return Err(Error::Invalid("alphabet must not be empty".into()));
        }
        let total = term_count(size as u64, alphabet.len() as u64)
            .filter(|&n| n <= u64::MAX as u128)
            .ok_or_else(|| Error::ResourceLimit(format!("too many terms of size {size}")))?;
        if total > max_terms as u128 {
            return Err(Error::ResourceLimit(format!(
                "{total} terms of size {size} exceed the cap of {max_terms}"
            )));
        }
        let shape_count = catalan(size as u64 - 1).expect("bounded by total") as u64;
        if shape_count > MAX_SHAPES {
            return Err(Error::ResourceLimit(format!("{shape_count} tree shapes")));
        }
        let labellings = (alphabet.len() as u64).pow(size as u32);
        Ok(TermSpace {
            size,
            alphabet: alphabet.to_vec(),
            shapes: shapes(size),
            labellings,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn alphabet(&self) -> &[Atom] {
        &self.alphabet
    }

    pub fn len(&self) -> u64 {
        self.shapes.len() as u64 * self.labellings
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The term at `index` in enumeration order.
    pub fn get(&self, index: u64) -> Option<Term> {
        if index >= self.len() {
            return None;
        }
        let shape = &self.shapes[(index / self.labellings) as usize];
        let mut rest = index % self.labellings;
        let base = self.alphabet.len() as u64;
        let mut leaves = vec![0usize; self.size];
        for slot in leaves.iter_mut().rev() {
            *slot = (rest % base) as usize;
            rest /= base;
        }
        Some(self.build(shape, &leaves))
    }

    fn build(&self, shape: &[bool], leaves: &[usize]) -> Term {
        let mut pending: Vec<Option<Term>> = Vec::with_capacity(self.size);
        let mut next_leaf = 0;
        for &is_app in shape {
            if is_app {
                pending.push(None);
                continue;
            }
            let mut value = Term::atom(self.alphabet[leaves[next_leaf]].clone());
            next_leaf += 1;
            loop {
                match pending.pop() {
                    None => return value,
                    Some(None) => {
                        pending.push(Some(value));
                        break;
                    }
                    Some(Some(f)) => value = Term::app(f, value),
                }
            }
        }
        unreachable!("shapes are complete Polish strings")
    }

    pub fn iter(&self) -> Terms<'_> {
        self.range(0, self.len())
    }

    /// Terms with indices in `start..end`.
    pub fn range(&self, start: u64, end: u64) -> Terms<'_> {
        Terms {
            space: self,
            next: start,
            end: end.min(self.len()),
        }
    }
}

pub struct Terms<'a> {
    space: &'a TermSpace,
    next: u64,
    end: u64,
}

impl Iterator for Terms<'_> {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        if self.next >= self.end {
            return None;
        }
        let t = self.space.get(self.next);
        self.next += 1;
        t
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Terms<'_> {}

/// All shapes with `n` leaves, in enumeration order, as Polish bit strings.
fn shapes(n: usize) -> Vec<Vec<bool>> {
    let mut table: Vec<Vec<Vec<bool>>> = vec![Vec::new(), vec![vec![false]]];
    for m in 2..=n {
        let mut out = Vec::new();
        for left in 1..m {
            for l in &table[left] {
                for r in &table[m - left] {
                    let mut s = Vec::with_capacity(2 * m - 1);
                    s.push(true);
                    s.extend_from_slice(l);
                    s.extend_from_slice(r);
                    out.push(s);
                }
            }
        }
        table.push(out);
    }
    table.swap_remove(n)
}

/// Enumerates all terms of `size` over `alphabet`.
pub fn enumerate(size: usize, alphabet: &[Atom]) -> Result<Vec<Term>> {
    Ok(TermSpace::new(size, alphabet)?.iter().collect())
}

/// The combinator alphabets used throughout.
pub fn sk() -> Vec<Atom> {
    vec![Atom::S, Atom::K]
}

pub fn s_only() -> Vec<Atom> {
    vec![Atom::S]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{print, Notation};
    use std::collections::HashSet;

    #[test]
    fn catalan_values() {
        let v: Vec<u128> = (0..10).map(|n| catalan(n).unwrap()).collect();
        assert_eq!(v, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]);
    }

    #[test]
    fn size_three_listing() {
        let got: Vec<String> = enumerate(3, &sk())
            .unwrap()
            .iter()
            .map(|t| print(t, Notation::CompactLeft))
            .collect();
        let want = [
            "S(SS)", "S(SK)", "S(KS)", "S(KK)", "K(SS)", "K(SK)", "K(KS)", "K(KK)", "SSS", "SSK", "SKS",
            "SKK", "KSS", "KSK", "KKS", "KKK",
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn distinct_and_counted() {
        for n in 1..=6 {
            let terms = enumerate(n, &sk()).unwrap();
            assert_eq!(terms.len() as u128, term_count(n as u64, 2).unwrap());
            let set: HashSet<_> = terms.iter().cloned().collect();
            assert_eq!(set.len(), terms.len());
            assert!(terms.iter().all(|t| t.size() == n as u64));
        }
    }

    #[test]
    fn ranges_partition_the_space() {
        let space = TermSpace::new(5, &sk()).unwrap();
        let whole: Vec<Term> = space.iter().collect();
        let mut parts: Vec<Term> = Vec::new();
        for start in (0..space.len()).step_by(37) {
            parts.extend(space.range(start, start + 37));
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn caps_and_bad_input() {
        assert!(matches!(TermSpace::with_cap(8, &sk(), 1000), Err(Error::ResourceLimit(_))));
        assert!(TermSpace::new(0, &sk()).is_err());
        assert!(TermSpace::new(3, &[]).is_err());
    }
}
