//! Structural counts of a term.

use serde::{Deserialize, Serialize};

use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Metrics {
    pub size: u64,
    pub depth: u32,
    /// Subterms shaped `_[_][_]`: parentheses needed by the right-associative notation.
    pub left_pairs: u64,
    /// Subterms shaped `_[_[_]]`: parentheses needed by the left-associative notation.
    pub right_pairs: u64,
    /// Subterms shaped `_[_]`, always `size - 1`.
    pub plain_brackets: u64,
}

pub fn metrics(t: &Term) -> Metrics {
    // (left pairs, right pairs, is application)
    let (left_pairs, right_pairs, _) = t.fold(
        |_| (0u64, 0u64, false),
        |f, x| (f.0 + x.0 + f.2 as u64, f.1 + x.1 + x.2 as u64, true),
    );
    Metrics {
        size: t.size(),
        depth: t.depth(),
        left_pairs,
        right_pairs,
        plain_brackets: t.size() - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, print, Notation};

    #[test]
    fn small_examples() {
        let m = metrics(&parse("s[s][s]", Notation::Brackets).unwrap());
        assert_eq!((m.left_pairs, m.right_pairs, m.size, m.depth), (1, 0, 3, 2));
        let m = metrics(&parse("s[s[s]]", Notation::Brackets).unwrap());
        assert_eq!((m.left_pairs, m.right_pairs, m.plain_brackets), (0, 1, 2));
    }

    #[test]
    fn pair_counts_match_printed_parentheses() {
        let t = parse("s[s[s[s]][k[s[s[s]][s]][s]]][k[s[s[s]][s]][s][s[s[s]][k[s[s[s]][s]][s]]]]", Notation::Brackets)
            .unwrap();
        let m = metrics(&t);
        let left = print(&t, Notation::CompactLeft);
        let right = print(&t, Notation::ParensRight);
        assert_eq!(left.matches('(').count() as u64, m.right_pairs);
        assert_eq!(right.matches('(').count() as u64, m.left_pairs);
        assert_eq!(m.right_pairs, 13);
    }
}
