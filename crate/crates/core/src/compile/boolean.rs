//! Two-input Boolean functions computed by closed terms under a choice of truth values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::{sk, TermSpace};
use crate::error::Result;
use crate::par;
use crate::rewrite::{run, Limits, Strategy};
use crate::term::Term;

/// Outputs on the inputs `(F,F), (F,T), (T,F), (T,T)`, the first in bit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TruthTable(pub u8);

impl TruthTable {
    pub const INPUTS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

    pub fn from_fn(f: impl Fn(bool, bool) -> bool) -> TruthTable {
        let bits = Self::INPUTS
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &(p, q))| acc | (f(p, q) as u8) << i);
        TruthTable(bits)
    }

    pub fn output(self, row: usize) -> bool {
        self.0 >> row & 1 == 1
    }

    pub fn all() -> impl Iterator<Item = TruthTable> {
        (0..16).map(TruthTable)
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 16] = [
            "False", "Nor", "NotFirstAndSecond", "NotFirst", "FirstAndNotSecond", "NotSecond", "Xor", "Nand",
            "And", "Equal", "Second", "Implies", "First", "ConverseImplies", "Or", "True",
        ];
        NAMES[self.0 as usize & 15]
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..4 {
            f.write_str(if self.output(row) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The closed normal forms standing for true and false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Encoding {
    pub true_term: Term,
    pub false_term: Term,
}

impl Default for Encoding {
    /// True is `s[k]`, false is `k`.
    fn default() -> Encoding {
        Encoding {
            true_term: Term::app(Term::s(), Term::k()),
            false_term: Term::k(),
        }
    }
}

impl Encoding {
    pub fn swapped(&self) -> Encoding {
        Encoding {
            true_term: self.false_term.clone(),
            false_term: self.true_term.clone(),
        }
    }

    pub fn encode(&self, b: bool) -> Term {
        if b { self.true_term.clone() } else { self.false_term.clone() }
    }

    pub fn decode(&self, t: &Term) -> Option<bool> {
        if *t == self.true_term {
            Some(true)
        } else if *t == self.false_term {
            Some(false)
        } else {
            None
        }
    }
}

/// Result of checking a candidate against a table, row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub ok: bool,
    /// What each row produced; `None` for a non-normalizing or non-Boolean result.
    pub rows: [Option<bool>; 4],
    pub diagnostic: Option<String>,
}

fn eval_row(t: &Term, enc: &Encoding, p: bool, q: bool, limits: Limits) -> std::result::Result<bool, String> {
    let applied = Term::apply_all(t.clone(), [enc.encode(p), enc.encode(q)]);
    let r = run(&applied, Strategy::LEFTMOST_OUTERMOST, limits);
    if !r.outcome.is_fixed_point() {
        return Err(format!("no normal form within limits ({:?})", r.outcome));
    }
    enc.decode(&r.final_term).ok_or_else(|| format!("normal form {} is not a truth value", r.final_term))
}

pub fn boolean_verify(t: &Term, table: TruthTable, enc: &Encoding, limits: Limits) -> Verification {
    let mut v = Verification {
        ok: true,
        rows: [None; 4],
        diagnostic: None,
    };
    for (i, &(p, q)) in TruthTable::INPUTS.iter().enumerate() {
        match eval_row(t, enc, p, q, limits) {
            Ok(out) => {
                v.rows[i] = Some(out);
                if out != table.output(i) {
                    v.ok = false;
                    v.diagnostic.get_or_insert_with(|| format!("row {i} gives {out}"));
                }
            }
            Err(e) => {
                v.ok = false;
                v.diagnostic.get_or_insert_with(|| format!("row {i}: {e}"));
            }
        }
    }
    v
}

/// The table `t` computes, if every row yields a truth value.
pub fn computes(t: &Term, enc: &Encoding, limits: Limits) -> Option<TruthTable> {
    let mut bits = 0;
    for (i, &(p, q)) in TruthTable::INPUTS.iter().enumerate() {
        bits |= (eval_row(t, enc, p, q, limits).ok()? as u8) << i;
    }
    Some(TruthTable(bits))
}

/// For each of the 16 tables, the first closed S/K term (by size, then enumeration
/// order) of size at most `max_size` computing it.
pub fn minimal_forms(max_size: usize, enc: &Encoding, limits: Limits) -> Result<[Option<Term>; 16]> {
    let mut best: [Option<Term>; 16] = Default::default();
    for n in 1..=max_size {
        if best.iter().all(Option::is_some) {
            break;
        }
        let space = TermSpace::new(n, &sk())?;
        let tables = par::map_range(0..space.len(), |i| {
            let t = space.get(i).expect("index in range");
            computes(&t, enc, limits).map(|tt| (tt, t))
        });
        for (tt, t) in tables.into_iter().flatten() {
            best[tt.0 as usize].get_or_insert(t);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, Notation};

    #[test]
    fn table_bits() {
        assert_eq!(TruthTable::from_fn(|p, q| p && q), TruthTable(8));
        assert_eq!(TruthTable::from_fn(|p, q| p || q).name(), "Or");
        assert_eq!(TruthTable::from_fn(|_, q| q).to_string(), "0101");
    }

    #[test]
    fn second_argument_selector() {
        let t = parse("SK", Notation::CompactLeft).unwrap();
        for enc in [Encoding::default(), Encoding::default().swapped()] {
            assert_eq!(computes(&t, &enc, Limits::default()), Some(TruthTable::from_fn(|_, q| q)));
        }
    }
}
