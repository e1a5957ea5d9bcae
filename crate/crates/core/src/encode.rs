//! Terms as integers: the Polish form with application = 1 and atom = 0, read in binary.

use crate::error::{Error, Result};
use crate::term::{Atom, Term, View};

/// Polish-order bits of the tree shape: `true` for an application, `false` for a leaf.
pub fn polish_bits(t: &Term) -> Vec<bool> {
    let mut bits = Vec::with_capacity((2 * t.size()).min(1 << 24) as usize);
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        match t.view() {
            View::Atom(_) => bits.push(false),
            View::App(f, x) => {
                bits.push(true);
                stack.push(x);
                stack.push(f);
            }
        }
    }
    bits
}

/// Encodes a term built from a single kind of atom. Terms above 64 leaves do not fit.
pub fn encode_number(t: &Term) -> Result<u128> {
    let atoms = t.atoms();
    if atoms.len() > 1 {
        return Err(Error::Invalid(format!(
            "encoding needs a single atom kind, found {}",
            atoms.len()
        )));
    }
    if t.size() > 64 {
        return Err(Error::ResourceLimit(format!("term of size {} needs more than 128 bits", t.size())));
    }
    Ok(polish_bits(t).into_iter().fold(0u128, |n, b| (n << 1) | b as u128))
}

/// Inverse of [`encode_number`], labelling every leaf with `leaf`.
pub fn decode_number(n: u128, leaf: &Atom) -> Result<Term> {
    if n == 0 {
        return Ok(Term::atom(leaf.clone()));
    }
    let width = 128 - n.leading_zeros();
    let mut pending: Vec<Option<Term>> = Vec::new();
    for i in (0..width).rev() {
        if (n >> i) & 1 == 1 {
            pending.push(None);
            continue;
        }
        let mut value = Term::atom(leaf.clone());
        loop {
            match pending.pop() {
                None => {
                    return if i == 0 {
                        Ok(value)
                    } else {
                        Err(Error::Decode(format!("{n}: trailing bits after a complete term")))
                    };
                }
                Some(None) => {
                    pending.push(Some(value));
                    break;
                }
                Some(Some(f)) => value = Term::app(f, value),
            }
        }
    }
    Err(Error::Decode(format!("{n}: incomplete term")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, Notation};

    #[test]
    fn atom_is_zero() {
        assert_eq!(encode_number(&Term::s()).unwrap(), 0);
        assert_eq!(decode_number(0, &Atom::S).unwrap(), Term::s());
    }

    #[test]
    fn small_codes() {
        // s[s] = 100, s[s][s] = 11000, s[s[s]] = 10100
        assert_eq!(encode_number(&parse("s[s]", Notation::Brackets).unwrap()).unwrap(), 0b100);
        assert_eq!(encode_number(&parse("s[s][s]", Notation::Brackets).unwrap()).unwrap(), 0b11000);
        assert_eq!(encode_number(&parse("s[s[s]]", Notation::Brackets).unwrap()).unwrap(), 0b10100);
    }

    #[test]
    fn malformed_numbers() {
        assert!(decode_number(0b1, &Atom::S).is_err());
        assert!(decode_number(0b10, &Atom::S).is_err());
        assert!(decode_number(0b1000, &Atom::S).is_err());
    }

    #[test]
    fn mixed_atoms_rejected() {
        assert!(encode_number(&parse("s[k]", Notation::Brackets).unwrap()).is_err());
    }
}
