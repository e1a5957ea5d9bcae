//! Church numerals: `n` is `succ` nested `n` times around `s[k]`; decoding applies the
//! numeral to `s` and `k` and counts the `s` wrappers around `k`.

use super::{compile_closed, Flavor, Program};
use crate::notation::{parse, Notation};
use crate::rewrite::{run, Limits, Strategy};
use crate::term::{Atom, Term, View};

fn lambda(body: &str, vars: &[&str]) -> Program {
    let t = parse(body, Notation::Brackets).expect("valid literal");
    let order: Vec<Atom> = vars.iter().map(|v| Atom::var(v)).collect();
    compile_closed(&t, &order, Flavor::Optimized).expect("closed over its variables")
}

/// `n f x = f (n f x)`, abstracted. Comes out as `s[s[k[s]][k]]`.
pub fn church_succ() -> Program {
    lambda("f[n[f][x]]", &["n", "f", "x"])
}

pub fn church_encode(n: u64) -> Term {
    let succ = church_succ().body;
    let zero = Term::app(Term::s(), Term::k());
    (0..n).fold(zero, |acc, _| Term::app(succ.clone(), acc))
}

pub fn church_decode(t: &Term, limits: Limits) -> Option<u64> {
    let applied = Term::apply_all(t.clone(), [Term::s(), Term::k()]);
    let r = run(&applied, Strategy::LEFTMOST_OUTERMOST, limits);
    if !r.outcome.is_fixed_point() {
        return None;
    }
    let mut cur = r.final_term;
    let mut n = 0;
    loop {
        match cur.view() {
            View::Atom(Atom::K) => return Some(n),
            View::App(f, x) if f.as_atom() == Some(&Atom::S) => {
                n += 1;
                cur = x.clone();
            }
            _ => return None,
        }
    }
}

/// `m n f x = m f (n f x)`.
pub fn church_add() -> Program {
    lambda("m[f][n[f][x]]", &["m", "n", "f", "x"])
}

/// `m n f = m (n f)`.
pub fn church_times() -> Program {
    lambda("m[n[f]]", &["m", "n", "f"])
}

/// `f = (x = f (x x)) (x = f (x x))` with both halves abstracted.
pub fn y_combinator() -> Term {
    let body = parse("f[x[x]]", Notation::Brackets).expect("valid literal");
    let half = super::bracket(&Atom::var("x"), &body, Flavor::Optimized);
    super::bracket(&Atom::var("f"), &Term::app(half.clone(), half), Flavor::Optimized)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_matches_iterated_form() {
        assert_eq!(church_succ().body, parse("s[s[k[s]][k]]", Notation::Brackets).unwrap());
        assert_eq!(church_decode(&church_encode(0), Limits::default()), Some(0));
        assert_eq!(church_decode(&Term::k(), Limits::default()), None);
    }
}
