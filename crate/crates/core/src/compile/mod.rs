//! Bracket abstraction: turning terms with variables into closed S/K programs, plus
//! the encodings and searches built on it.

pub mod boolean;
pub mod church;
pub mod programs;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rewrite::{run, Limits, Strategy};
use crate::term::{Atom, Term, View};

pub use boolean::{boolean_verify, computes, minimal_forms, Encoding, TruthTable, Verification};
pub use church::{church_add, church_decode, church_encode, church_succ, church_times, y_combinator};
pub use programs::{objects_census, program_search, shortest_programs, Found, ProgramStats};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Flavor {
    /// `[x]x = SKK`, `[x]a = Ka` for leaves, `[x](MN) = S([x]M)([x]N)`.
    Naive,
    /// Adds `[x]M = KM` whenever `x` is not free in `M`, and `[x](Mx) = M`.
    #[default]
    Optimized,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Naive => "naive",
            Flavor::Optimized => "optimized",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(Flavor::Naive),
            "optimized" | "opt" => Ok(Flavor::Optimized),
            _ => Err(Error::Invalid(format!("unknown abstraction flavor `{s}`"))),
        }
    }
}

fn skk() -> Term {
    Term::app(Term::app(Term::s(), Term::k()), Term::k())
}

fn k_of(t: Term) -> Term {
    Term::app(Term::k(), t)
}

fn s_of(a: Term, b: Term) -> Term {
    Term::app(Term::app(Term::s(), a), b)
}

/// `[v]t`: a term with no free `v` such that applying it to `v` gives back `t`.
pub fn bracket(v: &Atom, t: &Term, flavor: Flavor) -> Term {
    match flavor {
        Flavor::Naive => naive(v, t),
        Flavor::Optimized => optimized(v, t),
    }
}

fn naive(v: &Atom, t: &Term) -> Term {
    match t.view() {
        View::Atom(a) if a == v => skk(),
        View::Atom(_) => k_of(t.clone()),
        View::App(m, n) => s_of(naive(v, m), naive(v, n)),
    }
}

fn optimized(v: &Atom, t: &Term) -> Term {
    if !t.contains_atom(v) {
        return k_of(t.clone());
    }
    match t.view() {
        View::Atom(_) => skk(),
        View::App(m, n) if n.as_atom() == Some(v) && !m.contains_atom(v) => m.clone(),
        View::App(m, n) => s_of(optimized(v, m), optimized(v, n)),
    }
}

/// A closed program expecting `arity` arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Program {
    pub body: Term,
    pub arity: usize,
}

impl Program {
    pub fn apply<I: IntoIterator<Item = Term>>(&self, args: I) -> Term {
        Term::apply_all(self.body.clone(), args)
    }

    /// Applies the program to the arguments and normalizes leftmost-outermost.
    pub fn run<I: IntoIterator<Item = Term>>(&self, args: I, limits: Limits) -> Option<Term> {
        let r = run(&self.apply(args), Strategy::LEFTMOST_OUTERMOST, limits);
        r.outcome.is_fixed_point().then_some(r.final_term)
    }
}

/// `[v1]([v2](...([vk] t)))`, so that `body[v1]...[vk]` normalizes to `t`.
pub fn compile_closed(t: &Term, order: &[Atom], flavor: Flavor) -> Result<Program> {
    if let Some(free) = t.atoms().into_iter().find(|a| !a.is_combinator() && !order.contains(a)) {
        return Err(Error::Invalid(format!("variable `{}` is not in the abstraction order", free.name())));
    }
    if let Some(bad) = order.iter().find(|a| a.is_combinator()) {
        return Err(Error::Invalid(format!("cannot abstract over combinator `{}`", bad.name())));
    }
    let body = order.iter().rev().fold(t.clone(), |acc, v| bracket(v, &acc, flavor));
    Ok(Program {
        body,
        arity: order.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, Notation};

    fn b(s: &str) -> Term {
        parse(s, Notation::Brackets).unwrap()
    }

    #[test]
    fn naive_self_application() {
        let x = Atom::var("x");
        assert_eq!(bracket(&x, &b("x[x]"), Flavor::Naive), b("s[s[k][k]][s[k][k]]"));
        assert_eq!(bracket(&x, &b("x[x]"), Flavor::Optimized), b("s[s[k][k]][s[k][k]]"));
    }

    #[test]
    fn eta_and_constant_rules() {
        let x = Atom::var("x");
        assert_eq!(bracket(&x, &b("f[x]"), Flavor::Optimized), b("f"));
        assert_eq!(bracket(&x, &b("f[g]"), Flavor::Optimized), b("k[f[g]]"));
        assert_eq!(bracket(&x, &b("f[g]"), Flavor::Naive), b("s[k[f]][k[g]]"));
    }

    #[test]
    fn identity_program() {
        let p = compile_closed(&b("x"), &[Atom::var("x")], Flavor::Naive).unwrap();
        assert_eq!(p.run([b("x")], Limits::default()), Some(b("x")));
        assert!(compile_closed(&b("x[y]"), &[Atom::var("x")], Flavor::Naive).is_err());
    }
}
