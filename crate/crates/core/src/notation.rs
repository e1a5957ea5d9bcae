//! Five textual notations for terms.
//!
//! * `brackets`: `s[s[s]][k]`; identifiers are `[A-Za-z0-9_]+`, `s` and `k` are the combinators.
//! * `compactLeft`: juxtaposition is left-associative application, parentheses group: `S(SS)K`.
//! * `parensRight`: juxtaposition is right-associative, parentheses group the function part:
//!   `s[s][s]` is `(SS)S`.
//! * `polish`: `*fx` (prefix); `•` and `@` are accepted for `*`.
//! * `reversePolish`: `fx*` (postfix).
//!
//! The four compact notations use one character per atom: `S`/`s`, `K`/`k`, and any other
//! letter, digit or `_` is a variable of that name. Longer names (or a variable whose name
//! would read as a combinator) are written `{name}`. Parsers and printers are iterative, so
//! arbitrarily deep terms are fine.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{Atom, Term, View};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Notation {
    Brackets,
    CompactLeft,
    ParensRight,
    Polish,
    ReversePolish,
}

impl Notation {
    pub const ALL: [Notation; 5] = [
        Notation::Brackets,
        Notation::CompactLeft,
        Notation::ParensRight,
        Notation::Polish,
        Notation::ReversePolish,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notation::Brackets => "brackets",
            Notation::CompactLeft => "compactLeft",
            Notation::ParensRight => "parensRight",
            Notation::Polish => "polish",
            Notation::ReversePolish => "reversePolish",
        }
    }
}

impl fmt::Display for Notation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Notation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Notation> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "brackets" | "bracket" => Ok(Notation::Brackets),
            "compactleft" | "compact" | "left" => Ok(Notation::CompactLeft),
            "parensright" | "right" => Ok(Notation::ParensRight),
            "polish" | "prefix" => Ok(Notation::Polish),
            "reversepolish" | "postfix" | "rpn" => Ok(Notation::ReversePolish),
            _ => Err(Error::UnknownNotation(s.to_string())),
        }
    }
}

/// Parses `text` in an explicit notation.
pub fn parse(text: &str, notation: Notation) -> Result<Term> {
    match notation {
        Notation::Brackets => parse_brackets(text),
        Notation::CompactLeft => parse_compact(text, false),
        Notation::ParensRight => parse_compact(text, true),
        Notation::Polish => parse_polish(text),
        Notation::ReversePolish => parse_reverse_polish(text),
    }
}

/// Bracket notation if the text contains `[`, compactLeft otherwise.
pub fn parse_auto(text: &str) -> Result<Term> {
    if text.contains('[') {
        parse_brackets(text)
    } else {
        parse_compact(text, false)
    }
}

pub fn print(t: &Term, notation: Notation) -> String {
    let mut out = String::with_capacity(2 * t.size().min(1 << 20) as usize);
    match notation {
        Notation::Brackets => print_brackets(t, &mut out),
        Notation::CompactLeft => print_compact(t, false, &mut out),
        Notation::ParensRight => print_compact(t, true, &mut out),
        Notation::Polish => print_polish(t, false, &mut out),
        Notation::ReversePolish => print_polish(t, true, &mut out),
    }
    out
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn parse_brackets(text: &str) -> Result<Term> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(Term, usize)> = Vec::new();
    let mut current: Option<Term> = None;
    let mut i = 0;
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        match current.take() {
            None => {
                let start = i;
                while i < bytes.len() && is_ident(bytes[i] as char) {
                    i += 1;
                }
                if start == i {
                    return Err(if i == bytes.len() {
                        syntax(i, "expected an atom, found end of input")
                    } else {
                        syntax(i, format!("expected an atom, found `{}`", char_at(text, i)))
                    });
                }
                current = Some(Term::var(&text[start..i]));
            }
            Some(t) => {
                if i == bytes.len() {
                    if let Some((_, open)) = stack.last() {
                        return Err(Error::Unbalanced { offset: *open });
                    }
                    return Ok(t);
                }
                match bytes[i] {
                    b'[' => {
                        stack.push((t, i));
                        i += 1;
                    }
                    b']' => {
                        let (f, _) = stack.pop().ok_or(Error::Unbalanced { offset: i })?;
                        current = Some(Term::app(f, t));
                        i += 1;
                    }
                    _ => {
                        return Err(syntax(i, format!("unexpected `{}`", char_at(text, i))));
                    }
                }
            }
        }
    }
}

fn char_at(text: &str, i: usize) -> char {
    text[i..].chars().next().unwrap_or('?')
}

/// Reads one atom token of the compact notations starting at byte `i`.
/// Returns the atom and the offset just past it, or `None` if no atom starts here.
fn compact_atom(text: &str, i: usize) -> Result<Option<(Atom, usize)>> {
    let c = char_at(text, i);
    match c {
        'S' | 's' => Ok(Some((Atom::S, i + 1))),
        'K' | 'k' => Ok(Some((Atom::K, i + 1))),
        '{' => {
            let close = text[i..]
                .find('}')
                .map(|j| i + j)
                .ok_or(Error::Unbalanced { offset: i })?;
            let name = &text[i + 1..close];
            if name.is_empty() || !name.chars().all(is_ident) {
                return Err(syntax(i, format!("bad variable name `{name}`")));
            }
            let atom = match name {
                "s" | "S" | "k" | "K" => Atom::Var(name.into()),
                _ => Atom::var(name),
            };
            Ok(Some((atom, close + 1)))
        }
        c if is_ident(c) => Ok(Some((Atom::var(&c.to_string()), i + c.len_utf8()))),
        _ => Ok(None),
    }
}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || matches!(c, '•' | '@' | '*')
}

/// compactLeft when `right` is false, parensRight otherwise.
fn parse_compact(text: &str, right: bool) -> Result<Term> {
    // Each frame collects the items of one parenthesised group.
    let mut frames: Vec<(Vec<Term>, usize)> = vec![(Vec::new(), 0)];
    let mut i = 0;
    while i < text.len() {
        let c = char_at(text, i);
        if is_separator(c) {
            i += c.len_utf8();
            continue;
        }
        match c {
            '(' => {
                frames.push((Vec::new(), i));
                i += 1;
            }
            ')' => {
                if frames.len() == 1 {
                    return Err(Error::Unbalanced { offset: i });
                }
                let (items, open) = frames.pop().expect("checked above");
                let group = fold_group(items, right).ok_or_else(|| syntax(open, "empty parentheses"))?;
                frames.last_mut().expect("outer frame").0.push(group);
                i += 1;
            }
            _ => match compact_atom(text, i)? {
                Some((atom, next)) => {
                    frames.last_mut().expect("outer frame").0.push(Term::atom(atom));
                    i = next;
                }
                None => return Err(syntax(i, format!("unexpected `{c}`"))),
            },
        }
    }
    if frames.len() > 1 {
        return Err(Error::Unbalanced {
            offset: frames.last().expect("nonempty").1,
        });
    }
    let (items, _) = frames.pop().expect("outer frame");
    fold_group(items, right).ok_or_else(|| syntax(text.len(), "empty input"))
}

fn fold_group(items: Vec<Term>, right: bool) -> Option<Term> {
    if right {
        let mut it = items.into_iter().rev();
        let last = it.next()?;
        Some(it.fold(last, |acc, f| Term::app(f, acc)))
    } else {
        let mut it = items.into_iter();
        let first = it.next()?;
        Some(it.fold(first, Term::app))
    }
}

fn parse_polish(text: &str) -> Result<Term> {
    // Pending applications: each holds its function once that has been read.
    let mut pending: Vec<Option<Term>> = Vec::new();
    let mut i = 0;
    let mut done: Option<Term> = None;
    while i < text.len() {
        let c = char_at(text, i);
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if done.is_some() {
            return Err(syntax(i, "trailing input after a complete term"));
        }
        if matches!(c, '*' | '•' | '@') {
            pending.push(None);
            i += c.len_utf8();
            continue;
        }
        let (atom, next) = compact_atom(text, i)?.ok_or_else(|| syntax(i, format!("unexpected `{c}`")))?;
        i = next;
        let mut value = Term::atom(atom);
        loop {
            match pending.pop() {
                None => {
                    done = Some(value);
                    break;
                }
                Some(None) => {
                    pending.push(Some(value));
                    break;
                }
                Some(Some(f)) => value = Term::app(f, value),
            }
        }
    }
    done.ok_or_else(|| syntax(text.len(), "incomplete Polish term"))
}

fn parse_reverse_polish(text: &str) -> Result<Term> {
    let mut stack: Vec<Term> = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = char_at(text, i);
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if matches!(c, '*' | '•' | '@') {
            let x = stack.pop();
            let f = stack.pop();
            match (f, x) {
                (Some(f), Some(x)) => stack.push(Term::app(f, x)),
                _ => return Err(syntax(i, "application with fewer than two operands")),
            }
            i += c.len_utf8();
            continue;
        }
        let (atom, next) = compact_atom(text, i)?.ok_or_else(|| syntax(i, format!("unexpected `{c}`")))?;
        stack.push(Term::atom(atom));
        i = next;
    }
    match stack.len() {
        1 => Ok(stack.pop().expect("one element")),
        0 => Err(syntax(text.len(), "empty input")),
        n => Err(syntax(text.len(), format!("{n} operands left without application"))),
    }
}

fn compact_name(atom: &Atom, out: &mut String) {
    match atom {
        Atom::S => out.push('S'),
        Atom::K => out.push('K'),
        Atom::Var(v) => {
            let mut chars = v.chars();
            let single = match (chars.next(), chars.next()) {
                (Some(c), None) => is_ident(c) && !matches!(c, 's' | 'S' | 'k' | 'K'),
                _ => false,
            };
            if single {
                out.push_str(v);
            } else {
                out.push('{');
                out.push_str(v);
                out.push('}');
            }
        }
    }
}

enum Task<'a> {
    Term(&'a Term),
    Text(&'static str),
}

fn print_brackets(t: &Term, out: &mut String) {
    let mut stack = vec![Task::Term(t)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Text(s) => out.push_str(s),
            Task::Term(t) => match t.view() {
                View::Atom(a) => out.push_str(a.name()),
                View::App(f, x) => {
                    stack.push(Task::Text("]"));
                    stack.push(Task::Term(x));
                    stack.push(Task::Text("["));
                    stack.push(Task::Term(f));
                }
            },
        }
    }
}

fn print_compact(t: &Term, right: bool, out: &mut String) {
    let mut stack = vec![Task::Term(t)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Text(s) => out.push_str(s),
            Task::Term(t) => match t.view() {
                View::Atom(a) => compact_name(a, out),
                View::App(f, x) => {
                    if right {
                        stack.push(Task::Term(x));
                        if f.is_atom() {
                            stack.push(Task::Term(f));
                        } else {
                            stack.push(Task::Text(")"));
                            stack.push(Task::Term(f));
                            stack.push(Task::Text("("));
                        }
                    } else {
                        if x.is_atom() {
                            stack.push(Task::Term(x));
                        } else {
                            stack.push(Task::Text(")"));
                            stack.push(Task::Term(x));
                            stack.push(Task::Text("("));
                        }
                        stack.push(Task::Term(f));
                    }
                }
            },
        }
    }
}

fn print_polish(t: &Term, reverse: bool, out: &mut String) {
    let mut stack = vec![Task::Term(t)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Text(s) => out.push_str(s),
            Task::Term(t) => match t.view() {
                View::Atom(a) => compact_name(a, out),
                View::App(f, x) => {
                    if reverse {
                        stack.push(Task::Text("*"));
                        stack.push(Task::Term(x));
                        stack.push(Task::Term(f));
                    } else {
                        stack.push(Task::Term(x));
                        stack.push(Task::Term(f));
                        stack.push(Task::Text("*"));
                    }
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(text: &str) -> Term {
        parse(text, Notation::Brackets).unwrap()
    }

    #[test]
    fn brackets_and_compact_agree() {
        assert_eq!(b("s[s[s]][s][s][s][s]"), parse("S(SS)SSSS", Notation::CompactLeft).unwrap());
        assert_eq!(print(&b("s[k][s[s]]"), Notation::CompactLeft), "SK(SS)");
    }

    #[test]
    fn left_application_chain_needs_no_parentheses() {
        let t = b("a[b][c][d][e]");
        assert_eq!(print(&t, Notation::CompactLeft), "abcde");
        assert_eq!(print(&b("a[b[c[d[e]]]]"), Notation::CompactLeft), "a(b(c(de)))");
    }

    #[test]
    fn right_associative_rendering() {
        let t = b("s[s][s][s[s]][s][s]");
        assert_eq!(print(&t, Notation::ParensRight), "((((SS)S)SS)S)S");
        assert_eq!(parse("((((ss)s)ss)s)s", Notation::ParensRight).unwrap(), t);
    }

    #[test]
    fn polish_forms() {
        let t = b("s[s][s][s[s]][s][s]");
        assert_eq!(print(&t, Notation::Polish), "*****SSS*SSSS");
        assert_eq!(print(&t, Notation::ReversePolish), "SS*S*SS**S*S*");
        assert_eq!(parse("sss••", Notation::ReversePolish).unwrap(), b("s[s[s]]"));
        assert_eq!(parse("•f•gx", Notation::Polish).unwrap(), b("f[g[x]]"));
    }

    #[test]
    fn long_variable_names() {
        let t = b("foo[x][S]");
        let text = print(&t, Notation::CompactLeft);
        assert_eq!(text, "{foo}x{S}");
        assert_eq!(parse(&text, Notation::CompactLeft).unwrap(), t);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("s[k", Notation::Brackets), Err(Error::Unbalanced { offset: 1 }));
        assert_eq!(parse("s]", Notation::Brackets), Err(Error::Unbalanced { offset: 1 }));
        assert!(matches!(parse("s[]", Notation::Brackets), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("S(", Notation::CompactLeft), Err(Error::Unbalanced { offset: 1 })));
        assert!(matches!(parse("S)", Notation::CompactLeft), Err(Error::Unbalanced { offset: 1 })));
        assert!(parse("*S", Notation::Polish).is_err());
        assert!(parse("SS", Notation::ReversePolish).is_err());
        assert!("nope".parse::<Notation>().is_err());
    }

    #[test]
    fn single_atom_everywhere() {
        for n in Notation::ALL {
            assert_eq!(parse("s", n).unwrap(), Term::s());
        }
    }

    #[test]
    fn deep_terms_round_trip() {
        let mut t = Term::s();
        for i in 0..100_000 {
            t = if i % 2 == 0 { Term::app(Term::k(), t) } else { Term::app(t, Term::s()) };
        }
        for n in Notation::ALL {
            assert_eq!(parse(&print(&t, n), n).unwrap(), t, "{n}");
        }
    }
}
