//! Spine machine for leftmost-outermost and leftmost-innermost single-redex evolution.
//!
//! The general stepper walks from the root and rebuilds the path to every redex, which costs
//! time proportional to the depth of the term on every step. For the two leftmost orders the
//! next redex is always at or after the previous one in the traversal, so the machine keeps
//! the term as a zipper: an unwound application spine in focus and a stack of enclosing
//! spines whose earlier arguments are already normal. A step then costs time proportional
//! to the spine it touches. Results are identical to [`super::step`], redex for redex.

use crate::term::{Atom, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Mode {
    Outermost,
    Innermost,
}

struct Frame {
    head: Term,
    // arguments in reverse order: the last element is the first argument
    args: Vec<Term>,
    // index (in `args`) of the argument currently in focus
    slot: usize,
}

pub(crate) struct Machine {
    mode: Mode,
    head: Term,
    args: Vec<Term>,
    // leading arguments of the focus spine already known to be normal (innermost mode)
    scanned: usize,
    frames: Vec<Frame>,
    size: u64,
    normal: Option<Term>,
}

fn unwind(mut t: Term, args: &mut Vec<Term>) -> Term {
    while let Some((f, x)) = t.as_app() {
        let (f, x) = (f.clone(), x.clone());
        args.push(x);
        t = f;
    }
    t
}

fn rebuild(head: &Term, args: &[Term]) -> Term {
    args.iter().rev().fold(head.clone(), |acc, a| Term::app(acc, a.clone()))
}

impl Machine {
    pub(crate) fn new(t: &Term, mode: Mode) -> Machine {
        let mut args = Vec::new();
        let head = unwind(t.clone(), &mut args);
        Machine {
            mode,
            head,
            args,
            scanned: 0,
            frames: Vec::new(),
            size: t.size(),
            normal: None,
        }
    }

    pub(crate) fn size(&self) -> u64 {
        self.size
    }

    /// The current term, reassembled.
    pub(crate) fn term(&self) -> Term {
        if let Some(t) = &self.normal {
            return t.clone();
        }
        let mut t = rebuild(&self.head, &self.args);
        for fr in self.frames.iter().rev() {
            let mut args = fr.args.clone();
            args[fr.slot] = t;
            t = rebuild(&fr.head, &args);
        }
        t
    }

    /// Contracts one redex. Returns false if the term was already normal.
    pub(crate) fn step(&mut self) -> bool {
        if self.normal.is_some() {
            return false;
        }
        loop {
            let n = self.args.len();
            // is the spine node applying `head` to `len` arguments a redex?
            let spine_redex = |head: &Term, len: usize| match head.as_atom() {
                Some(Atom::S) => len == 3,
                Some(Atom::K) => len == 2,
                _ => false,
            };
            match self.mode {
                Mode::Outermost => {
                    let saturated = match self.head.as_atom() {
                        Some(Atom::S) => n >= 3,
                        Some(Atom::K) => n >= 2,
                        _ => false,
                    };
                    if saturated {
                        self.contract();
                        return true;
                    }
                    // arguments before `scanned` are normal
                    let mut j = self.scanned;
                    while j < n && !self.args[n - 1 - j].has_redex() {
                        j += 1;
                    }
                    if j < n {
                        self.descend(n - 1 - j);
                        continue;
                    }
                }
                Mode::Innermost => {
                    let mut j = self.scanned;
                    let mut descend = None;
                    while j < n {
                        if self.args[n - 1 - j].has_redex() {
                            descend = Some(j);
                            break;
                        }
                        j += 1;
                        if spine_redex(&self.head, j) {
                            break;
                        }
                    }
                    if let Some(j) = descend {
                        self.descend(n - 1 - j);
                        continue;
                    }
                    if j <= n && spine_redex(&self.head, j) {
                        self.contract();
                        return true;
                    }
                }
            }
            // focus is normal: hand it back to the enclosing spine
            let value = rebuild(&self.head, &self.args);
            match self.frames.pop() {
                None => {
                    self.normal = Some(value);
                    return false;
                }
                Some(fr) => {
                    let j = fr.args.len() - 1 - fr.slot;
                    self.head = fr.head;
                    self.args = fr.args;
                    self.args[fr.slot] = value;
                    self.scanned = j + 1;
                    if self.mode == Mode::Innermost && spine_redex(&self.head, j + 1) {
                        self.contract();
                        return true;
                    }
                }
            }
        }
    }

    fn descend(&mut self, slot: usize) {
        let arg = self.args[slot].clone();
        let mut args = Vec::new();
        let head = unwind(arg, &mut args);
        let parent_head = std::mem::replace(&mut self.head, head);
        let parent_args = std::mem::replace(&mut self.args, args);
        self.frames.push(Frame {
            head: parent_head,
            args: parent_args,
            slot,
        });
        self.scanned = 0;
    }

    fn contract(&mut self) {
        let x = self.args.pop().expect("spine redex has arguments");
        let y = self.args.pop().expect("spine redex has arguments");
        match self.head.as_atom() {
            Some(Atom::S) => {
                let z = self.args.pop().expect("S redex has three arguments");
                self.size = self.size + z.size() - 1;
                self.args.push(Term::app(y, z.clone()));
                self.args.push(z);
            }
            Some(Atom::K) => {
                self.size -= 1 + y.size();
            }
            _ => unreachable!("only s and k heads contract"),
        }
        self.head = unwind(x, &mut self.args);
        self.scanned = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate, sk};
    use crate::rewrite::{step, Ordering, Strategy};

    fn agree(t: &Term, mode: Mode, steps: usize) {
        let ordering = match mode {
            Mode::Outermost => Ordering::LeftmostOutermost,
            Mode::Innermost => Ordering::LeftmostInnermost,
        };
        let mut m = Machine::new(t, mode);
        let mut cur = t.clone();
        for i in 0..steps {
            let (next, ev) = step(&cur, Strategy::scheme(ordering));
            let moved = m.step();
            assert_eq!(moved, !ev.is_empty(), "{t} step {i}");
            assert_eq!(m.term(), next, "{t} step {i} {mode:?}");
            assert_eq!(m.size(), next.size());
            if ev.is_empty() {
                break;
            }
            cur = next;
        }
    }

    #[test]
    fn matches_general_stepper_exhaustively() {
        for n in 1..=6 {
            for t in enumerate(n, &sk()).unwrap() {
                agree(&t, Mode::Outermost, 60);
                agree(&t, Mode::Innermost, 60);
            }
        }
    }

    #[test]
    fn matches_on_open_terms() {
        let t = crate::notation::parse("s[s[k][k]][s[k][k]][x]", crate::notation::Notation::Brackets).unwrap();
        agree(&t, Mode::Outermost, 40);
        agree(&t, Mode::Innermost, 40);
        let t = crate::notation::parse("f[k[a][b]][s[g][h][c]]", crate::notation::Notation::Brackets).unwrap();
        agree(&t, Mode::Outermost, 40);
        agree(&t, Mode::Innermost, 40);
    }
}
