//! Canonical term encoding for elements of functor applications.
//!
//! A term is an atom (a named base element), a container-constructor
//! application `name[constant](children...)`, a sum injection `inl(t)` /
//! `inr(t)`, a pair `(s,t)`, or a finite set `{t1,...,tn}` whose children
//! are kept sorted and duplicate-free. The derived ordering (variant first,
//! then fields lexicographically) is the canonical order used everywhere
//! sets of terms are materialized.

use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(String),
    Ctor {
        name: String,
        konst: Box<Term>,
        args: Vec<Term>,
    },
    Inl(Box<Term>),
    Inr(Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Set(Vec<Term>),
}

impl Term {
    pub fn atom(s: &str) -> Term {
        Term::Atom(s.to_string())
    }

    /// Build a set term: children are sorted and deduplicated.
    pub fn set(mut children: Vec<Term>) -> Term {
        children.sort();
        children.dedup();
        Term::Set(children)
    }

    pub fn ctor(name: &str, konst: Term, args: Vec<Term>) -> Term {
        Term::Ctor {
            name: name.to_string(),
            konst: Box::new(konst),
            args,
        }
    }

    /// Parse the display form back into a term.
    pub fn parse(input: &str) -> Result<Term> {
        let mut p = Parser {
            src: input.as_bytes(),
            pos: 0,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Schema(format!(
                "trailing input after term at byte {}: `{}`",
                p.pos, input
            )));
        }
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(s) => write!(f, "{s}"),
            Term::Ctor { name, konst, args } => {
                write!(f, "{name}[{konst}]")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::Inl(t) => write!(f, "inl({t})"),
            Term::Inr(t) => write!(f, "inr({t})"),
            Term::Pair(a, b) => write!(f, "({a},{b})"),
            Term::Set(ts) => {
                write!(f, "{{")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Schema(format!(
                "expected `{}` at byte {} of term",
                c as char, self.pos
            )))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' || c == b'*' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(Error::Schema(format!(
                "expected an identifier at byte {} of term",
                start
            )));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let a = self.term()?;
                self.skip_ws();
                self.expect(b',')?;
                let b = self.term()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(Term::Pair(Box::new(a), Box::new(b)))
            }
            Some(b'{') => {
                self.pos += 1;
                let mut children = Vec::new();
                self.skip_ws();
                if self.peek() == Some(b'}') {
                    self.pos += 1;
                    return Ok(Term::Set(children));
                }
                loop {
                    children.push(self.term()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b'}') => {
                            self.pos += 1;
                            break;
                        }
                        _ => {
                            return Err(Error::Schema(format!(
                                "expected `,` or `}}` at byte {} of term",
                                self.pos
                            )))
                        }
                    }
                }
                // canonical form requires sorted, duplicate-free children
                let sorted = {
                    let mut s = children.clone();
                    s.sort();
                    s.dedup();
                    s
                };
                if sorted != children {
                    return Err(Error::Schema(
                        "set term is not in canonical (sorted, duplicate-free) form".into(),
                    ));
                }
                Ok(Term::Set(children))
            }
            Some(_) => {
                let name = self.ident()?;
                match self.peek() {
                    Some(b'(') if name == "inl" || name == "inr" => {
                        self.pos += 1;
                        let t = self.term()?;
                        self.skip_ws();
                        self.expect(b')')?;
                        Ok(if name == "inl" {
                            Term::Inl(Box::new(t))
                        } else {
                            Term::Inr(Box::new(t))
                        })
                    }
                    Some(b'[') => {
                        self.pos += 1;
                        let konst = self.term()?;
                        self.skip_ws();
                        self.expect(b']')?;
                        let mut args = Vec::new();
                        if self.peek() == Some(b'(') {
                            self.pos += 1;
                            loop {
                                args.push(self.term()?);
                                self.skip_ws();
                                match self.peek() {
                                    Some(b',') => {
                                        self.pos += 1;
                                    }
                                    Some(b')') => {
                                        self.pos += 1;
                                        break;
                                    }
                                    _ => {
                                        return Err(Error::Schema(format!(
                                            "expected `,` or `)` at byte {} of term",
                                            self.pos
                                        )))
                                    }
                                }
                            }
                        }
                        Ok(Term::Ctor {
                            name,
                            konst: Box::new(konst),
                            args,
                        })
                    }
                    _ => Ok(Term::Atom(name)),
                }
            }
            None => Err(Error::Schema("empty term".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_stability() {
        let samples = [
            Term::atom("a"),
            Term::ctor("S", Term::atom("*"), vec![Term::atom("x")]),
            Term::ctor("Z", Term::atom("k1"), vec![]),
            Term::Inl(Box::new(Term::atom("a"))),
            Term::Pair(Box::new(Term::atom("a")), Box::new(Term::atom("b"))),
            Term::set(vec![Term::atom("b"), Term::atom("a"), Term::atom("a")]),
            Term::set(vec![]),
            Term::set(vec![Term::set(vec![Term::atom("x")]), Term::set(vec![])]),
            Term::ctor(
                "node",
                Term::atom("k"),
                vec![
                    Term::Pair(Box::new(Term::atom("l")), Box::new(Term::atom("r"))),
                    Term::Inr(Box::new(Term::atom("z"))),
                ],
            ),
        ];
        for t in samples {
            let s = t.to_string();
            assert_eq!(Term::parse(&s).unwrap(), t, "roundtrip failed for {s}");
        }
    }

    #[test]
    fn set_children_sorted() {
        let t = Term::set(vec![Term::atom("b"), Term::atom("a")]);
        assert_eq!(t.to_string(), "{a,b}");
        assert!(Term::parse("{b,a}").is_err());
    }

    #[test]
    fn inl_atom_vs_injection() {
        assert_eq!(Term::parse("inl").unwrap(), Term::atom("inl"));
        assert_eq!(
            Term::parse("inl(x)").unwrap(),
            Term::Inl(Box::new(Term::atom("x")))
        );
    }
}
