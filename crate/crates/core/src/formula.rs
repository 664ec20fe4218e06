//! Internalized first-order formulas over `∈` and `=`, with de Bruijn indices.
//!
//! There are four constructors: `Member`, `Equal`, `Nand` and `Forall`. The connectives `¬ ∧ ∨ → ↔`
//! and `∃` exist only as sugar in the text syntax and in the smart constructors below, which
//! elaborate them into `Nand`/`Forall` immediately.
//!
//! Index `0` refers to the innermost binder (or the head of the environment for free variables).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Member(usize, usize),
    Equal(usize, usize),
    Nand(Box<Formula>, Box<Formula>),
    Forall(Box<Formula>),
}

impl Formula {
    pub fn mem(i: usize, j: usize) -> Formula {
        Formula::Member(i, j)
    }

    pub fn eq(i: usize, j: usize) -> Formula {
        Formula::Equal(i, j)
    }

    pub fn nand(p: Formula, q: Formula) -> Formula {
        Formula::Nand(Box::new(p), Box::new(q))
    }

    pub fn forall(p: Formula) -> Formula {
        Formula::Forall(Box::new(p))
    }

    /// `Nand(p, p)`
    pub fn neg(p: Formula) -> Formula {
        Formula::nand(p.clone(), p)
    }

    pub fn and(p: Formula, q: Formula) -> Formula {
        Formula::neg(Formula::nand(p, q))
    }

    pub fn or(p: Formula, q: Formula) -> Formula {
        Formula::nand(Formula::neg(p), Formula::neg(q))
    }

    pub fn imp(p: Formula, q: Formula) -> Formula {
        Formula::nand(p, Formula::neg(q))
    }

    pub fn iff(p: Formula, q: Formula) -> Formula {
        Formula::and(Formula::imp(p.clone(), q.clone()), Formula::imp(q, p))
    }

    pub fn exists(p: Formula) -> Formula {
        Formula::neg(Formula::forall(Formula::neg(p)))
    }

    /// Least context size containing every free index.
    pub fn arity(&self) -> usize {
        match self {
            Formula::Member(i, j) | Formula::Equal(i, j) => i.max(j) + 1,
            Formula::Nand(p, q) => p.arity().max(q.arity()),
            Formula::Forall(p) => p.arity().saturating_sub(1),
        }
    }

    /// Height of the syntax tree; atoms have height 0.
    pub fn height(&self) -> usize {
        match self {
            Formula::Member(..) | Formula::Equal(..) => 0,
            Formula::Nand(p, q) => 1 + p.height().max(q.height()),
            Formula::Forall(p) => 1 + p.height(),
        }
    }

    /// Nesting depth of `Forall`.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Member(..) | Formula::Equal(..) => 0,
            Formula::Nand(p, q) => p.quantifier_depth().max(q.quantifier_depth()),
            Formula::Forall(p) => 1 + p.quantifier_depth(),
        }
    }

    /// Same constructor tree, ignoring the indices.
    pub fn same_shape(&self, other: &Formula) -> bool {
        match (self, other) {
            (Formula::Member(..), Formula::Member(..))
            | (Formula::Equal(..), Formula::Equal(..)) => true,
            (Formula::Nand(p, q), Formula::Nand(p2, q2)) => p.same_shape(p2) && q.same_shape(q2),
            (Formula::Forall(p), Formula::Forall(p2)) => p.same_shape(p2),
            _ => false,
        }
    }
}

/// A map `{0..n-1} → {0..m-1}` between finite contexts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RenamingRepr", into = "RenamingRepr")]
pub struct Renaming {
    n: usize,
    m: usize,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RenamingRepr {
    n: usize,
    m: usize,
    map: Vec<usize>,
}

impl TryFrom<RenamingRepr> for Renaming {
    type Error = Error;

    fn try_from(r: RenamingRepr) -> Result<Self> {
        Renaming::new(r.n, r.m, r.map)
    }
}

impl From<Renaming> for RenamingRepr {
    fn from(r: Renaming) -> Self {
        RenamingRepr {
            n: r.n,
            m: r.m,
            map: r.map,
        }
    }
}

impl Renaming {
    pub fn new(n: usize, m: usize, map: Vec<usize>) -> Result<Renaming> {
        if map.len() != n {
            return Err(Error::InvalidRenaming(format!(
                "table has {} entries for a source context of {n}",
                map.len()
            )));
        }
        if let Some(bad) = map.iter().find(|&&v| v >= m) {
            return Err(Error::InvalidRenaming(format!(
                "value {bad} outside the target context {m}"
            )));
        }
        Ok(Renaming { n, m, map })
    }

    pub fn identity(n: usize) -> Renaming {
        Renaming {
            n,
            m: n,
            map: (0..n).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// `id_1 + f : 1+n → 1+m`, fixing the new index 0 and shifting the rest.
    pub fn sum_id(&self) -> Renaming {
        let map = std::iter::once(0)
            .chain(self.map.iter().map(|&v| v + 1))
            .collect();
        Renaming {
            n: self.n + 1,
            m: self.m + 1,
            map,
        }
    }

    /// `g ∘ self`; requires `g.source() == self.target()`.
    pub fn then(&self, g: &Renaming) -> Result<Renaming> {
        if g.n != self.m {
            return Err(Error::InvalidRenaming(format!(
                "cannot compose {} → {} with {} → {}",
                self.n, self.m, g.n, g.m
            )));
        }
        Ok(Renaming {
            n: self.n,
            m: g.m,
            map: self.map.iter().map(|&v| g.map[v]).collect(),
        })
    }
}

/// Renames the free indices of `phi` along `f`.
pub fn ren(phi: &Formula, f: &Renaming) -> Result<Formula> {
    let arity = phi.arity();
    if arity > f.n {
        return Err(Error::ArityExceedsContext {
            arity,
            context: f.n,
        });
    }
    Ok(ren_unchecked(phi, f))
}

fn ren_unchecked(phi: &Formula, f: &Renaming) -> Formula {
    match phi {
        Formula::Member(i, j) => Formula::Member(f.apply(*i), f.apply(*j)),
        Formula::Equal(i, j) => Formula::Equal(f.apply(*i), f.apply(*j)),
        Formula::Nand(p, q) => Formula::nand(ren_unchecked(p, f), ren_unchecked(q, f)),
        Formula::Forall(p) => Formula::forall(ren_unchecked(p, &f.sum_id())),
    }
}

pub fn sum_id(f: &Renaming) -> Renaming {
    f.sum_id()
}

pub fn arity(phi: &Formula) -> usize {
    phi.arity()
}

/// Prints the primitive syntax: `Mem i j`, `Eq i j`, `Nand (p) (q)`, `All (p)`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Member(i, j) => write!(f, "Mem {i} {j}"),
            Formula::Equal(i, j) => write!(f, "Eq {i} {j}"),
            Formula::Nand(p, q) => write!(f, "Nand ({p}) ({q})"),
            Formula::Forall(p) => write!(f, "All ({p})"),
        }
    }
}

pub fn print(phi: &Formula) -> String {
    phi.to_string()
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
    Num(usize),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok<'_>)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'(' {
            out.push((i, Tok::Open));
            i += 1;
        } else if c == b')' {
            out.push((i, Tok::Close));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "index too large".into(),
            })?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Word(&text[start..i])));
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{}`", c as char),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn index(&mut self) -> Result<usize> {
        match self.toks.get(self.pos).map(|t| t.1.clone()) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an index"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let start = self.pos;
        match self.next() {
            Some(Tok::Open) => {
                let f = self.formula()?;
                match self.next() {
                    Some(Tok::Close) => Ok(f),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            Some(Tok::Word(w)) => match w {
                "Mem" => Ok(Formula::mem(self.index()?, self.index()?)),
                "Eq" => Ok(Formula::eq(self.index()?, self.index()?)),
                "Nand" => Ok(Formula::nand(self.formula()?, self.formula()?)),
                "And" => Ok(Formula::and(self.formula()?, self.formula()?)),
                "Or" => Ok(Formula::or(self.formula()?, self.formula()?)),
                "Imp" => Ok(Formula::imp(self.formula()?, self.formula()?)),
                "Iff" => Ok(Formula::iff(self.formula()?, self.formula()?)),
                "All" => Ok(Formula::forall(self.formula()?)),
                "Ex" => Ok(Formula::exists(self.formula()?)),
                "Neg" => Ok(Formula::neg(self.formula()?)),
                other => {
                    self.pos = start;
                    self.err(format!("unknown connective `{other}`"))
                }
            },
            Some(_) => {
                self.pos = start;
                self.err("expected a formula")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses the text syntax, elaborating sugar into `Nand`/`Forall`.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}
