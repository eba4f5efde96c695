//! Sequence templates: high-ray descriptions depending affinely on `n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::stream::{lcm, Stream};
use crate::treespec::{End, Path, Token};

/// `a·n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub a: u64,
    pub b: u64,
}

impl Affine {
    pub const fn constant(b: u64) -> Affine {
        Affine { a: 0, b }
    }

    pub fn at(&self, n: u64) -> u64 {
        self.a * n + self.b
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TTok {
    Child(Affine),
    /// Ordinal position as a sum of `ω^e·coefficient` terms.
    Pos(Vec<(u32, Affine)>),
    Top(Box<TPath>, Affine),
    Scion(Affine),
    Rep(Vec<TTok>, Affine),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TSym {
    Sym(Affine),
    Rep(Vec<TSym>, Affine),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TEnd {
    Node,
    Strict,
    Whole,
    Stream { prefix: Vec<TSym>, period: Vec<TSym> },
}

/// A path description in which counts and indices may mention `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TPath {
    pub toks: Vec<TTok>,
    pub end: TEnd,
}

pub type SequenceTemplate = TPath;

fn ordinal_at(terms: &[(u32, Affine)], n: u64) -> Result<Ordinal> {
    let mut o = Ordinal::zero();
    for (e, c) in terms {
        let c = c.at(n);
        if c > 0 {
            o = o.add(&Ordinal::from_terms([(*e, c)])?)?;
        }
    }
    Ok(o)
}

fn expand_toks(toks: &[TTok], n: u64, out: &mut Vec<Token>) -> Result<()> {
    for t in toks {
        match t {
            TTok::Child(a) => out.push(Token::Child(a.at(n))),
            TTok::Pos(terms) => out.push(Token::Pos(ordinal_at(terms, n)?)),
            TTok::Top(p, c) => out.push(Token::Top(Box::new(p.at(n)?), c.at(n))),
            TTok::Scion(j) => out.push(Token::Scion(j.at(n))),
            TTok::Rep(body, k) => {
                for _ in 0..k.at(n) {
                    expand_toks(body, n, out)?;
                }
            }
        }
    }
    Ok(())
}

fn expand_syms(syms: &[TSym], n: u64, out: &mut Vec<u64>) {
    for s in syms {
        match s {
            TSym::Sym(a) => out.push(a.at(n)),
            TSym::Rep(body, k) => {
                for _ in 0..k.at(n) {
                    expand_syms(body, n, out);
                }
            }
        }
    }
}

impl TPath {
    /// The described path at index `n`.
    pub fn at(&self, n: u64) -> Result<Path> {
        let mut toks = Vec::new();
        expand_toks(&self.toks, n, &mut toks)?;
        let end = match &self.end {
            TEnd::Node => End::Node,
            TEnd::Strict => End::Strict,
            TEnd::Whole => End::Whole,
            TEnd::Stream { prefix, period } => {
                let (mut p, mut q) = (Vec::new(), Vec::new());
                expand_syms(prefix, n, &mut p);
                expand_syms(period, n, &mut q);
                End::Stream(Stream::new(p, q).ok_or_else(|| Error::TemplateOutsideTree {
                    index: n,
                    reason: "empty period".into(),
                })?)
            }
        };
        Ok(Path { toks, end })
    }

    /// Whether the description mentions `n` at all.
    pub fn is_constant(&self) -> bool {
        let mut c = true;
        self.visit(&mut |a| c &= a.is_constant(), &mut |_| {});
        c
    }

    /// Largest constant occurring anywhere in the description.
    pub fn max_constant(&self) -> u64 {
        let mut m = 0;
        let mut blocks = 0;
        self.visit(&mut |a| m = m.max(a.a).max(a.b), &mut |len| blocks = blocks.max(len as u64));
        m.max(blocks)
    }

    /// A step after which the instantiations behave uniformly on each residue
    /// class: the lcm of every literal block length.
    pub fn period_hint(&self) -> u64 {
        let mut p = 1usize;
        self.visit(&mut |_| {}, &mut |len| p = lcm(p, len.max(1)));
        p as u64
    }

    fn visit(&self, on_affine: &mut dyn FnMut(&Affine), on_block: &mut dyn FnMut(usize)) {
        fn toks(ts: &[TTok], f: &mut dyn FnMut(&Affine), g: &mut dyn FnMut(usize)) {
            g(ts.len());
            for t in ts {
                match t {
                    TTok::Child(a) | TTok::Scion(a) => f(a),
                    TTok::Pos(terms) => terms.iter().for_each(|(_, c)| f(c)),
                    TTok::Top(p, c) => {
                        f(c);
                        p.visit(f, g);
                    }
                    TTok::Rep(body, k) => {
                        f(k);
                        toks(body, f, g);
                    }
                }
            }
        }
        fn syms(ss: &[TSym], f: &mut dyn FnMut(&Affine), g: &mut dyn FnMut(usize)) {
            g(ss.len());
            for s in ss {
                match s {
                    TSym::Sym(a) => f(a),
                    TSym::Rep(body, k) => {
                        f(k);
                        syms(body, f, g);
                    }
                }
            }
        }
        toks(&self.toks, on_affine, on_block);
        if let TEnd::Stream { prefix, period } = &self.end {
            syms(prefix, on_affine, on_block);
            syms(period, on_affine, on_block);
        }
    }
}

impl From<&Path> for TPath {
    fn from(p: &Path) -> TPath {
        fn tok(t: &Token) -> TTok {
            match t {
                Token::Child(i) => TTok::Child(Affine::constant(*i)),
                Token::Pos(o) => TTok::Pos(o.terms().iter().map(|(e, c)| (*e, Affine::constant(*c))).collect()),
                Token::Top(p, c) => TTok::Top(Box::new(TPath::from(p.as_ref())), Affine::constant(*c)),
                Token::Scion(j) => TTok::Scion(Affine::constant(*j)),
            }
        }
        let syms = |xs: &[u64]| xs.iter().map(|x| TSym::Sym(Affine::constant(*x))).collect();
        TPath {
            toks: p.toks.iter().map(tok).collect(),
            end: match &p.end {
                End::Node => TEnd::Node,
                End::Strict => TEnd::Strict,
                End::Whole => TEnd::Whole,
                End::Stream(s) => TEnd::Stream { prefix: syms(s.prefix()), period: syms(s.period()) },
            },
        }
    }
}

// ----- rendering ---------------------------------------------------------------

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "n"),
            (a, 0) => write!(f, "{a}*n"),
            (1, b) => write!(f, "n+{b}"),
            (a, b) => write!(f, "{a}*n+{b}"),
        }
    }
}

fn coef(f: &mut fmt::Formatter<'_>, c: &Affine) -> fmt::Result {
    if c.is_constant() || (c.b == 0 && c.a == 1) {
        write!(f, "{c}")
    } else {
        write!(f, "({c})")
    }
}

fn list<T>(f: &mut fmt::Formatter<'_>, xs: &[T], item: impl Fn(&mut fmt::Formatter<'_>, &T) -> fmt::Result) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        item(f, x)?;
    }
    Ok(())
}

impl fmt::Display for TTok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TTok::Child(a) => write!(f, "{a}"),
            TTok::Pos(terms) => {
                write!(f, "@")?;
                if terms.is_empty() {
                    return write!(f, "0");
                }
                for (i, (e, c)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    match e {
                        0 => coef(f, c)?,
                        1 => {
                            write!(f, "w*")?;
                            coef(f, c)?
                        }
                        e => {
                            write!(f, "w^{e}*")?;
                            coef(f, c)?
                        }
                    }
                }
                Ok(())
            }
            TTok::Top(p, c) => write!(f, "top({p},{c})"),
            TTok::Scion(j) if j.is_constant() => write!(f, "s{j}"),
            TTok::Scion(j) => write!(f, "s({j})"),
            TTok::Rep(body, k) => {
                write!(f, "rep([")?;
                list(f, body, |f, t| write!(f, "{t}"))?;
                write!(f, "],{k})")
            }
        }
    }
}

impl fmt::Display for TSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TSym::Sym(a) => write!(f, "{a}"),
            TSym::Rep(body, k) if body.len() == 1 => write!(f, "rep({},{k})", body[0]),
            TSym::Rep(body, k) => {
                write!(f, "rep([")?;
                list(f, body, |f, s| write!(f, "{s}"))?;
                write!(f, "],{k})")
            }
        }
    }
}

impl fmt::Display for TPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            write!(f, "[")?;
            list(f, &self.toks, |f, t| write!(f, "{t}"))?;
            write!(f, "]")
        };
        match &self.end {
            TEnd::Node => {
                write!(f, "upto(")?;
                toks(f)?;
                write!(f, ")")
            }
            TEnd::Strict => {
                write!(f, "below(")?;
                toks(f)?;
                write!(f, ")")
            }
            end => {
                write!(f, "branch(")?;
                if !self.toks.is_empty() {
                    toks(f)?;
                    write!(f, ";")?;
                }
                match end {
                    TEnd::Whole => write!(f, "whole")?,
                    TEnd::Stream { prefix, period } => {
                        if !prefix.is_empty() {
                            write!(f, "prefix=")?;
                            list(f, prefix, |f, s| write!(f, "{s}"))?;
                            write!(f, ";")?;
                        }
                        write!(f, "period(")?;
                        list(f, period, |f, s| write!(f, "{s}"))?;
                        write!(f, ")")?;
                    }
                    _ => unreachable!(),
                }
                write!(f, ")")
            }
        }
    }
}
