//! Text syntax for tree specs and the objects that live on them.
//! The grammar is documented in `docs/dsl.md`.

use thiserror::Error;

use crate::error::Result;
use crate::ordinal::Ordinal;
use crate::template::{Affine, TEnd, TPath, TSym, TTok};
use crate::treespec::{Count, Path, Token, TreeSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexeme>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            let n = s.parse().map_err(|_| ParseError { line: l, column: col, message: format!("number {s} is too large") })?;
            out.push(Lexeme { tok: Tok::Num(n), line: l, column: col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '-') {
                s.push(bump(&mut chars));
            }
            out.push(Lexeme { tok: Tok::Ident(s), line: l, column: col });
        } else if "()[],;=+*^@".contains(c) {
            bump(&mut chars);
            out.push(Lexeme { tok: Tok::Punct(c), line: l, column: col });
        } else {
            return Err(ParseError { line: l, column: col, message: format!("unexpected character `{c}`") });
        }
    }
    out.push(Lexeme { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexeme>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        let l = &self.toks[self.pos];
        Err(ParseError { line: l.line, column: l.column, message: message.into() })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", Self::describe(self.peek())))
        }
    }

    fn expect_ident(&mut self, s: &str) -> PResult<()> {
        if self.is_ident(s) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", Self::describe(self.peek())))
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {} after the expression", Self::describe(self.peek())))
        }
    }

    fn nat(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.next();
                Ok(n)
            }
            t => self.err(format!("expected a number, found {}", Self::describe(&t))),
        }
    }

    // ----- arithmetic --------------------------------------------------------

    /// `nat | [nat '*'] VAR`
    fn aterm(&mut self, var: Option<&str>) -> PResult<Affine> {
        let is_var = |p: &Parser, k| matches!(p.peek_at(k), Tok::Ident(x) if Some(x.as_str()) == var);
        if is_var(self, 0) {
            self.next();
            return Ok(Affine { a: 1, b: 0 });
        }
        let k = self.nat()?;
        if self.is_punct('*') && is_var(self, 1) {
            self.next();
            self.next();
            return Ok(Affine { a: k, b: 0 });
        }
        Ok(Affine::constant(k))
    }

    fn affine(&mut self, var: Option<&str>) -> PResult<Affine> {
        let mut acc = self.aterm(var)?;
        while self.is_punct('+') && self.starts_aterm(1, var) {
            self.next();
            let t = self.aterm(var)?;
            acc = Affine { a: acc.a + t.a, b: acc.b + t.b };
        }
        Ok(acc)
    }

    fn starts_aterm(&self, k: usize, var: Option<&str>) -> bool {
        match self.peek_at(k) {
            Tok::Num(_) => true,
            Tok::Ident(x) => Some(x.as_str()) == var,
            _ => false,
        }
    }

    /// `nat | [nat '*'] VAR | '(' affine ')'`
    fn coef(&mut self, var: Option<&str>) -> PResult<Affine> {
        if self.eat('(') {
            let a = self.affine(var)?;
            self.expect(')')?;
            Ok(a)
        } else {
            self.aterm(var)
        }
    }

    fn is_omega(&self) -> bool {
        self.is_ident("w") || self.is_ident("omega")
    }

    /// Sum of `ω^e·c` summands with affine coefficients.
    fn ord(&mut self, var: Option<&str>) -> PResult<Vec<(u32, Affine)>> {
        let mut terms = vec![self.summand(var)?];
        while self.eat('+') {
            terms.push(self.summand(var)?);
        }
        Ok(terms)
    }

    fn summand(&mut self, var: Option<&str>) -> PResult<(u32, Affine)> {
        if self.is_omega() {
            self.next();
            let e = if self.eat('^') { self.nat()? } else { 1 };
            let e = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
            let c = if self.eat('*') { self.coef(var)? } else { Affine::constant(1) };
            Ok((e, c))
        } else {
            Ok((0, self.coef(var)?))
        }
    }

    fn count(&mut self) -> PResult<Count> {
        if self.is_omega() {
            self.next();
            Ok(Count::Omega)
        } else {
            Ok(Count::Finite(self.nat()?))
        }
    }

    // ----- specs ---------------------------------------------------------------

    fn spec(&mut self, var: Option<&str>) -> PResult<TreeSpec> {
        let Tok::Ident(name) = self.peek().clone() else {
            return self.err(format!("expected a tree combinator, found {}", Self::describe(self.peek())));
        };
        if !["chain", "inftree", "fan", "withtops", "graft"].contains(&name.as_str()) {
            return self.err(format!("unknown tree combinator `{name}`"));
        }
        self.next();
        self.expect('(')?;
        let spec = match name.as_str() {
            "chain" => {
                let terms = self.ord(var)?;
                if terms.iter().any(|(_, c)| !c.is_constant()) {
                    if terms.iter().any(|(e, _)| *e > 0) {
                        return self.err("only finite chain lengths may depend on the child index");
                    }
                    let a = terms.iter().map(|(_, c)| c.a).sum();
                    let b = terms.iter().map(|(_, c)| c.b).sum();
                    TreeSpec::ChainAffine { a, b }
                } else {
                    TreeSpec::Chain(self.concrete_ord(&terms)?)
                }
            }
            "inftree" => TreeSpec::InfTree(self.count()?),
            "fan" => {
                if self.is_omega() && self.peek_at(1) == &Tok::Punct(',') {
                    self.next();
                    self.next();
                    TreeSpec::FanOmega(Box::new(self.spec(Some("i"))?))
                } else {
                    let mut cs = vec![self.spec(var)?];
                    while self.eat(',') {
                        cs.push(self.spec(var)?);
                    }
                    TreeSpec::Fan(cs)
                }
            }
            "withtops" => {
                let base = self.spec(var)?;
                self.expect(',')?;
                self.expect_ident("branches")?;
                self.expect('=')?;
                self.expect('[')?;
                let mut branches = Vec::new();
                if !self.is_punct(']') {
                    loop {
                        branches.push(self.concrete_path()?);
                        if !self.eat(',') {
                            break;
                        }
                    }
                }
                self.expect(']')?;
                let mut mult = 1;
                if self.eat(',') {
                    self.expect_ident("mult")?;
                    self.expect('=')?;
                    mult = self.nat()?;
                }
                TreeSpec::WithTops { base: Box::new(base), branches, mult }
            }
            "graft" => {
                let base = self.spec(var)?;
                self.expect(',')?;
                let scion = self.spec(var)?;
                let mut roots = Count::Omega;
                if self.eat(',') {
                    self.expect_ident("roots")?;
                    self.expect('=')?;
                    roots = self.count()?;
                }
                TreeSpec::Graft { base: Box::new(base), scion: Box::new(scion), roots }
            }
            _ => unreachable!(),
        };
        self.expect(')')?;
        Ok(spec)
    }

    fn concrete_ord(&self, terms: &[(u32, Affine)]) -> PResult<Ordinal> {
        let mut o = Ordinal::zero();
        for (e, c) in terms {
            if c.b > 0 {
                let t = Ordinal::from_terms([(*e, c.b)]).map_err(|e| self.at_err(e.to_string()))?;
                o = o.add(&t).map_err(|e| self.at_err(e.to_string()))?;
            }
        }
        Ok(o)
    }

    fn at_err(&self, message: String) -> ParseError {
        let l = &self.toks[self.pos.saturating_sub(1)];
        ParseError { line: l.line, column: l.column, message }
    }

    fn concrete_path(&mut self) -> PResult<Path> {
        let start = self.pos;
        let t = self.path()?;
        if !t.is_constant() {
            self.pos = start;
            return self.err("`n` is only allowed in sequence templates");
        }
        t.at(0).map_err(|e| self.at_err(e.to_string()))
    }

    // ----- addresses and paths ----------------------------------------------

    const VAR: Option<&'static str> = Some("n");

    fn addr(&mut self) -> PResult<Vec<TTok>> {
        if self.eat('[') {
            let mut toks = Vec::new();
            if !self.is_punct(']') {
                loop {
                    toks.push(self.tok()?);
                    if !self.eat(',') {
                        break;
                    }
                }
            }
            self.expect(']')?;
            Ok(toks)
        } else {
            Ok(vec![self.tok()?])
        }
    }

    fn tok(&mut self) -> PResult<TTok> {
        if self.eat('@') {
            return Ok(TTok::Pos(self.ord(Self::VAR)?));
        }
        if self.is_omega() {
            return Ok(TTok::Pos(self.ord(Self::VAR)?));
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == "top" => {
                self.next();
                self.expect('(')?;
                let p = self.path()?;
                self.expect(',')?;
                let c = self.affine(Self::VAR)?;
                self.expect(')')?;
                Ok(TTok::Top(Box::new(p), c))
            }
            Tok::Ident(s) if s == "rep" => {
                self.next();
                self.expect('(')?;
                let body = self.addr()?;
                self.expect(',')?;
                let k = self.affine(Self::VAR)?;
                self.expect(')')?;
                Ok(TTok::Rep(body, k))
            }
            Tok::Ident(s) if s == "s" => {
                self.next();
                Ok(TTok::Scion(self.coef(Self::VAR)?))
            }
            Tok::Ident(s) if s.len() > 1 && s.starts_with('s') && s[1..].bytes().all(|b| b.is_ascii_digit()) => {
                self.next();
                let j = s[1..].parse().or_else(|_| self.err("scion index too large"))?;
                Ok(TTok::Scion(Affine::constant(j)))
            }
            _ => {
                let terms = self.ord(Self::VAR)?;
                match terms.as_slice() {
                    [(0, a)] => Ok(TTok::Child(*a)),
                    _ => Ok(TTok::Pos(terms)),
                }
            }
        }
    }

    fn path(&mut self) -> PResult<TPath> {
        if self.is_ident("below") || self.is_ident("upto") {
            let strict = self.is_ident("below");
            self.next();
            self.expect('(')?;
            let toks = self.addr()?;
            self.expect(')')?;
            return Ok(TPath { toks, end: if strict { TEnd::Strict } else { TEnd::Node } });
        }
        if self.is_ident("branch") {
            self.next();
            self.expect('(')?;
            let mut toks = Vec::new();
            if self.is_punct('[') {
                toks = self.addr()?;
                self.expect(';')?;
            }
            let end = self.tail()?;
            self.expect(')')?;
            return Ok(TPath { toks, end });
        }
        if self.is_ident("whole") || self.is_ident("period") || self.is_ident("prefix") {
            return Ok(TPath { toks: Vec::new(), end: self.tail()? });
        }
        self.err(format!("expected `below`, `upto`, `branch`, `period` or `prefix`, found {}", Self::describe(self.peek())))
    }

    fn tail(&mut self) -> PResult<TEnd> {
        if self.is_ident("whole") {
            self.next();
            return Ok(TEnd::Whole);
        }
        if self.is_ident("prefix") {
            self.next();
            if self.eat('=') {
                let prefix = self.syms()?;
                self.expect(';')?;
                let period = self.period()?;
                return Ok(TEnd::Stream { prefix, period });
            }
            self.expect('(')?;
            let prefix = self.syms()?;
            self.expect(';')?;
            let period = self.period()?;
            self.expect(')')?;
            return Ok(TEnd::Stream { prefix, period });
        }
        if self.is_ident("period") {
            return Ok(TEnd::Stream { prefix: Vec::new(), period: self.period()? });
        }
        self.err(format!("expected `whole`, `period` or `prefix`, found {}", Self::describe(self.peek())))
    }

    fn period(&mut self) -> PResult<Vec<TSym>> {
        self.expect_ident("period")?;
        self.expect('(')?;
        let s = self.syms()?;
        self.expect(')')?;
        if s.is_empty() {
            return self.err("a period must not be empty");
        }
        Ok(s)
    }

    fn syms(&mut self) -> PResult<Vec<TSym>> {
        let mut out = Vec::new();
        if self.is_punct(';') || self.is_punct(')') {
            return Ok(out);
        }
        loop {
            out.push(self.sym()?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn sym(&mut self) -> PResult<TSym> {
        if self.is_ident("rep") {
            self.next();
            self.expect('(')?;
            let body = if self.eat('[') {
                let b = self.syms()?;
                self.expect(']')?;
                b
            } else {
                vec![self.sym()?]
            };
            self.expect(',')?;
            let k = self.affine(Self::VAR)?;
            self.expect(')')?;
            return Ok(TSym::Rep(body, k));
        }
        Ok(TSym::Sym(self.affine(Self::VAR)?))
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(src)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

/// Parses a tree spec such as `withtops(inftree(2), branches=[period(0)], mult=1)`.
/// The result is not validated; see [`TreeSpec::validate`].
pub fn parse_spec(src: &str) -> Result<TreeSpec, ParseError> {
    whole(src, |p| p.spec(None))
}

/// Parses a sequence template such as `branch(prefix=rep(0,n);period(1))`.
pub fn parse_template(src: &str) -> Result<TPath, ParseError> {
    whole(src, |p| p.path())
}

/// Parses a down-closed chain without `n`.
pub fn parse_path(src: &str) -> Result<Path, ParseError> {
    whole(src, |p| p.concrete_path())
}

/// Parses a node address such as `[0,1]`, `@w+3` or `[top(branch(period(0)),0),s2]`.
pub fn parse_address(src: &str) -> Result<Vec<Token>, ParseError> {
    whole(src, |p| {
        let start = p.pos;
        let toks = p.addr()?;
        let t = TPath { toks, end: TEnd::Node };
        if !t.is_constant() {
            p.pos = start;
            return p.err("`n` is only allowed in sequence templates");
        }
        t.at(0).map(|path| path.toks).map_err(|e| p.at_err(e.to_string()))
    })
}

/// Parses an ordinal in the `w^2*3 + w + 4` notation.
pub fn parse_ordinal(src: &str) -> Result<Ordinal, ParseError> {
    whole(src, |p| {
        let terms = p.ord(None)?;
        p.concrete_ord(&terms)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_round_trip() {
        for src in [
            "chain(w+1)",
            "chain(w^2)",
            "inftree(2)",
            "inftree(omega)",
            "fan(chain(3), inftree(2))",
            "fan(omega, chain(2*i+1))",
            "withtops(inftree(2), branches=[branch(period(0)), branch(prefix(0;period(1)))], mult=2)",
            "graft(withtops(chain(w), branches=[branch(whole)], mult=1), chain(w), roots=omega)",
        ] {
            let s = parse_spec(src).unwrap();
            let again = parse_spec(&s.to_string()).unwrap();
            assert_eq!(s, again, "{src}");
        }
    }

    #[test]
    fn spec_example_syntax() {
        let s = parse_spec("withtops(inftree(2), branches=[period(0), period(1), prefix(0;period(1))], mult=1)").unwrap();
        let TreeSpec::WithTops { branches, .. } = s else { panic!() };
        assert_eq!(branches.len(), 3);
        assert_eq!(parse_spec("fan(omega, chain(i+1))").unwrap(), TreeSpec::FanOmega(Box::new(TreeSpec::ChainAffine { a: 1, b: 1 })));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse_spec("fan(chain(3),\n  chian(2))").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_spec("inftree(2").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        let e = parse_path("branch(prefix=rep(0,n);period(1))").unwrap_err();
        assert!(e.message.contains("templates"));
    }

    #[test]
    fn addresses() {
        assert_eq!(parse_address("[0,1]").unwrap(), vec![Token::Child(0), Token::Child(1)]);
        assert_eq!(parse_address("@w*2+1").unwrap(), vec![Token::Pos("w*2 + 1".parse().unwrap())]);
        assert_eq!(parse_address("w").unwrap(), vec![Token::Pos(Ordinal::omega())]);
        let a = parse_address("[top(branch(period(0)),0),s3,2]").unwrap();
        assert!(matches!(&a[..], [Token::Top(_, 0), Token::Scion(3), Token::Child(2)]));
    }

    #[test]
    fn templates_instantiate() {
        let t = parse_template("branch(prefix=rep(0,n);period(1))").unwrap();
        assert_eq!(t.at(3).unwrap().to_string(), "branch(prefix(0,0,0;period(1)))");
        assert_eq!(t.at(0).unwrap().to_string(), "branch(period(1))");
        let again = parse_template(&t.to_string()).unwrap();
        assert_eq!(t, again);
        let t = parse_template("below([s(n+1), @w*(2*n+1)])").unwrap();
        assert_eq!(t.at(2).unwrap().toks, vec![Token::Scion(3), Token::Pos("w*5".parse().unwrap())]);
    }
}
