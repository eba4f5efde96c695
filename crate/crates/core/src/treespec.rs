//! Combinator presentations of countable order trees.
//!
//! A node is addressed by a token sequence that follows the combinator
//! structure of its [`TreeSpec`]. Down-closed chains are addressed by a
//! [`Path`]: a token prefix plus an [`End`] saying whether the chain is the
//! downset of a node, the strict downset of a limit node, or a topless branch.
//! Every query below recurses through the combinators, so order, heights,
//! meets and tops are all decided exactly.

use std::borrow::Cow;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bad_addr, Error, Result};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::stream::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Count {
    Finite(u64),
    Omega,
}

impl Count {
    pub fn contains(&self, i: u64) -> bool {
        match self {
            Count::Finite(n) => i < *n,
            Count::Omega => true,
        }
    }

    /// Number of indices kept by a breadth bound.
    pub fn capped(&self, breadth: u64) -> u64 {
        match self {
            Count::Finite(n) => (*n).min(breadth),
            Count::Omega => breadth,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => write!(f, "omega"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeSpec {
    /// The ordinals below `α` in their natural order.
    Chain(Ordinal),
    /// A finite chain of length `a·i + b`, where `i` is the child index of the
    /// enclosing ω-fan. Only valid inside a [`TreeSpec::FanOmega`] template.
    ChainAffine { a: u64, b: u64 },
    /// A fresh root below the roots of finitely many children.
    Fan(Vec<TreeSpec>),
    /// A fresh root below ω children instantiated from one template.
    FanOmega(Box<TreeSpec>),
    /// All finite selector sequences; height exactly ω.
    InfTree(Count),
    /// `mult` tops above each listed branch of `base`.
    WithTops { base: Box<TreeSpec>, branches: Vec<Path>, mult: u64 },
    /// `roots` copies of `scion` attached directly above every top of `base`.
    Graft { base: Box<TreeSpec>, scion: Box<TreeSpec>, roots: Count },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Token {
    Child(u64),
    Pos(Ordinal),
    Top(Box<Path>, u64),
    Scion(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    /// The downset of the addressed node, node included.
    Node,
    /// The strict downset of the addressed node.
    Strict,
    /// The whole of a chain component of limit length.
    Whole,
    /// A topless branch of an infinite-branching component.
    Stream(Stream),
}

/// A down-closed chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub toks: Vec<Token>,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeAddr(pub Vec<Token>);

/// A down-closed chain of cofinality ω, in canonical form: the strict
/// downset of its least top when it has tops, otherwise a topless branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighRay(Path);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Root,
    Successor(NodeAddr),
    Limit,
}

/// Result of comparing two high-rays as sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayRelation {
    Equal,
    /// The first ray is a proper subset of the second.
    FirstInSecond,
    /// The second ray is a proper subset of the first.
    SecondInFirst,
    Incomparable,
}

/// Truncation bounds. `depth` caps chain coefficients (strictly) and
/// selector word length; `breadth` caps every index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub depth: u64,
    pub breadth: u64,
}

/// Limits on the eventually periodic streams used when sampling rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RaySampling {
    pub max_prefix: usize,
    pub max_period: usize,
    pub symbols: u64,
}

impl Default for RaySampling {
    fn default() -> Self {
        RaySampling { max_prefix: 2, max_period: 2, symbols: 2 }
    }
}

fn one() -> Ordinal {
    Ordinal::nat(1)
}

fn add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.add(b).expect("height overflow")
}

fn prefixed(prefix: &[Token], rest: Vec<Token>) -> Vec<Token> {
    let mut v = prefix.to_vec();
    v.extend(rest);
    v
}

/// Splits off a leading `[Top(p, c), Scion(j)]`.
fn split_scion(toks: &[Token]) -> Option<(&Path, u64, u64, &[Token])> {
    match toks {
        [Token::Top(p, c), Token::Scion(j), rest @ ..] => Some((p, *c, *j, rest)),
        _ => None,
    }
}

fn as_index(t: &Token) -> Option<u64> {
    match t {
        Token::Child(i) => Some(*i),
        Token::Pos(o) => o.as_finite(),
        _ => None,
    }
}

/// Node sequence of a chain inside an infinite-branching component.
enum Seq {
    Finite(Vec<u64>),
    Infinite(Stream),
}

impl Seq {
    fn of(toks: &[Token], end: &End) -> Seq {
        let word: Vec<u64> = toks.iter().filter_map(as_index).collect();
        match end {
            End::Stream(s) => Seq::Infinite(s.prepend(&word)),
            End::Strict => Seq::Finite(word[..word.len().saturating_sub(1)].to_vec()),
            _ => Seq::Finite(word),
        }
    }

    /// Number of chain nodes (ω for streams).
    fn len(&self) -> Ordinal {
        match self {
            Seq::Finite(w) => Ordinal::nat(w.len() as u64 + 1),
            Seq::Infinite(_) => Ordinal::omega(),
        }
    }

    fn take(&self, n: usize) -> Vec<u64> {
        match self {
            Seq::Finite(w) => w[..n].to_vec(),
            Seq::Infinite(s) => s.take(n),
        }
    }
}

impl TreeSpec {
    pub fn chain(alpha: Ordinal) -> TreeSpec {
        TreeSpec::Chain(alpha)
    }

    pub fn inftree(b: Count) -> TreeSpec {
        TreeSpec::InfTree(b)
    }

    /// Child `i` of a fan, with affine templates resolved.
    pub fn child(&self, i: u64) -> Option<Cow<'_, TreeSpec>> {
        match self {
            TreeSpec::Fan(cs) => cs.get(i as usize).map(Cow::Borrowed),
            TreeSpec::FanOmega(t) => Some(if t.has_affine() {
                Cow::Owned(t.instantiate(i))
            } else {
                Cow::Borrowed(t.as_ref())
            }),
            _ => None,
        }
    }

    fn child_count(&self) -> Count {
        match self {
            TreeSpec::Fan(cs) => Count::Finite(cs.len() as u64),
            _ => Count::Omega,
        }
    }

    fn has_affine(&self) -> bool {
        match self {
            TreeSpec::ChainAffine { .. } => true,
            TreeSpec::Fan(cs) => cs.iter().any(|c| c.has_affine()),
            TreeSpec::WithTops { base, .. } => base.has_affine(),
            TreeSpec::Graft { base, scion, .. } => base.has_affine() || scion.has_affine(),
            _ => false,
        }
    }

    fn instantiate(&self, i: u64) -> TreeSpec {
        match self {
            TreeSpec::ChainAffine { a, b } => TreeSpec::Chain(Ordinal::nat(a * i + b)),
            TreeSpec::Fan(cs) => TreeSpec::Fan(cs.iter().map(|c| c.instantiate(i)).collect()),
            TreeSpec::WithTops { base, branches, mult } => TreeSpec::WithTops {
                base: Box::new(base.instantiate(i)),
                branches: branches.clone(),
                mult: *mult,
            },
            TreeSpec::Graft { base, scion, roots } => TreeSpec::Graft {
                base: Box::new(base.instantiate(i)),
                scion: Box::new(scion.instantiate(i)),
                roots: *roots,
            },
            other => other.clone(),
        }
    }

    /// Checks the spec itself and canonicalizes the branch families it lists.
    pub fn validate(&self) -> Result<TreeSpec> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match self {
            TreeSpec::Chain(a) if a.is_zero() => bad("chain length must be at least 1"),
            TreeSpec::Chain(_) => Ok(self.clone()),
            TreeSpec::ChainAffine { .. } => bad("affine chain lengths are only allowed in fan(omega, ...)"),
            TreeSpec::InfTree(Count::Finite(0)) => bad("branching must be at least 1"),
            TreeSpec::InfTree(_) => Ok(self.clone()),
            TreeSpec::Fan(cs) if cs.is_empty() => bad("fan needs at least one child"),
            TreeSpec::Fan(cs) => Ok(TreeSpec::Fan(cs.iter().map(|c| c.validate()).collect::<Result<_>>()?)),
            TreeSpec::FanOmega(t) => {
                for i in 0..3 {
                    if let TreeSpec::ChainAffine { a, b } = t.as_ref() {
                        if a * i + b == 0 {
                            return bad("affine chain length vanishes");
                        }
                    } else {
                        t.instantiate(i).validate()?;
                    }
                }
                Ok(self.clone())
            }
            TreeSpec::WithTops { base, branches, mult } => {
                if *mult == 0 {
                    return bad("mult must be at least 1");
                }
                let base = base.validate()?;
                let mut canon = Vec::new();
                for p in branches {
                    let c = base.canon_branch(&p.toks, &p.end)?;
                    if !base.tops(&c.toks, &c.end).is_empty() {
                        return Err(Error::InvalidSpec(format!("branch {} already has tops", c)));
                    }
                    if canon.contains(&c) {
                        return Err(Error::InvalidSpec(format!("branch {} listed twice", c)));
                    }
                    canon.push(c);
                }
                Ok(TreeSpec::WithTops { base: Box::new(base), branches: canon, mult: *mult })
            }
            TreeSpec::Graft { base, scion, roots } => {
                if !matches!(base.as_ref(), TreeSpec::WithTops { .. }) {
                    return bad("graft needs a withtops(...) base");
                }
                if *roots == Count::Finite(0) {
                    return bad("roots must be at least 1");
                }
                Ok(TreeSpec::Graft {
                    base: Box::new(base.validate()?),
                    scion: Box::new(scion.validate()?),
                    roots: *roots,
                })
            }
        }
    }

    // ----- addresses -------------------------------------------------------

    /// Validates an address and converts it to canonical form.
    pub fn canon_node(&self, toks: &[Token]) -> Result<NodeAddr> {
        self.canon_node_rec(toks).map(NodeAddr).map_err(|e| match e {
            Error::InvalidAddress { reason, .. } => bad_addr(NodeAddr(toks.to_vec()), reason),
            other => other,
        })
    }

    fn canon_node_rec(&self, toks: &[Token]) -> Result<Vec<Token>> {
        let here = || NodeAddr(toks.to_vec());
        match self {
            TreeSpec::Chain(alpha) => match toks {
                [t] => {
                    let beta = match t {
                        Token::Pos(b) => b.clone(),
                        Token::Child(n) => Ordinal::nat(*n),
                        _ => return Err(bad_addr(here(), "expected a chain position")),
                    };
                    if &beta < alpha {
                        Ok(vec![Token::Pos(beta)])
                    } else {
                        Err(bad_addr(here(), format!("position {beta} is not below {alpha}")))
                    }
                }
                _ => Err(bad_addr(here(), "a chain node is a single position")),
            },
            TreeSpec::ChainAffine { .. } => Err(bad_addr(here(), "uninstantiated template")),
            TreeSpec::InfTree(b) => toks
                .iter()
                .map(|t| match as_index(t) {
                    Some(i) if b.contains(i) => Ok(Token::Child(i)),
                    _ => Err(bad_addr(here(), format!("selector outside branching {b}"))),
                })
                .collect(),
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [] => Ok(Vec::new()),
                [t, rest @ ..] => {
                    let i = as_index(t).ok_or_else(|| bad_addr(here(), "expected a child index"))?;
                    let child = self.child(i).ok_or_else(|| bad_addr(here(), "no such child"))?;
                    Ok(prefixed(&[Token::Child(i)], child.canon_node_rec(rest)?))
                }
            },
            TreeSpec::WithTops { base, branches, mult } => match toks {
                [Token::Top(p, c)] => {
                    let p = base.canon_branch(&p.toks, &p.end)?;
                    if !branches.contains(&p) {
                        return Err(bad_addr(here(), format!("branch {p} carries no tops")));
                    }
                    if c >= mult {
                        return Err(bad_addr(here(), format!("top copy {c} not below {mult}")));
                    }
                    Ok(vec![Token::Top(Box::new(p), *c)])
                }
                _ => base.canon_node_rec(toks),
            },
            TreeSpec::Graft { base, scion, roots } => match toks {
                [top @ Token::Top(..), Token::Scion(j), rest @ ..] => {
                    let mut v = base.canon_node_rec(std::slice::from_ref(top))?;
                    if !roots.contains(*j) {
                        return Err(bad_addr(here(), format!("scion copy {j} not below {roots}")));
                    }
                    v.push(Token::Scion(*j));
                    v.extend(scion.canon_node_rec(rest)?);
                    Ok(v)
                }
                _ => base.canon_node_rec(toks),
            },
        }
    }

    /// Canonical form of a branch (a maximal chain of cofinality ω inside one
    /// combinator component); the branch may carry tops.
    pub fn canon_branch(&self, toks: &[Token], end: &End) -> Result<Path> {
        let bad = |r: &str| Error::InvalidRay(format!("{}: {r}", Path { toks: toks.to_vec(), end: end.clone() }));
        match self {
            TreeSpec::Chain(alpha) => {
                if toks.is_empty() && *end == End::Whole && alpha.is_limit() {
                    Ok(Path { toks: Vec::new(), end: End::Whole })
                } else {
                    Err(bad("a chain branch is `whole` on a chain of limit length"))
                }
            }
            TreeSpec::ChainAffine { .. } => Err(bad("uninstantiated template")),
            TreeSpec::InfTree(b) => {
                let End::Stream(s) = end else {
                    return Err(bad("expected a selector stream"));
                };
                let word = self.canon_node_rec(toks)?;
                let word: Vec<u64> = word.iter().filter_map(as_index).collect();
                let s = s.prepend(&word);
                if let Count::Finite(n) = b {
                    if s.max_symbol() >= *n {
                        return Err(bad("selector outside branching"));
                    }
                }
                Ok(Path { toks: Vec::new(), end: End::Stream(s) })
            }
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [t, rest @ ..] => {
                    let i = as_index(t).ok_or_else(|| bad("expected a child index"))?;
                    let child = self.child(i).ok_or_else(|| bad("no such child"))?;
                    let p = child.canon_branch(rest, end)?;
                    Ok(Path { toks: prefixed(&[Token::Child(i)], p.toks), end: p.end })
                }
                [] => Err(bad("a fan root has no branch of its own")),
            },
            TreeSpec::WithTops { base, .. } => match toks {
                [Token::Top(..), ..] => Err(bad("nothing lies above a top")),
                _ => base.canon_branch(toks, end),
            },
            TreeSpec::Graft { base, scion, roots } => match split_scion(toks) {
                Some((_, _, j, rest)) => {
                    let mut head = base.canon_node_rec(&toks[..1])?;
                    if !roots.contains(j) {
                        return Err(bad("no such scion copy"));
                    }
                    head.push(Token::Scion(j));
                    let p = scion.canon_branch(rest, end)?;
                    Ok(Path { toks: prefixed(&head, p.toks), end: p.end })
                }
                None => base.canon_branch(toks, end),
            },
        }
    }

    /// Validates a high-ray and brings it into canonical form.
    pub fn canon_ray(&self, path: &Path) -> Result<HighRay> {
        let as_top = |p: Path| -> Path {
            let tops = self.tops(&p.toks, &p.end);
            match tops.into_iter().min() {
                Some(t) => Path { toks: t, end: End::Strict },
                None => p,
            }
        };
        match &path.end {
            End::Node => Err(Error::InvalidRay(format!("{path} is the downset of a node"))),
            End::Strict => {
                let node = self.canon_node(&path.toks)?;
                if !self.height(&node.0).is_limit() {
                    return Err(Error::InvalidRay(format!("{node} is not a limit")));
                }
                Ok(HighRay(as_top(Path { toks: node.0, end: End::Strict })))
            }
            end => Ok(HighRay(as_top(self.canon_branch(&path.toks, end)?))),
        }
    }

    // ----- heights and the chain structure -----------------------------------

    /// Order type of the strict downset of a (canonical) node.
    pub fn height(&self, toks: &[Token]) -> Ordinal {
        match self {
            TreeSpec::Chain(_) => match toks {
                [Token::Pos(b)] => b.clone(),
                _ => Ordinal::zero(),
            },
            TreeSpec::ChainAffine { .. } => Ordinal::zero(),
            TreeSpec::InfTree(_) => Ordinal::nat(toks.len() as u64),
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [] => Ordinal::zero(),
                [t, rest @ ..] => {
                    let child = self.child(as_index(t).unwrap_or(0)).expect("valid child");
                    add(&one(), &child.height(rest))
                }
            },
            TreeSpec::WithTops { base, .. } => match toks {
                [Token::Top(p, _)] => base.path_len(&p.toks, &p.end),
                _ => base.height(toks),
            },
            TreeSpec::Graft { base, scion, .. } => match split_scion(toks) {
                Some((p, _, _, rest)) => {
                    let h0 = add(&base.path_len(&p.toks, &p.end), &one());
                    add(&h0, &scion.height(rest))
                }
                None => base.height(toks),
            },
        }
    }

    /// Order type of a down-closed chain.
    pub fn path_len(&self, toks: &[Token], end: &End) -> Ordinal {
        match end {
            End::Node => self.height(toks).succ(),
            End::Strict => self.height(toks),
            _ => self.branch_len(toks),
        }
    }

    fn branch_len(&self, toks: &[Token]) -> Ordinal {
        match self {
            TreeSpec::Chain(alpha) => alpha.clone(),
            TreeSpec::InfTree(_) => Ordinal::omega(),
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [t, rest @ ..] => {
                    let child = self.child(as_index(t).unwrap_or(0)).expect("valid child");
                    add(&one(), &child.branch_len(rest))
                }
                [] => Ordinal::zero(),
            },
            TreeSpec::WithTops { base, .. } => base.branch_len(toks),
            TreeSpec::Graft { base, scion, .. } => match split_scion(toks) {
                Some((p, _, _, rest)) => {
                    let h0 = add(&base.path_len(&p.toks, &p.end), &one());
                    add(&h0, &scion.branch_len(rest))
                }
                None => base.branch_len(toks),
            },
            TreeSpec::ChainAffine { .. } => Ordinal::zero(),
        }
    }

    /// The node at height `beta` of the chain `(toks, end)`; requires
    /// `beta < path_len(toks, end)`.
    pub fn at(&self, toks: &[Token], end: &End, beta: &Ordinal) -> Vec<Token> {
        match self {
            TreeSpec::Chain(_) => vec![Token::Pos(beta.clone())],
            TreeSpec::InfTree(_) => {
                let n = beta.as_finite().expect("finite height in an inftree") as usize;
                Seq::of(toks, end).take(n).into_iter().map(Token::Child).collect()
            }
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => {
                if beta.is_zero() {
                    return Vec::new();
                }
                let [t, rest @ ..] = toks else {
                    panic!("height {beta} above a fan root");
                };
                let i = as_index(t).unwrap_or(0);
                let child = self.child(i).expect("valid child");
                let inner = one().sub_left(beta).expect("beta >= 1");
                prefixed(&[Token::Child(i)], child.at(rest, end, &inner))
            }
            TreeSpec::WithTops { base, .. } => match toks {
                [top @ Token::Top(p, _)] => {
                    if base.path_len(&p.toks, &p.end) == *beta {
                        vec![top.clone()]
                    } else {
                        base.at(&p.toks, &p.end, beta)
                    }
                }
                _ => base.at(toks, end, beta),
            },
            TreeSpec::Graft { base, scion, .. } => match split_scion(toks) {
                Some((p, _, _, rest)) => {
                    let h0 = add(&base.path_len(&p.toks, &p.end), &one());
                    if beta < &h0 {
                        base.at(&toks[..1], &End::Node, beta)
                    } else {
                        let inner = h0.sub_left(beta).expect("beta >= h0");
                        prefixed(&toks[..2], scion.at(rest, end, &inner))
                    }
                }
                None => base.at(toks, end, beta),
            },
            TreeSpec::ChainAffine { .. } => Vec::new(),
        }
    }

    /// Order type of the intersection of two down-closed chains.
    pub fn meet_len(&self, a: &Path, b: &Path) -> Ordinal {
        self.meet(&a.toks, &a.end, &b.toks, &b.end)
    }

    fn meet(&self, t1: &[Token], e1: &End, t2: &[Token], e2: &End) -> Ordinal {
        match self {
            TreeSpec::Chain(_) | TreeSpec::ChainAffine { .. } => {
                self.path_len(t1, e1).min(self.path_len(t2, e2))
            }
            TreeSpec::InfTree(_) => {
                let (s1, s2) = (Seq::of(t1, e1), Seq::of(t2, e2));
                let lcp = match (&s1, &s2) {
                    (Seq::Finite(a), Seq::Finite(b)) => {
                        Some(a.iter().zip(b).take_while(|(x, y)| x == y).count())
                    }
                    (Seq::Finite(a), Seq::Infinite(s)) | (Seq::Infinite(s), Seq::Finite(a)) => {
                        Some(s.common_prefix_with(a))
                    }
                    (Seq::Infinite(a), Seq::Infinite(b)) => a.common_prefix(b),
                };
                let bound = s1.len().min(s2.len());
                match lcp {
                    Some(l) => bound.min(Ordinal::nat(l as u64 + 1)),
                    None => bound,
                }
            }
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match (t1, t2) {
                ([a, r1 @ ..], [b, r2 @ ..]) if as_index(a) == as_index(b) => {
                    let child = self.child(as_index(a).unwrap_or(0)).expect("valid child");
                    add(&one(), &child.meet(r1, e1, r2, e2))
                }
                _ => {
                    let l1 = self.path_len(t1, e1);
                    let l2 = self.path_len(t2, e2);
                    one().min(l1).min(l2)
                }
            },
            TreeSpec::WithTops { base, .. } => {
                // A top's downset is its branch plus the top itself.
                let view = |t: &[Token], e: &End| -> (Option<Token>, Vec<Token>, End) {
                    match (t, e) {
                        ([top @ Token::Top(p, _)], End::Node) => (Some(top.clone()), p.toks.clone(), p.end.clone()),
                        ([Token::Top(p, _)], _) => (None, p.toks.clone(), p.end.clone()),
                        _ => (None, t.to_vec(), e.clone()),
                    }
                };
                let (top1, bt1, be1) = view(t1, e1);
                let (top2, bt2, be2) = view(t2, e2);
                match (top1, top2) {
                    (Some(x), Some(y)) if x == y => self.height(t1).succ(),
                    _ => base.meet(&bt1, &be1, &bt2, &be2),
                }
            }
            TreeSpec::Graft { base, scion, .. } => match (split_scion(t1), split_scion(t2)) {
                (Some((p1, c1, j1, r1)), Some((p2, c2, j2, r2))) if p1 == p2 && c1 == c2 => {
                    let h0 = add(&base.path_len(&p1.toks, &p1.end), &one());
                    if j1 == j2 {
                        add(&h0, &scion.meet(r1, e1, r2, e2))
                    } else {
                        h0
                    }
                }
                (s1, s2) => {
                    let (bt1, be1) = match s1 {
                        Some(_) => (t1[..1].to_vec(), End::Node),
                        None => (t1.to_vec(), e1.clone()),
                    };
                    let (bt2, be2) = match s2 {
                        Some(_) => (t2[..1].to_vec(), End::Node),
                        None => (t2.to_vec(), e2.clone()),
                    };
                    base.meet(&bt1, &be1, &bt2, &be2)
                }
            },
        }
    }

    /// Limit nodes whose strict downset is the given chain.
    pub fn tops(&self, toks: &[Token], end: &End) -> Vec<Vec<Token>> {
        match self {
            TreeSpec::Chain(_) => match (toks, end) {
                ([t @ Token::Pos(l)], End::Strict) if l.is_limit() => vec![vec![t.clone()]],
                _ => Vec::new(),
            },
            TreeSpec::InfTree(_) | TreeSpec::ChainAffine { .. } => Vec::new(),
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [t, rest @ ..] => {
                    let i = as_index(t).unwrap_or(0);
                    let child = self.child(i).expect("valid child");
                    child
                        .tops(rest, end)
                        .into_iter()
                        .map(|v| prefixed(&[Token::Child(i)], v))
                        .collect()
                }
                [] => Vec::new(),
            },
            TreeSpec::WithTops { base, branches, mult } => {
                let (bt, be) = match (toks, end) {
                    ([Token::Top(p, _)], End::Strict) => (p.toks.clone(), p.end.clone()),
                    ([Token::Top(..)], _) => return Vec::new(),
                    _ => (toks.to_vec(), end.clone()),
                };
                let mut out = base.tops(&bt, &be);
                let branch = Path { toks: bt, end: be };
                if branches.contains(&branch) {
                    for c in 0..*mult {
                        out.push(vec![Token::Top(Box::new(branch.clone()), c)]);
                    }
                }
                out
            }
            TreeSpec::Graft { base, scion, .. } => match split_scion(toks) {
                Some((_, _, _, rest)) => scion
                    .tops(rest, end)
                    .into_iter()
                    .map(|v| prefixed(&toks[..2], v))
                    .collect(),
                None => base.tops(toks, end),
            },
        }
    }

    /// Successors of a node whose child index lies in `lo..hi`.
    pub fn children(&self, toks: &[Token], lo: u64, hi: u64) -> Vec<Vec<Token>> {
        match self {
            TreeSpec::Chain(alpha) => match toks {
                [Token::Pos(b)] if lo == 0 && hi > 0 && &b.succ() < alpha => vec![vec![Token::Pos(b.succ())]],
                _ => Vec::new(),
            },
            TreeSpec::InfTree(b) => (lo..hi)
                .take_while(|i| b.contains(*i))
                .map(|i| prefixed(toks, vec![Token::Child(i)]))
                .collect(),
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [] => (lo..hi)
                    .take_while(|i| self.child_count().contains(*i))
                    .map(|i| vec![Token::Child(i)])
                    .collect(),
                [t, rest @ ..] => {
                    let i = as_index(t).unwrap_or(0);
                    let child = self.child(i).expect("valid child");
                    child
                        .children(rest, lo, hi)
                        .into_iter()
                        .map(|v| prefixed(&[Token::Child(i)], v))
                        .collect()
                }
            },
            TreeSpec::WithTops { base, .. } => match toks {
                [Token::Top(..)] => Vec::new(),
                _ => base.children(toks, lo, hi),
            },
            TreeSpec::Graft { base, scion, roots } => match (toks, split_scion(toks)) {
                ([Token::Top(..)], _) => (lo..hi)
                    .take_while(|j| roots.contains(*j))
                    .map(|j| {
                        let mut v = prefixed(toks, vec![Token::Scion(j)]);
                        v.extend(scion.at(&[], &End::Node, &Ordinal::zero()));
                        v
                    })
                    .collect(),
                (_, Some((_, _, _, rest))) => scion
                    .children(rest, lo, hi)
                    .into_iter()
                    .map(|v| prefixed(&toks[..2], v))
                    .collect(),
                _ => base.children(toks, lo, hi),
            },
            TreeSpec::ChainAffine { .. } => Vec::new(),
        }
    }

    /// Least height of a limit node `t >= node`, if there is one.
    pub fn least_limit_above(&self, toks: &[Token]) -> Option<Ordinal> {
        match self {
            TreeSpec::Chain(alpha) => {
                let [Token::Pos(b)] = toks else { return None };
                if b.is_limit() {
                    return Some(b.clone());
                }
                let base: Vec<(u32, u64)> = b.terms().iter().copied().filter(|t| t.0 > 0).collect();
                let lim = Ordinal::from_terms(base).ok()?.add(&Ordinal::omega()).ok()?;
                (&lim < alpha).then_some(lim)
            }
            TreeSpec::InfTree(_) | TreeSpec::ChainAffine { .. } => None,
            TreeSpec::Fan(cs) => match toks {
                [] => cs.iter().filter_map(|c| c.least_limit_above(&[])).min().map(|h| add(&one(), &h)),
                [t, rest @ ..] => {
                    let child = self.child(as_index(t).unwrap_or(0)).expect("valid child");
                    child.least_limit_above(rest).map(|h| add(&one(), &h))
                }
            },
            TreeSpec::FanOmega(tpl) => match toks {
                [] if tpl.has_affine() => None,
                [] => tpl.least_limit_above(&[]).map(|h| add(&one(), &h)),
                [t, rest @ ..] => {
                    let child = self.child(as_index(t).unwrap_or(0)).expect("valid child");
                    child.least_limit_above(rest).map(|h| add(&one(), &h))
                }
            },
            TreeSpec::WithTops { base, branches, .. } => match toks {
                [Token::Top(p, _)] => Some(base.path_len(&p.toks, &p.end)),
                _ => {
                    let h = base.height(toks);
                    let via_tops = branches
                        .iter()
                        .filter(|p| base.at(&p.toks, &p.end, &h) == toks)
                        .map(|p| base.path_len(&p.toks, &p.end))
                        .min();
                    [base.least_limit_above(toks), via_tops].into_iter().flatten().min()
                }
            },
            TreeSpec::Graft { base, scion, .. } => match split_scion(toks) {
                Some((p, _, _, rest)) => {
                    let h0 = add(&base.path_len(&p.toks, &p.end), &one());
                    scion.least_limit_above(rest).map(|h| add(&h0, &h))
                }
                None => base.least_limit_above(toks),
            },
        }
    }

    /// All limit nodes strictly above a node, or `None` when there are
    /// infinitely many (or too many to list).
    pub fn limits_above(&self, toks: &[Token]) -> Option<Vec<Vec<Token>>> {
        const CAP: u64 = 64;
        match self {
            TreeSpec::Chain(alpha) => {
                let [Token::Pos(b)] = toks else { return Some(Vec::new()) };
                let mut out = Vec::new();
                let mut lim = match self.least_limit_above(toks) {
                    Some(l) if &l == b => l.add(&Ordinal::omega()).ok()?,
                    Some(l) => l,
                    None => return Some(out),
                };
                while &lim < alpha {
                    if out.len() as u64 == CAP {
                        return None;
                    }
                    out.push(vec![Token::Pos(lim.clone())]);
                    lim = lim.add(&Ordinal::omega()).ok()?;
                }
                Some(out)
            }
            TreeSpec::InfTree(_) | TreeSpec::ChainAffine { .. } => Some(Vec::new()),
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match toks {
                [] => {
                    let n = match self.child_count() {
                        Count::Finite(n) => n,
                        Count::Omega => {
                            let TreeSpec::FanOmega(tpl) = self else { unreachable!() };
                            return (tpl.has_affine() || tpl.least_limit_above(&[]).is_none()).then(Vec::new);
                        }
                    };
                    let mut out = Vec::new();
                    for i in 0..n {
                        let child = self.child(i).expect("valid child");
                        let root = child.at(&[], &End::Node, &Ordinal::zero());
                        let here = child.height(&root).is_limit();
                        if here {
                            out.push(prefixed(&[Token::Child(i)], root.clone()));
                        }
                        for l in child.limits_above(&root)? {
                            out.push(prefixed(&[Token::Child(i)], l));
                        }
                    }
                    Some(out)
                }
                [t, rest @ ..] => {
                    let i = as_index(t).unwrap_or(0);
                    let child = self.child(i).expect("valid child");
                    Some(child.limits_above(rest)?.into_iter().map(|l| prefixed(&[Token::Child(i)], l)).collect())
                }
            },
            TreeSpec::WithTops { base, branches, mult } => match toks {
                [Token::Top(..)] => Some(Vec::new()),
                _ => {
                    let mut out = base.limits_above(toks)?;
                    let h = base.height(toks);
                    for p in branches {
                        if base.path_len(&p.toks, &p.end) > h && base.at(&p.toks, &p.end, &h) == toks {
                            for c in 0..*mult {
                                out.push(vec![Token::Top(Box::new(p.clone()), c)]);
                            }
                        }
                    }
                    Some(out)
                }
            },
            TreeSpec::Graft { base, scion, roots } => match split_scion(toks) {
                Some((_, _, _, rest)) => {
                    Some(scion.limits_above(rest)?.into_iter().map(|l| prefixed(&toks[..2], l)).collect())
                }
                None => {
                    let below = base.limits_above(toks)?;
                    let mut tops: Vec<Vec<Token>> =
                        below.iter().filter(|l| matches!(l.as_slice(), [Token::Top(..)])).cloned().collect();
                    if matches!(toks, [Token::Top(..)]) {
                        tops.push(toks.to_vec());
                    }
                    let scion_root = scion.at(&[], &End::Node, &Ordinal::zero());
                    let mut inner = scion.limits_above(&scion_root)?;
                    if scion.height(&scion_root).is_limit() {
                        inner.push(scion_root);
                    }
                    let mut out = below;
                    if inner.is_empty() {
                        return Some(out);
                    }
                    let Count::Finite(r) = roots else { return None };
                    for top in tops {
                        for j in 0..*r {
                            let head = prefixed(&top, vec![Token::Scion(j)]);
                            out.extend(inner.iter().map(|l| prefixed(&head, l.clone())));
                        }
                    }
                    Some(out)
                }
            },
        }
    }

    // ----- finite windows ----------------------------------------------------

    /// All nodes inside the bounds, in a deterministic order.
    pub fn nodes(&self, bounds: Bounds) -> Vec<NodeAddr> {
        let mut out = Vec::new();
        self.nodes_rec(bounds, &mut |t| out.push(NodeAddr(t)));
        out
    }

    fn nodes_rec(&self, bounds: Bounds, emit: &mut dyn FnMut(Vec<Token>)) {
        match self {
            TreeSpec::Chain(alpha) => {
                for b in ordinals_below(alpha, bounds.depth) {
                    emit(vec![Token::Pos(b)]);
                }
            }
            TreeSpec::InfTree(b) => {
                let k = b.capped(bounds.breadth);
                let mut frontier = vec![Vec::new()];
                for _ in 0..=bounds.depth {
                    let mut next = Vec::new();
                    for w in frontier {
                        for i in 0..k {
                            next.push(prefixed(&w, vec![Token::Child(i)]));
                        }
                        emit(w);
                    }
                    frontier = next;
                }
            }
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => {
                emit(Vec::new());
                for i in 0..self.child_count().capped(bounds.breadth) {
                    let child = self.child(i).expect("valid child");
                    child.nodes_rec(bounds, &mut |t| emit(prefixed(&[Token::Child(i)], t)));
                }
            }
            TreeSpec::WithTops { base, branches, mult } => {
                base.nodes_rec(bounds, emit);
                for p in branches {
                    for c in 0..(*mult).min(bounds.breadth) {
                        emit(vec![Token::Top(Box::new(p.clone()), c)]);
                    }
                }
            }
            TreeSpec::Graft { base, scion, roots } => {
                let mut tops = Vec::new();
                base.nodes_rec(bounds, &mut |t| {
                    if matches!(t.as_slice(), [Token::Top(..)]) {
                        tops.push(t.clone());
                    }
                    emit(t)
                });
                for top in tops {
                    for j in 0..roots.capped(bounds.breadth) {
                        let head = prefixed(&top, vec![Token::Scion(j)]);
                        scion.nodes_rec(bounds, &mut |t| emit(prefixed(&head, t)));
                    }
                }
            }
            TreeSpec::ChainAffine { .. } => {}
        }
    }

    /// Described high-rays inside the bounds (canonical, sorted, deduplicated).
    pub fn described_rays(&self, bounds: Bounds, sampling: RaySampling) -> Vec<HighRay> {
        let mut paths = Vec::new();
        self.rays_rec(bounds, sampling, &mut |p| paths.push(p));
        let mut rays: Vec<HighRay> = paths.iter().filter_map(|p| self.canon_ray(p).ok()).collect();
        rays.sort();
        rays.dedup();
        rays
    }

    fn rays_rec(&self, bounds: Bounds, sampling: RaySampling, emit: &mut dyn FnMut(Path)) {
        match self {
            TreeSpec::Chain(alpha) => {
                for b in ordinals_below(alpha, bounds.depth) {
                    if b.is_limit() {
                        emit(Path { toks: vec![Token::Pos(b)], end: End::Strict });
                    }
                }
                if alpha.is_limit() {
                    emit(Path { toks: Vec::new(), end: End::Whole });
                }
            }
            TreeSpec::InfTree(b) => {
                let k = b.capped(sampling.symbols.min(bounds.breadth)).max(1);
                for s in streams(k, sampling.max_prefix, sampling.max_period) {
                    emit(Path { toks: Vec::new(), end: End::Stream(s) });
                }
            }
            TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => {
                for i in 0..self.child_count().capped(bounds.breadth) {
                    let child = self.child(i).expect("valid child");
                    child.rays_rec(bounds, sampling, &mut |p| {
                        emit(Path { toks: prefixed(&[Token::Child(i)], p.toks), end: p.end })
                    });
                }
            }
            TreeSpec::WithTops { base, .. } => base.rays_rec(bounds, sampling, emit),
            TreeSpec::Graft { base, scion, roots } => {
                base.rays_rec(bounds, sampling, emit);
                for top in base.nodes(bounds) {
                    if !matches!(top.0.as_slice(), [Token::Top(..)]) {
                        continue;
                    }
                    for j in 0..roots.capped(bounds.breadth) {
                        let head = prefixed(&top.0, vec![Token::Scion(j)]);
                        scion.rays_rec(bounds, sampling, &mut |p| {
                            emit(Path { toks: prefixed(&head, p.toks), end: p.end })
                        });
                    }
                }
            }
            TreeSpec::ChainAffine { .. } => {}
        }
    }

    // ----- public node queries ----------------------------------------------

    pub fn parse_node(&self, text: &str) -> Result<NodeAddr> {
        let toks = crate::dsl::parse_address(text)?;
        self.canon_node(&toks)
    }

    pub fn parse_ray(&self, text: &str) -> Result<HighRay> {
        let p = crate::dsl::parse_path(text)?;
        self.canon_ray(&p)
    }

    pub fn height_of(&self, a: &NodeAddr) -> Ordinal {
        self.height(&a.0)
    }

    /// Tree order `a <= b`.
    pub fn le(&self, a: &NodeAddr, b: &NodeAddr) -> bool {
        let ha = self.height(&a.0);
        let hb = self.height(&b.0);
        ha <= hb && self.at(&b.0, &End::Node, &ha) == a.0
    }

    pub fn lt(&self, a: &NodeAddr, b: &NodeAddr) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: &NodeAddr, b: &NodeAddr) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn node_kind(&self, a: &NodeAddr) -> NodeKind {
        match self.height(&a.0).classify() {
            OrdinalKind::Zero => NodeKind::Root,
            OrdinalKind::Limit => NodeKind::Limit,
            OrdinalKind::Successor(p) => NodeKind::Successor(NodeAddr(self.at(&a.0, &End::Node, &p))),
        }
    }

    /// The ancestor of `a` at height `beta <= height(a)`.
    pub fn ancestor(&self, a: &NodeAddr, beta: &Ordinal) -> NodeAddr {
        NodeAddr(self.at(&a.0, &End::Node, beta))
    }

    pub fn root(&self) -> NodeAddr {
        let some = self.nodes(Bounds { depth: 1, breadth: 1 });
        self.ancestor(&some[0], &Ordinal::zero())
    }

    pub fn node_children(&self, a: &NodeAddr, window: std::ops::Range<u64>) -> Vec<NodeAddr> {
        self.children(&a.0, window.start, window.end).into_iter().map(NodeAddr).collect()
    }

    pub fn ray_len(&self, r: &HighRay) -> Ordinal {
        self.path_len(&r.0.toks, &r.0.end)
    }

    pub fn ray_node(&self, r: &HighRay, beta: &Ordinal) -> NodeAddr {
        NodeAddr(self.at(&r.0.toks, &r.0.end, beta))
    }

    pub fn ray_contains(&self, r: &HighRay, a: &NodeAddr) -> bool {
        let h = self.height(&a.0);
        h < self.ray_len(r) && self.ray_node(r, &h) == *a
    }

    pub fn ray_meet_len(&self, r1: &HighRay, r2: &HighRay) -> Ordinal {
        self.meet_len(&r1.0, &r2.0)
    }

    pub fn highray_cmp(&self, r1: &HighRay, r2: &HighRay) -> RayRelation {
        let m = self.ray_meet_len(r1, r2);
        let l1 = self.ray_len(r1);
        let l2 = self.ray_len(r2);
        match (m == l1, m == l2) {
            (true, true) => RayRelation::Equal,
            (true, false) => RayRelation::FirstInSecond,
            (false, true) => RayRelation::SecondInFirst,
            (false, false) => RayRelation::Incomparable,
        }
    }

    /// The meet of two rays as a down-closed chain, together with its length.
    pub fn ray_meet(&self, r1: &HighRay, r2: &HighRay) -> (Ordinal, Option<Path>) {
        let m = self.ray_meet_len(r1, r2);
        let chain = match m.classify() {
            OrdinalKind::Zero => None,
            OrdinalKind::Successor(p) => Some(Path { toks: self.ray_node(r1, &p).0, end: End::Node }),
            OrdinalKind::Limit if m == self.ray_len(r1) => Some(r1.0.clone()),
            OrdinalKind::Limit => Some(Path { toks: self.ray_node(r1, &m).0, end: End::Strict }),
        };
        (m, chain)
    }

    pub fn tops_of(&self, r: &HighRay) -> Vec<NodeAddr> {
        let mut t: Vec<NodeAddr> = self.tops(&r.0.toks, &r.0.end).into_iter().map(NodeAddr).collect();
        t.sort();
        t
    }

    /// The high-ray formed by the strict downset of a limit node.
    pub fn below(&self, t: &NodeAddr) -> Result<HighRay> {
        self.canon_ray(&Path { toks: t.0.clone(), end: End::Strict })
    }

    /// Height of the tree: least ordinal above every node height.
    pub fn tree_height(&self) -> Ordinal {
        match self {
            TreeSpec::Chain(a) => a.clone(),
            TreeSpec::ChainAffine { .. } => Ordinal::zero(),
            TreeSpec::InfTree(_) => Ordinal::omega(),
            TreeSpec::Fan(cs) => {
                add(&one(), &cs.iter().map(|c| c.tree_height()).max().unwrap_or_default())
            }
            TreeSpec::FanOmega(t) => match t.as_ref() {
                TreeSpec::ChainAffine { a: 0, b } => Ordinal::nat(1 + b),
                TreeSpec::ChainAffine { .. } => Ordinal::omega(),
                t => add(&one(), &t.tree_height()),
            },
            TreeSpec::WithTops { base, branches, .. } => {
                let top = branches.iter().map(|p| base.path_len(&p.toks, &p.end).succ()).max();
                base.tree_height().max(top.unwrap_or_default())
            }
            TreeSpec::Graft { base, scion, .. } => {
                let TreeSpec::WithTops { base: inner, branches, .. } = base.as_ref() else {
                    return base.tree_height();
                };
                let above = branches
                    .iter()
                    .map(|p| add(&add(&inner.path_len(&p.toks, &p.end), &one()), &scion.tree_height()))
                    .max();
                base.tree_height().max(above.unwrap_or_default())
            }
        }
    }
}

/// Ordinals `< alpha` whose coefficients are all `< depth`, ascending.
pub fn ordinals_below(alpha: &Ordinal, depth: u64) -> Vec<Ordinal> {
    let lead = alpha.leading_exponent().unwrap_or(0);
    let mut out = Vec::new();
    fn rec(e_max: i64, depth: u64, cur: &mut Vec<(u32, u64)>, alpha: &Ordinal, out: &mut Vec<Ordinal>) {
        let o = Ordinal::from_terms(cur.clone()).expect("small ordinal");
        if &o >= alpha {
            return;
        }
        out.push(o);
        for e in (0..=e_max).rev() {
            for c in 1..depth {
                cur.push((e as u32, c));
                rec(e - 1, depth, cur, alpha, out);
                cur.pop();
            }
        }
    }
    rec(lead as i64, depth, &mut Vec::new(), alpha, &mut out);
    out.sort();
    out.dedup();
    out
}

/// All reduced eventually periodic streams over `k` symbols with bounded
/// prefix and period lengths.
pub fn streams(k: u64, max_prefix: usize, max_period: usize) -> Vec<Stream> {
    fn words(k: u64, len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (0..k).map(move |x| prefixed_word(&w, x)))
                .collect();
        }
        out
    }
    fn prefixed_word(w: &[u64], x: u64) -> Vec<u64> {
        let mut v = w.to_vec();
        v.push(x);
        v
    }
    let mut out = Vec::new();
    for pl in 0..=max_prefix {
        for ql in 1..=max_period {
            for p in words(k, pl) {
                for q in words(k, ql) {
                    out.push(Stream::new(p.clone(), q).unwrap());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

impl HighRay {
    pub fn path(&self) -> &Path {
        &self.0
    }

    pub fn is_below_limit(&self) -> bool {
        self.0.end == End::Strict
    }
}

impl RayRelation {
    pub fn as_str(&self) -> &'static str {
        match self {
            RayRelation::Equal => "equal",
            RayRelation::FirstInSecond => "first-in-second",
            RayRelation::SecondInFirst => "second-in-first",
            RayRelation::Incomparable => "incomparable",
        }
    }
}

// ----- text rendering (parsed back by the dsl module) --------------------------

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Child(i) => write!(f, "{i}"),
            Token::Pos(o) => write!(f, "@{}", o.to_string().replace(' ', "")),
            Token::Top(p, c) => write!(f, "top({p},{c})"),
            Token::Scion(j) => write!(f, "s{j}"),
        }
    }
}

fn write_toks(f: &mut fmt::Formatter<'_>, toks: &[Token]) -> fmt::Result {
    write!(f, "[")?;
    for (i, t) in toks.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{t}")?;
    }
    write!(f, "]")
}

impl fmt::Display for NodeAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_toks(f, &self.0)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.end {
            End::Node => {
                write!(f, "upto(")?;
                write_toks(f, &self.toks)?;
                write!(f, ")")
            }
            End::Strict => {
                write!(f, "below(")?;
                write_toks(f, &self.toks)?;
                write!(f, ")")
            }
            tail => {
                write!(f, "branch(")?;
                if !self.toks.is_empty() {
                    write_toks(f, &self.toks)?;
                    write!(f, ";")?;
                }
                match tail {
                    End::Whole => write!(f, "whole")?,
                    End::Stream(s) => write!(f, "{s}")?,
                    _ => unreachable!(),
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for HighRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::Chain(a) => write!(f, "chain({})", a.to_string().replace(' ', "")),
            TreeSpec::ChainAffine { a, b } => write!(f, "chain({a}*i+{b})"),
            TreeSpec::Fan(cs) => {
                write!(f, "fan(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            TreeSpec::FanOmega(t) => write!(f, "fan(omega, {t})"),
            TreeSpec::InfTree(b) => write!(f, "inftree({b})"),
            TreeSpec::WithTops { base, branches, mult } => {
                write!(f, "withtops({base}, branches=[")?;
                for (i, p) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "], mult={mult})")
            }
            TreeSpec::Graft { base, scion, roots } => write!(f, "graft({base}, {scion}, roots={roots})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    fn spec(s: &str) -> TreeSpec {
        parse_spec(s).unwrap().validate().unwrap()
    }

    fn node(t: &TreeSpec, a: &str) -> NodeAddr {
        t.parse_node(a).unwrap()
    }

    const TOPS0: &str = "withtops(inftree(2), branches=[period(0)], mult=1)";
    const TWO: &str = "graft(withtops(inftree(2), branches=[period(0), period(1), prefix(0;period(1))], mult=1), inftree(2), roots=omega)";

    #[test]
    fn order_examples() {
        let c = spec("chain(w+1)");
        assert!(c.le(&node(&c, "3"), &node(&c, "w")));
        let b = spec("inftree(2)");
        assert!(!b.le(&node(&b, "[0,1]"), &node(&b, "[0,0]")));
        let t = spec(TOPS0);
        let top = node(&t, "top(period(0),0)");
        assert!(t.le(&node(&t, "[0,0,0]"), &top));
        assert!(!t.le(&node(&t, "[0,1]"), &top));
        assert!(!t.le(&top, &node(&t, "[0,0,0]")));
    }

    #[test]
    fn heights_and_kinds() {
        let c = spec("chain(w*2)");
        assert_eq!(c.height_of(&node(&c, "w")), Ordinal::omega());
        let b = spec("inftree(2)");
        assert_eq!(b.height_of(&node(&b, "[0,1,1]")), Ordinal::nat(3));
        let t = spec(TOPS0);
        assert_eq!(t.height_of(&node(&t, "top(period(0),0)")), Ordinal::omega());
        let c5 = spec("chain(5)");
        assert_eq!(c5.node_kind(&node(&c5, "0")), NodeKind::Root);
        let c = spec("chain(w+2)");
        assert_eq!(c.node_kind(&node(&c, "w+1")), NodeKind::Successor(node(&c, "w")));
        assert_eq!(c.node_kind(&node(&c, "w")), NodeKind::Limit);
        let g = spec(TWO);
        let entry = node(&g, "[top(period(1),0),s4]");
        assert_eq!(g.node_kind(&entry), NodeKind::Successor(node(&g, "top(period(1),0)")));
        assert_eq!(g.height_of(&entry), Ordinal::omega().succ());
    }

    #[test]
    fn children_examples() {
        let b = spec("inftree(2)");
        assert_eq!(b.node_children(&b.root(), 0..2), vec![node(&b, "[0]"), node(&b, "[1]")]);
        let c = spec("chain(w)");
        assert_eq!(c.node_children(&node(&c, "4"), 0..10), vec![node(&c, "5")]);
        let t = spec("withtops(inftree(2), branches=[period(0), period(1)], mult=1)");
        assert_eq!(t.node_children(&t.root(), 0..10), vec![node(&t, "[0]"), node(&t, "[1]")]);
        let l = spec("graft(withtops(chain(w), branches=[whole], mult=1), chain(w), roots=omega)");
        let top = node(&l, "top(whole,0)");
        let kids = l.node_children(&top, 0..2);
        assert_eq!(kids, vec![node(&l, "[top(whole,0),s0,@0]"), node(&l, "[top(whole,0),s1,@0]")]);
        assert!(kids.iter().all(|k| l.height_of(k) == Ordinal::omega().succ()));
        let r = l.parse_ray("branch([top(whole,0),s3];whole)").unwrap();
        assert!(!l.ray_contains(&r, &kids[0]) && l.ray_contains(&r, &top));
    }

    #[test]
    fn ray_comparisons() {
        let b = spec("inftree(2)");
        let r = b.parse_ray("branch(period(0))").unwrap();
        let s = b.parse_ray("branch(prefix(0;period(1)))").unwrap();
        assert_eq!(b.highray_cmp(&r, &r), RayRelation::Equal);
        assert_eq!(b.highray_cmp(&r, &s), RayRelation::Incomparable);
        let (m, chain) = b.ray_meet(&r, &s);
        assert_eq!(m, Ordinal::nat(2));
        assert_eq!(chain.unwrap(), Path { toks: vec![Token::Child(0)], end: End::Node });

        let g = spec(TWO);
        let tau = node(&g, "top(period(0),0)");
        let below = g.below(&tau).unwrap();
        let through = g.parse_ray("branch([top(period(0),0),s2];period(1))").unwrap();
        assert_eq!(g.highray_cmp(&below, &through), RayRelation::FirstInSecond);
        assert_eq!(g.ray_len(&through), Ordinal::omega().add(&Ordinal::omega()).unwrap());
    }

    #[test]
    fn tops_examples() {
        let c = spec("chain(w+1)");
        let r = c.below(&node(&c, "w")).unwrap();
        assert_eq!(c.tops_of(&r), vec![node(&c, "w")]);
        let b = spec("inftree(2)");
        assert!(b.tops_of(&b.parse_ray("period(0)").unwrap()).is_empty());
        let t = spec("withtops(inftree(2), branches=[period(0)], mult=2)");
        let r = t.parse_ray("period(0)").unwrap();
        assert_eq!(t.tops_of(&r).len(), 2);
        // a branch with tops is canonically the strict downset of its least top
        assert_eq!(r, t.below(&node(&t, "top(period(0),1)")).unwrap());
    }

    #[test]
    fn invalid_addresses_are_rejected() {
        let t = spec(TOPS0);
        assert!(t.parse_node("[2]").is_err());
        assert!(t.parse_node("top(period(1),0)").is_err());
        assert!(t.parse_node("top(period(0),1)").is_err());
        let c = spec("chain(w)");
        assert!(c.parse_node("w").is_err());
        assert!(parse_spec("withtops(inftree(2), branches=[period(2)])").unwrap().validate().is_err());
    }

    #[test]
    fn least_limits() {
        let c = spec("chain(w*2+1)");
        assert_eq!(c.least_limit_above(&node(&c, "5").0), Some(Ordinal::omega()));
        assert_eq!(c.least_limit_above(&node(&c, "w+5").0), Some("w*2".parse().unwrap()));
        let t = spec(TOPS0);
        assert_eq!(t.least_limit_above(&node(&t, "[0,0]").0), Some(Ordinal::omega()));
        assert_eq!(t.least_limit_above(&node(&t, "[0,1]").0), None);
    }

    #[test]
    fn limits_above_examples() {
        let c = spec("chain(w*3+1)");
        assert_eq!(c.limits_above(&node(&c, "5").0).unwrap().len(), 3);
        assert_eq!(c.limits_above(&node(&c, "w").0).unwrap().len(), 2);
        assert!(spec("chain(w^2)").limits_above(&node(&c, "5").0).is_none());
        let t = spec("withtops(inftree(2), branches=[period(0), prefix(0;period(1))], mult=2)");
        assert_eq!(t.limits_above(&node(&t, "[0]").0).unwrap().len(), 4);
        assert_eq!(t.limits_above(&node(&t, "[0,0]").0).unwrap().len(), 2);
        assert!(t.limits_above(&node(&t, "[1]").0).unwrap().is_empty());
        let l = spec("graft(withtops(chain(w), branches=[whole], mult=1), chain(w), roots=omega)");
        assert_eq!(l.limits_above(&node(&l, "3").0).unwrap().len(), 1);
        let g = spec("graft(withtops(chain(w), branches=[whole], mult=1), chain(w+1), roots=omega)");
        assert!(g.limits_above(&node(&g, "3").0).is_none());
    }

    #[test]
    fn truncation_sizes() {
        let b = spec("inftree(2)");
        assert_eq!(b.nodes(Bounds { depth: 4, breadth: 2 }).len(), 31);
        let c = spec("chain(w^2)");
        assert_eq!(c.nodes(Bounds { depth: 3, breadth: 1 }).len(), 9);
        assert_eq!(spec("fan(omega, chain(i+1))").tree_height(), Ordinal::omega());
    }
}
