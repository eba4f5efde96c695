//! Two applications of the end/high-ray correspondence: a nested family of
//! clopen bipartitions distinguishing all ends, and a discrete expansion of
//! the end space.
//!
//! `Ω_t` is the set of ends whose high-ray contains the non-limit node `t`.
//! Along a branch these sets shrink, and for incomparable nodes they are
//! disjoint, which is all nestedness asks for.
//!
//! The expansion has, for every limit `ℓ` (and for `0`), the stage of ends
//! whose high-rays lie below height `ℓ`, followed by stages `ℓ+n+1` that each
//! add one end through every node `c` of height `ℓ+n+1`: the leftmost end
//! through `c` of length `ℓ+ω`. An end thus enters at the first node of its
//! last ω-block from which it is the leftmost continuation, or at the limit
//! stage equal to its length.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::endspace::{converges, instantiate, Verdict};
use crate::error::{Error, Result};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::report::Report;
use crate::stream::Stream;
use crate::template::SequenceTemplate;
use crate::tgraph::UniformGraph;
use crate::treespec::{End, HighRay, NodeAddr, NodeKind, Path, TreeSpec};

pub fn bip_member(spec: &TreeSpec, e: &HighRay, t: &NodeAddr) -> Result<bool> {
    if spec.node_kind(t) == NodeKind::Limit {
        return Err(Error::LimitNode(t.to_string()));
    }
    Ok(spec.ray_contains(e, t))
}

/// Every pair of non-limit `nodes`: comparable pairs must give nested sets
/// and incomparable pairs disjoint ones, on every end of `ends`.
pub fn nested_check(spec: &TreeSpec, nodes: &[NodeAddr], ends: &[HighRay]) -> Report {
    let nodes: Vec<&NodeAddr> = nodes.iter().filter(|a| spec.node_kind(a) != NodeKind::Limit).collect();
    let member: Vec<Vec<bool>> = nodes.iter().map(|t| ends.iter().map(|e| spec.ray_contains(e, t)).collect()).collect();
    let (mut pairs, mut bad) = (0usize, Vec::new());
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            pairs += 1;
            let (a, b) = (nodes[i], nodes[j]);
            let ok = if spec.le(a, b) {
                (0..ends.len()).all(|k| !member[j][k] || member[i][k])
            } else if spec.le(b, a) {
                (0..ends.len()).all(|k| !member[i][k] || member[j][k])
            } else {
                (0..ends.len()).all(|k| !(member[i][k] && member[j][k]))
            };
            if !ok {
                bad.push(format!("{a} / {b}"));
            }
        }
    }
    let mut report = Report::new();
    report.push(
        "nested",
        spec,
        bad.is_empty(),
        json!({"nodes": nodes.len(), "pairs": pairs, "ends": ends.len(), "violations": bad.iter().take(5).collect::<Vec<_>>()}),
    );
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distinction {
    pub node: NodeAddr,
    pub first: bool,
    pub second: bool,
}

/// A non-limit node on exactly one of the two high-rays: the least node of
/// one outside the other, or its successor when that node is a limit.
pub fn distinguish(spec: &TreeSpec, e1: &HighRay, e2: &HighRay) -> Result<Distinction> {
    let m = spec.ray_meet_len(e1, e2);
    let (l1, l2) = (spec.ray_len(e1), spec.ray_len(e2));
    if m == l1 && m == l2 {
        return Err(Error::EqualEnds);
    }
    let on = if m < l1 { e1 } else { e2 };
    let h = match m.classify() {
        OrdinalKind::Successor(_) => m,
        _ => m.succ(),
    };
    let node = spec.ray_node(on, &h);
    Ok(Distinction {
        first: bip_member(spec, e1, &node)?,
        second: bip_member(spec, e2, &node)?,
        node,
    })
}

/// Largest limit (or zero) not above `a`.
fn floor_limit(a: &Ordinal) -> Ordinal {
    let t: Vec<(u32, u64)> = a.terms().iter().copied().filter(|t| t.0 > 0).collect();
    Ordinal::from_terms(t).expect("terms of an ordinal")
}

/// Least limit `>= a` (for `a` of the form `ℓ + n`).
fn ceil_limit(a: &Ordinal) -> Ordinal {
    if a.is_limit() {
        a.clone()
    } else {
        floor_limit(a).add(&Ordinal::omega()).expect("below w^w")
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteExpansion {
    pub spec: TreeSpec,
    /// Supremum of the lengths of all high-rays: the stage holding every end.
    pub length: Ordinal,
}

/// How far into an ω-block the stage search looks for a choosing node.
const BLOCK_SEARCH: u64 = 64;

pub fn expansion_build(g: &UniformGraph) -> DiscreteExpansion {
    DiscreteExpansion { spec: g.spec.clone(), length: floor_limit(&g.spec.tree_height()) }
}

/// The `k`-th successor height of a cofinal sequence below the limit `s`.
fn cofinal(s: &Ordinal, k: u64) -> Option<Ordinal> {
    let f = s.fundamental(k)?;
    Some(if f.is_limit() { f.succ() } else { f })
}

impl DiscreteExpansion {
    /// The end chosen for the component above the successor `c`.
    pub fn choice(&self, c: &NodeAddr) -> Option<HighRay> {
        let target = ceil_limit(&self.spec.height_of(c));
        let candidates = [End::Stream(Stream::constant(0)), End::Whole]
            .into_iter()
            .flat_map(|end| (0..=c.0.len()).rev().map(move |k| Path { toks: c.0[..k].to_vec(), end: end.clone() }));
        for path in candidates {
            let Ok(r) = self.spec.canon_ray(&path) else { continue };
            if !self.spec.ray_contains(&r, c) {
                continue;
            }
            let len = self.spec.ray_len(&r);
            if len == target {
                return Some(r);
            }
            if len > target {
                return self.spec.below(&self.spec.ray_node(&r, &target)).ok();
            }
        }
        None
    }

    /// The node whose component chose `e`, if `e` entered at a successor stage.
    pub fn chooser(&self, e: &HighRay) -> Option<NodeAddr> {
        let len = self.spec.ray_len(e);
        // only rays of length `l + ω` are ever chosen
        if len.terms().last()?.0 != 1 {
            return None;
        }
        (0..BLOCK_SEARCH).find_map(|n| {
            let c = self.spec.ray_node(e, &len.fundamental(n)?);
            (self.choice(&c).as_ref() == Some(e)).then_some(c)
        })
    }

    pub fn stage(&self, e: &HighRay) -> Ordinal {
        match self.chooser(e) {
            Some(c) => self.spec.height_of(&c),
            None => self.spec.ray_len(e),
        }
    }
}

/// Cover, monotonicity, isolation of chosen ends within their stage, and the
/// two closure checks: every limit-stage end is the limit of ends chosen
/// along it, and convergent template samples with members inside a limit
/// stage have their limit there too.
pub fn expansion_verify(
    g: &UniformGraph,
    exp: &DiscreteExpansion,
    ends: &[HighRay],
    sequences: &[(SequenceTemplate, HighRay)],
) -> Result<Report> {
    let spec = &exp.spec;
    let mut report = Report::new();
    let stages: Vec<Ordinal> = ends.iter().map(|e| exp.stage(e)).collect();
    for (e, s) in ends.iter().zip(&stages) {
        let len = spec.ray_len(e);
        report.push(
            "expansion-cover",
            e,
            *s <= exp.length && len <= exp.length,
            json!({"stage": s.to_string(), "length": exp.length.to_string()}),
        );
        // Ω_s ⊆ Ω_λ for the next limit λ: the ray must lie below λ
        report.push("expansion-increasing", e, len <= ceil_limit(s), json!({"stage": s.to_string(), "len": len.to_string()}));
    }
    let mut by_stage: BTreeMap<&Ordinal, Vec<usize>> = BTreeMap::new();
    for (i, s) in stages.iter().enumerate() {
        by_stage.entry(s).or_default().push(i);
    }
    for (i, e) in ends.iter().enumerate() {
        let Some(c) = exp.chooser(e) else { continue };
        let others: Vec<String> = by_stage[&stages[i]]
            .iter()
            .filter(|&&j| j != i && spec.ray_contains(&ends[j], &c))
            .map(|&j| ends[j].to_string())
            .collect();
        report.push("expansion-isolated", e, others.is_empty(), json!({"witness": c, "others": others}));
    }
    for (e, s) in ends.iter().zip(&stages) {
        if !s.is_limit() {
            continue;
        }
        let mut meets = Vec::new();
        let mut below = true;
        let mut rising = true;
        for k in 0..8 {
            let h = cofinal(s, k).expect("a positive limit");
            let c = spec.ray_node(e, &h);
            match exp.choice(&c) {
                Some(r) => {
                    below &= exp.stage(&r) < *s;
                    let m = spec.ray_meet_len(e, &r);
                    rising &= m > h && meets.last().is_none_or(|p| *p <= m);
                    meets.push(m);
                }
                None => below = false,
            }
        }
        report.push(
            "expansion-closure",
            e,
            below && rising,
            json!({"stage": s.to_string(), "meets": meets.iter().map(|m| m.to_string()).collect::<Vec<_>>()}),
        );
    }
    for (seq, target) in sequences {
        if converges(g, seq, target)? != Verdict::Converges {
            continue;
        }
        let caps: Vec<Ordinal> = (24..32).map(|n| instantiate(g, seq, n).map(|r| ceil_limit(&exp.stage(&r)))).collect::<Result<_>>()?;
        if caps.windows(2).any(|w| w[0] != w[1]) {
            continue;
        }
        let t = spec.canon_ray(target.path())?;
        report.push(
            "expansion-closed",
            format!("{seq} -> {t}"),
            exp.stage(&t) <= caps[0],
            json!({"limit_stage": exp.stage(&t).to_string(), "members_below": caps[0].to_string()}),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, ENTRIES};

    fn ray(spec: &TreeSpec, s: &str) -> HighRay {
        spec.parse_ray(s).unwrap()
    }

    #[test]
    fn end_samples() {
        for e in ENTRIES {
            let n = e.ends().len();
            assert!(n >= 50 || e.name == "ray", "{}: {n}", e.name);
        }
    }

    #[test]
    fn distinguishing_nodes() {
        let spec = lookup("bintree").unwrap().graph().spec;
        let (a, b) = (ray(&spec, "branch(period(0))"), ray(&spec, "branch(prefix(0;period(1)))"));
        let d = distinguish(&spec, &a, &b).unwrap();
        assert_eq!((d.node.to_string().as_str(), d.first, d.second), ("[0,0]", true, false));
        let d = distinguish(&spec, &b, &a).unwrap();
        assert_eq!((d.node.to_string().as_str(), d.first, d.second), ("[0,1]", true, false));
        assert_eq!(distinguish(&spec, &a, &a), Err(Error::EqualEnds));

        let spec = lookup("chain-omega2").unwrap().graph().spec;
        let (a, b) = (ray(&spec, "below(@w*2)"), ray(&spec, "below(@w*3)"));
        let d = distinguish(&spec, &a, &b).unwrap();
        assert_eq!((d.node.to_string().as_str(), d.first, d.second), ("[@w*2+1]", false, true));
        let top = spec.parse_node("[@w]").unwrap();
        assert!(matches!(bip_member(&spec, &a, &top), Err(Error::LimitNode(_))));
        assert!(bip_member(&spec, &a, &spec.root()).unwrap());
    }

    #[test]
    fn nested_on_truncations() {
        for e in ENTRIES {
            let spec = e.graph().spec;
            let nodes = spec.nodes(e.bounds);
            let r = nested_check(&spec, &nodes, &e.ends());
            assert!(r.passed(), "{}", e.name);
        }
    }

    #[test]
    fn expansion_stages() {
        let g = lookup("bintree").unwrap().graph();
        let x = expansion_build(&g);
        let stage = |s: &str| x.stage(&ray(&g.spec, s)).to_string();
        assert_eq!(stage("branch(period(0))"), "1");
        assert_eq!(stage("branch(prefix(0,1;period(0)))"), "2");
        assert_eq!(stage("branch(period(1))"), "w*1");

        let g = lookup("chain-omega2").unwrap().graph();
        let x = expansion_build(&g);
        assert_eq!(x.length.to_string(), "w^2*1");
        assert_eq!(x.stage(&ray(&g.spec, "below(@w*2)")).to_string(), "w*1 + 1");
        assert_eq!(x.stage(&ray(&g.spec, "branch(whole)")).to_string(), "w^2*1");
    }

    #[test]
    fn expansions_verify() {
        for e in ENTRIES {
            let g = e.graph();
            let x = expansion_build(&g);
            let r = expansion_verify(&g, &x, &e.ends(), &e.samples(40, crate::catalog::DEFAULT_SEED)).unwrap();
            let bad: Vec<_> = r.failures().take(3).collect();
            assert!(bad.is_empty(), "{}: {bad:?}", e.name);
            assert!(x.length <= g.spec.tree_height());
        }
    }
}
