//! Ends as high-rays: ray realization and the exact convergence criteria.
//!
//! An end is named by its high-ray. `converges` decides convergence of a
//! template sequence `ρ_n` to a target `ρ` from tree data alone. Indices with
//! `ρ ⊊ ρ_n` form the A-side and the rest the B-side. On the A-side a top of
//! `ρ` may lie on only finitely many `ρ_n`; where the graph is not uniform at
//! that top, the condition is relaxed to: only finitely many `n` share each
//! neighbourhood `N(up s_n)` of the successor `s_n` of the top in `ρ_n`. On the
//! B-side no successor of `ρ` may keep infinitely many meets `ρ ∩ ρ_n` inside
//! its strict downset.
//!
//! Affine templates are eventually periodic in `n`, so both conditions are
//! settled on a few samples per residue class past a threshold read off the
//! template constants.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::stream::lcm;
use crate::template::{SequenceTemplate, TPath};
use crate::tgraph::UniformGraph;
use crate::treespec::{HighRay, NodeAddr, NodeKind};

pub type EndDescriptor = HighRay;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A top of the target lying on infinitely many `ρ_n`.
    Top(String),
    /// A successor of the target below which infinitely many meets stay.
    Successor(String),
    /// A finite vertex set separating infinitely many `ρ_n` from the target.
    Separator(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Converges,
    Diverges { witness: Witness },
    Unknown { depth: u64 },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Converges => "Converges",
            Verdict::Diverges { .. } => "Diverges",
            Verdict::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, Verdict::Unknown { .. })
    }

    /// Two verdicts contradict when both are decided and differ.
    pub fn contradicts(&self, other: &Verdict) -> bool {
        self.is_decided() && other.is_decided() && self.name() != other.name()
    }
}

/// How many indices of each residue class are inspected.
const SAMPLES: u64 = 4;

/// Tree data the convergence criteria read: high-rays, their meets, and the
/// nodes on them.
pub trait RayTree {
    type Node: Clone + Ord + fmt::Display;

    fn canon(&self, r: &HighRay) -> Result<HighRay>;
    fn instantiate(&self, seq: &SequenceTemplate, n: u64) -> Result<HighRay>;
    fn ray_len(&self, r: &HighRay) -> Ordinal;
    fn meet_len(&self, a: &HighRay, b: &HighRay) -> Ordinal;
    fn node_at(&self, r: &HighRay, h: &Ordinal) -> Self::Node;
    /// Whether the graph has a uniform adhesion witness at the limit `top`.
    fn uniform_at(&self, top: &Self::Node) -> bool;
    /// `N(up s)` for a successor `s`, if finite.
    fn successor_neighbourhood(&self, s: &Self::Node) -> Option<Vec<Self::Node>>;
}

impl RayTree for UniformGraph {
    type Node = NodeAddr;

    fn canon(&self, r: &HighRay) -> Result<HighRay> {
        self.spec.canon_ray(r.path())
    }

    fn instantiate(&self, seq: &SequenceTemplate, n: u64) -> Result<HighRay> {
        instantiate(self, seq, n)
    }

    fn ray_len(&self, r: &HighRay) -> Ordinal {
        self.spec.ray_len(r)
    }

    fn meet_len(&self, a: &HighRay, b: &HighRay) -> Ordinal {
        self.spec.ray_meet_len(a, b)
    }

    fn node_at(&self, r: &HighRay, h: &Ordinal) -> NodeAddr {
        self.spec.ray_node(r, h)
    }

    fn uniform_at(&self, top: &NodeAddr) -> bool {
        self.adhesion_witness(top).is_ok()
    }

    fn successor_neighbourhood(&self, s: &NodeAddr) -> Option<Vec<NodeAddr>> {
        Some(self.neighbourhood_of_up(s, false).ok()?.finite()?.to_vec())
    }
}

/// Which side of the split an index falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Side {
    A,
    B,
}

pub fn side<G: RayTree>(g: &G, target: &HighRay, rho_n: &HighRay) -> Side {
    let m = g.meet_len(target, rho_n);
    if m == g.ray_len(target) && m < g.ray_len(rho_n) {
        Side::A
    } else {
        Side::B
    }
}

/// Instantiates a template at `n` as a high-ray of `g`'s tree.
pub fn instantiate(g: &UniformGraph, seq: &SequenceTemplate, n: u64) -> Result<HighRay> {
    let outside = |e: Error| Error::TemplateOutsideTree { index: n, reason: e.to_string() };
    let path = seq.at(n).map_err(outside)?;
    g.spec.canon_ray(&path).map_err(outside)
}

/// Threshold and step after which every residue class behaves uniformly.
pub fn sampling_plan(seq: &SequenceTemplate, target: &HighRay) -> (u64, u64) {
    let t = TPath::from(target.path());
    let n0 = 4 + 2 * seq.max_constant().max(t.max_constant());
    let step = lcm(seq.period_hint() as usize, t.period_hint() as usize) as u64;
    (n0, step)
}

pub fn converges<G: RayTree>(g: &G, seq: &SequenceTemplate, target: &EndDescriptor) -> Result<Verdict> {
    let target = g.canon(target)?;
    let (n0, step) = sampling_plan(seq, &target);
    let depth = n0 + step * SAMPLES;
    let mut unknown = false;
    for r in 0..step {
        let ns: Vec<u64> = (0..SAMPLES).map(|k| n0 + r + k * step).collect();
        let rays = ns.iter().map(|&n| g.instantiate(seq, n)).collect::<Result<Vec<_>>>()?;
        let sides: BTreeSet<Side> = rays.iter().map(|x| side(g, &target, x)).collect();
        let class = match sides.into_iter().collect::<Vec<_>>().as_slice() {
            [Side::A] => a_side(g, &target, &rays),
            [Side::B] => b_side(g, &target, &rays),
            _ => None,
        };
        match class {
            Some(Verdict::Diverges { witness }) => return Ok(Verdict::Diverges { witness }),
            Some(_) => {}
            None => unknown = true,
        }
    }
    Ok(if unknown { Verdict::Unknown { depth } } else { Verdict::Converges })
}

/// `None` when the samples do not settle the class.
fn a_side<G: RayTree>(g: &G, target: &HighRay, rays: &[HighRay]) -> Option<Verdict> {
    let lambda = g.ray_len(target);
    let tops: Vec<G::Node> = rays.iter().map(|x| g.node_at(x, &lambda)).collect();
    let distinct: BTreeSet<&G::Node> = tops.iter().collect();
    if distinct.len() == tops.len() {
        return Some(Verdict::Converges);
    }
    if distinct.len() > 1 {
        return None;
    }
    let top = &tops[0];
    if g.uniform_at(top) {
        return Some(Verdict::Diverges { witness: Witness::Top(top.to_string()) });
    }
    // not uniform at the top: count successors by their neighbourhoods
    let above = lambda.succ();
    let sets = rays
        .iter()
        .map(|x| g.successor_neighbourhood(&g.node_at(x, &above)))
        .collect::<Option<Vec<_>>>()?;
    let distinct: BTreeSet<&Vec<G::Node>> = sets.iter().collect();
    if distinct.len() == sets.len() {
        Some(Verdict::Converges)
    } else if distinct.len() == 1 {
        let names = sets[0].iter().map(|a| a.to_string()).collect();
        Some(Verdict::Diverges { witness: Witness::Separator(names) })
    } else {
        None
    }
}

fn b_side<G: RayTree>(g: &G, target: &HighRay, rays: &[HighRay]) -> Option<Verdict> {
    let lambda = g.ray_len(target);
    let meets: Vec<Ordinal> = rays.iter().map(|x| g.meet_len(target, x)).collect();
    let stuck = |c: &Ordinal| {
        // the least successor of the target not below the meet
        let h = match c.classify() {
            OrdinalKind::Successor(_) => c.clone(),
            _ => c.succ(),
        };
        Verdict::Diverges { witness: Witness::Successor(g.node_at(target, &h).to_string()) }
    };
    if meets.iter().all(|m| *m == meets[0]) {
        return Some(if meets[0] == lambda { Verdict::Converges } else { stuck(&meets[0]) });
    }
    if !meets.windows(2).all(|w| w[0] < w[1]) {
        return None;
    }
    let sup = supremum(&meets)?;
    Some(if sup == lambda { Verdict::Converges } else { stuck(&sup) })
}

/// Supremum of an increasing affine family, from a few of its members: the
/// common leading part followed by one more power of ω above the first term
/// that keeps changing.
fn supremum(xs: &[Ordinal]) -> Option<Ordinal> {
    let first = xs[0].terms();
    let mut i = 0;
    while xs.iter().all(|x| x.terms().get(i) == first.get(i) && i < first.len()) {
        i += 1;
    }
    let e = xs.iter().map(|x| x.terms().get(i).map(|t| t.0)).collect::<BTreeSet<_>>();
    let [Some(e)] = e.into_iter().collect::<Vec<_>>()[..] else { return None };
    let common = Ordinal::from_terms(first[..i].to_vec()).ok()?;
    common.add(&Ordinal::omega_pow(e + 1)).ok()
}

/// The first `k` vertices of a ray in `g` running up the high-ray `e`.
///
/// The pick heights of the length of `e` give a cofinal chain `t_0 < t_1 < …`;
/// consecutive members are joined by walking down from `t_{i+1}` (to the
/// predecessor, or to the least pick at or above `t_i`) and reversing.
pub fn realize_ray(g: &UniformGraph, e: &EndDescriptor, k: usize) -> Vec<NodeAddr> {
    let lambda = g.spec.ray_len(e);
    let mut out: Vec<NodeAddr> = Vec::with_capacity(k);
    let mut prev: Option<Ordinal> = None;
    let mut lo = Ordinal::zero();
    while out.len() < k {
        let Some(b) = g.enumeration.argmin_in(&lo, &lambda) else { break };
        lo = b.succ();
        let t = g.spec.ray_node(e, &b);
        match &prev {
            None => out.push(t),
            Some(p) => {
                let mut seg = descend(g, &t, p);
                seg.reverse();
                out.extend(seg);
            }
        }
        prev = Some(b);
    }
    out.truncate(k);
    out
}

/// Path from `top` down to its ancestor at height `floor`, excluding the latter.
/// From a limit the walk takes the least pick at or above `floor`, which is
/// the argmin of the level keys over `[floor, height)`.
fn descend(g: &UniformGraph, top: &NodeAddr, floor: &Ordinal) -> Vec<NodeAddr> {
    let mut path = Vec::new();
    let mut x = top.clone();
    loop {
        let h = g.height(&x);
        if &h <= floor {
            break;
        }
        path.push(x.clone());
        x = match g.spec.node_kind(&x) {
            NodeKind::Successor(p) => p,
            NodeKind::Limit => {
                let b = g.enumeration.argmin_in(floor, &h).expect("floor lies below the limit");
                g.spec.ancestor(&x, &b)
            }
            NodeKind::Root => break,
        };
    }
    path
}

/// The end bijection between two graphs on one tree: identity on high-rays.
#[derive(Debug, Clone, Copy)]
pub struct HomeoMap;

impl HomeoMap {
    pub fn apply(&self, e: &EndDescriptor) -> EndDescriptor {
        e.clone()
    }

    pub fn apply_template(&self, seq: &SequenceTemplate) -> SequenceTemplate {
        seq.clone()
    }
}

pub fn homeo_map(g1: &UniformGraph, g2: &UniformGraph) -> Result<HomeoMap> {
    if g1.spec != g2.spec {
        return Err(Error::SpecMismatch);
    }
    Ok(HomeoMap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::dsl::{parse_spec, parse_template};
    use crate::treespec::Bounds;

    fn verdict(g: &UniformGraph, seq: &str, target: &str) -> Verdict {
        let seq = parse_template(seq).unwrap();
        converges(g, &seq, &g.spec.parse_ray(target).unwrap()).unwrap()
    }

    #[test]
    fn bintree_examples() {
        let g = UniformGraph::dlt(parse_spec("inftree(2)").unwrap()).unwrap();
        assert_eq!(verdict(&g, "branch(prefix=rep(0,n);period(1))", "branch(period(0))"), Verdict::Converges);
        let v = verdict(&g, "branch(prefix=0;period(1))", "branch(period(0))");
        assert_eq!(v, Verdict::Diverges { witness: Witness::Successor("[0,0]".into()) });
        assert_eq!(verdict(&g, "branch(period(0))", "branch(period(0))"), Verdict::Converges);
    }

    #[test]
    fn chain_examples() {
        let g = catalog::lookup("chain-omega2").unwrap().graph();
        assert_eq!(verdict(&g, "below(@w*(n+1))", "branch(whole)"), Verdict::Converges);
        let v = verdict(&g, "below(@w*(n+1))", "below(@w*3)");
        assert_eq!(v, Verdict::Diverges { witness: Witness::Top("[@w*3]".into()) });
        let v = verdict(&g, "below(@w)", "branch(whole)");
        assert_eq!(v, Verdict::Diverges { witness: Witness::Successor("[@w*1+1]".into()) });
    }

    #[test]
    fn ladder_uses_neighbourhood_multiplicity() {
        let g = catalog::lookup("ladder-to-limit").unwrap().graph();
        let target = "below(top(whole,0))";
        assert_eq!(verdict(&g, "branch([top(whole,0),s(n)];whole)", target), Verdict::Converges);
        assert_eq!(verdict(&g, "branch([top(whole,0),s(2*n)];whole)", target), Verdict::Converges);
        let v = verdict(&g, "branch([top(whole,0),s3];whole)", target);
        assert!(matches!(v, Verdict::Diverges { witness: Witness::Separator(ref x) } if x.len() == 2), "{v:?}");
        // with plain picks the same tree is uniform and the top decides
        let u = UniformGraph::dlt(g.spec.clone()).unwrap();
        let v = verdict(&u, "branch([top(whole,0),s(n)];whole)", target);
        assert!(matches!(v, Verdict::Diverges { witness: Witness::Top(_) }));
    }

    #[test]
    fn realized_rays() {
        let g = UniformGraph::dlt(parse_spec("chain(w+1)").unwrap()).unwrap();
        let r = realize_ray(&g, &g.spec.parse_ray("below(w)").unwrap(), 4);
        assert_eq!(r.iter().map(|a| a.to_string()).collect::<Vec<_>>(), ["[@0]", "[@1]", "[@2]", "[@3]"]);
        let b = UniformGraph::dlt(parse_spec("inftree(2)").unwrap()).unwrap();
        let r = realize_ray(&b, &b.spec.parse_ray("branch(period(0))").unwrap(), 3);
        assert_eq!(r.iter().map(|a| a.to_string()).collect::<Vec<_>>(), ["[]", "[0]", "[0,0]"]);
        for e in catalog::ENTRIES {
            let g = e.graph();
            for ray in g.spec.described_rays(Bounds { depth: 3, breadth: 2 }, Default::default()) {
                let long = realize_ray(&g, &ray, 40);
                assert_eq!(long.len(), 40);
                assert_eq!(realize_ray(&g, &ray, 17)[..], long[..17]);
                for w in long.windows(2) {
                    assert!(g.spec.lt(&w[0], &w[1]), "{}: {ray}", e.name);
                    assert!(g.adjacent(&w[0], &w[1]).unwrap());
                }
                assert!(long.iter().all(|a| g.spec.ray_contains(&ray, a)));
            }
        }
    }
}
