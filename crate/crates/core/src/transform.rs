//! Splitting limits of a finite-adhesion T-graph.
//!
//! Every limit `ℓ` that has successors is replaced by one node `v(ℓ, X)` per
//! distinct neighbourhood `X = N(up s)` of its successors `s`; `v(ℓ, X)` sits
//! below exactly the successors with `N(up s) = X`. The projection `φ` sends
//! `v(ℓ, X)` to `ℓ` and is the identity elsewhere. `G′` joins comparable nodes
//! whose images are adjacent in `G`, and is uniform: the nodes above `v(ℓ, X)`
//! only reach below it inside the lift of `X \ {ℓ}`.
//!
//! High-rays of `T′` are named by their images under `Φ`, which is a
//! bijection; the lift of a node on a ray is read off the ray itself.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::endspace::{converges, realize_ray, side, sampling_plan, RayTree, Side, Verdict};
use crate::error::{Error, Result};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::oracle::{induced, oracle_converges, EndGraph};
use crate::report::Report;
use crate::template::SequenceTemplate;
use crate::tgraph::UniformGraph;
use crate::treespec::{Bounds, HighRay, NodeAddr, NodeKind};
use crate::truncation::FiniteTruncation;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SNode {
    Orig(NodeAddr),
    Split { limit: NodeAddr, set: Vec<NodeAddr> },
}

impl fmt::Display for SNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SNode::Orig(a) => write!(f, "{a}"),
            SNode::Split { limit, set } => {
                let set: Vec<String> = set.iter().map(|a| a.to_string()).collect();
                write!(f, "v({limit};{{{}}})", set.join(","))
            }
        }
    }
}

/// A high-ray of `T′`, named by its image.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SplitRay {
    pub image: HighRay,
}

/// `T′` together with `G′`, both computed on demand from `G`.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub base: UniformGraph,
}

/// Children inspected when listing the groups of a limit.
const GROUP_WINDOW: u64 = 16;

pub fn split(g: &UniformGraph) -> Result<SplitGraph> {
    let probe = Bounds { depth: 4, breadth: 4 };
    for a in g.spec.nodes(probe) {
        if let NodeKind::Successor(_) = g.spec.node_kind(&a) {
            if g.neighbourhood_of_up(&a, false)?.finite().is_none() {
                return Err(Error::NotFiniteAdhesion {
                    node: a.to_string(),
                    reason: "N(up s) is infinite".into(),
                });
            }
        }
    }
    Ok(SplitGraph { base: g.clone() })
}

impl SplitGraph {
    /// Whether `a` is a limit with successors.
    pub fn is_split(&self, a: &NodeAddr) -> bool {
        self.base.spec.node_kind(a) == NodeKind::Limit && !self.base.spec.children(&a.0, 0, 1).is_empty()
    }

    /// `N(up s)` for a successor `s`.
    pub fn n_of(&self, s: &NodeAddr) -> Vec<NodeAddr> {
        let n = self.base.neighbourhood_of_up(s, false).expect("canonical node");
        n.finite().expect("finite adhesion").to_vec()
    }

    /// The node of `T′` over `x` on the way up to `above` (`x < above` when
    /// `x` is split).
    pub fn lift_along(&self, x: &NodeAddr, above: &NodeAddr) -> SNode {
        if !self.is_split(x) {
            return SNode::Orig(x.clone());
        }
        let s = self.base.spec.ancestor(above, &self.base.height(x).succ());
        SNode::Split { limit: x.clone(), set: self.n_of(&s) }
    }

    pub fn phi(&self, a: &SNode) -> NodeAddr {
        match a {
            SNode::Orig(x) => x.clone(),
            SNode::Split { limit, .. } => limit.clone(),
        }
    }

    pub fn phi_ray(&self, r: &SplitRay) -> HighRay {
        r.image.clone()
    }

    pub fn phi_ray_inverse(&self, r: &HighRay) -> Result<SplitRay> {
        Ok(SplitRay { image: self.base.spec.canon_ray(r.path())? })
    }

    pub fn height(&self, a: &SNode) -> Ordinal {
        self.base.height(&self.phi(a))
    }

    pub fn le(&self, a: &SNode, b: &SNode) -> bool {
        if a == b {
            return true;
        }
        let (x, y) = (self.phi(a), self.phi(b));
        if !self.base.spec.lt(&x, &y) {
            return false;
        }
        match a {
            SNode::Orig(_) => true,
            SNode::Split { set, .. } => {
                let s = self.base.spec.ancestor(&y, &self.base.height(&x).succ());
                self.n_of(&s) == *set
            }
        }
    }

    pub fn lt(&self, a: &SNode, b: &SNode) -> bool {
        a != b && self.le(a, b)
    }

    pub fn adjacent(&self, a: &SNode, b: &SNode) -> bool {
        (self.lt(a, b) || self.lt(b, a)) && self.base.adjacent_canon(&self.phi(a), &self.phi(b))
    }

    /// The node of `T′` at height `h` on the lift of `r`.
    pub fn ray_node(&self, r: &HighRay, h: &Ordinal) -> SNode {
        let x = self.base.spec.ray_node(r, h);
        if self.is_split(&x) {
            let s = self.base.spec.ray_node(r, &h.succ());
            SNode::Split { limit: x, set: self.n_of(&s) }
        } else {
            SNode::Orig(x)
        }
    }

    /// Length of the meet of two lifted rays.
    pub fn meet_len(&self, a: &HighRay, b: &HighRay) -> Ordinal {
        let m = self.base.spec.ray_meet_len(a, b);
        if let OrdinalKind::Successor(p) = m.classify() {
            let (la, lb) = (self.base.spec.ray_len(a), self.base.spec.ray_len(b));
            if m < la && m < lb && self.ray_node(a, &p) != self.ray_node(b, &p) {
                return p;
            }
        }
        m
    }

    /// The distinct neighbourhoods among the first successors of `l`.
    pub fn groups(&self, l: &NodeAddr, window: u64) -> Vec<Vec<NodeAddr>> {
        let mut out: Vec<Vec<NodeAddr>> = Vec::new();
        for s in self.base.spec.node_children(l, 0..window) {
            let n = self.n_of(&s);
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }

    /// An antichain partition of `T′`: original nodes on even levels, the
    /// nodes over a limit together on the odd level above it.
    pub fn level_index(&self, a: &SNode) -> Result<u128> {
        let e = self.base.enumeration;
        let i = crate::leveling::level_index(&self.base.spec, &self.phi(a), e)?;
        Ok(match a {
            SNode::Orig(_) => 2 * i,
            SNode::Split { .. } => 2 * i + 1,
        })
    }

    /// The nodes of `T′` over `spec.nodes(bounds)`.
    pub fn nodes(&self, bounds: Bounds) -> Vec<SNode> {
        let mut out = Vec::new();
        for a in self.base.spec.nodes(bounds) {
            if self.is_split(&a) {
                out.extend(
                    self.groups(&a, bounds.breadth.max(1)).into_iter().map(|set| SNode::Split { limit: a.clone(), set }),
                );
            } else {
                out.push(SNode::Orig(a));
            }
        }
        out
    }

    /// `G′` on `nodes(bounds)`, with the split nodes tagged.
    pub fn truncate(&self, bounds: Bounds) -> FiniteTruncation {
        let nodes: BTreeSet<SNode> = self.nodes(bounds).into_iter().collect();
        let mut tr = induced(self, &nodes, format!("split {} | {bounds:?}", self.base.spec));
        tr.tagged = nodes.iter().enumerate().filter(|(_, a)| matches!(a, SNode::Split { .. })).map(|(i, _)| i).collect();
        tr
    }

    /// Specialness of `T′` and the projection: equal level indices only on
    /// incomparable nodes, `φ` strictly order preserving and onto.
    pub fn verify_special(&self, bounds: Bounds) -> Report {
        let mut report = Report::new();
        let nodes = self.nodes(bounds);
        let levels: Vec<Option<u128>> = nodes.iter().map(|a| self.level_index(a).ok()).collect();
        let (mut bad_level, mut bad_order) = (Vec::new(), Vec::new());
        for i in 0..nodes.len() {
            for j in 0..nodes.len() {
                if i == j {
                    continue;
                }
                let lt = self.lt(&nodes[i], &nodes[j]);
                if lt && levels[i] == levels[j] {
                    bad_level.push(format!("{} < {}", nodes[i], nodes[j]));
                }
                if lt && !self.base.spec.lt(&self.phi(&nodes[i]), &self.phi(&nodes[j])) {
                    bad_order.push(format!("{} < {}", nodes[i], nodes[j]));
                }
            }
        }
        let missing_level = levels.iter().filter(|l| l.is_none()).count();
        report.push(
            "split-level-antichains",
            &self.base.spec,
            bad_level.is_empty() && missing_level == 0,
            json!({"nodes": nodes.len(), "violations": bad_level.iter().take(5).collect::<Vec<_>>(), "unindexed": missing_level}),
        );
        report.push(
            "phi-order",
            &self.base.spec,
            bad_order.is_empty(),
            json!({"violations": bad_order.iter().take(5).collect::<Vec<_>>()}),
        );
        let images: BTreeSet<NodeAddr> = nodes.iter().map(|a| self.phi(a)).collect();
        let all: BTreeSet<NodeAddr> = self.base.spec.nodes(bounds).into_iter().collect();
        report.push("phi-onto", &self.base.spec, images == all, json!({"images": images.len(), "nodes": all.len()}));
        report
    }

    /// Uniform witnesses of `G′`: for every `v(ℓ, X)` and every sampled node
    /// `y` above it, the down-neighbours of `y` below `ℓ` (computed from the
    /// adjacency, not from `X`) lie in `X \ {ℓ}`; and successors share a split
    /// node exactly when their neighbourhoods agree.
    pub fn check_witnesses(&self, bounds: Bounds) -> Report {
        let mut report = Report::new();
        let spec = &self.base.spec;
        let all = spec.nodes(bounds);
        for l in all.iter().filter(|a| self.is_split(a)) {
            let hl = self.base.height(l);
            let mut bad = Vec::new();
            let mut checked = 0;
            for y in all.iter().filter(|y| spec.lt(l, y)) {
                let v = self.lift_along(l, y);
                let SNode::Split { set, .. } = &v else { unreachable!() };
                let witness: BTreeSet<&NodeAddr> = set.iter().filter(|x| *x != l).collect();
                for z in self.base.down_neighbours(y, 64).expect("canonical node") {
                    if self.base.height(&z) < hl {
                        checked += 1;
                        if !witness.contains(&z) {
                            bad.push(format!("{y} -> {z} outside S_{v}"));
                        }
                    }
                }
            }
            report.push("split-witness", l, bad.is_empty(), json!({"edges": checked, "violations": bad.iter().take(5).collect::<Vec<_>>()}));
            let kids = spec.node_children(l, 0..bounds.breadth.max(2));
            let mut grouping_ok = true;
            for s in &kids {
                for t in &kids {
                    let same_node = self.lift_along(l, s) == self.lift_along(l, t);
                    grouping_ok &= same_node == (self.n_of(s) == self.n_of(t));
                }
            }
            report.push("split-grouping", l, grouping_ok, json!({"successors": kids.len()}));
        }
        report
    }
}

impl RayTree for SplitGraph {
    type Node = SNode;

    fn canon(&self, r: &HighRay) -> Result<HighRay> {
        self.base.canon(r)
    }

    fn instantiate(&self, seq: &SequenceTemplate, n: u64) -> Result<HighRay> {
        self.base.instantiate(seq, n)
    }

    fn ray_len(&self, r: &HighRay) -> Ordinal {
        self.base.spec.ray_len(r)
    }

    fn meet_len(&self, a: &HighRay, b: &HighRay) -> Ordinal {
        SplitGraph::meet_len(self, a, b)
    }

    fn node_at(&self, r: &HighRay, h: &Ordinal) -> SNode {
        self.ray_node(r, h)
    }

    /// Limits of `T′` are split nodes, whose witness is the finite lift of
    /// `X \ {ℓ}`, or original limits without successors.
    fn uniform_at(&self, _top: &SNode) -> bool {
        true
    }

    fn successor_neighbourhood(&self, s: &SNode) -> Option<Vec<SNode>> {
        self.full_neighbourhood(s, false)
    }
}

impl EndGraph for SplitGraph {
    fn describe(&self) -> String {
        format!("split({})", self.base.spec)
    }

    fn realize(&self, r: &HighRay, k: usize) -> Vec<SNode> {
        realize_ray(&self.base, r, k).iter().map(|x| self.ray_node(r, &self.base.height(x))).collect()
    }

    fn tops(&self, r: &HighRay) -> Vec<SNode> {
        let mut out = Vec::new();
        for t in self.base.spec.tops_of(r) {
            if self.is_split(&t) {
                out.extend(self.groups(&t, GROUP_WINDOW).into_iter().map(|set| SNode::Split { limit: t.clone(), set }));
            } else {
                out.push(SNode::Orig(t));
            }
        }
        out
    }

    fn is_successor(&self, a: &SNode) -> bool {
        matches!(a, SNode::Orig(x) if matches!(self.base.spec.node_kind(x), NodeKind::Successor(_)))
    }

    fn height_label(&self, a: &SNode) -> String {
        self.height(a).to_string()
    }

    fn down_edges(&self, y: &SNode, within: &BTreeSet<SNode>) -> Vec<SNode> {
        if let SNode::Orig(s) = y {
            if let NodeKind::Successor(_) = self.base.spec.node_kind(s) {
                let d = self.base.down_neighbours(s, 0).expect("canonical node");
                return d.iter().map(|x| self.lift_along(x, s)).filter(|x| within.contains(x)).collect();
            }
        }
        within.iter().filter(|x| self.lt(x, y) && self.base.adjacent_canon(&self.phi(x), &self.phi(y))).cloned().collect()
    }

    fn full_neighbourhood(&self, v: &SNode, strict: bool) -> Option<Vec<SNode>> {
        match v {
            SNode::Orig(a) => {
                let n = self.base.neighbourhood_of_up(a, strict).ok()?;
                let lift = |x: &NodeAddr| if x == a { SNode::Orig(a.clone()) } else { self.lift_along(x, a) };
                Some(n.finite()?.iter().map(lift).collect())
            }
            SNode::Split { limit, set } if strict => {
                let mut out = vec![v.clone()];
                out.extend(set.iter().filter(|x| *x != limit).map(|x| self.lift_along(x, limit)));
                Some(out)
            }
            // a split node keeps all the picks of its limit
            SNode::Split { .. } => None,
        }
    }

    fn is_above(&self, v: &SNode, a: &SNode, strict: bool) -> bool {
        if strict {
            self.lt(v, a)
        } else {
            self.le(v, a)
        }
    }

    fn leaving(&self, r: &HighRay, other: &HighRay) -> Option<SNode> {
        let m = self.meet_len(r, other);
        if m == self.base.spec.ray_len(r) {
            return None;
        }
        let h = match m.classify() {
            OrdinalKind::Successor(_) => m,
            _ => m.succ(),
        };
        Some(self.ray_node(r, &h))
    }
}

/// Convergence of every sample judged four ways: the criteria on `G′` and on
/// `G`, and the oracle on both. On A-side samples whose target top is not
/// uniform in `G`, the verdict on `G` is also compared with whether the
/// successor neighbourhoods `N(up s_n)` repeat.
pub fn transport_check(
    g: &UniformGraph,
    split: &SplitGraph,
    samples: &[(SequenceTemplate, HighRay)],
    depth: usize,
) -> Result<Report> {
    let mut report = Report::new();
    for (seq, target) in samples {
        let verdicts = [
            ("split", converges(split, seq, target)?),
            ("graph", converges(g, seq, target)?),
            ("oracle-graph", oracle_converges(g, seq, target, depth)?),
            ("oracle-split", oracle_converges(split, seq, target, depth)?),
        ];
        let agree = verdicts.iter().all(|(_, a)| verdicts.iter().all(|(_, b)| !a.contradicts(b)));
        let subject = format!("{seq} -> {target}");
        let detail: serde_json::Map<String, serde_json::Value> =
            verdicts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        report.push("transport", &subject, agree, serde_json::Value::Object(detail));
        if let Some(finite_to_one) = multiplicity(g, seq, target)? {
            let converged = verdicts[1].1 == Verdict::Converges;
            report.push(
                "multiplicity",
                &subject,
                converged == finite_to_one,
                json!({"finite_to_one": finite_to_one, "verdict": verdicts[1].1.name()}),
            );
        }
    }
    Ok(report)
}

/// For an A-side sample through one non-uniform top: whether the successor
/// neighbourhoods along the samples are pairwise distinct.
fn multiplicity(g: &UniformGraph, seq: &SequenceTemplate, target: &HighRay) -> Result<Option<bool>> {
    let target = g.spec.canon_ray(target.path())?;
    let (n0, step) = sampling_plan(seq, &target);
    let lambda = g.spec.ray_len(&target);
    let rays = (0..4).map(|k| g.instantiate(seq, n0 + k * step)).collect::<Result<Vec<_>>>()?;
    if rays.iter().any(|r| side(g, &target, r) != Side::A) {
        return Ok(None);
    }
    let tops: BTreeSet<NodeAddr> = rays.iter().map(|r| g.spec.ray_node(r, &lambda)).collect();
    let Some(top) = tops.first().filter(|_| tops.len() == 1) else { return Ok(None) };
    if g.adhesion_witness(top).is_ok() {
        return Ok(None);
    }
    let mut sets = Vec::new();
    for r in &rays {
        let s = g.spec.ray_node(r, &lambda.succ());
        match g.neighbourhood_of_up(&s, false)?.finite() {
            Some(n) => sets.push(n.to_vec()),
            None => return Ok(Some(false)),
        }
    }
    let distinct: BTreeSet<&Vec<NodeAddr>> = sets.iter().collect();
    Ok(Some(distinct.len() == sets.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    #[test]
    fn no_limits_with_successors_means_no_change() {
        let e = lookup("bintree-tops").unwrap();
        let s = split(&e.graph()).unwrap();
        let nodes = s.nodes(Bounds { depth: 5, breadth: 2 });
        assert!(nodes.iter().all(|a| matches!(a, SNode::Orig(_))));
        assert!(nodes.iter().all(|a| s.phi(a) == *s.base.spec.parse_node(&a.to_string()).as_ref().unwrap()));
    }

    #[test]
    fn ladder_groups() {
        let g = lookup("ladder-to-limit").unwrap().graph();
        let s = split(&g).unwrap();
        let top = g.spec.parse_node("[top(whole,0)]").unwrap();
        assert!(s.is_split(&top));
        let groups = s.groups(&top, 10);
        assert_eq!(groups.len(), 10);
        for (j, set) in groups.iter().enumerate() {
            assert_eq!(set.len(), 2);
            assert!(set.contains(&top));
            assert!(set.contains(&g.spec.parse_node(&format!("[@{j}]")).unwrap()));
        }
    }

    #[test]
    fn ladder_rays_lift_injectively() {
        let g = lookup("ladder-to-limit").unwrap().graph();
        let s = split(&g).unwrap();
        let rays: Vec<HighRay> = (0..10).map(|j| g.spec.parse_ray(&format!("branch([top(whole,0),s{j}];whole)")).unwrap()).collect();
        let lifted: BTreeSet<SplitRay> = rays.iter().map(|r| s.phi_ray_inverse(r).unwrap()).collect();
        assert_eq!(lifted.len(), 10);
        for r in &rays {
            assert_eq!(s.phi_ray(&s.phi_ray_inverse(r).unwrap()), *r);
        }
        // the lifts part at the split node, one level below the old meet
        assert_eq!(g.spec.ray_meet_len(&rays[1], &rays[2]).to_string(), "w*1 + 1");
        assert_eq!(s.meet_len(&rays[1], &rays[2]).to_string(), "w*1");
        let lo = s.ray_node(&rays[1], &Ordinal::omega());
        assert!(matches!(lo, SNode::Split { .. }));
        assert_eq!(s.phi(&lo).to_string(), "[top(branch(whole),0)]");
        assert!(!s.le(&lo, &s.ray_node(&rays[2], &Ordinal::nat(0).add(&Ordinal::omega()).unwrap().succ())));
    }

    #[test]
    fn catalog_transforms() {
        for name in ["ladder-to-limit", "two-storey"] {
            let g = lookup(name).unwrap().graph();
            let s = split(&g).unwrap();
            assert!(s.verify_special(Bounds { depth: 4, breadth: 3 }).passed(), "{name}");
            assert!(s.check_witnesses(Bounds { depth: 4, breadth: 3 }).passed(), "{name}");
        }
    }
}
