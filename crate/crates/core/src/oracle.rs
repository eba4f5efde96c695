//! Brute force on finite subgraphs: components after deleting a vertex set,
//! separation of ray tails, and a convergence verdict read off directly from
//! the definition of the end topology.
//!
//! A truncation never proves that two tails are separated in the infinite
//! graph, since components may merge beyond its horizon. Separation counts
//! only when the deleted set is a full neighbourhood `N(up v)` (or
//! `N(up v \ {v})`) with exactly one of the two tails above `v`; connectivity
//! inside the truncation, on the other hand, is always genuine.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::endspace::{realize_ray, EndDescriptor, RayTree, Verdict, Witness};
use crate::error::{Error, Result};
use crate::ordinal::OrdinalKind;
use crate::stream::lcm;
use crate::template::{SequenceTemplate, TPath};
use crate::tgraph::{components_without, UniformGraph};
use crate::treespec::{HighRay, NodeAddr, NodeKind};
use crate::truncation::FiniteTruncation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    /// Touches a vertex with neighbours outside the truncation.
    pub boundary: bool,
}

/// Components of `tr - x`, ordered by their least vertex.
pub fn components_minus(tr: &FiniteTruncation, x: &[usize]) -> Vec<Component> {
    let comp = components_without(tr, x);
    let mut out: Vec<Component> = Vec::new();
    for (v, &c) in comp.iter().enumerate() {
        if c == usize::MAX {
            continue;
        }
        if c == out.len() {
            out.push(Component { vertices: Vec::new(), boundary: false });
        }
        out[c].vertices.push(v);
        out[c].boundary |= tr.boundary[v];
    }
    out
}

fn indices(tr: &FiniteTruncation, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|v| tr.index_of(v).ok_or_else(|| Error::PrefixNotInTruncation(v.clone()))).collect()
}

/// Whether the last tail vertices of `p` and `q` outside `x` lie in distinct
/// components of `tr - x`, neither of which reaches the boundary.
pub fn separated(tr: &FiniteTruncation, p: &[String], q: &[String], x: &[String]) -> Result<bool> {
    let (p, q) = (indices(tr, p)?, indices(tr, q)?);
    let x: Vec<usize> = x.iter().filter_map(|v| tr.index_of(v)).collect();
    let tail = |r: &[usize]| r.iter().rev().find(|v| !x.contains(v)).copied();
    let (Some(a), Some(b)) = (tail(&p), tail(&q)) else { return Ok(false) };
    let comp = components_without(tr, &x);
    if comp[a] == comp[b] {
        return Ok(false);
    }
    let touches = |c: usize| (0..tr.len()).any(|v| comp[v] == c && tr.boundary[v]);
    Ok(!touches(comp[a]) && !touches(comp[b]))
}

/// What the oracle needs from a graph whose ends are named by high-rays of
/// the underlying tree.
pub trait EndGraph: RayTree {
    fn describe(&self) -> String;
    /// A ray of the graph running up `r`, first `k` vertices.
    fn realize(&self, r: &HighRay, k: usize) -> Vec<Self::Node>;
    /// Tops of `r` to include as vertices (possibly only some of them).
    fn tops(&self, r: &HighRay) -> Vec<Self::Node>;
    fn is_successor(&self, a: &Self::Node) -> bool;
    fn height_label(&self, a: &Self::Node) -> String;
    /// Neighbours of `y` in `within` lying below `y`.
    fn down_edges(&self, y: &Self::Node, within: &BTreeSet<Self::Node>) -> Vec<Self::Node>;
    /// `N(up v)`, or `N(up v \ {v})` when `strict`, if finite.
    fn full_neighbourhood(&self, v: &Self::Node, strict: bool) -> Option<Vec<Self::Node>>;
    /// `v <= a`, or `v < a` when `strict`.
    fn is_above(&self, v: &Self::Node, a: &Self::Node, strict: bool) -> bool;
    /// The least node of `r` outside `other`, moved up to its successor when
    /// it is a limit.
    fn leaving(&self, r: &HighRay, other: &HighRay) -> Option<Self::Node>;
}

impl EndGraph for UniformGraph {
    fn describe(&self) -> String {
        self.spec.to_string()
    }

    fn realize(&self, r: &HighRay, k: usize) -> Vec<NodeAddr> {
        realize_ray(self, r, k)
    }

    fn tops(&self, r: &HighRay) -> Vec<NodeAddr> {
        self.spec.tops_of(r)
    }

    fn is_successor(&self, a: &NodeAddr) -> bool {
        matches!(self.spec.node_kind(a), NodeKind::Successor(_))
    }

    fn height_label(&self, a: &NodeAddr) -> String {
        self.height(a).to_string()
    }

    fn down_edges(&self, y: &NodeAddr, within: &BTreeSet<NodeAddr>) -> Vec<NodeAddr> {
        match self.spec.node_kind(y) {
            NodeKind::Root => Vec::new(),
            NodeKind::Successor(_) => {
                let d = self.down_neighbours(y, 0).expect("canonical node");
                d.into_iter().filter(|x| within.contains(x)).collect()
            }
            NodeKind::Limit => within.iter().filter(|x| self.adjacent_canon(x, y)).cloned().collect(),
        }
    }

    fn full_neighbourhood(&self, v: &NodeAddr, strict: bool) -> Option<Vec<NodeAddr>> {
        Some(self.neighbourhood_of_up(v, strict).ok()?.finite()?.to_vec())
    }

    fn is_above(&self, v: &NodeAddr, a: &NodeAddr, strict: bool) -> bool {
        if strict {
            self.spec.lt(v, a)
        } else {
            self.spec.le(v, a)
        }
    }

    fn leaving(&self, r: &HighRay, other: &HighRay) -> Option<NodeAddr> {
        let m = self.spec.ray_meet_len(r, other);
        if m == self.spec.ray_len(r) {
            return None;
        }
        let h = match m.classify() {
            OrdinalKind::Successor(_) => m,
            _ => m.succ(),
        };
        Some(self.spec.ray_node(r, &h))
    }
}

/// The subgraph induced on `nodes`. Every vertex is flagged as boundary:
/// none of them has its neighbourhood fully inside.
pub fn induced<G: EndGraph>(g: &G, nodes: &BTreeSet<G::Node>, provenance: String) -> FiniteTruncation {
    let list: Vec<&G::Node> = nodes.iter().collect();
    let pos: BTreeMap<&G::Node, usize> = list.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let mut edges = Vec::new();
    for (i, y) in list.iter().enumerate() {
        for x in g.down_edges(y, nodes) {
            edges.push((pos[&x], i));
        }
    }
    FiniteTruncation::new(
        list.iter().map(|a| a.to_string()).collect(),
        list.iter().map(|a| g.height_label(a)).collect(),
        edges,
        vec![true; list.len()],
        provenance,
    )
}

/// A deleted set, with the node whose up-closure it cuts off when it is a
/// full neighbourhood.
struct Probe<N> {
    set: Vec<N>,
    above: Option<(N, bool)>,
}

fn full_probe<G: EndGraph>(g: &G, v: G::Node, strict: bool) -> Option<Probe<G::Node>> {
    let set = g.full_neighbourhood(&v, strict)?;
    Some(Probe { set, above: Some((v, strict)) })
}

/// Convergence of `seq` to `target`, judged on realized rays of length
/// `depth` for the indices in `[depth/4, depth/2)`.
///
/// Probes are the full neighbourhoods of successors along the target, of the
/// target's tops, and of the nodes where the sampled rays leave the target
/// (or the target leaves them), plus every set of at most two vertices among
/// the first six of the target's ray. Divergence needs one full
/// neighbourhood separating a whole residue class of indices; convergence
/// needs every probe to leave the upper half of the indices connected to the
/// target.
pub fn oracle_converges<G: EndGraph>(
    g: &G,
    seq: &SequenceTemplate,
    target: &EndDescriptor,
    depth: usize,
) -> Result<Verdict> {
    let unknown = Verdict::Unknown { depth: depth as u64 };
    if depth < 16 {
        return Ok(unknown);
    }
    let target = g.canon(target)?;
    let (lo, mid, hi) = (depth / 4, 3 * depth / 8, depth / 2);
    let window: Vec<u64> = (lo as u64..hi as u64).collect();
    let rays = window.iter().map(|&n| g.instantiate(seq, n)).collect::<Result<Vec<_>>>()?;

    let main = g.realize(&target, depth);
    let paths: Vec<Vec<G::Node>> = rays.iter().map(|r| g.realize(r, depth)).collect();
    let mut nodes: BTreeSet<G::Node> = main.iter().cloned().collect();
    nodes.extend(g.tops(&target));
    for (r, p) in rays.iter().zip(&paths) {
        nodes.extend(p.iter().cloned());
        nodes.extend(g.tops(r));
    }
    let tr = induced(g, &nodes, format!("{} | {seq} -> {target} | depth {depth}", g.describe()));

    let mut probes: Vec<Probe<G::Node>> = Vec::new();
    for t in main.iter().take(depth / 8) {
        if g.is_successor(t) {
            probes.extend(full_probe(g, t.clone(), false));
        }
    }
    for top in g.tops(&target) {
        probes.extend(full_probe(g, top, true));
    }
    for r in rays.iter().take(mid - lo) {
        for v in [g.leaving(&target, r), g.leaving(r, &target)].into_iter().flatten() {
            probes.extend(full_probe(g, v, false));
        }
    }
    let core: Vec<&G::Node> = main.iter().take(6).collect();
    for (i, a) in core.iter().enumerate() {
        probes.push(Probe { set: vec![(*a).clone()], above: None });
        for b in &core[i + 1..] {
            probes.push(Probe { set: vec![(*a).clone(), (*b).clone()], above: None });
        }
    }
    let mut seen = BTreeSet::new();
    probes.retain(|p| seen.insert((p.set.clone(), p.above.clone())));

    let step = lcm(seq.period_hint() as usize, TPath::from(target.path()).period_hint() as usize);
    let Some(main_tail) = main.last() else { return Ok(unknown) };
    let index = |a: &G::Node| tr.index_of(&a.to_string()).expect("realized vertices are in the truncation");
    let mut all_connected = true;
    for probe in &probes {
        let x: Vec<usize> = probe.set.iter().filter_map(|a| tr.index_of(&a.to_string())).collect();
        let comp = components_without(&tr, &x);
        let main_c = comp[index(main_tail)];
        let mut cut = vec![false; window.len()];
        let mut certified = vec![false; window.len()];
        for (k, p) in paths.iter().enumerate() {
            let Some(t) = p.last() else { return Ok(unknown) };
            let c = comp[index(t)];
            let apart = c != main_c || c == usize::MAX;
            cut[k] = apart;
            if let Some((v, strict)) = &probe.above {
                let sides = g.is_above(v, main_tail, *strict) != g.is_above(v, t, *strict);
                certified[k] = sides && apart && c != usize::MAX && main_c != usize::MAX;
            }
        }
        for r in 0..step {
            let class: Vec<usize> = (r..window.len()).step_by(step).collect();
            if class.len() >= 2 && class.iter().all(|&k| certified[k]) {
                let names = probe.set.iter().map(|a| a.to_string()).collect();
                return Ok(Verdict::Diverges { witness: Witness::Separator(names) });
            }
        }
        if cut[mid - lo..].iter().any(|&c| c) {
            all_connected = false;
        }
    }
    Ok(if all_connected { Verdict::Converges } else { unknown })
}
