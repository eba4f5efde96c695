//! Tree order checked against downsets materialized straight from the
//! combinator definitions.

use std::collections::{BTreeMap, BTreeSet};

use endspace::dsl::parse_spec;
use endspace::ordinal::Ordinal;
use endspace::treespec::{Bounds, End, NodeAddr, NodeKind, Path, RayRelation, RaySampling, Token, TreeSpec};
use proptest::prelude::*;

type Down = BTreeMap<Vec<Token>, BTreeSet<Vec<Token>>>;

fn with(prefix: &[Token], t: &[Token]) -> Vec<Token> {
    prefix.iter().chain(t).cloned().collect()
}

/// All CNF ordinals below `alpha` with coefficients below `depth`, by brute force.
fn small_ordinals(alpha: &Ordinal, depth: u64) -> Vec<Ordinal> {
    let lead = alpha.leading_exponent().unwrap_or(0);
    let mut out = vec![];
    let digits = (lead + 1) as usize;
    let total = depth.pow(digits as u32);
    for code in 0..total {
        let mut c = code;
        let mut terms = vec![];
        for e in 0..digits {
            let k = c % depth;
            c /= depth;
            if k > 0 {
                terms.push((e as u32, k));
            }
        }
        terms.reverse();
        let o = Ordinal::from_terms(terms).unwrap();
        if &o < alpha {
            out.push(o);
        }
    }
    out
}

/// Whether node `x` of `spec` lies on the branch `(toks, end)`.
fn on_branch(spec: &TreeSpec, toks: &[Token], end: &End, x: &[Token]) -> bool {
    match spec {
        TreeSpec::Chain(_) => true,
        TreeSpec::InfTree(_) => {
            let End::Stream(s) = end else { return false };
            let word: Vec<u64> = toks.iter().map(|t| if let Token::Child(i) = t { *i } else { u64::MAX }).collect();
            let full = s.prepend(&word);
            x.iter().enumerate().all(|(k, t)| *t == Token::Child(full.at(k)))
        }
        TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => match (toks, x) {
            (_, []) => true,
            ([Token::Child(i), rest @ ..], [Token::Child(j), xr @ ..]) => {
                i == j && on_branch(&spec.child(*i).unwrap(), rest, end, xr)
            }
            _ => false,
        },
        TreeSpec::WithTops { base, .. } => !matches!(x, [Token::Top(..)]) && on_branch(base, toks, end, x),
        TreeSpec::Graft { base, scion, .. } => match (toks, x) {
            ([Token::Top(p, c), Token::Scion(j), rest @ ..], _) => {
                let top = &toks[..1];
                match x {
                    [Token::Top(q, d), Token::Scion(k), xr @ ..] => {
                        (p, c, j) == (q, d, k) && on_branch(scion, rest, end, xr)
                    }
                    [Token::Top(..)] => x == top,
                    _ => on_branch(base, &p.toks, &p.end, x),
                }
            }
            (_, [Token::Top(..), ..]) => false,
            _ => on_branch(base, toks, end, x),
        },
        TreeSpec::ChainAffine { .. } => true,
    }
}

fn materialize(spec: &TreeSpec, b: Bounds) -> Down {
    let mut out = Down::new();
    match spec {
        TreeSpec::Chain(alpha) => {
            let all = small_ordinals(alpha, b.depth);
            for o in &all {
                let down = all.iter().filter(|p| *p < o).map(|p| vec![Token::Pos(p.clone())]).collect();
                out.insert(vec![Token::Pos(o.clone())], down);
            }
        }
        TreeSpec::InfTree(k) => {
            let k = k.capped(b.breadth);
            let mut level = vec![vec![]];
            for _ in 0..=b.depth {
                let mut next = vec![];
                for w in level {
                    let down = (0..w.len()).map(|i| w[..i].to_vec()).collect();
                    for i in 0..k {
                        next.push(with(&w, &[Token::Child(i)]));
                    }
                    out.insert(w, down);
                }
                level = next;
            }
        }
        TreeSpec::Fan(_) | TreeSpec::FanOmega(_) => {
            out.insert(vec![], BTreeSet::new());
            let n = match spec {
                TreeSpec::Fan(cs) => (cs.len() as u64).min(b.breadth),
                _ => b.breadth,
            };
            for i in 0..n {
                let head = [Token::Child(i)];
                for (x, d) in materialize(&spec.child(i).unwrap(), b) {
                    let mut down: BTreeSet<_> = d.iter().map(|y| with(&head, y)).collect();
                    down.insert(vec![]);
                    out.insert(with(&head, &x), down);
                }
            }
        }
        TreeSpec::WithTops { base, branches, mult } => {
            out = materialize(base, b);
            let base_nodes: Vec<_> = out.keys().cloned().collect();
            for p in branches {
                let down: BTreeSet<_> =
                    base_nodes.iter().filter(|x| on_branch(base, &p.toks, &p.end, x)).cloned().collect();
                for c in 0..(*mult).min(b.breadth) {
                    out.insert(vec![Token::Top(Box::new(p.clone()), c)], down.clone());
                }
            }
        }
        TreeSpec::Graft { base, scion, roots } => {
            out = materialize(base, b);
            let tops: Vec<_> = out.keys().filter(|x| matches!(x[..], [Token::Top(..)])).cloned().collect();
            let inner = materialize(scion, b);
            for top in tops {
                let mut below = out[&top].clone();
                below.insert(top.clone());
                for j in 0..roots.capped(b.breadth) {
                    let head = with(&top, &[Token::Scion(j)]);
                    for (x, d) in &inner {
                        let mut down = below.clone();
                        down.extend(d.iter().map(|y| with(&head, y)));
                        out.insert(with(&head, x), down);
                    }
                }
            }
        }
        TreeSpec::ChainAffine { .. } => unreachable!(),
    }
    out
}

fn check_order(spec: &TreeSpec, b: Bounds) {
    let down = materialize(spec, b);
    let nodes: Vec<NodeAddr> = spec.nodes(b);
    let listed: BTreeSet<_> = nodes.iter().map(|n| n.0.clone()).collect();
    let built: BTreeSet<_> = down.keys().cloned().collect();
    assert_eq!(listed, built, "node sets differ for {spec}");

    let roots: Vec<_> = nodes.iter().filter(|n| spec.height_of(n).is_zero()).collect();
    assert_eq!(roots.len(), 1, "{spec}");
    for a in &nodes {
        for c in &nodes {
            let expect = a == c || down[&c.0].contains(&a.0);
            assert_eq!(spec.le(a, c), expect, "{spec}: le({a}, {c})");
            if expect && a != c {
                assert!(spec.height_of(a) < spec.height_of(c));
            }
        }
        let d = &down[&a.0];
        for x in d {
            for y in d {
                let (x, y) = (NodeAddr(x.clone()), NodeAddr(y.clone()));
                assert!(spec.comparable(&x, &y), "{spec}: downset of {a} is not a chain");
            }
        }
        if let NodeKind::Successor(p) = spec.node_kind(a) {
            let mut expect = down[&p.0].clone();
            expect.insert(p.0.clone());
            assert_eq!(&expect, d, "{spec}: predecessor of {a}");
        }
    }
}

fn check_rays(spec: &TreeSpec, b: Bounds) -> usize {
    let down = materialize(spec, b);
    let rays = spec.described_rays(b, RaySampling::default());
    let set = |r: &Path| -> BTreeSet<Vec<Token>> {
        match &r.end {
            End::Strict => down[&r.toks].clone(),
            _ => down.keys().filter(|x| on_branch(spec, &r.toks, &r.end, x)).cloned().collect(),
        }
    };
    for r1 in &rays {
        let s1 = set(r1.path());
        for r2 in &rays {
            let s2 = set(r2.path());
            let m = spec.ray_meet_len(r1, r2);
            for x in down.keys() {
                let node = NodeAddr(x.clone());
                let in_meet = s1.contains(x) && s2.contains(x);
                let predicted = spec.height_of(&node) < m && s1.contains(x);
                assert_eq!(in_meet, predicted, "{spec}: meet of {r1} and {r2} at {node}");
            }
            match spec.highray_cmp(r1, r2) {
                RayRelation::Equal => assert_eq!(s1, s2),
                RayRelation::FirstInSecond => assert!(s1.is_subset(&s2)),
                RayRelation::SecondInFirst => assert!(s2.is_subset(&s1)),
                RayRelation::Incomparable => {}
            }
        }
    }
    rays.len()
}

const SPECS: &[&str] = &[
    "chain(w+1)",
    "chain(w^2+w+2)",
    "inftree(2)",
    "inftree(omega)",
    "fan(chain(3), inftree(2), chain(w+1))",
    "fan(omega, chain(2*i+1))",
    "withtops(inftree(2), branches=[period(0), period(1), prefix(0;period(1))], mult=2)",
    "withtops(fan(chain(w), inftree(2)), branches=[branch([0];whole), branch([1];period(0,1))], mult=1)",
    "graft(withtops(chain(w), branches=[whole], mult=1), chain(w), roots=omega)",
    "graft(withtops(inftree(2), branches=[period(0), prefix(0;period(1))], mult=1), inftree(2), roots=omega)",
];

#[test]
fn order_matches_materialized_downsets() {
    for src in SPECS {
        let spec = parse_spec(src).unwrap().validate().unwrap();
        check_order(&spec, Bounds { depth: 3, breadth: 2 });
    }
}

#[test]
fn ray_meets_match_materialized_intersections() {
    for src in SPECS {
        let spec = parse_spec(src).unwrap().validate().unwrap();
        let n = check_rays(&spec, Bounds { depth: 4, breadth: 2 });
        // every branch of the affine fan is finite, so it has no high-rays
        assert_eq!(n == 0, src.starts_with("fan(omega"), "{src}");
    }
}

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (1u64..4).prop_map(|n| format!("chain({n})")),
        Just("chain(w)".to_string()),
        Just("chain(w+2)".to_string()),
        Just("chain(w*2)".to_string()),
        (1u64..3).prop_map(|b| format!("inftree({b})")),
    ]
}

fn arb_spec() -> impl Strategy<Value = String> {
    leaf().prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 1..3).prop_map(|cs| format!("fan({})", cs.join(", "))),
            inner.prop_map(|c| format!("fan(omega, {c})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_fans_are_order_trees(src in arb_spec()) {
        let spec = parse_spec(&src).unwrap().validate().unwrap();
        check_order(&spec, Bounds { depth: 2, breadth: 2 });
    }
}
