use std::collections::BTreeSet;

use endspace::oracle::{components_minus, separated};
use endspace::truncation::FiniteTruncation;
use endspace::Error;
use proptest::prelude::*;

fn graph(n: usize, edges: Vec<(usize, usize)>, boundary: Vec<bool>) -> FiniteTruncation {
    let names = (0..n).map(|i| i.to_string()).collect();
    FiniteTruncation::new(names, vec!["0".into(); n], edges, boundary, "test".into())
}

fn sets(tr: &FiniteTruncation, x: &[usize]) -> BTreeSet<Vec<usize>> {
    components_minus(tr, x).into_iter().map(|c| c.vertices).collect()
}

/// Union-find reference for the components of `G - x`.
fn reference(n: usize, edges: &[(usize, usize)], x: &[usize]) -> BTreeSet<Vec<usize>> {
    fn find(p: &mut Vec<usize>, v: usize) -> usize {
        if p[v] != v {
            let r = find(p, p[v]);
            p[v] = r;
        }
        p[v]
    }
    let mut p: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        if !x.contains(&a) && !x.contains(&b) {
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            p[ra] = rb;
        }
    }
    let mut groups = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for v in (0..n).filter(|v| !x.contains(v)) {
        let r = find(&mut p, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

#[test]
fn path_minus_middle() {
    let tr = graph(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)], vec![false; 5]);
    let s = sets(&tr, &[2]);
    assert_eq!(s, [vec![0, 1], vec![3, 4]].into_iter().collect());
    let s = |v: &[&str]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>();
    assert!(separated(&tr, &s(&["0", "1"]), &s(&["4", "3"]), &s(&["2"])).unwrap());
    assert!(!separated(&tr, &s(&["0", "1"]), &s(&["4", "3"]), &[]).unwrap());
    assert!(matches!(separated(&tr, &s(&["9"]), &s(&["0"]), &[]), Err(Error::PrefixNotInTruncation(_))));
}

#[test]
fn boundary_blocks_separation() {
    let mut b = vec![false; 5];
    b[4] = true;
    let tr = graph(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)], b);
    let s = |v: &[&str]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>();
    assert!(!separated(&tr, &s(&["0"]), &s(&["4"]), &s(&["2"])).unwrap());
    assert!(components_minus(&tr, &[2]).iter().any(|c| c.boundary));
}

#[test]
fn binary_tree_minus_root() {
    // heap order: children of i are 2i+1, 2i+2; depth 4 gives 31 vertices
    let edges: Vec<_> = (1..31).map(|i| ((i - 1) / 2, i)).collect();
    let tr = graph(31, edges, vec![false; 31]);
    let comps = components_minus(&tr, &[0]);
    assert_eq!(comps.iter().map(|c| c.vertices.len()).collect::<Vec<_>>(), vec![15, 15]);
}

// vertex count, edges, deleted set, larger deleted set
type Case = (usize, Vec<(usize, usize)>, Vec<usize>, Vec<usize>);

fn arb_graph() -> impl Strategy<Value = Case> {
    (2usize..24).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), 0..3 * n),
            prop::collection::vec(0..n, 0..4),
            prop::collection::vec(0..n, 0..3),
        )
    })
}

proptest! {
    #[test]
    fn matches_union_find((n, edges, x, _) in arb_graph()) {
        let tr = graph(n, edges.clone(), vec![false; n]);
        prop_assert_eq!(sets(&tr, &x), reference(n, &edges, &x));
    }

    #[test]
    fn deleting_more_refines((n, edges, x, extra) in arb_graph()) {
        let tr = graph(n, edges, vec![false; n]);
        let coarse = components_minus(&tr, &x);
        let bigger: Vec<usize> = x.iter().chain(&extra).copied().collect();
        for c in components_minus(&tr, &bigger) {
            prop_assert!(coarse.iter().any(|d| c.vertices.iter().all(|v| d.vertices.contains(v))));
        }
    }
}
