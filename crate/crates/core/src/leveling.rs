//! The level partition: node `a` gets index `enum_index(height(a))`.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::Result;
use crate::ordinal::Enumeration;
use crate::report::Report;
use crate::treespec::{Bounds, NodeAddr, TreeSpec};

pub fn level_index(spec: &TreeSpec, a: &NodeAddr, enumeration: Enumeration) -> Result<u128> {
    let a = spec.canon_node(&a.0)?;
    Ok(enumeration.index(&spec.height_of(&a))?)
}

/// Checks on a truncation that every index class is an antichain and that
/// distinct heights never share an index.
pub fn verify_partition(spec: &TreeSpec, bounds: Bounds, enumeration: Enumeration) -> Report {
    let mut report = Report::new();
    let nodes = spec.nodes(bounds);
    let mut classes: BTreeMap<u128, Vec<&NodeAddr>> = BTreeMap::new();
    let mut heights = BTreeMap::new();
    for a in &nodes {
        let h = spec.height_of(a);
        match enumeration.index(&h) {
            Ok(i) => {
                classes.entry(i).or_default().push(a);
                if let Some(prev) = heights.insert(i, h.clone()) {
                    if prev != h {
                        report.push("level-injective", i, false, json!({"heights": [prev.to_string(), h.to_string()]}));
                    }
                }
            }
            Err(e) => report.push("level-index", a, false, json!({"error": e.to_string()})),
        }
    }
    let mut violations = Vec::new();
    for class in classes.values() {
        for (k, a) in class.iter().enumerate() {
            for b in &class[k + 1..] {
                if spec.comparable(a, b) {
                    violations.push(format!("{a} ~ {b}"));
                }
            }
        }
    }
    report.push(
        "level-antichains",
        spec,
        violations.is_empty(),
        json!({"nodes": nodes.len(), "classes": classes.len(), "violations": violations}),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    fn spec(s: &str) -> TreeSpec {
        parse_spec(s).unwrap().validate().unwrap()
    }

    #[test]
    fn levels_are_antichains() {
        let c = spec("chain(w^2)");
        let r = verify_partition(&c, Bounds { depth: 15, breadth: 1 }, Enumeration::CANONICAL);
        assert!(r.passed());
        assert_eq!(r.records[0].detail["classes"], r.records[0].detail["nodes"]);
        let b = spec("inftree(2)");
        let r = verify_partition(&b, Bounds { depth: 8, breadth: 2 }, Enumeration::CANONICAL);
        assert!(r.passed());
        assert_eq!(r.records[0].detail["classes"], 9);
        let t = spec("withtops(inftree(2), branches=[period(0), period(1), prefix(0;period(1))], mult=1)");
        let r = verify_partition(&t, Bounds { depth: 5, breadth: 2 }, Enumeration::ALTERNATE);
        assert!(r.passed());
        let tops = t.nodes(Bounds { depth: 5, breadth: 2 });
        let idx: Vec<_> = tops.iter().filter(|a| t.height_of(a).is_limit()).map(|a| level_index(&t, a, Enumeration::CANONICAL).unwrap()).collect();
        assert_eq!(idx.len(), 3);
        assert!(idx.iter().all(|i| *i == idx[0]));
    }

    #[test]
    fn root_is_level_zero() {
        let c = spec("chain(w+1)");
        assert_eq!(level_index(&c, &c.parse_node("0").unwrap(), Enumeration::CANONICAL).unwrap(), 0);
    }
}
