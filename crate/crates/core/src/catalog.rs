//! Named example graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsl::{parse_spec, parse_template};
use crate::error::{Error, Result};
use crate::ordinal::Enumeration;
use crate::tgraph::{PickRule, UniformGraph};
use crate::template::SequenceTemplate;
use crate::treespec::{Bounds, HighRay, RaySampling};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adhesion {
    Uniform,
    /// Finite adhesion without uniformly finite adhesion.
    FiniteOnly,
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub spec: &'static str,
    pub rule: PickRule,
    pub adhesion: Adhesion,
    /// Truncation bounds giving at least 500 vertices.
    pub bounds: Bounds,
    /// Sequence templates for convergence sweeps (`n` is the index).
    pub templates: &'static [&'static str],
    /// Bounds for the described targets of convergence sweeps.
    pub targets: Bounds,
    /// Bounds and stream sampling for the ends used by the applications.
    pub ends: (Bounds, RaySampling),
}

impl Entry {
    /// Described ends for the applications, canonical and distinct.
    pub fn ends(&self) -> Vec<HighRay> {
        self.graph().spec.described_rays(self.ends.0, self.ends.1)
    }

    pub fn graph(&self) -> UniformGraph {
        self.graph_with(Enumeration::CANONICAL)
    }

    pub fn graph_with(&self, enumeration: Enumeration) -> UniformGraph {
        let spec = parse_spec(self.spec).expect("catalog specs parse");
        UniformGraph::new(spec, enumeration, self.rule).expect("catalog specs are valid")
    }
}

const SAMPLING2: RaySampling = RaySampling { max_prefix: 2, max_period: 2, symbols: 2 };
const SAMPLING3: RaySampling = RaySampling { max_prefix: 3, max_period: 3, symbols: 2 };

pub const BINTREE_TOPS: &str =
    "withtops(inftree(2), branches=[period(0), period(1), prefix(0;period(1)), prefix(1;period(0))], mult=1)";

pub const ENTRIES: &[Entry] = &[
    Entry {
        name: "ray",
        spec: "chain(w)",
        rule: PickRule::Dlt,
        adhesion: Adhesion::Uniform,
        bounds: Bounds { depth: 500, breadth: 1 },
        templates: &["branch(whole)"],
        targets: Bounds { depth: 1, breadth: 1 },
        ends: (Bounds { depth: 1, breadth: 1 }, SAMPLING2),
    },
    Entry {
        name: "chain-omega2",
        spec: "chain(w^2)",
        rule: PickRule::Dlt,
        adhesion: Adhesion::Uniform,
        bounds: Bounds { depth: 23, breadth: 1 },
        templates: &[
            "below(@w*(n+1))",
            "below(@w*(2*n+1))",
            "below(@w*(3*n+2))",
            "below(@w*(2*n+4))",
            "below(@w*3)",
            "below(@w)",
            "below(@w*7)",
            "branch(whole)",
            "below(@w^1*(n+1))",
            "below(@w*(5*n+3))",
            "below(@w*2)",
            "below(@w*9)",
        ],
        targets: Bounds { depth: 10, breadth: 1 },
        ends: (Bounds { depth: 60, breadth: 1 }, SAMPLING2),
    },
    Entry {
        name: "bintree",
        spec: "inftree(2)",
        rule: PickRule::Dlt,
        adhesion: Adhesion::Uniform,
        bounds: Bounds { depth: 8, breadth: 2 },
        templates: &[
            "branch(prefix=rep(0,n);period(1))",
            "branch(prefix=rep(1,n);period(0))",
            "branch(prefix=rep([0,1],n);period(1))",
            "branch(prefix=rep(0,2*n+1);period(1,0))",
            "branch(prefix=0;period(1))",
            "branch(prefix=1,rep(0,n);period(1))",
            "branch(period(0))",
            "branch(prefix=rep(0,n),1;period(0))",
        ],
        targets: Bounds { depth: 3, breadth: 2 },
        ends: (Bounds { depth: 6, breadth: 2 }, SAMPLING3),
    },
    Entry {
        name: "bintree-tops",
        spec: BINTREE_TOPS,
        rule: PickRule::Dlt,
        adhesion: Adhesion::Uniform,
        bounds: Bounds { depth: 8, breadth: 2 },
        templates: &[
            "branch(prefix=rep(0,n);period(1))",
            "branch(prefix=rep(1,n);period(0))",
            "branch(prefix=0,rep(1,n);period(0))",
            "branch(prefix=rep(0,n),1;period(0))",
            "branch(prefix=0;period(1))",
            "below(top(period(0),0))",
            "branch(prefix=rep([0,1],n);period(0))",
        ],
        targets: Bounds { depth: 3, breadth: 2 },
        ends: (Bounds { depth: 6, breadth: 2 }, SAMPLING3),
    },
    Entry {
        name: "ladder-to-limit",
        spec: "graft(withtops(chain(w), branches=[whole], mult=1), chain(w), roots=omega)",
        rule: PickRule::Rungs,
        adhesion: Adhesion::FiniteOnly,
        bounds: Bounds { depth: 50, breadth: 10 },
        templates: &[
            "branch([top(whole,0),s(n)];whole)",
            "branch([top(whole,0),s(2*n)];whole)",
            "branch([top(whole,0),s3];whole)",
            "below(top(whole,0))",
            "branch([top(whole,0),s(3*n+1)];whole)",
            "branch([top(whole,0),s0];whole)",
            "branch([top(whole,0),s7];whole)",
            "branch([top(whole,0),s(n+5)];whole)",
            "branch(whole)",
            "branch([top(whole,0),s(4*n)];whole)",
        ],
        targets: Bounds { depth: 3, breadth: 10 },
        ends: (Bounds { depth: 60, breadth: 60 }, SAMPLING2),
    },
    Entry {
        name: "two-storey",
        spec: "graft(withtops(inftree(2), branches=[period(0), period(1), prefix(0;period(1))], mult=1), inftree(2), roots=omega)",
        rule: PickRule::Dlt,
        adhesion: Adhesion::Uniform,
        bounds: Bounds { depth: 5, breadth: 3 },
        templates: &[
            "branch([top(period(0),0),s(n)];period(0))",
            "branch([top(period(0),0),s0];prefix=rep(0,n);period(1))",
            "branch(prefix=rep(0,n);period(1))",
            "branch([top(period(1),0),s(n+1)];prefix=rep(1,n);period(0))",
            "below(top(prefix(0;period(1)),0))",
            "branch([top(period(0),0),s2];period(1))",
        ],
        targets: Bounds { depth: 2, breadth: 2 },
        ends: (Bounds { depth: 4, breadth: 4 }, SAMPLING2),
    },
];

/// Default seed for sample order; `ENDSPACE_SEED` overrides it in the CLI.
pub const DEFAULT_SEED: u64 = 0x5eed;

impl Entry {
    /// Every (template, target) pair of the entry, in a seeded order,
    /// repeated cyclically when fewer than `count` exist.
    pub fn samples(&self, count: usize, seed: u64) -> Vec<(SequenceTemplate, HighRay)> {
        let g = self.graph();
        let targets = g.spec.described_rays(self.targets, RaySampling::default());
        let templates: Vec<SequenceTemplate> =
            self.templates.iter().map(|t| parse_template(t).expect("catalog templates parse")).collect();
        sample_pairs(&templates, &targets, count, seed)
    }
}

/// Every (template, target) pair in a seeded order, repeated cyclically when
/// fewer than `count` exist.
pub fn sample_pairs(
    templates: &[SequenceTemplate],
    targets: &[HighRay],
    count: usize,
    seed: u64,
) -> Vec<(SequenceTemplate, HighRay)> {
    let mut pairs = Vec::new();
    for seq in templates {
        for target in targets {
            pairs.push((seq.clone(), target.clone()));
        }
    }
    pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    pairs.iter().cycle().take(count.min(pairs.len() * count)).cloned().collect()
}

pub fn lookup(name: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownCatalog(name.to_string()))
}
