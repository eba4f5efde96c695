//! The `endspace` command line. Every subcommand prints JSON-lines records
//! and exits 0 when all pass, 1 on a failed check, 2 on bad input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::apps::{distinguish, expansion_build, expansion_verify, nested_check};
use crate::catalog::{self, sample_pairs, Adhesion, Entry, DEFAULT_SEED};
use crate::dsl::{parse_spec, parse_template};
use crate::endspace::{converges, Verdict};
use crate::error::{Error, Result};
use crate::oracle::oracle_converges;
use crate::ordinal::Enumeration;
use crate::report::Report;
use crate::template::SequenceTemplate;
use crate::tgraph::{PickRule, UniformGraph};
use crate::transform::{split, transport_check};
use crate::treespec::{Bounds, HighRay, NodeKind, RaySampling};

#[derive(Debug, Parser)]
#[command(name = "endspace", version, about = "End spaces of uniform T-graphs on special order trees")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EnumArg {
    Canonical,
    Alternate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Dlt,
    Rungs,
}

#[derive(Debug, Args)]
struct Target {
    /// `catalog:NAME` or a tree spec in the DSL
    spec: String,
    #[arg(long, value_enum, default_value = "canonical")]
    enumeration: EnumArg,
    /// Pick rule (catalog entries bring their own)
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
}

#[derive(Debug, Args)]
struct Size {
    #[arg(long)]
    depth: Option<u64>,
    #[arg(long)]
    breadth: Option<u64>,
}

#[derive(Debug, Args)]
struct Sweep {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Oracle depth
    #[arg(long, default_value_t = 64)]
    depth: usize,
    /// Sequence templates (catalog entries default to their own)
    #[arg(long = "seq")]
    seqs: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a spec
    Validate(Target),
    /// Build the graph and check the T-graph axioms and the pick chains
    Build {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        size: Size,
    },
    /// Export a finite truncation
    Truncate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        depth: u64,
        #[arg(long, default_value_t = 2)]
        breadth: u64,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Classify adhesion as uniformly finite or merely finite
    Adhesion {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        size: Size,
    },
    /// Decide convergence of a sequence template to a target end
    Converge {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        seq: String,
        #[arg(long = "target")]
        end: String,
    },
    /// Judge convergence on a finite truncation
    OracleConverge {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        seq: String,
        #[arg(long = "target")]
        end: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Build the split tree and graph and check them
    Split {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        size: Size,
    },
    /// Compare verdicts before and after splitting
    Transport {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Check nestedness and distinguish sampled end pairs
    Bipartitions {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
    /// Build and verify a discrete expansion
    Expansion {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Exact checker against the oracle
    Compare {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sweep: Sweep,
    },
}

/// A graph to work on, with its catalog entry when it came from one.
pub struct Subject {
    pub graph: UniformGraph,
    pub entry: Option<&'static Entry>,
}

impl Subject {
    pub fn resolve(spec: &str, enumeration: Enumeration, rule: Option<PickRule>) -> Result<Subject> {
        if let Some(name) = spec.strip_prefix("catalog:") {
            let entry = catalog::lookup(name)?;
            let mut graph = entry.graph_with(enumeration);
            if let Some(rule) = rule {
                graph = UniformGraph::new(graph.spec, enumeration, rule)?;
            }
            return Ok(Subject { graph, entry: Some(entry) });
        }
        let tree = parse_spec(spec)?;
        let graph = UniformGraph::new(tree, enumeration, rule.unwrap_or(PickRule::Dlt))?;
        Ok(Subject { graph, entry: None })
    }

    pub fn bounds(&self) -> Bounds {
        self.entry.map_or(Bounds { depth: 6, breadth: 2 }, |e| e.bounds)
    }

    pub fn ends(&self) -> Vec<HighRay> {
        match self.entry {
            Some(e) => e.ends(),
            None => self.graph.spec.described_rays(Bounds { depth: 4, breadth: 2 }, RaySampling::default()),
        }
    }

    pub fn samples(&self, seqs: &[String], count: usize, seed: u64) -> Result<Vec<(SequenceTemplate, HighRay)>> {
        if seqs.is_empty() {
            return self.entry.map(|e| e.samples(count, seed)).ok_or(Error::NoTemplates);
        }
        let templates = seqs.iter().map(|s| parse_template(s)).collect::<Result<Vec<_>, _>>()?;
        let bounds = self.entry.map_or(Bounds { depth: 3, breadth: 2 }, |e| e.targets);
        let targets = self.graph.spec.described_rays(bounds, RaySampling::default());
        Ok(sample_pairs(&templates, &targets, count, seed))
    }

    fn sized(&self, size: &Size) -> Bounds {
        let b = self.bounds();
        Bounds { depth: size.depth.unwrap_or(b.depth), breadth: size.breadth.unwrap_or(b.breadth) }
    }
}

/// Sample seed: `ENDSPACE_SEED` (decimal or `0x` hex) or the fixed default.
pub fn seed() -> u64 {
    let Ok(s) = std::env::var("ENDSPACE_SEED") else { return DEFAULT_SEED };
    let s = s.trim();
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.unwrap_or(DEFAULT_SEED)
}

/// Axioms on the truncation, then pick chains and uniform witnesses at the
/// limits of the larger of the truncation and the end sample bounds. A
/// catalog entry declared finite-only must fail the witness at some limit
/// with `NotUniform`, and must not fail it in any other way.
pub fn build_report(s: &Subject, bounds: Bounds) -> Report {
    let mut report = s.graph.check_axioms(bounds);
    report.extend(construction_report(s, bounds));
    report
}

/// The pick chain and uniform witness part of [`build_report`].
pub fn construction_report(s: &Subject, bounds: Bounds) -> Report {
    let g = &s.graph;
    let mut report = Report::new();
    let nodes = g.spec.nodes(bounds);
    let mut limits = nodes.clone();
    if let Some(e) = s.entry {
        limits.extend(g.spec.nodes(e.ends.0));
    }
    limits.retain(|a| g.spec.node_kind(a) == NodeKind::Limit);
    limits.sort();
    limits.dedup();
    let finite_only = s.entry.is_some_and(|e| e.adhesion == Adhesion::FiniteOnly);
    let mut not_uniform = Vec::new();
    for t in &limits {
        report.extend(g.check_picks(t, 12, 20));
        let w = g.check_witness(t, &nodes);
        match g.adhesion_witness(t) {
            Err(Error::NotUniform { .. }) if finite_only => not_uniform.push(t.to_string()),
            _ => report.extend(w),
        }
    }
    report.push("limits", &g.spec, true, json!({"count": limits.len()}));
    if finite_only {
        report.push("not-uniform", &g.spec, !not_uniform.is_empty(), json!({"at": not_uniform}));
    }
    report
}

/// The adhesion equivalences, with the uniform check inverted for entries
/// declared finite-only.
pub fn adhesion_report(s: &Subject, bounds: Bounds) -> Report {
    let mut r = s.graph.check_adhesion_equivalences(bounds);
    if s.entry.is_some_and(|e| e.adhesion == Adhesion::FiniteOnly) {
        for rec in r.records.iter_mut().filter(|x| x.check == "uniform-adhesion") {
            rec.check = "not-uniform".into();
            rec.pass = !rec.pass;
        }
    }
    r
}

/// One record per sample: exact verdict against the oracle.
pub fn compare_report(g: &UniformGraph, samples: &[(SequenceTemplate, HighRay)], depth: usize) -> Result<Report> {
    let mut report = Report::new();
    for (seq, target) in samples {
        let exact = converges(g, seq, target)?;
        let oracle = oracle_converges(g, seq, target, depth)?;
        report.push(
            "agreement",
            format!("{seq} -> {target}"),
            !exact.contradicts(&oracle),
            json!({"exact": exact, "oracle": oracle}),
        );
    }
    Ok(report)
}

/// Nestedness on the truncation and `pairs` distinguished end pairs.
pub fn bipartition_report(s: &Subject, pairs: usize, seed: u64) -> Result<Report> {
    let spec = &s.graph.spec;
    let ends = s.ends();
    let mut report = nested_check(spec, &spec.nodes(s.bounds()), &ends);
    let mut all: Vec<(usize, usize)> = (0..ends.len()).flat_map(|i| (i + 1..ends.len()).map(move |j| (i, j))).collect();
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    all.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    for &(i, j) in all.iter().take(pairs) {
        let d = distinguish(spec, &ends[i], &ends[j])?;
        report.push(
            "distinguish",
            format!("{} | {}", ends[i], ends[j]),
            d.first != d.second,
            json!({"node": d.node, "first": d.first, "second": d.second}),
        );
    }
    Ok(report)
}

pub fn expansion_report(s: &Subject, samples: usize, seed: u64) -> Result<Report> {
    let x = expansion_build(&s.graph);
    let seqs = s.samples(&[], samples, seed).unwrap_or_default();
    let mut report = expansion_verify(&s.graph, &x, &s.ends(), &seqs)?;
    let height = s.graph.spec.tree_height();
    report.push(
        "expansion-length",
        &s.graph.spec,
        x.length <= height,
        json!({"length": x.length.to_string(), "height": height.to_string()}),
    );
    Ok(report)
}

fn verdict_record(check: &str, seq: &str, end: &str, v: &Verdict) -> Report {
    let mut r = Report::new();
    r.push(check, format!("{seq} -> {end}"), true, json!(v));
    r
}

fn execute(cli: Cli) -> Result<Report> {
    let subject = |t: &Target| {
        let e = match t.enumeration {
            EnumArg::Canonical => Enumeration::CANONICAL,
            EnumArg::Alternate => Enumeration::ALTERNATE,
        };
        let rule = t.rule.map(|r| match r {
            RuleArg::Dlt => PickRule::Dlt,
            RuleArg::Rungs => PickRule::Rungs,
        });
        Subject::resolve(&t.spec, e, rule)
    };
    Ok(match cli.command {
        Command::Validate(t) => {
            let s = subject(&t)?;
            let mut r = Report::new();
            r.push("validate", &s.graph.spec, true, json!({"height": s.graph.spec.tree_height().to_string()}));
            r
        }
        Command::Build { target, size } => {
            let s = subject(&target)?;
            build_report(&s, s.sized(&size))
        }
        Command::Truncate { target, depth, breadth, dot } => {
            let s = subject(&target)?;
            let tr = s.graph.truncate(Bounds { depth, breadth });
            if let Some(path) = &dot {
                std::fs::write(path, tr.to_dot()).map_err(|e| Error::InvalidSpec(format!("writing {}: {e}", path.display())))?;
            }
            let mut r = Report::new();
            r.push("truncate", &s.graph.spec, true, json!({"vertices": tr.len(), "edges": tr.edges.len(), "dot": dot}));
            r
        }
        Command::Adhesion { target, size } => {
            let s = subject(&target)?;
            adhesion_report(&s, s.sized(&size))
        }
        Command::Converge { target, seq, end } => {
            let s = subject(&target)?;
            let v = converges(&s.graph, &parse_template(&seq)?, &s.graph.spec.parse_ray(&end)?)?;
            verdict_record("converge", &seq, &end, &v)
        }
        Command::OracleConverge { target, seq, end, depth } => {
            let s = subject(&target)?;
            let v = oracle_converges(&s.graph, &parse_template(&seq)?, &s.graph.spec.parse_ray(&end)?, depth)?;
            verdict_record("oracle-converge", &seq, &end, &v)
        }
        Command::Split { target, size } => {
            let s = subject(&target)?;
            let t = split(&s.graph)?;
            let b = s.sized(&size);
            let small = Bounds { depth: b.depth.min(6), breadth: b.breadth.min(4) };
            let mut r = t.verify_special(small);
            r.extend(t.check_witnesses(small));
            r
        }
        Command::Transport { target, sweep } => {
            let s = subject(&target)?;
            let t = split(&s.graph)?;
            transport_check(&s.graph, &t, &s.samples(&sweep.seqs, sweep.samples, seed())?, sweep.depth)?
        }
        Command::Bipartitions { target, pairs } => bipartition_report(&subject(&target)?, pairs, seed())?,
        Command::Expansion { target, samples } => expansion_report(&subject(&target)?, samples, seed())?,
        Command::Compare { target, sweep } => {
            let s = subject(&target)?;
            compare_report(&s.graph, &s.samples(&sweep.seqs, sweep.samples, seed())?, sweep.depth)?
        }
    })
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli) {
        Ok(report) => {
            if out.write_all(report.to_jsonl().as_bytes()).is_err() {
                return 2;
            }
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
