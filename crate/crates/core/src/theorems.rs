//! Randomized checks of the MST facts the analysis relies on.
//!
//! Each check draws many small instances from a seed and stops at the first
//! violation, reporting the instance seed so it can be replayed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generators::{generate, GeneratorConfig, GraphKind};
use crate::graph::{component_count, induced_subgraph, WeightedGraph};
use crate::mst::{
    check_cut_property, check_cycle_property, count_orderings_per_mst, enumerate_msts, exchange_witness, msf,
    ordering_count, verify_npv, weight_ordering, Forest,
};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sampling::{sample, Quadrant, SampleDesign, SamplingKind};
use crate::scalar::Weight;
use crate::Rational;

/// Largest tie-ordering count accepted for a drawn instance.
const INSTANCE_ORDERING_CAP: u128 = 100_000;
const INSTANCE_EDGE_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    SpanningForest,
    Uniqueness,
    CycleCut,
    Npv,
    OrderingCounts,
    Exchange,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::SpanningForest,
        Theorem::Uniqueness,
        Theorem::CycleCut,
        Theorem::Npv,
        Theorem::OrderingCounts,
        Theorem::Exchange,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::SpanningForest => "spanning_forest",
            Theorem::Uniqueness => "uniqueness",
            Theorem::CycleCut => "cycle_cut",
            Theorem::Npv => "npv",
            Theorem::OrderingCounts => "ordering_counts",
            Theorem::Exchange => "exchange",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremConfig {
    pub seed: u64,
    /// Instances per theorem.
    pub instances: usize,
    /// Node cap for the enumeration-based checks.
    pub max_nodes: usize,
    /// Node cap for the sampled-graph checks.
    pub max_sample_nodes: usize,
    /// Drop one edge from every computed MSF (negative control).
    pub mutate: bool,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        Self { seed: 0, instances: 300, max_nodes: 8, max_sample_nodes: 40, mutate: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremOutcome {
    pub theorem: Theorem,
    pub checked: usize,
    pub failure: Option<Failure>,
}

impl TheoremOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// A small graph with integer-half weights and heavy ties.
///
/// At most `max_nodes` nodes and 12 edges, redrawn until the number of
/// tie-breaking orderings is at most 10⁵.
pub fn random_tied_graph(seed: u64, max_nodes: usize) -> WeightedGraph<Rational> {
    let mut rng = rng_from_seed(seed);
    loop {
        let n = rng.random_range(2..=max_nodes.max(2));
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        let keep = rng.random_range(0..=pairs.len().min(INSTANCE_EDGE_CAP));
        let levels = rng.random_range(1..=4i64);
        let edges = pairs[..keep].iter().map(|&(u, v)| (u, v, Rational::new(rng.random_range(1..=levels), 2)));
        let g = WeightedGraph::new(n, edges.collect::<Vec<_>>()).expect("drawn edges are simple");
        if ordering_count(&g) <= INSTANCE_ORDERING_CAP {
            return g;
        }
    }
}

fn corrupt(f: Forest, prefer: &Forest, mutate: bool) -> Forest {
    if !mutate || f.is_empty() {
        return f;
    }
    let drop = f.edges().iter().copied().find(|&e| prefer.contains(e)).unwrap_or(f.edges()[0]);
    Forest::from_edges(f.edges().iter().copied().filter(|&e| e != drop))
}

fn sorted_weights<W: Weight>(g: &WeightedGraph<W>, edges: impl Iterator<Item = usize>) -> Vec<W> {
    let mut w: Vec<W> = edges.map(|e| g.edge(e).weight).collect();
    w.sort_by(|a, b| a.partial_cmp(b).expect("weights are ordered"));
    w
}

fn check_tied(theorem: Theorem, g: &WeightedGraph<Rational>, seed: u64, mutate: bool) -> Result<Option<String>> {
    let ord = weight_ordering(g, seed);
    let t = corrupt(msf(g, &ord), &Forest::from_edges([]), mutate);
    Ok(match theorem {
        Theorem::SpanningForest => {
            let expect = g.n_nodes() - component_count(g);
            (t.len() != expect || !crate::mst::is_spanning_forest(g, t.edges()))
                .then(|| format!("forest has {} edges, expected {expect}", t.len()))
        }
        Theorem::Uniqueness => {
            let all: BTreeSet<Forest> = enumerate_msts(g, crate::mst::DEFAULT_ENUMERATION_EDGE_CAP)?.into_iter().collect();
            let again = corrupt(msf(g, &weight_ordering(g, seed)), &Forest::from_edges([]), mutate);
            if !all.contains(&t) {
                Some(format!("MSF {:?} is not a minimum spanning forest", t.edges()))
            } else if again != t {
                Some("MSF changed under a repeated ordering".into())
            } else {
                None
            }
        }
        Theorem::CycleCut => {
            let mut bad = None;
            for e in 0..g.n_edges() {
                let inside = t.contains(e);
                let cut = check_cut_property(g, &ord, e)?;
                let cycle = check_cycle_property(g, &ord, e)?;
                if cut != inside || cycle == inside {
                    bad = Some(format!("edge {e}: in MSF {inside}, cut {cut}, cycle {cycle}"));
                    break;
                }
            }
            bad
        }
        Theorem::OrderingCounts => {
            let counts = count_orderings_per_mst(g, INSTANCE_ORDERING_CAP)?;
            let msts: Vec<Forest> = enumerate_msts(g, crate::mst::DEFAULT_ENUMERATION_EDGE_CAP)?;
            let total: u128 = counts.values().map(|&c| c as u128).sum();
            if !counts.keys().cloned().eq(msts.iter().cloned()) {
                Some(format!("{} forests reached by orderings, {} by enumeration", counts.len(), msts.len()))
            } else if total != ordering_count(g) {
                Some(format!("ordering counts sum to {total}, expected {}", ordering_count(g)))
            } else {
                (!counts.contains_key(&t)).then(|| "MSF not reached by any ordering".into())
            }
        }
        Theorem::Exchange => {
            let msts = enumerate_msts(g, crate::mst::DEFAULT_ENUMERATION_EDGE_CAP)?;
            let mut bad = None;
            'pairs: for a in &msts {
                for b in &msts {
                    let a_only = sorted_weights(g, a.edges().iter().copied().filter(|&e| !b.contains(e)));
                    let b_only = sorted_weights(g, b.edges().iter().copied().filter(|&e| !a.contains(e)));
                    let witness = exchange_witness(a, b, g);
                    if a_only != b_only || witness.as_ref().map_or(true, |w| w.len() != a_only.len()) {
                        bad = Some(format!("no exchange sequence from {:?} to {:?}", a.edges(), b.edges()));
                        break 'pairs;
                    }
                }
            }
            bad
        }
        Theorem::Npv => unreachable!("NPV instances are sampled graphs"),
    })
}

pub const KINDS: [GraphKind; 4] = [GraphKind::Complete, GraphKind::Gnp, GraphKind::Normal, GraphKind::BarabasiAlbert];
pub const DESIGNS: [SamplingKind; 5] =
    [SamplingKind::Uniform, SamplingKind::Near, SamplingKind::Far, SamplingKind::RandomWalk, SamplingKind::Quadrant];

/// One NPV instance with generator kind and design kind drawn from `seed`.
pub fn npv_instance(seed: u64, max_nodes: usize, mutate: bool) -> Result<Option<String>> {
    let mut rng = rng_from_seed(seed);
    let kind = KINDS[rng.random_range(0..KINDS.len())];
    let design_kind = DESIGNS[rng.random_range(0..DESIGNS.len())];
    npv_check(derive_seed(seed, &[1]), kind, design_kind, max_nodes, mutate)
}

/// Check the NPV identity on one random instance of the given kinds.
///
/// Node count, generator parameters, planted ties, ordering and sample size
/// come from `seed`. Quadrant designs fall back to uniform on graphs without
/// coordinates. Returns `None` when the identity holds.
pub fn npv_check(
    seed: u64,
    kind: GraphKind,
    design_kind: SamplingKind,
    max_nodes: usize,
    mutate: bool,
) -> Result<Option<String>> {
    let mut rng = rng_from_seed(seed);
    let n_nodes = rng.random_range(5..=max_nodes.max(5));
    let gen = GeneratorConfig::new(kind, n_nodes).with_seed(rng.random()).with_p(rng.random_range(0.05..1.0));
    let gen = if kind == GraphKind::BarabasiAlbert { gen.with_m_attach(rng.random_range(1..=3)) } else { gen };
    let mut g: WeightedGraph<f64> = generate(&gen)?;
    if rng.random_bool(0.3) {
        // Coarsen weights to plant ties.
        let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, (e.weight * 4.0).ceil())).collect();
        let coords = g.coords().map(<[_]>::to_vec);
        g = WeightedGraph::new(n_nodes, edges)?;
        if let Some(c) = coords {
            g = g.with_coords(c)?;
        }
    }
    let ord = weight_ordering(&g, rng.random());
    let t_pop = msf(&g, &ord);

    let mut design_kind = design_kind;
    if design_kind == SamplingKind::Quadrant && g.coords().is_none() {
        design_kind = SamplingKind::Uniform;
    }
    let design = if design_kind == SamplingKind::Quadrant {
        let mut qs = vec![Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];
        qs.shuffle(&mut rng);
        qs.truncate(rng.random_range(1..=3));
        SampleDesign { seed: rng.random(), ..SampleDesign::quadrant(qs) }
    } else {
        SampleDesign::new(design_kind, rng.random_range(1..=n_nodes), rng.random())
    };
    let subset = sample(&g, &design)?;
    let h = induced_subgraph(&g, &subset)?;
    let t_h = corrupt(msf(&h.graph, &ord.restrict(&h.edges)).lift(&h.edges), &t_pop, mutate);
    Ok((!verify_npv(t_pop.edges(), &h.edges, t_h.edges())).then(|| {
        format!("{} graph on {n_nodes} nodes, {} sample: a dropped sample edge is in the population MSF", kind.name(), design.label())
    }))
}

/// Run every check in `cfg`, one outcome per theorem.
pub fn run_theorems(cfg: &TheoremConfig) -> Result<Vec<TheoremOutcome>> {
    Theorem::ALL
        .iter()
        .enumerate()
        .map(|(t_idx, &theorem)| {
            let mut checked = 0;
            let mut failure = None;
            for k in 0..cfg.instances as u64 {
                let seed = derive_seed(cfg.seed, &[t_idx as u64, k]);
                let verdict = match theorem {
                    Theorem::Npv => npv_instance(seed, cfg.max_sample_nodes, cfg.mutate)?,
                    _ => check_tied(theorem, &random_tied_graph(seed, cfg.max_nodes), seed, cfg.mutate)?,
                };
                checked += 1;
                if let Some(detail) = verdict {
                    failure = Some(Failure { seed, detail });
                    break;
                }
            }
            Ok(TheoremOutcome { theorem, checked, failure })
        })
        .collect()
}
