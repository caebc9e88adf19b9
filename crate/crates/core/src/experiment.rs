//! The replication pipeline.
//!
//! One replication: build (or reuse) a population graph, take its MSF, draw
//! a sample, take the sample MSF and score it against the population MSF
//! (PPV). Then resample the sample graph `B` times to get bootstrap MSFs,
//! score each against the sample MSF (BPPV) and use how often each sample
//! edge lands in a bootstrap MSF to predict population-MSF membership (AUC).

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{generate, GeneratorConfig};
use crate::graph::{component_count, induced_subgraph, WeightedGraph};
use crate::mst::{msf, verify_npv, weight_ordering, EdgeOrdering, Forest};
use crate::rng::{derive_seed, stream};
use crate::sampling::{sample, sample_uniform, SampleDesign, SamplingKind};
use crate::scalar::{FloatWeight, Weight};

/// Two-sided 95% standard normal quantile.
pub const Z_975: f64 = 1.959_963_984_540_054;

/// Where each replication's population graph comes from.
#[derive(Clone, Debug)]
pub enum Population<W> {
    /// A fresh graph per replication; the config seed is replaced by a
    /// per-replication seed.
    Generated(GeneratorConfig),
    /// One graph and one tie-breaking ordering shared by every replication.
    Fixed { graph: Arc<WeightedGraph<W>>, ordering: Arc<EdgeOrdering> },
}

impl<W: Weight> Population<W> {
    pub fn fixed(graph: WeightedGraph<W>, ordering: EdgeOrdering) -> Self {
        Population::Fixed { graph: Arc::new(graph), ordering: Arc::new(ordering) }
    }
}

/// How bootstrap resamples are drawn from the sample graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMode {
    /// Same design kind as the primary sample.
    #[default]
    Mirror,
    /// Always uniform.
    Uniform,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig<W> {
    pub population: Population<W>,
    /// Design kind and options; `n` and `seed` are set per replication.
    pub design: SampleDesign,
    pub n: usize,
    pub replications: usize,
    pub bootstraps: usize,
    pub master_seed: u64,
    pub bootstrap_mode: BootstrapMode,
}

impl<W> ExperimentConfig<W> {
    pub fn new(population: Population<W>, design: SampleDesign, n: usize) -> Self {
        Self {
            population,
            design,
            n,
            replications: 1000,
            bootstraps: 100,
            master_seed: 0,
            bootstrap_mode: BootstrapMode::Mirror,
        }
    }

    pub fn with_replications(mut self, r: usize) -> Self {
        self.replications = r;
        self
    }

    pub fn with_bootstraps(mut self, b: usize) -> Self {
        self.bootstraps = b;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_bootstrap_mode(mut self, mode: BootstrapMode) -> Self {
        self.bootstrap_mode = mode;
        self
    }
}

/// Per-replication statistics and bookkeeping counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationResult {
    pub index: usize,
    pub ppv: Option<f64>,
    pub bppv_mean: Option<f64>,
    pub auc: Option<f64>,
    pub population_nodes: usize,
    pub population_forest_edges: usize,
    pub population_components: usize,
    pub sample_nodes: usize,
    pub sample_edges: usize,
    pub sample_forest_edges: usize,
    pub sample_components: usize,
}

impl ReplicationResult {
    pub fn sample_fraction(&self) -> Option<f64> {
        (self.population_nodes > 0).then(|| self.sample_nodes as f64 / self.population_nodes as f64)
    }
}

/// `|t_pop ∩ t_sample| / |t_sample|`, undefined for an empty sample forest.
pub fn ppv(t_pop: &Forest, t_sample: &Forest) -> Option<f64> {
    (!t_sample.is_empty()).then(|| t_pop.overlap(t_sample) as f64 / t_sample.len() as f64)
}

/// `round(n² / N)`, halves rounded away from zero.
pub fn bootstrap_size(n: usize, population: usize) -> usize {
    if population == 0 {
        return 0;
    }
    (2 * n * n + population) / (2 * population)
}

/// One bootstrap MSF of the sample graph `h`, in `h`'s edge ids.
///
/// Draws `round(n² / N)` nodes of `h` with `design`'s kind and takes the
/// MSF of the induced graph under `h_order`.
pub fn bootstrap_round<W: Weight>(
    h: &WeightedGraph<W>,
    h_order: &EdgeOrdering,
    n: usize,
    population: usize,
    design: &SampleDesign,
    seed: u64,
) -> Result<Forest> {
    let size = bootstrap_size(n, population);
    if size > h.n_nodes() {
        return Err(Error::SampleTooLarge { requested: size, available: h.n_nodes() });
    }
    let subset = sample(h, &design.resized(size, seed))?;
    let hb = induced_subgraph(h, &subset)?;
    Ok(msf(&hb.graph, &h_order.restrict(&hb.edges)).lift(&hb.edges))
}

/// Mann-Whitney AUC: the probability that a positive outscores a negative,
/// ties counting one half. Undefined when either class is empty.
pub fn auc<S: PartialOrd + Copy>(scores: &[S], labels: &[bool]) -> Result<Option<f64>> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch(scores.len(), labels.len()));
    }
    let positives = labels.iter().filter(|&&l| l).count() as u64;
    let negatives = labels.len() as u64 - positives;
    if positives == 0 || negatives == 0 {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("scores are totally ordered"));
    // Twice the U statistic, kept integral so the result is exact.
    let mut twice_u = 0u128;
    let mut negatives_below = 0u128;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start;
        while end < idx.len() && scores[idx[end]] == scores[idx[start]] {
            end += 1;
        }
        let pos = idx[start..end].iter().filter(|&&i| labels[i]).count() as u128;
        let neg = (end - start) as u128 - pos;
        twice_u += pos * (2 * negatives_below + neg);
        negatives_below += neg;
        start = end;
    }
    Ok(Some(twice_u as f64 / (2 * positives as u128 * negatives as u128) as f64))
}

/// Run replication `index` of `cfg`.
pub fn run_replication<W: FloatWeight>(cfg: &ExperimentConfig<W>, index: usize) -> Result<ReplicationResult> {
    let i = index as u64;
    let (graph, ordering) = match &cfg.population {
        Population::Generated(gen) => {
            let gen = GeneratorConfig { seed: derive_seed(cfg.master_seed, &[i, stream::GRAPH]), ..gen.clone() };
            let g: WeightedGraph<W> = generate(&gen)?;
            let ord = weight_ordering(&g, derive_seed(cfg.master_seed, &[i, stream::ORDERING]));
            (Arc::new(g), Arc::new(ord))
        }
        Population::Fixed { graph, ordering } => (Arc::clone(graph), Arc::clone(ordering)),
    };
    let t_pop = msf(&graph, &ordering);

    let n = if cfg.design.kind == SamplingKind::Quadrant { 0 } else { cfg.n };
    let subset = sample(&graph, &cfg.design.resized(n, derive_seed(cfg.master_seed, &[i, stream::SAMPLE])))?;
    let h = induced_subgraph(&graph, &subset)?;
    let h_order = ordering.restrict(&h.edges);
    let t_h_local = msf(&h.graph, &h_order);
    let t_h = t_h_local.lift(&h.edges);
    debug_assert!(verify_npv(t_pop.edges(), &h.edges, t_h.edges()), "sample MSF violates the NPV identity");

    let mut bppv_mean = None;
    let mut auc_value = None;
    if cfg.bootstraps > 0 && cfg.design.kind != SamplingKind::Quadrant {
        let boot_design = match cfg.bootstrap_mode {
            BootstrapMode::Mirror => cfg.design.clone(),
            BootstrapMode::Uniform => SampleDesign::new(SamplingKind::Uniform, 0, 0),
        };
        let mut appearances = vec![0u32; h.graph.n_edges()];
        let mut bppv_sum = 0.0;
        let mut bppv_defined = 0usize;
        for j in 0..cfg.bootstraps as u64 {
            let seed = derive_seed(cfg.master_seed, &[i, stream::BOOTSTRAP, j]);
            let t_b = bootstrap_round(&h.graph, &h_order, subset.len(), graph.n_nodes(), &boot_design, seed)?;
            for &e in t_b.edges() {
                appearances[e] += 1;
            }
            if let Some(v) = ppv(&t_h_local, &t_b) {
                bppv_sum += v;
                bppv_defined += 1;
            }
        }
        bppv_mean = (bppv_defined > 0).then(|| bppv_sum / bppv_defined as f64);
        let labels: Vec<bool> = h.edges.iter().map(|&e| t_pop.contains(e)).collect();
        auc_value = auc(&appearances, &labels)?;
    }

    Ok(ReplicationResult {
        index,
        ppv: ppv(&t_pop, &t_h),
        bppv_mean,
        auc: auc_value,
        population_nodes: graph.n_nodes(),
        population_forest_edges: t_pop.len(),
        population_components: component_count(&graph),
        sample_nodes: subset.len(),
        sample_edges: h.graph.n_edges(),
        sample_forest_edges: t_h.len(),
        sample_components: component_count(&h.graph),
    })
}

/// All replications of `cfg`, in index order.
///
/// `workers` sizes a dedicated thread pool; `None` uses the global pool.
/// Results do not depend on the worker count.
pub fn run_experiment<W: FloatWeight>(cfg: &ExperimentConfig<W>, workers: Option<usize>) -> Result<Vec<ReplicationResult>> {
    if cfg.replications == 0 {
        return Err(Error::Config("replications must be at least 1".into()));
    }
    let job = || (0..cfg.replications).into_par_iter().map(|i| run_replication(cfg, i)).collect();
    match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(job),
        None => job(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Ppv,
    Bppv,
    Auc,
    SampleFraction,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [Statistic::Ppv, Statistic::Bppv, Statistic::Auc, Statistic::SampleFraction];

    pub fn name(&self) -> &'static str {
        match self {
            Statistic::Ppv => "ppv",
            Statistic::Bppv => "bppv",
            Statistic::Auc => "auc",
            Statistic::SampleFraction => "sample_fraction",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn of(&self, r: &ReplicationResult) -> Option<f64> {
        match self {
            Statistic::Ppv => r.ppv,
            Statistic::Bppv => r.bppv_mean,
            Statistic::Auc => r.auc,
            Statistic::SampleFraction => r.sample_fraction(),
        }
    }
}

/// Mean and 95% normal-approximation interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_defined: usize,
}

impl SummaryStats {
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Summarise the defined entries of `values`: mean ± z·sqrt(s² / k).
pub fn summarize_values(values: &[Option<f64>]) -> Result<SummaryStats> {
    let xs: Vec<f64> = values.iter().flatten().copied().collect();
    let k = xs.len();
    if k < 2 {
        return Err(Error::TooFewValues(k));
    }
    // Shifted by the first value so a constant sequence is reproduced exactly.
    let pivot = xs[0];
    let mean = pivot + xs.iter().map(|x| x - pivot).sum::<f64>() / k as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    let half = Z_975 * (var / k as f64).sqrt();
    Ok(SummaryStats { mean, ci_low: mean - half, ci_high: mean + half, n_defined: k })
}

pub fn summarize(results: &[ReplicationResult], stat: Statistic) -> Result<SummaryStats> {
    let values: Vec<Option<f64>> = results.iter().map(|r| stat.of(r)).collect();
    summarize_values(&values)
}

/// Monte-Carlo check of the G(N, p) conditional-probability formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpPpvEstimate {
    /// Pooled frequency of population-MSF membership among sample-MSF edges.
    pub lhs: f64,
    /// `(n/N)((n-1)/(N-1))((N - E[K']) / (n - E[K'_n]))` with empirical means.
    pub rhs: f64,
    pub mean_population_components: f64,
    pub mean_sample_components: f64,
}

pub fn estimate_gnp_ppv_formula(
    population: usize,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<GnpPpvEstimate> {
    if trials == 0 || n < 2 || n > population {
        return Err(Error::Config(format!("need trials >= 1 and 2 <= n <= N (n = {n}, N = {population})")));
    }
    let base = GeneratorConfig::new(crate::generators::GraphKind::Gnp, population).with_p(p);
    base.validate()?;
    let totals = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<[u64; 4]> {
            let s = derive_seed(seed, &[t, stream::TRIAL]);
            let g: WeightedGraph<f64> = generate(&GeneratorConfig { seed: s, ..base.clone() })?;
            let ord = weight_ordering(&g, s);
            let t_pop = msf(&g, &ord);
            let subset = sample_uniform(&g, &SampleDesign::new(SamplingKind::Uniform, n, derive_seed(s, &[stream::SAMPLE])))?;
            let h = induced_subgraph(&g, &subset)?;
            let t_h = msf(&h.graph, &ord.restrict(&h.edges)).lift(&h.edges);
            Ok([
                t_pop.overlap(&t_h) as u64,
                t_h.len() as u64,
                component_count(&g) as u64,
                component_count(&h.graph) as u64,
            ])
        })
        .try_reduce(|| [0; 4], |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]))?;
    let (big_n, small_n, t) = (population as f64, n as f64, trials as f64);
    let mean_k = totals[2] as f64 / t;
    let mean_kn = totals[3] as f64 / t;
    Ok(GnpPpvEstimate {
        lhs: totals[0] as f64 / totals[1] as f64,
        rhs: small_n / big_n * ((small_n - 1.0) / (big_n - 1.0)) * ((big_n - mean_k) / (small_n - mean_kn)),
        mean_population_components: mean_k,
        mean_sample_components: mean_kn,
    })
}
