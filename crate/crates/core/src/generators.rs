//! Seeded population-graph generators.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::rng::{pick_weighted, rng_from_seed, Rng};
use crate::scalar::FloatWeight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Complete graph, Uniform(0,1) weights.
    Complete,
    /// Complete graph thinned by keeping each edge with probability `p`.
    Gnp,
    /// Bivariate standard normal points, Euclidean weights.
    Normal,
    /// Preferential attachment with `m_attach` links per arrival.
    BarabasiAlbert,
}

impl GraphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::Gnp => "gnp",
            GraphKind::Normal => "normal",
            GraphKind::BarabasiAlbert => "barabasi_albert",
        }
    }
}

fn default_p() -> f64 {
    0.5
}

fn default_m_attach() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: GraphKind,
    pub n_nodes: usize,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_m_attach")]
    pub m_attach: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(kind: GraphKind, n_nodes: usize) -> Self {
        Self { kind, n_nodes, p: default_p(), m_attach: default_m_attach(), seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_m_attach(mut self, m: usize) -> Self {
        self.m_attach = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::Config(format!("n_nodes must be at least 2, got {}", self.n_nodes)));
        }
        if self.kind == GraphKind::Gnp && !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if self.kind == GraphKind::BarabasiAlbert && (self.m_attach == 0 || self.m_attach >= self.n_nodes) {
            return Err(Error::Config(format!(
                "m_attach must lie in 1..{}, got {}",
                self.n_nodes, self.m_attach
            )));
        }
        Ok(())
    }
}

/// Build the graph described by `cfg`.
pub fn generate<W: FloatWeight>(cfg: &GeneratorConfig) -> Result<WeightedGraph<W>> {
    match cfg.kind {
        GraphKind::Complete => gen_complete(cfg),
        GraphKind::Gnp => gen_gnp(cfg),
        GraphKind::Normal => gen_normal(cfg),
        GraphKind::BarabasiAlbert => gen_ba(cfg),
    }
}

/// Uniform draw on the open interval (0, 1), narrowed to `W`.
fn open_unit<W: FloatWeight>(rng: &mut Rng) -> W {
    loop {
        let w = W::from_f64_lossy(rng.random::<f64>());
        if w > W::zero() {
            return w;
        }
    }
}

fn expect_kind(cfg: &GeneratorConfig, kind: GraphKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::Config(format!("expected a {} config, got {}", kind.name(), cfg.kind.name())));
    }
    cfg.validate()
}

pub fn gen_complete<W: FloatWeight>(cfg: &GeneratorConfig) -> Result<WeightedGraph<W>> {
    expect_kind(cfg, GraphKind::Complete)?;
    let mut rng = rng_from_seed(cfg.seed);
    let n = cfg.n_nodes;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, open_unit::<W>(&mut rng)));
        }
    }
    WeightedGraph::new(n, edges)
}

pub fn gen_gnp<W: FloatWeight>(cfg: &GeneratorConfig) -> Result<WeightedGraph<W>> {
    expect_kind(cfg, GraphKind::Gnp)?;
    let mut rng = rng_from_seed(cfg.seed);
    let n = cfg.n_nodes;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let w = open_unit::<W>(&mut rng);
            if rng.random::<f64>() < cfg.p {
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

pub fn gen_normal<W: FloatWeight>(cfg: &GeneratorConfig) -> Result<WeightedGraph<W>> {
    expect_kind(cfg, GraphKind::Normal)?;
    let mut rng = rng_from_seed(cfg.seed);
    loop {
        let coords: Vec<(f64, f64)> = (0..cfg.n_nodes)
            .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // Coincident points would give a zero weight; redraw (probability zero).
        if let Ok(g) = complete_from_coords(coords) {
            return Ok(g);
        }
    }
}

/// Complete graph on the given points with Euclidean-distance weights.
pub fn complete_from_coords<W: FloatWeight>(coords: Vec<(f64, f64)>) -> Result<WeightedGraph<W>> {
    let n = coords.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let d = (coords[u].0 - coords[v].0).hypot(coords[u].1 - coords[v].1);
            edges.push((u, v, W::from_f64_lossy(d)));
        }
    }
    WeightedGraph::new(n, edges)?.with_coords(coords)
}

/// Preferential attachment grown from a clique on `m_attach` nodes.
///
/// Each arrival links to `m_attach` distinct existing nodes drawn without
/// replacement with probability proportional to degree. When every existing
/// degree is zero (a one-node seed) the first draw is uniform.
pub fn gen_ba<W: FloatWeight>(cfg: &GeneratorConfig) -> Result<WeightedGraph<W>> {
    expect_kind(cfg, GraphKind::BarabasiAlbert)?;
    let mut rng = rng_from_seed(cfg.seed);
    let (n, m) = (cfg.n_nodes, cfg.m_attach);
    let mut edges: Vec<(NodeId, NodeId, W)> = Vec::new();
    let mut degree = vec![0usize; n];
    for u in 0..m {
        for v in u + 1..m {
            edges.push((u, v, open_unit::<W>(&mut rng)));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    for arrival in m..n {
        let mut weights: Vec<f64> = degree[..arrival].iter().map(|&d| d as f64).collect();
        if weights.iter().all(|&w| w == 0.0) {
            weights.iter_mut().for_each(|w| *w = 1.0);
        }
        let mut targets = Vec::with_capacity(m);
        for _ in 0..m {
            let t = pick_weighted(&mut rng, &weights).expect("an unchosen node keeps positive weight");
            weights[t] = 0.0;
            targets.push(t);
        }
        for t in targets {
            edges.push((t, arrival, open_unit::<W>(&mut rng)));
            degree[t] += 1;
            degree[arrival] += 1;
        }
    }
    WeightedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::component_count;

    #[test]
    fn complete_sizes() {
        let g: WeightedGraph<f64> = gen_complete(&GeneratorConfig::new(GraphKind::Complete, 2)).unwrap();
        assert_eq!(g.n_edges(), 1);
        let g: WeightedGraph<f64> = gen_complete(&GeneratorConfig::new(GraphKind::Complete, 100).with_seed(3)).unwrap();
        assert_eq!(g.n_edges(), 4950);
        assert!(g.edges().iter().all(|e| e.weight > 0.0 && e.weight < 1.0));
        assert!(g.is_complete());
    }

    #[test]
    fn config_errors() {
        let e = gen_complete::<f64>(&GeneratorConfig::new(GraphKind::Complete, 1));
        assert!(matches!(e, Err(Error::Config(_))));
        assert!(gen_gnp::<f64>(&GeneratorConfig::new(GraphKind::Gnp, 10).with_p(1.5)).is_err());
        assert!(gen_ba::<f64>(&GeneratorConfig::new(GraphKind::BarabasiAlbert, 3).with_m_attach(3)).is_err());
        assert!(gen_ba::<f64>(&GeneratorConfig::new(GraphKind::BarabasiAlbert, 5).with_m_attach(0)).is_err());
        assert!(gen_normal::<f64>(&GeneratorConfig::new(GraphKind::Complete, 5)).is_err());
    }

    #[test]
    fn gnp_extremes() {
        let full: WeightedGraph<f64> = gen_gnp(&GeneratorConfig::new(GraphKind::Gnp, 30).with_p(1.0)).unwrap();
        assert!(full.is_complete());
        let none: WeightedGraph<f64> = gen_gnp(&GeneratorConfig::new(GraphKind::Gnp, 30).with_p(0.0)).unwrap();
        assert_eq!(none.n_edges(), 0);
    }

    #[test]
    fn gnp_mean_edge_count() {
        // Binomial(4950, 1/2): mean 2475, sd of the mean over 1000 seeds = sqrt(1237.5 / 1000).
        let total: usize = (0..1000u64)
            .map(|s| gen_gnp::<f64>(&GeneratorConfig::new(GraphKind::Gnp, 100).with_seed(s)).unwrap().n_edges())
            .sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - 2475.0).abs() < 3.0 * (1237.5f64 / 1000.0).sqrt(), "mean {mean}");
    }

    #[test]
    fn collinear_points() {
        let g: WeightedGraph<f64> = complete_from_coords(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn normal_graphs_are_metric() {
        let g: WeightedGraph<f64> = gen_normal(&GeneratorConfig::new(GraphKind::Normal, 25).with_seed(5)).unwrap();
        assert_eq!(g.n_edges(), 300);
        assert_eq!(g.coords().unwrap().len(), 25);
        let n = g.n_nodes();
        let w = |a: usize, b: usize| g.edge(g.edge_between(a, b).unwrap()).weight;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    assert!(w(a, b) <= w(a, c) + w(c, b) + 1e-12);
                    assert!(w(a, c) <= w(a, b) + w(b, c) + 1e-12);
                    assert!(w(b, c) <= w(b, a) + w(a, c) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn normal_mean_squared_distance() {
        // |X - Y|^2 for independent bivariate standard normals is chi-square(2) * 2:
        // mean 4, variance 16.
        let pairs = 100_000;
        let mut rng = rng_from_seed(11);
        let mut sum = 0.0;
        for _ in 0..pairs {
            let g: WeightedGraph<f64> = complete_from_coords(vec![
                (rng.sample(StandardNormal), rng.sample(StandardNormal)),
                (rng.sample(StandardNormal), rng.sample(StandardNormal)),
            ])
            .unwrap();
            sum += g.edge(0).weight.powi(2);
        }
        let mean = sum / pairs as f64;
        assert!((mean - 4.0).abs() < 3.0 * (16.0f64 / pairs as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn ba_small_is_k4() {
        let g: WeightedGraph<f64> = gen_ba(&GeneratorConfig::new(GraphKind::BarabasiAlbert, 4)).unwrap();
        assert!(g.is_complete());
        assert_eq!(g.n_edges(), 6);
    }

    #[test]
    fn ba_structure() {
        for seed in 0..50 {
            let g: WeightedGraph<f64> =
                gen_ba(&GeneratorConfig::new(GraphKind::BarabasiAlbert, 100).with_seed(seed)).unwrap();
            assert_eq!(component_count(&g), 1);
            assert!(g.degrees().iter().all(|&d| d >= 3));
            assert_eq!(g.n_edges(), 3 + 3 * 97);
        }
    }

    #[test]
    fn ba_single_node_seed() {
        let g: WeightedGraph<f64> =
            gen_ba(&GeneratorConfig::new(GraphKind::BarabasiAlbert, 10).with_m_attach(1).with_seed(2)).unwrap();
        assert_eq!(g.n_edges(), 9);
        assert_eq!(component_count(&g), 1);
    }

    #[test]
    fn generators_are_deterministic_and_generic() {
        for kind in [GraphKind::Complete, GraphKind::Gnp, GraphKind::Normal, GraphKind::BarabasiAlbert] {
            let cfg = GeneratorConfig::new(kind, 20).with_seed(99);
            let a: WeightedGraph<f64> = generate(&cfg).unwrap();
            let b: WeightedGraph<f64> = generate(&cfg).unwrap();
            assert_eq!(a, b);
            let c: WeightedGraph<f32> = generate(&cfg).unwrap();
            assert_eq!(a.n_edges(), c.n_edges());
            assert!(c.edges().iter().all(|e| e.weight > 0.0));
        }
    }
}
