//! Node-sampling designs.
//!
//! Weighted designs draw sequentially without replacement: after each draw
//! the chosen node leaves the pool and the remaining weights are
//! renormalised. Every selection weight is strictly positive, so every node
//! can be drawn.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSubset, WeightedGraph};
use crate::rng::{pick_weighted, rng_from_seed, Rng};
use crate::scalar::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingKind {
    Uniform,
    Near,
    Far,
    RandomWalk,
    Quadrant,
}

impl SamplingKind {
    pub fn name(&self) -> &'static str {
        match self {
            SamplingKind::Uniform => "uniform",
            SamplingKind::Near => "near",
            SamplingKind::Far => "far",
            SamplingKind::RandomWalk => "random_walk",
            SamplingKind::Quadrant => "quadrant",
        }
    }
}

/// Half-plane quadrants.
///
/// `I` is `x >= 0, y >= 0`; `II` is `x >= 0, y < 0`; `III` is `x < 0, y < 0`;
/// `IV` is `x < 0, y >= 0`. With this labelling `{I, II}` is exactly
/// `x >= 0` and `{I, II, IV}` is exactly `x >= 0 or y >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    I,
    II,
    III,
    IV,
}

impl Quadrant {
    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        match self {
            Quadrant::I => x >= 0.0 && y >= 0.0,
            Quadrant::II => x >= 0.0 && y < 0.0,
            Quadrant::III => x < 0.0 && y < 0.0,
            Quadrant::IV => x < 0.0 && y >= 0.0,
        }
    }
}

/// How a walker scores the neighbours of its current node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborScore {
    /// Strength of the neighbour.
    #[default]
    Strength,
    /// Weight of the edge to the neighbour.
    EdgeWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleDesign {
    pub kind: SamplingKind,
    /// Requested size; ignored by quadrant sampling.
    #[serde(default)]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quadrants: Vec<Quadrant>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub neighbor_score: NeighborScore,
}

impl SampleDesign {
    pub fn new(kind: SamplingKind, n: usize, seed: u64) -> Self {
        Self { kind, n, quadrants: Vec::new(), seed, neighbor_score: NeighborScore::default() }
    }

    pub fn quadrant(quadrants: Vec<Quadrant>) -> Self {
        Self { kind: SamplingKind::Quadrant, n: 0, quadrants, seed: 0, neighbor_score: NeighborScore::default() }
    }

    /// Same design with a different size and seed.
    pub fn resized(&self, n: usize, seed: u64) -> Self {
        Self { n, seed, ..self.clone() }
    }

    /// Short label such as `near` or `quadrant:I+II`.
    pub fn label(&self) -> String {
        match self.kind {
            SamplingKind::Quadrant => {
                let q: Vec<String> = self.quadrants.iter().map(|q| format!("{q:?}")).collect();
                format!("quadrant:{}", q.join("+"))
            }
            SamplingKind::RandomWalk if self.neighbor_score == NeighborScore::EdgeWeight => {
                "random_walk:edge_weight".into()
            }
            k => k.name().into(),
        }
    }
}

/// Draw a node subset according to `design`.
pub fn sample<W: Weight>(g: &WeightedGraph<W>, design: &SampleDesign) -> Result<NodeSubset> {
    match design.kind {
        SamplingKind::Uniform => sample_uniform(g, design),
        SamplingKind::Near => sample_near(g, design),
        SamplingKind::Far => sample_far(g, design),
        SamplingKind::RandomWalk => sample_random_walk(g, design),
        SamplingKind::Quadrant => sample_quadrant(g, design),
    }
}

fn check_size<W: Weight>(g: &WeightedGraph<W>, n: usize) -> Result<()> {
    if n > g.n_nodes() {
        return Err(Error::SampleTooLarge { requested: n, available: g.n_nodes() });
    }
    Ok(())
}

pub fn sample_uniform<W: Weight>(g: &WeightedGraph<W>, design: &SampleDesign) -> Result<NodeSubset> {
    check_size(g, design.n)?;
    let mut rng = rng_from_seed(design.seed);
    let mut pool: Vec<NodeId> = (0..g.n_nodes()).collect();
    for i in 0..design.n {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(design.n);
    NodeSubset::from_order(pool)
}

/// Strength rule applies only to complete graphs with at least two nodes.
fn uses_strength_rule<W: Weight>(g: &WeightedGraph<W>) -> bool {
    g.n_nodes() >= 2 && g.is_complete()
}

/// `max(x) - x_i + min(x)`: small scores get large weights.
pub fn closeness_transform(scores: &[f64]) -> Vec<f64> {
    let (lo, hi) = min_max(scores);
    scores.iter().map(|&x| hi - x + lo).collect()
}

/// Degree rule for "near": `d_i`, or `d_i + 1` when some node is isolated.
pub fn near_degree_weights(degrees: &[usize]) -> Vec<f64> {
    let shift = usize::from(degrees.iter().min().copied().unwrap_or(0) == 0);
    degrees.iter().map(|&d| (d + shift) as f64).collect()
}

/// Degree rule for "far": `max(d) - d_i + max(1, min(d))`.
pub fn far_degree_weights(degrees: &[usize]) -> Vec<f64> {
    let hi = degrees.iter().max().copied().unwrap_or(0);
    let floor = degrees.iter().min().copied().unwrap_or(0).max(1);
    degrees.iter().map(|&d| (hi - d + floor) as f64).collect()
}

/// First-draw selection weights for "near" sampling.
pub fn near_weights<W: Weight>(g: &WeightedGraph<W>) -> Vec<f64> {
    if uses_strength_rule(g) {
        let s: Vec<f64> = g.strengths().iter().map(Weight::as_f64).collect();
        closeness_transform(&s)
    } else {
        near_degree_weights(&g.degrees())
    }
}

/// First-draw selection weights for "far" sampling.
pub fn far_weights<W: Weight>(g: &WeightedGraph<W>) -> Vec<f64> {
    if uses_strength_rule(g) {
        g.strengths().iter().map(Weight::as_f64).collect()
    } else {
        far_degree_weights(&g.degrees())
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn sequential_weighted(mut weights: Vec<f64>, n: usize, rng: &mut Rng) -> Result<NodeSubset> {
    assert!(weights.iter().all(|&w| w > 0.0), "selection weights must be strictly positive");
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = pick_weighted(rng, &weights).expect("pool is non-empty while n <= N");
        weights[v] = 0.0;
        order.push(v);
    }
    NodeSubset::from_order(order)
}

pub fn sample_near<W: Weight>(g: &WeightedGraph<W>, design: &SampleDesign) -> Result<NodeSubset> {
    check_size(g, design.n)?;
    sequential_weighted(near_weights(g), design.n, &mut rng_from_seed(design.seed))
}

pub fn sample_far<W: Weight>(g: &WeightedGraph<W>, design: &SampleDesign) -> Result<NodeSubset> {
    check_size(g, design.n)?;
    sequential_weighted(far_weights(g), design.n, &mut rng_from_seed(design.seed))
}

/// Selection weights over the neighbours of `v`, in adjacency order:
/// `max(score) - score + min(score)`.
pub fn neighbor_weights<W: Weight>(g: &WeightedGraph<W>, v: NodeId, strengths: &[W], score: NeighborScore) -> Vec<f64> {
    let scores: Vec<f64> = g
        .neighbors(v)
        .iter()
        .map(|&(j, e)| match score {
            NeighborScore::Strength => strengths[j].as_f64(),
            NeighborScore::EdgeWeight => g.edge(e).weight.as_f64(),
        })
        .collect();
    closeness_transform(&scores)
}

/// Edge-weighted random walk with restarts.
///
/// A walk starts at a uniformly drawn unrecorded node and records it. Each
/// step records one unrecorded neighbour of the current node, drawn with
/// probability proportional to its [`neighbor_weights`] entry (computed over
/// all neighbours), and moves there. The walk restarts when the current node
/// has no unrecorded neighbour.
pub fn sample_random_walk<W: Weight>(g: &WeightedGraph<W>, design: &SampleDesign) -> Result<NodeSubset> {
    check_size(g, design.n)?;
    let mut rng = rng_from_seed(design.seed);
    let strengths = g.strengths();
    let mut recorded = vec![false; g.n_nodes()];
    let mut order = Vec::with_capacity(design.n);
    let mut current: Option<NodeId> = None;
    while order.len() < design.n {
        let next = match current {
            None => {
                let pool: Vec<NodeId> = (0..g.n_nodes()).filter(|&v| !recorded[v]).collect();
                Some(pool[rng.random_range(0..pool.len())])
            }
            Some(v) => {
                let mut weights = neighbor_weights(g, v, &strengths, design.neighbor_score);
                for (w, &(j, _)) in weights.iter_mut().zip(g.neighbors(v)) {
                    if recorded[j] {
                        *w = 0.0;
                    }
                }
                pick_weighted(&mut rng, &weights).map(|k| g.neighbors(v)[k].0)
            }
        };
        if let Some(v) = next {
            recorded[v] = true;
            order.push(v);
        }
        current = next;
    }
    NodeSubset::from_order(order)
}

/// Every node whose coordinates fall in one of the listed quadrants.
pub fn sample_quadrant<W: Weight>(g: &WeightedGraph<W>, design: &SampleDesign) -> Result<NodeSubset> {
    let coords = g.coords().ok_or(Error::MissingCoords)?;
    if design.quadrants.is_empty() {
        return Err(Error::Config("quadrant sampling needs at least one quadrant".into()));
    }
    Ok(NodeSubset::from_members(
        (0..g.n_nodes()).filter(|&v| design.quadrants.iter().any(|q| q.contains(coords[v]))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K4 with strengths (1, 2, 3, 4.2).
    fn k4() -> WeightedGraph<f64> {
        WeightedGraph::new(4, [(0, 1, 0.1), (0, 2, 0.2), (0, 3, 0.7), (1, 2, 0.6), (1, 3, 1.3), (2, 3, 2.2)]).unwrap()
    }

    fn first_draw_freq(g: &WeightedGraph<f64>, kind: SamplingKind, trials: u64) -> Vec<f64> {
        let mut hits = vec![0u64; g.n_nodes()];
        for seed in 0..trials {
            let s = sample(g, &SampleDesign::new(kind, 1, seed)).unwrap();
            hits[s.order()[0]] += 1;
        }
        hits.iter().map(|&h| h as f64 / trials as f64).collect()
    }

    fn assert_3_sigma(freq: f64, p: f64, trials: u64) {
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 3.0 * sd, "freq {freq} vs p {p}");
    }

    fn normalised(w: &[f64]) -> Vec<f64> {
        let t: f64 = w.iter().sum();
        w.iter().map(|x| x / t).collect()
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn uniform_edges() {
        let g = k4();
        assert_eq!(sample_uniform(&g, &SampleDesign::new(SamplingKind::Uniform, 4, 1)).unwrap().members(), &[0, 1, 2, 3]);
        assert!(sample_uniform(&g, &SampleDesign::new(SamplingKind::Uniform, 0, 1)).unwrap().is_empty());
        for kind in [SamplingKind::Uniform, SamplingKind::Near, SamplingKind::Far, SamplingKind::RandomWalk] {
            assert!(matches!(
                sample(&g, &SampleDesign::new(kind, 5, 1)),
                Err(Error::SampleTooLarge { requested: 5, available: 4 })
            ));
        }
    }

    #[test]
    fn uniform_inclusion_frequency() {
        // Hypergeometric: each node is included with probability n / N = 0.3.
        let g = WeightedGraph::<f64>::new(10, []).unwrap();
        let trials = 100_000u64;
        let mut hits = [0u64; 10];
        for seed in 0..trials {
            for &v in sample_uniform(&g, &SampleDesign::new(SamplingKind::Uniform, 3, seed)).unwrap().members() {
                hits[v] += 1;
            }
        }
        for h in hits {
            assert_3_sigma(h as f64 / trials as f64, 0.3, trials);
        }
    }

    #[test]
    fn strength_rules_on_example_strengths() {
        // Strengths (1, 2, 3): near -> (3, 2, 1), far -> (1, 2, 3).
        assert_eq!(closeness_transform(&[1.0, 2.0, 3.0]), vec![3.0, 2.0, 1.0]);
        assert_close(&normalised(&closeness_transform(&[1.0, 2.0, 3.0])), &[0.5, 1.0 / 3.0, 1.0 / 6.0]);
        // Neighbour scores (1, 3) -> (3, 1) -> (0.75, 0.25).
        assert_close(&normalised(&closeness_transform(&[1.0, 3.0])), &[0.75, 0.25]);
    }

    #[test]
    fn degree_rules() {
        assert_eq!(near_degree_weights(&[0, 1, 2]), vec![1.0, 2.0, 3.0]);
        assert_eq!(near_degree_weights(&[1, 2, 3]), vec![1.0, 2.0, 3.0]);
        assert_eq!(far_degree_weights(&[1, 2, 3]), vec![3.0, 2.0, 1.0]);
        assert_eq!(far_degree_weights(&[0, 2, 3]), vec![4.0, 2.0, 1.0]);
        assert_eq!(far_degree_weights(&[2, 2, 2]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn near_and_far_on_complete_graph() {
        let g = k4();
        assert_close(&g.strengths(), &[1.0, 2.0, 3.0, 4.2]);
        let near = normalised(&near_weights(&g));
        assert_close(&near, &[4.2 / 10.6, 3.2 / 10.6, 2.2 / 10.6, 1.0 / 10.6]);
        let far = normalised(&far_weights(&g));
        assert_close(&far, &[1.0 / 10.2, 2.0 / 10.2, 3.0 / 10.2, 4.2 / 10.2]);

        let trials = 100_000;
        for (kind, p) in [(SamplingKind::Near, near), (SamplingKind::Far, far)] {
            for (f, q) in first_draw_freq(&g, kind, trials).iter().zip(&p) {
                assert_3_sigma(*f, *q, trials);
            }
        }
    }

    #[test]
    fn near_uses_degree_rule_off_complete_graphs() {
        // Degrees (0, 1, 2, 1): isolated node 0, path 1-2-3.
        let g = WeightedGraph::new(4, [(1, 2, 0.3), (2, 3, 0.9)]).unwrap();
        assert_eq!(near_weights(&g), vec![1.0, 2.0, 3.0, 2.0]);
        assert_eq!(far_weights(&g), vec![3.0, 2.0, 1.0, 2.0]);
    }

    #[test]
    fn constant_scores_reduce_to_uniform() {
        // Complete graph with identical weights, and a 4-cycle (degree 2 everywhere).
        let flat = WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).unwrap();
        let cycle = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (0, 3, 4.0)]).unwrap();
        let trials = 100_000u64;
        for g in [&flat, &cycle] {
            for kind in [SamplingKind::Near, SamplingKind::Far] {
                let mut hits = [0u64; 4];
                for seed in 0..trials {
                    for &v in sample(g, &SampleDesign::new(kind, 2, seed)).unwrap().members() {
                        hits[v] += 1;
                    }
                }
                for h in hits {
                    assert_3_sigma(h as f64 / trials as f64, 0.5, trials);
                }
            }
        }
    }

    #[test]
    fn weighted_samples_are_distinct_and_full_size() {
        let g = k4();
        for kind in [SamplingKind::Near, SamplingKind::Far, SamplingKind::RandomWalk, SamplingKind::Uniform] {
            for seed in 0..200 {
                let s = sample(&g, &SampleDesign::new(kind, 3, seed)).unwrap();
                assert_eq!(s.len(), 3);
                assert_eq!(s.order().len(), 3);
            }
            let a = sample(&g, &SampleDesign::new(kind, 3, 17)).unwrap();
            let b = sample(&g, &SampleDesign::new(kind, 3, 17)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn walk_on_edgeless_graph_restarts() {
        let g = WeightedGraph::<f64>::new(6, []).unwrap();
        let s = sample_random_walk(&g, &SampleDesign::new(SamplingKind::RandomWalk, 3, 4)).unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn walk_from_a_star_leaf_reaches_hub() {
        // With n = 2 the second recorded node is the hub whenever the walk starts at a leaf.
        let star = WeightedGraph::new(7, (1..7).map(|i| (0, i, 0.5))).unwrap();
        for seed in 0..500 {
            let s = sample_random_walk(&star, &SampleDesign::new(SamplingKind::RandomWalk, 2, seed)).unwrap();
            if s.order()[0] != 0 {
                assert_eq!(s.order()[1], 0);
            }
            assert!(s.contains(0));
        }
    }

    #[test]
    fn walk_neighbor_choice_frequencies() {
        // Node 0 has neighbours 1 (strength 1) and 2 (strength 3).
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, 1.0), (2, 3, 2.0)]).unwrap();
        let w = neighbor_weights(&g, 0, &g.strengths(), NeighborScore::Strength);
        assert_eq!(w, vec![3.0, 1.0]);

        let trials = 100_000u64;
        let mut to_one = 0u64;
        let mut started = 0u64;
        for seed in 0..trials {
            let s = sample_random_walk(&g, &SampleDesign::new(SamplingKind::RandomWalk, 2, seed)).unwrap();
            if s.order()[0] == 0 {
                started += 1;
                if s.order()[1] == 1 {
                    to_one += 1;
                }
            }
        }
        assert_3_sigma(to_one as f64 / started as f64, 0.75, started);
    }

    #[test]
    fn walk_skips_recorded_neighbours() {
        // On a cycle the only unrecorded neighbour after the first step lies
        // ahead, so one walk covers the cycle without restarting.
        let cycle = WeightedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6, 0.1 * (i + 1) as f64))).unwrap();
        for seed in 0..200 {
            let s = sample_random_walk(&cycle, &SampleDesign::new(SamplingKind::RandomWalk, 6, seed)).unwrap();
            for w in s.order().windows(2) {
                assert!(cycle.edge_between(w[0], w[1]).is_some(), "{:?}", s.order());
            }
        }
    }

    #[test]
    fn walk_edge_weight_scoring() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, 3.0), (2, 3, 2.0)]).unwrap();
        let w = neighbor_weights(&g, 0, &g.strengths(), NeighborScore::EdgeWeight);
        assert_eq!(w, vec![3.0, 1.0]);
        let mut d = SampleDesign::new(SamplingKind::RandomWalk, 4, 0);
        d.neighbor_score = NeighborScore::EdgeWeight;
        assert_eq!(sample(&g, &d).unwrap().len(), 4);
        assert_eq!(d.label(), "random_walk:edge_weight");
    }

    fn corners() -> WeightedGraph<f64> {
        WeightedGraph::<f64>::new(4, [])
            .unwrap()
            .with_coords(vec![(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)])
            .unwrap()
    }

    #[test]
    fn quadrant_unions() {
        let g = corners();
        let pick = |q: Vec<Quadrant>| sample_quadrant(&g, &SampleDesign::quadrant(q)).unwrap().members().to_vec();
        assert_eq!(pick(vec![Quadrant::I]), vec![0]);
        assert_eq!(pick(vec![Quadrant::I, Quadrant::II]), vec![0, 3]);
        assert_eq!(pick(vec![Quadrant::I, Quadrant::II, Quadrant::IV]), vec![0, 1, 3]);
        assert_eq!(pick(vec![Quadrant::III]), vec![2]);
    }

    #[test]
    fn quadrant_boundaries_are_closed_at_zero() {
        let g = WeightedGraph::<f64>::new(3, []).unwrap().with_coords(vec![(0.0, 0.0), (0.0, -1.0), (-1.0, 0.0)]).unwrap();
        let pick = |q: Vec<Quadrant>| sample_quadrant(&g, &SampleDesign::quadrant(q)).unwrap().members().to_vec();
        assert_eq!(pick(vec![Quadrant::I]), vec![0]);
        assert_eq!(pick(vec![Quadrant::I, Quadrant::II]), vec![0, 1]);
        assert_eq!(pick(vec![Quadrant::I, Quadrant::II, Quadrant::IV]), vec![0, 1, 2]);
    }

    #[test]
    fn quadrant_errors() {
        let g = WeightedGraph::<f64>::new(3, []).unwrap();
        assert!(matches!(sample_quadrant(&g, &SampleDesign::quadrant(vec![Quadrant::I])), Err(Error::MissingCoords)));
        assert!(sample_quadrant(&corners(), &SampleDesign::quadrant(vec![])).is_err());
    }

    #[test]
    fn design_labels_and_serde() {
        assert_eq!(SampleDesign::quadrant(vec![Quadrant::I, Quadrant::II]).label(), "quadrant:I+II");
        let d: SampleDesign = serde_json::from_str(r#"{"kind":"random_walk","n":25}"#).unwrap();
        assert_eq!(d, SampleDesign::new(SamplingKind::RandomWalk, 25, 0));
        let q: SampleDesign = serde_json::from_str(r#"{"kind":"quadrant","quadrants":["I","IV"]}"#).unwrap();
        assert_eq!(q.quadrants, vec![Quadrant::I, Quadrant::IV]);
    }
}
