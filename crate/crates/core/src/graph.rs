//! Immutable undirected weighted graphs, induced subgraphs and cuts.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::Weight;

pub type NodeId = usize;
pub type EdgeId = usize;

/// An undirected edge stored canonically with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<W> {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: W,
}

impl<W> Edge<W> {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple undirected graph on nodes `0..n` with strictly positive weights.
///
/// Edges keep their insertion order; an [`EdgeId`] is the position of an edge
/// in [`WeightedGraph::edges`]. Optional per-node attributes ride along and
/// survive [`induced_subgraph`].
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<W> {
    n_nodes: usize,
    edges: Vec<Edge<W>>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    coords: Option<Vec<(f64, f64)>>,
    regions: Option<Vec<Option<String>>>,
    labels: Option<Vec<String>>,
}

impl<W: Weight> WeightedGraph<W> {
    /// Build a graph, canonicalising each `(u, v)` to `u < v`.
    ///
    /// Rejects self-loops, parallel edges, out-of-range endpoints and weights
    /// that are not positive and finite.
    pub fn new<I>(n_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, W)>,
    {
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        let mut adjacency = vec![Vec::new(); n_nodes];
        for (a, b, weight) in edges {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if u == v {
                return Err(Error::InvalidEdge { u, v, reason: "self-loop" });
            }
            if v >= n_nodes {
                return Err(Error::UnknownNode(v));
            }
            if !weight.is_valid_weight() {
                return Err(Error::InvalidEdge { u, v, reason: "weight must be positive and finite" });
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidEdge { u, v, reason: "parallel edge" });
            }
            let id = stored.len();
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            stored.push(Edge { u, v, weight });
        }
        Ok(Self { n_nodes, edges: stored, adjacency, coords: None, regions: None, labels: None })
    }

    pub fn with_coords(mut self, coords: Vec<(f64, f64)>) -> Result<Self> {
        if coords.len() != self.n_nodes {
            return Err(Error::Config(format!(
                "{} coordinates for {} nodes",
                coords.len(),
                self.n_nodes
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn with_regions(mut self, regions: Vec<Option<String>>) -> Result<Self> {
        if regions.len() != self.n_nodes {
            return Err(Error::Config(format!("{} regions for {} nodes", regions.len(), self.n_nodes)));
        }
        self.regions = Some(regions);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_nodes {
            return Err(Error::Config(format!("{} labels for {} nodes", labels.len(), self.n_nodes)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<W> {
        &self.edges[id]
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn regions(&self) -> Option<&[Option<String>]> {
        self.regions.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External label of `v`, or its numeric id when the graph has no labels.
    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// `(neighbor, edge)` pairs incident to `v`.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        v < self.n_nodes
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        if !self.contains_node(a) || !self.contains_node(b) {
            return None;
        }
        let (scan, target) = if self.adjacency[a].len() <= self.adjacency[b].len() { (a, b) } else { (b, a) };
        self.adjacency[scan].iter().find(|(x, _)| *x == target).map(|&(_, e)| e)
    }

    /// Every pair of nodes is joined by an edge.
    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n_nodes * self.n_nodes.saturating_sub(1) / 2
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        if !self.contains_node(v) {
            return Err(Error::UnknownNode(v));
        }
        Ok(self.adjacency[v].len())
    }

    /// Total weight of the edges incident to `v`.
    pub fn strength(&self, v: NodeId) -> Result<W> {
        if !self.contains_node(v) {
            return Err(Error::UnknownNode(v));
        }
        Ok(self.adjacency[v].iter().fold(W::zero(), |acc, &(_, e)| acc + self.edges[e].weight))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn strengths(&self) -> Vec<W> {
        (0..self.n_nodes)
            .map(|v| self.adjacency[v].iter().fold(W::zero(), |acc, &(_, e)| acc + self.edges[e].weight))
            .collect()
    }

    pub fn total_weight(&self) -> W {
        self.edges.iter().fold(W::zero(), |acc, e| acc + e.weight)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n], sets: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merge the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// A set of nodes of a host graph, with the order in which they were drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSubset {
    members: Vec<NodeId>,
    order: Vec<NodeId>,
}

impl NodeSubset {
    /// From a draw sequence; duplicates are rejected.
    pub fn from_order(order: Vec<NodeId>) -> Result<Self> {
        let mut members = order.clone();
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset("duplicate node in draw order".into()));
        }
        Ok(Self { members, order })
    }

    /// From an unordered collection; duplicates are collapsed.
    pub fn from_members<I: IntoIterator<Item = NodeId>>(nodes: I) -> Self {
        let mut members: Vec<NodeId> = nodes.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { order: members.clone(), members }
    }

    pub fn all(n: usize) -> Self {
        Self::from_members(0..n)
    }

    /// Sorted ascending.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// A subgraph plus the maps back to its parent's node and edge ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph<W> {
    pub graph: WeightedGraph<W>,
    /// Sub node id -> parent node id (ascending).
    pub nodes: Vec<NodeId>,
    /// Sub edge id -> parent edge id (ascending).
    pub edges: Vec<EdgeId>,
}

/// Subgraph on `subset` holding every edge with both endpoints inside it.
///
/// Sub node ids follow ascending parent ids; edges keep parent order.
pub fn induced_subgraph<W: Weight>(g: &WeightedGraph<W>, subset: &NodeSubset) -> Result<InducedSubgraph<W>> {
    let mut local = vec![usize::MAX; g.n_nodes()];
    for (i, &v) in subset.members().iter().enumerate() {
        if !g.contains_node(v) {
            return Err(Error::InvalidSubset(format!("node {v} is not in the host graph")));
        }
        local[v] = i;
    }
    let mut sub_edges = Vec::new();
    let mut edge_map = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        let (a, b) = (local[e.u], local[e.v]);
        if a != usize::MAX && b != usize::MAX {
            sub_edges.push((a, b, e.weight));
            edge_map.push(id);
        }
    }
    let mut graph = WeightedGraph::new(subset.len(), sub_edges)?;
    if let Some(c) = g.coords() {
        graph = graph.with_coords(subset.members().iter().map(|&v| c[v]).collect())?;
    }
    if let Some(r) = g.regions() {
        graph = graph.with_regions(subset.members().iter().map(|&v| r[v].clone()).collect())?;
    }
    if let Some(l) = g.labels() {
        graph = graph.with_labels(subset.members().iter().map(|&v| l[v].clone()).collect())?;
    }
    Ok(InducedSubgraph { graph, nodes: subset.members().to_vec(), edges: edge_map })
}

/// Connected components, each sorted ascending, ordered by smallest member.
pub fn components<W: Weight>(g: &WeightedGraph<W>) -> Vec<Vec<NodeId>> {
    let mut uf = UnionFind::new(g.n_nodes());
    for e in g.edges() {
        uf.union(e.u, e.v);
    }
    let mut block_of = vec![usize::MAX; g.n_nodes()];
    let mut blocks: Vec<Vec<NodeId>> = Vec::new();
    for v in 0..g.n_nodes() {
        let root = uf.find(v);
        if block_of[root] == usize::MAX {
            block_of[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of[root]].push(v);
    }
    blocks
}

pub fn component_count<W: Weight>(g: &WeightedGraph<W>) -> usize {
    let mut uf = UnionFind::new(g.n_nodes());
    for e in g.edges() {
        uf.union(e.u, e.v);
    }
    uf.set_count()
}

/// A bipartition of the nodes and the edges that span it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub side_a: Vec<NodeId>,
    pub side_b: Vec<NodeId>,
    pub crossing_edges: Vec<EdgeId>,
}

/// The cut separating `side_a` from the remaining nodes.
pub fn cut_from_partition<W: Weight>(g: &WeightedGraph<W>, side_a: &[NodeId]) -> Result<Cut> {
    let mut in_a = vec![false; g.n_nodes()];
    for &v in side_a {
        if !g.contains_node(v) {
            return Err(Error::UnknownNode(v));
        }
        in_a[v] = true;
    }
    let a: Vec<NodeId> = (0..g.n_nodes()).filter(|&v| in_a[v]).collect();
    if a.is_empty() {
        return Err(Error::InvalidPartition("side A is empty"));
    }
    if a.len() == g.n_nodes() {
        return Err(Error::InvalidPartition("side A contains every node"));
    }
    let b = (0..g.n_nodes()).filter(|&v| !in_a[v]).collect();
    let crossing = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| in_a[e.u] != in_a[e.v])
        .map(|(id, _)| id)
        .collect();
    Ok(Cut { side_a: a, side_b: b, crossing_edges: crossing })
}
