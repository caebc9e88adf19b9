//! Minimum spanning forests under an explicit edge ordering.
//!
//! Ties in weight are resolved once, by an [`EdgeOrdering`]; every forest is
//! then computed on ranks, which are unique. That makes the forest a pure
//! function of `(graph, ordering)`. The exhaustive routines in this module
//! (`enumerate_msts`, `count_orderings_per_mst`) and the cut/cycle checks
//! exist as oracles for the greedy [`msf`].

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{cut_from_partition, component_count, EdgeId, UnionFind, WeightedGraph};
use crate::rng::rng_from_seed;
use crate::scalar::{cmp_weights, Weight};

/// Default edge cap for [`enumerate_msts`].
pub const DEFAULT_ENUMERATION_EDGE_CAP: usize = 16;
/// Default cap on the number of weight-consistent orderings.
pub const DEFAULT_ORDERING_CAP: u128 = 1_000_000;

/// A strict total order on a graph's edges that is consistent with weight.
///
/// Ranks are 1-based. `rank(e) < rank(f)` whenever `w(e) < w(f)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeOrdering {
    rank: Vec<u32>,
    sequence: Vec<EdgeId>,
}

impl EdgeOrdering {
    /// Ordering that lists edges in `sequence` order, lowest rank first.
    ///
    /// Fails unless `sequence` is a permutation of the graph's edges that is
    /// non-decreasing in weight.
    pub fn from_sequence<W: Weight>(g: &WeightedGraph<W>, sequence: Vec<EdgeId>) -> Result<Self> {
        let m = g.n_edges();
        if sequence.len() != m {
            return Err(Error::Config(format!("ordering lists {} of {m} edges", sequence.len())));
        }
        let mut rank = vec![0u32; m];
        for (i, &e) in sequence.iter().enumerate() {
            if e >= m || rank[e] != 0 {
                return Err(Error::Config(format!("ordering repeats or misses edge {e}")));
            }
            rank[e] = i as u32 + 1;
        }
        if sequence.windows(2).any(|p| g.edge(p[0]).weight > g.edge(p[1]).weight) {
            return Err(Error::Config("ordering is not consistent with edge weights".into()));
        }
        Ok(Self { rank, sequence })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// 1-based rank of edge `e`.
    pub fn rank(&self, e: EdgeId) -> u32 {
        self.rank[e]
    }

    /// Edge ids from lowest to highest rank.
    pub fn sequence(&self) -> &[EdgeId] {
        &self.sequence
    }

    /// The induced order on a subgraph whose edge `i` is parent edge
    /// `edge_map[i]`. Relative order is preserved; ranks are re-densified.
    pub fn restrict(&self, edge_map: &[EdgeId]) -> Self {
        let mut local: Vec<EdgeId> = (0..edge_map.len()).collect();
        local.sort_unstable_by_key(|&i| self.rank[edge_map[i]]);
        let mut rank = vec![0u32; edge_map.len()];
        for (r, &i) in local.iter().enumerate() {
            rank[i] = r as u32 + 1;
        }
        Self { rank, sequence: local }
    }
}

/// Groups of edges sharing a weight, in ascending weight order. Each group
/// lists edge ids ascending; singleton groups are included.
pub fn weight_groups<W: Weight>(g: &WeightedGraph<W>) -> Vec<Vec<EdgeId>> {
    let mut ids: Vec<EdgeId> = (0..g.n_edges()).collect();
    ids.sort_by(|&a, &b| cmp_weights(&g.edge(a).weight, &g.edge(b).weight).then(a.cmp(&b)));
    let mut groups: Vec<Vec<EdgeId>> = Vec::new();
    for e in ids {
        match groups.last_mut() {
            Some(last) if g.edge(last[0]).weight == g.edge(e).weight => last.push(e),
            _ => groups.push(vec![e]),
        }
    }
    groups
}

/// Number of weight-consistent orderings, `prod k_i!` over tie groups.
/// Saturates at `u128::MAX`.
pub fn ordering_count<W: Weight>(g: &WeightedGraph<W>) -> u128 {
    weight_groups(g)
        .iter()
        .map(|grp| (1..=grp.len() as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX))
        .try_fold(1u128, |acc, f| acc.checked_mul(f))
        .unwrap_or(u128::MAX)
}

/// Sort edges by weight and break ties with a uniformly random permutation
/// of each equal-weight group drawn from `tiebreak_seed`.
pub fn weight_ordering<W: Weight>(g: &WeightedGraph<W>, tiebreak_seed: u64) -> EdgeOrdering {
    let mut rng = rng_from_seed(tiebreak_seed);
    let mut sequence = Vec::with_capacity(g.n_edges());
    for mut group in weight_groups(g) {
        group.shuffle(&mut rng);
        sequence.extend(group);
    }
    EdgeOrdering::from_sequence(g, sequence).expect("weight-sorted sequence is a valid ordering")
}

/// An edge set that spans a graph's components without cycles.
///
/// Edge ids are kept sorted, so two forests over the same host compare equal
/// exactly when they hold the same edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    edges: Vec<EdgeId>,
}

impl Forest {
    pub fn from_edges<I: IntoIterator<Item = EdgeId>>(edges: I) -> Self {
        let mut edges: Vec<EdgeId> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        Self { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Re-express a subgraph forest in its parent's edge ids.
    pub fn lift(&self, edge_map: &[EdgeId]) -> Forest {
        Forest::from_edges(self.edges.iter().map(|&e| edge_map[e]))
    }

    /// Size of the intersection with another forest over the same host.
    pub fn overlap(&self, other: &Forest) -> usize {
        sorted_intersection_len(&self.edges, &other.edges)
    }

    pub fn weight<W: Weight>(&self, g: &WeightedGraph<W>) -> W {
        sorted_weights(g, &self.edges).into_iter().fold(W::zero(), |acc, w| acc + w)
    }
}

fn sorted_intersection_len(a: &[EdgeId], b: &[EdgeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn sorted_weights<W: Weight>(g: &WeightedGraph<W>, edges: &[EdgeId]) -> Vec<W> {
    let mut w: Vec<W> = edges.iter().map(|&e| g.edge(e).weight).collect();
    w.sort_by(cmp_weights);
    w
}

/// Minimum spanning forest of `g` with `ord` ranks as effective weights.
pub fn msf<W: Weight>(g: &WeightedGraph<W>, ord: &EdgeOrdering) -> Forest {
    debug_assert_eq!(ord.len(), g.n_edges());
    let mut uf = UnionFind::new(g.n_nodes());
    let target = g.n_nodes();
    let mut edges = Vec::new();
    for &e in ord.sequence() {
        let edge = g.edge(e);
        if uf.union(edge.u, edge.v) {
            edges.push(e);
            if edges.len() + 1 == target {
                break;
            }
        }
    }
    Forest::from_edges(edges)
}

/// True when `edges` is acyclic and has `N - K` edges.
pub fn is_spanning_forest<W: Weight>(g: &WeightedGraph<W>, edges: &[EdgeId]) -> bool {
    let mut uf = UnionFind::new(g.n_nodes());
    for &e in edges {
        if e >= g.n_edges() {
            return false;
        }
        let edge = g.edge(e);
        if !uf.union(edge.u, edge.v) {
            return false;
        }
    }
    edges.len() + component_count(g) == g.n_nodes()
}

/// Every minimum-weight spanning forest of `g`, by exhaustive enumeration of
/// acyclic edge subsets of size `N - K`.
///
/// Totals are summed over ascending-sorted weights, so forests with equal
/// weight multisets compare equal even for floating-point weights.
pub fn enumerate_msts<W: Weight>(g: &WeightedGraph<W>, edge_cap: usize) -> Result<Vec<Forest>> {
    let m = g.n_edges();
    if m > edge_cap {
        return Err(Error::SizeLimit { what: "edge count", size: m as u128, cap: edge_cap as u128 });
    }
    let target = g.n_nodes() - component_count(g);
    let mut best: Option<W> = None;
    let mut found: Vec<Forest> = Vec::new();
    let mut chosen = Vec::with_capacity(target);
    let uf = UnionFind::new(g.n_nodes());
    subsets(g, 0, target, &mut chosen, uf, &mut |edges: &[EdgeId]| {
        let total = sorted_weights(g, edges).into_iter().fold(W::zero(), |acc, w| acc + w);
        match best {
            Some(b) if total > b => {}
            Some(b) if total == b => found.push(Forest::from_edges(edges.iter().copied())),
            _ => {
                best = Some(total);
                found.clear();
                found.push(Forest::from_edges(edges.iter().copied()));
            }
        }
    });
    found.sort();
    Ok(found)
}

fn subsets<W: Weight, F: FnMut(&[EdgeId])>(
    g: &WeightedGraph<W>,
    next: EdgeId,
    target: usize,
    chosen: &mut Vec<EdgeId>,
    uf: UnionFind,
    visit: &mut F,
) {
    if chosen.len() == target {
        visit(chosen);
        return;
    }
    let remaining = target - chosen.len();
    for e in next..g.n_edges() {
        if g.n_edges() - e < remaining {
            break;
        }
        let mut branch = uf.clone();
        let edge = g.edge(e);
        if !branch.union(edge.u, edge.v) {
            continue;
        }
        chosen.push(e);
        subsets(g, e + 1, target, chosen, branch, visit);
        chosen.pop();
    }
}

/// Run [`msf`] under every weight-consistent ordering and count how many
/// orderings produce each forest.
pub fn count_orderings_per_mst<W: Weight>(g: &WeightedGraph<W>, ordering_cap: u128) -> Result<BTreeMap<Forest, u64>> {
    let total = ordering_count(g);
    if total > ordering_cap {
        return Err(Error::SizeLimit { what: "ordering count", size: total, cap: ordering_cap });
    }
    let groups: Vec<Vec<Vec<EdgeId>>> = weight_groups(g).iter().map(|grp| permutations(grp)).collect();
    let mut counts = BTreeMap::new();
    let mut picked = Vec::new();
    walk_orderings(g, &groups, 0, UnionFind::new(g.n_nodes()), &mut picked, &mut counts);
    Ok(counts)
}

fn walk_orderings<W: Weight>(
    g: &WeightedGraph<W>,
    groups: &[Vec<Vec<EdgeId>>],
    level: usize,
    uf: UnionFind,
    picked: &mut Vec<EdgeId>,
    counts: &mut BTreeMap<Forest, u64>,
) {
    if level == groups.len() {
        *counts.entry(Forest::from_edges(picked.iter().copied())).or_insert(0) += 1;
        return;
    }
    for perm in &groups[level] {
        let mut branch = uf.clone();
        let mark = picked.len();
        for &e in perm {
            let edge = g.edge(e);
            if branch.union(edge.u, edge.v) {
                picked.push(e);
            }
        }
        walk_orderings(g, groups, level + 1, branch, picked, counts);
        picked.truncate(mark);
    }
}

fn permutations(items: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn check_edge<W: Weight>(g: &WeightedGraph<W>, e: EdgeId) -> Result<()> {
    if e >= g.n_edges() {
        return Err(Error::UnknownEdge(e, e));
    }
    Ok(())
}

/// Does `e` lie on a cycle in which it has the largest rank?
///
/// Runs a minimax-path search between the endpoints of `e` in `g - e`: the
/// edge is the maximum of some cycle exactly when there is a path whose
/// largest rank is below `rank(e)`.
pub fn check_cycle_property<W: Weight>(g: &WeightedGraph<W>, ord: &EdgeOrdering, e: EdgeId) -> Result<bool> {
    check_edge(g, e)?;
    let (src, dst) = (g.edge(e).u, g.edge(e).v);
    let mut bottleneck = vec![u32::MAX; g.n_nodes()];
    let mut heap = BinaryHeap::new();
    bottleneck[src] = 0;
    heap.push(Reverse((0u32, src)));
    while let Some(Reverse((b, x))) = heap.pop() {
        if b > bottleneck[x] {
            continue;
        }
        if x == dst {
            break;
        }
        for &(y, f) in g.neighbors(x) {
            if f == e {
                continue;
            }
            let cand = b.max(ord.rank(f));
            if cand < bottleneck[y] {
                bottleneck[y] = cand;
                heap.push(Reverse((cand, y)));
            }
        }
    }
    Ok(bottleneck[dst] < ord.rank(e))
}

/// Is `e` the lowest-rank edge of some cut?
///
/// Grows the side of the cut from one endpoint through edges ranked below
/// `e`; if the other endpoint stays outside, that side defines a cut whose
/// minimum crossing edge is checked against `e`.
pub fn check_cut_property<W: Weight>(g: &WeightedGraph<W>, ord: &EdgeOrdering, e: EdgeId) -> Result<bool> {
    check_edge(g, e)?;
    let (src, dst) = (g.edge(e).u, g.edge(e).v);
    let limit = ord.rank(e);
    let mut seen = vec![false; g.n_nodes()];
    let mut queue = VecDeque::from([src]);
    seen[src] = true;
    while let Some(x) = queue.pop_front() {
        for &(y, f) in g.neighbors(x) {
            if f != e && ord.rank(f) < limit && !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    if seen[dst] {
        return Ok(false);
    }
    let side: Vec<_> = (0..g.n_nodes()).filter(|&v| seen[v]).collect();
    let cut = cut_from_partition(g, &side)?;
    let lightest = cut.crossing_edges.iter().copied().min_by_key(|&f| ord.rank(f));
    Ok(lightest == Some(e))
}

/// The population forest shares no edge with `e_sample \ t_sample`.
///
/// All three sets are population edge ids.
pub fn verify_npv(t_pop: &[EdgeId], e_sample: &[EdgeId], t_sample: &[EdgeId]) -> bool {
    let pop: std::collections::HashSet<_> = t_pop.iter().collect();
    let kept: std::collections::HashSet<_> = t_sample.iter().collect();
    e_sample.iter().all(|e| kept.contains(e) || !pop.contains(e))
}

/// A sequence of equal-weight swaps turning MST `a` into MST `b`.
///
/// At each step the lightest edge of the current tree that is missing from
/// `b` leaves; it is replaced by an edge of `b` on the `b`-path between its
/// endpoints that reconnects the two halves.
pub fn exchange_witness<W: Weight>(a: &Forest, b: &Forest, g: &WeightedGraph<W>) -> Result<Vec<(EdgeId, EdgeId)>> {
    let reference = sorted_weights(g, msf(g, &weight_ordering(g, 0)).edges());
    for f in [a, b] {
        if !is_spanning_forest(g, f.edges()) || sorted_weights(g, f.edges()) != reference {
            return Err(Error::NotAnMst);
        }
    }
    let mut current = a.clone();
    let mut swaps = Vec::new();
    loop {
        let out = current
            .edges()
            .iter()
            .copied()
            .filter(|&e| !b.contains(e))
            .min_by(|&x, &y| cmp_weights(&g.edge(x).weight, &g.edge(y).weight).then(x.cmp(&y)));
        let Some(out) = out else { break };
        let (u, v) = (g.edge(out).u, g.edge(out).v);

        // Side of `current - out` containing u.
        let mut side = vec![false; g.n_nodes()];
        let mut queue = VecDeque::from([u]);
        side[u] = true;
        let tree_adj = adjacency_of(g, current.edges());
        while let Some(x) = queue.pop_front() {
            for &(y, f) in &tree_adj[x] {
                if f != out && !side[y] {
                    side[y] = true;
                    queue.push_back(y);
                }
            }
        }

        let path = tree_path(g, b.edges(), u, v).ok_or(Error::NotAnMst)?;
        let inn = path
            .into_iter()
            .find(|&f| side[g.edge(f).u] != side[g.edge(f).v] && !current.contains(f))
            .ok_or(Error::NotAnMst)?;
        if g.edge(inn).weight != g.edge(out).weight {
            return Err(Error::NotAnMst);
        }
        current = Forest::from_edges(current.edges().iter().copied().filter(|&f| f != out).chain([inn]));
        swaps.push((out, inn));
    }
    Ok(swaps)
}

fn adjacency_of<W: Weight>(g: &WeightedGraph<W>, edges: &[EdgeId]) -> Vec<Vec<(usize, EdgeId)>> {
    let mut adj = vec![Vec::new(); g.n_nodes()];
    for &e in edges {
        let edge = g.edge(e);
        adj[edge.u].push((edge.v, e));
        adj[edge.v].push((edge.u, e));
    }
    adj
}

/// Edges on the unique path from `from` to `to` inside forest `edges`.
fn tree_path<W: Weight>(g: &WeightedGraph<W>, edges: &[EdgeId], from: usize, to: usize) -> Option<Vec<EdgeId>> {
    let adj = adjacency_of(g, edges);
    let mut via: Vec<Option<(usize, EdgeId)>> = vec![None; g.n_nodes()];
    let mut seen = vec![false; g.n_nodes()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &(y, f) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((x, f));
                queue.push_back(y);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut x = to;
    while let Some((prev, f)) = via[x] {
        path.push(f);
        x = prev;
    }
    path.reverse();
    Some(path)
}
