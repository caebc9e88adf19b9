//! Distance edgelists: loading, threshold preprocessing and region subsets.
//!
//! Format: UTF-8 CSV rows `id_a,id_b,distance[,region_a[,region_b]]`.
//! A first row whose third field is not a number is taken as a header.
//! Distances are fractions, so 1.5% is `0.015`.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{component_count, induced_subgraph, NodeSubset, WeightedGraph};
use crate::mst::{msf, weight_ordering, EdgeOrdering, Forest};

pub const DEFAULT_THRESHOLD: f64 = 0.015;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgelistRecord {
    pub id_a: String,
    pub id_b: String,
    pub distance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_b: Option<String>,
}

impl EdgelistRecord {
    pub fn new(id_a: impl Into<String>, id_b: impl Into<String>, distance: f64) -> Self {
        Self { id_a: id_a.into(), id_b: id_b.into(), distance, region_a: None, region_b: None }
    }
}

pub fn load_edgelist(path: impl AsRef<Path>) -> Result<Vec<EdgelistRecord>> {
    parse_edgelist(std::fs::File::open(path)?)
}

pub fn parse_edgelist<R: Read>(reader: R) -> Result<Vec<EdgelistRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    let mut pairs = HashSet::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        let err = |msg: String| Error::Parse { line, msg };
        if row.len() < 3 || row.len() > 5 {
            return Err(err(format!("expected 3 to 5 fields, found {}", row.len())));
        }
        let distance = match row[2].parse::<f64>() {
            Ok(d) => d,
            Err(_) if i == 0 => continue,
            Err(_) => return Err(err(format!("distance {:?} is not a number", &row[2]))),
        };
        if !distance.is_finite() || distance < 0.0 {
            return Err(err(format!("distance {distance} must be finite and non-negative")));
        }
        let (a, b) = (row[0].to_string(), row[1].to_string());
        if a.is_empty() || b.is_empty() {
            return Err(err("empty node id".into()));
        }
        if a == b {
            return Err(err(format!("self-loop on {a}")));
        }
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if !pairs.insert(key) {
            return Err(err(format!("duplicate pair {a},{b}")));
        }
        let region = |k: usize| row.get(k).filter(|s| !s.is_empty()).map(str::to_string);
        out.push(EdgelistRecord { id_a: a, id_b: b, distance, region_a: region(3), region_b: region(4) });
    }
    Ok(out)
}

pub fn write_edgelist<W: std::io::Write>(records: &[EdgelistRecord], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(writer);
    w.write_record(["id_a", "id_b", "distance", "region_a", "region_b"])?;
    for r in records {
        w.write_record([
            r.id_a.as_str(),
            r.id_b.as_str(),
            &r.distance.to_string(),
            r.region_a.as_deref().unwrap_or(""),
            r.region_b.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// When zero distances are replaced, relative to threshold filtering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPolicy {
    /// Half the smallest positive distance among retained edges.
    #[default]
    AfterFilter,
    /// Half the smallest positive distance among all input edges.
    BeforeFilter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub threshold: f64,
    pub zero_policy: ZeroPolicy,
    pub input_edges: usize,
    pub input_nodes: usize,
    pub dropped_edges: usize,
    pub removed_isolates: usize,
    pub imputed_zeros: usize,
    pub imputed_value: Option<f64>,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
}

#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub graph: WeightedGraph<f64>,
    pub report: PreprocessReport,
}

/// Threshold, drop isolates, impute zeros.
///
/// Node ids follow first appearance among retained edges and the graph is
/// labelled with the original ids. Regions are attached when any record
/// carries one; a node given two different regions is an error.
pub fn preprocess(records: &[EdgelistRecord], threshold: f64, zero_policy: ZeroPolicy) -> Result<Preprocessed> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Config(format!("threshold must be positive, got {threshold}")));
    }
    let mut regions: HashMap<&str, &str> = HashMap::new();
    let mut input_nodes: HashSet<&str> = HashSet::new();
    for r in records {
        for (id, region) in [(&r.id_a, &r.region_a), (&r.id_b, &r.region_b)] {
            input_nodes.insert(id);
            if let Some(region) = region {
                match regions.insert(id, region) {
                    Some(prev) if prev != region => {
                        return Err(Error::Config(format!("node {id} has regions {prev} and {region}")));
                    }
                    _ => {}
                }
            }
        }
    }

    let retained: Vec<&EdgelistRecord> = records.iter().filter(|r| r.distance <= threshold).collect();
    let min_positive = |it: &mut dyn Iterator<Item = f64>| it.filter(|&d| d > 0.0).min_by(f64::total_cmp);
    let floor = match zero_policy {
        ZeroPolicy::AfterFilter => min_positive(&mut retained.iter().map(|r| r.distance)),
        ZeroPolicy::BeforeFilter => min_positive(&mut records.iter().map(|r| r.distance)),
    };
    let imputed_zeros = retained.iter().filter(|r| r.distance == 0.0).count();
    let imputed_value = match (imputed_zeros, floor) {
        (0, _) => None,
        (_, Some(m)) => Some(m / 2.0),
        (_, None) => return Err(Error::Config("zero distances but no positive distance to impute from".into())),
    };

    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::with_capacity(retained.len());
    for r in &retained {
        let a = intern(&mut ids, &mut labels, &r.id_a);
        let b = intern(&mut ids, &mut labels, &r.id_b);
        let w = if r.distance == 0.0 { imputed_value.unwrap_or(0.0) } else { r.distance };
        edges.push((a, b, w));
    }
    let mut graph = WeightedGraph::new(labels.len(), edges)?;
    if !regions.is_empty() {
        let node_regions = labels.iter().map(|l| regions.get(l.as_str()).map(|s| s.to_string())).collect();
        graph = graph.with_regions(node_regions)?;
    }
    graph = graph.with_labels(labels)?;

    let report = PreprocessReport {
        threshold,
        zero_policy,
        input_edges: records.len(),
        input_nodes: input_nodes.len(),
        dropped_edges: records.len() - retained.len(),
        removed_isolates: input_nodes.len() - graph.n_nodes(),
        imputed_zeros,
        imputed_value,
        nodes: graph.n_nodes(),
        edges: graph.n_edges(),
        components: component_count(&graph),
    };
    Ok(Preprocessed { graph, report })
}

fn intern<'a>(ids: &mut HashMap<&'a str, usize>, labels: &mut Vec<String>, s: &'a str) -> usize {
    *ids.entry(s).or_insert_with(|| {
        labels.push(s.to_string());
        labels.len() - 1
    })
}

/// Records describing `g`, in edge order, using node labels and regions.
pub fn to_records(g: &WeightedGraph<f64>) -> Vec<EdgelistRecord> {
    let region = |v: usize| g.regions().and_then(|r| r[v].clone());
    g.edges()
        .iter()
        .map(|e| EdgelistRecord {
            id_a: g.label(e.u),
            id_b: g.label(e.v),
            distance: e.weight,
            region_a: region(e.u),
            region_b: region(e.v),
        })
        .collect()
}

/// The single tie-breaking ordering shared by a whole analysis.
pub fn fixed_ordering(g: &WeightedGraph<f64>, seed: u64) -> EdgeOrdering {
    weight_ordering(g, seed)
}

/// Nodes whose region equals `region`; unlabelled nodes never match.
pub fn subset_by_region<W>(g: &WeightedGraph<W>, region: &str) -> NodeSubset
where
    W: crate::scalar::Weight,
{
    let members = g
        .regions()
        .map(|rs| rs.iter().enumerate().filter(|(_, r)| r.as_deref() == Some(region)).map(|(v, _)| v).collect())
        .unwrap_or_else(Vec::new);
    NodeSubset::from_members(members)
}

/// Distinct region labels in order of first node.
pub fn region_labels<W: crate::scalar::Weight>(g: &WeightedGraph<W>) -> Vec<String> {
    let mut seen = HashSet::new();
    g.regions()
        .into_iter()
        .flatten()
        .flatten()
        .filter(|r| seen.insert(r.as_str()))
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionOverlap {
    pub region: String,
    pub nodes: usize,
    pub sample_forest_edges: usize,
    pub shared_edges: usize,
    /// Share of the region MSF also in the population MSF.
    pub proportion: Option<f64>,
}

/// MSF of the region's induced subgraph compared against `t_pop`.
pub fn region_overlap<W: crate::scalar::Weight>(
    g: &WeightedGraph<W>,
    ord: &EdgeOrdering,
    t_pop: &Forest,
    region: &str,
) -> Result<RegionOverlap> {
    let subset = subset_by_region(g, region);
    let h = induced_subgraph(g, &subset)?;
    let t = msf(&h.graph, &ord.restrict(&h.edges)).lift(&h.edges);
    let shared = t_pop.overlap(&t);
    Ok(RegionOverlap {
        region: region.to_string(),
        nodes: subset.len(),
        sample_forest_edges: t.len(),
        shared_edges: shared,
        proportion: (!t.is_empty()).then(|| shared as f64 / t.len() as f64),
    })
}
