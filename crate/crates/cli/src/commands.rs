use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use sample_mst::ingest::{
    fixed_ordering, load_edgelist, preprocess, region_labels, region_overlap, to_records, write_edgelist,
    PreprocessReport, ZeroPolicy,
};
use sample_mst::output::{read_replications, summarize_rows, summary_rows, write_replications, write_summary, ReplicationRow};
use sample_mst::rng::{derive_seed, stream};
use sample_mst::theorems::{run_theorems, TheoremConfig};
use sample_mst::{
    generate, induced_subgraph, msf, ppv, run_experiment, sample as draw, weight_ordering, BootstrapMode,
    ExperimentConfig, GeneratorConfig, GraphKind, Graph64, NeighborScore, Population, Quadrant, SampleDesign,
    SamplingKind,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{runtime, usage, CmdResult, DesignArg, Failure, KindArg, SampleArgs, ScoreArg};

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| runtime(anyhow!("creating {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(runtime)?;
    writeln!(w).and_then(|_| w.flush()).map_err(runtime)
}

fn make_dir(dir: &Path) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| runtime(anyhow!("creating {}: {e}", dir.display())))
}

#[derive(Serialize)]
struct Cell {
    graph: String,
    sampling: String,
    n: usize,
    replications: usize,
    bootstraps: usize,
    bootstrap_mode: BootstrapMode,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    master_seed: u64,
    /// How per-replication seeds are obtained from the master seed.
    seed_derivation: &'static str,
    config: &'a RunConfig,
    cells: Vec<Cell>,
}

pub fn simulate(path: &Path, seed: Option<u64>, workers: Option<usize>, out_dir: Option<PathBuf>) -> CmdResult {
    let mut cfg = RunConfig::load(path).map_err(usage)?;
    if seed.is_some() {
        cfg.master_seed = seed;
    }
    if workers.is_some() {
        cfg.workers = workers;
    }
    if out_dir.is_some() {
        cfg.out_dir = out_dir;
    }
    cfg.validate().map_err(usage)?;
    let out = cfg.out_dir.clone().ok_or_else(|| usage(anyhow!("no output directory: set out_dir or pass --out-dir")))?;
    let master = cfg.master_seed.expect("validated");

    let mut replication_rows = Vec::new();
    let mut summary = Vec::new();
    let mut cells = Vec::new();
    for block in &cfg.experiments {
        let graph = block.label();
        let population = match (&block.generator, &block.input) {
            (Some(g), _) => Population::Generated(g.clone()),
            (_, Some(input)) => {
                let records = load_edgelist(&input.path).map_err(usage)?;
                let prep = preprocess(&records, input.threshold, input.zero_policy).map_err(usage)?;
                let ordering = fixed_ordering(&prep.graph, input.ordering_seed.unwrap_or(master));
                Population::fixed(prep.graph, ordering)
            }
            _ => unreachable!("validated"),
        };
        for design in &block.designs {
            let sizes = if design.kind == SamplingKind::Quadrant { vec![0] } else { block.n.clone() };
            for n in sizes {
                let sampling = design.label();
                eprintln!("simulate: {graph} {sampling} n={n}, {} replications", block.replications);
                let exp = ExperimentConfig {
                    population: population.clone(),
                    design: design.clone(),
                    n,
                    replications: block.replications,
                    bootstraps: block.bootstraps,
                    master_seed: master,
                    bootstrap_mode: block.bootstrap_mode,
                };
                let results = run_experiment(&exp, cfg.workers).map_err(runtime)?;
                replication_rows.extend(results.iter().map(|r| ReplicationRow::new(&graph, &sampling, n, r)));
                summary.extend(summary_rows(&graph, &sampling, n, &results));
                cells.push(Cell {
                    graph: graph.clone(),
                    sampling,
                    n,
                    replications: block.replications,
                    bootstraps: block.bootstraps,
                    bootstrap_mode: block.bootstrap_mode,
                });
            }
        }
    }

    make_dir(&out)?;
    write_replications(&replication_rows, create(&out.join("replications.csv"))?).map_err(runtime)?;
    write_summary(&summary, create(&out.join("summary.csv"))?).map_err(runtime)?;
    let manifest = Manifest {
        tool: "sample-mst",
        version: env!("CARGO_PKG_VERSION"),
        master_seed: master,
        seed_derivation: "splitmix64 fold of (master_seed, replication, stream[, bootstrap]); streams graph=1 ordering=2 sample=3 bootstrap=4",
        config: &cfg,
        cells,
    };
    write_json(&out.join("manifest.json"), &manifest)?;
    eprintln!("simulate: wrote {}", out.display());
    Ok(())
}

#[derive(Serialize)]
struct MstStats {
    nodes: usize,
    edges: usize,
    components: usize,
    msf_edges: usize,
    msf_weight: f64,
    ordering_seed: u64,
    preprocess: PreprocessReport,
}

pub fn mst(input: &Path, seed: u64, threshold: f64, policy: ZeroPolicy, out_dir: Option<&Path>) -> CmdResult {
    let records = load_edgelist(input).map_err(usage)?;
    let prep = preprocess(&records, threshold, policy).map_err(usage)?;
    let g = &prep.graph;
    let forest = msf(g, &fixed_ordering(g, seed));
    let msf_records: Vec<_> = to_records(g).into_iter().enumerate().filter(|(e, _)| forest.contains(*e)).map(|(_, r)| r).collect();
    let stats = MstStats {
        nodes: g.n_nodes(),
        edges: g.n_edges(),
        components: prep.report.components,
        msf_edges: forest.len(),
        msf_weight: forest.weight(g),
        ordering_seed: seed,
        preprocess: prep.report.clone(),
    };
    match out_dir {
        Some(dir) => {
            make_dir(dir)?;
            write_edgelist(&msf_records, create(&dir.join("msf.csv"))?).map_err(runtime)?;
            write_json(&dir.join("msf_stats.json"), &stats)
        }
        None => {
            write_edgelist(&msf_records, io::stdout().lock()).map_err(runtime)?;
            eprintln!("{}", serde_json::to_string_pretty(&stats).map_err(runtime)?);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SampleReport {
    graph: String,
    design: String,
    population_nodes: usize,
    sampled: Vec<String>,
    sample_edges: usize,
    sample_forest_edges: usize,
    ppv: Option<f64>,
}

fn parse_quadrant(s: &str) -> Result<Quadrant, Failure> {
    match s.trim() {
        "I" => Ok(Quadrant::I),
        "II" => Ok(Quadrant::II),
        "III" => Ok(Quadrant::III),
        "IV" => Ok(Quadrant::IV),
        other => Err(usage(anyhow!("unknown quadrant {other:?}; expected I, II, III or IV"))),
    }
}

pub fn sample(args: SampleArgs) -> CmdResult {
    let (g, graph_label, ordering): (Graph64, String, _) = match &args.input {
        Some(path) => {
            let records = load_edgelist(path).map_err(usage)?;
            let prep = preprocess(&records, args.prep.threshold(), args.prep.zero_policy.into()).map_err(usage)?;
            let ord = fixed_ordering(&prep.graph, args.seed);
            (prep.graph, path.display().to_string(), ord)
        }
        None => {
            let (Some(kind), Some(nodes)) = (args.kind, args.nodes) else {
                return Err(usage(anyhow!("pass --input, or --kind and --nodes")));
            };
            let kind = match kind {
                KindArg::Complete => GraphKind::Complete,
                KindArg::Gnp => GraphKind::Gnp,
                KindArg::Normal => GraphKind::Normal,
                KindArg::BarabasiAlbert => GraphKind::BarabasiAlbert,
            };
            let gen = GeneratorConfig::new(kind, nodes)
                .with_p(args.p)
                .with_m_attach(args.m_attach)
                .with_seed(derive_seed(args.seed, &[stream::GRAPH]));
            let g: Graph64 = generate(&gen).map_err(usage)?;
            let ord = weight_ordering(&g, derive_seed(args.seed, &[stream::ORDERING]));
            (g, kind.name().to_string(), ord)
        }
    };
    let kind = match args.design {
        DesignArg::Uniform => SamplingKind::Uniform,
        DesignArg::Near => SamplingKind::Near,
        DesignArg::Far => SamplingKind::Far,
        DesignArg::RandomWalk => SamplingKind::RandomWalk,
        DesignArg::Quadrant => SamplingKind::Quadrant,
    };
    let mut design = SampleDesign::new(kind, args.n, derive_seed(args.seed, &[stream::SAMPLE]));
    design.quadrants = args.quadrants.iter().map(|q| parse_quadrant(q)).collect::<Result<_, _>>()?;
    design.neighbor_score = match args.neighbor_score {
        ScoreArg::Strength => NeighborScore::Strength,
        ScoreArg::EdgeWeight => NeighborScore::EdgeWeight,
    };
    let subset = draw(&g, &design).map_err(usage)?;
    let h = induced_subgraph(&g, &subset).map_err(runtime)?;
    let t_pop = msf(&g, &ordering);
    let t_h = msf(&h.graph, &ordering.restrict(&h.edges)).lift(&h.edges);
    let report = SampleReport {
        graph: graph_label,
        design: design.label(),
        population_nodes: g.n_nodes(),
        sampled: subset.order().iter().map(|&v| g.label(v)).collect(),
        sample_edges: h.graph.n_edges(),
        sample_forest_edges: t_h.len(),
        ppv: ppv(&t_pop, &t_h),
    };
    println!("{}", serde_json::to_string_pretty(&report).map_err(runtime)?);
    Ok(())
}

pub fn ingest(input: &Path, seed: u64, threshold: f64, policy: ZeroPolicy, out_dir: &Path) -> CmdResult {
    let records = load_edgelist(input).map_err(usage)?;
    let prep = preprocess(&records, threshold, policy).map_err(usage)?;
    let g = &prep.graph;
    let ordering = fixed_ordering(g, seed);
    make_dir(out_dir)?;
    write_edgelist(&to_records(g), create(&out_dir.join("graph.csv"))?).map_err(runtime)?;

    let mut w = csv_writer(&out_dir.join("ordering.csv"))?;
    w.write_record(["rank", "id_a", "id_b", "distance"]).map_err(runtime)?;
    for (rank, &e) in ordering.sequence().iter().enumerate() {
        let edge = g.edge(e);
        w.write_record([(rank + 1).to_string(), g.label(edge.u), g.label(edge.v), edge.weight.to_string()])
            .map_err(runtime)?;
    }
    w.flush().map_err(runtime)?;

    let regions = region_labels(g);
    if !regions.is_empty() {
        let t_pop = msf(g, &ordering);
        let mut w = csv_writer(&out_dir.join("regions.csv"))?;
        for region in &regions {
            let o = region_overlap(g, &ordering, &t_pop, region).map_err(runtime)?;
            w.serialize(&o).map_err(runtime)?;
        }
        w.flush().map_err(runtime)?;
    }
    write_json(&out_dir.join("preprocess_report.json"), &prep.report)?;
    println!("{}", serde_json::to_string_pretty(&prep.report).map_err(runtime)?);
    Ok(())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, Failure> {
    Ok(csv::Writer::from_writer(create(path)?))
}

pub fn theorems(cfg: TheoremConfig) -> CmdResult {
    let outcomes = run_theorems(&cfg).map_err(runtime)?;
    let mut failed = Vec::new();
    for o in &outcomes {
        match &o.failure {
            None => println!("PASS {} ({} instances)", o.theorem.name(), o.checked),
            Some(f) => {
                println!("FAIL {} at instance {} (seed {}): {}", o.theorem.name(), o.checked, f.seed, f.detail);
                failed.push(o.theorem.name());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(runtime(anyhow!("violated: {}", failed.join(", "))))
    }
}

pub fn report(replications: &Path, out_dir: Option<&Path>) -> CmdResult {
    let file = File::open(replications).map_err(|e| usage(anyhow!("opening {}: {e}", replications.display())))?;
    let rows = read_replications(file).map_err(usage)?;
    let summary = summarize_rows(&rows);
    match out_dir {
        Some(dir) => {
            make_dir(dir)?;
            write_summary(&summary, create(&dir.join("summary.csv"))?).map_err(runtime)
        }
        None => write_summary(&summary, io::stdout().lock()).map_err(runtime),
    }
}
