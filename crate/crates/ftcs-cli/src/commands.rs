use crate::config::{parse_comma_list, Config};
use crate::manifest::{
    self, read_manifest, sha256_file, write_manifest, OutputDigest, RunManifest,
};
use crate::{CliError, CliResult};
use ftcs::cell_complex::io as cio;
use ftcs::cell_complex::iso::syndrome_graphs_isomorphic;
use ftcs::cell_complex::{
    cell_stabilizer, extract_syndrome_graph, CellComplex3, Side, SyndromeGraph,
};
use ftcs::decoder::{decode_with_trace, TraceEvent};
use ftcs::experiments::{
    csv_string, find_threshold, parse_csv, sweep_filtered, ModelKind, SweepCell, SweepConfig,
    SweepResult, ThresholdError, ThresholdOptions, CSV_HEADER,
};
use ftcs::lattices::{degree_report, Axis, LatticeKind, LatticeSpec};
use ftcs::noise::{syndrome_of, ErrorPattern};
use ftcs::splitting::{apply_pipeline, PipelineOp};
use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};

fn out_dir(opt: Option<PathBuf>) -> PathBuf {
    opt.or_else(|| std::env::var_os("FTCS_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn is_json(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some("json")
}

fn read_complex(path: &Path) -> CliResult<CellComplex3> {
    let text = read_to_string(path)?;
    let parsed = if is_json(path) {
        cio::complex_from_json(&text)
    } else {
        cio::parse_complex_text(&text)
    };
    parsed.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<SyndromeGraph> {
    let text = read_to_string(path)?;
    let parsed = if is_json(path) {
        cio::graph_from_json(&text)
    } else {
        cio::parse_graph_text(&text)
    };
    parsed.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn generate(kind: LatticeKind, l: u32, format: &str, out: Option<PathBuf>) -> CliResult<()> {
    let complex = ftcs::lattices::generate(&LatticeSpec { kind, size: l })
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let graph = extract_syndrome_graph(&complex, Side::Primal)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let report = degree_report(&graph);

    let dir = out_dir(out);
    let ext = if format == "json" { "json" } else { "txt" };
    let complex_path = dir.join(format!("{}_L{}.complex.{ext}", kind.name(), l));
    let graph_path = dir.join(format!("{}_L{}.graph.{ext}", kind.name(), l));
    let (complex_text, graph_text) = if format == "json" {
        (cio::complex_to_json(&complex), cio::graph_to_json(&graph))
    } else {
        (cio::write_complex_text(&complex), cio::write_graph_text(&graph))
    };
    write_file(&complex_path, &complex_text)?;
    write_file(&graph_path, &graph_text)?;

    println!("degrees {report}");
    println!("wrote {}", complex_path.display());
    println!("wrote {}", graph_path.display());
    Ok(())
}

pub fn verify(path: &Path) -> CliResult<()> {
    let complex = read_complex(path)?;
    let mut failures = 0usize;
    let mut print = |name: &str, outcome: Result<(), String>| match outcome {
        Ok(()) => println!("PASS  {name}"),
        Err(msg) => {
            failures += 1;
            println!("FAIL  {name}: {msg}");
        }
    };

    let mut structural_ok = true;
    for (name, outcome) in complex.validation_report() {
        if outcome.is_err() {
            structural_ok = false;
        }
        print(name, outcome.map_err(|e| e.to_string()));
    }

    if structural_ok {
        let closure = (0..complex.cells.len() as u32)
            .try_for_each(|c| cell_stabilizer(&complex, c).map(drop));
        print(
            "stabilizer closure (cell stabilizers are Z-free)",
            closure.map_err(|e| e.to_string()),
        );

        if complex.size == 2 {
            let outcome = match (
                extract_syndrome_graph(&complex, Side::Primal),
                extract_syndrome_graph(&complex, Side::Dual),
            ) {
                (Ok(p), Ok(d)) => {
                    if syndrome_graphs_isomorphic(&p, &d) {
                        Ok(())
                    } else {
                        Err("primal and dual syndrome graphs are not isomorphic".to_string())
                    }
                }
                (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
            };
            print("self-duality (primal vs dual syndrome graph)", outcome);
        } else {
            println!("SKIP  self-duality (checked at L=2 only, this complex has L={})", complex.size);
        }
    } else {
        println!("SKIP  stabilizer closure and self-duality (structural checks failed)");
    }

    if failures > 0 {
        return Err(CliError::Validation(format!("{failures} check(s) failed")));
    }
    Ok(())
}

pub fn split(path: &Path, pipeline: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let complex = read_complex(path)?;
    let ops: Vec<PipelineOp> = serde_json::from_str(&read_to_string(pipeline)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", pipeline.display())))?;
    let result =
        apply_pipeline(&complex, &ops).map_err(|e| CliError::Validation(e.to_string()))?;
    result.validate().map_err(|e| CliError::Validation(e.to_string()))?;

    let out_path = out.unwrap_or_else(|| {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("complex");
        path.with_file_name(format!(
            "{stem}.split.{}",
            if is_json(path) { "json" } else { "txt" }
        ))
    });
    let text = if is_json(&out_path) {
        cio::complex_to_json(&result)
    } else {
        cio::write_complex_text(&result)
    };
    write_file(&out_path, &text)?;
    println!(
        "applied {} op(s): V={} E={} F={} C={} -> V={} E={} F={} C={}",
        ops.len(),
        complex.vertex_count(),
        complex.edge_count(),
        complex.face_count(),
        complex.cell_count(),
        result.vertex_count(),
        result.edge_count(),
        result.face_count(),
        result.cell_count()
    );
    println!("wrote {}", out_path.display());
    Ok(())
}

pub fn decode(graph_path: &Path, pattern_path: &Path, trace: Option<&str>) -> CliResult<()> {
    let graph = read_graph(graph_path)?;
    let pattern: ErrorPattern = serde_json::from_str(&read_to_string(pattern_path)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", pattern_path.display())))?;
    if pattern.flipped.len() != graph.edge_count() {
        return Err(CliError::Validation(format!(
            "pattern covers {} edges but the graph has {}",
            pattern.flipped.len(),
            graph.edge_count()
        )));
    }
    let syndrome = syndrome_of(&graph, &pattern);
    let erased = pattern.erased_ids();

    let mut trace_file: Option<Box<dyn Write>> = match trace {
        Some("-") => Some(Box::new(std::io::stdout())),
        Some(path) => Some(Box::new(
            std::fs::File::create(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        )),
        None => None,
    };
    let mut sink = |event: &TraceEvent| {
        if let Some(w) = trace_file.as_mut() {
            let line = serde_json::to_string(event).expect("trace events serialize");
            let _ = writeln!(w, "{line}");
        }
    };
    let correction = decode_with_trace(&graph, &syndrome, &erased, &mut sink)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    // Residual homology per axis: parity of (flips + correction) over the
    // odd-crossing edges.
    let mut failure = serde_json::Map::new();
    for (axis, name) in [(0usize, "x"), (1, "y"), (2, "z")] {
        let mut parity = false;
        let mut any = false;
        for (eid, e) in graph.edges.iter().enumerate() {
            if e.crossing[axis] % 2 != 0 {
                any = true;
                if pattern.flipped[eid] {
                    parity = !parity;
                }
                if correction.binary_search(&(eid as u32)).is_ok() {
                    parity = !parity;
                }
            }
        }
        failure.insert(
            name.to_string(),
            if any { serde_json::json!(parity) } else { serde_json::Value::Null },
        );
    }

    let outcome = serde_json::json!({
        "syndrome_weight": syndrome.len(),
        "erased_edges": erased.len(),
        "correction": correction,
        "residual_syndrome_empty": true,
        "logical_failure_by_axis": failure,
    });
    println!("{}", serde_json::to_string_pretty(&outcome).expect("outcome serializes"));
    Ok(())
}

pub struct SweepArgs {
    pub config: Option<PathBuf>,
    pub lattice: Option<LatticeKind>,
    pub sizes: Option<String>,
    pub model: Option<String>,
    pub rates: Option<String>,
    pub p_erase: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub axis: Option<Axis>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub resume: Option<PathBuf>,
}

fn resolve_sweep_config(args: &SweepArgs) -> CliResult<SweepConfig> {
    if let Some(manifest_path) = &args.resume {
        let m = read_manifest(manifest_path)?;
        let config: SweepConfig = serde_json::from_value(m.config.clone())
            .map_err(|e| CliError::Validation(format!("manifest config: {e}")))?;
        return Ok(config);
    }
    let file = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let lattice = match args.lattice {
        Some(l) => l,
        None => file
            .parse_key::<LatticeKind>("lattice")?
            .ok_or_else(|| CliError::Validation("missing lattice (flag or config)".into()))?,
    };
    let sizes: Vec<u32> = match &args.sizes {
        Some(s) => parse_comma_list(s)
            .map_err(|x| CliError::Validation(format!("bad size '{x}'")))?,
        None => file
            .parse_list("sizes")?
            .ok_or_else(|| CliError::Validation("missing sizes (flag or config)".into()))?,
    };
    let model = match &args.model {
        Some(m) => m
            .parse::<ModelKind>()
            .map_err(CliError::Validation)?,
        None => file
            .parse_key::<ModelKind>("model")?
            .ok_or_else(|| CliError::Validation("missing model (flag or config)".into()))?,
    };
    let rates: Vec<f64> = match &args.rates {
        Some(r) => parse_comma_list(r)
            .map_err(|x| CliError::Validation(format!("bad rate '{x}'")))?,
        None => file
            .parse_list("rates")?
            .ok_or_else(|| CliError::Validation("missing rates (flag or config)".into()))?,
    };
    let p_erase = match args.p_erase {
        Some(p) => p,
        None => file.parse_key::<f64>("p_erase")?.unwrap_or(0.0),
    };
    let trials = match args.trials {
        Some(t) => t,
        None => file
            .parse_key::<u64>("trials")?
            .ok_or_else(|| CliError::Validation("missing trials (flag or config)".into()))?,
    };
    // A missing seed is drawn at random and recorded via the manifest.
    let seed = match args.seed {
        Some(s) => s,
        None => match file.parse_key::<u64>("seed")? {
            Some(s) => s,
            None => {
                let s: u64 = rand::random();
                eprintln!("seed not given; drew {s}");
                s
            }
        },
    };
    let axis = match args.axis {
        Some(a) => a,
        None => file.parse_key::<Axis>("axis")?.unwrap_or(Axis::X),
    };
    Ok(SweepConfig { lattice, sizes, model, rates, p_erase, trials, seed, axis })
}

fn rate_key(x: f64) -> u64 {
    x.to_bits()
}

pub fn sweep(args: SweepArgs) -> CliResult<()> {
    if let Some(n) = args.workers {
        // Ignore the error when a global pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = resolve_sweep_config(&args)?;
    let dir = out_dir(args.out.clone());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let base = format!("sweep_{}_{}", config.lattice.name(), config.model.name());
    let csv_path = dir.join(format!("{base}.csv"));
    let manifest_path = dir.join(format!("{base}.manifest.json"));

    // Resume: cells already complete in the existing CSV are skipped.
    let mut existing: Vec<SweepCell> = Vec::new();
    if args.resume.is_some() && csv_path.exists() {
        existing = parse_csv(&read_to_string(&csv_path)?)
            .map_err(|e| CliError::Validation(format!("{}: {e}", csv_path.display())))?
            .cells
            .into_iter()
            .filter(|c| c.trials == config.trials && c.seed == config.seed)
            .collect();
    }
    let done: HashSet<(u32, u64)> =
        existing.iter().map(|c| (c.l, rate_key(c.swept_rate()))).collect();

    let started = manifest::now();
    // Stream completed rows so interrupted runs can resume.
    let mut progress = std::fs::File::create(dir.join(format!("{base}.partial.csv")))
        .map_err(|e| CliError::Io(e.to_string()))?;
    let _ = writeln!(progress, "{CSV_HEADER}");
    let mut on_row = |cell: &SweepCell| {
        let line = csv_string(&SweepResult { cells: vec![cell.clone()] });
        let row = line.lines().nth(1).unwrap_or_default();
        let _ = writeln!(progress, "{row}");
        let _ = progress.flush();
        eprintln!(
            "  {} L={} rate={} failures={}/{} ({:.4})",
            cell.model,
            cell.l,
            cell.swept_rate(),
            cell.failures,
            cell.trials,
            cell.rate
        );
    };
    let fresh = sweep_filtered(&config, |l, r| done.contains(&(l, rate_key(r))), &mut on_row)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    // Canonical CSV: all cells in grid order.
    let mut all = existing;
    all.extend(fresh.cells);
    let mut ordered = Vec::with_capacity(config.sizes.len() * config.rates.len());
    for &l in &config.sizes {
        for &r in &config.rates {
            if let Some(c) = all.iter().find(|c| c.l == l && rate_key(c.swept_rate()) == rate_key(r))
            {
                ordered.push(c.clone());
            }
        }
    }
    let result = SweepResult { cells: ordered };
    write_file(&csv_path, &csv_string(&result))?;
    let _ = std::fs::remove_file(dir.join(format!("{base}.partial.csv")));

    let finished = manifest::now();
    let manifest = RunManifest {
        tool: manifest::tool_version(),
        command: "sweep".into(),
        config: serde_json::to_value(&config).expect("config serializes"),
        seed: config.seed,
        started,
        finished,
        outputs: vec![OutputDigest {
            path: csv_path.display().to_string(),
            sha256: sha256_file(&csv_path)?,
        }],
    };
    write_manifest(&manifest_path, &manifest)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", manifest_path.display());
    Ok(())
}

pub fn threshold(csv: &Path, bootstrap: usize, out: Option<PathBuf>) -> CliResult<()> {
    let result = parse_csv(&read_to_string(csv)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", csv.display())))?;
    let options = ThresholdOptions { bootstrap_resamples: bootstrap, ..Default::default() };
    let estimate = find_threshold(&result, &options).map_err(|e| match e {
        ThresholdError::NoCrossing { .. } => CliError::NoCrossing(e.to_string()),
        other => CliError::Validation(other.to_string()),
    })?;
    let json =
        serde_json::to_string_pretty(&estimate).expect("estimates serialize") + "\n";
    match out {
        Some(path) => {
            write_file(&path, &json)?;
            println!("wrote {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(())
}

pub fn report(csv: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let result = parse_csv(&read_to_string(csv)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", csv.display())))?;
    let mut table = String::from("lattice,L,model,p,p_erase,metric,value\n");
    for c in &result.cells {
        for (metric, value) in [
            ("rate", c.rate.to_string()),
            ("ci_lo", c.ci_lo.to_string()),
            ("ci_hi", c.ci_hi.to_string()),
            ("trials", c.trials.to_string()),
            ("failures", c.failures.to_string()),
        ] {
            table.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                c.lattice, c.l, c.model, c.p, c.p_erase, metric, value
            ));
        }
    }
    match out {
        Some(path) => {
            write_file(&path, &table)?;
            println!("wrote {}", path.display());
        }
        None => print!("{table}"),
    }
    Ok(())
}
