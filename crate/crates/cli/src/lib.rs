//! Command-line front end: argument parsing, unitary and Gram ingestion, and
//! JSON/CSV emission.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use snft::fourier::{fast_ft, ft, GroupFunction as GroupFn, SpectralFunction as SpectralFn};
use snft::interference::{
    amplitude_function, beamsplitter, event_distribution, fourier_unitary, identity_unitary,
    j_from_model, positivity_check, probability, sector_weights, state_purity, unitarity_deviation,
    DistinguishabilityModel, OutputEvent, ParticleStatistics, ScatteringSetup, StatisticsModel,
};
use snft::irreps::character_table;
use snft::suppression::{
    amplitude_cloud, phase_profile, scan, Analyzer, Dedupe, ScanOptions, ScanTable,
};
use snft::verify::{random_group_function, run_suite};
use snft::{CMatrix, Complex64, Error, IrrepTable, Partition, Permutation};

pub const SCHEMA: &str = "snft/1";
/// Unitarity tolerance for matrices read from files.
pub const INGEST_TOL: f64 = 1e-8;
pub const MAX_PARTICLES: usize = 7;
pub const MAX_MODES: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("self-check failed")]
    CheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Inconsistent(_)) | CliError::CheckFailed => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where a unitary comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitarySource {
    Fourier(usize),
    Identity(usize),
    Beamsplitter,
    File(PathBuf),
}

fn parse_unitary_source(s: &str) -> std::result::Result<UnitarySource, String> {
    let size = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| format!("bad mode count in {s:?}"))
    };
    if let Some(m) = s.strip_prefix("fourier:") {
        return Ok(UnitarySource::Fourier(size(m)?));
    }
    if let Some(m) = s.strip_prefix("identity:") {
        return Ok(UnitarySource::Identity(size(m)?));
    }
    if s == "beamsplitter" {
        return Ok(UnitarySource::Beamsplitter);
    }
    existing_file(s).map(UnitarySource::File)
}

fn existing_file(s: &str) -> std::result::Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("no such file: {s}"))
    }
}

/// Comma-separated non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<usize>);

fn parse_list(s: &str) -> std::result::Result<List, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad entry {t:?}")))
        .collect::<std::result::Result<_, _>>()
        .map(List)
}

#[derive(Parser, Debug)]
#[command(
    name = "snft",
    version,
    about = "Fourier analysis on S_N for many-particle interference"
)]
pub struct RunConfig {
    /// Worker threads for parallel scans.
    #[arg(long, global = true, env = "SNFT_THREADS")]
    pub threads: Option<usize>,
    /// Lift the N <= 7, M <= 8 limits.
    #[arg(long, global = true)]
    pub unsafe_large: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Unitarity tolerance applied to ingested matrices.
    #[arg(long, global = true, default_value_t = INGEST_TOL)]
    pub unitarity_tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct UnitaryArgs {
    /// `fourier:M`, `identity:M`, `beamsplitter` or a JSON file.
    #[arg(long, value_parser = parse_unitary_source)]
    pub unitary: Option<UnitarySource>,
    /// Use the Fourier unitary on `--m` modes.
    #[arg(long)]
    pub fourier: bool,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions and character table of S_N.
    Irreps {
        n: usize,
        /// Also emit the orthogonal matrices of every element.
        #[arg(long)]
        matrices: bool,
    },
    /// Fourier transform of a function on S_N.
    Ft {
        #[arg(long)]
        n: usize,
        /// `delta:PERM`, `sign`, `constant`, `character:(λ)` or a JSON file of values by rank.
        #[arg(long)]
        function: String,
        #[arg(long)]
        fast: bool,
    },
    /// Amplitude function a(σ) and its transform.
    Amplitude {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long = "in", value_parser = parse_list)]
        input: List,
        #[arg(long = "out", value_parser = parse_list)]
        output: List,
    },
    /// Event probabilities under a statistics model.
    Counting {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long)]
        n: Option<usize>,
        /// `boson`, `fermion`, `sector:(λ)`, `dist`, `gram:FILE` or `labels:a,b,..`
        #[arg(long)]
        model: String,
        #[arg(long = "in", value_parser = parse_list)]
        input: List,
        /// Output occupations; every event when omitted.
        #[arg(long, value_parser = parse_list)]
        event: Option<List>,
    },
    /// Sector weights, purity and positivity of a partial distinguishability model.
    Distinguishability {
        #[arg(long, value_parser = existing_file)]
        gram: Option<PathBuf>,
        #[arg(long, value_parser = parse_list)]
        labels: Option<List>,
        /// Real overlap of two particles.
        #[arg(long)]
        overlap: Option<f64>,
        #[arg(long, default_value = "boson")]
        stats: String,
        /// Input mode list; all particles in distinct modes when omitted.
        #[arg(long = "in", value_parser = parse_list)]
        input: Option<List>,
    },
    /// Suppression verdicts for every pair of configurations.
    Scan {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "none")]
        dedupe: String,
        /// CSV destination; standard output when omitted.
        #[arg(long = "out")]
        out: Option<PathBuf>,
        /// JSON summary destination.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Distinct amplitude values with multiplicities.
    Cloud {
        #[command(flatten)]
        unitary: UnitaryArgs,
        #[arg(long = "in", value_parser = parse_list)]
        input: List,
        #[arg(long = "out", value_parser = parse_list)]
        output: List,
    },
    /// Runs the invariant suite.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Times the direct and the fast transform.
    Bench {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Parses `args` and executes the command. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&config, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn thread_pool(config: &RunConfig) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn check_size(config: &RunConfig, n: usize, m: usize) -> CliResult<()> {
    if n == 0 || m == 0 {
        return Err(usage("N and M must be at least 1"));
    }
    if !config.unsafe_large && (n > MAX_PARTICLES || m > MAX_MODES) {
        return Err(usage(format!(
            "N={n}, M={m} exceeds N <= {MAX_PARTICLES}, M <= {MAX_MODES}; pass --unsafe-large to override"
        )));
    }
    Ok(())
}

pub fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match &config.command {
        Command::Irreps { n, matrices } => cmd_irreps(config, *n, *matrices, out),
        Command::Ft { n, function, fast } => cmd_ft(config, *n, function, *fast, out),
        Command::Amplitude {
            unitary,
            input,
            output,
        } => cmd_amplitude(config, unitary, &input.0, &output.0, out),
        Command::Counting {
            unitary,
            n,
            model,
            input,
            event,
        } => cmd_counting(
            config,
            unitary,
            *n,
            model,
            &input.0,
            event.as_ref().map(|e| e.0.as_slice()),
            out,
        ),
        Command::Distinguishability {
            gram,
            labels,
            overlap,
            stats,
            input,
        } => cmd_distinguishability(
            config,
            gram.as_deref(),
            labels.as_ref().map(|l| l.0.as_slice()),
            *overlap,
            stats,
            input.as_ref().map(|l| l.0.as_slice()),
            out,
        ),
        Command::Scan {
            unitary,
            n,
            dedupe,
            out: path,
            summary,
        } => cmd_scan(
            config,
            unitary,
            *n,
            dedupe,
            path.as_deref(),
            summary.as_deref(),
            out,
            err,
        ),
        Command::Cloud {
            unitary,
            input,
            output,
        } => cmd_cloud(config, unitary, &input.0, &output.0, out),
        Command::Verify { n, seed } => cmd_verify(config, *n, *seed, out),
        Command::Bench { n, seed } => cmd_bench(config, *n, *seed, out),
    }
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex(m[(r, c)])).collect()))
            .collect(),
    )
}

fn parse_complex(v: &Value) -> CliResult<Complex64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| usage("complex entries must be [re, im]"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| usage("non-numeric real part"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| usage("non-numeric imaginary part"))?;
    Ok(Complex64::new(re, im))
}

/// Reads a square complex matrix: nested rows of `[re, im]`, a flat
/// row-major list of `[re, im]`, or either under a `"matrix"` key.
pub fn parse_matrix(text: &str) -> CliResult<CMatrix> {
    let v: Value = serde_json::from_str(text)?;
    let v = v.get("matrix").cloned().unwrap_or(v);
    let items = v
        .as_array()
        .ok_or_else(|| usage("matrix must be a JSON array"))?;
    let nested = items
        .first()
        .and_then(|r| r.as_array())
        .is_some_and(|r| r.iter().all(Value::is_array));
    let entries: Vec<Complex64> = if nested {
        let n = items.len();
        let mut flat = Vec::with_capacity(n * n);
        for row in items {
            let row = row.as_array().ok_or_else(|| usage("rows must be arrays"))?;
            if row.len() != n {
                return Err(usage("matrix is not square"));
            }
            for e in row {
                flat.push(parse_complex(e)?);
            }
        }
        flat
    } else {
        items.iter().map(parse_complex).collect::<CliResult<_>>()?
    };
    let n = (entries.len() as f64).sqrt().round() as usize;
    if n * n != entries.len() || n == 0 {
        return Err(usage(format!(
            "{} entries do not form a square matrix",
            entries.len()
        )));
    }
    Ok(CMatrix::from_row_slice(n, n, &entries))
}

/// Builtin or file unitary, validated to the ingestion tolerance.
pub fn ingest_unitary(source: &UnitarySource, tol: f64) -> CliResult<CMatrix> {
    let u = match source {
        UnitarySource::Fourier(m) => fourier_unitary(*m),
        UnitarySource::Identity(m) => identity_unitary(*m),
        UnitarySource::Beamsplitter => beamsplitter(),
        UnitarySource::File(p) => parse_matrix(&fs::read_to_string(p)?)?,
    };
    let deviation = unitarity_deviation(&u);
    if !(deviation <= tol) {
        return Err(Error::NotUnitary { deviation }.into());
    }
    Ok(u)
}

fn resolve_unitary(config: &RunConfig, args: &UnitaryArgs, n: usize) -> CliResult<CMatrix> {
    let source = match (&args.unitary, args.fourier) {
        (Some(_), true) => return Err(usage("give either --unitary or --fourier")),
        (Some(s), false) => s.clone(),
        (None, true) => UnitarySource::Fourier(args.m.unwrap_or(n)),
        (None, false) => return Err(usage("a unitary is required (--unitary or --fourier)")),
    };
    let u = ingest_unitary(&source, config.unitarity_tol)?;
    if let Some(m) = args.m {
        if m != u.nrows() {
            return Err(usage(format!(
                "--m {m} disagrees with a {}-mode unitary",
                u.nrows()
            )));
        }
    }
    check_size(config, n, u.nrows())?;
    Ok(u)
}

fn setup_for(
    config: &RunConfig,
    u: CMatrix,
    input: &[usize],
    output: &[usize],
) -> CliResult<ScatteringSetup> {
    Ok(ScatteringSetup::with_tolerance(
        u,
        input.to_vec(),
        output.to_vec(),
        config.unitarity_tol,
    )?)
}

fn emit_json(out: &mut dyn Write, mut v: Value) -> CliResult<()> {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

fn spectral_json(spec: &SpectralFn) -> Value {
    Value::Array(
        spec.blocks()
            .iter()
            .map(|(p, b)| {
                let weight: f64 = b.iter().map(|z| z.norm_sqr()).sum();
                json!({
                    "partition": p.to_string(),
                    "dimension": p.dimension(),
                    "block": matrix_json(b),
                    "weight": weight,
                })
            })
            .collect(),
    )
}

fn cmd_irreps(config: &RunConfig, n: usize, matrices: bool, out: &mut dyn Write) -> CliResult<()> {
    check_size(config, n, 1)?;
    let ct = character_table(n)?;
    let classes: Vec<String> = ct.classes().iter().map(Partition::to_string).collect();
    if config.format == Some(Format::Csv) {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["partition".to_string(), "dimension".to_string()];
        header.extend(classes.iter().cloned());
        w.write_record(&header)?;
        for (l, p) in ct.partitions().iter().enumerate() {
            let mut row = vec![p.to_string(), p.dimension().to_string()];
            row.extend(ct.row(l).iter().map(i64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        return Ok(());
    }
    let mut v = json!({
        "command": "irreps",
        "n": n,
        "partitions": ct.partitions().iter().map(Partition::to_string).collect::<Vec<_>>(),
        "dimensions": ct.partitions().iter().map(Partition::dimension).collect::<Vec<_>>(),
        "classes": classes,
        "class_sizes": (0..ct.classes().len()).map(|c| ct.class_size(c)).collect::<Vec<_>>(),
        "characters": (0..ct.partitions().len()).map(|l| ct.row(l).to_vec()).collect::<Vec<_>>(),
    });
    if matrices {
        if n > 5 {
            return Err(Error::ResourceGuard("--matrices limited to n <= 5".into()).into());
        }
        let table = IrrepTable::new(n)?;
        let group = table.group();
        let reps: Vec<Value> = table
            .partitions()
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let elements: Vec<Value> = group
                    .elements()
                    .iter()
                    .map(|s| {
                        let m = table.matrix_at(idx, s).expect("degree matches");
                        let rows: Vec<Vec<f64>> = (0..m.nrows())
                            .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
                            .collect();
                        json!({ "permutation": s.to_string(), "matrix": rows })
                    })
                    .collect();
                json!({ "partition": p.to_string(), "elements": elements })
            })
            .collect();
        v["matrices"] = Value::Array(reps);
    }
    emit_json(out, v)
}

fn function_from_spec(n: usize, spec: &str, table: &IrrepTable) -> CliResult<GroupFn> {
    if let Some(p) = spec.strip_prefix("delta:") {
        return Ok(GroupFn::delta(&Permutation::parse(p, n)?)?);
    }
    if let Some(p) = spec.strip_prefix("character:") {
        return Ok(GroupFn::character(table, &p.parse::<Partition>()?)?);
    }
    match spec {
        "sign" => Ok(GroupFn::sign(n)?),
        "constant" => Ok(GroupFn::constant(n, Complex64::new(1.0, 0.0))?),
        path => {
            let path = existing_file(path).map_err(usage)?;
            let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
            let v = v.get("values").cloned().unwrap_or(v);
            let items = v
                .as_array()
                .ok_or_else(|| usage("values must be a JSON array"))?;
            let values = items
                .iter()
                .map(parse_complex)
                .collect::<CliResult<Vec<_>>>()?;
            Ok(GroupFn::from_values(n, values)?)
        }
    }
}

fn cmd_ft(
    config: &RunConfig,
    n: usize,
    function: &str,
    fast: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    check_size(config, n, 1)?;
    let table = IrrepTable::new(n)?;
    let f = function_from_spec(n, function, &table)?;
    let spec = if fast {
        fast_ft(&f, &table)?
    } else {
        ft(&f, &table)?
    };
    emit_json(
        out,
        json!({ "command": "ft", "n": n, "fast": fast, "blocks": spectral_json(&spec) }),
    )
}

fn cmd_amplitude(
    config: &RunConfig,
    args: &UnitaryArgs,
    input: &[usize],
    output: &[usize],
    out: &mut dyn Write,
) -> CliResult<()> {
    let u = resolve_unitary(config, args, input.len())?;
    let setup = setup_for(config, u, input, output)?;
    let a = amplitude_function(&setup);
    let group = snft::perm::symmetric_group(setup.particles())?;
    if config.format == Some(Format::Csv) {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "permutation", "re", "im"])?;
        for (r, z) in a.values().iter().enumerate() {
            w.write_record([
                r.to_string(),
                group.element(r).to_string(),
                num(z.re),
                num(z.im),
            ])?;
        }
        w.flush()?;
        return Ok(());
    }
    let table = IrrepTable::new(setup.particles())?;
    let spec = ft(&a, &table)?;
    let amplitudes: Vec<Value> = a
        .values()
        .iter()
        .enumerate()
        .map(|(r, z)| {
            json!({
                "rank": r,
                "permutation": group.element(r).to_string(),
                "one_line": group.element(r).one_line(),
                "value": complex(*z),
            })
        })
        .collect();
    emit_json(
        out,
        json!({
            "command": "amplitude",
            "n": setup.particles(),
            "m": setup.modes(),
            "input": input,
            "output": output,
            "unitary": matrix_json(setup.unitary()),
            "amplitudes": amplitudes,
            "spectral": spectral_json(&spec),
        }),
    )
}

fn parse_model(spec: &str, input: &[usize], config: &RunConfig) -> CliResult<StatisticsModel> {
    let n = input.len();
    if let Some(p) = spec.strip_prefix("sector:") {
        return Ok(StatisticsModel::Sector(p.parse()?));
    }
    if let Some(path) = spec.strip_prefix("gram:") {
        let path = existing_file(path).map_err(usage)?;
        let s = parse_matrix(&fs::read_to_string(path)?)?;
        let _ = config;
        let j = j_from_model(
            &DistinguishabilityModel::Gram(s),
            ParticleStatistics::Boson,
            input,
        )?;
        return Ok(StatisticsModel::Partial(j));
    }
    if let Some(l) = spec.strip_prefix("labels:") {
        let labels = parse_list(l).map_err(usage)?.0;
        let j = j_from_model(
            &DistinguishabilityModel::Labels(labels),
            ParticleStatistics::Boson,
            input,
        )?;
        return Ok(StatisticsModel::Partial(j));
    }
    match spec {
        "boson" => Ok(StatisticsModel::Boson),
        "fermion" => Ok(StatisticsModel::Fermion),
        "dist" => Ok(StatisticsModel::Distinguishable),
        other => Err(usage(format!("unknown model {other:?} for {n} particles"))),
    }
}

fn cmd_counting(
    config: &RunConfig,
    args: &UnitaryArgs,
    n: Option<usize>,
    model: &str,
    input: &[usize],
    event: Option<&[usize]>,
    out: &mut dyn Write,
) -> CliResult<()> {
    if let Some(n) = n {
        if n != input.len() {
            return Err(usage(format!(
                "--n {n} disagrees with {} input modes",
                input.len()
            )));
        }
    }
    let u = resolve_unitary(config, args, input.len())?;
    let m = u.nrows();
    let stat = parse_model(model, input, config)?;
    let table = IrrepTable::new(input.len())?;
    let base = setup_for(config, u, input, input)?;
    let results: Vec<(OutputEvent, f64)> = match event {
        Some(occ) => {
            let ev = OutputEvent::from_occupations(occ.to_vec())?;
            if ev.modes() != m || ev.particles() != input.len() {
                return Err(usage("event does not match the particle and mode numbers"));
            }
            let s = base.with_event(&ev)?;
            vec![(ev, probability(&s, &stat, &table)?)]
        }
        None => event_distribution(&base, &stat, &table)?,
    };
    if config.format == Some(Format::Csv) {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["occupations", "probability"])?;
        for (ev, p) in &results {
            w.write_record([join(ev.occupations()), num(*p)])?;
        }
        w.flush()?;
        return Ok(());
    }
    let events: Vec<Value> = results
        .iter()
        .map(|(ev, p)| json!({ "occupations": ev.occupations(), "probability": p }))
        .collect();
    let total: f64 = results.iter().map(|(_, p)| p).sum();
    let mut v = json!({
        "command": "counting",
        "model": model,
        "n": input.len(),
        "m": m,
        "input": input,
        "events": events,
        "total": total,
    });
    if results.len() == 1 {
        v["probability"] = json!(results[0].1);
    }
    emit_json(out, v)
}

/// Shortest decimal form that parses back to the same `f64`.
fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_distinguishability(
    config: &RunConfig,
    gram: Option<&Path>,
    labels: Option<&[usize]>,
    overlap: Option<f64>,
    stats: &str,
    input: Option<&[usize]>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let stats = match stats {
        "boson" => ParticleStatistics::Boson,
        "fermion" => ParticleStatistics::Fermion,
        other => return Err(usage(format!("unknown statistics {other:?}"))),
    };
    let model = match (gram, labels, overlap) {
        (Some(p), None, None) => {
            DistinguishabilityModel::Gram(parse_matrix(&fs::read_to_string(p)?)?)
        }
        (None, Some(l), None) => DistinguishabilityModel::Labels(l.to_vec()),
        (None, None, Some(c)) => {
            let one = Complex64::new(1.0, 0.0);
            let c = Complex64::new(c, 0.0);
            DistinguishabilityModel::Gram(CMatrix::from_row_slice(2, 2, &[one, c, c, one]))
        }
        _ => return Err(usage("give exactly one of --gram, --labels, --overlap")),
    };
    let n = match &model {
        DistinguishabilityModel::Gram(s) => s.nrows(),
        DistinguishabilityModel::Labels(l) => l.len(),
        DistinguishabilityModel::Explicit(j) => j.degree(),
    };
    check_size(config, n, 1)?;
    let input: Vec<usize> = input.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
    let j = j_from_model(&model, stats, &input)?;
    let table = IrrepTable::new(n)?;
    let weights = sector_weights(&j, &table)?;
    let purity = state_purity(&j, &table)?;
    let report = positivity_check(&j, &table)?;
    let sectors: Vec<Value> = report
        .sectors
        .iter()
        .map(|s| {
            json!({
                "partition": s.partition.to_string(),
                "min_eigenvalue": s.min_eigenvalue,
                "hermiticity_residual": s.hermiticity_residual,
            })
        })
        .collect();
    let weights: serde_json::Map<String, Value> = weights
        .iter()
        .map(|(p, w)| (p.to_string(), json!(w)))
        .collect();
    emit_json(
        out,
        json!({
            "command": "distinguishability",
            "n": n,
            "input": input,
            "weights": weights,
            "purity": purity,
            "positivity": { "passed": report.passed(), "sectors": sectors },
        }),
    )
}

/// CSV columns: input occupations, output occupations, λ, weight, status,
/// witness, multiplicity.
pub fn write_scan_csv(table: &ScanTable, w: &mut dyn Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record([
        "input",
        "output",
        "lambda",
        "weight",
        "status",
        "witness",
        "multiplicity",
    ])?;
    for row in &table.rows {
        let i = join(&row.input_occupations(table.m));
        let o = join(&row.output_occupations(table.m));
        for v in &row.verdicts {
            w.write_record([
                i.clone(),
                o.clone(),
                v.sector.to_string(),
                num(v.weight),
                v.status.to_string(),
                v.witness
                    .as_ref()
                    .map_or(String::new(), ToString::to_string),
                row.multiplicity.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn scan_summary_json(table: &ScanTable) -> Value {
    let s = &table.summary;
    let counts: serde_json::Map<String, Value> = s
        .status_counts
        .iter()
        .map(|(p, c)| {
            let inner: serde_json::Map<String, Value> =
                c.iter().map(|(st, k)| (st.to_string(), json!(k))).collect();
            (p.to_string(), Value::Object(inner))
        })
        .collect();
    let residuals: Vec<Value> = s
        .residuals
        .iter()
        .map(|r| {
            let row = &table.rows[r.row];
            json!({
                "input": row.input_occupations(table.m),
                "output": row.output_occupations(table.m),
                "kind": r.kind.to_string(),
                "sectors": r.sectors.iter().map(Partition::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "command": "scan",
        "n": table.n,
        "m": table.m,
        "dedupe": table.dedupe.to_string(),
        "raw_pairs": s.raw_pairs,
        "rows": s.rows,
        "status_counts": counts,
        "cyclic_cases": s.cyclic_cases,
        "complementary": s.complementary,
        "inherited": s.inherited,
        "residuals": residuals,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    config: &RunConfig,
    args: &UnitaryArgs,
    n: usize,
    dedupe: &str,
    path: Option<&Path>,
    summary: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let dedupe: Dedupe = dedupe.parse()?;
    let u = resolve_unitary(config, args, n)?;
    let m = u.nrows();
    let analyzer = Analyzer::new(n)?;
    let options = ScanOptions {
        dedupe,
        allow_large: config.unsafe_large,
    };
    let table = thread_pool(config)?.install(|| scan(n, m, &u, options, &analyzer))?;
    match path {
        Some(p) => write_scan_csv(&table, &mut fs::File::create(p)?)?,
        None => write_scan_csv(&table, out)?,
    }
    let s = &table.summary;
    writeln!(
        err,
        "scan N={n} M={m}: {} rows ({} raw pairs), {} residual entries, {} inherited",
        s.rows,
        s.raw_pairs,
        s.residuals.len(),
        s.inherited
    )?;
    if let Some(p) = summary {
        let mut f = fs::File::create(p)?;
        emit_json(&mut f, scan_summary_json(&table))?;
    }
    Ok(())
}

fn cmd_cloud(
    config: &RunConfig,
    args: &UnitaryArgs,
    input: &[usize],
    output: &[usize],
    out: &mut dyn Write,
) -> CliResult<()> {
    let u = resolve_unitary(config, args, input.len())?;
    let setup = setup_for(config, u, input, output)?;
    let points = amplitude_cloud(&setup)?;
    if config.format == Some(Format::Json) {
        let symmetric = phase_profile(&setup).ok().map(|p| p.point_symmetric());
        let pts: Vec<Value> = points
            .iter()
            .map(|p| json!({ "value": [p.re, p.im], "multiplicity": p.multiplicity }))
            .collect();
        return emit_json(
            out,
            json!({
                "command": "cloud",
                "input": input,
                "output": output,
                "points": pts,
                "point_symmetric": symmetric,
            }),
        );
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "multiplicity"])?;
    for p in points {
        w.write_record([num(p.re), num(p.im), p.multiplicity.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(config: &RunConfig, n: usize, seed: u64, out: &mut dyn Write) -> CliResult<()> {
    check_size(config, n, 1)?;
    let report = run_suite(n, seed)?;
    write!(out, "{report}")?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}

fn cmd_bench(config: &RunConfig, n: usize, seed: u64, out: &mut dyn Write) -> CliResult<()> {
    check_size(config, n, 1)?;
    let table = IrrepTable::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_group_function(n, &mut rng)?;
    let t0 = Instant::now();
    let direct = ft(&f, &table)?;
    let t_direct = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let fast = fast_ft(&f, &table)?;
    let t_fast = t1.elapsed().as_secs_f64();
    emit_json(
        out,
        json!({
            "command": "bench",
            "n": n,
            "ft_seconds": t_direct,
            "fast_ft_seconds": t_fast,
            "max_deviation": direct.max_abs_diff(&fast),
        }),
    )
}
