//! `stabcert`: run the proof stages, check certificates and inspect configurations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stabcert_core::code::{code_from_lines, min_quaternary_distance, strength, symplectic_dual, LineSystem};
use stabcert_core::nmset::{automorphism_order, check_strength3, classify, extension_points, NMSet};
use stabcert_core::quantum::{hyperplane_parity, quantum_condition};
use stabcert_pipeline::check::{check_master, check_report, CheckOptions};
use stabcert_pipeline::run::{master, verify, write_certificates, StagePlan};
use stabcert_pipeline::sampling::DEFAULT_SEED;
use stabcert_pipeline::{Certificate, MasterCertificate, RunOptions, StageId};

const EXIT_MISMATCH: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "stabcert", version, about = "Certified searches showing there is no [[13,5,4]] quantum stabilizer code")]
struct Cli {
    /// Worker threads for the searches.
    #[arg(long, global = true, env = "STABCERT_WORKERS", value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// -v for stage progress, -vv for search counters.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run stages and write their certificates.
    Verify {
        /// Stages to run: P, W5, W4a, W4b, W4c, S, F or all (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "all")]
        stage: Vec<String>,
        /// Same as `--stage all`.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "certificates")]
        out: PathBuf,
        /// Fraction of subtrees re-searched by the independent route.
        #[arg(long, default_value_t = 0.01, value_parser = parse_rate)]
        sample_rate: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Check a stage certificate, or a master certificate next to its stage files.
    Check {
        path: PathBuf,
        /// Skip the sampled re-search.
        #[arg(long)]
        no_resample: bool,
    },
    /// Computations on a configuration file in matrix text format.
    Inspect {
        #[command(subcommand)]
        what: Inspect,
    },
}

#[derive(Subcommand, Debug)]
enum Inspect {
    /// Strength of the configuration (largest t with every t objects independent).
    Strength { file: PathBuf },
    /// Dimension and minimum distance of the code of the lines and of its dual.
    Dual { file: PathBuf },
    /// Hyperplane parity of the points, with the lines counted as codelines.
    Parity { file: PathBuf },
    /// Whether the code of the lines is self-orthogonal.
    Quantum { file: PathBuf },
    /// Projectivity classes among the given configurations.
    Classify { files: Vec<PathBuf> },
    /// Points completing the configuration with strength 3.
    Extensions { file: PathBuf },
    /// Order of the group of projectivities fixing the configuration.
    Aut { file: PathBuf },
}

fn parse_rate(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err("sample rate must lie in [0, 1]".into())
    }
}

/// An error carrying its exit status.
struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_IO, format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    let result = match cli.command {
        Command::Verify { stage, all, out, sample_rate, seed } => cmd_verify(&stage, all, &out, RunOptions { sample_rate, seed }),
        Command::Check { path, no_resample } => cmd_check(&path, !no_resample),
        Command::Inspect { what } => cmd_inspect(what),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn selected_stages(names: &[String], all: bool) -> Result<Vec<StageId>, Failure> {
    if all || names.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(StageId::ALL.to_vec());
    }
    names.iter().map(|s| s.parse::<StageId>().map_err(|e| Failure(EXIT_PARSE, e.to_string()))).collect()
}

/// Fails early when certificates could not be written.
fn ensure_writable(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let probe = dir.join(".stabcert-probe");
    fs::write(&probe, b"").map_err(|e| io_failure(dir, e))?;
    fs::remove_file(&probe).map_err(|e| io_failure(dir, e))
}

fn cmd_verify(names: &[String], all: bool, out: &Path, opts: RunOptions) -> Outcome {
    let stages = selected_stages(names, all)?;
    ensure_writable(out)?;
    let plan = StagePlan::only(&stages);
    let start = std::time::Instant::now();
    let certs = verify(&plan, &opts).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
    for c in &certs {
        println!(
            "{:<4} {:<8} count {} (expected {}), {} warning(s), {:.1} s",
            c.stage_id,
            if c.matched { "match" } else { "MISMATCH" },
            c.outcome.count,
            c.expected.value,
            c.warnings.len(),
            c.wall_time_ms as f64 / 1000.0
        );
    }
    let full = plan == StagePlan::all();
    let m = full.then(|| master(&certs, start.elapsed().as_millis() as u64));
    let written = write_certificates(out, &certs, m.as_ref()).map_err(|e| io_failure(out, e))?;
    if let Some(m) = &m {
        println!("{}: {}", m.statement, if m.holds { "verified" } else { "NOT verified" });
    }
    for p in written {
        log::info!("wrote {}", p.display());
    }
    Ok(if certs.iter().all(|c| c.matched) && m.is_none_or(|m| m.holds) { 0 } else { EXIT_MISMATCH })
}

fn cmd_check(path: &Path, resample: bool) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let opts = CheckOptions { resample };
    let report = if value.get("statement").is_some() {
        let m = MasterCertificate::from_json(&text).map_err(|e| Failure(EXIT_PARSE, e.to_string()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut stages = Vec::new();
        let mut failures = Vec::new();
        for s in &m.stages {
            let p = stabcert_pipeline::run::certificate_path(dir, &s.stage_id);
            let t = fs::read_to_string(&p).map_err(|e| io_failure(&p, e))?;
            let c = Certificate::from_json(&t).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", p.display())))?;
            failures.extend(check_report(&c, &opts).failures.into_iter().map(|f| format!("{}: {f}", c.stage_id)));
            stages.push(c);
        }
        let mut report = check_master(&m, &stages);
        report.failures.extend(failures);
        report
    } else {
        let c = Certificate::from_json(&text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        check_report(&c, &opts)
    };
    if report.valid() {
        println!("{}: valid", path.display());
        Ok(0)
    } else {
        println!("{}: INVALID", path.display());
        for f in &report.failures {
            println!("  {f}");
        }
        Ok(EXIT_MISMATCH)
    }
}

fn read_set(path: &Path) -> Result<NMSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    NMSet::parse_text(&text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn describe(s: &NMSet) -> String {
    format!("({},{})-set in PG({},2)", s.n_lines(), s.n_points(), s.ambient_dim() - 1)
}

fn cmd_inspect(what: Inspect) -> Outcome {
    match what {
        Inspect::Strength { file } => {
            let s = read_set(&file)?;
            if s.n_points() == 0 {
                println!("{}: strength {}", describe(&s), strength(&LineSystem::new(s.ambient_dim(), s.lines().to_vec())));
            } else {
                println!("{}: strength 3: {}", describe(&s), if check_strength3(&s) { "yes" } else { "no" });
            }
        }
        Inspect::Dual { file } => {
            let s = read_set(&file)?;
            let c = code_from_lines(&LineSystem::new(s.ambient_dim(), s.lines().to_vec()));
            let d = symplectic_dual(&c);
            let dist = |c| min_quaternary_distance(c).map_err(|e| Failure(EXIT_PARSE, e.to_string()));
            println!("code: length {}, dimension {}, minimum distance {}", c.len(), c.quaternary_dim(), dist(&c)?);
            println!("dual: length {}, dimension {}, minimum distance {}", d.len(), d.quaternary_dim(), dist(&d)?);
        }
        Inspect::Parity { file } => {
            let s = read_set(&file)?;
            println!("{}: hyperplane parity {}", describe(&s), hyperplane_parity(&s.points(), s.ambient_dim(), s.n_lines()));
        }
        Inspect::Quantum { file } => {
            let s = read_set(&file)?;
            println!("{}: self-orthogonal {}", describe(&s), quantum_condition(&LineSystem::new(s.ambient_dim(), s.lines().to_vec())));
        }
        Inspect::Classify { files } => {
            let sets: Vec<NMSet> = files.iter().map(|f| read_set(f)).collect::<Result<_, _>>()?;
            let classes = classify(sets);
            println!("{} classes", classes.len());
            for (i, c) in classes.iter().enumerate() {
                println!("class {i}: {} member(s), {} automorphisms", c.multiplicity, c.aut_order);
            }
        }
        Inspect::Extensions { file } => {
            let s = read_set(&file)?;
            let ext = extension_points(&s);
            println!("{} extension points", ext.len());
            for p in ext {
                println!("{}", p.to_coords(s.ambient_dim()));
            }
        }
        Inspect::Aut { file } => {
            let s = read_set(&file)?;
            println!("{}", automorphism_order(&s));
        }
    }
    Ok(0)
}
