//! Command-line interface: exact values, Monte Carlo estimation, oracle
//! verification, and table/sample dumps with reproducible output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error. All output payloads are pure functions of the arguments (seeds
//! included); nothing reads the clock or the host environment except the
//! `XVOL_OUT_DIR` prefix for relative output paths.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analytic::{self, decimal_string};
use crate::error::Error;
use crate::montecarlo::{self, Estimate, Method};
use crate::pt;
use crate::quadrature::{self, PairBound};
use crate::sampler::{self, SampleConfig};
use crate::state::Dims;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// |z| above this fails an estimate run.
pub const Z_FAIL_THRESHOLD: f64 = 4.0;

const DEFAULT_SAMPLES: u64 = 1_000_000;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_WORKERS: usize = 1;

/// Environment variable naming the directory that relative `--out` paths
/// are resolved against.
pub const OUT_DIR_ENV: &str = "XVOL_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "xvol",
    version,
    about = "Volumes of bipartite X-states and of their positive-partial-transpose subset"
)]
pub struct Cli {
    /// Optional key=value config file supplying defaults for estimation
    /// flags (samples, seed, method, workers, format). Flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact PPT-to-total volume ratio (2/5)^(⌊m/2⌋·⌊n/2⌋).
    Ratio {
        m: u32,
        n: u32,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Exact X-state body volume and PPT volume.
    Volume {
        m: u32,
        n: u32,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Partial-transpose classification (quadruples, fixed pairs, center) as JSON.
    Classify {
        m: u32,
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the PPT fraction; exits 1 when |z| > 4.
    Estimate {
        m: u32,
        n: u32,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// naive | rb
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV table of counts and exact values for 2 ≤ m ≤ max_m, 2 ≤ n ≤ max_n.
    Table {
        max_m: u32,
        max_n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadrature and dense-oracle consistency suite.
    Verify {
        /// Deliberately corrupt one integrand to prove checks can fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Sample states under the Hilbert-Schmidt measure as JSON lines.
    DumpSamples {
        m: u32,
        n: u32,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Key=value defaults loaded from `--config`; lines starting with `#` and
/// blank lines are skipped.
#[derive(Debug, Default)]
struct FileDefaults {
    samples: Option<u64>,
    seed: Option<u64>,
    method: Option<String>,
    workers: Option<usize>,
    format: Option<OutputFormat>,
}

fn load_defaults(path: &Path) -> Result<FileDefaults, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut pairs = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }
    let mut defaults = FileDefaults::default();
    for (key, value) in pairs {
        match key.as_str() {
            "samples" => {
                defaults.samples = Some(value.parse().map_err(|e| format!("config samples: {e}"))?)
            }
            "seed" => defaults.seed = Some(value.parse().map_err(|e| format!("config seed: {e}"))?),
            "method" => defaults.method = Some(value),
            "workers" => {
                defaults.workers = Some(value.parse().map_err(|e| format!("config workers: {e}"))?)
            }
            "format" => {
                defaults.format = Some(
                    OutputFormat::from_str(&value, true)
                        .map_err(|e| format!("config format: {e}"))?,
                )
            }
            other => return Err(format!("config: unknown key '{other}'")),
        }
    }
    Ok(defaults)
}

fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

fn emit(payload: &str, out: Option<&Path>) -> Result<(), std::io::Error> {
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(payload.as_bytes())?;
            lock.flush()
        }
        Some(path) => {
            let path = resolve_out(path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, payload)
        }
    }
}

fn usage_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn io_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("I/O error: {message}");
    EXIT_IO
}

/// Dispatches a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let defaults = match cli.config.as_deref().map(load_defaults) {
        Some(Ok(d)) => d,
        Some(Err(message)) => return usage_error(message),
        None => FileDefaults::default(),
    };
    match cli.command {
        Command::Ratio { m, n, format } => {
            let format = format.or(defaults.format).unwrap_or(OutputFormat::Text);
            match render_ratio(m, n, format) {
                Ok(text) => match emit(&text, None) {
                    Ok(()) => EXIT_OK,
                    Err(e) => io_error(e),
                },
                Err(e) => usage_error(e),
            }
        }
        Command::Volume { m, n, format } => {
            let format = format.or(defaults.format).unwrap_or(OutputFormat::Text);
            match render_volume(m, n, format) {
                Ok(text) => match emit(&text, None) {
                    Ok(()) => EXIT_OK,
                    Err(e) => io_error(e),
                },
                Err(e) => usage_error(e),
            }
        }
        Command::Classify { m, n, out } => match render_classify(m, n) {
            Ok(text) => match emit(&text, out.as_deref()) {
                Ok(()) => EXIT_OK,
                Err(e) => io_error(e),
            },
            Err(e) => usage_error(e),
        },
        Command::Estimate {
            m,
            n,
            samples,
            seed,
            method,
            workers,
            format,
            out,
        } => {
            let samples = samples.or(defaults.samples).unwrap_or(DEFAULT_SAMPLES);
            let seed = seed.or(defaults.seed).unwrap_or(DEFAULT_SEED);
            let method = match method
                .or(defaults.method)
                .as_deref()
                .map(str::parse::<Method>)
                .transpose()
            {
                Ok(m) => m.unwrap_or(Method::RaoBlackwell),
                Err(e) => return usage_error(e),
            };
            let workers = workers.or(defaults.workers).unwrap_or(DEFAULT_WORKERS);
            if workers < 1 {
                return usage_error("workers must be at least 1");
            }
            let format = format.or(defaults.format).unwrap_or(OutputFormat::Text);
            match run_estimate(m, n, samples, seed, method, workers, format) {
                Ok((text, estimate)) => {
                    if let Err(e) = emit(&text, out.as_deref()) {
                        return io_error(e);
                    }
                    if estimate.z_score.abs() <= Z_FAIL_THRESHOLD {
                        EXIT_OK
                    } else {
                        EXIT_VERIFY_FAILED
                    }
                }
                Err(e) => usage_error(e),
            }
        }
        Command::Table { max_m, max_n, out } => match render_table(max_m, max_n) {
            Ok(text) => match emit(&text, out.as_deref()) {
                Ok(()) => EXIT_OK,
                Err(e) => io_error(e),
            },
            Err(e) => usage_error(e),
        },
        Command::Verify { inject_fault } => {
            let (report, all_passed) = run_verify(inject_fault);
            if let Err(e) = emit(&report, None) {
                return io_error(e);
            }
            if all_passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Command::DumpSamples {
            m,
            n,
            samples,
            seed,
            out,
        } => {
            let samples = samples.or(defaults.samples).unwrap_or(DEFAULT_SAMPLES);
            let seed = seed.or(defaults.seed).unwrap_or(DEFAULT_SEED);
            let dims = match Dims::new(m, n) {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            let cfg = match SampleConfig::new(dims, seed, samples) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let result = match out.as_deref() {
                None => sampler::write_jsonl(&cfg, std::io::stdout().lock()),
                Some(path) => {
                    let path = resolve_out(path);
                    match std::fs::File::create(&path) {
                        Ok(file) => sampler::write_jsonl(&cfg, std::io::BufWriter::new(file)),
                        Err(e) => return io_error(e),
                    }
                }
            };
            match result {
                Ok(()) => EXIT_OK,
                Err(e) => io_error(e),
            }
        }
    }
}

pub fn render_ratio(m: u32, n: u32, format: OutputFormat) -> Result<String, Error> {
    let dims = Dims::new(m, n)?;
    let ratio = analytic::ratio(dims);
    let decimal = decimal_string(&ratio, 17);
    Ok(match format {
        OutputFormat::Text => format!("{ratio} = {decimal}\n"),
        OutputFormat::Csv => format!("m,n,ratio_exact,ratio_decimal\n{m},{n},{ratio},{decimal}\n"),
        OutputFormat::Json => {
            let value = serde_json::json!({
                "m": m,
                "n": n,
                "exponent": (m as u64 / 2) * (n as u64 / 2),
                "ratio": ratio.to_string(),
                "decimal": decimal,
            });
            format!("{value}\n")
        }
    })
}

pub fn render_volume(m: u32, n: u32, format: OutputFormat) -> Result<String, Error> {
    let dims = Dims::new(m, n)?;
    let body = analytic::volume_x(dims);
    let ppt = analytic::volume_ppt(dims);
    let ratio = analytic::ratio(dims);
    Ok(match format {
        OutputFormat::Text => format!(
            "V_X({dims})   = {body} ≈ {}\nV_PPT({dims}) = {ppt} ≈ {}\nratio        = {ratio} = {}\n",
            body.approx_scientific(17),
            ppt.approx_scientific(17),
            decimal_string(&ratio, 17),
        ),
        OutputFormat::Csv => format!(
            "m,n,vx_coeff,vx_pi_power,vppt_coeff,vppt_pi_power,ratio_exact\n{m},{n},{},{},{},{},{ratio}\n",
            body.coeff(),
            body.pi_power(),
            ppt.coeff(),
            ppt.pi_power(),
        ),
        OutputFormat::Json => {
            let value = serde_json::json!({
                "m": m,
                "n": n,
                "vx": {
                    "coeff": body.coeff().to_string(),
                    "pi_power": body.pi_power(),
                    "approx": body.approx_scientific(17),
                },
                "vppt": {
                    "coeff": ppt.coeff().to_string(),
                    "pi_power": ppt.pi_power(),
                    "approx": ppt.approx_scientific(17),
                },
                "ratio": ratio.to_string(),
            });
            format!("{value}\n")
        }
    })
}

pub fn render_classify(m: u32, n: u32) -> Result<String, Error> {
    let dims = Dims::new(m, n)?;
    let cls = pt::classify(dims);
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&cls).expect("classification serializes")
    ))
}

pub fn run_estimate(
    m: u32,
    n: u32,
    samples: u64,
    seed: u64,
    method: Method,
    workers: usize,
    format: OutputFormat,
) -> Result<(String, Estimate), Error> {
    let dims = Dims::new(m, n)?;
    let cfg = SampleConfig::new(dims, seed, samples)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction");
    let estimate = pool.install(|| montecarlo::estimate(&cfg, method))?;
    let text = match format {
        OutputFormat::Text => {
            let verdict = if estimate.z_score.abs() <= Z_FAIL_THRESHOLD {
                "PASS"
            } else {
                "FAIL"
            };
            format!(
                "m={m} n={n} method={} samples={samples} seed={seed}\n\
                 mean={} std_error={} analytic={} z={}\n\
                 {verdict} (|z| threshold {Z_FAIL_THRESHOLD})\n",
                estimate.method,
                estimate.mean,
                estimate.std_error,
                estimate.analytic_value,
                estimate.z_score,
            )
        }
        OutputFormat::Csv => format!("{}\n{}\n", Estimate::CSV_HEADER, estimate.to_csv_row()),
        OutputFormat::Json => format!(
            "{}\n",
            serde_json::to_string(&estimate).expect("estimate serializes")
        ),
    };
    Ok((text, estimate))
}

pub fn render_table(max_m: u32, max_n: u32) -> Result<String, Error> {
    // Validates the grid bounds the same way as single dims.
    Dims::new(max_m, max_n)?;
    let mut out = String::from("m,n,A,B,C,ratio_exact,ratio_decimal,Vx_coeff,Vx_pi_power\n");
    for m in 2..=max_m {
        for n in 2..=max_n {
            let dims = Dims::new(m, n)?;
            let cls = pt::classify(dims);
            let ratio = analytic::ratio(dims);
            let body = analytic::volume_x(dims);
            out.push_str(&format!(
                "{m},{n},{},{},{},{},{},{},{}\n",
                cls.count_a(),
                cls.count_b(),
                cls.count_c(),
                ratio,
                decimal_string(&ratio, 17),
                body.coeff(),
                body.pi_power(),
            ));
        }
    }
    Ok(out)
}

struct Check {
    name: &'static str,
    measured: f64,
    expected: f64,
    tolerance: f64,
    relative: bool,
}

impl Check {
    fn passed(&self) -> bool {
        let err = if self.relative {
            (self.measured - self.expected).abs() / self.expected.abs()
        } else {
            (self.measured - self.expected).abs()
        };
        err <= self.tolerance
    }
}

/// Runs the oracle suite: quadrature against the exact integrals, then the
/// dense partial-transpose/eigensolver pipeline against the fast paths on
/// seeded random batches. Returns the report and overall pass flag.
pub fn run_verify(inject_fault: bool) -> (String, bool) {
    let mut checks = Vec::new();

    checks.push(Check {
        name: "quad_i_zero vs exact 1/12600",
        measured: quadrature::quad_i_zero(64),
        expected: analytic::rational_to_f64(&analytic::i_zero()),
        tolerance: 1e-6,
        relative: true,
    });

    let bound = if inject_fault {
        PairBound::Max
    } else {
        PairBound::Min
    };
    checks.push(Check {
        name: "quad_ratio_2x2 vs exact 2/5",
        measured: quadrature::quad_ratio_2x2_with(64, bound),
        expected: analytic::rational_to_f64(&analytic::ratio(
            Dims::new(2, 2).expect("2x2 is valid"),
        )),
        tolerance: 1e-5,
        relative: true,
    });

    // Dense-oracle agreement on seeded batches.
    let batch_dims = [(2u32, 2u32), (2, 3), (3, 3), (2, 4), (3, 4), (2, 6)];
    let mut max_eig_dev: f64 = 0.0;
    let mut ppt_disagreements = 0u64;
    let mut total = 0u64;
    for &(m, n) in &batch_dims {
        let dims = Dims::new(m, n).expect("batch dims are valid");
        let cls = pt::classify(dims);
        let mut rng = sampler::master_rng(0xDEC0DE + u64::from(m * 100 + n));
        for _ in 0..200 {
            let state = sampler::sample_state(dims, &mut rng);
            let dense = quadrature::dense_from_x(&state);
            let mut closed = state.eigenvalues().values();
            closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let dense_eigs =
                quadrature::eigenvalues_dense(&dense).expect("oracle eigensolve converges");
            for (a, b) in closed.iter().zip(&dense_eigs) {
                max_eig_dev = max_eig_dev.max((a - b).abs());
            }
            let fast = pt::ppt_check(&state, &cls, 0.0).expect("dims match");
            let pt_dense = quadrature::dense_partial_transpose(&dense, dims).expect("orders match");
            let oracle = quadrature::min_eigenvalue(&pt_dense)
                .expect("oracle eigensolve converges")
                >= -1e-10;
            if fast != oracle {
                ppt_disagreements += 1;
            }
            total += 1;
        }
    }
    checks.push(Check {
        name: "closed-form eigenvalues vs dense Jacobi (max deviation)",
        measured: max_eig_dev,
        expected: 0.0,
        tolerance: 1e-10,
        relative: false,
    });
    checks.push(Check {
        name: "ppt_check vs dense partial transpose (disagreements)",
        measured: ppt_disagreements as f64,
        expected: 0.0,
        tolerance: 0.0,
        relative: false,
    });

    let mut report = String::new();
    let mut all_passed = true;
    for check in &checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        all_passed &= check.passed();
        report.push_str(&format!(
            "{status} {}: measured={:e} expected={:e} tolerance={:e}{}\n",
            check.name,
            check.measured,
            check.expected,
            check.tolerance,
            if check.relative { " (relative)" } else { "" },
        ));
    }
    report.push_str(&format!(
        "{} ({} checks, {} states cross-checked)\n",
        if all_passed { "ALL PASS" } else { "FAILURES" },
        checks.len(),
        total,
    ));
    (report, all_passed)
}
