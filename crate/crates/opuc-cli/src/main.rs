//! Command-line front end: family ingestion, batch computation, verification
//! suites, and plot-data export.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error,
//! 3 numerical failure.

use anyhow::Context;
use clap::{Parser, Subcommand};
use opuc::coeffs::FamilySpec;
use opuc::recursion::monic_sequence;
use opuc::roots::{roots, write_roots_csv, RootOptions};
use opuc::szego::SzegoApprox;
use opuc::verify::{format_outcomes, run_suite, SuiteOptions, SUITE_NAMES};
use opuc::zeros::{classify, write_classified_csv, ClassifyOptions};
use opuc::Family64;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "opuc",
    version,
    about = "Orthogonal polynomials on the unit circle: recursion, zeros, verification"
)]
struct Cli {
    /// Seed for randomized checks; falls back to OPUC_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write Verblunsky coefficients n < N as CSV (columns n,re,im).
    Gen {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print (or write) the monic polynomial of degree n as JSON.
    Poly {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for all zeros of the degree-n polynomial; writes a roots CSV
    /// and a classification JSON next to it.
    Zeros {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        /// Output directory (default: current).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot-ready labeled point file.
        #[arg(long)]
        plot: bool,
    },
    /// Classify zeros into interior / band / Nevai-Totik and report spacing
    /// and gap statistics as JSON.
    Classify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        delta_band: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite; exits 1 if any check fails.
    Verify {
        /// One of the suite names or its alias (see --list).
        suite: Option<String>,
        /// Print the known suite names and exit.
        #[arg(long)]
        list: bool,
        /// Override the n-sweep, comma separated (suites that take one).
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Family override for the clock-spacing suite.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Random trials for the determinant suite.
        #[arg(long)]
        trials: Option<usize>,
        /// Largest determinant size for the determinant suite.
        #[arg(long)]
        m: Option<usize>,
        /// Directory for JSON outcome files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export plot data: labeled zero point sets, or the outer-function grid.
    ExportPlot {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Dump the outer limit on a polar grid instead of zero points.
        #[arg(long)]
        outer: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let seed = cli
        .seed
        .or_else(|| std::env::var("OPUC_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0);
    std::process::exit(run(cli.command, seed));
}

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAIL: i32 = 1;
const EXIT_CONFIG: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;

fn exit_code_for(err: &opuc::Error) -> i32 {
    use opuc::Error::*;
    match err {
        InvalidFamily(_)
        | ModelUnavailable
        | DegreeTooSmall(_)
        | OutsideDomain { .. }
        | RatioUndefined { .. }
        | ZeroRatio { .. }
        | ZeroFactor { .. } => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn run(command: Command, seed: u64) -> i32 {
    match dispatch(command, seed) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<opuc::Error>() {
                Some(e) => exit_code_for(e),
                None => EXIT_CONFIG,
            }
        }
    }
}

fn load_family(path: &Path) -> anyhow::Result<Arc<Family64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading family spec {}", path.display()))?;
    let spec = FamilySpec::parse(&text)?;
    Ok(Arc::new(spec.to_family()?))
}

fn dispatch(command: Command, seed: u64) -> anyhow::Result<i32> {
    match command {
        Command::Gen { family, n, out } => {
            let fam = load_family(&family)?;
            let mut buf = Vec::new();
            opuc::coeffs::write_coeff_csv(&fam, n, &mut buf)?;
            fs::write(&out, buf).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {} coefficients to {}", n, out.display());
            Ok(EXIT_OK)
        }
        Command::Poly { family, n, out } => {
            let fam = load_family(&family)?;
            let seq = monic_sequence(&fam, n)?;
            let text = serde_json::to_string_pretty(&seq[n].phi.to_json())?;
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => println!("{text}"),
            }
            Ok(EXIT_OK)
        }
        Command::Zeros {
            family,
            n,
            out,
            plot,
        } => {
            if n == 0 {
                anyhow::bail!(opuc::Error::DegreeTooSmall(0));
            }
            let fam = load_family(&family)?;
            let model = fam.infer_model()?;
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)?;
            let report = classify(&fam, &model, n, &ClassifyOptions::default())?;

            let stem = format!("{}-n{}", sanitize(fam.label()), n);
            let roots_path = dir.join(format!("{stem}-zeros.csv"));
            let mut buf = Vec::new();
            write_classified_csv(&report, &mut buf)?;
            fs::write(&roots_path, buf)?;

            let json_path = dir.join(format!("{stem}-report.json"));
            fs::write(&json_path, serde_json::to_string_pretty(&report.to_json())?)?;
            println!(
                "n={} zeros={} interior={} band={} nt={} -> {}, {}",
                n,
                report.zeros.roots.len(),
                report.interior.len(),
                report.band.len(),
                report.nt.len(),
                roots_path.display(),
                json_path.display()
            );
            if plot {
                let plot_path = dir.join(format!("{stem}-points.dat"));
                let mut f = fs::File::create(&plot_path)?;
                writeln!(f, "# re im class")?;
                for z in &report.interior {
                    writeln!(f, "{} {} interior", z.re, z.im)?;
                }
                for z in &report.band {
                    writeln!(f, "{} {} band", z.re, z.im)?;
                }
                for m in &report.nt {
                    writeln!(f, "{} {} nt", m.zero.re, m.zero.im)?;
                }
                println!("plot points -> {}", plot_path.display());
            }
            Ok(EXIT_OK)
        }
        Command::Classify {
            family,
            n,
            delta,
            delta_band,
            out,
        } => {
            let fam = load_family(&family)?;
            let model = fam.infer_model()?;
            let opts = ClassifyOptions {
                delta,
                delta_band,
                ..Default::default()
            };
            let report = classify(&fam, &model, n, &opts)?;
            let text = serde_json::to_string_pretty(&report.to_json())?;
            match out {
                Some(path) => fs::write(&path, text)?,
                None => println!("{text}"),
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            list,
            n,
            family,
            trials,
            m,
            out,
        } => {
            if list {
                for name in SUITE_NAMES {
                    println!("{name}");
                }
                return Ok(EXIT_OK);
            }
            let Some(name) = suite else {
                anyhow::bail!(opuc::Error::InvalidFamily(
                    "verify needs a suite name (try --list)".into()
                ));
            };
            if let Some(dir) = &out {
                fs::create_dir_all(dir)?;
            }
            let family = family.as_deref().map(load_family).transpose()?;
            let mut opts = SuiteOptions {
                seed,
                ns: n,
                artifact_dir: out.clone(),
                family,
                ..Default::default()
            };
            if let Some(t) = trials {
                opts.trials = t;
            }
            if let Some(m) = m {
                opts.max_m = m;
            }
            let outcomes = run_suite(&name, &opts)?;
            print!("{}", format_outcomes(&outcomes));
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                let path = dir.join(format!("{}.json", sanitize(&name)));
                fs::write(&path, serde_json::to_string_pretty(&outcomes)?)?;
                println!("outcomes -> {}", path.display());
            }
            if outcomes.iter().all(|o| o.pass) {
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_VERIFY_FAIL)
            }
        }
        Command::ExportPlot {
            family,
            n,
            out,
            outer,
        } => {
            let fam = load_family(&family)?;
            let model = fam.infer_model()?;
            if outer {
                let approx = SzegoApprox::from_model(Arc::clone(&fam), &model);
                let radii: Vec<f64> = (0..40)
                    .map(|i| model.b * 1.05 + i as f64 * (0.98 - model.b * 1.05) / 39.0)
                    .collect();
                let mut buf = Vec::new();
                approx.write_outer_grid_csv(&radii, 128, &mut buf)?;
                fs::write(&out, buf)?;
                println!("outer grid -> {}", out.display());
            } else {
                if n == 0 {
                    anyhow::bail!(opuc::Error::DegreeTooSmall(0));
                }
                let seq = monic_sequence(&fam, n)?;
                let set = roots(
                    &seq[n].phi,
                    &RootOptions {
                        radius_hint: Some(model.b),
                        ..Default::default()
                    },
                )?;
                let mut buf = Vec::new();
                write_roots_csv(n, &set, &mut buf)?;
                fs::write(&out, buf)?;
                println!("zero points -> {}", out.display());
            }
            Ok(EXIT_OK)
        }
    }
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect()
}
