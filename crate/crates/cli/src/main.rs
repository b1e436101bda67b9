use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use equilog::cache::Cache;
use equilog::linalg::Arithmetic;
use equilog::presentations::RingId;
use equilog::store::Store;
use equilog::verifier::{self, Certificate, ConsistencyRanges};

#[derive(Parser)]
#[command(name = "equilog", version, about = "Graded S_n-representations, stability patterns and log-concavity certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Directory for cached decompositions and patterns.
    #[arg(long, global = true, env = "EQUILOG_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Arith::Rational)]
    arith: Arith,
    /// Write the certificate as JSON here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the full certificate instead of a summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arith {
    Rational,
    Multimodular,
}

impl From<Arith> for Arithmetic {
    fn from(a: Arith) -> Self {
        match a {
            Arith::Rational => Arithmetic::Rational,
            Arith::Multimodular => Arithmetic::Multimodular,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Graded characters of one ring for a range of n.
    Characters {
        #[arg(long)]
        ring: RingId,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long)]
        max_n: usize,
        /// Stop at this degree instead of the top.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Fit stable patterns. Without --ring, fits every ring and checks the recursions.
    Fit {
        #[arg(long)]
        ring: Option<RingId>,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Largest n computed (default: enough to verify every onset).
        #[arg(long)]
        max_n: Option<usize>,
        /// Onset to use instead of the proven one.
        #[arg(long)]
        onset: Option<usize>,
    },
    /// Strong equivariant log-concavity for every n.
    VerifyElc {
        #[arg(long)]
        ring: RingId,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        /// Check n up to this instead of the proven bound.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// D and M agree in low degrees for every n.
    VerifyMpy {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Identities relating the rings.
    Consistency {
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Totals of the t-deformed ring at t = 0, 1 and generic t.
    Deform {
        #[arg(long, default_value_t = 2)]
        min_n: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let g = cli.global;
    if let Some(jobs) = g.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cache = match &g.cache_dir {
        Some(dir) => Some(Cache::open(dir).with_context(|| format!("opening cache {}", dir.display()))?),
        None => None,
    };
    let arith: Arithmetic = g.arith.into();
    let store = Store::new(arith, cache);
    let certs: Vec<Certificate> = match cli.command {
        Command::Characters { ring, min_n, max_n, max_degree } => {
            if min_n > max_n {
                bail!("--min-n {min_n} exceeds --max-n {max_n}");
            }
            vec![verifier::characters(&store, ring, min_n..=max_n, max_degree)]
        }
        Command::Fit { ring: None, max_degree, max_n, onset } => {
            if onset.is_some() {
                bail!("--onset needs --ring");
            }
            let ceiling = max_n.unwrap_or(3 * max_degree + 2);
            vec![verifier::fit_battery(&store, max_degree, ceiling)]
        }
        Command::Fit { ring: Some(ring), max_degree, max_n, onset } => (0..=max_degree)
            .map(|i| {
                let ceiling = max_n.unwrap_or(onset.unwrap_or_else(|| ring.onset(i)) + 2);
                verifier::fit(&store, ring, i, onset, ceiling).1
            })
            .collect(),
        Command::VerifyElc { ring, max_m, max_n } => vec![verifier::verify_elc(&store, ring, max_m, max_n)],
        Command::VerifyMpy { max_degree } => vec![verifier::verify_mpy(&store, max_degree)],
        Command::Consistency { max_n, max_degree } => {
            vec![verifier::consistency(&store, &ConsistencyRanges::default().capped(max_n, max_degree))]
        }
        Command::Deform { min_n, max_n, seed } => {
            if min_n < 2 || min_n > max_n {
                bail!("need 2 <= --min-n <= --max-n");
            }
            vec![verifier::deform(min_n..=max_n, seed, arith)]
        }
    };
    let value = if certs.len() == 1 {
        serde_json::to_value(&certs[0])?
    } else {
        serde_json::to_value(&certs)?
    };
    let text = serde_json::to_string_pretty(&value)?;
    if let Some(path) = &g.out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    if g.json {
        println!("{text}");
    } else {
        for cert in &certs {
            summarize(cert);
        }
    }
    Ok(certs.iter().all(Certificate::passed))
}

fn summarize(cert: &Certificate) {
    for c in &cert.checks {
        let mark = if c.passed() { "PASS" } else { "FAIL" };
        println!("{mark} {} {}", c.name, c.inputs);
        if c.name == "graded_character" {
            if let Some(dims) = c.detail.as_ref().map(|d| &d["dimensions"]) {
                println!("     dimensions {dims}");
            }
        }
        if let Some(w) = &c.witness {
            println!("     witness {w}");
        }
    }
    let failed = cert.failures().count();
    println!(
        "{}: {} checks, {} failed, {} ms",
        cert.pipeline,
        cert.checks.len(),
        failed,
        cert.environment.wall_time_ms
    );
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
