mod pipeline;
mod record;
mod stats_cmd;
mod verify_cmd;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use record::{ComputeConfig, SelmerMode};
use std::path::PathBuf;
use torsion28::family::enumerate_parameters;

/// Exact invariants and statistics for the family of rational elliptic
/// curves with torsion Z/2 x Z/8.
#[derive(Parser)]
#[command(name = "t28", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the canonical parameters a/b with b <= max-height.
    Enumerate {
        #[arg(long)]
        max_height: u64,
    },
    /// Compute the per-curve dataset as JSONL (resumable).
    Compute {
        /// Output dataset path.
        #[arg(long)]
        out: PathBuf,
        /// Compute all heights up to this bound (same as --from 2 --to N).
        #[arg(long)]
        max_height: Option<u64>,
        #[arg(long, default_value_t = 2)]
        from: u64,
        #[arg(long)]
        to: Option<u64>,
        /// Worker threads (0 = default).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Descent work per curve: off | isogeny | full.
        #[arg(long, default_value = "isogeny")]
        selmer: SelmerMode,
        /// Point-search effort for rank lower bounds.
        #[arg(long, default_value_t = 576)]
        point_search_bound: u64,
        /// Record the infinite-place convention in the manifest.
        #[arg(long, default_value_t = false)]
        include_infinite_place: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Aggregate a dataset into CSV tables and series.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
        /// Height cutoffs, e.g. 99,249,499,999.
        #[arg(long, value_delimiter = ',')]
        cutoffs: Vec<u64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run the invariant suites; exits nonzero on the first failure.
    Verify {
        #[arg(long, default_value_t = 49)]
        max_height: u64,
        #[arg(long, default_value_t = 49)]
        descent_height: u64,
        #[arg(long, default_value_t = 2000)]
        oracle_bound: u64,
        #[arg(long, default_value_t = 199)]
        density_height: u64,
    },
    /// Draw from the prime-indexed divisor model and report moments.
    Simulate {
        /// Sum over odd primes up to this cutoff.
        #[arg(long)]
        prime_cutoff: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enumerate { max_height } => {
            if max_height < 2 {
                bail!("max-height must be at least 2");
            }
            let mut out = String::new();
            for p in enumerate_parameters(max_height) {
                out.push_str(&format!("{}/{}\n", p.a(), p.b()));
            }
            print!("{out}");
            Ok(())
        }
        Command::Compute {
            out,
            max_height,
            from,
            to,
            threads,
            selmer,
            point_search_bound,
            include_infinite_place,
            seed,
        } => {
            let (from, to) = match (max_height, to) {
                (Some(n), None) => (2, n),
                (None, Some(t)) => (from, t),
                (None, None) => bail!("one of --max-height or --to is required"),
                (Some(_), Some(_)) => bail!("--max-height and --to are mutually exclusive"),
            };
            let cfg = ComputeConfig {
                selmer,
                point_search_bound,
            };
            let (written, manifest) = pipeline::run_compute(
                &out,
                from,
                to,
                &cfg,
                include_infinite_place,
                seed,
                threads,
            )?;
            let total: u64 = manifest.shards.values().map(|s| s.count).sum();
            eprintln!(
                "wrote {written} new records ({total} total) to {}",
                out.display()
            );
            Ok(())
        }
        Command::Stats {
            dataset,
            cutoffs,
            out_dir,
        } => {
            if cutoffs.is_empty() {
                bail!("at least one cutoff is required");
            }
            let records = pipeline::read_dataset(&dataset)?;
            let files = stats_cmd::run_stats(&records, &cutoffs, &out_dir)?;
            for f in files {
                eprintln!("wrote {}", out_dir.join(f).display());
            }
            Ok(())
        }
        Command::Verify {
            max_height,
            descent_height,
            oracle_bound,
            density_height,
        } => verify_cmd::run_verify(&verify_cmd::VerifyBounds {
            curve_height: max_height,
            descent_height,
            oracle_bound,
            density_height,
        }),
        Command::Simulate {
            prime_cutoff,
            trials,
            seed,
            out,
        } => {
            if trials < 1 {
                bail!("trials must be positive");
            }
            if prime_cutoff < 16 {
                bail!("prime-cutoff must be at least 16");
            }
            let samples = torsion28::stats::simulate_model(prime_cutoff, trials, seed);
            let m = torsion28::stats::analytic_moments(prime_cutoff);
            let mut csv = String::from("trial,x,y,t\n");
            for (i, s) in samples.iter().enumerate() {
                csv.push_str(&format!("{},{},{},{}\n", i, s.x, s.y, s.t_value()));
            }
            let mean_x: f64 =
                samples.iter().map(|s| s.x as f64).sum::<f64>() / trials as f64;
            let mean_y: f64 =
                samples.iter().map(|s| s.y as f64).sum::<f64>() / trials as f64;
            let mean_t: f64 =
                samples.iter().map(|s| s.t_value() as f64).sum::<f64>() / trials as f64;
            csv.push_str(&format!(
                "# mean_x,{mean_x:.6},analytic,{:.6}\n# mean_y,{mean_y:.6},analytic,{:.6}\n# mean_t,{mean_t:.6},analytic,{:.6}\n",
                m.mean_x,
                m.mean_y,
                m.mean_x - m.mean_y
            ));
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}

