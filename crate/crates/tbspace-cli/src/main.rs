//! tbspace: batch experiment runner for the translation-based cipher
//! workbench. Subcommands: verify, distinguish, rank-dist, export-matrix.
//!
//! Exit codes: 0 = all checks pass, 1 = a verification or distinguisher
//! run failed its assertion, 2 = usage / configuration error.

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use std::path::PathBuf;
use std::process::ExitCode;
use tbspace::ciphers::TbCipherSpec;
use tbspace::embed::EmbeddingParams;
use tbspace::experiment::{
    embedding_for, read_matrix, run_distinguisher, run_verifications, write_matrix,
    ExperimentConfig,
};
use tbspace::rankstats::{migler_distribution, monte_carlo_ranks, AdmissibleRankModel,
    AdmissibleSampler, UniformSampler};

#[derive(Parser)]
#[command(name = "tbspace", version, about = "rank-statistics workbench for translation-based ciphers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a claim-verification suite and print pass/fail per claim
    Verify {
        /// dims | orders | counterexamples | rankstats | extend | bounds | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// include multi-minute checks (the full AES orbit dimension)
        #[arg(long)]
        long: bool,
    },
    /// Run the rank distinguisher described by a config file
    Distinguish {
        /// path to a flat key = value config file (seed is mandatory)
        #[arg(long)]
        config: PathBuf,
        /// overrides in key=value form, applied after the file
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Print a formula-vs-Monte-Carlo rank distribution table
    RankDist {
        /// cipher whose embedding defines the admissible rows
        #[arg(long, default_value = "reduced-m2b2r3")]
        cipher: String,
        /// eps | alpha
        #[arg(long, default_value = "eps")]
        embedding: String,
        /// rows per sampled matrix
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write the embedding matrix H (rows alpha(v) over sampled states) in
    /// the packed binary format, or inspect an existing file
    ExportMatrix {
        #[arg(long, default_value = "reduced-m2b2r3")]
        cipher: String,
        #[arg(long, default_value = "eps")]
        embedding: String,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// output path; with --inspect, the file to read instead
        #[arg(long)]
        path: PathBuf,
        /// read the file back and print its shape
        #[arg(long)]
        inspect: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Verify { suite, long } => {
            let report = run_verifications(&suite, long).map_err(|e| e.to_string())?;
            print!("{}", report.to_text());
            Ok(report.all_pass())
        }
        Command::Distinguish { config, overrides } => {
            let mut cfg = ExperimentConfig::from_file(&config).map_err(|e| e.to_string())?;
            for ov in &overrides {
                let (k, v) = ov
                    .split_once('=')
                    .ok_or_else(|| format!("override must be key=value: {ov}"))?;
                cfg.set(k.trim(), v.trim()).map_err(|e| e.to_string())?;
            }
            cfg.validate().map_err(|e| e.to_string())?;
            let report = run_distinguisher(&cfg).map_err(|e| e.to_string())?;
            print!("{}", report.to_text());
            Ok(true)
        }
        Command::RankDist {
            cipher,
            embedding,
            rows,
            trials,
            seed,
        } => {
            let spec = TbCipherSpec::by_name(&cipher).map_err(|e| e.to_string())?;
            let params = embedding_for(&spec, &embedding).map_err(|e| e.to_string())?;
            print_rank_table(&params, rows, trials, seed);
            Ok(true)
        }
        Command::ExportMatrix {
            cipher,
            embedding,
            rows,
            seed,
            path,
            inspect,
        } => {
            if inspect {
                let m = read_matrix(&path).map_err(|e| e.to_string())?;
                println!("rows: {}", m.rows());
                println!("cols: {}", m.cols());
                println!("rank: {}", m.rank());
            } else {
                let spec = TbCipherSpec::by_name(&cipher).map_err(|e| e.to_string())?;
                let params = embedding_for(&spec, &embedding).map_err(|e| e.to_string())?;
                let sampler = AdmissibleSampler { params, rows };
                let matrix = monte_carlo_sample(&sampler, seed);
                write_matrix(&path, &matrix).map_err(|e| e.to_string())?;
                println!(
                    "wrote {} ({} x {})",
                    path.display(),
                    matrix.rows(),
                    matrix.cols()
                );
            }
            Ok(true)
        }
    }
}

fn monte_carlo_sample(
    sampler: &AdmissibleSampler,
    seed: u64,
) -> tbspace::algebra::BitMatrix {
    use rand::SeedableRng;
    use tbspace::rankstats::MatrixSampler;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    sampler.sample(&mut rng)
}

fn print_rank_table(params: &EmbeddingParams, rows: usize, trials: u64, seed: u64) {
    println!(
        "# admissible rows: m={} b={} t={} cols={}",
        params.m(),
        params.b(),
        params.t(),
        params.s()
    );
    let sampler = AdmissibleSampler {
        params: params.clone(),
        rows,
    };
    let observed = monte_carlo_ranks(&sampler, trials, seed);
    let model = AdmissibleRankModel::new(params.m() as u32, params.b() as u32);
    let expected = model.rho_distribution(rows).ok();
    println!("rank  observed  mc_prop   rho_estimate");
    for (r, count) in &observed.bins {
        let prop = *count as f64 / trials as f64;
        let est = expected
            .as_ref()
            .and_then(|d| d.iter().find(|(k, _)| k == r))
            .and_then(|(_, p)| p.to_f64())
            .map(|p| format!("{p:.6}"))
            .unwrap_or_else(|| "-".into());
        println!("{r:>4}  {count:>8}  {prop:.6}  {est}");
    }
    // the uniform-bits reference, exact via the counting theorem
    let uniform = UniformSampler {
        rows,
        cols: rows + 4,
    };
    let uh = monte_carlo_ranks(&uniform, trials, seed ^ 1);
    println!("# uniform {}x{} reference (exact vs mc):", rows, rows + 4);
    for (r, p) in migler_distribution(rows as u64, rows as u64 + 4, 2) {
        let mc = uh.bins.get(&r).copied().unwrap_or(0) as f64 / trials as f64;
        if let Some(pf) = p.to_f64() {
            if pf > 1e-6 {
                println!("{r:>4}  exact {pf:.6}  mc {mc:.6}");
            }
        }
    }
}
