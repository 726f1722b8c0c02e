use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use levy_compress::exponents::{
    admissibility_condition, theoretical_kappa, KappaPrediction, KappaValue, LevyExponent,
};
use levy_compress::harness::{
    compare_families, emit_outputs, run_experiment, selftest, ExperimentConfig, OutputFormats, Verdict,
};
use levy_compress::Result;

#[derive(Parser)]
#[command(name = "levy-compress", version, about = "Compressibility experiments for sparse stochastic processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write curves.csv, summary.json and plot.dat.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several experiments and check that measured rates follow the predicted order.
    Compare {
        #[arg(required = true, num_args = 2..)]
        configs: Vec<PathBuf>,
    },
    /// Quick internal consistency checks.
    Selftest,
    /// Print the predicted compressibility exponent.
    Predict {
        /// Noise, e.g. `gaussian`, `sas:alpha=1.5`, `compound-poisson:rate=2`.
        family: LevyExponent,
        gamma: f64,
        d: usize,
        #[arg(default_value_t = 2.0)]
        p0: f64,
        #[arg(default_value_t = 0.0)]
        tau0: f64,
    },
}

fn num(v: f64) -> String {
    let text = format!("{v:.6}");
    text.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn describe(prediction: &KappaPrediction) -> String {
    match prediction.value {
        Some(KappaValue::Exact(v)) => num(v),
        Some(KappaValue::Bounds { lower, upper }) if lower == upper => num(lower),
        Some(KappaValue::Bounds { lower, upper }) => format!("[{}, {}]", num(lower), num(upper)),
        Some(KappaValue::Infinite) => "inf".into(),
        None => "none".into(),
    }
}

fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Run { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            let report = run_experiment(&config)?;
            let dir = out.unwrap_or_else(|| config.output.clone());
            emit_outputs(&report, &dir, OutputFormats::default())?;
            println!("noise       {}", config.noise);
            println!("predicted   {}", describe(&report.prediction));
            println!(
                "measured    {:.4} (IQR {:.4} .. {:.4}, {} trials)",
                report.kappa_median, report.kappa_iqr.0, report.kappa_iqr.1, config.trials
            );
            println!("verdict     {}: {}", report.verdict.as_str(), report.verdict_note);
            println!("output      {}", dir.display());
            Ok(report.verdict != Verdict::Fail)
        }
        Command::Compare { configs } => {
            let configs = configs
                .iter()
                .map(|p| ExperimentConfig::load(p))
                .collect::<Result<Vec<_>>>()?;
            let (_, comparison) = compare_families(&configs)?;
            println!("{:<52} {:>10} {:>10}", "noise", "predicted", "measured");
            for e in &comparison.entries {
                println!("{:<52} {:>10} {:>10.4}", e.label, describe(&e.prediction), e.kappa_median);
            }
            for (a, b) in &comparison.inversions {
                println!("inversion: {a} is predicted below {b} but does not measure below it");
            }
            println!(
                "ordering    {}",
                if comparison.is_consistent() { "consistent" } else { "inconsistent" }
            );
            Ok(comparison.is_consistent())
        }
        Command::Selftest => {
            let mut ok = true;
            for check in selftest::run_selftest() {
                println!("{} {}: {}", if check.passed { "ok  " } else { "FAIL" }, check.name, check.detail);
                ok &= check.passed;
            }
            Ok(ok)
        }
        Command::Predict { family, gamma, d, p0, tau0 } => {
            let prediction = theoretical_kappa(&family, gamma, d, p0, tau0)?;
            let (holds, condition) = admissibility_condition(&family, gamma, d, p0, tau0);
            let bg = family.bg_indices();
            println!("noise       {family}");
            println!("indices     beta = {}, beta' = {}", bg.beta, bg.beta_prime);
            println!("condition   {condition}: {}", if holds { "holds" } else { "fails" });
            println!("kappa       {}", describe(&prediction));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
