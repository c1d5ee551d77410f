use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use markereval::cli::{self, ComparisonConfig};
use markereval::io::UnmatchedPolicy;
use markereval::{OutputFormat, RegionKind};

#[derive(Parser)]
#[command(name = "markereval", version, about = "Compare two scoring models with weak-signal markers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run Top-K / Bottom-K / Movers tests on a score file and a marker file.
    Compare {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        markers: PathBuf,
        /// Region sizes, comma-separated.
        #[arg(long = "k", value_delimiter = ',', required = true)]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "top,bottom,movers")]
        tests: Vec<RegionKind>,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
        #[arg(long, default_value = "strict")]
        unmatched: UnmatchedPolicy,
        #[arg(long, default_value = "table")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an (alpha, beta) simulation sweep from a key=value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Majority-voting accuracy and coverage calculators.
    Voting {
        #[command(subcommand)]
        sub: VotingCommand,
    },
}

#[derive(Subcommand)]
enum VotingCommand {
    /// Majority accuracy of k markers with accuracy alpha, or of markers
    /// with the listed accuracies.
    Accuracy {
        #[arg(long, requires = "alpha", conflicts_with = "alphas")]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
    },
    /// Probability that at least one marker votes.
    Coverage {
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<f64>,
    },
    /// Majority accuracy over a grid of marker counts and accuracies.
    Curves {
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
    },
    /// Accuracy gained by adding one marker to a base set.
    Marginal {
        #[arg(long, value_delimiter = ',', required = true)]
        base: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
    },
}

fn run(cli: Cli) -> markereval::Result<()> {
    match cli.command {
        Command::Compare {
            scores,
            markers,
            ks,
            tests,
            level,
            unmatched,
            format,
            out,
        } => {
            let config = ComparisonConfig {
                kinds: tests,
                level,
                unmatched_policy: unmatched,
                output_format: format,
                ..ComparisonConfig::new(scores, markers, ks)
            };
            let report = cli::cmd_compare(&config)?;
            if report.dropped_marker_rows > 0 {
                eprintln!(
                    "warning: dropped {} marker rows for unscored samples",
                    report.dropped_marker_rows
                );
            }
            cli::emit(&report.render(config.output_format), out.as_deref())
        }
        Command::Simulate { config, out } => {
            let csv = cli::cmd_simulate(&config, |done, total| {
                eprintln!("cell {done}/{total}");
            })?;
            cli::emit(&csv, out.as_deref())
        }
        Command::Voting { sub } => {
            let text = match sub {
                VotingCommand::Accuracy { k, alpha, alphas } => match (k, alpha, alphas) {
                    (_, _, Some(alphas)) => cli::voting_accuracy_hetero(&alphas)?,
                    (k, Some(alpha), None) => cli::voting_accuracy(k.unwrap_or(1), alpha)?,
                    _ => {
                        return Err(markereval::Error::Domain(
                            "voting accuracy needs --alpha (with --k) or --alphas".into(),
                        ))
                    }
                },
                VotingCommand::Coverage { betas } => cli::voting_coverage(&betas)?,
                VotingCommand::Curves { ks, alphas } => cli::voting_curves(&ks, &alphas)?,
                VotingCommand::Marginal { base, alphas } => cli::voting_marginal(&base, &alphas)?,
            };
            cli::emit(&text, None)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
