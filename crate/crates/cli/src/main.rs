mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "oncograph", version, about = "Build and query a patient/mutation/disease/drug knowledge graph")]
struct Cli {
    #[command(flatten)]
    inputs: Inputs,

    #[command(subcommand)]
    command: Command,
}

/// Where the tables come from and where outputs go.
#[derive(Debug, Args)]
pub struct Inputs {
    /// TOML run configuration
    #[arg(long, global = true, env = config::CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Directory with mutations.tsv, clinical.tsv, gda.tsv, drugs.tsv [, treatments.tsv]
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub mutations: Option<PathBuf>,
    #[arg(long, global = true)]
    pub clinical: Option<PathBuf>,
    #[arg(long, global = true)]
    pub gda: Option<PathBuf>,
    #[arg(long, global = true)]
    pub drugs: Option<PathBuf>,
    #[arg(long, global = true)]
    pub treatments: Option<PathBuf>,
    /// Also write every output table (and the build report) into this directory
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Match association and target rows to exact mutation ids instead of genes
    #[arg(long, global = true)]
    pub no_gene_expansion: bool,
}

#[derive(Debug, Args, Default)]
pub struct Population {
    /// Restrict to patients diagnosed with this disease
    #[arg(long)]
    pub disease: Option<String>,
    /// Restrict to a survival band: long, short or rest
    #[arg(long)]
    pub band: Option<String>,
    #[arg(long)]
    pub t_long: Option<u32>,
    #[arg(long)]
    pub t_short: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and validate the graph; print partition sizes and edge counts
    Build,
    /// Compare known associations with the mutations observed per disease
    Check {
        #[arg(long)]
        disease: Option<String>,
        /// Minimum association score counted as knowledge (default 0.8)
        #[arg(long)]
        gda_threshold: Option<String>,
        /// mutation or gene (default gene)
        #[arg(long)]
        granularity: Option<String>,
    },
    /// Patient cohorts
    Cohort {
        #[command(subcommand)]
        action: CohortAction,
    },
    /// Mutation and gene frequency table
    Freq {
        /// mutation, mutation_patients, gene_with_multiplicity,
        /// gene_without_multiplicity or combined (default mutation)
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        top_n: Option<usize>,
        /// Print every row
        #[arg(long, conflicts_with = "top_n")]
        all: bool,
        #[command(flatten)]
        population: Population,
    },
    /// Maximal sets of mutations carried together by at least k% of patients
    Coexist {
        #[arg(long)]
        k: Option<String>,
        /// mutation or gene (default mutation)
        #[arg(long)]
        granularity: Option<String>,
        #[command(flatten)]
        population: Population,
    },
    /// Minimum (weight) drug set covering target mutations
    Treat {
        #[arg(long, required_unless_present = "instance", requires = "targets")]
        patient: Option<String>,
        /// Comma-separated mutation ids (GENE_CHROM_START_END)
        #[arg(long, value_delimiter = ',')]
        targets: Vec<String>,
        /// Solve a hitting-set instance file instead of a patient query
        #[arg(long, conflicts_with = "patient")]
        instance: Option<PathBuf>,
        /// Minimise total drug weight instead of the number of drugs
        #[arg(long)]
        weighted: bool,
    },
}

#[derive(Debug, Subcommand)]
enum CohortAction {
    /// Long survivors, short-survival deceased, rest
    Survival {
        #[arg(long)]
        t_long: Option<u32>,
        #[arg(long)]
        t_short: Option<u32>,
    },
    /// Groups of patients with profiles within distance k
    Groups {
        #[arg(long)]
        k: Option<String>,
        /// hamming or jaccard (default hamming)
        #[arg(long)]
        metric: Option<String>,
        /// mutation or gene (default mutation)
        #[arg(long)]
        granularity: Option<String>,
        /// Report maximal cliques instead of connected components
        #[arg(long)]
        cliques: bool,
        #[command(flatten)]
        population: Population,
    },
    /// Gene frequencies and survival among patients with both genes mutated
    Comutation {
        /// Two genes, comma-separated
        #[arg(long, value_delimiter = ',', num_args = 1)]
        genes: Vec<String>,
        #[arg(long)]
        top_n: Option<usize>,
        #[command(flatten)]
        population: Population,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = commands::Context::new(&cli.inputs)?;
    match cli.command {
        Command::Build => commands::build(&ctx),
        Command::Check {
            disease,
            gda_threshold,
            granularity,
        } => commands::check(&ctx, disease.as_deref(), gda_threshold.as_deref(), granularity.as_deref()),
        Command::Cohort { action } => match action {
            CohortAction::Survival { t_long, t_short } => commands::survival(&ctx, t_long, t_short),
            CohortAction::Groups {
                k,
                metric,
                granularity,
                cliques,
                population,
            } => commands::groups(
                &ctx,
                commands::GroupArgs {
                    k: k.as_deref(),
                    metric: metric.as_deref(),
                    granularity: granularity.as_deref(),
                    cliques,
                    population: &population,
                },
            ),
            CohortAction::Comutation {
                genes,
                top_n,
                population,
            } => commands::comutation(&ctx, &genes, top_n, &population),
        },
        Command::Freq {
            mode,
            top_n,
            all,
            population,
        } => commands::freq(&ctx, mode.as_deref(), top_n, all, &population),
        Command::Coexist {
            k,
            granularity,
            population,
        } => commands::coexist(&ctx, k.as_deref(), granularity.as_deref(), &population),
        Command::Treat {
            patient,
            targets,
            instance,
            weighted,
        } => commands::treat(&ctx, patient.as_deref(), &targets, instance.as_deref(), weighted),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on usage errors; the contract reserves 2 for I/O.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(failure::USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
