use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context as _;
use oncograph::cohort::{
    self, coexistence_to_tsv, coexisting_mutation_sets, combined_frequency_tsv, feature_profiles, frequency_table,
    group_by_threshold, groups_to_tsv, mutation_profiles, select_patients, survival_partition, CohortError,
    FrequencyMode, GroupingMode, Metric, PopulationFilter, SurvivalBand, SurvivalThresholds,
};
use oncograph::hitting_set::{build_instance, solve_min_cardinality, solve_min_weight, HittingSetError};
use oncograph::ingest::{
    build_graph, parse_clinical_table, parse_drug_target_table, parse_gda_table, parse_mutation_table,
    parse_treatment_table, BuildOptions, Dataset, IngestError, Severity,
};
use oncograph::knowledge::{check_all, check_consistency, checks_to_tsv, default_gda_threshold, CheckError};
use oncograph::rational::parse_decimal;
use oncograph::{Build, Granularity, HittingSetInstance, KnowledgeGraph, Rational};

use crate::config::RunConfig;
use crate::failure::Failure;
use crate::{Inputs, Population};

const DEFAULT_TOP_N: usize = 10;

/// Resolved inputs and settings for one invocation.
pub struct Context {
    config: RunConfig,
    out_dir: Option<PathBuf>,
    options: BuildOptions,
}

impl Context {
    pub fn new(inputs: &Inputs) -> Result<Self, Failure> {
        let mut config = match &inputs.config {
            Some(path) => RunConfig::load(path).map_err(|e| Failure::io(anyhow::anyhow!(e)))?,
            None => RunConfig::default(),
        };
        let overrides = [
            (&inputs.data_dir, &mut config.data_dir),
            (&inputs.mutations, &mut config.mutations),
            (&inputs.clinical, &mut config.clinical),
            (&inputs.gda, &mut config.gda),
            (&inputs.drugs, &mut config.drugs),
            (&inputs.treatments, &mut config.treatments),
            (&inputs.out_dir, &mut config.out_dir),
        ];
        for (flag, slot) in overrides {
            if let Some(p) = flag {
                *slot = Some(p.clone());
            }
        }
        let expand = !inputs.no_gene_expansion && config.expand_gene_associations.unwrap_or(true);
        Ok(Context {
            out_dir: config.out_dir.clone(),
            options: BuildOptions {
                expand_gene_associations: expand,
            },
            config,
        })
    }

    /// Explicit path, else `<data_dir>/<file>` when that exists.
    fn table_path(&self, explicit: &Option<PathBuf>, file: &str, required: bool) -> Result<Option<PathBuf>, Failure> {
        if let Some(p) = explicit {
            return Ok(Some(p.clone()));
        }
        match &self.config.data_dir {
            Some(dir) => {
                let p = dir.join(file);
                Ok((required || p.exists()).then_some(p))
            }
            None if required => Err(Failure::usage(format!(
                "no {file} given: pass --data-dir or the table path"
            ))),
            None => Ok(None),
        }
    }

    fn load(&self) -> Result<Build, Failure> {
        let c = &self.config;
        let cols = &c.columns;
        let mutations = self.table_path(&c.mutations, "mutations.tsv", true)?;
        let clinical = self.table_path(&c.clinical, "clinical.tsv", true)?;
        let gda = self.table_path(&c.gda, "gda.tsv", false)?;
        let drugs = self.table_path(&c.drugs, "drugs.tsv", false)?;
        let treatments = self.table_path(&c.treatments, "treatments.tsv", false)?;

        let dataset = Dataset {
            mutations: read_table(mutations, |f| parse_mutation_table(f, &cols.mutations.schema()))?,
            clinical: read_table(clinical, |f| parse_clinical_table(f, &cols.clinical.schema()))?,
            gda: read_table(gda, |f| parse_gda_table(f, &cols.gda.schema()))?,
            drugs: read_table(drugs, |f| parse_drug_target_table(f, &cols.drugs.schema()))?,
            treatments: read_table(treatments, |f| parse_treatment_table(f, &cols.treatments.schema()))?,
        };
        Ok(build_graph(&dataset, &self.options))
    }

    fn graph(&self) -> Result<KnowledgeGraph, Failure> {
        Ok(self.load()?.graph)
    }

    /// Prints `content` and, with an output directory, writes it to `name`.
    fn emit(&self, name: &str, content: &str) -> Result<(), Failure> {
        print!("{content}");
        if let Some(dir) = &self.out_dir {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("cannot create output directory {}", dir.display()))
                .map_err(Failure::io)?;
            let path = dir.join(name);
            std::fs::write(&path, content)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(Failure::io)?;
        }
        Ok(())
    }

    fn granularity(&self, flag: Option<&str>, default: Granularity) -> Result<Granularity, Failure> {
        match flag.or(self.config.granularity.as_deref()) {
            Some(s) => Granularity::from_str(s).map_err(Failure::usage),
            None => Ok(default),
        }
    }

    fn thresholds(&self, t_long: Option<u32>, t_short: Option<u32>) -> Result<SurvivalThresholds, Failure> {
        let d = SurvivalThresholds::default();
        SurvivalThresholds::new(
            t_long.or(self.config.t_long).unwrap_or(d.long),
            t_short.or(self.config.t_short).unwrap_or(d.short),
        )
        .map_err(Failure::usage)
    }

    fn population(&self, p: &Population) -> Result<PopulationFilter, Failure> {
        let band = p
            .band
            .as_deref()
            .map(SurvivalBand::from_str)
            .transpose()
            .map_err(Failure::usage)?;
        Ok(PopulationFilter {
            disease: p.disease.clone(),
            band,
            thresholds: self.thresholds(p.t_long, p.t_short)?,
        })
    }
}

fn read_table<T>(
    path: Option<PathBuf>,
    parse: impl FnOnce(File) -> Result<T, IngestError>,
) -> Result<Option<T>, Failure> {
    let Some(path) = path else {
        return Ok(None);
    };
    let file = File::open(&path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(Failure::io)?;
    parse(file)
        .with_context(|| format!("cannot parse {}", path.display()))
        .map(Some)
        .map_err(Failure::io)
}

fn exact(text: Option<&str>, what: &str) -> Result<Option<Rational>, Failure> {
    text.map(|t| parse_decimal(t).map_err(|e| Failure::usage(format!("{what}: {e}"))))
        .transpose()
}

fn configured(value: &Option<crate::config::Number>, what: &str) -> Result<Option<Rational>, Failure> {
    value
        .as_ref()
        .map(|n| n.to_rational().map_err(|e| Failure::usage(format!("{what}: {e}"))))
        .transpose()
}

fn cohort_failure(e: CohortError) -> Failure {
    match e {
        CohortError::InvalidThresholds { .. } | CohortError::InvalidPercent(_) => Failure::usage(e),
        _ => Failure::domain(e),
    }
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::InvalidThreshold(_) => Failure::usage(e),
        CheckError::UnknownDisease(_) => Failure::domain(e),
    }
}

pub fn build(ctx: &Context) -> Result<(), Failure> {
    let Build { graph, report } = ctx.load()?;
    let sizes = graph.partition_sizes();
    let edges = graph.edge_counts();
    let violations = graph.validate();
    let rows: [(&str, &str, usize); 11] = [
        ("partition", "Pa", sizes.patients),
        ("partition", "Mu", sizes.mutations),
        ("partition", "Di", sizes.diseases),
        ("partition", "Dr", sizes.drugs),
        ("edges", "green", edges.green),
        ("edges", "red", edges.red),
        ("edges", "magenta", edges.magenta),
        ("report", "error", report.count(Severity::Error)),
        ("report", "warning", report.count(Severity::Warning)),
        ("report", "info", report.count(Severity::Info)),
        ("validation", "violations", violations.len()),
    ];
    let mut summary = String::from("section\tname\tcount\n");
    for (section, name, count) in rows {
        summary.push_str(&format!("{section}\t{name}\t{count}\n"));
    }
    ctx.emit("build_summary.tsv", &summary)?;
    match &ctx.out_dir {
        Some(dir) => {
            let path = dir.join("build_report.tsv");
            std::fs::write(&path, report.to_tsv())
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(Failure::io)?;
        }
        None => eprint!("{}", report.to_tsv()),
    }
    if !violations.is_empty() {
        return Err(Failure::domain(anyhow::anyhow!(
            "graph validation found {} violation(s)",
            violations.len()
        )));
    }
    Ok(())
}

pub fn check(
    ctx: &Context,
    disease: Option<&str>,
    threshold: Option<&str>,
    granularity: Option<&str>,
) -> Result<(), Failure> {
    let threshold = match exact(threshold, "--gda-threshold")? {
        Some(t) => t,
        None => configured(&ctx.config.gda_threshold, "gda_threshold")?.unwrap_or_else(default_gda_threshold),
    };
    let granularity = ctx.granularity(granularity, Granularity::Gene)?;
    let graph = ctx.graph()?;
    let checks = match disease {
        Some(d) => vec![check_consistency(&graph, d, threshold, granularity).map_err(check_failure)?],
        None => check_all(&graph, threshold, granularity).map_err(check_failure)?,
    };
    ctx.emit("check.tsv", &checks_to_tsv(&checks))
}

pub fn survival(ctx: &Context, t_long: Option<u32>, t_short: Option<u32>) -> Result<(), Failure> {
    let thresholds = ctx.thresholds(t_long, t_short)?;
    let graph = ctx.graph()?;
    let partition = survival_partition(&graph, thresholds).map_err(cohort_failure)?;
    ctx.emit("survival.tsv", &partition.to_tsv(&graph))
}

pub struct GroupArgs<'a> {
    pub k: Option<&'a str>,
    pub metric: Option<&'a str>,
    pub granularity: Option<&'a str>,
    pub cliques: bool,
    pub population: &'a Population,
}

pub fn groups(ctx: &Context, args: GroupArgs<'_>) -> Result<(), Failure> {
    let k = match exact(args.k, "--k")? {
        Some(k) => k,
        None => configured(&ctx.config.group_k, "group_k")?
            .ok_or_else(|| Failure::usage("cohort groups needs --k (or group_k in the config)"))?,
    };
    if k < Rational::from_integer(0) {
        return Err(Failure::usage("--k must be non-negative"));
    }
    let metric = match args.metric.or(ctx.config.metric.as_deref()) {
        Some(m) => Metric::from_str(m).map_err(Failure::usage)?,
        None => Metric::default(),
    };
    let granularity = ctx.granularity(args.granularity, Granularity::Mutation)?;
    let filter = ctx.population(args.population)?;
    let graph = ctx.graph()?;
    let patients = select_patients(&graph, &filter).map_err(cohort_failure)?;
    let profiles = feature_profiles(&mutation_profiles(&graph, &patients), granularity);
    let mode = if args.cliques {
        GroupingMode::Cliques
    } else {
        GroupingMode::Components
    };
    let groups = group_by_threshold(&profiles, metric, k, mode);
    ctx.emit("groups.tsv", &groups_to_tsv(&groups))
}

pub fn comutation(ctx: &Context, genes: &[String], top_n: Option<usize>, population: &Population) -> Result<(), Failure> {
    let [a, b] = genes else {
        return Err(Failure::usage("--genes takes exactly two genes, e.g. EGFR,KRAS"));
    };
    let top_n = top_n.or(ctx.config.top_n).unwrap_or(DEFAULT_TOP_N);
    let filter = ctx.population(population)?;
    let graph = ctx.graph()?;
    let patients = select_patients(&graph, &filter).map_err(cohort_failure)?;
    let table = cohort::co_mutation_survival_table(&graph, &patients, (a, b), Some(top_n)).map_err(cohort_failure)?;
    ctx.emit("comutation.tsv", &table.to_tsv())
}

pub fn freq(
    ctx: &Context,
    mode: Option<&str>,
    top_n: Option<usize>,
    all: bool,
    population: &Population,
) -> Result<(), Failure> {
    let combined = mode == Some("combined");
    let mode = match mode {
        Some(m) if !combined => FrequencyMode::from_str(m).map_err(Failure::usage)?,
        _ => FrequencyMode::Mutation,
    };
    let top_n = (!all).then(|| top_n.or(ctx.config.top_n).unwrap_or(DEFAULT_TOP_N));
    let filter = ctx.population(population)?;
    let label = filter.describe();
    let graph = ctx.graph()?;
    let patients = select_patients(&graph, &filter).map_err(cohort_failure)?;
    let profiles = mutation_profiles(&graph, &patients);
    if combined {
        let tsv = combined_frequency_tsv(&profiles, mode, top_n, &label).map_err(cohort_failure)?;
        ctx.emit("freq_combined.tsv", &tsv)
    } else {
        let table = frequency_table(&profiles, mode, top_n, &label).map_err(cohort_failure)?;
        ctx.emit(&format!("freq_{}.tsv", mode.name()), &table.to_tsv())
    }
}

pub fn coexist(
    ctx: &Context,
    k: Option<&str>,
    granularity: Option<&str>,
    population: &Population,
) -> Result<(), Failure> {
    let k = match exact(k, "--k")? {
        Some(k) => k,
        None => configured(&ctx.config.coexist_k, "coexist_k")?
            .ok_or_else(|| Failure::usage("coexist needs --k (or coexist_k in the config)"))?,
    };
    let granularity = ctx.granularity(granularity, Granularity::Mutation)?;
    let filter = ctx.population(population)?;
    let graph = ctx.graph()?;
    let patients = select_patients(&graph, &filter).map_err(cohort_failure)?;
    let profiles = feature_profiles(&mutation_profiles(&graph, &patients), granularity);
    let sets = coexisting_mutation_sets(&profiles, k).map_err(cohort_failure)?;
    ctx.emit("coexist.tsv", &coexistence_to_tsv(&sets))
}

pub fn treat(
    ctx: &Context,
    patient: Option<&str>,
    targets: &[String],
    instance_path: Option<&Path>,
    weighted: bool,
) -> Result<(), Failure> {
    let instance = match (instance_path, patient) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))
                .map_err(Failure::io)?;
            HittingSetInstance::parse(&text)
                .with_context(|| format!("cannot parse {}", path.display()))
                .map_err(Failure::io)?
        }
        (None, Some(patient)) => {
            let graph = ctx.graph()?;
            build_instance(&graph, patient, targets).map_err(|e| match e {
                HittingSetError::Parse { .. } => Failure::io(e),
                _ => Failure::domain(e),
            })?
        }
        (None, None) => return Err(Failure::usage("treat needs --patient and --targets, or --instance")),
    };
    let solution = if weighted {
        solve_min_weight(&instance)
    } else {
        solve_min_cardinality(&instance)
    };
    ctx.emit("treat.tsv", &solution.to_tsv(&instance))
}
