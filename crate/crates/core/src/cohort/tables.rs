//! Frequency tables and co-mutation survival tables.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use super::{mutation_profiles, CohortError, MutationProfile};
use crate::graph::{KnowledgeGraph, NodeRef};
use crate::rational::{format_percent, percent, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FrequencyMode {
    /// Occurrences of a mutation over all mutation occurrences.
    #[default]
    Mutation,
    /// Patients carrying a mutation over all patients.
    MutationPatients,
    /// Mutation occurrences on a gene over all mutation occurrences.
    GeneWithMultiplicity,
    /// Patients with at least one mutation on a gene over all patients.
    GeneWithoutMultiplicity,
}

impl FrequencyMode {
    pub const ALL: [FrequencyMode; 4] = [
        FrequencyMode::Mutation,
        FrequencyMode::MutationPatients,
        FrequencyMode::GeneWithMultiplicity,
        FrequencyMode::GeneWithoutMultiplicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrequencyMode::Mutation => "mutation",
            FrequencyMode::MutationPatients => "mutation_patients",
            FrequencyMode::GeneWithMultiplicity => "gene_with_multiplicity",
            FrequencyMode::GeneWithoutMultiplicity => "gene_without_multiplicity",
        }
    }
}

impl FromStr for FrequencyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrequencyMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown frequency mode {s:?} (expected mutation, mutation_patients, \
                     gene_with_multiplicity or gene_without_multiplicity)"
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyRow {
    pub item: String,
    pub count: usize,
    pub percent: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub mode: FrequencyMode,
    pub population: String,
    pub patients: usize,
    /// Denominator of every percentage.
    pub denominator: usize,
    /// Every item, sorted by percentage descending then item id.
    pub rows: Vec<FrequencyRow>,
    pub top_n: Option<usize>,
}

impl FrequencyTable {
    /// The rows that are rendered: the first `top_n`, or all.
    pub fn top(&self) -> &[FrequencyRow] {
        let n = self.top_n.unwrap_or(self.rows.len()).min(self.rows.len());
        &self.rows[..n]
    }

    /// `item\tcount\tpercent`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("item\tcount\tpercent\n");
        for row in self.top() {
            out.push_str(&format!("{}\t{}\t{}\n", row.item, row.count, format_percent(&row.percent)));
        }
        out
    }
}

/// Builds the frequency table of one mode. Items with no occurrence never
/// appear. When no patient carries any mutation the table is empty.
pub fn frequency_table(
    profiles: &[MutationProfile],
    mode: FrequencyMode,
    top_n: Option<usize>,
    population: &str,
) -> Result<FrequencyTable, CohortError> {
    if profiles.is_empty() {
        return Err(CohortError::EmptyPopulation(format!("no patients in population {population}")));
    }
    let occurrences: usize = profiles.iter().map(|p| p.mutations.len()).sum();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for p in profiles {
        match mode {
            FrequencyMode::Mutation | FrequencyMode::MutationPatients => {
                for m in &p.mutations {
                    *counts.entry(m.to_string()).or_default() += 1;
                }
            }
            FrequencyMode::GeneWithMultiplicity => {
                for m in &p.mutations {
                    *counts.entry(m.gene.clone()).or_default() += 1;
                }
            }
            FrequencyMode::GeneWithoutMultiplicity => {
                let genes: BTreeSet<&str> = p.mutations.iter().map(|m| m.downgrade_to_gene()).collect();
                for g in genes {
                    *counts.entry(g.to_string()).or_default() += 1;
                }
            }
        }
    }
    let denominator = match mode {
        FrequencyMode::Mutation | FrequencyMode::GeneWithMultiplicity => occurrences,
        FrequencyMode::MutationPatients | FrequencyMode::GeneWithoutMultiplicity => profiles.len(),
    };
    let mut rows: Vec<FrequencyRow> = counts
        .into_iter()
        .map(|(item, count)| FrequencyRow {
            percent: percent(count, denominator),
            item,
            count,
        })
        .collect();
    rows.sort_by(|a, b| b.percent.cmp(&a.percent).then_with(|| a.item.cmp(&b.item)));
    Ok(FrequencyTable {
        mode,
        population: population.to_string(),
        patients: profiles.len(),
        denominator,
        rows,
        top_n,
    })
}

/// Side-by-side layout: a mutation column (in `mutation_mode`) followed by
/// the two gene modes. Shorter columns are padded with empty cells.
pub fn combined_frequency_tsv(
    profiles: &[MutationProfile],
    mutation_mode: FrequencyMode,
    top_n: Option<usize>,
    population: &str,
) -> Result<String, CohortError> {
    let tables = [
        frequency_table(profiles, mutation_mode, top_n, population)?,
        frequency_table(profiles, FrequencyMode::GeneWithMultiplicity, top_n, population)?,
        frequency_table(profiles, FrequencyMode::GeneWithoutMultiplicity, top_n, population)?,
    ];
    let mut out = String::from("mutation\tmutation_percent\tgene\twith_multiplicity_percent\tgene\twithout_multiplicity_percent\n");
    let height = tables.iter().map(|t| t.top().len()).max().unwrap_or(0);
    for i in 0..height {
        let cells: Vec<String> = tables
            .iter()
            .map(|t| match t.top().get(i) {
                Some(r) => format!("{}\t{}", r.item, format_percent(&r.percent)),
                None => "\t".to_string(),
            })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoMutationRow {
    pub gene: String,
    pub carriers: usize,
    pub living: usize,
    pub percent_patients: Rational,
    pub percent_living: Rational,
    pub percent_deceased: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoMutationTable {
    pub pair: (String, String),
    /// Patients carrying both genes.
    pub cohort: Vec<String>,
    pub rows: Vec<CoMutationRow>,
}

impl CoMutationTable {
    /// `gene\tpercent_patients\tpercent_living\tpercent_deceased`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("gene\tpercent_patients\tpercent_living\tpercent_deceased\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.gene,
                format_percent(&r.percent_patients),
                format_percent(&r.percent_living),
                format_percent(&r.percent_deceased)
            ));
        }
        out
    }
}

/// Gene frequencies and survival shares among the patients of `population`
/// that carry at least one mutation on each gene of `pair`. The pair genes
/// themselves appear as rows (at 100%).
pub fn co_mutation_survival_table(
    graph: &KnowledgeGraph,
    population: &[NodeRef],
    pair: (&str, &str),
    top_n: Option<usize>,
) -> Result<CoMutationTable, CohortError> {
    for gene in [pair.0, pair.1] {
        if !graph.mutations().any(|(_, m)| m.gene == gene) {
            return Err(CohortError::UnknownGene(gene.to_string()));
        }
    }
    let profiles = mutation_profiles(graph, population);
    let cohort: Vec<(&MutationProfile, BTreeSet<&str>)> = profiles
        .iter()
        .map(|p| (p, p.mutations.iter().map(|m| m.downgrade_to_gene()).collect::<BTreeSet<_>>()))
        .filter(|(_, genes)| genes.contains(pair.0) && genes.contains(pair.1))
        .collect();
    if cohort.is_empty() {
        return Err(CohortError::EmptyPopulation(format!(
            "no patient has both {} and {} mutated",
            pair.0, pair.1
        )));
    }
    let alive: BTreeMap<&str, bool> = graph
        .patients()
        .map(|(_, r)| (r.patient_id.as_str(), r.alive))
        .collect();

    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (p, genes) in &cohort {
        let is_alive = alive.get(p.patient_id.as_str()).copied().unwrap_or(false);
        for g in genes {
            let entry = tally.entry(g).or_default();
            entry.0 += 1;
            entry.1 += usize::from(is_alive);
        }
    }
    let mut rows: Vec<CoMutationRow> = tally
        .into_iter()
        .map(|(gene, (carriers, living))| CoMutationRow {
            gene: gene.to_string(),
            carriers,
            living,
            percent_patients: percent(carriers, cohort.len()),
            percent_living: percent(living, carriers),
            percent_deceased: percent(carriers - living, carriers),
        })
        .collect();
    rows.sort_by(|a, b| {
        b.percent_patients
            .cmp(&a.percent_patients)
            .then_with(|| a.gene.cmp(&b.gene))
    });
    if let Some(n) = top_n {
        rows.truncate(n);
    }
    Ok(CoMutationTable {
        pair: (pair.0.to_string(), pair.1.to_string()),
        cohort: cohort.iter().map(|(p, _)| p.patient_id.clone()).collect(),
        rows,
    })
}
