//! Tabular ingestion: TSV exports in, validated [`KnowledgeGraph`] out.
//!
//! Every table is UTF-8, tab-separated, with `#` comment lines and a header
//! row. Logical columns are mapped to header names through a schema struct
//! whose defaults are the documented names. Cells are never quoted. Rows
//! that fail to parse are collected with their line numbers; they never abort
//! the whole table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;

use num_traits::{One, Signed};

use crate::graph::{
    DiagnosisEdge, DiseaseNode, DrugNode, EdgeLabel, GeneticEdge, KnowledgeGraph,
    MutationKey, NodeRef, PatientRecord, TargetEdge, TreatmentEdge,
};
use crate::graph::Effectiveness;
use crate::rational::{format_rational, is_unit_interval, parse_decimal, Rational};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{source_name}: header has no column {header:?} for {logical}")]
    MissingColumn {
        source_name: String,
        logical: &'static str,
        header: String,
    },
    #[error("{source_name}: line {line}: {message}")]
    BadHeader {
        source_name: String,
        line: u64,
        message: String,
    },
    #[error("{source_name}: {error}")]
    Read {
        source_name: String,
        #[source]
        error: std::io::Error,
    },
}

/// A parsed row and the 1-based line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<T> {
    pub line: u64,
    pub row: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTable<T> {
    /// Label used in reports, usually the file path.
    pub source: String,
    pub rows: Vec<Located<T>>,
    pub errors: Vec<RowError>,
    /// Non-comment, non-blank lines after the header.
    pub data_lines: usize,
}

impl<T> ParsedTable<T> {
    pub fn empty(source: impl Into<String>) -> Self {
        ParsedTable {
            source: source.into(),
            rows: Vec::new(),
            errors: Vec::new(),
            data_lines: 0,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }
}

// ---------------------------------------------------------------------------
// Row types and schemas

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationTableRow {
    pub sample_id: String,
    pub gene: String,
    pub chromosome: String,
    pub start: u64,
    pub end: u64,
    pub vaf: Option<Rational>,
}

impl MutationTableRow {
    pub fn key(&self) -> MutationKey {
        MutationKey::new(self.gene.clone(), self.chromosome.clone(), self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VitalStatus {
    Living,
    Deceased,
}

impl VitalStatus {
    fn parse(text: &str) -> Option<Self> {
        // cBioPortal writes "0:LIVING" / "1:DECEASED".
        let lowered = text.trim().to_ascii_lowercase();
        let word = lowered.split_once(':').map_or(lowered.as_str(), |(_, w)| w);
        match word {
            "living" | "alive" => Some(VitalStatus::Living),
            "deceased" | "dead" => Some(VitalStatus::Deceased),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClinicalTableRow {
    pub sample_id: String,
    pub cancer_type: String,
    /// Overall survival as reported, possibly fractional.
    pub overall_survival_months: Rational,
    pub vital_status: VitalStatus,
}

impl ClinicalTableRow {
    /// Survival floored to whole months.
    pub fn survival_months(&self) -> u32 {
        self.overall_survival_months.floor().to_integer().clamp(0, u32::MAX as i64) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdaTableRow {
    pub gene: String,
    pub disease: String,
    pub gda_score: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrugTargetTableRow {
    pub drug_id: String,
    pub gene: String,
    pub toxicity_weight: Option<Rational>,
    pub adverse_effects: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreatmentTableRow {
    pub sample_id: String,
    pub drug_id: String,
    pub order: u32,
    pub effectiveness: Effectiveness,
}

/// Header names for the mutation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSchema {
    pub sample_id: String,
    pub gene: String,
    pub chromosome: String,
    pub start: String,
    pub end: String,
    /// Optional column; when the header lacks it every VAF is unknown.
    pub vaf: String,
}

impl Default for MutationSchema {
    fn default() -> Self {
        MutationSchema {
            sample_id: "sample_id".into(),
            gene: "gene".into(),
            chromosome: "chromosome".into(),
            start: "start_position".into(),
            end: "end_position".into(),
            vaf: "vaf".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClinicalSchema {
    pub sample_id: String,
    pub cancer_type: String,
    pub os_months: String,
    pub os_status: String,
}

impl Default for ClinicalSchema {
    fn default() -> Self {
        ClinicalSchema {
            sample_id: "sample_id".into(),
            cancer_type: "cancer_type".into(),
            os_months: "os_months".into(),
            os_status: "os_status".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdaSchema {
    pub gene: String,
    pub disease: String,
    pub gda_score: String,
}

impl Default for GdaSchema {
    fn default() -> Self {
        GdaSchema {
            gene: "gene".into(),
            disease: "disease".into(),
            gda_score: "gda_score".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrugTargetSchema {
    pub drug: String,
    pub gene: String,
    /// Optional column; missing weights default to 1.
    pub weight: String,
    /// Optional column.
    pub adverse_effects: String,
}

impl Default for DrugTargetSchema {
    fn default() -> Self {
        DrugTargetSchema {
            drug: "drug".into(),
            gene: "gene".into(),
            weight: "weight".into(),
            adverse_effects: "adverse_effects".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreatmentSchema {
    pub sample_id: String,
    pub drug_id: String,
    pub order: String,
    pub effectiveness: String,
}

impl Default for TreatmentSchema {
    fn default() -> Self {
        TreatmentSchema {
            sample_id: "sample_id".into(),
            drug_id: "drug_id".into(),
            order: "order".into(),
            effectiveness: "effectiveness".into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Generic TSV reader

/// Values treated as "not reported" in optional numeric columns.
fn is_unknown(text: &str) -> bool {
    matches!(
        text.trim().to_ascii_lowercase().as_str(),
        "" | "na" | "nan" | "." | "unknown" | "null"
    )
}

struct Columns {
    required: Vec<usize>,
    optional: Vec<Option<usize>>,
}

struct Fields<'a> {
    cells: &'a [&'a str],
    columns: &'a Columns,
    required_names: &'a [(&'static str, &'a str)],
}

impl Fields<'_> {
    /// Required field `i`, trimmed and non-empty.
    fn req(&self, i: usize) -> Result<&str, String> {
        let logical = self.required_names[i].0;
        match self.cells.get(self.columns.required[i]).map(|c| c.trim()) {
            None => Err(format!("missing {logical} field")),
            Some("") => Err(format!("empty {logical} field")),
            Some(v) => Ok(v),
        }
    }

    /// Optional field `i`; `None` when the column is absent or the cell blank.
    fn opt(&self, i: usize) -> Option<&str> {
        let col = self.columns.optional[i]?;
        self.cells.get(col).map(|c| c.trim()).filter(|v| !v.is_empty())
    }
}

/// Splits a TSV stream into numbered lines, skipping `#` comments and blank
/// lines. Lines that are not valid UTF-8 come back as `Err`.
fn numbered_lines(bytes: &[u8]) -> impl Iterator<Item = (u64, Result<&str, String>)> {
    bytes
        .split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, raw)| (i as u64 + 1, raw.strip_suffix(b"\r").unwrap_or(raw)))
        .filter(|(_, raw)| !raw.is_empty() && raw[0] != b'#' && !raw.iter().all(u8::is_ascii_whitespace))
        .map(|(n, raw)| (n, std::str::from_utf8(raw).map_err(|e| format!("invalid UTF-8: {e}"))))
}

fn read_table<R, T>(
    mut input: R,
    source: &str,
    required: &[(&'static str, &str)],
    optional: &[&str],
    parse: impl Fn(&Fields<'_>) -> Result<T, String>,
) -> Result<ParsedTable<T>, IngestError>
where
    R: Read,
{
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|error| IngestError::Read {
        source_name: source.to_string(),
        error,
    })?;
    let mut lines = numbered_lines(&bytes);

    let header: Vec<&str> = match lines.next() {
        Some((_, Ok(text))) => text.split('\t').map(str::trim).collect(),
        Some((line, Err(message))) => {
            return Err(IngestError::BadHeader {
                source_name: source.to_string(),
                line,
                message,
            })
        }
        None => Vec::new(),
    };
    let position = |name: &str| header.iter().position(|h| *h == name);
    let mut columns = Columns {
        required: Vec::with_capacity(required.len()),
        optional: optional.iter().map(|name| position(name)).collect(),
    };
    for &(logical, name) in required {
        let col = position(name).ok_or_else(|| IngestError::MissingColumn {
            source_name: source.to_string(),
            logical,
            header: name.to_string(),
        })?;
        columns.required.push(col);
    }

    let mut table = ParsedTable::empty(source);
    for (line, text) in lines {
        table.data_lines += 1;
        let result = text.and_then(|text| {
            let cells: Vec<&str> = text.split('\t').collect();
            parse(&Fields {
                cells: &cells,
                columns: &columns,
                required_names: required,
            })
        });
        match result {
            Ok(row) => table.rows.push(Located { line, row }),
            Err(message) => table.errors.push(RowError { line, message }),
        }
    }
    Ok(table)
}

fn parse_locus(text: &str, what: &str) -> Result<u64, String> {
    text.parse()
        .map_err(|_| format!("{what} {text:?} is not a non-negative integer"))
}

fn parse_unit(text: &str, what: &str) -> Result<Rational, String> {
    let value = parse_decimal(text).map_err(|e| format!("{what}: {e}"))?;
    if !is_unit_interval(&value) {
        return Err(format!("{what} {} outside [0,1]", format_rational(&value)));
    }
    Ok(value)
}

pub fn parse_mutation_table<R: Read>(
    input: R,
    schema: &MutationSchema,
) -> Result<ParsedTable<MutationTableRow>, IngestError> {
    let required = [
        ("sample_id", schema.sample_id.as_str()),
        ("gene", schema.gene.as_str()),
        ("chromosome", schema.chromosome.as_str()),
        ("start_position", schema.start.as_str()),
        ("end_position", schema.end.as_str()),
    ];
    read_table(input, "mutations", &required, &[schema.vaf.as_str()], |f| {
        let start = parse_locus(f.req(3)?, "start position")?;
        let end = parse_locus(f.req(4)?, "end position")?;
        if start > end {
            return Err(format!("start position {start} > end position {end}"));
        }
        let vaf = match f.opt(0) {
            Some(text) if !is_unknown(text) => Some(parse_unit(text, "VAF")?),
            _ => None,
        };
        Ok(MutationTableRow {
            sample_id: f.req(0)?.to_string(),
            gene: f.req(1)?.to_string(),
            chromosome: f.req(2)?.to_string(),
            start,
            end,
            vaf,
        })
    })
}

pub fn parse_clinical_table<R: Read>(
    input: R,
    schema: &ClinicalSchema,
) -> Result<ParsedTable<ClinicalTableRow>, IngestError> {
    let required = [
        ("sample_id", schema.sample_id.as_str()),
        ("cancer_type", schema.cancer_type.as_str()),
        ("os_months", schema.os_months.as_str()),
        ("os_status", schema.os_status.as_str()),
    ];
    read_table(input, "clinical", &required, &[], |f| {
        let months_text = f.req(2)?;
        let months = parse_decimal(months_text).map_err(|e| format!("survival months: {e}"))?;
        if months.is_negative() {
            return Err(format!("survival months {months_text} is negative"));
        }
        let status_text = f.req(3)?;
        let vital_status = VitalStatus::parse(status_text)
            .ok_or_else(|| format!("unknown vital status {status_text:?}"))?;
        Ok(ClinicalTableRow {
            sample_id: f.req(0)?.to_string(),
            cancer_type: f.req(1)?.to_string(),
            overall_survival_months: months,
            vital_status,
        })
    })
}

pub fn parse_gda_table<R: Read>(
    input: R,
    schema: &GdaSchema,
) -> Result<ParsedTable<GdaTableRow>, IngestError> {
    let required = [
        ("gene", schema.gene.as_str()),
        ("disease", schema.disease.as_str()),
        ("gda_score", schema.gda_score.as_str()),
    ];
    read_table(input, "gda", &required, &[], |f| {
        Ok(GdaTableRow {
            gene: f.req(0)?.to_string(),
            disease: f.req(1)?.to_string(),
            gda_score: parse_unit(f.req(2)?, "GDA score")?,
        })
    })
}

pub fn parse_drug_target_table<R: Read>(
    input: R,
    schema: &DrugTargetSchema,
) -> Result<ParsedTable<DrugTargetTableRow>, IngestError> {
    let required = [("drug", schema.drug.as_str()), ("gene", schema.gene.as_str())];
    let optional = [schema.weight.as_str(), schema.adverse_effects.as_str()];
    read_table(input, "drugs", &required, &optional, |f| {
        let toxicity_weight = match f.opt(0) {
            Some(text) if !is_unknown(text) => {
                let w = parse_decimal(text).map_err(|e| format!("weight: {e}"))?;
                if w.is_negative() {
                    return Err(format!("weight {text} is negative"));
                }
                Some(w)
            }
            _ => None,
        };
        Ok(DrugTargetTableRow {
            drug_id: f.req(0)?.to_string(),
            gene: f.req(1)?.to_string(),
            toxicity_weight,
            adverse_effects: f.opt(1).map(str::to_string),
        })
    })
}

pub fn parse_treatment_table<R: Read>(
    input: R,
    schema: &TreatmentSchema,
) -> Result<ParsedTable<TreatmentTableRow>, IngestError> {
    let required = [
        ("sample_id", schema.sample_id.as_str()),
        ("drug_id", schema.drug_id.as_str()),
        ("order", schema.order.as_str()),
        ("effectiveness", schema.effectiveness.as_str()),
    ];
    read_table(input, "treatments", &required, &[], |f| {
        let order_text = f.req(2)?;
        let order = order_text
            .parse()
            .map_err(|_| format!("order {order_text:?} is not a non-negative integer"))?;
        Ok(TreatmentTableRow {
            sample_id: f.req(0)?.to_string(),
            drug_id: f.req(1)?.to_string(),
            order,
            effectiveness: f.req(3)?.parse()?,
        })
    })
}

// ---------------------------------------------------------------------------
// Build report

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEntry {
    pub file: String,
    pub line: Option<u64>,
    pub severity: Severity,
    pub message: String,
}

/// Per-table bookkeeping. `accepted + errors + orphans == data_lines`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TableStats {
    pub data_lines: usize,
    pub accepted: usize,
    pub errors: usize,
    pub orphans: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub entries: Vec<ReportEntry>,
    pub mutations: TableStats,
    pub clinical: TableStats,
    pub gda: TableStats,
    pub drugs: TableStats,
    pub treatments: TableStats,
}

impl BuildReport {
    fn push(&mut self, file: &str, line: Option<u64>, severity: Severity, message: impl Into<String>) {
        self.entries.push(ReportEntry {
            file: file.to_string(),
            line,
            severity,
            message: message.into(),
        });
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.entries.iter().filter(|e| e.severity == severity).count()
    }

    /// TSV with header `file	line	severity	message`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("file\tline\tseverity\tmessage\n");
        for e in &self.entries {
            let line = e.line.map(|l| l.to_string()).unwrap_or_default();
            let message = e.message.replace(['\t', '\n', '\r'], " ");
            out.push_str(&format!("{}\t{}\t{}\t{}\n", e.file, line, e.severity, message));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Graph construction

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub mutations: Option<ParsedTable<MutationTableRow>>,
    pub clinical: Option<ParsedTable<ClinicalTableRow>>,
    pub gda: Option<ParsedTable<GdaTableRow>>,
    pub drugs: Option<ParsedTable<DrugTargetTableRow>>,
    pub treatments: Option<ParsedTable<TreatmentTableRow>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Attach gene-level association and target rows to every mutation of
    /// that gene. When off, the `gene` cell must equal a rendered mutation
    /// (`GENE_CHROM_START_END`) and attaches to that mutation only.
    pub expand_gene_associations: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            expand_gene_associations: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Build {
    pub graph: KnowledgeGraph,
    pub report: BuildReport,
}

fn record_parse_errors<T>(report: &mut BuildReport, table: &ParsedTable<T>) {
    for e in &table.errors {
        report.push(&table.source, Some(e.line), Severity::Error, e.message.clone());
    }
}

/// Resolves the `gene` cell of a knowledge row to mutation nodes.
struct MutationMatcher {
    by_gene: HashMap<String, Vec<NodeRef>>,
    by_display: HashMap<String, NodeRef>,
    expand: bool,
}

impl MutationMatcher {
    fn new(graph: &KnowledgeGraph, expand: bool) -> Self {
        let mut by_gene: HashMap<String, Vec<NodeRef>> = HashMap::new();
        let mut by_display = HashMap::new();
        for (node, m) in graph.mutations() {
            by_gene.entry(m.gene.clone()).or_default().push(node);
            if !expand {
                by_display.insert(m.to_string(), node);
            }
        }
        MutationMatcher {
            by_gene,
            by_display,
            expand,
        }
    }

    fn matches(&self, cell: &str) -> Vec<NodeRef> {
        if self.expand {
            self.by_gene.get(cell).cloned().unwrap_or_default()
        } else {
            self.by_display.get(cell).copied().into_iter().collect()
        }
    }
}

fn ensure_disease(graph: &mut KnowledgeGraph, id: &str) -> NodeRef {
    let id = id.trim();
    match graph.disease_ref(id) {
        Some(node) => node,
        None => graph
            .add_node(DiseaseNode::new(id))
            .expect("disease id checked absent"),
    }
}

/// Builds the knowledge graph from parsed tables. Anomalies never abort the
/// build; they are listed in the returned report.
pub fn build_graph(dataset: &Dataset, options: &BuildOptions) -> Build {
    let mut graph = KnowledgeGraph::new();
    let mut report = BuildReport::default();

    // Red: patients and diagnoses.
    if let Some(table) = &dataset.clinical {
        record_parse_errors(&mut report, table);
        let mut stats = TableStats {
            data_lines: table.data_lines,
            errors: table.errors.len(),
            ..TableStats::default()
        };
        for Located { line, row } in &table.rows {
            let patient = PatientRecord::new(
                row.sample_id.clone(),
                row.survival_months(),
                row.vital_status == VitalStatus::Living,
            );
            if let Err(e) = graph.add_node(patient) {
                report.push(&table.source, Some(*line), Severity::Error, e.to_string());
                stats.errors += 1;
                continue;
            }
            let disease = ensure_disease(&mut graph, &row.cancer_type);
            let disease_id = graph.node_label(disease);
            graph
                .add_edge(DiagnosisEdge {
                    disease_id,
                    patient_id: row.sample_id.clone(),
                })
                .expect("fresh patient has no diagnosis yet");
            stats.accepted += 1;
        }
        report.clinical = stats;
    } else {
        report.push("clinical", None, Severity::Warning, "no clinical table; graph has no patients");
    }

    // Green: mutations and genetic edges.
    if let Some(table) = &dataset.mutations {
        record_parse_errors(&mut report, table);
        let mut stats = TableStats {
            data_lines: table.data_lines,
            errors: table.errors.len(),
            ..TableStats::default()
        };
        for Located { line, row } in &table.rows {
            let Some(patient) = graph.patient_ref(&row.sample_id) else {
                report.push(
                    &table.source,
                    Some(*line),
                    Severity::Warning,
                    format!("orphan mutation row: sample {:?} has no clinical record", row.sample_id),
                );
                stats.orphans += 1;
                continue;
            };
            let key = row.key();
            let mutation = match graph.mutation_ref(&key) {
                Some(node) => node,
                None => match graph.add_node(key.clone()) {
                    Ok(node) => node,
                    Err(e) => {
                        report.push(&table.source, Some(*line), Severity::Error, e.to_string());
                        stats.errors += 1;
                        continue;
                    }
                },
            };
            match graph.genetic_edge(patient, mutation) {
                Some(edge) => {
                    graph.merge_vaf(edge, row.vaf);
                    report.push(
                        &table.source,
                        Some(*line),
                        Severity::Info,
                        format!("duplicate row for {} / {key} merged (maximum VAF kept)", row.sample_id),
                    );
                }
                None => {
                    graph
                        .add_edge(GeneticEdge {
                            patient_id: row.sample_id.clone(),
                            mutation: key,
                            vaf: row.vaf,
                        })
                        .expect("endpoints exist and VAF was range-checked");
                }
            }
            stats.accepted += 1;
        }
        report.mutations = stats;
    }
    if graph.edge_counts().green == 0 {
        report.push("mutations", None, Severity::Warning, "no genetic edges were built");
    }

    let matcher = MutationMatcher::new(&graph, options.expand_gene_associations);
    let unit = if options.expand_gene_associations { "gene" } else { "mutation" };

    // Magenta: disease–mutation associations. Repeated pairs keep the
    // highest score.
    if let Some(table) = &dataset.gda {
        record_parse_errors(&mut report, table);
        let mut stats = TableStats {
            data_lines: table.data_lines,
            errors: table.errors.len(),
            ..TableStats::default()
        };
        let mut scores: BTreeMap<(NodeRef, NodeRef), Rational> = BTreeMap::new();
        let mut order = Vec::new();
        for Located { line, row } in &table.rows {
            let disease = ensure_disease(&mut graph, &row.disease);
            let targets = matcher.matches(&row.gene);
            if targets.is_empty() {
                report.push(
                    &table.source,
                    Some(*line),
                    Severity::Warning,
                    format!("no mutation node for {unit} {:?}; association not attached", row.gene),
                );
            }
            for mutation in targets {
                match scores.get_mut(&(disease, mutation)) {
                    Some(score) => {
                        report.push(
                            &table.source,
                            Some(*line),
                            Severity::Info,
                            format!(
                                "repeated association {} / {}; maximum score kept",
                                row.disease,
                                graph.node_label(mutation)
                            ),
                        );
                        if row.gda_score > *score {
                            *score = row.gda_score;
                        }
                    }
                    None => {
                        scores.insert((disease, mutation), row.gda_score);
                        order.push((disease, mutation));
                    }
                }
            }
            stats.accepted += 1;
        }
        for key in order {
            let score = scores[&key];
            graph
                .connect(key.0, key.1, EdgeLabel::Gda { score })
                .expect("association endpoints exist and are unique");
        }
        report.gda = stats;
    }

    // Magenta: drugs and mutation–drug targets.
    if let Some(table) = &dataset.drugs {
        record_parse_errors(&mut report, table);
        let mut stats = TableStats {
            data_lines: table.data_lines,
            errors: table.errors.len(),
            ..TableStats::default()
        };
        for Located { line, row } in &table.rows {
            let weight = row.toxicity_weight.unwrap_or_else(Rational::one);
            let drug = match graph.drug_ref(&row.drug_id) {
                Some(node) => {
                    let existing = graph.drug(node).expect("drug exists");
                    if row.toxicity_weight.is_some() && existing.toxicity_weight != weight {
                        report.push(
                            &table.source,
                            Some(*line),
                            Severity::Warning,
                            format!(
                                "conflicting weight {} for drug {:?}; keeping {}",
                                format_rational(&weight),
                                row.drug_id,
                                format_rational(&existing.toxicity_weight)
                            ),
                        );
                    }
                    node
                }
                None => {
                    let mut node = DrugNode::new(row.drug_id.clone()).with_weight(weight);
                    node.adverse_effects = row.adverse_effects.clone();
                    graph.add_node(node).expect("drug id checked absent, weight checked")
                }
            };
            let targets = matcher.matches(&row.gene);
            if targets.is_empty() {
                report.push(
                    &table.source,
                    Some(*line),
                    Severity::Warning,
                    format!("no mutation node for {unit} {:?}; target not attached", row.gene),
                );
            }
            for mutation in targets {
                let key = graph.mutation(mutation).expect("matched mutation exists").clone();
                if graph.neighbors(mutation, crate::graph::ColorFilter::MAGENTA)
                    .expect("mutation exists")
                    .contains(&drug)
                {
                    continue;
                }
                graph
                    .add_edge(TargetEdge {
                        mutation: key,
                        drug_id: row.drug_id.clone(),
                    })
                    .expect("target endpoints exist and are unique");
            }
            stats.accepted += 1;
        }
        report.drugs = stats;
    }

    // Red: treatment history, stored but not consumed by any pipeline.
    if let Some(table) = &dataset.treatments {
        record_parse_errors(&mut report, table);
        let mut stats = TableStats {
            data_lines: table.data_lines,
            errors: table.errors.len(),
            ..TableStats::default()
        };
        for Located { line, row } in &table.rows {
            let result = graph.add_edge(TreatmentEdge {
                patient_id: row.sample_id.clone(),
                drug_id: row.drug_id.clone(),
                order: row.order,
                effectiveness: row.effectiveness,
            });
            match result {
                Ok(_) => stats.accepted += 1,
                Err(e) => {
                    report.push(&table.source, Some(*line), Severity::Error, e.to_string());
                    stats.errors += 1;
                }
            }
        }
        report.treatments = stats;
    }

    for violation in graph.validate().violations {
        report.push("graph", None, Severity::Error, violation.message);
    }

    Build { graph, report }
}
