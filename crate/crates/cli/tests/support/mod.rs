//! Running the binary against the bundled fixture.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fixture")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn oncograph() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oncograph"));
    cmd.env_remove("ONCOGRAPH_CONFIG");
    cmd
}

/// Runs a subcommand on the fixture.
pub fn on_fixture(args: &[&str]) -> Output {
    oncograph().arg("--data-dir").arg(fixture_dir()).args(args).output().expect("binary runs")
}

/// Golden file and the arguments that reproduce it on stdout.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("build_summary.tsv", &["build"]),
    ("check_gene.tsv", &["check"]),
    ("check_mutation.tsv", &["check", "--granularity", "mutation"]),
    ("survival.tsv", &["cohort", "survival"]),
    ("groups_hamming_k2.tsv", &["cohort", "groups", "--k", "2"]),
    ("groups_jaccard_k0.6.tsv", &["cohort", "groups", "--k", "0.6", "--metric", "jaccard"]),
    ("groups_cliques_k2.tsv", &["cohort", "groups", "--k", "2", "--cliques"]),
    ("comutation_kras_tp53.tsv", &["cohort", "comutation", "--genes", "KRAS,TP53"]),
    ("freq_mutation_all.tsv", &["freq", "--mode", "mutation", "--all"]),
    ("freq_combined.tsv", &["freq", "--mode", "combined"]),
    ("freq_gene_luad.tsv", &["freq", "--mode", "gene_without_multiplicity", "--disease", "LUAD"]),
    ("coexist_k100.tsv", &["coexist", "--k", "100"]),
    ("coexist_k30.tsv", &["coexist", "--k", "30"]),
    ("coexist_gene_k50.tsv", &["coexist", "--k", "50", "--granularity", "gene"]),
    (
        "treat_p1.tsv",
        &["treat", "--patient", "P1", "--targets", "KRAS_12_25398284_25398284,EGFR_7_55259515_55259515"],
    ),
    (
        "treat_p6.tsv",
        &["treat", "--patient", "P6", "--targets", "KRAS_12_25398285_25398285,PIK3CA_3_178952085_178952085"],
    ),
    (
        "treat_p6_weighted.tsv",
        &[
            "treat",
            "--patient",
            "P6",
            "--targets",
            "KRAS_12_25398285_25398285,PIK3CA_3_178952085_178952085",
            "--weighted",
        ],
    ),
];

/// Compares every golden case; returns one description per mismatch.
pub fn golden_mismatches() -> Vec<String> {
    let mut bad = Vec::new();
    for (file, args) in GOLDEN_CASES {
        let want = std::fs::read(golden_dir().join(file)).expect("golden file exists");
        let out = on_fixture(args);
        if !out.status.success() {
            bad.push(format!("{file}: exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
        } else if out.stdout != want {
            bad.push(format!("{file}: output differs\n{}", String::from_utf8_lossy(&out.stdout)));
        }
    }
    let dir = tempfile::tempdir().expect("temp dir");
    let out = on_fixture(&["--out-dir", dir.path().to_str().unwrap(), "build"]);
    let report = std::fs::read(dir.path().join("build_report.tsv")).unwrap_or_default();
    if !out.status.success() || report != std::fs::read(golden_dir().join("build_report.tsv")).unwrap() {
        bad.push("build_report.tsv: report differs".to_string());
    }
    bad
}
