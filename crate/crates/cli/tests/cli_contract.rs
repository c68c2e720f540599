mod support;

use std::fs;

use support::{fixture_dir, on_fixture, oncograph};

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Copies the fixture so a test can damage one table.
fn fixture_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture_dir()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

#[test]
fn missing_table_is_io_error_naming_the_file() {
    let dir = fixture_copy();
    fs::remove_file(dir.path().join("clinical.tsv")).unwrap();
    let out = oncograph().arg("--data-dir").arg(dir.path()).arg("build").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("clinical.tsv"), "{}", stderr(&out));
}

#[test]
fn malformed_row_is_reported_and_dropped() {
    let dir = fixture_copy();
    let path = dir.path().join("mutations.tsv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("P1\tKRAS\t12\tnot_a_number\t5\t0.1\n");
    fs::write(&path, text).unwrap();
    let out = oncograph().arg("--data-dir").arg(dir.path()).arg("build").output().unwrap();
    // Row errors are reported, the row is dropped, the run still succeeds.
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("mutations\t18\terror\t"), "{}", stderr(&out));
    assert!(stdout(&out).contains("edges\tgreen\t16\n"), "{}", stdout(&out));
}

#[test]
fn header_only_mutations_yields_no_green_edges() {
    let dir = fixture_copy();
    let path = dir.path().join("mutations.tsv");
    let header = fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
    fs::write(&path, format!("{header}\n")).unwrap();
    let out = oncograph().arg("--data-dir").arg(dir.path()).arg("build").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("edges\tgreen\t0\n"), "{}", stdout(&out));
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(oncograph().output().unwrap().status.code(), Some(64));
    assert_eq!(on_fixture(&["build", "--bogus"]).status.code(), Some(64));
    assert_eq!(on_fixture(&["coexist", "--k", "0"]).status.code(), Some(64));
    assert_eq!(on_fixture(&["coexist", "--k", "101"]).status.code(), Some(64));
    assert_eq!(on_fixture(&["coexist"]).status.code(), Some(64));
    assert_eq!(on_fixture(&["cohort", "groups", "--k", "2", "--metric", "cosine"]).status.code(), Some(64));
    assert_eq!(on_fixture(&["cohort", "survival", "--t-long", "6", "--t-short", "6"]).status.code(), Some(64));
    assert_eq!(on_fixture(&["freq", "--mode", "nonsense"]).status.code(), Some(64));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(oncograph().arg("--help").output().unwrap().status.code(), Some(0));
    assert_eq!(oncograph().arg("--version").output().unwrap().status.code(), Some(0));
}

#[test]
fn untargetable_mutation_is_domain_error() {
    let out = on_fixture(&["treat", "--patient", "P1", "--targets", "TP53_17_7577120_7577120"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("untargetable mutation TP53_17_7577120_7577120"), "{}", stderr(&out));
}

#[test]
fn unknown_entities_are_domain_errors() {
    assert_eq!(on_fixture(&["check", "--disease", "GBM"]).status.code(), Some(3));
    assert_eq!(on_fixture(&["freq", "--disease", "GBM"]).status.code(), Some(3));
    assert_eq!(on_fixture(&["treat", "--patient", "P99", "--targets", "KRAS_12_25398284_25398284"]).status.code(), Some(3));
    // Mutation exists but P6 does not carry it.
    assert_eq!(on_fixture(&["treat", "--patient", "P6", "--targets", "KRAS_12_25398284_25398284"]).status.code(), Some(3));
    assert_eq!(on_fixture(&["cohort", "comutation", "--genes", "KRAS,BRAF"]).status.code(), Some(3));
}

#[test]
fn config_file_and_env_var_are_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        format!("data_dir = {:?}\ncoexist_k = 30\n", fixture_dir().to_str().unwrap()),
    )
    .unwrap();
    let want = fs::read(support::golden_dir().join("coexist_k30.tsv")).unwrap();

    let out = oncograph().arg("--config").arg(&config).arg("coexist").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(out.stdout, want);

    let out = oncograph().env("ONCOGRAPH_CONFIG", &config).arg("coexist").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(out.stdout, want);

    // Flags override the file.
    let out = oncograph().arg("--config").arg(&config).args(["coexist", "--k", "100"]).output().unwrap();
    assert_eq!(out.stdout, fs::read(support::golden_dir().join("coexist_k100.tsv")).unwrap());
}

#[test]
fn bad_config_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "no_such_key = 1\n").unwrap();
    let out = oncograph().arg("--config").arg(&config).arg("build").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = oncograph().arg("--config").arg(dir.path().join("absent.toml")).arg("build").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn instance_file_is_solved() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.txt");
    fs::write(&path, "# two sets\na,b\nb,c\na\t1\nb\t5\nc\t1\n").unwrap();
    let out = oncograph().arg("treat").arg("--instance").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("# treatment\tb\tsize=1\t"), "{}", stdout(&out));
    let out = oncograph().arg("treat").arg("--instance").arg(&path).arg("--weighted").output().unwrap();
    assert!(stdout(&out).contains("# treatment\ta,c\tsize=2\tweight=2\t"), "{}", stdout(&out));

    fs::write(&path, "a,b\n\n").unwrap();
    let out = oncograph().arg("treat").arg("--instance").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn out_dir_collects_tables_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    for args in [&["build"][..], &["check"], &["cohort", "survival"], &["coexist", "--k", "30"]] {
        let out = oncograph()
            .arg("--data-dir")
            .arg(fixture_dir())
            .arg("--out-dir")
            .arg(&out_dir)
            .args(args)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    }
    let mut names: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"build_report.tsv".to_string()), "{names:?}");
    assert!(names.len() >= 4, "{names:?}");
}
