use std::collections::HashMap;

use paramctl::harness::{
    compare_to_oracle, emit_all, emit_csv, render, run_experiment, summarize, CsvKind, ExperimentConfig, Field,
    FIXED_TARGET_HEADER, PARAMETER_TRACE_HEADER, RUNS_HEADER,
};
use paramctl::Error;

fn rls_lo(n: usize, runs: usize, extra: &str) -> String {
    format!(
        r#"
seed = 11
runs = {runs}
budget = {budget}
dimensions = [{n}]
{extra}

[problem]
name = "leadingones"

[algorithm]
name = "rls"
control = "fixed"
k = 1
"#,
        budget = 10 * n * n / 2
    )
}

#[test]
fn same_seed_gives_identical_bytes() {
    let config = ExperimentConfig::parse(&rls_lo(40, 3, "trace_stride = 5")).unwrap();
    let a = run_experiment(&config).unwrap();
    let b = run_experiment(&config).unwrap();
    for kind in CsvKind::ALL {
        assert_eq!(render(&a, kind), render(&b, kind));
    }

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    emit_all(&a, dir_a.path()).unwrap();
    emit_all(&b, dir_b.path()).unwrap();
    for kind in CsvKind::ALL {
        let x = std::fs::read(dir_a.path().join(kind.file_name())).unwrap();
        let y = std::fs::read(dir_b.path().join(kind.file_name())).unwrap();
        assert_eq!(x, y);
        assert!(!x.contains(&b'\r'));
    }
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let serial = ExperimentConfig::parse(&rls_lo(30, 6, "workers = 1")).unwrap();
    let pooled = ExperimentConfig::parse(&rls_lo(30, 6, "workers = 3")).unwrap();
    let a = run_experiment(&serial).unwrap();
    let b = run_experiment(&pooled).unwrap();
    assert_eq!(render(&a, CsvKind::Runs), render(&b, CsvKind::Runs));
    assert!(a.iter().enumerate().all(|(i, r)| r.run_id == i as u64));
}

#[test]
fn rejects_invalid_configs() {
    let zero_budget = rls_lo(10, 1, "").replace("budget = 500", "budget = 0");
    assert!(matches!(ExperimentConfig::parse(&zero_budget), Err(Error::Config(_))));

    let zero_runs = rls_lo(10, 0, "");
    assert!(ExperimentConfig::parse(&zero_runs).is_err());

    let typo = rls_lo(10, 1, "budgett = 3");
    assert!(matches!(ExperimentConfig::parse(&typo), Err(Error::Config(_))));
}

#[test]
fn unknown_names_list_the_valid_ones() {
    let bad_problem = rls_lo(10, 1, "").replace("\"leadingones\"", "\"leadingzeros\"");
    let msg = ExperimentConfig::parse(&bad_problem).unwrap_err().to_string();
    assert!(msg.contains("leadingzeros") && msg.contains("onemax") && msg.contains("leadingones"), "{msg}");

    let bad_algorithm = rls_lo(10, 1, "").replace("name = \"rls\"", "name = \"rsl\"");
    let msg = ExperimentConfig::parse(&bad_algorithm).unwrap_err().to_string();
    assert!(msg.contains("rsl") && msg.contains("ollga"), "{msg}");
}

#[test]
fn empty_outcomes_give_header_only_files() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, header) in [
        (CsvKind::Runs, RUNS_HEADER),
        (CsvKind::FixedTarget, FIXED_TARGET_HEADER),
        (CsvKind::ParameterTrace, PARAMETER_TRACE_HEADER),
    ] {
        let path = emit_csv(&[], kind, dir.path()).unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), format!("{header}\n"));
    }
}

#[test]
fn stride_one_logs_every_generation() {
    let config = ExperimentConfig::parse(&rls_lo(25, 1, "trace_stride = 1")).unwrap();
    let records = run_experiment(&config).unwrap();
    let generations = records[0].outcome.generations as usize;
    let trace = render(&records, CsvKind::ParameterTrace);
    assert_eq!(trace.lines().count() - 1, generations);
}

#[test]
fn fixed_target_rows_strictly_increase() {
    let config = ExperimentConfig::parse(&rls_lo(40, 5, "")).unwrap();
    let records = run_experiment(&config).unwrap();
    let text = render(&records, CsvKind::FixedTarget);
    let mut per_run: HashMap<u64, Vec<(f64, u64)>> = HashMap::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        per_run
            .entry(cols[0].parse().unwrap())
            .or_default()
            .push((cols[1].parse().unwrap(), cols[2].parse().unwrap()));
    }
    assert_eq!(per_run.len(), 5);
    for rows in per_run.values() {
        for w in rows.windows(2) {
            assert!(w[1].0 > w[0].0 && w[1].1 > w[0].1, "{w:?}");
        }
    }
}

#[test]
fn env_seed_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(&path, rls_lo(20, 1, "")).unwrap();
    // the only test touching this variable
    std::env::set_var("PARAMCTL_SEED", "987");
    let loaded = ExperimentConfig::load(&path);
    std::env::remove_var("PARAMCTL_SEED");
    assert_eq!(loaded.unwrap().seed, 987);
    assert_eq!(ExperimentConfig::load(&path).unwrap().seed, 11);
}

#[test]
fn rls_on_leadingones_always_succeeds() {
    let n = 500;
    let config = ExperimentConfig::parse(&rls_lo(n, 100, "")).unwrap();
    let records = run_experiment(&config).unwrap();
    assert_eq!(records.len(), 100);
    assert!(records.iter().all(|r| r.outcome.success));

    let stats = summarize(records.iter().map(|r| &r.outcome), Field::Evaluations).unwrap();
    assert!(compare_to_oracle(&stats, (n * n) as f64 / 2.0, 0.05).unwrap().pass);
    // negative control
    assert!(!compare_to_oracle(&stats, (n * n) as f64, 0.05).unwrap().pass);
}
