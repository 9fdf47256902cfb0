use torsion_burst::harness::*;
use torsion_burst::qtrees::{is_qacyclic, sample_tree_with, DEFAULT_STEP_CAP};

fn lt_config(trials: usize, workers: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(ExperimentKind::LtBurst, 16, 2);
    c.trials = trials;
    c.seed = 3;
    c.window_radius = 60;
    c.workers = Some(workers);
    c
}

fn canonical(records: &[TrialRecord]) -> Vec<TrialRecord> {
    records.iter().map(TrialRecord::canonical).collect()
}

#[test]
fn worker_count_does_not_change_records() {
    let a = run_experiment(&lt_config(5, 1)).unwrap();
    let b = run_experiment(&lt_config(5, 3)).unwrap();
    assert_eq!(canonical(&a), canonical(&b));
    let nontrivial = a
        .iter()
        .filter(|r| matches!(r.output, TrialOutput::LtBurst { trivial: false, .. }))
        .count();
    assert_eq!(nontrivial, 5);
    // slots are listed in order, retries within a slot in attempt order
    for w in a.windows(2) {
        assert!((w[0].index, w[0].attempt) < (w[1].index, w[1].attempt));
    }
}

#[test]
fn records_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.jsonl");
    let mut cfg = lt_config(4, 2);
    cfg.out = Some(path.clone());
    let live = run_experiment(&cfg).unwrap();
    let loaded = read_records(&path).unwrap();
    assert_eq!(live, loaded);
    assert_eq!(summarize(&live).unwrap(), summarize(&loaded).unwrap());
    let s = summarize(&loaded).unwrap();
    write_tables(&s, &dir.path().join("tables")).unwrap();
    for name in ["sylow_ratios.csv", "lambda_ratios.csv", "statistics.csv", "tv_distance.csv"] {
        let text = std::fs::read_to_string(dir.path().join("tables").join(name)).unwrap();
        assert!(text.lines().next().unwrap().contains(','));
    }
}

#[test]
fn burst_records_are_consistent() {
    let records = run_experiment(&lt_config(6, 2)).unwrap();
    for r in &records {
        match &r.output {
            TrialOutput::LtBurst {
                lt,
                lt_factors,
                trivial,
                burst,
                ..
            } => {
                assert_eq!(lt.is_trivial(), *trivial);
                assert_eq!(lt_factors.len(), lt.rank());
                if let Some(b) = burst {
                    assert!(b.duration >= 1);
                    assert_eq!(b.phases, b.subcritical.len() + b.supercritical.len() + 1);
                    assert!(b.subcritical.iter().chain(&b.supercritical).all(|g| !g.is_trivial()));
                }
                assert_eq!(burst.is_some(), !trivial);
            }
            other => panic!("unexpected output {other:?}"),
        }
    }
}

#[test]
fn qtree_smoke() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Qtree, 6, 2);
    cfg.trials = 5;
    cfg.seed = 11;
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 5);
    for r in &records {
        let s = sample_tree_with(6, r.seed, DEFAULT_STEP_CAP).unwrap();
        assert!(is_qacyclic(s.tree.faces(), 6));
        match &r.output {
            TrialOutput::Qtree {
                faces, betti1, betti2, h1, ..
            } => {
                assert_eq!((*faces, *betti1, *betti2), (10, 0, 0));
                assert_eq!(h1, &s.tree.h1().torsion);
            }
            other => panic!("unexpected output {other:?}"),
        }
    }
}

#[test]
fn failures_are_recorded() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Qtree, 8, 2);
    cfg.trials = 3;
    cfg.step_cap = 0;
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 3);
    assert!(records
        .iter()
        .all(|r| matches!(&r.output, TrialOutput::Failed { error, .. } if error == "mixing-timeout")));
    assert_eq!(summarize(&records).unwrap().failures, 3);
}

#[test]
fn hitting_smoke() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Hitting, 16, 2);
    cfg.trials = 2;
    cfg.seed = 5;
    cfg.window_radius = 60;
    let records = run_experiment(&cfg).unwrap();
    for r in &records {
        if let TrialOutput::Hitting {
            report: Some(h),
            trivial,
            ..
        } = &r.output
        {
            assert!(!trivial);
            let m0 = h.m_burst.unwrap();
            assert!(h.scan.0 <= m0 && m0 <= h.scan.1);
            assert_eq!(h.threshold, 16f64.powi(2));
            assert_eq!(h.coincide, h.m_giant == Some(m0) && h.m_shadow == Some(m0));
        }
    }
    let s = summarize(&records).unwrap();
    assert_eq!(s.hitting.unwrap().trials, 2);
}

#[test]
fn single_shot_kinds() {
    let r = run_experiment(&ExperimentConfig::new(ExperimentKind::Enumerate, 5, 2)).unwrap();
    assert_eq!(r.len(), 1);
    match &r[0].output {
        TrialOutput::Enumerate { trees, weighted, expected, .. } => {
            assert_eq!(*trees, 125);
            assert_eq!(weighted, expected);
        }
        other => panic!("unexpected output {other:?}"),
    }
    let r = run_experiment(&ExperimentConfig::new(ExperimentKind::Constants, 1, 1)).unwrap();
    assert!(matches!(r[0].output, TrialOutput::Constants { .. }));
}

#[test]
fn config_errors_fail_the_batch() {
    let mut cfg = lt_config(1, 1);
    cfg.q0 = 12;
    assert!(run_experiment(&cfg).is_err());
    cfg.q0 = 10007;
    cfg.workers = Some(0);
    assert!(run_experiment(&cfg).is_err());
}
