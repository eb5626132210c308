mod common;

use hysmooth_cli::{run_corpus, Settings};
use hysmooth_core::groebner::Budget;
use hysmooth_core::smoothness::hybrid_smoothness_test;

#[test]
fn corpus_shape() {
    let corpus = common::load_corpus();
    assert!(corpus.len() >= 20);
    for name in ["cusp", "node", "whitney_umbrella", "sphere", "twisted_cubic"] {
        assert!(corpus.iter().any(|e| e.name == name), "{name} missing");
    }
    for e in &corpus {
        assert_eq!(e.file.characteristic, 103, "{}", e.name);
        assert!(e.file.vars.len() <= 5, "{}", e.name);
        let ideal = e.file.to_ideal().unwrap();
        assert!(ideal.gens().iter().all(|g| g.total_degree().unwrap_or(0) <= 4), "{}", e.name);
    }
}

#[test]
fn sidecars_match_the_global_jacobian() {
    for e in common::load_corpus() {
        assert_eq!(common::global_verdict(&e), e.expected, "{}", e.name);
    }
}

#[test]
fn sequential_driver_agrees_on_every_chart_split() {
    let b = Budget::default();
    for e in common::load_corpus() {
        let got = e.charts().iter().all(|t| hybrid_smoothness_test(t, 2, &b).unwrap());
        assert_eq!(got, e.expected, "{}", e.name);
    }
}

#[test]
fn library_corpus_run() {
    let report = run_corpus(&common::corpus_dir(), &Settings::default()).unwrap();
    assert_eq!(report.failures(), 0, "{report}");
    assert_eq!(report.exit_code(), 0);
    assert_eq!(report.rows.len(), common::load_corpus().len());
}
