use std::collections::HashSet;

use hysmooth_core::gamma::{build_smoothness_net, chart_color, run_smoothness_net, GammaOptions};
use hysmooth_core::groebner::{Budget, Ideal};
use hysmooth_core::polyalg::{parse_poly, Poly, Ring};
use hysmooth_core::smoothness::{chart_decompose, hybrid_smoothness_test, hybrid_tree, ChartTriple, Mode};
use hysmooth_petri::{enabled_bindings, ColorType, Marking, Net, Opaque, Value};

fn ring(vars: &[&str]) -> Ring {
    Ring::degrevlex(103, vars).unwrap()
}

fn affine(vars: &[&str], gens: &[&str]) -> ChartTriple {
    let r = ring(vars);
    let ps: Vec<Poly> = gens.iter().map(|g| parse_poly(g, &r).unwrap()).collect();
    ChartTriple::affine(Ideal::new(&r, ps).unwrap())
}

fn opts(c: u32, workers: usize, seed: u64) -> GammaOptions<'static> {
    GammaOptions {
        codim_limit: c,
        workers,
        seed,
        ..GammaOptions::default()
    }
}

const CASES: &[(&[&str], &[&str])] = &[
    (&["x", "y"], &["y^2 - x^3"]),
    (&["x", "y"], &["x^2 + y^2 - 1"]),
    (&["x", "y"], &["y^2 - x^2*(x + 1)"]),
    (&["x", "y"], &["x*y - x", "x*y - y"]),
    (&["x", "y", "z"], &["x^2 + y^2 + z^2 - 1"]),
    (&["x", "y", "z"], &["x^2 - y^2*z"]),
    (&["x", "y", "z"], &["y^2 - x^3", "z"]),
    (&["x", "y", "z"], &["x*y", "y*z", "x*z"]),
    (&["x", "y", "z"], &["y - x^2", "z - x^3"]),
];

#[test]
fn cusp_is_singular() {
    let out = run_smoothness_net(&[affine(&["x", "y"], &["y^2 - x^3"])], opts(2, 1, 0)).unwrap();
    assert!(!out.smooth);
    assert!(out.witness.is_some());
    assert!(out.run.heureka);
    assert_eq!(out.run.final_marking.total(), 1);
}

#[test]
fn sphere_is_smooth_for_any_worker_count() {
    let t = affine(&["x", "y", "z"], &["x^2 + y^2 + z^2 - 1"]);
    for workers in [1, 2, 4, 8] {
        let out = run_smoothness_net(std::slice::from_ref(&t), opts(2, workers, 0)).unwrap();
        assert!(out.smooth);
        assert!(out.witness.is_none());
        assert_eq!(out.run.final_marking.total(), 1);
    }
}

#[test]
fn agrees_with_sequential_driver() {
    let budget = Budget::default();
    for (vars, gens) in CASES {
        let t = affine(vars, gens);
        for c in 0..=3 {
            let want = hybrid_smoothness_test(&t, c, &budget).unwrap();
            for (workers, seed) in [(1, 0), (2, 5), (4, 17)] {
                let out = run_smoothness_net(std::slice::from_ref(&t), opts(c, workers, seed)).unwrap();
                assert_eq!(out.smooth, want, "{gens:?} c={c} workers={workers}");
                assert_eq!(out.run.final_marking.count("o"), 1);
                assert_eq!(out.run.final_marking.total(), 1);
            }
        }
    }
}

#[test]
fn smooth_runs_visit_the_whole_chart_tree() {
    let budget = Budget::default();
    for (vars, gens) in CASES {
        let t = affine(vars, gens);
        for c in 0..=2 {
            let tree = hybrid_tree(&t, c, &budget).unwrap();
            if !tree.smooth {
                continue;
            }
            let out = run_smoothness_net(std::slice::from_ref(&t), opts(c, 2, 3)).unwrap();
            assert_eq!(out.charts.len(), tree.nodes, "{gens:?} c={c}");
            let paths: HashSet<Vec<u32>> = out.charts.iter().map(|r| r.path.clone()).collect();
            for r in &out.charts {
                if let Some(p) = &r.parent {
                    assert!(paths.contains(p), "parent of {:?} was processed", r.path);
                }
                assert_eq!(r.chart.depth as usize, r.path.len() - 1);
            }
        }
    }
}

#[test]
fn projective_charts_run_together() {
    let r = ring(&["x", "y", "z"]);
    let conic = Ideal::new(&r, [parse_poly("x^2 + y^2 - z^2", &r).unwrap()]).unwrap();
    let charts = chart_decompose(&conic, Mode::Projective).unwrap();
    let out = run_smoothness_net(&charts, opts(2, 4, 11)).unwrap();
    assert!(out.smooth);
    let roots: HashSet<Vec<u32>> = out.charts.iter().filter(|c| c.parent.is_none()).map(|c| c.path.clone()).collect();
    assert_eq!(roots.len(), 3);

    let nodal = Ideal::new(&r, [parse_poly("y^2*z - x^3 - x^2*z", &r).unwrap()]).unwrap();
    let out = run_smoothness_net(&chart_decompose(&nodal, Mode::Projective).unwrap(), opts(2, 4, 11)).unwrap();
    assert!(!out.smooth);
}

#[test]
fn trace_ends_with_one_verdict() {
    let mut buf = Vec::new();
    let t = affine(&["x", "y"], &["x*y - x", "x*y - y"]);
    let o = GammaOptions {
        codim_limit: 0,
        workers: 2,
        seed: 4,
        trace: Some(&mut buf),
        ..GammaOptions::default()
    };
    let out = run_smoothness_net(&[t], o).unwrap();
    assert!(out.smooth);
    let lines: Vec<serde_json::Value> = String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let completions = lines.iter().filter(|e| e["kind"] == "completion").count();
    assert_eq!(completions, 1);
    let mut balance = 1i64;
    for e in &lines {
        if let (Some(p), Some(c)) = (e["produced"].as_array(), e["consumed"].as_array()) {
            balance += p.len() as i64 - c.len() as i64;
        }
    }
    assert_eq!(balance, 1, "one token left, on o");
    assert!(lines.last().unwrap().get("summary").is_some());
}

fn routed(net: &Net, place: &str, value: Value) -> Vec<String> {
    let m = Marking::new().with(place, [value]);
    enabled_bindings(net, &m)
        .unwrap()
        .into_iter()
        .map(|b| net.transitions()[b.transition].id.clone())
        .collect()
}

#[test]
fn flag_routing_is_conflict_free() {
    let chart = Value::Opaque(Opaque::new("chart", ()));
    assert_eq!(chart_color(), ColorType::opaque("chart"));
    for c in 0..4u32 {
        let net = Net::new(build_smoothness_net(c)).unwrap();
        for flag in [false, true] {
            for codim in 0..8i64 {
                let v = Value::record([
                    ("triple", chart.clone()),
                    ("flag", Value::Bool(flag)),
                    ("codim", Value::Int(codim)),
                ]);
                let got = routed(&net, "checked", v);
                let want = if flag {
                    "r_t"
                } else if codim <= i64::from(c) {
                    "j"
                } else {
                    "d"
                };
                assert_eq!(got, vec![want.to_string()], "c={c} flag={flag} codim={codim}");
            }
            let v = Value::record([("triple", chart.clone()), ("flag", Value::Bool(flag))]);
            assert_eq!(routed(&net, "delta", v.clone()), vec![if flag { "s" } else { "h_d" }]);
            assert_eq!(routed(&net, "jac", v), vec![if flag { "r_j" } else { "h_j" }]);
        }
        assert_eq!(routed(&net, "desc", Value::List(vec![])), vec!["x"]);
        assert_eq!(routed(&net, "desc", Value::List(vec![chart.clone()])), vec!["e"]);
    }
}
