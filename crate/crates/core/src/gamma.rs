//! The smoothness test as a colored Petri net.
//!
//! Chart tokens enter on `i`. Transition `t` computes the codimension of
//! the chart and flags charts where nothing is left to check; `d` and `j`
//! run the order-two check and the embedded Jacobian criterion, `s` runs
//! the descent and the `e`/`x` pair feeds the resulting charts back to
//! `i` one by one. `h_d` and `h_j` put a singular verdict on `o` and end
//! the run. If the net falls quiet first, the completion rule puts a
//! smooth verdict on `o`.

use std::io::Write;
use std::sync::Arc;

use hysmooth_petri::{
    run, ColorType, EventKind, Firing, Marking, Net, NetDef, Opaque, RunConfig, RunError, RunHandle, RunResult,
    TaskRegistry, Transition, Value,
};
use serde::Serialize;
use thiserror::Error;

use crate::groebner::{Budget, GroebnerError};
use crate::smoothness::{
    chart_codimension, delta_check, descent, embedded_jacobian_with, ChartStatus, ChartSummary, ChartTriple, SmoothnessError,
};

const CHART: &str = "chart";

/// A chart travelling through the net, with its position in the chart
/// tree: the path of child indices from its root chart.
#[derive(Debug)]
pub struct ChartNode {
    pub path: Vec<u32>,
    pub triple: ChartTriple,
}

impl ChartNode {
    pub fn parent_path(&self) -> Option<&[u32]> {
        (self.path.len() > 1).then(|| &self.path[..self.path.len() - 1])
    }
}

fn chart_value(node: ChartNode) -> Value {
    Value::Opaque(Opaque::new(CHART, node))
}

fn chart_of(v: &Value) -> Option<Arc<ChartNode>> {
    v.as_opaque().and_then(|o| o.downcast_arc::<ChartNode>())
}

pub fn chart_color() -> ColorType {
    ColorType::opaque(CHART)
}

fn checked_color() -> ColorType {
    ColorType::record([("triple", chart_color()), ("flag", ColorType::Bool), ("codim", ColorType::Int)])
}

fn flagged_color() -> ColorType {
    ColorType::record([("triple", chart_color()), ("flag", ColorType::Bool)])
}

fn verdict_color() -> ColorType {
    ColorType::record([("smooth", ColorType::Bool), ("witness", ColorType::list(chart_color()))])
}

/// Builds the net for codimension limit `c`: charts of codimension at
/// most `c` go to the embedded Jacobian criterion, deeper ones descend.
pub fn build_smoothness_net(c: u32) -> NetDef {
    let chart = chart_color();
    let checked = checked_color();
    let flagged = flagged_color();
    let list = ColorType::list(chart.clone());
    let verdict = verdict_color();
    let found = "${v.smooth} := false; ${v.witness} := [${z.triple}]";
    let mut net = NetDef::new("smoothness")
        .place("i", chart.clone())
        .place("checked", checked.clone())
        .place("delta", flagged.clone())
        .place("jac", flagged.clone())
        .place("desc", list.clone())
        .place("o", verdict.clone())
        .transition(Transition::task("t", "check").input("x", chart.clone(), "i").output("y", checked.clone(), "checked"))
        .transition(Transition::expr("r_t", "").input("y", checked.clone(), "checked").when("${y.flag}"))
        .transition(
            Transition::task("d", "delta")
                .input("y", checked.clone(), "checked")
                .output("z", flagged.clone(), "delta")
                .when(&format!(":not: ${{y.flag}} :and: ${{y.codim}} :gt: {c}")),
        )
        .transition(
            Transition::task("j", "jacobian")
                .input("y", checked, "checked")
                .output("z", flagged.clone(), "jac")
                .when(&format!(":not: ${{y.flag}} :and: ${{y.codim}} :le: {c}")),
        )
        .transition(
            Transition::task("s", "descent")
                .input("z", flagged.clone(), "delta")
                .output("L", list.clone(), "desc")
                .when("${z.flag}"),
        )
        .transition(
            Transition::expr("h_d", found)
                .input("z", flagged.clone(), "delta")
                .output("v", verdict.clone(), "o")
                .when(":not: ${z.flag}")
                .heureka(),
        )
        .transition(
            Transition::expr("h_j", found)
                .input("z", flagged.clone(), "jac")
                .output("v", verdict, "o")
                .when(":not: ${z.flag}")
                .heureka(),
        )
        .transition(Transition::expr("r_j", "").input("z", flagged, "jac").when("${z.flag}"))
        .transition(
            Transition::expr("e", "${c} := head(${L}); ${L} := tail(${L})")
                .input("L", list.clone(), "desc")
                .output("L", list.clone(), "desc")
                .output("c", chart, "i")
                .when(":not: empty(${L})"),
        )
        .transition(Transition::expr("x", "").input("L", list, "desc").when("empty(${L})"));
    net.output = Some("o".into());
    net.completion = Some("${o.smooth} := true; ${o.witness} := []".into());
    net
}

fn task_error(e: SmoothnessError) -> String {
    match e {
        SmoothnessError::Groebner(GroebnerError::Cancelled) => "cancelled".into(),
        other => other.to_string(),
    }
}

fn record_chart(v: &Value) -> Result<Arc<ChartNode>, String> {
    v.field("triple")
        .and_then(chart_of)
        .ok_or_else(|| "token does not carry a chart".to_string())
}

/// Task bodies for the net, each running under a copy of `budget` that
/// also watches the run's cancellation flag.
pub fn smoothness_tasks(budget: &Budget) -> TaskRegistry {
    let mut reg = TaskRegistry::new();
    let b = budget.clone();
    reg.register("check", move |inputs, cancel| {
        let node = chart_of(&inputs[0]).ok_or("token does not carry a chart")?;
        let budget = b.clone().with_cancel(cancel.clone());
        let (flag, codim) = match chart_codimension(&node.triple, &budget).map_err(task_error)? {
            ChartStatus::Empty => (true, 0),
            ChartStatus::Codim(k) => (k == 0, i64::from(k)),
        };
        Ok(vec![Value::record([
            ("triple", inputs[0].clone()),
            ("flag", Value::Bool(flag)),
            ("codim", Value::Int(codim)),
        ])])
    });
    let b = budget.clone();
    reg.register("delta", move |inputs, cancel| {
        let node = record_chart(&inputs[0])?;
        let budget = b.clone().with_cancel(cancel.clone());
        let ok = delta_check(&node.triple, &budget).map_err(task_error)?;
        let triple = inputs[0].field("triple").cloned().unwrap_or(Value::Unit);
        Ok(vec![Value::record([("triple", triple), ("flag", Value::Bool(ok))])])
    });
    let b = budget.clone();
    reg.register("jacobian", move |inputs, cancel| {
        let node = record_chart(&inputs[0])?;
        let codim = inputs[0].field("codim").and_then(Value::as_int).ok_or("missing codimension")?;
        let budget = b.clone().with_cancel(cancel.clone());
        let ok = embedded_jacobian_with(&node.triple, codim as usize, &budget).map_err(task_error)?;
        let triple = inputs[0].field("triple").cloned().unwrap_or(Value::Unit);
        Ok(vec![Value::record([("triple", triple), ("flag", Value::Bool(ok))])])
    });
    let b = budget.clone();
    reg.register("descent", move |inputs, cancel| {
        let node = record_chart(&inputs[0])?;
        let budget = b.clone().with_cancel(cancel.clone());
        let children = descent(&node.triple, &budget).map_err(task_error)?;
        Ok(vec![Value::List(
            children
                .into_iter()
                .enumerate()
                .map(|(k, triple)| {
                    let mut path = node.path.clone();
                    path.push(k as u32);
                    chart_value(ChartNode { path, triple })
                })
                .collect(),
        )])
    });
    reg
}

#[derive(Debug, Error)]
pub enum GammaError {
    #[error("net construction: {0}")]
    Net(String),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("expected exactly one token on o, found {0}")]
    Output(usize),
    #[error("malformed verdict token")]
    Verdict,
}

pub struct GammaOptions<'a> {
    pub codim_limit: u32,
    pub workers: usize,
    pub seed: u64,
    pub budget: Budget,
    pub trace: Option<&'a mut dyn Write>,
}

impl Default for GammaOptions<'_> {
    fn default() -> Self {
        Self {
            codim_limit: 2,
            workers: 1,
            seed: 0,
            budget: Budget::default(),
            trace: None,
        }
    }
}

/// One chart examined by `t`.
#[derive(Clone, Debug, Serialize)]
pub struct ChartRecord {
    pub path: Vec<u32>,
    pub parent: Option<Vec<u32>>,
    pub chart: ChartSummary,
}

/// A descent performed by `s`: the chart and the charts it produced.
#[derive(Clone, Debug)]
pub struct DescentRecord {
    pub parent: Arc<ChartNode>,
    pub children: Vec<Arc<ChartNode>>,
}

#[derive(Debug)]
pub struct GammaOutcome {
    pub smooth: bool,
    /// Chart on which a criterion failed.
    pub witness: Option<Arc<ChartNode>>,
    /// Charts in the order `t` picked them up.
    pub charts: Vec<ChartRecord>,
    pub descents: Vec<DescentRecord>,
    pub run: RunResult,
}

/// Runs the net on the given top-level charts.
pub fn run_smoothness_net(charts: &[ChartTriple], opts: GammaOptions<'_>) -> Result<GammaOutcome, GammaError> {
    let net = Net::new(build_smoothness_net(opts.codim_limit))
        .map_err(|errs| GammaError::Net(errs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))?;
    let initial = Marking::new().with(
        "i",
        charts.iter().enumerate().map(|(k, t)| {
            chart_value(ChartNode {
                path: vec![k as u32],
                triple: t.clone(),
            })
        }),
    );
    let tasks = smoothness_tasks(&opts.budget);
    let mut records = Vec::new();
    let mut descents = Vec::new();
    let mut observer = |f: &Firing<'_>| {
        let name = f.event.transition.as_deref();
        match (f.event.kind, name) {
            (EventKind::Dispatch, Some("t")) => {
                if let Some(node) = f.consumed.first().and_then(|t| chart_of(&t.value)) {
                    records.push(ChartRecord {
                        path: node.path.clone(),
                        parent: node.parent_path().map(<[u32]>::to_vec),
                        chart: node.triple.summary(),
                    });
                }
            }
            (EventKind::Complete, Some("s")) => {
                let parent = f.consumed.first().and_then(|t| t.value.field("triple")).and_then(chart_of);
                let children = f
                    .produced
                    .first()
                    .and_then(|t| t.value.as_list())
                    .map(|l| l.iter().filter_map(chart_of).collect())
                    .unwrap_or_default();
                if let Some(parent) = parent {
                    descents.push(DescentRecord { parent, children });
                }
            }
            _ => {}
        }
    };
    let mut sink = opts.trace;
    let trace: Option<&mut dyn Write> = match sink.as_mut() {
        Some(w) => Some(&mut **w),
        None => None,
    };
    let cfg = RunConfig {
        workers: opts.workers,
        seed: opts.seed,
        trace,
        observer: Some(&mut observer),
        max_firings: None,
        handle: Some(RunHandle::new()),
    };
    let result = run(&net, initial, &tasks, cfg)?;
    let out = result.output();
    if out.len() != 1 {
        return Err(GammaError::Output(out.len()));
    }
    let smooth = out[0].field("smooth").and_then(Value::as_bool).ok_or(GammaError::Verdict)?;
    let witness = out[0]
        .field("witness")
        .and_then(Value::as_list)
        .ok_or(GammaError::Verdict)?
        .first()
        .and_then(chart_of);
    if smooth == witness.is_some() {
        return Err(GammaError::Verdict);
    }
    Ok(GammaOutcome {
        smooth,
        witness,
        charts: records,
        descents,
        run: result,
    })
}
