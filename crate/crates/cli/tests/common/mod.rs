#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hysmooth_cli::corpus::{corpus_files, expected_verdict};
use hysmooth_cli::IdealFile;
use hysmooth_core::gamma::DescentRecord;
use hysmooth_core::groebner::{ideal_dimension, ideal_membership, localized_dimension, radical_membership, Budget, Ideal};
use hysmooth_core::polyalg::Poly;
use hysmooth_core::smoothness::{
    chart_codimension, chart_decompose, embedded_jacobian, jacobian_matrix, ChartStatus, ChartTriple, Mode,
};
use hysmooth_petri::NetDef;

pub struct Entry {
    pub name: String,
    pub path: PathBuf,
    pub file: IdealFile,
    pub expected: bool,
}

impl Entry {
    pub fn mode(&self) -> Mode {
        self.file.mode.unwrap_or(Mode::Affine)
    }

    pub fn charts(&self) -> Vec<ChartTriple> {
        chart_decompose(&self.file.to_ideal().unwrap(), self.mode()).unwrap()
    }
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn load_corpus() -> Vec<Entry> {
    corpus_files(&corpus_dir())
        .unwrap()
        .into_iter()
        .map(|path| Entry {
            name: path.file_stem().unwrap().to_string_lossy().into_owned(),
            file: IdealFile::read(&path).unwrap(),
            expected: expected_verdict(&path).unwrap(),
            path,
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Plain Jacobian criterion on an affine chart with trivial ambient:
/// smooth iff I + (all k×k minors of the Jacobian) is the unit ideal,
/// k the codimension.
pub fn global_jacobian(chart: &ChartTriple) -> bool {
    assert!(chart.i_w().gens().is_empty() && chart.q().is_one());
    let b = Budget::default();
    let ix = chart.i_x();
    let n = chart.ring().nvars();
    let dim = ideal_dimension(ix, &b).unwrap();
    if dim < 0 {
        return true;
    }
    let k = n - dim as usize;
    if k == 0 {
        return true;
    }
    let jac = jacobian_matrix(ix.gens()).unwrap();
    let mut minors: Vec<Poly> = Vec::new();
    for rows in combinations(jac.rows(), k) {
        for cols in combinations(jac.cols(), k) {
            let m = jac.submatrix(&rows, &cols).determinant().unwrap();
            if !m.is_zero() {
                minors.push(m);
            }
        }
    }
    ix.plus(&minors).unwrap().is_unit(&b).unwrap()
}

/// Global verdict over every chart of the entry.
pub fn global_verdict(e: &Entry) -> bool {
    e.charts().iter().all(global_jacobian)
}

/// Post-hoc checks on one descent: the children cover the parent chart,
/// each new ambient is smooth on its chart and the codimension drops by one.
pub fn descent_sound(d: &DescentRecord) -> Result<(), String> {
    let b = Budget::default();
    let t = &d.parent.triple;
    let kids: Vec<&ChartTriple> = d.children.iter().map(|c| &c.triple).collect();
    let cover: Vec<Poly> = kids
        .iter()
        .map(|c| c.q().exact_div(t.q()).unwrap().ok_or_else(|| format!("{} does not divide {}", t.q(), c.q())))
        .collect::<Result<_, _>>()?;
    if !radical_membership(t.q(), &t.i_x().plus(&cover).unwrap(), &b).unwrap() {
        return Err(format!("children of {t} do not cover it"));
    }
    let base = match chart_codimension(t, &b).unwrap() {
        ChartStatus::Codim(c) => c,
        ChartStatus::Empty => return Err(format!("descent on empty chart {t}")),
    };
    for c in kids {
        if c.depth() != t.depth() + 1 || c.r() != t.r() + 1 {
            return Err(format!("{c}: depth or ambient size not incremented"));
        }
        if !c.i_x().gens().iter().all(|g| ideal_membership(g, t.i_x(), &b).unwrap()) {
            return Err(format!("{c}: target ideal changed"));
        }
        let w_only = ChartTriple::new(Ideal::zero(c.ring()), c.i_w().clone(), c.q().clone(), 0).unwrap();
        if !embedded_jacobian(&w_only, &b).unwrap() {
            return Err(format!("{c}: new ambient is singular on its chart"));
        }
        if let ChartStatus::Codim(k) = chart_codimension(c, &b).unwrap() {
            if k + 1 != base {
                return Err(format!("{c}: codimension {k}, parent {base}"));
            }
        }
        let dw = localized_dimension(t.i_w(), c.q(), &b).unwrap();
        let dw1 = localized_dimension(c.i_w(), c.q(), &b).unwrap();
        if dw1 + 1 != dw {
            return Err(format!("{c}: ambient dimension {dw1}, parent {dw}"));
        }
    }
    Ok(())
}

/// Replays a JSON-lines trace against the net definition, starting from
/// `initial` tokens on place `start`, and returns the final token count
/// per place.
pub fn replay_trace(def: &NetDef, start: &str, initial: usize, trace: &str) -> Result<BTreeMap<String, usize>, String> {
    let mut place_of: BTreeMap<u64, String> = (0..initial as u64).map(|id| (id, start.to_string())).collect();
    let output = def.output.clone().ok_or("net has no output place")?;
    let mut summary = false;
    for line in trace.lines() {
        let e: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if e.get("summary").is_some() {
            summary = true;
            continue;
        }
        if summary {
            return Err("event after the summary".into());
        }
        for id in e["consumed"].as_array().ok_or("no consumed")? {
            let id = id.as_u64().ok_or("bad id")?;
            place_of.remove(&id).ok_or_else(|| format!("token {id} consumed twice or never produced"))?;
        }
        let produced: Vec<u64> = e["produced"]
            .as_array()
            .ok_or("no produced")?
            .iter()
            .map(|v| v.as_u64().ok_or("bad id"))
            .collect::<Result<_, _>>()?;
        let targets: Vec<String> = match e["kind"].as_str() {
            Some("completion") => vec![output.clone()],
            Some("fire") | Some("complete") => {
                let tid = e["transition"].as_str().ok_or("missing transition")?;
                let t = def.transitions.iter().find(|t| t.id == tid).ok_or("unknown transition")?;
                t.out_ports.iter().map(|p| p.place.clone()).collect()
            }
            _ => Vec::new(),
        };
        if targets.len() != produced.len() {
            return Err(format!("event {} produced {} tokens for {} ports", e["seq"], produced.len(), targets.len()));
        }
        for (id, place) in produced.into_iter().zip(targets) {
            if place_of.insert(id, place).is_some() {
                return Err(format!("token id {id} reused"));
            }
        }
    }
    if !summary {
        return Err("trace has no summary line".into());
    }
    let mut counts = BTreeMap::new();
    for place in place_of.into_values() {
        *counts.entry(place).or_insert(0) += 1;
    }
    Ok(counts)
}
