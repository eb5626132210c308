use std::io::Write;

use hysmooth_core::gamma::{run_smoothness_net, ChartRecord, GammaOptions, GammaOutcome};
use hysmooth_core::groebner::Budget;
use hysmooth_core::smoothness::{chart_decompose, ChartSummary, ChartTriple, Mode};
use serde::Serialize;

use crate::ideal_file::IdealFile;
use crate::CliError;

pub const DEFAULT_CODIM_LIMIT: u32 = 2;

/// Run parameters shared by single checks and corpus runs.
#[derive(Debug, Clone)]
pub struct Settings {
    /// Overrides the file's `mode` line.
    pub mode: Option<Mode>,
    pub codim_limit: u32,
    pub threads: usize,
    pub seed: u64,
    /// Cap on polynomial reductions per Gröbner computation.
    pub budget: Option<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            mode: None,
            codim_limit: DEFAULT_CODIM_LIMIT,
            threads: 1,
            seed: 0,
            budget: None,
        }
    }
}

impl Settings {
    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(k) = self.budget {
            b.max_reductions = k;
        }
        b
    }

    pub fn mode_for(&self, file: &IdealFile) -> Mode {
        self.mode.or(file.mode).unwrap_or(Mode::Affine)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub smooth: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub path: Vec<u32>,
    pub chart: ChartSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub wall_time_s: f64,
    pub firings: u64,
    pub cancelled_tasks: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: String,
    pub mode: Mode,
    pub codim_limit: u32,
    pub threads: usize,
    pub seed: u64,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub top_charts: usize,
    pub charts_processed: usize,
    pub charts: Vec<ChartRecord>,
    pub timings: Timings,
    pub heureka: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.verdict.smooth {
            0
        } else {
            1
        }
    }
}

pub const WARN_EMPTY: &str = "the input ideal defines the empty set; the verdict is vacuous";
pub const WARN_EQUIDIMENSIONAL: &str = "equidimensionality of the input is assumed, not verified";
pub const WARN_RADICAL: &str = "the input is not known to be radical; the singularity may come from non-reduced structure";

/// Runs the net on one ideal file and assembles the report.
pub fn check(
    file: &IdealFile,
    input: &str,
    settings: &Settings,
    trace: Option<&mut dyn Write>,
) -> Result<Report, CliError> {
    let (outcome, mode, charts) = run_file(file, settings, trace)?;
    let budget = settings.budget();
    let mut warnings = Vec::new();
    let mut empty = true;
    for c in &charts {
        empty &= c.i_x().is_unit(&budget).map_err(|e| CliError::Algebra(e.to_string()))?;
    }
    if empty {
        warnings.push(WARN_EMPTY.to_string());
    }
    if !file.known_equidimensional {
        warnings.push(WARN_EQUIDIMENSIONAL.to_string());
    }
    if !outcome.smooth && !file.known_radical {
        warnings.push(WARN_RADICAL.to_string());
    }
    let run = &outcome.run;
    Ok(Report {
        input: input.to_string(),
        mode,
        codim_limit: settings.codim_limit,
        threads: settings.threads,
        seed: settings.seed,
        verdict: Verdict {
            smooth: outcome.smooth,
            warnings,
        },
        witness: outcome.witness.as_ref().map(|w| Witness {
            path: w.path.clone(),
            chart: w.triple.summary(),
        }),
        top_charts: charts.len(),
        charts_processed: outcome.charts.len(),
        timings: Timings {
            wall_time_s: run.wall_time.as_secs_f64(),
            firings: run.firings,
            cancelled_tasks: run.cancelled_tasks,
        },
        heureka: run.heureka,
        charts: outcome.charts,
    })
}

/// Decomposes the file into charts and runs the net on them.
pub fn run_file(
    file: &IdealFile,
    settings: &Settings,
    trace: Option<&mut dyn Write>,
) -> Result<(GammaOutcome, Mode, Vec<ChartTriple>), CliError> {
    let mode = settings.mode_for(file);
    let ideal = file.to_ideal().map_err(|e| CliError::Mode(e.to_string()))?;
    let charts = chart_decompose(&ideal, mode).map_err(|e| CliError::Mode(e.to_string()))?;
    let opts = GammaOptions {
        codim_limit: settings.codim_limit,
        workers: settings.threads,
        seed: settings.seed,
        budget: settings.budget(),
        trace,
    };
    let outcome = run_smoothness_net(&charts, opts).map_err(|e| CliError::Run(e.to_string()))?;
    Ok((outcome, mode, charts))
}
