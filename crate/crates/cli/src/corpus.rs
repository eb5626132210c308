use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::ideal_file::IdealFile;
use crate::report::{run_file, Settings};
use crate::CliError;

/// Ideal files in `dir` (by `.ideal` extension), sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "ideal") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Reads the `.expected` sidecar: `smooth` or `singular`.
pub fn expected_verdict(ideal: &Path) -> Result<bool, CliError> {
    let side = ideal.with_extension("expected");
    let text = fs::read_to_string(&side).map_err(|e| CliError::io(&side, e))?;
    match text.trim() {
        "smooth" => Ok(true),
        "singular" => Ok(false),
        other => Err(CliError::Corpus(format!(
            "{}: expected `smooth` or `singular`, found `{other}`",
            side.display()
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusRow {
    pub name: String,
    pub expected: bool,
    pub smooth: bool,
    pub charts: usize,
    pub wall_time_s: f64,
}

impl CorpusRow {
    pub fn passed(&self) -> bool {
        self.expected == self.smooth
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRow>,
}

impl CorpusReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures() == 0 {
            0
        } else {
            1
        }
    }
}

fn word(smooth: bool) -> &'static str {
    if smooth {
        "smooth"
    } else {
        "singular"
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        writeln!(f, "{:width$}  {:8}  {:8}  {:>6}  {:>9}  result", "name", "expected", "got", "charts", "time_s")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:width$}  {:8}  {:8}  {:>6}  {:>9.4}  {}",
                r.name,
                word(r.expected),
                word(r.smooth),
                r.charts,
                r.wall_time_s,
                if r.passed() { "pass" } else { "FAIL" }
            )?;
        }
        write!(f, "{} passed, {} failed", self.rows.len() - self.failures(), self.failures())
    }
}

/// Checks every ideal in `dir` against its sidecar.
pub fn run_corpus(dir: &Path, settings: &Settings) -> Result<CorpusReport, CliError> {
    let files = corpus_files(dir)?;
    if files.is_empty() {
        return Err(CliError::Corpus(format!("no .ideal files in {}", dir.display())));
    }
    let mut rows = Vec::with_capacity(files.len());
    for path in files {
        let expected = expected_verdict(&path)?;
        let file = IdealFile::read(&path)?;
        let (outcome, _, _) = run_file(&file, settings, None)?;
        rows.push(CorpusRow {
            name: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            expected,
            smooth: outcome.smooth,
            charts: outcome.charts.len(),
            wall_time_s: outcome.run.wall_time.as_secs_f64(),
        });
    }
    Ok(CorpusReport { rows })
}
