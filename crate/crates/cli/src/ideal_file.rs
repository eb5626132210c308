//! Plain-text ideal files.
//!
//! ```text
//! # comment
//! char 103
//! vars x y z
//! mode projective
//! known radical
//! x^2 + y^2 - z^2
//! ```
//!
//! `char` and `vars` come first, in that order. `mode` and `known` lines may
//! follow, then one generator per line.

use std::fmt;
use std::path::Path;

use hysmooth_core::groebner::Ideal;
use hysmooth_core::polyalg::{parse_poly, PolyError, Ring};
use hysmooth_core::smoothness::Mode;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFile {
    pub characteristic: u64,
    pub vars: Vec<String>,
    pub generators: Vec<String>,
    pub mode: Option<Mode>,
    pub known_equidimensional: bool,
    pub known_radical: bool,
    header: [usize; 2],
    lines: Vec<usize>,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut characteristic = None;
        let mut vars: Option<Vec<String>> = None;
        let mut file = IdealFile {
            characteristic: 0,
            vars: Vec::new(),
            generators: Vec::new(),
            mode: None,
            known_equidimensional: false,
            known_radical: false,
            header: [1, 1],
            lines: Vec::new(),
        };
        let mut last = 0;
        for (idx, raw) in text.lines().enumerate() {
            let no = idx + 1;
            last = no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            if characteristic.is_none() {
                if head != "char" {
                    return Err(err(no, "expected `char <p>`"));
                }
                let p = rest.parse::<u64>().map_err(|_| err(no, format!("bad characteristic `{rest}`")))?;
                characteristic = Some(p);
                file.header[0] = no;
                continue;
            }
            if vars.is_none() {
                if head != "vars" {
                    return Err(err(no, "expected `vars <name> ...`"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(err(no, "no variables"));
                }
                vars = Some(names);
                file.header[1] = no;
                continue;
            }
            let directive = file.generators.is_empty();
            match head {
                "char" | "vars" => return Err(err(no, format!("repeated `{head}`"))),
                "mode" if directive => {
                    if file.mode.is_some() {
                        return Err(err(no, "repeated `mode`"));
                    }
                    file.mode = Some(rest.parse::<Mode>().map_err(|e| err(no, e))?);
                }
                "known" if directive => {
                    for flag in rest.split_whitespace() {
                        match flag {
                            "equidimensional" => file.known_equidimensional = true,
                            "radical" => file.known_radical = true,
                            other => return Err(err(no, format!("unknown flag `{other}`"))),
                        }
                    }
                }
                "mode" | "known" => return Err(err(no, format!("`{head}` after the first generator"))),
                _ => {
                    file.generators.push(line.to_string());
                    file.lines.push(no);
                }
            }
        }
        file.characteristic = characteristic.ok_or_else(|| err(last.max(1), "missing `char` line"))?;
        file.vars = vars.ok_or_else(|| err(last.max(1), "missing `vars` line"))?;
        if file.generators.is_empty() {
            return Err(err(last.max(1), "no generators"));
        }
        file.ring()?;
        file.to_ideal()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, crate::CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text).map_err(|e| crate::CliError::Parse {
            path: path.display().to_string(),
            source: e,
        })
    }

    pub fn ring(&self) -> Result<Ring, ParseError> {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        Ring::degrevlex(self.characteristic, &names).map_err(|e| {
            let line = match e {
                PolyError::InvalidModulus(_) => self.header[0],
                _ => self.header[1],
            };
            err(line, e.to_string())
        })
    }

    pub fn to_ideal(&self) -> Result<Ideal, ParseError> {
        let ring = self.ring()?;
        let mut polys = Vec::with_capacity(self.generators.len());
        for (g, &line) in self.generators.iter().zip(&self.lines) {
            polys.push(parse_poly(g, &ring).map_err(|e| err(line, e.to_string()))?);
        }
        Ideal::new(&ring, polys).map_err(|e| err(self.lines[0], e.to_string()))
    }
}

impl fmt::Display for IdealFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "char {}", self.characteristic)?;
        writeln!(f, "vars {}", self.vars.join(" "))?;
        if let Some(m) = self.mode {
            writeln!(f, "mode {m}")?;
        }
        match (self.known_equidimensional, self.known_radical) {
            (true, true) => writeln!(f, "known equidimensional radical")?,
            (true, false) => writeln!(f, "known equidimensional")?,
            (false, true) => writeln!(f, "known radical")?,
            (false, false) => {}
        }
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
