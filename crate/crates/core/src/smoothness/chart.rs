use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::groebner::Ideal;
use crate::polyalg::{MonomialOrder, Poly, Ring};

use super::SmoothnessError;

/// `(I_W, I_X, q)` together with the descent depth that produced it.
///
/// The generators of `I_W` are a prefix of those of `I_X`.
#[derive(Clone, Debug)]
pub struct ChartTriple {
    i_w: Ideal,
    i_x: Ideal,
    q: Poly,
    depth: u32,
}

impl ChartTriple {
    pub fn new(i_w: Ideal, i_x: Ideal, q: Poly, depth: u32) -> Result<Self, SmoothnessError> {
        i_w.ring().check_same(i_x.ring())?;
        q.ring().check_same(i_x.ring())?;
        if q.is_zero() {
            return Err(SmoothnessError::InvalidChart("q is zero".into()));
        }
        let r = i_w.gens().len();
        if r > i_x.gens().len() || i_w.gens() != &i_x.gens()[..r] {
            return Err(SmoothnessError::InvalidChart(
                "generators of I_W are not a prefix of those of I_X".into(),
            ));
        }
        Ok(Self { i_w, i_x, q, depth })
    }

    /// The chart `(⟨0⟩, I, 1)` of the whole affine space.
    pub fn affine(i_x: Ideal) -> Self {
        let ring = i_x.ring().clone();
        Self {
            i_w: Ideal::zero(&ring),
            q: Poly::one(&ring),
            i_x,
            depth: 0,
        }
    }

    pub fn i_w(&self) -> &Ideal {
        &self.i_w
    }

    pub fn i_x(&self) -> &Ideal {
        &self.i_x
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn ring(&self) -> &Ring {
        self.i_x.ring()
    }

    /// Number of generators of `I_W`.
    pub fn r(&self) -> usize {
        self.i_w.gens().len()
    }

    /// Number of generators of `I_X`.
    pub fn s(&self) -> usize {
        self.i_x.gens().len()
    }

    pub fn summary(&self) -> ChartSummary {
        let strs = |i: &Ideal| i.gens().iter().map(|g| g.to_string()).collect();
        ChartSummary {
            vars: self.ring().vars().to_vec(),
            i_w: strs(&self.i_w),
            i_x: strs(&self.i_x),
            q: self.q.to_string(),
            depth: self.depth,
        }
    }
}

impl fmt::Display for ChartTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.summary();
        write!(
            f,
            "(<{}>, <{}>, {}) depth {}",
            s.i_w.join(", "),
            s.i_x.join(", "),
            s.q,
            s.depth
        )
    }
}

/// Printable form of a chart, used in reports and traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSummary {
    pub vars: Vec<String>,
    pub i_w: Vec<String>,
    pub i_x: Vec<String>,
    pub q: String,
    pub depth: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Affine,
    Projective,
    Cone,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "affine" => Ok(Mode::Affine),
            "projective" => Ok(Mode::Projective),
            "cone" => Ok(Mode::Cone),
            other => Err(format!("unknown mode `{other}` (expected affine, projective or cone)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Affine => "affine",
            Mode::Projective => "projective",
            Mode::Cone => "cone",
        })
    }
}

/// Splits the input into the affine charts the test runs on.
///
/// * affine: the single chart `(⟨0⟩, I, 1)`;
/// * projective: one chart per variable, setting it to 1 and dropping it;
/// * cone: one chart per variable `x_i` of the punctured cone, given by
///   `I + ⟨t·x_i − 1⟩` in the ring with an extra variable `t`.
pub fn chart_decompose(ideal: &Ideal, mode: Mode) -> Result<Vec<ChartTriple>, SmoothnessError> {
    if mode != Mode::Affine {
        if let Some(g) = ideal.gens().iter().find(|g| !g.is_homogeneous()) {
            return Err(SmoothnessError::NotHomogeneous(g.to_string()));
        }
    }
    let ring = ideal.ring();
    let n = ring.nvars();
    match mode {
        Mode::Affine => Ok(vec![ChartTriple::affine(ideal.clone())]),
        Mode::Projective => (0..n)
            .map(|i| {
                let sub = ring.without_var(i);
                let gens = ideal
                    .gens()
                    .iter()
                    .map(|g| g.substitute_drop(i, 1, &sub))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ChartTriple::affine(Ideal::new(&sub, gens)?))
            })
            .collect(),
        Mode::Cone => {
            let ext = ring.extend("t", MonomialOrder::DegRevLex);
            let t = Poly::var(&ext, n);
            (0..n)
                .map(|i| {
                    let txi = t.try_mul(&Poly::var(&ext, i))?.try_sub(&Poly::one(&ext))?;
                    let gens = ideal.gens().iter().map(|g| g.extend_to(&ext)).chain([txi]);
                    Ok(ChartTriple::affine(Ideal::new(&ext, gens)?))
                })
                .collect()
        }
    }
}
