//! The hybrid smoothness test.
//!
//! A [`ChartTriple`] `(I_W, I_X, q)` describes an affine chart `D(q)` on
//! which `V(I_W)` is a smooth complete intersection containing `V(I_X)`.
//! The test either proves `V(I_X) ∩ D(q)` smooth with a relative Jacobian
//! criterion, or checks that the locus of order two is empty and descends
//! to a finer embedding covering the chart by smaller principal opens.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! several threads at once.

mod chart;
mod criterion;
mod matrix;

use thiserror::Error;

use crate::groebner::GroebnerError;
use crate::polyalg::PolyError;

pub use chart::{chart_decompose, ChartSummary, ChartTriple, Mode};
pub use criterion::{
    chart_codimension, delta_check, descent, drop_redundant_minors, embedded_jacobian,
    hybrid_smoothness_test, hybrid_tree, relative_jacobian, ChartStatus, TreeStats,
};
pub(crate) use criterion::embedded_jacobian_with;
pub use matrix::{
    cofactor_matrix, jacobian_matrix, nonzero_minor_selections, MinorSelection, PolyMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmoothnessError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid minor selection: {0}")]
    InvalidSelection(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("generator `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no covering by minors found for the chart")]
    NoCovering,
}
