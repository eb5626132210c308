use std::fmt;

use crate::groebner::{Budget, Ideal};
use crate::polyalg::{Poly, PolyError, Ring};

use super::SmoothnessError;

/// Dense matrix of polynomials over a common ring, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(ring: &Ring, rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self, PolyError> {
        assert_eq!(entries.len(), rows * cols, "matrix is not rectangular");
        for e in &entries {
            e.ring().check_same(ring)?;
        }
        Ok(Self {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>) -> Result<Self, PolyError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "matrix is not rectangular");
        Self::new(ring, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Self {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Poly::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = Poly::one(ring);
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        PolyMatrix {
            ring: self.ring.clone(),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        self.ring.check_same(&other.ring)?;
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&self.ring);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                out.push(acc);
            }
        }
        PolyMatrix::new(&self.ring, self.rows, other.cols, out)
    }

    pub fn scale(&self, f: &Poly) -> Result<PolyMatrix, PolyError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.try_mul(f))
            .collect::<Result<_, _>>()?;
        PolyMatrix::new(&self.ring, self.rows, self.cols, entries)
    }

    /// Determinant by Laplace expansion along the first row.
    pub fn determinant(&self) -> Result<Poly, SmoothnessError> {
        if !self.is_square() {
            return Err(SmoothnessError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_of(&idx, &idx)?)
    }

    fn det_of(&self, rows: &[usize], cols: &[usize]) -> Result<Poly, PolyError> {
        match rows.len() {
            0 => Ok(Poly::one(&self.ring)),
            1 => Ok(self.get(rows[0], cols[0]).clone()),
            2 => {
                let a = self.get(rows[0], cols[0]).try_mul(self.get(rows[1], cols[1]))?;
                let b = self.get(rows[0], cols[1]).try_mul(self.get(rows[1], cols[0]))?;
                a.try_sub(&b)
            }
            _ => {
                let mut acc = Poly::zero(&self.ring);
                let sub_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let pivot = self.get(rows[0], c);
                    if pivot.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = pivot.try_mul(&self.det_of(sub_rows, &sub_cols)?)?;
                    acc = if k % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
                }
                Ok(acc)
            }
        }
    }

    /// The minor of the given row and column selection.
    pub fn minor(&self, sel: &MinorSelection) -> Result<Poly, PolyError> {
        self.det_of(&sel.rows, &sel.cols)
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over {:?}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A square submatrix given by strictly increasing row and column indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorSelection {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSelection {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, SmoothnessError> {
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if rows.len() != cols.len() || !increasing(&rows) || !increasing(&cols) {
            return Err(SmoothnessError::InvalidSelection(format!("rows {rows:?}, cols {cols:?}")));
        }
        Ok(Self { rows, cols })
    }

    pub fn empty() -> Self {
        Self {
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn fits(&self, m: &PolyMatrix) -> bool {
        self.rows.iter().all(|&i| i < m.rows()) && self.cols.iter().all(|&j| j < m.cols())
    }
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Jacobian matrix `(∂f_i/∂x_j)`.
pub fn jacobian_matrix(polys: &[Poly]) -> Result<PolyMatrix, SmoothnessError> {
    let ring = polys
        .first()
        .map(|f| f.ring().clone())
        .ok_or_else(|| SmoothnessError::Precondition("empty polynomial list".into()))?;
    let n = ring.nvars();
    let mut entries = Vec::with_capacity(polys.len() * n);
    for f in polys {
        f.ring().check_same(&ring)?;
        for j in 0..n {
            entries.push(f.partial_derivative(j)?);
        }
    }
    Ok(PolyMatrix::new(&ring, polys.len(), n, entries)?)
}

/// All `r×r` selections whose determinant is nonzero modulo `ideal`, in
/// lexicographic order of `(rows, cols)`, paired with their determinants.
pub(crate) fn nonzero_minors(
    m: &PolyMatrix,
    r: usize,
    ideal: &Ideal,
    budget: &Budget,
) -> Result<Vec<(MinorSelection, Poly)>, SmoothnessError> {
    if r > m.rows().min(m.cols()) {
        return Err(SmoothnessError::Precondition(format!(
            "minor size {r} exceeds a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let gb = ideal.groebner(budget)?;
    let mut out = Vec::new();
    for rows in combinations(m.rows(), r) {
        for cols in combinations(m.cols(), r) {
            let sel = MinorSelection {
                rows: rows.clone(),
                cols,
            };
            let det = m.minor(&sel)?;
            if !gb.normal_form(&det)?.is_zero() {
                out.push((sel, det));
            }
        }
    }
    Ok(out)
}

pub fn nonzero_minor_selections(
    m: &PolyMatrix,
    r: usize,
    ideal: &Ideal,
    budget: &Budget,
) -> Result<Vec<MinorSelection>, SmoothnessError> {
    Ok(nonzero_minors(m, r, ideal, budget)?
        .into_iter()
        .map(|(s, _)| s)
        .collect())
}

/// Adjugate `A` of a square matrix: `A·M = M·A = det(M)·E`.
pub fn cofactor_matrix(m: &PolyMatrix) -> Result<PolyMatrix, SmoothnessError> {
    if !m.is_square() {
        return Err(SmoothnessError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let ring = m.ring();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // A[i][j] = (−1)^{i+j} · det of M without row j and column i
            let rows: Vec<usize> = (0..n).filter(|&x| x != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&x| x != i).collect();
            let d = m.det_of(&rows, &cols)?;
            entries.push(if (i + j) % 2 == 0 { d } else { -&d });
        }
    }
    Ok(PolyMatrix::new(ring, n, n, entries)?)
}
