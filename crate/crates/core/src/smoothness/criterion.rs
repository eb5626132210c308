use crate::groebner::{localized_dimension, radical_membership, Budget, Ideal};
use crate::polyalg::Poly;

use super::matrix::{cofactor_matrix, combinations, jacobian_matrix, nonzero_minors, MinorSelection, PolyMatrix};
use super::{ChartTriple, SmoothnessError};

type Result<T> = std::result::Result<T, SmoothnessError>;

/// Where a chart stands before any criterion is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartStatus {
    /// `V(I_X) ∩ D(q)` is empty.
    Empty,
    /// Codimension of `V(I_X) ∩ D(q)` in `V(I_W) ∩ D(q)`.
    Codim(u32),
}

/// Dimensions are taken after localizing at `q`.
pub fn chart_codimension(triple: &ChartTriple, budget: &Budget) -> Result<ChartStatus> {
    let dx = localized_dimension(triple.i_x(), triple.q(), budget)?;
    if dx < 0 {
        return Ok(ChartStatus::Empty);
    }
    let dw = localized_dimension(triple.i_w(), triple.q(), budget)?;
    Ok(ChartStatus::Codim((dw - dx).max(0) as u32))
}

/// The selection must pick all rows of the Jacobian of `I_W` and `r`
/// columns. Returns the relative derivatives of `f_{r+1}..f_s` with
/// respect to the variables outside the selection, each scaled by the
/// minor.
pub fn relative_jacobian(triple: &ChartTriple, sel: &MinorSelection) -> Result<PolyMatrix> {
    let r = triple.r();
    if triple.s() == 0 {
        return Ok(PolyMatrix::zeros(triple.ring(), 0, triple.ring().nvars()));
    }
    let jac = jacobian_matrix(triple.i_x().gens())?;
    if sel.size() != r || sel.rows() != (0..r).collect::<Vec<_>>().as_slice() || !sel.fits(&jac) {
        return Err(SmoothnessError::InvalidSelection(format!(
            "{sel:?} does not select {r} full rows of the Jacobian of I_W"
        )));
    }
    let det = jac.minor(sel)?;
    relative_with(&jac, r, sel, &det)
}

fn relative_with(jac: &PolyMatrix, r: usize, sel: &MinorSelection, det: &Poly) -> Result<PolyMatrix> {
    let ring = jac.ring();
    let n = jac.cols();
    let s = jac.rows();
    let adj = cofactor_matrix(&jac.submatrix(sel.rows(), sel.cols()))?;
    let free: Vec<usize> = (0..n).filter(|j| !sel.cols().contains(j)).collect();
    let mut entries = Vec::with_capacity((s - r) * free.len());
    for i in r..s {
        for &j in &free {
            // det·∂f_i/∂x_j − Σ ∂f_i/∂x_{c_b} · adj[b][a] · ∂f_{l_a}/∂x_j
            let mut e = det.try_mul(jac.get(i, j))?;
            for (b, &k) in sel.cols().iter().enumerate() {
                let dfi = jac.get(i, k);
                if dfi.is_zero() {
                    continue;
                }
                for (a, &l) in sel.rows().iter().enumerate() {
                    let t = adj.get(b, a).try_mul(jac.get(l, j))?;
                    if !t.is_zero() {
                        e = e.try_sub(&dfi.try_mul(&t)?)?;
                    }
                }
            }
            entries.push(e);
        }
    }
    Ok(PolyMatrix::new(ring, s - r, free.len(), entries)?)
}

/// True iff the locus where `I_X` has order at least two along `V(I_W)`
/// misses `D(q)`.
pub fn delta_check(triple: &ChartTriple, budget: &Budget) -> Result<bool> {
    let (r, s) = (triple.r(), triple.s());
    if s == r {
        return Ok(true);
    }
    let jac = jacobian_matrix(triple.i_x().gens())?;
    if r == 0 && triple.q().is_one() {
        let ideal = triple.i_x().plus(jac.entries())?;
        return Ok(ideal.is_unit(budget)?);
    }
    let jw = jac.submatrix(&(0..r).collect::<Vec<_>>(), &(0..jac.cols()).collect::<Vec<_>>());
    let selections = nonzero_minors(&jw, r, triple.i_x(), budget)?;
    let mut covered: Vec<Poly> = Vec::new();
    for (sel, det) in selections {
        if radical_membership(triple.q(), &triple.i_w().plus(&covered)?, budget)? {
            break;
        }
        covered.push(det.clone());
        let rel = relative_with(&jac, r, &sel, &det)?;
        let c_m = triple.i_x().plus(rel.entries())?;
        if !radical_membership(&det.try_mul(triple.q())?, &c_m, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relative Jacobian criterion: true iff `V(I_X) ∩ D(q)` is smooth.
pub fn embedded_jacobian(triple: &ChartTriple, budget: &Budget) -> Result<bool> {
    match chart_codimension(triple, budget)? {
        ChartStatus::Empty | ChartStatus::Codim(0) => Ok(true),
        ChartStatus::Codim(c) => embedded_jacobian_with(triple, c as usize, budget),
    }
}

pub(crate) fn embedded_jacobian_with(triple: &ChartTriple, c: usize, budget: &Budget) -> Result<bool> {
    let r = triple.r();
    let jac = jacobian_matrix(triple.i_x().gens())?;
    let jw = jac.submatrix(&(0..r).collect::<Vec<_>>(), &(0..jac.cols()).collect::<Vec<_>>());
    let mut selections = nonzero_minors(&jw, r, triple.i_x(), budget)?;
    let mut divides = None;
    for (k, (_, det)) in selections.iter().enumerate() {
        if triple.q().exact_div(det)?.is_some() {
            divides = Some(k);
            break;
        }
    }
    if let Some(k) = divides {
        selections = vec![selections.swap_remove(k)];
    }
    let mut covered: Vec<Poly> = Vec::new();
    for (sel, det) in selections {
        if radical_membership(triple.q(), &triple.i_w().plus(&covered)?, budget)? {
            break;
        }
        covered.push(det.clone());
        let rel = relative_with(&jac, r, &sel, &det)?;
        let mut minors = Vec::new();
        for rows in combinations(rel.rows(), c) {
            for cols in combinations(rel.cols(), c) {
                let m = rel.minor(&MinorSelection::new(rows.clone(), cols)?)?;
                if !m.is_zero() {
                    minors.push(m);
                }
            }
        }
        let j = triple.i_x().plus(&minors)?;
        if !radical_membership(&det.try_mul(triple.q())?, &j, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy single-removal pass: drops every entry whose removal keeps `q`
/// in the radical of `base + ⟨rest⟩`.
pub fn drop_redundant_minors(minors: &[Poly], q: &Poly, base: &Ideal, budget: &Budget) -> Result<Vec<Poly>> {
    let keep = redundant_filter(minors, q, base, budget)?;
    Ok(keep.into_iter().map(|k| minors[k].clone()).collect())
}

fn redundant_filter(minors: &[Poly], q: &Poly, base: &Ideal, budget: &Budget) -> Result<Vec<usize>> {
    if !radical_membership(q, &base.plus(minors)?, budget)? {
        return Err(SmoothnessError::Precondition(
            "q is not in the radical of base + minors".into(),
        ));
    }
    let mut keep: Vec<usize> = (0..minors.len()).collect();
    let mut pos = 0;
    // removal only shrinks the ideal, so one pass reaches a fixed point
    while pos < keep.len() && keep.len() > 1 {
        let rest: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != pos)
            .map(|(_, &k)| minors[k].clone())
            .collect();
        if radical_membership(q, &base.plus(&rest)?, budget)? {
            keep.remove(pos);
        } else {
            pos += 1;
        }
    }
    Ok(keep)
}

/// One descent step: finer charts, each embedded in a complete intersection
/// of one more equation, whose opens cover `V(I_X) ∩ D(q)`.
///
/// Requires `delta_check` to hold for the triple.
pub fn descent(triple: &ChartTriple, budget: &Budget) -> Result<Vec<ChartTriple>> {
    let (r, s) = (triple.r(), triple.s());
    if s == r {
        return Err(SmoothnessError::Precondition("I_W equals I_X, nothing to descend".into()));
    }
    let gens = triple.i_x().gens();
    let ring = triple.ring();
    let w_plus = |i: usize| Ideal::new(ring, gens[..r].iter().chain([&gens[i]]).cloned());
    let child = |i: usize, q: Poly| -> Result<ChartTriple> {
        let mut order: Vec<Poly> = gens[..r].to_vec();
        order.push(gens[i].clone());
        order.extend(gens[r..].iter().enumerate().filter(|(k, _)| r + k != i).map(|(_, g)| g.clone()));
        ChartTriple::new(w_plus(i)?, Ideal::new(ring, order)?, q, triple.depth() + 1)
    };

    // direct descent, trying cheap equations first
    let mut candidates: Vec<usize> = (r..s).collect();
    candidates.sort_by_key(|&i| (gens[i].total_degree().unwrap_or(0), i));
    for &i in &candidates {
        let w1 = w_plus(i)?;
        if radical_membership(triple.q(), &w1, budget)? {
            continue;
        }
        let probe = ChartTriple::new(triple.i_w().clone(), w1, triple.q().clone(), triple.depth())?;
        if delta_check(&probe, budget)? {
            return Ok(vec![child(i, triple.q().clone())?]);
        }
    }

    // covering by maximal minors of the Jacobians of f_1..f_r, f_i
    let gb = triple.i_x().groebner(budget)?;
    let mut minors: Vec<(Poly, usize)> = Vec::new();
    for i in r..s {
        let mut fs: Vec<Poly> = gens[..r].to_vec();
        fs.push(gens[i].clone());
        let jac = jacobian_matrix(&fs)?;
        let rows: Vec<usize> = (0..=r).collect();
        for cols in combinations(jac.cols(), r + 1) {
            let h = jac.minor(&MinorSelection::new(rows.clone(), cols)?)?;
            if !gb.normal_form(&h)?.is_zero() {
                minors.push((h, i));
            }
        }
    }
    let mut prefix = None;
    for k in 1..=minors.len() {
        let hs: Vec<Poly> = minors[..k].iter().map(|(h, _)| h.clone()).collect();
        if radical_membership(triple.q(), &triple.i_x().plus(&hs)?, budget)? {
            prefix = Some(k);
            break;
        }
    }
    let k = prefix.ok_or(SmoothnessError::NoCovering)?;
    let hs: Vec<Poly> = minors[..k].iter().map(|(h, _)| h.clone()).collect();
    let keep = redundant_filter(&hs, triple.q(), triple.i_x(), budget)?;
    keep.into_iter()
        .map(|j| {
            let (h, i) = &minors[j];
            child(*i, triple.q().try_mul(h)?)
        })
        .collect()
}

/// Sequential reference driver, stopping at the first singular chart.
pub fn hybrid_smoothness_test(triple: &ChartTriple, c: u32, budget: &Budget) -> Result<bool> {
    let codim = match chart_codimension(triple, budget)? {
        ChartStatus::Empty | ChartStatus::Codim(0) => return Ok(true),
        ChartStatus::Codim(k) => k,
    };
    if codim <= c {
        return embedded_jacobian_with(triple, codim as usize, budget);
    }
    if !delta_check(triple, budget)? {
        return Ok(false);
    }
    for child in descent(triple, budget)? {
        if !hybrid_smoothness_test(&child, c, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shape of the full chart tree, explored without stopping early.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    /// Charts examined.
    pub nodes: usize,
    /// Charts on which a criterion was applied and failed.
    pub singular_leaves: usize,
    pub max_depth: u32,
    pub smooth: bool,
}

/// Runs the driver over every branch and reports the size of the tree.
pub fn hybrid_tree(triple: &ChartTriple, c: u32, budget: &Budget) -> Result<TreeStats> {
    let mut stats = TreeStats {
        smooth: true,
        ..TreeStats::default()
    };
    walk(triple, c, budget, &mut stats)?;
    Ok(stats)
}

fn walk(triple: &ChartTriple, c: u32, budget: &Budget, stats: &mut TreeStats) -> Result<()> {
    stats.nodes += 1;
    stats.max_depth = stats.max_depth.max(triple.depth());
    let codim = match chart_codimension(triple, budget)? {
        ChartStatus::Empty | ChartStatus::Codim(0) => return Ok(()),
        ChartStatus::Codim(k) => k,
    };
    let ok = if codim <= c {
        embedded_jacobian_with(triple, codim as usize, budget)?
    } else if delta_check(triple, budget)? {
        for child in descent(triple, budget)? {
            walk(&child, c, budget, stats)?;
        }
        true
    } else {
        false
    };
    if !ok {
        stats.singular_leaves += 1;
        stats.smooth = false;
    }
    Ok(())
}
