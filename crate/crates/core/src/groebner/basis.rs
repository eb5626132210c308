use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::polyalg::{Monomial, Poly, PolyError, Ring};

use super::GroebnerError;

/// Resource limits for a single Gröbner computation, plus an optional
/// cooperative cancellation flag polled at every reduction step.
#[derive(Clone, Debug)]
pub struct Budget {
    pub max_basis: usize,
    pub max_reductions: u64,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_basis: 5_000,
            max_reductions: 5_000_000,
            cancel: None,
        }
    }
}

impl Budget {
    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn unlimited() -> Self {
        Self {
            max_basis: usize::MAX,
            max_reductions: u64::MAX,
            cancel: None,
        }
    }

    #[inline]
    fn checkpoint(&self, steps: &AtomicU64) -> Result<(), GroebnerError> {
        let n = steps.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if n > self.max_reductions {
            return Err(GroebnerError::BudgetExceeded(format!(
                "more than {} reduction steps",
                self.max_reductions
            )));
        }
        if let Some(flag) = &self.cancel {
            if flag.load(AtomicOrdering::Relaxed) {
                return Err(GroebnerError::Cancelled);
            }
        }
        Ok(())
    }
}

/// A reduced Gröbner basis: monic elements sorted ascending by leading
/// monomial, no leading monomial dividing another, tails fully reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    elements: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when the basis is `{1}`, i.e. the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_one()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().filter_map(|g| g.leading_monomial())
    }

    /// Remainder of `f` under multivariate division by the basis.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly, PolyError> {
        f.ring().check_same(&self.ring)?;
        let steps = AtomicU64::new(0);
        let refs: Vec<&Poly> = self.elements.iter().collect();
        reduce(f.clone(), &refs, &Budget::unlimited(), &steps).map_err(|e| match e {
            GroebnerError::Poly(p) => p,
            other => unreachable!("unlimited reduction failed: {other}"),
        })
    }

    pub(crate) fn from_reduced(ring: Ring, elements: Vec<Poly>) -> Self {
        Self { ring, elements }
    }
}

/// Fully reduces `f` by the monic polynomials in `basis`.
pub(crate) fn reduce(
    mut f: Poly,
    basis: &[&Poly],
    budget: &Budget,
    steps: &AtomicU64,
) -> Result<Poly, GroebnerError> {
    let field = *f.ring().field();
    // terms before `k` are irreducible and final
    let mut k = 0;
    while k < f.len() {
        let (m, c) = {
            let (m, c) = &f.terms()[k];
            (m.clone(), *c)
        };
        let divisor = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match divisor {
            Some(g) => {
                budget.checkpoint(steps)?;
                let (lm, lc) = g.leading_term().expect("nonzero divisor");
                let q = m.div(lm).expect("divides");
                let coef = field.neg(field.mul(c, field.inv(lc)));
                f.add_scaled_term(coef, &q, g)?;
            }
            None => k += 1,
        }
    }
    Ok(f)
}

/// S-polynomial of two monic polynomials.
fn s_polynomial(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    let lf = f.leading_monomial().expect("nonzero");
    let lg = g.leading_monomial().expect("nonzero");
    let l = lf.lcm(lg);
    let field = *f.ring().field();
    let mut s = f.mul_term(field.inv(f.leading_coefficient().unwrap()), &l.div(lf).unwrap())?;
    let cg = field.neg(field.inv(g.leading_coefficient().unwrap()));
    s.add_scaled_term(cg, &l.div(lg).unwrap(), g)?;
    Ok(s)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger's algorithm with the normal selection strategy and the
/// Gebauer–Möller installation of the product and chain criteria.
pub(crate) fn buchberger(ring: &Ring, gens: &[Poly], budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    let order = ring.order();
    let steps = AtomicU64::new(0);
    let mut polys: Vec<Poly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let unit = || GroebnerBasis::from_reduced(ring.clone(), vec![Poly::one(ring)]);

    let mut inputs: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(Poly::monic).collect();
    if inputs.iter().any(Poly::is_constant) {
        return Ok(unit());
    }
    inputs.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    inputs.dedup();
    for h in inputs {
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }

    while let Some(pos) = select_pair(&pairs, ring) {
        let pair = pairs.swap_remove(pos);
        let s = s_polynomial(&polys[pair.i], &polys[pair.j])?;
        let basis: Vec<&Poly> = active.iter().map(|&i| &polys[i]).collect();
        let h = reduce(s, &basis, budget, &steps)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit());
        }
        if active.len() >= budget.max_basis {
            return Err(GroebnerError::BudgetExceeded(format!(
                "basis grew beyond {} elements",
                budget.max_basis
            )));
        }
        polys.push(h.monic());
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }

    // minimal basis: the update step already discards elements whose leading
    // monomial is divisible by a newer one, but inputs may still overlap
    let mut minimal: Vec<Poly> = Vec::new();
    let mut cands: Vec<&Poly> = active.iter().map(|&i| &polys[i]).collect();
    cands.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for (k, g) in cands.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = cands.iter().enumerate().any(|(l, h)| {
            let hl = h.leading_monomial().unwrap();
            l != k && hl.divides(lm) && (hl != lm || l < k)
        });
        if !redundant {
            minimal.push((*g).clone());
        }
    }
    // interreduce tails
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, g)| g)
            .collect();
        let g = reduce(minimal[k].clone(), &others, budget, &steps)?;
        reduced.push(g.monic());
    }
    reduced.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    Ok(GroebnerBasis::from_reduced(ring.clone(), reduced))
}

fn select_pair(pairs: &[Pair], ring: &Ring) -> Option<usize> {
    let order = ring.order();
    pairs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.lcm
                .degree()
                .cmp(&b.lcm.degree())
                .then_with(|| order.cmp(&a.lcm, &b.lcm))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
        })
        .map(|(k, _)| k)
}

fn update(polys: &[Poly], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = polys[h].leading_monomial().unwrap().clone();
    let lm = |i: usize| polys[i].leading_monomial().unwrap();

    let mut candidates: Vec<Pair> = active
        .iter()
        .map(|&g| Pair {
            i: g,
            j: h,
            lcm: lh.lcm(lm(g)),
        })
        .collect();

    // chain criterion among the new pairs
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = candidates.pop() {
        let coprime = lh.is_coprime(lm(p.i));
        let dominated = candidates
            .iter()
            .chain(kept.iter())
            .any(|o| o.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p);
        }
    }
    // product criterion
    let fresh: Vec<Pair> = kept
        .into_iter()
        .filter(|p| !lh.is_coprime(lm(p.i)))
        .collect();

    // prune old pairs whose lcm is a proper multiple via the new element
    pairs.retain(|p| {
        !lh.divides(&p.lcm)
            || lh.lcm(lm(p.i)) == p.lcm
            || lh.lcm(lm(p.j)) == p.lcm
    });
    pairs.extend(fresh);

    active.retain(|&g| !lh.divides(lm(g)));
    active.push(h);
}
