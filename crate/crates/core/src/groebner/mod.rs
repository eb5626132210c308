//! Gröbner bases and the ideal predicates built on them.
//!
//! Every ideal lives in a ring with a fixed monomial order (degrevlex for
//! everything the public API constructs). Gröbner bases are cached on the
//! ideal the first time they are computed successfully.

mod basis;

use std::sync::OnceLock;

use thiserror::Error;

use crate::polyalg::{MonomialOrder, Poly, PolyError, Ring};

pub use basis::{Budget, GroebnerBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("computation cancelled")]
    Cancelled,
    #[error("cannot saturate by the zero polynomial")]
    ZeroSaturator,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finitely generated ideal. Zero generators are dropped on construction.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    gb: OnceLock<GroebnerBasis>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: impl IntoIterator<Item = Poly>) -> Result<Self, PolyError> {
        let mut out = Vec::new();
        for g in gens {
            g.ring().check_same(ring)?;
            if !g.is_zero() {
                out.push(g);
            }
        }
        Ok(Self {
            ring: ring.clone(),
            gens: out,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::new(ring, []).expect("empty generator list")
    }

    pub fn unit(ring: &Ring) -> Self {
        Self::new(ring, [Poly::one(ring)]).expect("same ring")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// The sum `I + ⟨extra⟩`.
    pub fn plus(&self, extra: &[Poly]) -> Result<Ideal, PolyError> {
        Ideal::new(&self.ring, self.gens.iter().chain(extra).cloned())
    }

    /// Reduced Gröbner basis, computed on first use.
    pub fn groebner(&self, budget: &Budget) -> Result<&GroebnerBasis, GroebnerError> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = basis::buchberger(&self.ring, &self.gens, budget)?;
        Ok(self.gb.get_or_init(|| gb))
    }

    pub fn cached_groebner(&self) -> Option<&GroebnerBasis> {
        self.gb.get()
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool, GroebnerError> {
        Ok(self.groebner(budget)?.is_unit())
    }

    pub fn contains(&self, f: &Poly, budget: &Budget) -> Result<bool, GroebnerError> {
        ideal_membership(f, self, budget)
    }

    fn from_basis(gb: GroebnerBasis) -> Self {
        let cell = OnceLock::new();
        let gens = gb.elements().to_vec();
        let ring = gb.ring().clone();
        let _ = cell.set(gb);
        Self { ring, gens, gb: cell }
    }
}

pub fn groebner_basis(ideal: &Ideal, budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    ideal.groebner(budget).cloned()
}

pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Result<Poly, PolyError> {
    gb.normal_form(f)
}

pub fn ideal_membership(f: &Poly, ideal: &Ideal, budget: &Budget) -> Result<bool, GroebnerError> {
    f.ring().check_same(ideal.ring())?;
    if f.is_zero() {
        return Ok(true);
    }
    Ok(ideal.groebner(budget)?.normal_form(f)?.is_zero())
}

/// Rabinowitsch ideal `I + ⟨t·f − 1⟩` in the ring with one more trailing
/// variable `t` under `order`.
fn rabinowitsch(ideal: &Ideal, f: &Poly, order: MonomialOrder) -> Result<Ideal, PolyError> {
    let ring = ideal.ring().extend("t", order);
    let t = Poly::var(&ring, ring.nvars() - 1);
    let tf = t.try_mul(&f.extend_to(&ring))?;
    let gens = ideal
        .gens()
        .iter()
        .map(|g| g.extend_to(&ring))
        .chain([tf.try_sub(&Poly::one(&ring))?]);
    Ideal::new(&ring, gens)
}

/// Whether `f` lies in the radical of `ideal`.
pub fn radical_membership(f: &Poly, ideal: &Ideal, budget: &Budget) -> Result<bool, GroebnerError> {
    f.ring().check_same(ideal.ring())?;
    if f.is_zero() {
        return Ok(true);
    }
    if let Some(gb) = ideal.cached_groebner() {
        if gb.normal_form(f)?.is_zero() {
            return Ok(true);
        }
    }
    if f.is_constant() {
        return ideal.is_unit(budget);
    }
    rabinowitsch(ideal, f, MonomialOrder::DegRevLex)?.is_unit(budget)
}

/// Krull dimension of `R/I`; −1 for the unit ideal.
pub fn ideal_dimension(ideal: &Ideal, budget: &Budget) -> Result<i64, GroebnerError> {
    let gb = ideal.groebner(budget)?;
    Ok(dimension_of_basis(gb))
}

pub(crate) fn dimension_of_basis(gb: &GroebnerBasis) -> i64 {
    if gb.is_unit() {
        return -1;
    }
    let n = gb.ring().nvars();
    let supports: Vec<u64> = gb
        .leading_monomials()
        .map(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    let mut best = 0;
    independent_search(n, &supports, 0, 0, 0, &mut best);
    best as i64
}

/// Depth-first search for the largest variable set containing no leading
/// monomial support. Independence is closed under subsets, so a dependent
/// set prunes its whole subtree.
fn independent_search(n: usize, supports: &[u64], next: usize, set: u64, size: usize, best: &mut usize) {
    if size > *best {
        *best = size;
    }
    if size + (n - next) <= *best {
        return;
    }
    for v in next..n {
        let s = set | (1 << v);
        if supports.iter().all(|&m| m & !s != 0) {
            independent_search(n, supports, v + 1, s, size + 1, best);
        }
    }
}

/// The saturation `I : q^∞`, by eliminating `t` from `I + ⟨t·q − 1⟩`.
pub fn saturate(ideal: &Ideal, q: &Poly, budget: &Budget) -> Result<Ideal, GroebnerError> {
    q.ring().check_same(ideal.ring())?;
    if q.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    if q.is_constant() {
        return Ok(ideal.clone());
    }
    let ext = rabinowitsch(ideal, q, MonomialOrder::Elimination { tail: 1 })?;
    let gb = ext.groebner(budget)?;
    let ring = ideal.ring();
    // under the elimination order an element whose leading monomial is free
    // of t is free of t altogether
    let elements: Vec<Poly> = gb
        .elements()
        .iter()
        .filter_map(|g| g.restrict_to(ring))
        .collect();
    Ok(Ideal::from_basis(GroebnerBasis::from_reduced(ring.clone(), elements)))
}

/// `dim(I : q^∞)`, computed as the dimension of `I + ⟨t·q − 1⟩` with the
/// extra variable appended in degrevlex.
pub fn localized_dimension(ideal: &Ideal, q: &Poly, budget: &Budget) -> Result<i64, GroebnerError> {
    q.ring().check_same(ideal.ring())?;
    if q.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    if q.is_constant() {
        return ideal_dimension(ideal, budget);
    }
    let ext = rabinowitsch(ideal, q, MonomialOrder::DegRevLex)?;
    // V(I) ∩ D(q) is isomorphic to the graph of 1/q over it
    ideal_dimension(&ext, budget)
}
