use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Monomial, MonomialOrder, PolyError, Ring};

/// A sparse polynomial over `F_p`.
///
/// Terms are kept sorted descending by the ring's monomial order and carry
/// nonzero coefficients only; the zero polynomial has no terms.
#[derive(Clone)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Self {
        Self {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        let c = ring.field().from_i64(c);
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    /// The variable `x_var` (0-based).
    pub fn var(ring: &Ring, var: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), var, 1), 1)
    }

    pub fn term(ring: &Ring, m: Monomial, c: u32) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let c = ring.field().from_u64(c as u64);
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds the canonical polynomial from arbitrary (possibly repeated,
    /// unreduced) terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let order = ring.order();
        let field = *ring.field();
        let mut v: Vec<(Monomial, u32)> = terms
            .into_iter()
            .map(|(m, c)| (m, field.from_u64(c)))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        Self {
            ring: ring.clone(),
            terms: out,
        }
    }

    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// True for a nonzero constant.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.first().map(|(m, c)| (m, *c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<u32> {
        self.terms.first().map(|(_, c)| *c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    /// True when `x_var` occurs in some term.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[var] > 0)
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.ring.check_same(&other.ring)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.ring.check_same(&other.ring)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.ring.check_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        // multiply the shorter one term by term into the longer one
        let (a, b) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Poly::zero(&self.ring);
        for (m, c) in &a.terms {
            acc.add_scaled_term(*c, m, b)?;
        }
        Ok(acc)
    }

    fn combine(&self, other: &Poly, subtract: bool) -> Poly {
        let field = *self.ring.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if subtract { field.neg(b[j].1) } else { b[j].1 };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract {
                        field.sub(a[i].1, b[j].1)
                    } else {
                        field.add(a[i].1, b[j].1)
                    };
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| {
            (m.clone(), if subtract { field.neg(*c) } else { *c })
        }));
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    /// `self += c * m * g` in place. This is the inner step of polynomial
    /// reduction.
    pub(crate) fn add_scaled_term(
        &mut self,
        c: u32,
        m: &Monomial,
        g: &Poly,
    ) -> Result<(), PolyError> {
        if c == 0 || g.is_zero() {
            return Ok(());
        }
        let field = *self.ring.field();
        let order = self.ring.order();
        let a = std::mem::take(&mut self.terms);
        let mut out = Vec::with_capacity(a.len() + g.len());
        let mut ai = a.into_iter().peekable();
        for (gm, gc) in &g.terms {
            let pm = gm.mul(m)?;
            let pc = field.mul(*gc, c);
            loop {
                match ai.peek() {
                    Some((am, _)) => match order.cmp(am, &pm) {
                        Ordering::Greater => out.push(ai.next().unwrap()),
                        Ordering::Equal => {
                            let (am, ac) = ai.next().unwrap();
                            let s = field.add(ac, pc);
                            if s != 0 {
                                out.push((am, s));
                            }
                            break;
                        }
                        Ordering::Less => {
                            out.push((pm, pc));
                            break;
                        }
                    },
                    None => {
                        out.push((pm, pc));
                        break;
                    }
                }
            }
        }
        out.extend(ai);
        self.terms = out;
        Ok(())
    }

    /// Multiplies by the term `c * m`.
    pub fn mul_term(&self, c: u32, m: &Monomial) -> Result<Poly, PolyError> {
        let field = *self.ring.field();
        let c = field.from_u64(c as u64);
        if c == 0 {
            return Ok(Poly::zero(&self.ring));
        }
        let terms = self
            .terms
            .iter()
            .map(|(tm, tc)| Ok((tm.mul(m)?, field.mul(*tc, c))))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: u32) -> Poly {
        let field = *self.ring.field();
        let c = field.from_u64(c as u64);
        if c == 0 {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, tc)| (m.clone(), field.mul(*tc, c)))
                .collect(),
        }
    }

    /// Scales so that the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            None | Some(1) => self.clone(),
            Some(lc) => self.scale(self.ring.field().inv(lc)),
        }
    }

    pub fn pow(&self, mut e: u32) -> Result<Poly, PolyError> {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `x_var` (0-based). The
    /// exponent multiplier is reduced mod p, so `d/dx x^p = 0`.
    pub fn partial_derivative(&self, var: usize) -> Result<Poly, PolyError> {
        if var >= self.ring.nvars() {
            return Err(PolyError::VariableIndex {
                index: var,
                nvars: self.ring.nvars(),
            });
        }
        let field = *self.ring.field();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[var];
            if e == 0 {
                return None;
            }
            let mut dm = m.clone();
            dm.set_exponent(var, e - 1);
            Some((dm, field.mul(*c, field.from_u64(e as u64)) as u64))
        });
        Ok(Poly::from_terms(&self.ring, terms))
    }

    /// Exact division: `Some(h)` with `self = h * d` when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Option<Poly>, PolyError> {
        self.ring.check_same(&d.ring)?;
        let Some((dm, dc)) = d.leading_term() else {
            return Err(PolyError::DivisionByZero);
        };
        let field = *self.ring.field();
        let dinv = field.inv(dc);
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((rm, rc)) = rem.leading_term() {
            let Some(qm) = rm.div(dm) else {
                return Ok(None);
            };
            let qc = field.mul(rc, dinv);
            quot.add_scaled_term(qc, &qm, &Poly::one(&self.ring))?;
            rem.add_scaled_term(field.neg(qc), &qm, d)?;
        }
        Ok(Some(quot))
    }

    /// The image in the same variables over a ring with a different monomial
    /// order (or an equal ring).
    pub fn reorder(&self, ring: &Ring) -> Poly {
        assert_eq!(ring.nvars(), self.ring.nvars());
        if *ring == self.ring {
            return self.clone();
        }
        Poly::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| (m.clone(), *c as u64)),
        )
    }

    /// The image in a ring with one extra trailing variable.
    pub fn extend_to(&self, ring: &Ring) -> Poly {
        assert_eq!(ring.nvars(), self.ring.nvars() + 1);
        let same_shape = ring.order() == MonomialOrder::DegRevLex
            && self.ring.order() == MonomialOrder::DegRevLex;
        let terms: Vec<(Monomial, u32)> =
            self.terms.iter().map(|(m, c)| (m.extended(0), *c)).collect();
        if same_shape {
            // appending a zero exponent preserves degrevlex comparisons
            Poly {
                ring: ring.clone(),
                terms,
            }
        } else {
            Poly::from_terms(ring, terms.into_iter().map(|(m, c)| (m, c as u64)))
        }
    }

    /// Substitutes `x_var = value` and returns the result in `ring`, which
    /// must be `self.ring().without_var(var)` (up to order).
    pub fn substitute_drop(&self, var: usize, value: i64, ring: &Ring) -> Result<Poly, PolyError> {
        assert_eq!(ring.nvars() + 1, self.ring.nvars());
        let field = *self.ring.field();
        let v = field.from_i64(value);
        let terms = self.terms.iter().map(|(m, c)| {
            let (e, rest) = m.without(var);
            (rest, field.mul(*c, field.pow(v, e as u64)) as u64)
        });
        Ok(Poly::from_terms(ring, terms))
    }

    /// Drops trailing variables that do not occur, mapping into `ring`.
    pub(crate) fn restrict_to(&self, ring: &Ring) -> Option<Poly> {
        let n = ring.nvars();
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            if m.exponents()[n..].iter().any(|&e| e != 0) {
                return None;
            }
            terms.push((Monomial::from_exponents(&m.exponents()[..n]), *c as u64));
        }
        Some(Poly::from_terms(ring, terms))
    }

    /// Evaluates at a point of `F_p^n`.
    pub fn evaluate(&self, point: &[u32]) -> u32 {
        let field = *self.ring.field();
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m
                .exponents()
                .iter()
                .zip(point)
                .fold(*c, |a, (&e, &x)| field.mul(a, field.pow(x, e as u64)));
            field.add(acc, v)
        })
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sc = field.signed(*c);
            let (neg, mag) = (sc < 0, sc.unsigned_abs());
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != 1 || m.is_one() {
                factors.push(mag.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars()[v].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars()[v], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Operator sugar for code that already knows both operands share a ring.
// These panic on ring mismatch or exponent overflow; the `try_*` methods
// report those as errors.

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let field = *self.ring.field();
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(*c)))
                .collect(),
        }
    }
}
