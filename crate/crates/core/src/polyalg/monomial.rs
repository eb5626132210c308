use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::PolyError;

/// Exponent vector of a monomial. The length always equals the variable
/// count of the ring the monomial lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
    deg: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            exps: SmallVec::from_elem(0, nvars),
            deg: 0,
        }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Self {
            deg: exps.iter().map(|&e| e as u32).sum(),
            exps: SmallVec::from_slice(exps),
        }
    }

    /// The monomial `x_var^exp`.
    pub fn var(nvars: usize, var: usize, exp: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[var] = exp;
        m.deg = exp as u32;
        m
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        let mut exps = self.exps.clone();
        for (e, &o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_add(o).ok_or(PolyError::ExponentOverflow)?;
        }
        Ok(Self {
            exps,
            deg: self.deg + other.deg,
        })
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a - b)
            .collect();
        Some(Self {
            exps,
            deg: self.deg - other.deg,
        })
    }

    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.max(b))
            .collect();
        Self {
            deg: exps.iter().map(|&e| e as u32).sum(),
            exps,
        }
    }

    /// True when the two monomials share no variable.
    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Monomial with one extra trailing variable of exponent `exp`.
    pub(crate) fn extended(&self, exp: u16) -> Self {
        let mut exps = self.exps.clone();
        exps.push(exp);
        Self {
            exps,
            deg: self.deg + exp as u32,
        }
    }

    /// Removes variable `var`, returning its exponent and the remaining monomial.
    pub(crate) fn without(&self, var: usize) -> (u16, Self) {
        let mut exps = self.exps.clone();
        let e = exps.remove(var);
        (
            e,
            Self {
                exps,
                deg: self.deg - e as u32,
            },
        )
    }

    pub(crate) fn set_exponent(&mut self, var: usize, exp: u16) {
        self.deg = self.deg - self.exps[var] as u32 + exp as u32;
        self.exps[var] = exp;
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// A global monomial order.
///
/// `DegRevLex` is the order used throughout. `Elimination { tail }` is the
/// product order that first compares the last `tail` variables (degrevlex on
/// that block) and then the leading variables (degrevlex); it makes the tail
/// block eliminable and is used only for saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    DegRevLex,
    Elimination { tail: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => degrevlex(&a.exps, a.deg, &b.exps, b.deg),
            MonomialOrder::Elimination { tail } => {
                let n = a.exps.len();
                let split = n - tail.min(n);
                let (ah, at) = a.exps.split_at(split);
                let (bh, bt) = b.exps.split_at(split);
                let dat: u32 = at.iter().map(|&e| e as u32).sum();
                let dbt: u32 = bt.iter().map(|&e| e as u32).sum();
                degrevlex(at, dat, bt, dbt)
                    .then_with(|| degrevlex(ah, a.deg - dat, bh, b.deg - dbt))
            }
        }
    }
}

#[inline]
fn degrevlex(a: &[u16], da: u32, b: &[u16], db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x > y > z
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 1, 0]), &m(&[0, 0, 1])), Ordering::Greater);
        // x*z < y^2 in degrevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        // higher degree wins
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 0]), &m(&[0, 0, 1])), Ordering::Less);
    }

    #[test]
    fn elimination_puts_tail_first() {
        let o = MonomialOrder::Elimination { tail: 1 };
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    fn mono3() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u16..5, 3).prop_map(|v| Monomial::from_exponents(&v))
    }

    proptest! {
        #[test]
        fn degrevlex_is_a_monomial_order(a in mono3(), b in mono3(), c in mono3()) {
            for o in [MonomialOrder::DegRevLex, MonomialOrder::Elimination { tail: 1 }] {
                // antisymmetry
                let ab = o.cmp(&a, &b);
                prop_assert_eq!(ab.reverse(), o.cmp(&b, &a));
                if ab == Ordering::Equal { prop_assert_eq!(&a, &b); }
                // transitivity
                if ab != Ordering::Greater && o.cmp(&b, &c) != Ordering::Greater {
                    prop_assert!(o.cmp(&a, &c) != Ordering::Greater);
                }
                // multiplicativity
                prop_assert_eq!(o.cmp(&a.mul(&c).unwrap(), &b.mul(&c).unwrap()), ab);
                // 1 is the smallest monomial
                prop_assert!(o.cmp(&Monomial::one(3), &a) != Ordering::Greater);
            }
        }
    }
}
