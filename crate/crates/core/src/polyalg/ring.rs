use std::fmt;
use std::sync::Arc;

use super::{MonomialOrder, PolyError, PrimeField};

#[derive(PartialEq, Eq, Hash)]
struct RingData {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
}

/// Immutable descriptor of a polynomial ring `F_p[x_1..x_n]` with a fixed
/// monomial order. Cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new<S: Into<String>>(
        field: PrimeField,
        vars: impl IntoIterator<Item = S>,
        order: MonomialOrder,
    ) -> Result<Self, PolyError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(PolyError::InvalidVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Self(Arc::new(RingData { field, vars, order })))
    }

    /// Convenience constructor for `F_p[vars]` with degrevlex.
    pub fn degrevlex(p: u64, vars: &[&str]) -> Result<Self, PolyError> {
        Self::new(PrimeField::new(p)?, vars.iter().copied(), MonomialOrder::DegRevLex)
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.0.field
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// A variable name that does not clash with any existing one.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.var_index(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|n| self.var_index(n).is_none())
            .expect("unbounded search")
    }

    /// The ring with one extra trailing variable and the given order.
    pub fn extend(&self, name: &str, order: MonomialOrder) -> Ring {
        let mut vars = self.0.vars.clone();
        vars.push(self.fresh_name(name));
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars,
            order,
        }))
    }

    /// The ring with variable `var` removed.
    pub fn without_var(&self, var: usize) -> Ring {
        let mut vars = self.0.vars.clone();
        vars.remove(var);
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars,
            order: self.0.order,
        }))
    }

    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars: self.0.vars.clone(),
            order,
        }))
    }

    pub(crate) fn check_same(&self, other: &Ring) -> Result<(), PolyError> {
        if self == other {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}[{}]",
            self.0.field.modulus(),
            self.0.vars.join(",")
        )
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
