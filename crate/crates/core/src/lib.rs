//! Smoothness testing for affine and projective varieties over prime fields.

pub mod gamma;
pub mod groebner;
pub mod polyalg;
pub mod smoothness;
