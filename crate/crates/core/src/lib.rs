//! Exact toric machinery for birational cobordisms: lattices, fans, monomial
//! ideals on affine charts, one-parameter subgroup actions and torific
//! blowups.

pub mod cobordism;
pub mod fans;
pub mod lattice;
pub mod monomials;
pub mod torific;
