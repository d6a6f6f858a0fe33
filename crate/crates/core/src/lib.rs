//! Computational content of Tate's thesis over the rationals read as a field
//! theory: ideles, quasicharacters and quadratic Hecke characters, local and
//! global zeta integrals, Wilson and t'Hooft insertions with their S-duality,
//! the quadratic reciprocity identities it yields, and the cubic Kummer
//! obstruction over `Q(ζ₃)`.

pub mod adele;
pub mod arith;
pub mod characters;
pub mod cli;
pub mod duality;
pub mod error;
pub mod fields;
pub mod kummer;
pub mod zeta;

pub use error::{Error, Result};
