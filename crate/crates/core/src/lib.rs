//! Invariants of plane algebroid branches given by a parametrization:
//! characteristic exponents, value semigroup, multiplicity sequence,
//! conductor degrees, Apéry bases and the complete-intersection
//! presentation of the semigroup ring.

pub mod branch;
pub mod catalog;
pub mod cli;
pub mod multseq;
pub mod oracle;
pub mod parser;
pub mod presentation;
pub mod semigroup;
pub mod series;
