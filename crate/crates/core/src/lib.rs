//! Normal forms for the mixed Hecke algebra `H_{2,n}(q)` on two fixed strands.

pub mod algebra;
pub mod braid;
pub mod certify;
pub mod garside;
pub mod hecke;
pub mod lab;
pub mod laurent;
pub mod modp;
pub mod normalizer;
pub mod parse;
pub mod probe;
pub mod rules;
