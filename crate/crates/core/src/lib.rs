//! Exponential sums over prime fields: complete and incomplete Kloosterman
//! and Birch sums, their Fourier tables, maxima of partial sums, and the
//! numerical machinery for lower bounds on those maxima.

pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod families;
pub mod fejer;
pub mod incomplete;
pub mod modular;
pub mod quadrature;
pub mod report;
pub mod selberg;
pub mod selftest;
pub mod spectral;
pub mod summation;

pub use error::{Error, Result};
pub use families::{FamilyKind, FamilySpec, SignConvention, SumTable, TransformMethod};
pub use modular::{MoebiusMap, OddPrime, ProjPoint};
