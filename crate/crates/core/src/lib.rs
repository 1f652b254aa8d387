pub mod cli;
pub mod constants;
pub mod error;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod harmonics;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod spectral;
pub mod witness;
