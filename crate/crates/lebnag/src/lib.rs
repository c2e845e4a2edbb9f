//! Solver machinery for the generalized Lebesgue-Nagell equation
//! x^2 + D = y^n where D > 0 is a {2,3,5,7,11}-unit.
//!
//! The crate is organized around the stages of the elimination pipeline:
//!
//! * [`arith`] - exact integer / finite-field primitives
//! * [`ecurve`] - point counting over F_q and curve-record ingestion
//! * [`quadfield`] - imaginary quadratic arithmetic, descent constants,
//!   and degree-n form construction
//! * [`lucas`] - Lucas sequences and the odd-y pipeline
//! * [`freysieve`] - modular sieves (one-prime test, refined multi-prime
//!   sieve, symplectic criterion) and the campaign driver
//! * [`bounds`] - the explicit bound engine with directed-rounded
//!   interval arithmetic
//! * [`enumerate`] - ground-truth brute force and dataset ingestion

pub mod arith;
pub mod ecurve;
pub mod freysieve;
pub mod lucas;
pub mod quadfield;
