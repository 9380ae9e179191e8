//! Core numerical kernels for continued-fraction Diophantine approximation.
//!
//! The crate is `no_std` (it needs `alloc`) and contains:
//!
//! * [`cf`] — exact continued-fraction expansion, continuants, cylinder
//!   intervals and the quadratic targets `y = [i, i, …]`;
//! * [`runlength`] — the maximal run-length function `R_n` and its ratio
//!   estimators;
//! * [`exponents`] — block decomposition against a target and the
//!   approximation-exponent estimators;
//! * [`dim`] — pre-dimensional numbers, transfer-operator pressure, dimension
//!   values and the closed-form dimension formulas;
//! * [`cantor`] — sequence constructions, the Cantor sets `E(B)`, their mass
//!   distribution, a sampler, local dimensions and the digit-insertion map;
//! * [`mc`] — samplers of Lebesgue-typical digit strings.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod cantor;
pub mod cf;
pub mod dim;
pub mod exponents;
pub mod mc;
pub mod num;
pub mod runlength;
