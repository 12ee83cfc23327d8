//! Exact polynomial integrals over the real orthogonal group `O_n`.
//!
//! The integrals `I(a) = int prod_{ij} u_ij^{a_ij} du` are evaluated in
//! exact rational arithmetic, either through the Weingarten formula
//! ([`weingarten`]) or through closed forms ([`closed_forms`],
//! [`two_by_two`]). [`verify`] cross-checks the two, and [`monte_carlo`]
//! gives a floating-point estimate by Haar sampling.

pub mod bareiss;
pub mod closed_forms;
pub mod error;
pub mod exact_arith;
pub mod matrix;
pub mod monte_carlo;
pub mod pairings;
pub mod two_by_two;
pub mod verify;
pub mod weingarten;

pub use error::{Error, Result};
pub use exact_arith::{binomial, factorial, shifted_double_factorial, ExactRational};
pub use matrix::ExponentMatrix;
pub use pairings::{MultiIndex, Pairing};
