//! Exact resonance analysis and quasi-linear splitting for polynomial
//! dynamical systems whose linear part is diagonal (or block-rotational over
//! the reals) and whose nonlinearity commutes with it.
//!
//! The crate computes the resonance structure of an eigenvalue spectrum,
//! adjoins monomial variables that close the system into a quasi-linear one,
//! proves the required identities symbolically with exact arithmetic, and
//! cross-checks the construction numerically.

pub mod coeff;
pub mod embed;
pub mod io;
pub mod poly;
pub mod resonance;
pub mod verify;
