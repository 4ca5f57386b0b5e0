//! Exact q-expansion toolkit for weakly holomorphic modular functions on Γ₀(N):
//! echelon bases, Eisenstein constant terms, divisor sums and minimal polynomials
//! of values at divisors of meromorphic modular forms.

pub mod error;
pub mod exactfield;
pub mod forms;
pub mod acceptance;
pub mod basis;
pub mod divisor;
pub mod eisenstein;
pub mod linalg;
pub mod minpoly;
pub mod modcurve;
pub mod numeric;
pub mod qseries;

pub use error::{Error, Result};
