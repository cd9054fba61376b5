//! Whittaker functions on `GL(n)` over local fields.
//!
//! The crate has two computational regimes:
//!
//! * **Non-Archimedean** ([`padic`]): Shintani's formula evaluated in exact
//!   rational arithmetic -- Schur polynomials by bialternant determinants
//!   and by the Gelfand-Tsetlin branching recursion, with the half-integer
//!   power of `q` kept symbolic.
//! * **Archimedean** ([`arch`], over `C` and `R`): Mellin-Barnes contour
//!   integrals of Gamma-factor products evaluated on vertical lines by the
//!   trapezoid rule ([`mb`]), cross-checked against direct multidimensional
//!   quadrature of the reduced propagation integrals.
//!
//! On top of these sit the Asai local zeta identity ([`asai`]) and the
//! verification suites ([`verify`]) that machine-check every implemented
//! identity.

pub mod arch;
pub mod asai;
pub mod error;
pub mod mb;
pub mod padic;
pub mod quad;
pub mod scalar;
pub mod settings;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Complex, LogComplex};
