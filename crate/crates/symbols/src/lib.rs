//! Exact algebra for the resonance function of the Zakharov-Kuznetsov
//! quadratic interaction.
//!
//! Polynomials in `(ξ1, ξ2, ξ3, η1, η2, η3)` carry arbitrary-precision
//! rational coefficients; rational functions are compared by
//! cross-multiplication, so every identity check here is exact.
//!
//! ```
//! use zk_symbols::{verify_identity_exact, CoefficientTable};
//!
//! let report = verify_identity_exact(&CoefficientTable::printed());
//! assert!(report.pass());
//! ```

pub mod bounds;
pub mod derive;
pub mod identity;
pub mod point;
pub mod poly;
pub mod rational;
pub mod resonance;
pub mod table;

pub use bounds::{float_bridge, sample_coefficient_bounds, BoundReport, FloatBridgeReport};
pub use derive::{rederive_coefficients, DiffReport};
pub use identity::{verify_identity_exact, verify_intermediates, Check, VerificationReport};
pub use point::{DomainError, RationalPoint6, SingularFactor};
pub use poly::{SparsePoly6, Var};
pub use rational::RationalFn6;
pub use resonance::{grad_eta_phi, phi, phi_poly};
pub use table::{coefficient, evaluate_coefficient, Basis, CoefficientName, CoefficientTable};
