//! Supersingular primes of abelian surfaces: Weil quartics and their
//! classification, matrix groups over F_ell, the Legendre splitting
//! criterion, genus-2 point counting and sieve bookkeeping.

pub mod census;
pub mod finite_field;
pub mod groups;
pub mod sieve;
pub mod splitting;
pub mod weil;

pub use census::{CensusRecord, HyperellipticCurve};
pub use finite_field::{ExtFieldElem, PrimeModulus};
pub use groups::GroupElement;
pub use weil::{QuadFieldElem, SurfaceClass, WeilQuartic};
