//! Exact-arithmetic certification of K-stability for polarisations of
//! del Pezzo surfaces.
//!
//! The library is organised around a small exact kernel ([`exact`]) providing
//! rationals, real quadratic irrationals, polynomial sign analysis and
//! root isolation. On top of it sit:
//!
//! * [`picard`] — the Picard lattice of a blow-up of the plane at up to 8
//!   points: intersection form, exceptional-curve enumeration, nef and
//!   ample tests, nef thresholds;
//! * [`alpha`] — bookkeeping of certified alpha-invariant bounds
//!   (scaling, monotonicity, perturbation, the degree-one del Pezzo lower
//!   bound, flag-resolution upper bounds);
//! * [`stability`] — the slope-based sufficient criterion for K-stability
//!   (plain and log variants) producing auditable certificates;
//! * [`dfcalc`] — the intersection-theoretic Donaldson-Futaki evaluator
//!   over user-supplied intersection tables;
//! * [`region`] — exact solving of one-parameter polarisation families
//!   for the certified K-stable region, with algebraic endpoints.
//!
//! No floating point appears anywhere in a decision path; floats are only
//! ever emitted in reports, flagged as approximate.

pub mod alpha;
pub mod dfcalc;
pub mod exact;
pub mod picard;
pub mod region;
pub mod stability;

pub use exact::{Algebraic, AlgebraicInterval, ExactScalar, RatPoly};
pub use picard::{DivisorClass, SurfaceModel};
