//! Two-parameter fidelity between density matrices.
//!
//! `azfid` evaluates the trace functional
//! `T = Tr[(sigma^((1-alpha)/2z) rho^(alpha/z) sigma^((1-alpha)/2z))^z]`
//! and the fidelity `F = T^(1/alpha)` for states on small Hilbert spaces,
//! together with:
//!
//! - closed-form extrema of `F` over unitary orbits, with constructors for the
//!   unitaries that attain them and an interval solver along the geodesic
//!   between the two achievers ([`orbits`]);
//! - closed-form extrema under channel evolutions (all CPTP maps,
//!   mixed-unitary channels, pure-state boundary) and majorization
//!   comparisons for unital channels ([`channels`]);
//! - subspace geometry: the trace functional between normalized projectors,
//!   commuting closed forms, and interlacing bounds ([`geometry`]);
//! - an independent verification suite: Monte-Carlo extremum search over the
//!   unitary group and inequality checkers, producing machine-readable
//!   reports ([`oracle`]).
//!
//! Everything is deterministic given a 64-bit seed; Monte-Carlo trials own
//! derived substreams so runs are reproducible and parallelizable.

pub mod channels;
pub mod error;
pub mod fidelity;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod orbits;
pub mod states;

pub use error::{Error, Result};
pub use fidelity::{
    alpha_z_fidelity, alpha_z_fidelity_restricted, classical_fidelity, classify_region,
    renyi_entropy, uhlmann_fidelity, FidelityValue, ParamPoint, Region,
};
pub use linalg::{HermitianMatrix, UnitaryMatrix};
pub use oracle::{run_property_suite, SuiteConfig, VerificationReport};
pub use orbits::{orbit_max, orbit_min, orbit_renyi_extrema, solve_orbit_target, OrbitExtremum};
pub use states::{haar_unitary, random_density, subspace_state, DensityMatrix, SubspaceProjector};
