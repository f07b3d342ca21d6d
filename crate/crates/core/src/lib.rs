//! Wedge metrics on mixed clouds of CP and non-CP maps, the simplicial
//! complexes they carry, and GF(2) homology of the result.
//!
//! The library is organized bottom-up:
//!
//! - [`metric`]: finite metric validation, the ℓp combination rule, and
//!   the glued wedge cloud with its four-case distance formula;
//! - [`models`]: concrete CP-side geometries (scalar, depolarizing ray,
//!   Hellinger orthant) and synthetic non-CP components;
//! - [`witness`]: closed-ball intersection oracles (finite candidate sets,
//!   exact ray intervals, convex orthant minimax);
//! - [`complex`]: Vietoris–Rips and intrinsic/ambient Čech complexes;
//! - [`wedge`]: mixed simplices from radial data, with brute-force audits;
//! - [`homology`]: boundary matrices, Betti numbers, Betti curves;
//! - [`cloudspec`]: the JSON cloud format and scale-grid grammar;
//! - [`scenarios`]: built-in clouds with their expected behavior;
//! - [`verify`]: the acceptance rows run by tests and the CLI.

pub mod cloudspec;
pub mod complex;
pub mod homology;
pub mod metric;
pub mod models;
pub mod pipeline;
pub mod scenarios;
pub mod verify;
pub mod wedge;
pub mod witness;

pub use metric::{BkParams, FiniteMetric, LpExponent, PointedFiniteMetric, WedgeCloud};
