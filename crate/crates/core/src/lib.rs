//! Computations in complex hyperbolic space `H²_C` (Siegel domain model) and
//! its isometry group SU(2,1), with a detector for Fuchsian subgroups.

pub mod error;
pub mod fixtures;
pub mod fuchsian_detector;
pub mod geodesic_submanifolds;
pub mod hermitian_space;
pub mod isometries;
pub mod linalg;
pub mod projective_invariants;

pub use error::{Error, Result};
pub use hermitian_space::{FinitePoint, PointClass, ProjectivePoint, Vector3};
pub use isometries::{GroupElement, IsometryClass};

/// Numerical tolerances shared by the pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Point classification (`ε_pt`).
    pub point: f64,
    /// Group membership of matrices (`ε_grp`).
    pub group: f64,
    /// Eigenvalue clustering and modulus separation.
    pub eigen: f64,
    /// Trace realness in the audit.
    pub trace: f64,
    pub coplanarity: f64,
    pub membership: f64,
    /// Absolute entry tests inside the detector (`|c|`, phase of `c`, ...).
    pub entry: f64,
    pub certification: f64,
    /// Extra radius for the second audit after a failed certification.
    pub escalation: usize,
    pub radius: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            point: hermitian_space::DEFAULT_POINT_TOL,
            group: isometries::DEFAULT_GROUP_TOL,
            eigen: isometries::DEFAULT_EIGEN_TOL,
            trace: isometries::DEFAULT_TRACE_TOL,
            coplanarity: projective_invariants::DEFAULT_COPLANARITY_TOL,
            membership: geodesic_submanifolds::DEFAULT_MEMBERSHIP_TOL,
            entry: 1e-8,
            certification: 1e-8,
            escalation: 2,
            radius: 4,
        }
    }
}
