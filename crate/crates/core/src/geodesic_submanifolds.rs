//! Totally geodesic planes: complex lines and Lagrangian planes.
//!
//! A complex line is stored by its positive polar vector `n`; it consists of the
//! points `p` with `⟨p, n⟩ = 0`. A Lagrangian plane is stored as the fixed set of
//! an antiholomorphic involution `p ↦ M·p̄`. The standard plane of real points has
//! `M = I`, and its image under `Q` has `M = Q·conj(Q)⁻¹`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian_space::{hermitian_form, projective_defect, ProjectivePoint, Vector3};
use crate::isometries::{form_matrix, form_residual, GroupElement};
use crate::linalg::{self, Mat3, ONE, ZERO};

pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexLine {
    polar: Vector3,
}

impl ComplexLine {
    /// Rescales `polar` to unit Hermitian norm; fails unless it is positive.
    pub fn from_polar(polar: Vector3) -> Result<Self> {
        let q = polar.norm_form();
        if q.is_nan() || q <= 0.0 || q <= crate::hermitian_space::DEFAULT_POINT_TOL * polar.max_abs().powi(2) {
            return Err(Error::NotPositive);
        }
        Ok(Self {
            polar: polar * Complex64::new(q.sqrt().recip(), 0.0),
        })
    }

    pub fn polar(&self) -> &Vector3 {
        &self.polar
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianPlane {
    involution: Mat3,
}

impl LagrangianPlane {
    /// Checks `M·conj(M) = I` and `M^H·J·M = J` to `eps`.
    pub fn from_involution(m: Mat3, eps: f64) -> Result<Self> {
        let square = linalg::mul(&m, &linalg::conj(&m));
        let residual = linalg::max_abs_diff(&square, &linalg::identity()).max(form_residual(&m));
        if residual > eps * linalg::max_abs(&m).max(1.0).powi(2) {
            return Err(Error::NotInvolution { residual });
        }
        Ok(Self { involution: m })
    }

    pub fn involution(&self) -> &Mat3 {
        &self.involution
    }

    /// `p ↦ M·p̄`.
    pub fn reflect(&self, v: &Vector3) -> Vector3 {
        Vector3(linalg::mul_vec(&self.involution, &v.conj().0))
    }
}

/// The line `z2 = 0` with polar vector `(0, 1, 0)`.
pub fn standard_complex_line() -> ComplexLine {
    ComplexLine {
        polar: Vector3::new(ZERO, ONE, ZERO),
    }
}

/// The plane of points with real coordinates.
pub fn standard_lagrangian() -> LagrangianPlane {
    LagrangianPlane {
        involution: linalg::identity(),
    }
}

pub fn line_contains(line: &ComplexLine, p: &ProjectivePoint, eps: f64) -> bool {
    hermitian_form(&p.representative().normalized(), line.polar()).norm() <= eps
}

pub fn lagrangian_contains(plane: &LagrangianPlane, p: &ProjectivePoint, eps: f64) -> bool {
    let v = p.representative().normalized();
    projective_defect(&v, &plane.reflect(&v)) <= eps
}

/// Transport of a polar vector by `J·(Q⁻¹)^H·J`, which keeps `⟨Q·p, n'⟩ = ⟨p, n⟩`.
pub fn transport_polar(q: &GroupElement, polar: &Vector3) -> Vector3 {
    let inv = linalg::inverse(q.matrix()).expect("group elements are invertible");
    let jm = form_matrix();
    let adj = linalg::mul(&jm, &linalg::mul(&linalg::conj_transpose(&inv), &jm));
    Vector3(linalg::mul_vec(&adj, &polar.0))
}

pub fn push_line(q: &GroupElement, line: &ComplexLine) -> ComplexLine {
    ComplexLine::from_polar(transport_polar(q, line.polar())).expect("isometries keep polar vectors positive")
}

pub fn push_lagrangian(q: &GroupElement, plane: &LagrangianPlane) -> LagrangianPlane {
    let conj_q_inv = linalg::inverse(&linalg::conj(q.matrix())).expect("group elements are invertible");
    LagrangianPlane {
        involution: linalg::mul(q.matrix(), &linalg::mul(&plane.involution, &conj_q_inv)),
    }
}

/// Every entry real within `eps`. A real element of SU(2,1) lies in SO(2,1).
pub fn is_in_so21(m: &GroupElement, eps: f64) -> bool {
    m.max_imag() <= eps
}

/// Largest of `|b|, |d|, |f|, |h|`.
pub fn block_defect(m: &GroupElement) -> f64 {
    [m.b(), m.d(), m.f(), m.h()].iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Zero pattern `[[a, 0, c], [0, e, 0], [g, 0, j]]`, i.e. the element preserves `z2 = 0`.
pub fn is_block_line_stabilizer(m: &GroupElement, eps: f64) -> bool {
    block_defect(m) <= eps
}

/// Projective distance between the polar of `line` and its transport by `m`.
pub fn line_stabilizer_defect(m: &GroupElement, line: &ComplexLine) -> f64 {
    projective_defect(line.polar(), &transport_polar(m, line.polar()))
}

pub fn line_stabilizer_check(m: &GroupElement, line: &ComplexLine, eps: f64) -> bool {
    line_stabilizer_defect(m, line) <= eps
}
