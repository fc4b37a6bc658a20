//! The signature-(2,1) Hermitian space `C^{2,1}` and its projectivization.
//!
//! The form is `⟨z, w⟩ = z1·w̄3 + z2·w̄2 + z3·w̄1`. Negative vectors project to
//! complex hyperbolic space, null vectors to its boundary.

use std::fmt;
use std::ops::{Index, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ONE, ZERO};

/// Default tolerance on `⟨v,v⟩` for a representative scaled to unit max-magnitude coordinate.
pub const DEFAULT_POINT_TOL: f64 = 1e-9;

/// Ratios `cosh²(ρ/2)` in `[1 - DISTANCE_CLAMP, 1)` are clamped to 1; below that they are an error.
pub const DISTANCE_CLAMP: f64 = 1e-6;

/// A vector of `C^{2,1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector3(pub [Complex64; 3]);

impl Vector3 {
    pub const fn new(v1: Complex64, v2: Complex64, v3: Complex64) -> Self {
        Self([v1, v2, v3])
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self(v.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn coords(&self) -> &[Complex64; 3] {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    fn argmax(&self) -> usize {
        (0..3)
            .max_by(|&i, &k| self.0[i].norm().total_cmp(&self.0[k].norm()))
            .unwrap_or(0)
    }

    /// Rescales so the largest-magnitude coordinate equals exactly 1.
    pub fn normalized(&self) -> Vector3 {
        let pivot = self.0[self.argmax()];
        if pivot.norm() == 0.0 {
            return *self;
        }
        let mut out = self.0.map(|x| x / pivot);
        out[self.argmax()] = ONE;
        Vector3(out)
    }

    /// `⟨v, v⟩`, which is real.
    pub fn norm_form(&self) -> f64 {
        hermitian_form(self, self).re
    }

    /// Non-homogeneous coordinates `(v1/v3, v2/v3)`, or `None` when `v3 = 0`.
    pub fn dehomogenize(&self) -> Option<FinitePoint> {
        let [v1, v2, v3] = self.0;
        if v3.norm() == 0.0 {
            return None;
        }
        Some(FinitePoint { z1: v1 / v3, z2: v2 / v3 })
    }

    pub fn conj(&self) -> Vector3 {
        Vector3(self.0.map(|x| x.conj()))
    }
}

impl Index<usize> for Vector3 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Mul<Complex64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: Complex64) -> Vector3 {
        Vector3(self.0.map(|x| x * s))
    }
}

impl fmt::Display for Vector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// A point of `C²` in non-homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinitePoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl FinitePoint {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn real(z1: f64, z2: f64) -> Self {
        Self::new(Complex64::new(z1, 0.0), Complex64::new(z2, 0.0))
    }

    /// `2·Re(z1) + |z2|²`; negative inside, zero on the boundary.
    pub fn siegel_height(&self) -> f64 {
        2.0 * self.z1.re + self.z2.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Interior,
    Boundary,
    Exterior,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Interior => "interior",
            PointClass::Boundary => "boundary",
            PointClass::Exterior => "exterior",
        })
    }
}

/// A point of `CP²` with its position relative to complex hyperbolic space.
#[derive(Debug, Clone, Copy)]
pub struct ProjectivePoint {
    representative: Vector3,
    class: PointClass,
}

impl ProjectivePoint {
    pub fn new(v: Vector3) -> Result<Self> {
        Self::with_tolerance(v, DEFAULT_POINT_TOL)
    }

    pub fn with_tolerance(v: Vector3, eps: f64) -> Result<Self> {
        let class = classify_point(&v, eps)?;
        Ok(Self { representative: v, class })
    }

    /// The boundary point `∞`, lifted to `(1, 0, 0)`.
    pub fn infinity() -> Self {
        Self {
            representative: Vector3::new(ONE, ZERO, ZERO),
            class: PointClass::Boundary,
        }
    }

    /// The boundary point `0 = (0, 0)`, lifted to `(0, 0, 1)`.
    pub fn origin() -> Self {
        Self {
            representative: Vector3::new(ZERO, ZERO, ONE),
            class: PointClass::Boundary,
        }
    }

    pub fn finite(p: FinitePoint) -> Self {
        // The standard lift has a unit coordinate, never zero.
        Self::new(standard_lift(&p)).expect("standard lift is nonzero")
    }

    pub fn representative(&self) -> &Vector3 {
        &self.representative
    }

    pub fn class(&self) -> PointClass {
        self.class
    }

    pub fn is_infinity(&self, eps: f64) -> bool {
        let n = self.representative.normalized();
        n[1].norm() <= eps && n[2].norm() <= eps
    }

    pub fn to_finite(&self) -> Option<FinitePoint> {
        self.representative.dehomogenize()
    }

    /// Largest coordinate difference after scaling both representatives by
    /// this point's pivot coordinate. Infinite if `other` vanishes there.
    pub fn projective_defect(&self, other: &ProjectivePoint) -> f64 {
        projective_defect(&self.representative, &other.representative)
    }

    pub fn approx_eq(&self, other: &ProjectivePoint, eps: f64) -> bool {
        self.projective_defect(other) <= eps
    }
}

/// Defect between the projective classes of two vectors; zero iff parallel.
pub fn projective_defect(v: &Vector3, w: &Vector3) -> f64 {
    let k = v.argmax();
    let (pv, pw) = (v[k], w[k]);
    if pv.norm() == 0.0 || pw.norm() == 0.0 {
        return f64::INFINITY;
    }
    (0..3)
        .map(|i| (v[i] / pv - w[i] / pw).norm())
        .fold(0.0, f64::max)
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, DEFAULT_POINT_TOL) && other.approx_eq(self, DEFAULT_POINT_TOL)
    }
}

/// `⟨z, w⟩ = z1·w̄3 + z2·w̄2 + z3·w̄1`.
pub fn hermitian_form(z: &Vector3, w: &Vector3) -> Complex64 {
    z[0] * w[2].conj() + z[1] * w[1].conj() + z[2] * w[0].conj()
}

pub fn standard_lift(p: &FinitePoint) -> Vector3 {
    Vector3::new(p.z1, p.z2, ONE)
}

/// Sign of `⟨v,v⟩` on the representative scaled to unit max-magnitude coordinate.
pub fn classify_point(v: &Vector3, eps: f64) -> Result<PointClass> {
    if v.max_abs() <= eps || !v.0.iter().all(|x| x.is_finite()) {
        return Err(Error::ZeroVector);
    }
    let q = v.normalized().norm_form();
    Ok(if q < -eps {
        PointClass::Interior
    } else if q > eps {
        PointClass::Exterior
    } else {
        PointClass::Boundary
    })
}

/// `cosh²(ρ/2) = ⟨z,w⟩⟨w,z⟩ / (⟨z,z⟩⟨w,w⟩)` for interior points.
pub fn bergman_cosh_sq(z: &ProjectivePoint, w: &ProjectivePoint) -> Result<f64> {
    if z.class() != PointClass::Interior || w.class() != PointClass::Interior {
        return Err(Error::NotInterior);
    }
    let zn = z.representative().normalized();
    let wn = w.representative().normalized();
    let zw = hermitian_form(&zn, &wn);
    Ok(zw.norm_sqr() / (zn.norm_form() * wn.norm_form()))
}

/// Bergman distance `ρ = 2·arccosh(√(cosh² value))`.
pub fn bergman_distance(z: &ProjectivePoint, w: &ProjectivePoint) -> Result<f64> {
    let value = bergman_cosh_sq(z, w)?;
    if value < 1.0 - DISTANCE_CLAMP || value.is_nan() {
        return Err(Error::DistanceRatioBelowOne { value });
    }
    Ok(2.0 * value.max(1.0).sqrt().acosh())
}
