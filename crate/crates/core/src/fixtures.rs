//! Named test elements and seeded random samplers.
//!
//! The named elements:
//!
//! * `A   = diag(2, 1, 1/2)`, loxodromic fixing 0 and ∞;
//! * `B_R = [[1/2, 1/2, -1/4], [-1, 0, -1/2], [-1, 1, 1/2]]`, real, so it preserves the real plane;
//! * `B_C = [[5/4, 0, 3i/4], [0, 1, 0], [-3i/4, 0, 5/4]]`, block form, preserving the line `z2 = 0`;
//! * `T   = [[1, -1, -1/2], [0, 1, 1], [0, 0, 1]]`, unipotent parabolic fixing ∞;
//! * `E   = diag(i, -1, i)`, elliptic with non-real trace;
//! * `S   = [[0, 0, -1], [0, -1, 0], [-1, 0, 0]]`, real involution exchanging 0 and ∞.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::hermitian_space::{FinitePoint, ProjectivePoint};
use crate::isometries::GroupElement;
use crate::linalg::{self, ONE, ZERO};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn loxodromic_a() -> GroupElement {
    GroupElement::new_unchecked(linalg::diag([c(2.0, 0.0), ONE, c(0.5, 0.0)]))
}

pub fn real_companion() -> GroupElement {
    GroupElement::new_unchecked(linalg::real([
        [0.5, 0.5, -0.25],
        [-1.0, 0.0, -0.5],
        [-1.0, 1.0, 0.5],
    ]))
}

pub fn line_companion() -> GroupElement {
    GroupElement::new_unchecked([
        [c(1.25, 0.0), ZERO, c(0.0, 0.75)],
        [ZERO, ONE, ZERO],
        [c(0.0, -0.75), ZERO, c(1.25, 0.0)],
    ])
}

pub fn unipotent_t() -> GroupElement {
    heisenberg(ONE, 0.0)
}

pub fn elliptic_witness() -> GroupElement {
    GroupElement::new_unchecked(linalg::diag([c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 1.0)]))
}

pub fn swap() -> GroupElement {
    GroupElement::new_unchecked(linalg::real([
        [0.0, 0.0, -1.0],
        [0.0, -1.0, 0.0],
        [-1.0, 0.0, 0.0],
    ]))
}

/// Heisenberg translation fixing ∞: `[[1, -ζ̄, -|ζ|²/2 + i·v], [0, 1, ζ], [0, 0, 1]]`.
pub fn heisenberg(zeta: Complex64, v: f64) -> GroupElement {
    GroupElement::new_unchecked([
        [ONE, -zeta.conj(), c(-0.5 * zeta.norm_sqr(), v)],
        [ZERO, ONE, zeta],
        [ZERO, ZERO, ONE],
    ])
}

/// `diag(λ, λ̄/λ, 1/λ̄)`: loxodromic fixing 0 and ∞ when `|λ| ≠ 1`.
pub fn diagonal_loxodromic(lambda: Complex64) -> GroupElement {
    GroupElement::new_unchecked(linalg::diag([lambda, lambda.conj() / lambda, lambda.conj().inv()]))
}

/// `diag(u, u⁻², u)` with `|u| = 1`; commutes with every diagonal element.
pub fn torus(u: Complex64) -> GroupElement {
    GroupElement::new_unchecked(linalg::diag([u, (u * u).inv(), u]))
}

pub fn torus_angle(theta: f64) -> GroupElement {
    torus(Complex64::from_polar(1.0, theta))
}

fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A random element in the big Bruhat cell, `N·M·A·S·N`, with moderate entries.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    let n1 = heisenberg(unit_complex(rng), rng.gen_range(-1.0..1.0));
    let lambda = Complex64::from_polar(rng.gen_range(-0.7f64..0.7).exp(), rng.gen_range(-PI..PI));
    let rot = torus_angle(rng.gen_range(-PI..PI));
    let n2 = heisenberg(unit_complex(rng), rng.gen_range(-1.0..1.0));
    (((n1 * diagonal_loxodromic(lambda)) * rot) * swap()) * n2
}

/// A random element with real entries (an element of SO(2,1)).
pub fn random_real_element<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    let n1 = heisenberg(c(rng.gen_range(-1.0..1.0), 0.0), 0.0);
    let a = diagonal_loxodromic(c(rng.gen_range(-0.7f64..0.7).exp(), 0.0));
    let n2 = heisenberg(c(rng.gen_range(-1.0..1.0), 0.0), 0.0);
    ((n1 * a) * swap()) * n2
}

/// A random element of block form, preserving the line `z2 = 0`.
pub fn random_block_element<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    let n = heisenberg(ZERO, rng.gen_range(-1.0..1.0));
    let lambda = Complex64::from_polar(rng.gen_range(-0.7f64..0.7).exp(), rng.gen_range(-PI..PI));
    let rot = torus_angle(rng.gen_range(-PI..PI));
    let n2 = heisenberg(ZERO, rng.gen_range(-1.0..1.0));
    (((n * diagonal_loxodromic(lambda)) * rot) * swap()) * n2
}

pub fn random_torus<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    torus_angle(rng.gen_range(-PI..PI))
}

/// Random product of length `1..=max_len` in `A`, `B_R`, `B_C`, `T`, their
/// inverses and random torus elements.
pub fn random_fixture_product<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> GroupElement {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut out = GroupElement::identity();
    for _ in 0..len {
        let letter = match rng.gen_range(0..5) {
            0 => loxodromic_a(),
            1 => real_companion(),
            2 => line_companion(),
            3 => unipotent_t(),
            _ => random_torus(rng),
        };
        let letter = if rng.gen_bool(0.5) { letter.inverse() } else { letter };
        out = out * letter;
    }
    out
}

/// Boundary point `(-|z2|²/2 + i·v, z2)`.
pub fn random_boundary_point<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePoint {
    let z2 = unit_complex(rng) * 2.0;
    let v = rng.gen_range(-2.0..2.0);
    ProjectivePoint::finite(FinitePoint::new(c(-0.5 * z2.norm_sqr(), v), z2))
}

pub fn random_interior_point<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePoint {
    let z2 = unit_complex(rng);
    let depth = rng.gen_range(0.1..2.0);
    let v = rng.gen_range(-1.0..1.0);
    ProjectivePoint::finite(FinitePoint::new(c(-0.5 * z2.norm_sqr() - depth, v), z2))
}

/// Boundary point `(i·v, 0)` of the line `z2 = 0`.
pub fn random_line_boundary_point<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePoint {
    ProjectivePoint::finite(FinitePoint::new(c(0.0, rng.gen_range(-3.0..3.0)), ZERO))
}

/// Boundary point `(-x²/2, x)` of the real plane.
pub fn random_real_boundary_point<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePoint {
    let x: f64 = rng.gen_range(-3.0..3.0);
    ProjectivePoint::finite(FinitePoint::real(-0.5 * x * x, x))
}

/// Interior point with real coordinates.
pub fn random_real_interior_point<R: Rng + ?Sized>(rng: &mut R) -> ProjectivePoint {
    let x: f64 = rng.gen_range(-2.0..2.0);
    let depth = rng.gen_range(0.1..2.0);
    ProjectivePoint::finite(FinitePoint::real(-0.5 * x * x - depth, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    /// Conjugate of a subgroup of SO(2,1).
    Real,
    /// Conjugate of a block-form subgroup.
    Line,
    /// The real family with one generator rotated off the real plane.
    NearMiss,
}

impl FromStr for FixtureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "r" | "real" => Ok(FixtureKind::Real),
            "c" | "line" | "complex" => Ok(FixtureKind::Line),
            "near-miss" => Ok(FixtureKind::NearMiss),
            other => Err(format!("unknown fixture kind {other:?} (expected r, c or near-miss)")),
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Real => "r",
            FixtureKind::Line => "c",
            FixtureKind::NearMiss => "near-miss",
        })
    }
}

/// Generators `A`, `B` and `extra_words` random words in them, all conjugated by
/// a random element. For [`FixtureKind::NearMiss`], `B` is `B_R·diag(u, u⁻², u)`
/// with `arg u = delta`, which gives `B` the non-real trace `e^{i·delta}`.
pub fn fixture_generators<R: Rng + ?Sized>(
    rng: &mut R,
    kind: FixtureKind,
    extra_words: usize,
    delta: f64,
) -> (Vec<(String, GroupElement)>, GroupElement) {
    let a = loxodromic_a();
    let b = match kind {
        FixtureKind::Real => real_companion(),
        FixtureKind::Line => line_companion(),
        FixtureKind::NearMiss => real_companion() * torus_angle(delta),
    };
    let q = random_element(rng);
    let mut gens = vec![("A".to_string(), a), ("B".to_string(), b)];
    for k in 0..extra_words {
        let len = rng.gen_range(2..=4);
        let mut w = GroupElement::identity();
        for _ in 0..len {
            let letter = if rng.gen_bool(0.5) { a } else { b };
            let letter = if rng.gen_bool(0.5) { letter.inverse() } else { letter };
            w = w * letter;
        }
        gens.push((format!("W{}", k + 1), w));
    }
    let gens = gens.into_iter().map(|(l, g)| (l, g.conjugate(&q))).collect();
    (gens, q)
}
