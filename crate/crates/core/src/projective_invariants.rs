//! Boundary invariants: Cartan's angular invariant and the Korányi–Reimann
//! cross-ratio with its three reorderings.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian_space::{hermitian_form, PointClass, ProjectivePoint, Vector3, DEFAULT_POINT_TOL};

pub const DEFAULT_COPLANARITY_TOL: f64 = 1e-7;

/// Cartan angular invariant in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanValue {
    pub angle: f64,
}

impl CartanValue {
    /// `|angle| = π/2` within `eps`: the triple lies on a complex line.
    pub fn is_complex_line(&self, eps: f64) -> bool {
        (self.angle.abs() - std::f64::consts::FRAC_PI_2).abs() <= eps
    }

    /// `angle = 0` within `eps`: the triple lies on a Lagrangian plane.
    pub fn is_lagrangian(&self, eps: f64) -> bool {
        self.angle.abs() <= eps
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRatioTriple {
    pub x1: Complex64,
    pub x2: Complex64,
    pub x3: Complex64,
}

impl CrossRatioTriple {
    pub fn as_array(&self) -> [Complex64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coplanarity {
    ComplexLine,
    Lagrangian,
    Neither,
}

impl fmt::Display for Coplanarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coplanarity::ComplexLine => "complex-line",
            Coplanarity::Lagrangian => "lagrangian",
            Coplanarity::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoplanarityVerdict {
    pub kind: Coplanarity,
    pub ratios: CrossRatioTriple,
    /// `|Im X1|, |Im X2|, |Im X3|`.
    pub imag_parts: [f64; 3],
    /// `|X3 + X2/X1|`.
    pub line_defect: f64,
    /// `|X3 - X2/X1|`.
    pub lagrangian_defect: f64,
}

fn boundary_lifts<const N: usize>(points: [&ProjectivePoint; N], err: Error) -> Result<[Vector3; N]> {
    if points.iter().any(|p| p.class() != PointClass::Boundary) {
        return Err(err);
    }
    let lifts = points.map(|p| p.representative().normalized());
    for i in 0..N {
        for k in (i + 1)..N {
            if hermitian_form(&lifts[i], &lifts[k]).norm() <= DEFAULT_POINT_TOL {
                return Err(err);
            }
        }
    }
    Ok(lifts)
}

/// `arg(-⟨z1,z2⟩⟨z2,z3⟩⟨z3,z1⟩)`.
pub fn cartan_invariant(p1: &ProjectivePoint, p2: &ProjectivePoint, p3: &ProjectivePoint) -> Result<CartanValue> {
    let [z1, z2, z3] = boundary_lifts([p1, p2, p3], Error::DegenerateTriple)?;
    let triple = hermitian_form(&z1, &z2) * hermitian_form(&z2, &z3) * hermitian_form(&z3, &z1);
    Ok(CartanValue { angle: (-triple).arg() })
}

fn cross_ratio_unchecked(z1: &Vector3, z2: &Vector3, z3: &Vector3, z4: &Vector3) -> Complex64 {
    hermitian_form(z3, z1) * hermitian_form(z4, z2) / (hermitian_form(z4, z1) * hermitian_form(z3, z2))
}

/// `[z1, z2, z3, z4] = ⟨z3,z1⟩⟨z4,z2⟩ / (⟨z4,z1⟩⟨z3,z2⟩)`.
pub fn kr_cross_ratio(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
) -> Result<Complex64> {
    let [z1, z2, z3, z4] = boundary_lifts([p1, p2, p3, p4], Error::DegenerateQuadruple)?;
    Ok(cross_ratio_unchecked(&z1, &z2, &z3, &z4))
}

/// `X1 = [z1,z2,z3,z4]`, `X2 = [z1,z3,z2,z4]`, `X3 = [z2,z3,z1,z4]`.
pub fn pp_cross_ratios(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
) -> Result<CrossRatioTriple> {
    let [z1, z2, z3, z4] = boundary_lifts([p1, p2, p3, p4], Error::DegenerateQuadruple)?;
    Ok(CrossRatioTriple {
        x1: cross_ratio_unchecked(&z1, &z2, &z3, &z4),
        x2: cross_ratio_unchecked(&z1, &z3, &z2, &z4),
        x3: cross_ratio_unchecked(&z2, &z3, &z1, &z4),
    })
}

/// Decides whether four boundary points lie on a common complex line or
/// Lagrangian plane from the reality of the cross-ratio triple and the sign in
/// `X3 = ±X2/X1`.
pub fn coplanarity_test(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
    eps: f64,
) -> Result<CoplanarityVerdict> {
    let ratios = pp_cross_ratios(p1, p2, p3, p4)?;
    let xs = ratios.as_array();
    let imag_parts = xs.map(|x| x.im.abs());
    let quotient = ratios.x2 / ratios.x1;
    let line_defect = (ratios.x3 + quotient).norm();
    let lagrangian_defect = (ratios.x3 - quotient).norm();
    let scale = 1.0 + ratios.x3.norm() + quotient.norm();

    let all_real = xs.iter().all(|x| x.im.abs() <= eps * (1.0 + x.norm()));
    let line = line_defect <= eps * scale;
    let lagrangian = lagrangian_defect <= eps * scale;
    let kind = match (all_real, line, lagrangian) {
        (false, _, _) => Coplanarity::Neither,
        (true, true, true) => {
            return Err(Error::Ambiguous {
                line_defect,
                lagrangian_defect,
            })
        }
        (true, true, false) => Coplanarity::ComplexLine,
        (true, false, true) => Coplanarity::Lagrangian,
        (true, false, false) => Coplanarity::Neither,
    };
    Ok(CoplanarityVerdict {
        kind,
        ratios,
        imag_parts,
        line_defect,
        lagrangian_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hermitian_space::FinitePoint;
    use crate::isometries::GroupElement;
    use rand::SeedableRng;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadruple(b: &GroupElement) -> [ProjectivePoint; 4] {
        [
            b.apply(&ProjectivePoint::origin()),
            ProjectivePoint::infinity(),
            ProjectivePoint::origin(),
            b.apply(&ProjectivePoint::infinity()),
        ]
    }

    #[test]
    fn cartan_examples() {
        let zero = ProjectivePoint::origin();
        let inf = ProjectivePoint::infinity();
        let p = ProjectivePoint::finite(FinitePoint::real(-0.5, 1.0));
        assert_eq!(cartan_invariant(&zero, &inf, &p).unwrap().angle, 0.0);
        let q = ProjectivePoint::finite(FinitePoint::new(c(0.0, 1.0), c(0.0, 0.0)));
        assert!((cartan_invariant(&zero, &inf, &q).unwrap().angle + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn cartan_rejects_degenerate_triples() {
        let zero = ProjectivePoint::origin();
        let inf = ProjectivePoint::infinity();
        assert_eq!(cartan_invariant(&zero, &inf, &zero), Err(Error::DegenerateTriple));
        let interior = ProjectivePoint::finite(FinitePoint::real(-1.0, 0.0));
        assert_eq!(cartan_invariant(&zero, &inf, &interior), Err(Error::DegenerateTriple));
    }

    #[test]
    fn cartan_is_group_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let pts = [0; 3].map(|_| fixtures::random_boundary_point(&mut rng));
            let g = fixtures::random_element(&mut rng);
            let before = cartan_invariant(&pts[0], &pts[1], &pts[2]).unwrap().angle;
            let moved = pts.map(|p| g.apply(&p));
            let after = cartan_invariant(&moved[0], &moved[1], &moved[2]).unwrap().angle;
            assert!((before - after).abs() < 1e-9);
        }
    }

    #[test]
    fn proof_quadruple_gives_entry_formulas() {
        let br = fixtures::real_companion();
        let x = kr_cross_ratio(&quadruple(&br)[0], &quadruple(&br)[1], &quadruple(&br)[2], &quadruple(&br)[3]).unwrap();
        assert!((x - br.g() * br.c().conj()).norm() < 1e-15);
        assert!((x - c(0.25, 0.0)).norm() < 1e-15);

        let [p1, p2, p3, p4] = quadruple(&br);
        let t = pp_cross_ratios(&p1, &p2, &p3, &p4).unwrap();
        assert!((t.x1 - c(0.25, 0.0)).norm() < 1e-15);
        assert!((t.x2 - c(0.25, 0.0)).norm() < 1e-15);
        assert!((t.x3 - c(1.0, 0.0)).norm() < 1e-15);

        let bc = fixtures::line_companion();
        let [p1, p2, p3, p4] = quadruple(&bc);
        let t = pp_cross_ratios(&p1, &p2, &p3, &p4).unwrap();
        assert!((t.x1 - c(-9.0 / 16.0, 0.0)).norm() < 1e-15);
        assert!((t.x2 - c(25.0 / 16.0, 0.0)).norm() < 1e-15);
        assert!((t.x3 - c(25.0 / 9.0, 0.0)).norm() < 1e-14);
        assert!((t.x3 + t.x2 / t.x1).norm() < 1e-14);
    }

    #[test]
    fn coplanarity_examples() {
        let [p1, p2, p3, p4] = quadruple(&fixtures::real_companion());
        let v = coplanarity_test(&p1, &p2, &p3, &p4, DEFAULT_COPLANARITY_TOL).unwrap();
        assert_eq!(v.kind, Coplanarity::Lagrangian);
        let [p1, p2, p3, p4] = quadruple(&fixtures::line_companion());
        let v = coplanarity_test(&p1, &p2, &p3, &p4, DEFAULT_COPLANARITY_TOL).unwrap();
        assert_eq!(v.kind, Coplanarity::ComplexLine);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let pts = [0; 4].map(|_| fixtures::random_boundary_point(&mut rng));
        let v = coplanarity_test(&pts[0], &pts[1], &pts[2], &pts[3], DEFAULT_COPLANARITY_TOL).unwrap();
        assert_eq!(v.kind, Coplanarity::Neither);
        assert!(v.imag_parts.iter().any(|&x| x > 1e-3));
    }

    #[test]
    fn repeated_point_is_degenerate() {
        let zero = ProjectivePoint::origin();
        let inf = ProjectivePoint::infinity();
        let p = ProjectivePoint::finite(FinitePoint::real(-0.5, 1.0));
        assert_eq!(kr_cross_ratio(&zero, &inf, &p, &zero), Err(Error::DegenerateQuadruple));
        assert_eq!(pp_cross_ratios(&zero, &inf, &inf, &p), Err(Error::DegenerateQuadruple));
    }

    #[test]
    fn cross_ratio_is_lift_independent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let pts = [0; 4].map(|_| fixtures::random_boundary_point(&mut rng));
            let scaled = pts.map(|p| {
                let s = c(rand::Rng::gen_range(&mut rng, 0.1..5.0), rand::Rng::gen_range(&mut rng, -3.0..3.0));
                ProjectivePoint::new(*p.representative() * s).unwrap()
            });
            let x = kr_cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let y = kr_cross_ratio(&scaled[0], &scaled[1], &scaled[2], &scaled[3]).unwrap();
            assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0));
        }
    }
}
