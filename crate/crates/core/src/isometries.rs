//! Holomorphic isometries: elements of SU(2,1) for the anti-diagonal form.
//!
//! Entries are addressed by the grid
//!
//! ```text
//! a b c
//! d e f
//! g h j
//! ```
//!
//! and the inverse of a unitary element is the conjugate flip
//! `[[j̄, f̄, c̄], [h̄, ē, b̄], [ḡ, d̄, ā]]`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian_space::{classify_point, projective_defect, PointClass, ProjectivePoint, Vector3, DEFAULT_POINT_TOL};
use crate::linalg::{self, Mat3, ONE, ZERO};

pub const DEFAULT_GROUP_TOL: f64 = 1e-9;
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;
pub const DEFAULT_TRACE_TOL: f64 = 1e-8;

/// Eigenvector matrices with smallest singular value at or below this are treated as deficient.
pub const INDEPENDENCE_TOL: f64 = 1e-6;

/// Relative rank threshold for shifted matrices `M - λI` of a clustered eigenvalue.
const RANK_TOL: f64 = 1e-6;

/// An element of SU(2,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    m: Mat3,
}

/// Names of the twelve entry identities implied by `A·A⁻¹ = A⁻¹·A = I`.
pub const UNITARITY_IDENTITIES: [&str; 12] = [
    "a·j̄ + b·h̄ + c·ḡ = 1",
    "a·f̄ + b·ē + c·d̄ = 0",
    "a·c̄ + b·b̄ + c·ā = 0",
    "d·j̄ + e·h̄ + f·ḡ = 0",
    "d·f̄ + e·ē + f·d̄ = 1",
    "g·j̄ + h·h̄ + j·ḡ = 0",
    "a·j̄ + d·f̄ + g·c̄ = 1",
    "b·j̄ + e·f̄ + h·c̄ = 0",
    "c·j̄ + f·f̄ + j·c̄ = 0",
    "a·h̄ + d·ē + g·b̄ = 0",
    "b·h̄ + e·ē + h·b̄ = 1",
    "a·ḡ + d·d̄ + g·ā = 0",
];

/// Signed residuals (left side minus right side) of the twelve identities, in
/// the order of [`UNITARITY_IDENTITIES`].
pub fn unitarity_residuals(m: &Mat3) -> [Complex64; 12] {
    let [[a, b, c], [d, e, f], [g, h, j]] = *m;
    let cj = |z: Complex64| z.conj();
    [
        a * cj(j) + b * cj(h) + c * cj(g) - ONE,
        a * cj(f) + b * cj(e) + c * cj(d),
        a * cj(c) + b * cj(b) + c * cj(a),
        d * cj(j) + e * cj(h) + f * cj(g),
        d * cj(f) + e * cj(e) + f * cj(d) - ONE,
        g * cj(j) + h * cj(h) + j * cj(g),
        a * cj(j) + d * cj(f) + g * cj(c) - ONE,
        b * cj(j) + e * cj(f) + h * cj(c),
        c * cj(j) + f * cj(f) + j * cj(c),
        a * cj(h) + d * cj(e) + g * cj(b),
        b * cj(h) + e * cj(e) + h * cj(b) - ONE,
        a * cj(g) + d * cj(d) + g * cj(a),
    ]
}

/// The form matrix `J` (anti-diagonal ones).
pub fn form_matrix() -> Mat3 {
    linalg::real([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
}

/// Largest entry of `|M^H·J·M - J|`.
pub fn form_residual(m: &Mat3) -> f64 {
    let jm = form_matrix();
    let lhs = linalg::mul(&linalg::conj_transpose(m), &linalg::mul(&jm, m));
    linalg::max_abs_diff(&lhs, &jm)
}

/// Residual scale used by [`validate`]: rounding in `M^H·J·M` grows with the entry size squared.
fn residual_scale(m: &Mat3) -> f64 {
    linalg::max_abs(m).max(1.0).powi(2)
}

/// Checks `det = 1` and the form identities to `eps` (scaled by `max(1, max|entry|)²`).
pub fn validate(m: Mat3, eps: f64) -> Result<GroupElement> {
    if !m.iter().flatten().all(|x| x.is_finite()) {
        return Err(Error::NotUnitary { residual: f64::INFINITY });
    }
    let scale = residual_scale(&m);
    let det = linalg::det(&m);
    let det_scale = linalg::max_abs(&m).max(1.0).powi(3);
    if (det - ONE).norm() > eps * det_scale {
        return Err(Error::BadDeterminant { det });
    }
    let residual = grid_residual(&m);
    if residual > eps * scale {
        return Err(Error::NotUnitary { residual });
    }
    Ok(GroupElement { m })
}

/// Largest residual over the twelve identities and the full form test.
pub fn grid_residual(m: &Mat3) -> f64 {
    unitarity_residuals(m)
        .iter()
        .map(|r| r.norm())
        .fold(form_residual(m), f64::max)
}

/// Divides by the principal cube root of the determinant, then validates.
pub fn normalize_to_su21(m: Mat3, eps: f64) -> Result<GroupElement> {
    let det = linalg::det(&m);
    if det.norm() == 0.0 || !det.is_finite() {
        return Err(Error::NotUnitary { residual: f64::INFINITY });
    }
    let root = principal_cube_root(det);
    let scaled = linalg::scale(&m, root.inv());
    match validate(scaled, eps) {
        Ok(g) => Ok(g),
        Err(Error::BadDeterminant { .. }) | Err(Error::NotUnitary { .. }) => Err(Error::NotUnitary {
            residual: grid_residual(&scaled),
        }),
        Err(e) => Err(e),
    }
}

/// `|z|^{1/3}·e^{i·arg(z)/3}` with `arg ∈ (-π, π]`.
pub fn principal_cube_root(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re > 0.0 {
        return Complex64::new(z.re.cbrt(), 0.0);
    }
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { m: linalg::identity() }
    }

    /// Wraps a grid without any check. Products and conjugates of validated
    /// elements go through here; so do deliberately tampered certificates.
    pub fn new_unchecked(m: Mat3) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn a(&self) -> Complex64 {
        self.m[0][0]
    }
    pub fn b(&self) -> Complex64 {
        self.m[0][1]
    }
    pub fn c(&self) -> Complex64 {
        self.m[0][2]
    }
    pub fn d(&self) -> Complex64 {
        self.m[1][0]
    }
    pub fn e(&self) -> Complex64 {
        self.m[1][1]
    }
    pub fn f(&self) -> Complex64 {
        self.m[1][2]
    }
    pub fn g(&self) -> Complex64 {
        self.m[2][0]
    }
    pub fn h(&self) -> Complex64 {
        self.m[2][1]
    }
    pub fn j(&self) -> Complex64 {
        self.m[2][2]
    }

    /// Closed-form inverse `[[j̄, f̄, c̄], [h̄, ē, b̄], [ḡ, d̄, ā]]`.
    pub fn inverse(&self) -> GroupElement {
        let m = &self.m;
        let cj = |r: usize, c: usize| m[r][c].conj();
        GroupElement {
            m: [
                [cj(2, 2), cj(1, 2), cj(0, 2)],
                [cj(2, 1), cj(1, 1), cj(0, 1)],
                [cj(2, 0), cj(1, 0), cj(0, 0)],
            ],
        }
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.m)
    }

    pub fn is_real_trace(&self, eps: f64) -> bool {
        self.trace().im.abs() <= eps
    }

    pub fn det(&self) -> Complex64 {
        linalg::det(&self.m)
    }

    pub fn apply_vector(&self, v: &Vector3) -> Vector3 {
        Vector3(linalg::mul_vec(&self.m, &v.0))
    }

    /// Projective action `p ↦ M·p`.
    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let image = self.apply_vector(p.representative()).normalized();
        ProjectivePoint::new(image).expect("image of a nonzero vector under an invertible map")
    }

    /// `Q⁻¹·M·Q`.
    pub fn conjugate(&self, q: &GroupElement) -> GroupElement {
        &(&q.inverse() * self) * q
    }

    /// True for scalar matrices, which act as the identity on `CP²`.
    pub fn is_identity(&self, eps: f64) -> bool {
        let m = &self.m;
        (0..3).all(|i| (0..3).all(|k| i == k || m[i][k].norm() <= eps))
            && (m[0][0] - m[1][1]).norm() <= eps
            && (m[0][0] - m[2][2]).norm() <= eps
    }

    /// Largest `|Im|` over all entries.
    pub fn max_imag(&self) -> f64 {
        self.m.iter().flatten().map(|x| x.im.abs()).fold(0.0, f64::max)
    }

    pub fn pow(&self, n: i32) -> GroupElement {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut out = GroupElement::identity();
        for _ in 0..n.unsigned_abs() {
            out = out * base;
        }
        out
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement { m: linalg::mul(&self.m, &rhs.m) }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement { m: linalg::mul(&self.m, &rhs.m) }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            writeln!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryClass {
    Loxodromic,
    Parabolic,
    Elliptic,
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsometryClass::Loxodromic => "loxodromic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Elliptic => "elliptic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vector3,
}

/// Eigenpairs sorted by descending eigenvalue modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenStructure {
    pub pairs: [EigenPair; 3],
    /// Set when some eigenspace is smaller than the algebraic multiplicity.
    pub defective: bool,
    /// Smallest singular value of the matrix of unit eigenvectors.
    pub independence: f64,
}

impl EigenStructure {
    pub fn values(&self) -> [Complex64; 3] {
        self.pairs.map(|p| p.value)
    }

    pub fn max_modulus(&self) -> f64 {
        self.pairs[0].value.norm()
    }
}

struct Cluster {
    values: Vec<Complex64>,
    mean: Complex64,
    basis: Vec<[Complex64; 3]>,
}

fn eigen_clusters(m: &Mat3, eps: f64) -> Vec<Cluster> {
    let c2 = -linalg::trace(m);
    let c1 = linalg::principal_minor_sum(m);
    let c0 = -linalg::det(m);
    let mut roots = linalg::cubic_roots(c2, c1, c0).to_vec();
    roots.sort_by(|x, y| y.norm().total_cmp(&x.norm()).then(y.arg().total_cmp(&x.arg())));

    // Rounding splits a k-fold root by about (ε·‖M‖)^{1/k}, so roots are grouped
    // at that scale and the eigenspace dimension decides what the group is.
    let floor = defective_modulus_floor(m);
    let radius = (10.0 * eps).max(floor);
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match clusters.iter_mut().find(|cl| cl.iter().any(|x| (x - r).norm() <= radius)) {
            Some(cl) => cl.push(r),
            None => clusters.push(vec![r]),
        }
    }

    let rank_tol = RANK_TOL.max(floor) * linalg::frobenius(m).max(1.0);
    let trace = linalg::trace(m);
    let singles: Complex64 = clusters.iter().filter(|cl| cl.len() == 1).map(|cl| cl[0]).sum();
    clusters
        .into_iter()
        .map(|values| {
            // A repeated root is far better determined by the trace than by the
            // cubic: at most one cluster has more than one member.
            let mean = if values.len() > 1 {
                (trace - singles) / values.len() as f64
            } else {
                values[0]
            };
            let values = vec![mean; values.len()];
            let shifted = linalg::sub(m, &linalg::scale(&linalg::identity(), mean));
            let basis = if values.len() == 1 {
                let rows = [shifted[0], shifted[1], shifted[2]];
                let v = linalg::best_cross(&rows);
                if linalg::vec_norm(&v) > 0.0 {
                    vec![linalg::normalized(&v)]
                } else {
                    linalg::null_space(&shifted, rank_tol)
                }
            } else {
                linalg::null_space(&shifted, rank_tol)
            };
            Cluster { values, mean, basis }
        })
        .collect()
}

/// Eigenvalues from the characteristic cubic, eigenvectors from null spaces of `M - λI`.
pub fn eigen(g: &GroupElement, eps: f64) -> EigenStructure {
    let clusters = eigen_clusters(&g.m, eps);
    let mut pairs = Vec::with_capacity(3);
    let mut defective = false;
    for cl in &clusters {
        if cl.basis.len() < cl.values.len() {
            defective = true;
        }
        for (i, &value) in cl.values.iter().enumerate() {
            let v = cl.basis[i.min(cl.basis.len() - 1)];
            pairs.push(EigenPair { value, vector: Vector3(v) });
        }
    }
    let cols = [pairs[0].vector.0, pairs[1].vector.0, pairs[2].vector.0];
    let independence = linalg::smallest_singular_value(&cols);
    if independence <= INDEPENDENCE_TOL {
        defective = true;
    }
    EigenStructure {
        pairs: [pairs[0], pairs[1], pairs[2]],
        defective,
        independence,
    }
}

/// Class plus the identity flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: IsometryClass,
    pub is_identity: bool,
    pub max_modulus: f64,
    pub defective: bool,
}

/// Perturbing a unipotent 3-Jordan block by `δ` moves its eigenvalues by `δ^{1/3}`;
/// a defective element needs to clear this floor before it counts as loxodromic.
fn defective_modulus_floor(m: &Mat3) -> f64 {
    10.0 * (f64::EPSILON * linalg::frobenius(m).powi(2)).cbrt()
}

pub fn classify_detailed(g: &GroupElement, eps: f64) -> Classification {
    let es = eigen(g, eps);
    let max_modulus = es.max_modulus();
    let is_identity = g.is_identity(eps);
    let mut threshold = 1.0 + eps;
    if es.defective {
        threshold = threshold.max(1.0 + defective_modulus_floor(&g.m));
    }
    let class = if is_identity {
        IsometryClass::Elliptic
    } else if max_modulus > threshold {
        IsometryClass::Loxodromic
    } else if es.defective {
        IsometryClass::Parabolic
    } else {
        IsometryClass::Elliptic
    };
    Classification {
        class,
        is_identity,
        max_modulus,
        defective: es.defective,
    }
}

pub fn classify(g: &GroupElement, eps: f64) -> IsometryClass {
    classify_detailed(g, eps).class
}

#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub point: ProjectivePoint,
    pub class: PointClass,
    pub eigenvalue: Complex64,
}

/// Projectivized eigenvectors, sorted by descending eigenvalue modulus.
///
/// For a loxodromic element the first entry is the attracting and the last the
/// repelling boundary fixed point. Two-dimensional eigenspaces are split along
/// a basis that diagonalizes the restricted form, so an eigenspace meeting the
/// interior contributes an interior point.
pub fn fixed_points(g: &GroupElement, eps: f64) -> Vec<FixedPoint> {
    let mut out: Vec<FixedPoint> = Vec::new();
    for cl in eigen_clusters(&g.m, eps) {
        let vectors = match cl.basis.len() {
            1 => cl.basis.clone(),
            2 => form_adapted_pair(&cl.basis[0], &cl.basis[1]),
            _ => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                vec![
                    [Complex64::new(s, 0.0), ZERO, Complex64::new(s, 0.0)],
                    [ZERO, ONE, ZERO],
                    [Complex64::new(s, 0.0), ZERO, Complex64::new(-s, 0.0)],
                ]
            }
        };
        for v in vectors {
            let v = Vector3(v).normalized();
            let class = classify_point(&v, DEFAULT_POINT_TOL).unwrap_or(PointClass::Boundary);
            if out.iter().any(|fp| projective_defect(fp.point.representative(), &v) <= 1e-7) {
                continue;
            }
            let point = ProjectivePoint::new(v).expect("normalized eigenvector is nonzero");
            out.push(FixedPoint { point, class, eigenvalue: cl.mean });
        }
    }
    out
}

/// Basis of `span(u, v)` that is orthogonal for the Hermitian form.
fn form_adapted_pair(u: &[Complex64; 3], v: &[Complex64; 3]) -> Vec<[Complex64; 3]> {
    let (u3, v3) = (Vector3(*u), Vector3(*v));
    use crate::hermitian_space::hermitian_form;
    // Restricted form: ⟨x1 u + x2 v, x1 u + x2 v⟩ = y^H H y with y = conj(x).
    let huu = hermitian_form(&u3, &u3).re;
    let hvv = hermitian_form(&v3, &v3).re;
    let huv = hermitian_form(&u3, &v3);
    // Eigenvectors of [[huu, huv], [conj(huv), hvv]].
    let mean = 0.5 * (huu + hvv);
    let half_gap = (0.25 * (huu - hvv).powi(2) + huv.norm_sqr()).sqrt();
    if half_gap <= f64::EPSILON * (huu.abs() + hvv.abs() + 1.0) {
        return vec![*u, *v];
    }
    let mut out = Vec::with_capacity(2);
    for lambda in [mean + half_gap, mean - half_gap] {
        // (huu - λ) y1 + huv y2 = 0
        let y = if (huu - lambda).abs() + huv.norm() > (hvv - lambda).abs() + huv.norm() {
            [huv, Complex64::new(lambda - huu, 0.0)]
        } else {
            [Complex64::new(lambda - hvv, 0.0), huv.conj()]
        };
        let x = [y[0].conj(), y[1].conj()];
        let w = [0, 1, 2].map(|k| x[0] * u[k] + x[1] * v[k]);
        out.push(linalg::normalized(&w));
    }
    out
}
