//! Small dense 3×3 complex linear algebra.
//!
//! Everything here works on fixed-size arrays; nothing allocates.

use num_complex::Complex64;

pub type Mat3 = [[Complex64; 3]; 3];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity() -> Mat3 {
    let mut m = [[ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn diag(d: [Complex64; 3]) -> Mat3 {
    let mut m = [[ZERO; 3]; 3];
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

/// Builds a matrix from real entries.
pub fn real(rows: [[f64; 3]; 3]) -> Mat3 {
    rows.map(|r| r.map(|x| Complex64::new(x, 0.0)))
}

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i][k] = a[i][0] * b[0][k] + a[i][1] * b[1][k] + a[i][2] * b[2][k];
        }
    }
    out
}

pub fn mul_vec(a: &Mat3, v: &[Complex64; 3]) -> [Complex64; 3] {
    [0, 1, 2].map(|i| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2])
}

pub fn sub(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = *a;
    for i in 0..3 {
        for k in 0..3 {
            out[i][k] -= b[i][k];
        }
    }
    out
}

pub fn scale(a: &Mat3, s: Complex64) -> Mat3 {
    a.map(|r| r.map(|x| x * s))
}

pub fn conj(a: &Mat3) -> Mat3 {
    a.map(|r| r.map(|x| x.conj()))
}

pub fn conj_transpose(a: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i][k] = a[k][i].conj();
        }
    }
    out
}

pub fn trace(a: &Mat3) -> Complex64 {
    a[0][0] + a[1][1] + a[2][2]
}

pub fn det(a: &Mat3) -> Complex64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Sum of the principal 2×2 minors (second coefficient of the characteristic polynomial).
pub fn principal_minor_sum(a: &Mat3) -> Complex64 {
    (a[0][0] * a[1][1] - a[0][1] * a[1][0])
        + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
        + (a[1][1] * a[2][2] - a[1][2] * a[2][1])
}

pub fn adjugate(a: &Mat3) -> Mat3 {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
    [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ]
}

/// General inverse via the adjugate. Returns `None` for a singular matrix.
pub fn inverse(a: &Mat3) -> Option<Mat3> {
    let d = det(a);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    Some(scale(&adjugate(a), d.inv()))
}

pub fn max_abs(a: &Mat3) -> f64 {
    a.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn frobenius(a: &Mat3) -> f64 {
    a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation between two matrices.
pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    max_abs(&sub(a, b))
}

pub fn vec_norm(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean (not Hermitian-form) inner product `Σ conj(u_k) v_k`.
pub fn dot_h(u: &[Complex64; 3], v: &[Complex64; 3]) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1] + u[2].conj() * v[2]
}

/// Bilinear cross product: `r · (r × s) = s · (r × s) = 0` without conjugation.
pub fn cross(r: &[Complex64; 3], s: &[Complex64; 3]) -> [Complex64; 3] {
    [
        r[1] * s[2] - r[2] * s[1],
        r[2] * s[0] - r[0] * s[2],
        r[0] * s[1] - r[1] * s[0],
    ]
}

/// Roots of the monic cubic `x³ + c2·x² + c1·x + c0`, Cardano with Newton polishing.
pub fn cubic_roots(c2: Complex64, c1: Complex64, c0: Complex64) -> [Complex64; 3] {
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = c2 * c2 * c2 * (2.0 / 27.0) - c2 * c1 / 3.0 + c0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let plus = -q / 2.0 + disc;
    let minus = -q / 2.0 - disc;
    let u3 = if plus.norm() >= minus.norm() { plus } else { minus };

    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = if u3.norm() == 0.0 {
        [ZERO; 3]
    } else {
        let u = u3.powf(1.0 / 3.0);
        let mut out = [ZERO; 3];
        let mut w = ONE;
        for root in out.iter_mut() {
            let uk = u * w;
            *root = uk - p / (uk * 3.0);
            w *= omega;
        }
        out
    };
    for r in roots.iter_mut() {
        *r -= shift;
    }

    let poly = |x: Complex64| ((x + c2) * x + c1) * x + c0;
    let dpoly = |x: Complex64| (x * 3.0 + c2 * 2.0) * x + c1;
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let f = poly(*r);
            let df = dpoly(*r);
            if df.norm() == 0.0 || f.norm() == 0.0 {
                break;
            }
            let candidate = *r - f / df;
            if poly(candidate).norm() < f.norm() {
                *r = candidate;
            } else {
                break;
            }
        }
    }
    roots
}

/// Eigenvalues of a Hermitian 3×3 matrix, ascending. Trigonometric closed form.
pub fn hermitian_eigenvalues(h: &Mat3) -> [f64; 3] {
    let p1 = h[0][1].norm_sqr() + h[0][2].norm_sqr() + h[1][2].norm_sqr();
    let d = [h[0][0].re, h[1][1].re, h[2][2].re];
    let q = (d[0] + d[1] + d[2]) / 3.0;
    let p2 = (d[0] - q).powi(2) + (d[1] - q).powi(2) + (d[2] - q).powi(2) + 2.0 * p1;
    if p1 == 0.0 {
        let mut out = d;
        out.sort_by(f64::total_cmp);
        return out;
    }
    let p = (p2 / 6.0).sqrt();
    let mut b = *h;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = Complex64::new(d[i] - q, 0.0);
    }
    let b = scale(&b, Complex64::new(1.0 / p, 0.0));
    let r = (det(&b).re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    let mut out = [lo, mid, hi];
    out.sort_by(f64::total_cmp);
    out
}

/// Smallest singular value of the matrix whose columns are `cols`.
pub fn smallest_singular_value(cols: &[[Complex64; 3]; 3]) -> f64 {
    let mut gram = [[ZERO; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            gram[i][k] = dot_h(&cols[i], &cols[k]);
        }
    }
    hermitian_eigenvalues(&gram)[0].max(0.0).sqrt()
}

/// Orthonormal basis (Euclidean) of the null space of `n`, given a rank threshold.
///
/// The threshold is compared against the second singular value estimate
/// `‖r_a × r_b‖ / ‖r_max‖` and the largest row norm.
pub fn null_space(n: &Mat3, tol: f64) -> Vec<[Complex64; 3]> {
    let rows = [n[0], n[1], n[2]];
    let row_norms = rows.map(|r| vec_norm(&r));
    let (imax, rmax) = row_norms
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });
    if rmax <= tol {
        return vec![
            [ONE, ZERO, ZERO],
            [ZERO, ONE, ZERO],
            [ZERO, ZERO, ONE],
        ];
    }
    let best = best_cross(&rows);
    if vec_norm(&best) / rmax > tol {
        return vec![normalized(&best)];
    }
    // Rank one: everything bilinearly orthogonal to the dominant row.
    let r = rows[imax];
    let k = (0..3)
        .max_by(|&x, &y| r[x].norm().total_cmp(&r[y].norm()))
        .unwrap_or(0);
    let mut basis: Vec<[Complex64; 3]> = Vec::with_capacity(2);
    for i in (0..3).filter(|&i| i != k) {
        let mut v = [ZERO; 3];
        v[i] = r[k];
        v[k] = -r[i];
        for u in &basis {
            let proj = dot_h(u, &v);
            for t in 0..3 {
                v[t] -= u[t] * proj;
            }
        }
        basis.push(normalized(&v));
    }
    basis
}

/// Cross product of the row pair with the largest magnitude.
pub fn best_cross(rows: &[[Complex64; 3]; 3]) -> [Complex64; 3] {
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    candidates
        .into_iter()
        .max_by(|x, y| vec_norm(x).total_cmp(&vec_norm(y)))
        .unwrap_or([ZERO; 3])
}

pub fn normalized(v: &[Complex64; 3]) -> [Complex64; 3] {
    let n = vec_norm(v);
    if n == 0.0 {
        *v
    } else {
        v.map(|x| x / n)
    }
}
