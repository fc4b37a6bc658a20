//! Generator and point files.
//!
//! Complex numbers are `[re, im]` pairs. A generator file is
//!
//! ```json
//! {"generators": [{"label": "A", "matrix": [[[2, 0], [0, 0], [0, 0]], ...]}],
//!  "tolerances": {"group": 1e-9}}
//! ```
//!
//! and a point file holds `"entries"` (lists of points) or `"points"`, where a
//! point is `"inf"` or the pair of non-homogeneous coordinates `[z1, z2]`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use siegel_core::isometries::{normalize_to_su21, principal_cube_root, validate};
use siegel_core::linalg::Mat3;
use siegel_core::{Error, FinitePoint, GroupElement, ProjectivePoint, Tolerances};

pub type Pair = [f64; 2];

pub fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub label: String,
    pub matrix: [[Pair; 3]; 3],
}

impl GeneratorEntry {
    pub fn mat(&self) -> Mat3 {
        self.matrix.map(|row| row.map(complex))
    }
}

/// Tolerance overrides; missing fields keep the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub point: Option<f64>,
    pub group: Option<f64>,
    pub eigen: Option<f64>,
    pub trace: Option<f64>,
    pub coplanarity: Option<f64>,
    pub membership: Option<f64>,
    pub entry: Option<f64>,
    pub certification: Option<f64>,
    pub escalation: Option<usize>,
    pub radius: Option<usize>,
}

impl ToleranceOverrides {
    pub fn apply(&self, tol: &mut Tolerances) {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { tol.$f = v; })* };
        }
        set!(point, group, eigen, trace, coplanarity, membership, entry, certification, escalation, radius);
    }
}

/// Other top-level keys (such as the `meta` block written by `fixtures`) are ignored.
#[derive(Debug, Deserialize)]
pub struct GeneratorFile {
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
}

/// Raw bytes of an input together with their SHA-256.
pub struct Loaded<T> {
    pub value: T,
    pub digest: String,
}

fn read(path: &Path) -> Result<(Vec<u8>, String)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    Ok((bytes, digest))
}

pub fn load_generators(path: &Path) -> Result<Loaded<GeneratorFile>> {
    let (bytes, digest) = read(path)?;
    let value: GeneratorFile =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing generator file {}", path.display()))?;
    if value.generators.is_empty() {
        bail!("{}: no generators", path.display());
    }
    Ok(Loaded { value, digest })
}

/// How a generator entered the group.
#[derive(Debug, Clone)]
pub enum Admission {
    Valid,
    /// Divided by this cube root of the determinant.
    Normalized { root: Complex64, det: Complex64 },
}

/// Validates a matrix, falling back to rescaling by a cube root of the determinant.
pub fn admit(m: Mat3, eps: f64) -> Result<(GroupElement, Admission), Error> {
    match validate(m, eps) {
        Ok(g) => Ok((g, Admission::Valid)),
        Err(Error::BadDeterminant { det }) => {
            let g = normalize_to_su21(m, eps)?;
            Ok((
                g,
                Admission::Normalized {
                    root: principal_cube_root(det),
                    det,
                },
            ))
        }
        Err(e) => Err(e),
    }
}

/// Labeled, admitted generators; fails on the first invalid one.
pub fn admit_all(file: &GeneratorFile, eps: f64) -> Result<Vec<(String, GroupElement, Admission)>> {
    file.generators
        .iter()
        .map(|g| {
            let (el, how) = admit(g.mat(), eps).with_context(|| format!("generator {:?}", g.label))?;
            Ok((g.label.clone(), el, how))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum PointSpec {
    Token(String),
    Finite([Pair; 2]),
}

// Untagged enums cannot buffer arbitrary-precision numbers, so go through `Value`.
impl<'de> Deserialize<'de> for PointSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(t) => Ok(PointSpec::Token(t)),
            v => serde_json::from_value(v)
                .map(PointSpec::Finite)
                .map_err(|e| D::Error::custom(format!("expected \"inf\" or [[re, im], [re, im]]: {e}"))),
        }
    }
}

impl PointSpec {
    pub fn to_point(&self) -> Result<ProjectivePoint> {
        match self {
            PointSpec::Token(t) if t == "inf" => Ok(ProjectivePoint::infinity()),
            PointSpec::Token(t) => bail!("unknown point token {t:?} (expected \"inf\" or [[re, im], [re, im]])"),
            PointSpec::Finite([z1, z2]) => {
                let p = FinitePoint::new(complex(*z1), complex(*z2));
                if !(p.z1.is_finite() && p.z2.is_finite()) {
                    bail!("non-finite coordinates");
                }
                Ok(ProjectivePoint::finite(p))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    #[serde(default)]
    pub entries: Option<Vec<Vec<PointSpec>>>,
    #[serde(default)]
    pub points: Option<Vec<PointSpec>>,
}

/// Groups of points: `entries` as given, or a bare `points` list as one entry.
pub fn load_points(path: &Path) -> Result<Loaded<Vec<Vec<ProjectivePoint>>>> {
    let (bytes, digest) = read(path)?;
    let file: PointFile =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing point file {}", path.display()))?;
    let groups = match (file.entries, file.points) {
        (Some(e), None) => e,
        (None, Some(p)) => vec![p],
        _ => bail!("{}: expected exactly one of \"entries\" or \"points\"", path.display()),
    };
    let value = groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            g.iter()
                .map(|p| p.to_point())
                .collect::<Result<Vec<_>>>()
                .with_context(|| format!("entry {i}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Loaded { value, digest })
}

/// Parses a single point given on the command line: `inf` or JSON `[[re, im], [re, im]]`.
pub fn parse_point_arg(s: &str) -> Result<ProjectivePoint> {
    let s = s.trim();
    if s == "inf" {
        return Ok(ProjectivePoint::infinity());
    }
    let spec: PointSpec = serde_json::from_str(s).with_context(|| format!("parsing point {s:?}"))?;
    spec.to_point()
}
