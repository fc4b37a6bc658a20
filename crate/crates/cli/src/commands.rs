use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use siegel_core::fixtures::{self, FixtureKind};
use siegel_core::fuchsian_detector::{
    detect_detailed, trace_audit_parallel, word_ball, Certificate, GroupPresentation, Phase, Verdict,
};
use siegel_core::hermitian_space::classify_point;
use siegel_core::isometries::{classify_detailed, eigen, fixed_points, grid_residual};
use siegel_core::linalg;
use siegel_core::projective_invariants::{cartan_invariant, coplanarity_test, pp_cross_ratios};
use siegel_core::{Error, PointClass, Tolerances};

use crate::input::{self, admit, admit_all, Admission, GeneratorFile, Loaded};
use crate::report::{self, num};

/// Tolerance flags from the command line; they override file settings.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub radius: Option<usize>,
    pub group: Option<f64>,
    pub trace: Option<f64>,
    pub certification: Option<f64>,
}

impl Overrides {
    pub fn resolve(&self, file: Option<&GeneratorFile>) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(f) = file {
            f.tolerances.apply(&mut tol);
        }
        if let Some(r) = self.radius {
            tol.radius = r;
        }
        if let Some(e) = self.group {
            tol.group = e;
        }
        if let Some(e) = self.trace {
            tol.trace = e;
        }
        if let Some(e) = self.certification {
            tol.certification = e;
        }
        tol
    }
}

/// What a command produced before the envelope is added.
pub struct Outcome {
    pub digest: Option<String>,
    pub tolerances: Option<Tolerances>,
    pub results: Value,
}

fn admission(a: &Admission) -> Value {
    match a {
        Admission::Valid => json!({"status": "valid"}),
        Admission::Normalized { root, det } => json!({
            "status": "normalized",
            "det": report::complex(*det),
            "cube_root": report::complex(*root),
        }),
    }
}

fn presentation(loaded: &Loaded<GeneratorFile>, tol: &Tolerances) -> Result<(GroupPresentation, Vec<Value>)> {
    let admitted = admit_all(&loaded.value, tol.group)?;
    let notes = admitted
        .iter()
        .map(|(label, _, how)| {
            let mut v = admission(how);
            v["label"] = json!(label);
            v
        })
        .collect();
    let gens = admitted.into_iter().map(|(l, g, _)| (l, g)).collect();
    Ok((GroupPresentation::new(gens, tol.group)?, notes))
}

pub fn validate(path: &Path, o: &Overrides) -> Result<Outcome> {
    let loaded = input::load_generators(path)?;
    let tol = o.resolve(Some(&loaded.value));
    let rows = loaded
        .value
        .generators
        .iter()
        .map(|entry| {
            let m = entry.mat();
            let det = linalg::det(&m);
            let mut row = json!({
                "label": entry.label,
                "det": report::complex(det),
                "det_residual": num((det - linalg::ONE).norm()),
                "grid_residual": num(grid_residual(&m)),
            });
            // The validation error is reported even when rescaling rescues the matrix.
            if let Err(e) = siegel_core::isometries::validate(m, tol.group) {
                row["error"] = json!(error_kind(&e));
                row["message"] = json!(e.to_string());
            }
            match admit(m, tol.group) {
                Ok((g, how)) => {
                    row["admission"] = admission(&how);
                    row["valid"] = json!(true);
                    if let Admission::Normalized { .. } = how {
                        row["normalized_grid_residual"] = num(grid_residual(g.matrix()));
                    }
                }
                Err(e) => {
                    row["valid"] = json!(false);
                    if row.get("error").and_then(|v| v.as_str()) != Some(error_kind(&e)) {
                        row["normalization_error"] = json!(error_kind(&e));
                    }
                }
            }
            row
        })
        .collect::<Vec<_>>();
    let all_valid = rows.iter().all(|r| r["valid"] == json!(true));
    Ok(Outcome {
        digest: Some(loaded.digest),
        tolerances: Some(tol),
        results: json!({"all_valid": all_valid, "generators": rows}),
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::BadDeterminant { .. } => "BadDeterminant",
        Error::NotUnitary { .. } => "NotUnitary",
        Error::DegenerateTriple => "DegenerateTriple",
        Error::DegenerateQuadruple => "DegenerateQuadruple",
        Error::Ambiguous { .. } => "Ambiguous",
        _ => "Error",
    }
}

pub fn classify(path: &Path, o: &Overrides) -> Result<Outcome> {
    let loaded = input::load_generators(path)?;
    let tol = o.resolve(Some(&loaded.value));
    let admitted = admit_all(&loaded.value, tol.group)?;
    let rows = admitted
        .iter()
        .map(|(label, g, how)| {
            let c = classify_detailed(g, tol.eigen);
            let es = eigen(g, tol.eigen);
            let fixed: Vec<Value> = fixed_points(g, tol.eigen)
                .iter()
                .map(|f| {
                    json!({
                        "point": report::point(&f.point),
                        "class": f.class.to_string(),
                        "eigenvalue": report::complex(f.eigenvalue),
                    })
                })
                .collect();
            json!({
                "label": label,
                "admission": admission(how),
                "class": c.class.to_string(),
                "is_identity": c.is_identity,
                "trace": report::complex(g.trace()),
                "eigenvalues": es.values().iter().map(|&z| report::complex(z)).collect::<Vec<_>>(),
                "max_modulus": num(c.max_modulus),
                "defective": c.defective,
                "fixed_points": fixed,
            })
        })
        .collect::<Vec<_>>();
    Ok(Outcome {
        digest: Some(loaded.digest),
        tolerances: Some(tol),
        results: json!({"generators": rows}),
    })
}

pub fn cartan(path: &Path, o: &Overrides) -> Result<Outcome> {
    let loaded = input::load_points(path)?;
    let tol = o.resolve(None);
    let rows = loaded
        .value
        .iter()
        .map(|ps| {
            if ps.len() != 3 {
                return json!({"error": "ExpectedThreePoints", "points": ps.len()});
            }
            match cartan_invariant(&ps[0], &ps[1], &ps[2]) {
                Ok(a) => json!({
                    "angle": num(a.angle),
                    "complex_line": a.is_complex_line(tol.coplanarity),
                    "lagrangian": a.is_lagrangian(tol.coplanarity),
                }),
                Err(e) => json!({"error": error_kind(&e), "message": e.to_string()}),
            }
        })
        .collect::<Vec<_>>();
    Ok(Outcome {
        digest: Some(loaded.digest),
        tolerances: Some(tol),
        results: json!({"entries": rows}),
    })
}

pub fn cross(path: &Path, o: &Overrides) -> Result<Outcome> {
    let loaded = input::load_points(path)?;
    let tol = o.resolve(None);
    let rows = loaded
        .value
        .iter()
        .map(|ps| {
            if ps.len() != 4 {
                return json!({"error": "ExpectedFourPoints", "points": ps.len()});
            }
            let ratios = match pp_cross_ratios(&ps[0], &ps[1], &ps[2], &ps[3]) {
                Ok(r) => r,
                Err(e) => return json!({"error": error_kind(&e), "message": e.to_string()}),
            };
            let mut row = json!({
                "x1": report::complex(ratios.x1),
                "x2": report::complex(ratios.x2),
                "x3": report::complex(ratios.x3),
            });
            match coplanarity_test(&ps[0], &ps[1], &ps[2], &ps[3], tol.coplanarity) {
                Ok(v) => {
                    row["verdict"] = json!(v.kind.to_string());
                    row["line_defect"] = num(v.line_defect);
                    row["lagrangian_defect"] = num(v.lagrangian_defect);
                }
                Err(Error::Ambiguous {
                    line_defect,
                    lagrangian_defect,
                }) => {
                    row["verdict"] = json!("ambiguous");
                    row["line_defect"] = num(line_defect);
                    row["lagrangian_defect"] = num(lagrangian_defect);
                }
                Err(e) => row["error"] = json!(error_kind(&e)),
            }
            row
        })
        .collect::<Vec<_>>();
    Ok(Outcome {
        digest: Some(loaded.digest),
        tolerances: Some(tol),
        results: json!({"entries": rows}),
    })
}

pub fn audit(path: &Path, o: &Overrides, jobs: usize) -> Result<Outcome> {
    let loaded = input::load_generators(path)?;
    let tol = o.resolve(Some(&loaded.value));
    let (p, notes) = presentation(&loaded, &tol)?;
    let r = trace_audit_parallel(&p, tol.radius, tol.trace, jobs);
    Ok(Outcome {
        digest: Some(loaded.digest),
        tolerances: Some(tol),
        results: json!({"generators": notes, "audit": report::audit(&r, &p)}),
    })
}

fn certificate(c: &Certificate) -> Value {
    json!({
        "max_defect": num(c.max_defect),
        "tolerance": num(c.tolerance),
        "passed": c.passed(),
        "per_generator": c.per_generator.iter().map(|(l, d)| json!({"label": l, "defect": num(*d)})).collect::<Vec<_>>(),
    })
}

pub fn verdict(v: &Verdict, p: &GroupPresentation) -> Value {
    match v {
        Verdict::RFuchsian {
            conjugator,
            residual_phase,
            certificate: c,
        } => json!({
            "kind": v.kind(),
            "conjugator": report::matrix(conjugator.matrix()),
            "residual_phase": report::complex(*residual_phase),
            "certificate": certificate(c),
        }),
        Verdict::CFuchsian {
            polar,
            conjugator,
            certificate: c,
        } => json!({
            "kind": v.kind(),
            "polar": report::vector(&polar.normalized()),
            "conjugator": report::matrix(conjugator.matrix()),
            "certificate": certificate(c),
        }),
        Verdict::NotFuchsian { witness, imag_trace } => json!({
            "kind": v.kind(),
            "witness": witness.display(p).to_string(),
            "witness_length": witness.len(),
            "imag_trace": num(*imag_trace),
        }),
        Verdict::Inconclusive { reason } => json!({
            "kind": v.kind(),
            "reason": reason.to_string(),
        }),
    }
}

pub fn detect(path: &Path, o: &Overrides, jobs: usize) -> Result<Outcome> {
    let loaded = input::load_generators(path)?;
    let tol = o.resolve(Some(&loaded.value));
    let (p, notes) = presentation(&loaded, &tol)?;
    let d = detect_detailed(&p, tol.radius, &tol, jobs);
    let der = &d.derivation;
    let derivation = json!({
        "loxodromic": der.loxodromic.as_ref().map(|l| json!({
            "word": l.word.display(&p).to_string(),
            "t": num(l.t),
        })),
        "companion": der.companion.map(|(i, swapped)| json!({"label": p.label(i), "swapped": swapped})),
        "phase": der.phase.map(|ph| match ph {
            Phase::RealC => "real",
            Phase::ImaginaryC => "imaginary",
            Phase::Indeterminate => "indeterminate",
        }),
        "rejected_certificate": der.rejected.as_ref().map(certificate),
        "escalated_audit": der.escalated_audit.as_ref().map(|a| report::audit(a, &p)),
    });
    Ok(Outcome {
        digest: Some(loaded.digest),
        tolerances: Some(tol),
        results: json!({
            "generators": notes,
            "verdict": verdict(&d.verdict, &p),
            "audit": report::audit(&d.audit, &p),
            "derivation": derivation,
        }),
    })
}

pub struct FixtureArgs {
    pub kind: FixtureKind,
    pub seed: u64,
    pub count: usize,
    pub words: usize,
    pub delta: f64,
    pub out_dir: PathBuf,
}

/// Writes `count` generator files drawn from one seeded stream.
pub fn fixtures(a: &FixtureArgs) -> Result<Outcome> {
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut written = Vec::new();
    for index in 0..a.count {
        let (gens, q) = fixtures::fixture_generators(&mut rng, a.kind, a.words, a.delta);
        let mut meta = json!({
            "kind": a.kind.to_string(),
            "seed": a.seed,
            "index": index,
            "conjugated_by": report::matrix(q.matrix()),
        });
        if a.kind == FixtureKind::NearMiss {
            meta["perturbation"] = num(a.delta);
        }
        let file = json!({
            "generators": gens.iter().map(|(l, g)| json!({"label": l, "matrix": report::matrix(g.matrix())})).collect::<Vec<_>>(),
            "meta": meta,
        });
        let text = report::to_string(&file);
        let path = a.out_dir.join(format!("{}-seed{}-{}.json", a.kind, a.seed, index));
        fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
        written.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(text.as_bytes())),
        }));
    }
    Ok(Outcome {
        digest: None,
        tolerances: None,
        results: json!({
            "kind": a.kind.to_string(),
            "seed": a.seed,
            "count": a.count,
            "words": a.words,
            "delta": num(a.delta),
            "files": written,
        }),
    })
}

fn csv_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// CSV of the word-ball orbit of a point: `word,re_z1,im_z1,re_z2,im_z2`.
pub fn orbit(path: &Path, point: &str, o: &Overrides) -> Result<String> {
    let loaded = input::load_generators(path)?;
    let tol = o.resolve(Some(&loaded.value));
    let (p, _) = presentation(&loaded, &tol)?;
    let x = input::parse_point_arg(point)?;
    if classify_point(x.representative(), tol.point)? == PointClass::Exterior {
        bail!("point {point} lies outside the closed ball");
    }
    let mut out = String::from("word,re_z1,im_z1,re_z2,im_z2\n");
    for (w, g) in word_ball(&p, tol.radius) {
        let image = g.apply(&x);
        let word = w.display(&p).to_string();
        match image.to_finite() {
            Some(f) => writeln!(
                out,
                "{word},{},{},{},{}",
                csv_num(f.z1.re),
                csv_num(f.z1.im),
                csv_num(f.z2.re),
                csv_num(f.z2.im)
            ),
            None => writeln!(out, "{word},inf,inf,inf,inf"),
        }
        .expect("writing to a String");
    }
    Ok(out)
}
