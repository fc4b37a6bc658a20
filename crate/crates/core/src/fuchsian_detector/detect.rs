use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::geodesic_submanifolds::{line_stabilizer_defect, transport_polar, ComplexLine};
use crate::hermitian_space::Vector3;
use crate::isometries::GroupElement;
use crate::linalg::{self, ONE, ZERO};
use crate::Tolerances;

use super::audit::{audit_ball, TraceAuditReport};
use super::normal_form::{
    diagonalizing_conjugator, find_in_ball, phase_dichotomy, residual_phase_normalizer, select_companion,
    Phase, RealLoxodromic,
};
use super::words::{word_ball, GroupPresentation, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    NoLoxodromicFound,
    SharedFixedPointsOnly,
    NonRealDiagonalForm,
    CertificationFailed,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NoLoxodromicFound => "NoLoxodromicFound",
            Self::SharedFixedPointsOnly => "SharedFixedPointsOnly",
            Self::NonRealDiagonalForm => "NonRealDiagonalForm",
            Self::CertificationFailed => "CertificationFailed",
        })
    }
}

/// Per-generator defects from re-checking a positive verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub per_generator: Vec<(String, f64)>,
    pub max_defect: f64,
    pub tolerance: f64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.max_defect <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `Q⁻¹·g·Q` is real for every generator `g`.
    RFuchsian {
        conjugator: GroupElement,
        residual_phase: Complex64,
        certificate: Certificate,
    },
    /// Every generator preserves the complex line with this polar vector.
    CFuchsian {
        polar: Vector3,
        conjugator: GroupElement,
        certificate: Certificate,
    },
    NotFuchsian {
        witness: Word,
        imag_trace: f64,
    },
    Inconclusive {
        reason: InconclusiveReason,
    },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::RFuchsian { .. } => "RFuchsian",
            Verdict::CFuchsian { .. } => "CFuchsian",
            Verdict::NotFuchsian { .. } => "NotFuchsian",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::RFuchsian { .. } | Verdict::CFuchsian { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::RFuchsian { certificate, .. } | Verdict::CFuchsian { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

/// Re-verifies the conjugator of an R-Fuchsian verdict: the largest imaginary
/// entry of `Q⁻¹·g·Q` per generator, with `Q⁻¹` from the adjugate rather than
/// the group-inverse formula.
pub fn certify_real(conjugator: &GroupElement, presentation: &GroupPresentation, eps: f64) -> Certificate {
    let inv = linalg::inverse(conjugator.matrix()).unwrap_or([[ZERO; 3]; 3]);
    let per_generator = presentation
        .generators()
        .iter()
        .map(|(label, g)| {
            let m = linalg::mul(&inv, &linalg::mul(g.matrix(), conjugator.matrix()));
            let defect = m.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max);
            (label.clone(), if defect.is_finite() { defect } else { f64::INFINITY })
        })
        .collect();
    finish(per_generator, eps)
}

/// Projective defect between each generator's image of the line and the line.
pub fn certify_line(polar: &Vector3, presentation: &GroupPresentation, eps: f64) -> Certificate {
    let per_generator = match ComplexLine::from_polar(*polar) {
        Ok(line) => presentation
            .generators()
            .iter()
            .map(|(label, g)| (label.clone(), line_stabilizer_defect(g, &line)))
            .collect(),
        Err(_) => presentation
            .generators()
            .iter()
            .map(|(label, _)| (label.clone(), f64::INFINITY))
            .collect(),
    };
    finish(per_generator, eps)
}

fn finish(per_generator: Vec<(String, f64)>, tolerance: f64) -> Certificate {
    let max_defect = per_generator
        .iter()
        .map(|(_, d)| if d.is_nan() { f64::INFINITY } else { *d })
        .fold(0.0, f64::max);
    Certificate {
        per_generator,
        max_defect,
        tolerance,
    }
}

/// Recomputes the certificate of a positive verdict against every generator.
pub fn certify(verdict: &Verdict, presentation: &GroupPresentation, eps: f64) -> Result<Certificate> {
    let cert = match verdict {
        Verdict::RFuchsian { conjugator, .. } => certify_real(conjugator, presentation, eps),
        Verdict::CFuchsian { polar, .. } => certify_line(polar, presentation, eps),
        _ => return Err(Error::NothingToCertify),
    };
    if cert.passed() {
        Ok(cert)
    } else {
        Err(Error::CertificationFailed {
            defect: cert.max_defect,
            tolerance: eps,
        })
    }
}

/// Intermediate results of the pipeline, for reporting.
#[derive(Debug, Clone, Default)]
pub struct Derivation {
    pub loxodromic: Option<RealLoxodromic>,
    /// Index of the companion generator and whether `0 ↔ ∞` had to be swapped.
    pub companion: Option<(usize, bool)>,
    pub phase: Option<Phase>,
    /// Certificate of the candidate that failed, if any.
    pub rejected: Option<Certificate>,
    pub escalated_audit: Option<TraceAuditReport>,
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub verdict: Verdict,
    pub audit: TraceAuditReport,
    pub derivation: Derivation,
}

pub fn detect(presentation: &GroupPresentation, radius: usize, tol: &Tolerances) -> Verdict {
    detect_detailed(presentation, radius, tol, 1).verdict
}

/// The full pipeline: audit, normalize, pick a companion, branch on the phase
/// of its `c` entry and certify the candidate on every generator. A failed
/// certificate triggers one wider audit before giving up.
pub fn detect_detailed(presentation: &GroupPresentation, radius: usize, tol: &Tolerances, jobs: usize) -> Detection {
    let ball = word_ball(presentation, radius);
    let audit = audit_ball(&ball, radius, tol.trace, jobs);
    let mut derivation = Derivation::default();

    let verdict = if let Some(w) = &audit.witness {
        Verdict::NotFuchsian {
            witness: w.word.clone(),
            imag_trace: w.imag_trace,
        }
    } else {
        match derive(presentation, &ball, tol, &mut derivation) {
            Ok(v) => v,
            Err(reason @ InconclusiveReason::CertificationFailed) => {
                let wide = radius + tol.escalation;
                let report = audit_ball(&word_ball(presentation, wide), wide, tol.trace, jobs);
                let verdict = match &report.witness {
                    Some(w) => Verdict::NotFuchsian {
                        witness: w.word.clone(),
                        imag_trace: w.imag_trace,
                    },
                    None => Verdict::Inconclusive { reason },
                };
                derivation.escalated_audit = Some(report);
                verdict
            }
            Err(reason) => Verdict::Inconclusive { reason },
        }
    };
    Detection {
        verdict,
        audit,
        derivation,
    }
}

fn derive(
    presentation: &GroupPresentation,
    ball: &[(Word, GroupElement)],
    tol: &Tolerances,
    derivation: &mut Derivation,
) -> std::result::Result<Verdict, InconclusiveReason> {
    let lox = find_in_ball(ball, tol.eigen).map_err(|e| match e {
        Error::NonRealDiagonalForm { .. } => InconclusiveReason::NonRealDiagonalForm,
        _ => InconclusiveReason::NoLoxodromicFound,
    })?;
    let q = diagonalizing_conjugator(&lox.element, tol.eigen).map_err(|_| InconclusiveReason::NonRealDiagonalForm)?;
    derivation.loxodromic = Some(lox);

    let conjugated: Vec<GroupElement> = presentation.elements().map(|g| g.conjugate(&q)).collect();
    let companion =
        select_companion(&conjugated, tol.entry).map_err(|_| InconclusiveReason::SharedFixedPointsOnly)?;
    derivation.companion = Some((companion.index, companion.swapped));
    let (mut conjugator, conjugated) = if companion.swapped {
        let s = fixtures::swap();
        (q * s, conjugated.iter().map(|g| g.conjugate(&s)).collect())
    } else {
        (q, conjugated)
    };

    let phase = phase_dichotomy(&companion.element, tol.entry);
    derivation.phase = Some(phase);
    let candidate = match phase {
        Phase::RealC => {
            let (d, u) = residual_phase_normalizer(&conjugated, tol.entry);
            conjugator = conjugator * d;
            Verdict::RFuchsian {
                conjugator,
                residual_phase: u,
                certificate: certify_real(&conjugator, presentation, tol.certification),
            }
        }
        Phase::ImaginaryC => {
            let polar = transport_polar(&conjugator, &Vector3::new(ZERO, ONE, ZERO));
            let polar = ComplexLine::from_polar(polar)
                .map(|l| *l.polar())
                .map_err(|_| InconclusiveReason::CertificationFailed)?;
            Verdict::CFuchsian {
                polar,
                conjugator,
                certificate: certify_line(&polar, presentation, tol.certification),
            }
        }
        Phase::Indeterminate => return Err(InconclusiveReason::CertificationFailed),
    };
    let cert = candidate.certificate().expect("candidate is positive");
    if cert.passed() {
        Ok(candidate)
    } else {
        derivation.rejected = Some(cert.clone());
        Err(InconclusiveReason::CertificationFailed)
    }
}
