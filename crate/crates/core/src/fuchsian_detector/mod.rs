//! Decides whether a finitely generated subgroup of SU(2,1) with real traces
//! preserves a Lagrangian plane or a complex line, producing a checkable
//! certificate, a non-real-trace witness, or an inconclusive reason.

mod audit;
mod detect;
mod normal_form;
mod words;

pub use audit::{trace_audit, trace_audit_parallel, TraceAuditReport, TraceWitness};
pub use detect::{
    certify, certify_line, certify_real, detect, detect_detailed, Certificate, Derivation, Detection,
    InconclusiveReason, Verdict,
};
pub use normal_form::{
    block_pattern_bound, diagonal_from_traces, diagonalizing_conjugator, find_real_loxodromic, phase_dichotomy,
    residual_phase_normalizer, select_companion, Companion, Phase, RealLoxodromic,
};
pub use words::{word_ball, word_ball_size, GroupPresentation, Letter, Word, WordDisplay};
