use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("point is not in the interior of complex hyperbolic space")]
    NotInterior,
    #[error("distance ratio {value} fell below 1; input is not a pair of interior points")]
    DistanceRatioBelowOne { value: f64 },
    #[error("polar vector must be positive for the Hermitian form")]
    NotPositive,
    #[error("matrix is not an antiholomorphic isometric involution (residual {residual:e})")]
    NotInvolution { residual: f64 },
    #[error("matrix does not preserve the Hermitian form (max residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("determinant is {det}, expected 1")]
    BadDeterminant { det: Complex64 },
    #[error("boundary triple is degenerate (repeated point or vanishing pairing)")]
    DegenerateTriple,
    #[error("boundary quadruple is degenerate (repeated point or vanishing pairing)")]
    DegenerateQuadruple,
    #[error("cross-ratios satisfy both coplanarity constraints (complex-line defect {line_defect:e}, lagrangian defect {lagrangian_defect:e})")]
    Ambiguous { line_defect: f64, lagrangian_defect: f64 },
    #[error("no loxodromic element with real eigenvalues found in the word ball")]
    NoLoxodromicFound,
    #[error("diagonal form of the loxodromic element is not real (max imaginary part {imag:e})")]
    NonRealDiagonalForm { imag: f64 },
    #[error("every generator fixes both 0 and infinity")]
    SharedFixedPointsOnly,
    #[error("certificate rejected: defect {defect:e} exceeds tolerance {tolerance:e}")]
    CertificationFailed { defect: f64, tolerance: f64 },
    #[error("only R-Fuchsian and C-Fuchsian verdicts carry a certificate")]
    NothingToCertify,
    #[error("generator {label:?} is invalid: {source}")]
    InvalidGenerator { label: String, source: Box<Error> },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
