//! Gaussian states of bosonic and fermionic modes, conversions between their
//! standard parametrizations, and gradient descent on the group-generated
//! manifolds they form.
//!
//! States are stored through their covariance matrix Γ and the linear complex
//! structure J derived from it together with the state-independent background
//! (symplectic form Ω for bosons, metric G for fermions). Pure states satisfy
//! J² = −𝟙; mixed states have eigenvalue pairs ±i c with c ≥ 1 (bosons) or
//! c ∈ [0, 1] (fermions). Everything downstream — tangent frames on the
//! symplectic/orthogonal group, Cayley-retraction descent, purification
//! manifolds, entanglement of purification, circuit complexity — works on
//! these two matrices in a fixed real (q, p) layout.
//!
//! The crate splits into:
//!
//! * [`phase_space`] — backgrounds, covariance matrices, complex structures,
//!   purity diagnostics, subsystem restriction, basis changes;
//! * [`geometry`] — Lie algebra bases of sp(2N,ℝ) and so(2N,ℝ), the
//!   stabilizer split, the pullback metric and symplectic form, Cayley
//!   retraction and random group sampling;
//! * [`repr`] — the conversion dictionary (squeezing matrices, Bogoliubov
//!   data, thermal/modular parameters, wave functions, characteristic and
//!   quasiprobability exponents);
//! * [`purification`] — mixed-state standard forms and purification problems;
//! * [`optimizer`] — gradient assembly, step control, multi-start with
//!   pruning, Hamiltonian flow;
//! * [`models`], [`entropy`], [`eop`], [`complexity`] — quadratic-Hamiltonian
//!   energies, lattice models, entanglement entropies, entanglement and
//!   complexity of purification;
//! * [`fock`] — a dense Fock-space oracle for small fermionic systems,
//!   including the fermionic partial trace and non-Gaussian EoP;
//! * [`io`], [`cli`] — file formats and the batch front-end.

extern crate blas_src;

pub mod linalg;
pub mod phase_space;
pub mod geometry;
pub mod repr;
pub mod purification;
pub mod optimizer;
pub mod models;
pub mod entropy;
pub mod eop;
pub mod complexity;
pub mod fock;
pub mod io;
pub mod cli;

pub use phase_space::{
    BackgroundStructure, BasisConvention, GaussianState, ParticleKind, SubsystemPartition,
};

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("form is singular beyond the pseudo-inverse cutoff")]
    SingularForm,
    #[error("matrix is not a restricted complex structure (max eigenvalue real part {0:.3e})")]
    NotRestrictedComplexStructure(f64),
    #[error("unknown or invalid partition block {0:?}")]
    BadBlock(String),
    #[error("generator set is numerically degenerate")]
    DegenerateBasis,
    #[error("metric is rank-deficient (eigenvalue {0:.3e})")]
    RankDeficient(f64),
    #[error("retraction denominator is near-singular (condition estimate {0:.3e})")]
    NearSingular(f64),
    #[error("states lie in different components of the fermionic Gaussian manifold")]
    DifferentComponent,
    #[error("square root is ambiguous: relative structure has a (-1,-1,-1,-1) eigenvalue quadruple")]
    AmbiguousSqrt,
    #[error("bosonic squeezing matrix has spectral norm {0:.6} >= 1")]
    NonNormalizable(f64),
    #[error("assembled transformation is not in the group (defect {0:.3e})")]
    NotInGroup(f64),
    #[error("thermal parameters diverge on nearly pure modes {0:?}")]
    PureModeDivergence(Vec<usize>),
    #[error("quasiprobability distribution is singular for this ordering parameter")]
    SingularDistribution,
    #[error("position-position block of the covariance matrix is singular")]
    SingularPositionBlock,
    #[error("matrix is not positive-definite")]
    NotPositive,
    #[error("eigenvector pairing failed on degenerate spectrum")]
    DegeneratePairing,
    #[error("{needed} correlated modes but only {available} ancilla modes")]
    InsufficientAncilla { needed: usize, available: usize },
    #[error("no decreasing step found above the minimum step size")]
    StepUnderflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("block of J is not a valid restricted complex structure")]
    NotRestricted,
    #[error("entropy spectrum touches the logarithmic singularity")]
    SingularSpectrum,
    #[error("symplectic form is degenerate on the tangent frame")]
    DegenerateSymplecticForm,
    #[error("{0} fermionic modes exceed the dense oracle limit of {1}")]
    TooManyModes(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Lapack(#[from] ndarray_linalg::error::LinalgError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
