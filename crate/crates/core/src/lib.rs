//! Coupled two-channel radial scattering and the eigenphase-preserving two-fold SUSY
//! transformation.
//!
//! The radial equation is `ψ″ = (V(r) − k²) ψ` with `ψ` a 2×2 matrix solution and `V` a real
//! symmetric potential with centrifugal tail `l(l+1)/r²` and core `ν(ν+1)/r²`.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod linalg;
pub mod ode;
pub mod potential;
pub mod riccati;
pub mod smatrix;
pub mod solver;
mod spline;
pub mod susy;

pub use error::{Error, Result};
pub use grid::RadialGrid;
pub use linalg::{CMat, RMat, C64};
pub use potential::{
    load_tabulated, make_bargmann_s, make_example_v0, make_free, make_s_wave_pair, ChannelSpec,
    Potential,
};
pub use riccati::{double_factorial, free_jost_matrix, riccati_hankel, RiccatiValue};
pub use smatrix::{eigenphases, phase_curves, s_matrix, Eigenphases, PhaseData, SMatrixPoint};
pub use solver::{
    jost_matrix, jost_solution, regular_solution, JostMatrix, MatrixSolution, SolutionKind,
};
pub use susy::{
    chain, factorization_solution, predicted_mixing, predicted_s2, singularity_rules,
    transform_potential, two_fold_superpotential, u_infinity, verify_chain, verify_theorem,
    FactorizationSolution, Report, Sign, TransformOutput,
};
