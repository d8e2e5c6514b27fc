//! Eigenphase-preserving two-fold SUSY transformation with complex-conjugate factorization
//! energies `E = ±2iχ²`.

mod chain;
mod factorization;
mod theory;
mod transform;
mod verify;

pub use chain::{chain, predicted_chain_mixing};
pub use factorization::{
    bounded_solution, factorization_solution, BoundedKind, FactorizationSolution, OriginConstants,
    VectorSolution,
};
pub use theory::{o_matrix, predicted_mixing, predicted_s2, singularity_rules, u_infinity};
pub use transform::{
    transform_potential, transform_solution, transformed_jost, two_fold_superpotential, NuSource,
    Superpotential, TransformOutput,
};
pub use verify::{
    decomposition_mismatch, multiset_mismatch, tail_radius, verify_chain, verify_theorem,
    wronskian_derivative_residual, Check, Report, Tolerances,
};

use std::fmt;

/// The `±` of the transformation: upper sign is `Plus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign whose mixing shift `±(−1)^m arctan(k²/2χ²)` is positive for the given `m`.
    pub fn positive_shift(m: i64) -> Sign {
        if m.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(crate::Error::Config(format!(
                "sign must be `+` or `-`, got `{other}`"
            ))),
        }
    }
}

/// `(−1)^m`.
pub(crate) fn parity(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
