//! Iterated transformations `V₀ → V₂ → V₄ → …`.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potential::Potential;

use super::transform::{transform_potential, TransformOutput};
use super::{parity, Sign};

/// Applies one transformation per `χ_j`, each to the output of the previous one.
///
/// Every step uses the same `sign`. The partial waves swap at each step, so `m` changes sign
/// but `(−1)^m` does not, and the per-step shifts add up with a common sign.
pub fn chain(
    v: &Potential,
    chis: &[f64],
    sign: Sign,
    grid: &RadialGrid,
) -> Result<Vec<TransformOutput>> {
    if chis.is_empty() {
        return Err(Error::Config("a chain needs at least one χ".into()));
    }
    let mut out: Vec<TransformOutput> = Vec::with_capacity(chis.len());
    for (j, &chi) in chis.iter().enumerate() {
        let parent = out.last().map_or(v, |t| &t.v2);
        let t = transform_potential(parent, chi, sign, grid).map_err(|e| Error::Chain {
            step: j + 1,
            source: Box::new(e),
        })?;
        out.push(t);
    }
    Ok(out)
}

/// `ε₂ₙ = ε₀ ± (−1)^m Σ_j arctan(k²/2χ_j²)`.
pub fn predicted_chain_mixing(eps0: f64, k: f64, chis: &[f64], sign: Sign, m: i64) -> f64 {
    let sum: f64 = chis
        .iter()
        .map(|chi| (k * k / (2.0 * chi * chi)).atan())
        .sum();
    eps0 + sign.value() * parity(m) * sum
}
