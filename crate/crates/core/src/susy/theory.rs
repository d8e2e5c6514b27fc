//! Closed-form predictions: `U∞`, `O`, `S₂ = O S₀ Oᵀ`, the mixing shift and the singularity
//! index rules.

use crate::error::{Error, Result};
use crate::linalg::{imag_part, max_abs_real, real_part, to_complex, CMat, RMat};
use crate::potential::ChannelSpec;
use crate::smatrix::{centrifugal_phase, SMatrixPoint};

use super::{parity, Sign};

/// `U∞(k) = [[−k², ∓2χ²], [±2χ², −k²]]`.
pub fn u_infinity(k: f64, chi: f64, sign: Sign) -> RMat {
    let c = 2.0 * chi * chi * sign.value();
    RMat::new(-k * k, -c, c, -k * k)
}

/// `O(k) = e^{il̄π/2} U∞(k) e^{−ilπ/2} / √(k⁴+4χ⁴)`, which must be real orthogonal.
pub fn o_matrix(k: f64, chi: f64, sign: Sign, spec: &ChannelSpec) -> Result<RMat> {
    let l = spec.l();
    if l[0] % 2 != l[1] % 2 {
        return Err(Error::Domain(format!(
            "partial waves l = ({}, {}) have different parity",
            l[0], l[1]
        )));
    }
    let lbar = [l[1], l[0]];
    let norm = (k.powi(4) + 4.0 * chi.powi(4)).sqrt();
    let u = to_complex(&(u_infinity(k, chi, sign) / norm));
    let left = centrifugal_phase(lbar);
    let right = centrifugal_phase(l).map(|z| z.conj());
    let o: CMat = left * u * right;
    let im = max_abs_real(&imag_part(&o));
    if im > 1e-12 {
        return Err(Error::Domain(format!("O(k) has imaginary part {im:.2e}")));
    }
    Ok(real_part(&o))
}

/// `S₂ = O S₀ Oᵀ`.
pub fn predicted_s2(
    s0: &SMatrixPoint,
    spec: &ChannelSpec,
    chi: f64,
    sign: Sign,
) -> Result<SMatrixPoint> {
    let o = to_complex(&o_matrix(s0.k, chi, sign, spec)?);
    Ok(SMatrixPoint {
        k: s0.k,
        s: o * s0.s * o.transpose(),
    })
}

/// `ε₂ = ε₀ ± (−1)^m arctan(k²/2χ²)`.
pub fn predicted_mixing(eps0: f64, k: f64, chi: f64, sign: Sign, m: i64) -> f64 {
    eps0 + sign.value() * parity(m) * (k * k / (2.0 * chi * chi)).atan()
}

/// Singularity indices after the transformation.
pub fn singularity_rules(nu: [u32; 2]) -> Result<[u32; 2]> {
    let [a, b] = nu;
    let out = match a.abs_diff(b) {
        0 | 1 => nu,
        2 => {
            return Err(Error::Unphysical(format!(
                "singularity indices ({a}, {b}) differ by 2; the transformed potential has \
                 non-diagonal singular terms at the origin"
            )))
        }
        _ if a < b => [a + 2, b - 2],
        _ => [a - 2, b + 2],
    };
    debug_assert_eq!(out[0] + out[1], a + b);
    Ok(out)
}
