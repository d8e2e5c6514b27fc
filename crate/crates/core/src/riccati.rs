//! Riccati–Hankel functions `h_l(z) = i^{l+1} (πz/2)^{1/2} H^{(1)}_{l+1/2}(z)` for integer `l`
//! and the free-particle Jost matrix built from them.
//!
//! For integer `l` these are elementary: `h_l(z) = e^{iz} P_l(1/z)` with `P_l` a polynomial, so
//! they are evaluated by the upward recurrence
//!
//! ```text
//! h_{l+1}(z) = i(2l+1)/z · h_l(z) + h_{l−1}(z),    h_{−1} = h_0 = e^{iz}
//! ```
//!
//! which is stable for the outgoing family. The derivative follows from
//! `h_l′(z) = i h_{l−1}(z) − (l/z) h_l(z)`.

use crate::error::{Error, Result};
use crate::linalg::{diag, CMat, C64, I};
use crate::potential::ChannelSpec;

/// Highest partial wave the recurrence is trusted for.
pub const MAX_L: u32 = 20;

/// Largest odd argument whose double factorial fits comfortably in a `u64`.
pub const MAX_DOUBLE_FACTORIAL_ARG: i64 = 33;

/// Value and `d/dz` derivative of a Riccati–Hankel function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiccatiValue {
    pub value: C64,
    pub derivative: C64,
}

/// `n!! = n (n−2) ⋯ 1` for odd `n`.
pub fn double_factorial(n: i64) -> Result<u64> {
    if n < 0 || n % 2 == 0 {
        return Err(Error::Domain(format!(
            "double factorial needs a nonnegative odd argument, got {n}"
        )));
    }
    if n > MAX_DOUBLE_FACTORIAL_ARG {
        return Err(Error::Domain(format!(
            "double factorial argument {n} exceeds {MAX_DOUBLE_FACTORIAL_ARG}"
        )));
    }
    Ok((1..=n as u64).step_by(2).product())
}

/// `h_l(z)` and `h_l′(z)`.
pub fn riccati_hankel(l: u32, z: C64) -> Result<RiccatiValue> {
    if l > MAX_L {
        return Err(Error::Domain(format!(
            "partial wave l = {l} exceeds the supported maximum {MAX_L}"
        )));
    }
    if z.norm() == 0.0 {
        return Err(Error::Singularity("h_l(z) is singular at z = 0".into()));
    }
    let e = (I * z).exp();
    let inv_z = z.inv();
    let mut prev = e; // h_{l-1}
    let mut cur = e; // h_l
    for n in 0..l {
        let next = I * (2 * n + 1) as f64 * inv_z * cur + prev;
        prev = cur;
        cur = next;
    }
    Ok(RiccatiValue {
        value: cur,
        derivative: I * prev - l as f64 * inv_z * cur,
    })
}

/// Free Jost matrix `diag(h_{l₁}(kr), h_{l₂}(kr))` and its radial derivative.
pub fn free_jost_matrix(spec: &ChannelSpec, k: C64, r: f64) -> Result<(CMat, CMat)> {
    if k.norm() == 0.0 {
        return Err(Error::Singularity("free Jost matrix needs k ≠ 0".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "free Jost matrix needs r > 0, got {r}"
        )));
    }
    let [l1, l2] = spec.l();
    let z = k * r;
    let h1 = riccati_hankel(l1, z)?;
    let h2 = riccati_hankel(l2, z)?;
    Ok((
        diag(h1.value, h2.value),
        diag(k * h1.derivative, k * h2.derivative),
    ))
}
