//! 2×2 matrix aliases and the matrix Wronskian.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = Matrix2<C64>;
pub type RMat = Matrix2<f64>;
pub type CVec = Vector2<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// `W[u,v] = uᵀv′ − u′ᵀv`.
#[inline]
pub fn wronskian(u: &CMat, u_prime: &CMat, v: &CMat, v_prime: &CMat) -> CMat {
    u.transpose() * v_prime - u_prime.transpose() * v
}

#[inline]
pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

#[inline]
pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

#[inline]
pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

#[inline]
pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

/// Largest entry modulus.
#[inline]
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

#[inline]
pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

#[inline]
pub fn diag(a: C64, b: C64) -> CMat {
    CMat::new(a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), b)
}

/// Rotation `[[cos, −sin], [sin, cos]]`.
#[inline]
pub fn rotation(angle: f64) -> RMat {
    let (s, c) = angle.sin_cos();
    RMat::new(c, -s, s, c)
}

/// 2-norm condition number via singular values.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = m.singular_values();
    let (hi, lo) = (sv[0].max(sv[1]), sv[0].min(sv[1]));
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Weights `w_j` with `p′(x0) = Σ w_j p(x_j)` for the interpolating polynomial through `x`.
pub fn lagrange_derivative_weights(x: &[f64], x0: f64) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|j| {
            let mut sum = 0.0;
            for m in 0..n {
                if m == j {
                    continue;
                }
                let mut prod = 1.0 / (x[j] - x[m]);
                for q in 0..n {
                    if q != j && q != m {
                        prod *= (x0 - x[q]) / (x[j] - x[q]);
                    }
                }
                sum += prod;
            }
            sum
        })
        .collect()
}
