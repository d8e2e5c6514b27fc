//! Bounded vector solutions at complex `k` and the factorization solution `u`.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::{wronskian, CMat, CVec, C64, I};
use crate::potential::{ChannelSpec, Potential};
use crate::riccati::riccati_hankel;
use crate::solver::{
    jost_matrix_from, jost_solution, regular_solution, MatrixSolution, GROWTH_LIMIT,
};

use super::Sign;

/// Vector solution `ψ(r)` with `ψ′(r)` on a grid.
#[derive(Clone, Debug)]
pub struct VectorSolution {
    pub k: C64,
    pub r: Vec<f64>,
    pub values: Vec<CVec>,
    pub derivatives: Vec<CVec>,
}

/// Which of the two bounded constructions to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundedKind {
    /// `(2k/i) φ(k,r) F⁻¹(k) c`: regular at the origin, growing like `e^{−ikr}`.
    U,
    /// `f(k,r) d`: decaying like `e^{ikr}`, singular at the origin.
    V,
}

fn apply(m: &MatrixSolution, left: Option<CMat>, c: CVec) -> (Vec<CVec>, Vec<CVec>) {
    let t = left.map_or(c, |l| l * c);
    (
        m.values.iter().map(|x| x * t).collect(),
        m.derivatives.iter().map(|x| x * t).collect(),
    )
}

fn check_upper_half_plane(k: C64) -> Result<()> {
    if !(k.im > 0.0) {
        return Err(Error::Domain(format!(
            "bounded solutions need Im k > 0, got k = {k}"
        )));
    }
    Ok(())
}

/// One of the two vector solutions at complex `k`.
pub fn bounded_solution(
    v: &Potential,
    k: C64,
    coeffs: [C64; 2],
    kind: BoundedKind,
    grid: &RadialGrid,
) -> Result<VectorSolution> {
    check_upper_half_plane(k)?;
    let c = CVec::new(coeffs[0], coeffs[1]);
    let f = jost_solution(v, k, grid)?;
    let (values, derivatives) = match kind {
        BoundedKind::V => apply(&f, None, c),
        BoundedKind::U => {
            let phi = regular_solution(v, k, grid)?;
            let inv = inverse_jost(&f, &phi)?;
            apply(&phi, Some(inv * (2.0 * k / I)), c)
        }
    };
    Ok(VectorSolution {
        k,
        r: grid.points().to_vec(),
        values,
        derivatives,
    })
}

fn inverse_jost(f: &MatrixSolution, phi: &MatrixSolution) -> Result<CMat> {
    let jm = jost_matrix_from(f, phi)?;
    jm.f.try_inverse()
        .ok_or_else(|| Error::Hypothesis(format!("Jost matrix at k = {} is not invertible", f.k)))
}

/// Near-origin behaviour `u ≈ [[a₁ r^{ν₁+1}, b₁ r^{−ν₁}], [a₂ r^{ν₂+1}, b₂ r^{−ν₂}]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OriginConstants {
    pub a: [C64; 2],
    pub b: [C64; 2],
    /// Fitted log-log slopes of `|u_ij|`, row `i`, column `j`.
    pub slopes: [[f64; 2]; 2],
}

impl OriginConstants {
    pub fn determinant(&self) -> C64 {
        self.a[0] * self.b[1] - self.a[1] * self.b[0]
    }
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fits `u` on `[2 r_min, 20 r_min]`.
/// Grid indices in `[2r_min, 20r_min]`, or the first three interior points if that window
/// holds fewer than three.
pub(crate) fn origin_window(r: &[f64]) -> Vec<usize> {
    let (lo, hi) = (2.0 * r[0], 20.0 * r[0]);
    let idx: Vec<usize> = (0..r.len()).filter(|&i| r[i] >= lo && r[i] <= hi).collect();
    if idx.len() >= 3 {
        idx
    } else {
        (1..r.len().min(4)).collect()
    }
}

fn origin_constants(spec: &ChannelSpec, r: &[f64], u: &[CMat]) -> Result<OriginConstants> {
    let idx = origin_window(r);
    if idx.len() < 3 {
        return Err(Error::Config(format!(
            "{} grid points; the origin fit needs at least 4",
            r.len()
        )));
    }
    let nu = spec.nu().map(f64::from);
    let logr: Vec<f64> = idx.iter().map(|&i| r[i].ln()).collect();
    let mut slopes = [[0.0; 2]; 2];
    for (row, s_row) in slopes.iter_mut().enumerate() {
        for (col, s) in s_row.iter_mut().enumerate() {
            let y: Vec<f64> = idx.iter().map(|&i| u[i][(row, col)].norm().ln()).collect();
            *s = slope(&logr, &y);
        }
    }
    let n = idx.len() as f64;
    let mean = |g: &dyn Fn(usize) -> C64| idx.iter().map(|&i| g(i)).sum::<C64>() / n;
    let a = [0, 1].map(|j| mean(&|i| u[i][(j, 0)] / r[i].powf(nu[j] + 1.0)));
    let b = [0, 1].map(|j| mean(&|i| u[i][(j, 1)] * r[i].powf(nu[j])));
    Ok(OriginConstants { a, b, slopes })
}

/// The factorization solution of the two-fold transformation at `E₁ = 2iχ²`.
#[derive(Clone, Debug)]
pub struct FactorizationSolution {
    pub chi: f64,
    pub sign: Sign,
    pub k1: C64,
    pub k2: C64,
    pub e1: C64,
    pub e2: C64,
    pub spec: ChannelSpec,
    pub r: Vec<f64>,
    pub u: Vec<CMat>,
    pub u_prime: Vec<CMat>,
    pub origin: OriginConstants,
    /// `F₀(k₁)`.
    pub jost_k1: CMat,
}

impl FactorizationSolution {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `W[u,u*]` at grid index `i`.
    pub fn wronskian_conj(&self, i: usize) -> CMat {
        let u = &self.u[i];
        let du = &self.u_prime[i];
        wronskian(u, du, &u.map(|z| z.conj()), &du.map(|z| z.conj()))
    }

    /// `W[u,u]` at grid index `i`.
    pub fn self_wronskian(&self, i: usize) -> CMat {
        wronskian(&self.u[i], &self.u_prime[i], &self.u[i], &self.u_prime[i])
    }

    /// Largest `|W[u,u]_ij|` relative to the sum of the moduli of the products forming it.
    pub fn self_wronskian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            let w = self.self_wronskian(i);
            let u = &self.u[i];
            let du = &self.u_prime[i];
            for a in 0..2 {
                for b in 0..2 {
                    let scale: f64 = (0..2)
                        .map(|c| {
                            u[(c, a)].norm() * du[(c, b)].norm()
                                + du[(c, a)].norm() * u[(c, b)].norm()
                        })
                        .sum();
                    if scale > 0.0 {
                        worst = worst.max(w[(a, b)].norm() / scale);
                    }
                }
            }
        }
        worst
    }

    /// The large-distance form of `u`: column 1 `(h_{l₁}(−k₁r), ∓i h_{l₂}(−k₁r))`, column 2
    /// `(±i h_{l₁}(k₁r), h_{l₂}(k₁r))`.
    pub fn asymptotic_form(&self, r: f64) -> Result<CMat> {
        let [l1, l2] = self.spec.l();
        let s = self.sign.value();
        let minus = -self.k1 * r;
        let plus = self.k1 * r;
        Ok(CMat::new(
            riccati_hankel(l1, minus)?.value,
            I * s * riccati_hankel(l1, plus)?.value,
            -I * s * riccati_hankel(l2, minus)?.value,
            riccati_hankel(l2, plus)?.value,
        ))
    }

    /// Per-column relative mismatch with [`Self::asymptotic_form`] at the last grid point.
    pub fn asymptotic_residual(&self) -> Result<[f64; 2]> {
        let n = self.len() - 1;
        let target = self.asymptotic_form(self.r[n])?;
        let u = &self.u[n];
        Ok([0, 1].map(|j| {
            let diff = (u.column(j) - target.column(j)).norm();
            diff / target.column(j).norm()
        }))
    }
}

/// Builds `u = (2k₁/i) φ₀(k₁) F₀⁻¹(k₁) C₁ + f₀(k₁) C₂` with `C₁ = [[1,0],[∓i,0]]` and
/// `C₂ = [[0,±i],[0,1]]`.
pub fn factorization_solution(
    v: &Potential,
    chi: f64,
    sign: Sign,
    grid: &RadialGrid,
) -> Result<FactorizationSolution> {
    if !(chi > 0.0) || !chi.is_finite() {
        return Err(Error::Domain(format!("χ must be positive, got {chi}")));
    }
    if 2.0 * chi * grid.r_max() > GROWTH_LIMIT {
        return Err(Error::Config(format!(
            "2χ r_max = {:.1} exceeds {GROWTH_LIMIT}",
            2.0 * chi * grid.r_max()
        )));
    }
    let k1 = C64::new(chi, chi);
    let s = sign.value();
    let f = jost_solution(v, k1, grid)?;
    let phi = regular_solution(v, k1, grid)?;
    let jm = jost_matrix_from(&f, &phi)?;
    let inv =
        jm.f.try_inverse()
            .ok_or_else(|| Error::Hypothesis(format!("F₀(k₁) is not invertible at χ = {chi}")))?;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let c1 = CMat::new(one, zero, -I * s, zero);
    let c2 = CMat::new(zero, I * s, zero, one);
    let left = inv * (2.0 * k1 / I) * c1;
    let u: Vec<CMat> = phi
        .values
        .iter()
        .zip(&f.values)
        .map(|(p, q)| p * left + q * c2)
        .collect();
    let u_prime: Vec<CMat> = phi
        .derivatives
        .iter()
        .zip(&f.derivatives)
        .map(|(p, q)| p * left + q * c2)
        .collect();
    let spec = *v.spec();
    let origin = origin_constants(&spec, grid.points(), &u)?;
    let [nu1, nu2] = spec.nu();
    if nu1 == nu2 {
        let d = origin.determinant().norm();
        let scale =
            (origin.a[0].norm() + origin.a[1].norm()) * (origin.b[0].norm() + origin.b[1].norm());
        if d <= 1e-10 * scale {
            return Err(Error::Hypothesis(format!(
                "degenerate origin data a₁b₂ = a₂b₁ (|a₁b₂ − a₂b₁| = {d:.3e}); higher-order expansion needed"
            )));
        }
    }
    Ok(FactorizationSolution {
        chi,
        sign,
        k1,
        k2: C64::new(-chi, chi),
        e1: C64::new(0.0, 2.0 * chi * chi),
        e2: C64::new(0.0, -2.0 * chi * chi),
        spec,
        r: grid.points().to_vec(),
        u,
        u_prime,
        origin,
        jost_k1: jm.f,
    })
}
