//! Scattering matrix, eigenphase shifts and mixing angle.
//!
//! `S = R(ε) diag(e^{2iδ₁}, e^{2iδ₂}) R(ε)ᵀ` with `R(ε) = [[cos ε, −sin ε], [sin ε, cos ε]]`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::{condition_number, diag, max_abs, rotation, to_complex, CMat, C64, I};
use crate::potential::{ChannelSpec, Potential};
use crate::solver::{jost_matrix, JostMatrix};

/// Eigenvalue separation below which `S` is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SMatrixPoint {
    pub k: f64,
    pub s: CMat,
}

impl SMatrixPoint {
    /// `‖S S† − 1‖` (largest entry).
    pub fn unitarity_residual(&self) -> f64 {
        max_abs(&(self.s * self.s.adjoint() - CMat::identity()))
    }

    /// `‖S − Sᵀ‖` (largest entry).
    pub fn symmetry_residual(&self) -> f64 {
        max_abs(&(self.s - self.s.transpose()))
    }
}

/// `diag(i^{l₁}, i^{l₂})`.
pub fn centrifugal_phase(l: [u32; 2]) -> CMat {
    diag(I.powu(l[0]), I.powu(l[1]))
}

/// `S = e^{ilπ/2} F(−k) F(k)^{−1} e^{ilπ/2}`.
pub fn s_matrix(jost: &JostMatrix, spec: &ChannelSpec) -> Result<SMatrixPoint> {
    let k = jost.k;
    if k.im != 0.0 || k.re <= 0.0 {
        return Err(Error::Domain(format!("S-matrix needs real k > 0, got {k}")));
    }
    let f_neg = jost
        .f_neg
        .ok_or_else(|| Error::Domain(format!("F(−k) missing for k = {}", k.re)))?;
    let cond = condition_number(&jost.f);
    let inv = jost
        .f
        .try_inverse()
        .filter(|_| cond <= 1e12)
        .ok_or_else(|| Error::Pole {
            k: k.re,
            message: format!("Jost matrix is singular (condition number {cond:.2e})"),
        })?;
    let p = centrifugal_phase(spec.l());
    Ok(SMatrixPoint {
        k: k.re,
        s: p * f_neg * inv * p,
    })
}

/// One eigenphase decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenphases {
    pub delta1: f64,
    pub delta2: f64,
    pub epsilon: f64,
    /// Both eigenvalues coincide; `epsilon` is then set to 0 and carries no information.
    pub degenerate: bool,
    /// Channel labels are exchanged relative to the diagonal-dominance ordering.
    pub swapped: bool,
}

/// `R(ε) diag(e^{2iδ₁}, e^{2iδ₂}) R(ε)ᵀ`.
pub fn reconstruct(delta1: f64, delta2: f64, epsilon: f64) -> CMat {
    let r = to_complex(&rotation(epsilon));
    r * diag((2.0 * I * delta1).exp(), (2.0 * I * delta2).exp()) * r.transpose()
}

fn principal_half_phase(z: C64) -> f64 {
    // arg ∈ (−π, π] maps to δ ∈ (−π/2, π/2]
    0.5 * z.arg()
}

fn nearest_branch(raw: f64, target: f64) -> f64 {
    raw + std::f64::consts::PI * ((target - raw) / std::f64::consts::PI).round()
}

/// Decomposes a unitary symmetric `S`.
///
/// Without `prev`, `δ_j ∈ (−π/2, π/2]`, `ε ∈ (−π/4, π/4]` and the channel whose eigenvector
/// dominates the diagonal of `R` comes first. With `prev`, the candidate `ε + nπ/2` (odd `n`
/// exchanging the channels) and `δ` branches closest to `prev` are chosen; a jump of
/// `π/2` in `δ` or `π/4` in `ε` is a continuity error.
pub fn eigenphases(point: &SMatrixPoint, prev: Option<(f64, &Eigenphases)>) -> Result<Eigenphases> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let s = &point.s;
    let a = s[(0, 0)] - s[(1, 1)];
    let b = s[(0, 1)] + s[(1, 0)];
    let gap = (a.norm_sqr() + b.norm_sqr()).sqrt();

    let raw = if gap < DEGENERACY_TOL {
        Eigenphases {
            delta1: principal_half_phase(s[(0, 0)]),
            delta2: principal_half_phase(s[(1, 1)]),
            epsilon: 0.0,
            degenerate: true,
            swapped: false,
        }
    } else {
        // a = z cos 2ε, b = z sin 2ε for a common complex z; rotate z onto the real axis
        let w = if a.norm() >= b.norm() { a } else { b };
        let phase = w.conj() / w.norm();
        let two_eps = (b * phase).re.atan2((a * phase).re);
        let mut eps = 0.5 * two_eps;
        if eps > FRAC_PI_4 {
            eps -= FRAC_PI_2;
        } else if eps <= -FRAC_PI_4 {
            eps += FRAC_PI_2;
        }
        let r = to_complex(&rotation(eps));
        let d = r.transpose() * s * r;
        Eigenphases {
            delta1: principal_half_phase(d[(0, 0)]),
            delta2: principal_half_phase(d[(1, 1)]),
            epsilon: eps,
            degenerate: false,
            swapped: false,
        }
    };

    let Some((k_prev, prev)) = prev else {
        return Ok(raw);
    };

    let mut best: Option<(f64, Eigenphases)> = None;
    let n_range: &[i32] = if raw.degenerate {
        &[0, 1]
    } else {
        &[-3, -2, -1, 0, 1, 2, 3]
    };
    let shift = if raw.degenerate {
        0.0
    } else {
        FRAC_PI_2 * ((prev.epsilon - raw.epsilon) / FRAC_PI_2).round()
    };
    for &n in n_range {
        let eps = if raw.degenerate {
            0.0
        } else {
            raw.epsilon + shift + n as f64 * FRAC_PI_2
        };
        let turns = ((eps - raw.epsilon) / FRAC_PI_2).round() as i64;
        let exchange = if raw.degenerate {
            n == 1
        } else {
            turns.rem_euclid(2) == 1
        };
        let (d1, d2) = if exchange {
            (raw.delta2, raw.delta1)
        } else {
            (raw.delta1, raw.delta2)
        };
        let d1 = nearest_branch(d1, prev.delta1);
        let d2 = nearest_branch(d2, prev.delta2);
        let eps_cost = if raw.degenerate || prev.degenerate {
            0.0
        } else {
            (eps - prev.epsilon).abs()
        };
        let cost = eps_cost + (d1 - prev.delta1).abs() + (d2 - prev.delta2).abs();
        let cand = Eigenphases {
            delta1: d1,
            delta2: d2,
            epsilon: eps,
            degenerate: raw.degenerate,
            swapped: exchange,
        };
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, cand));
        }
    }
    let (_, out) = best.expect("at least one candidate");

    let jump_d = (out.delta1 - prev.delta1)
        .abs()
        .max((out.delta2 - prev.delta2).abs());
    let jump_e = if out.degenerate || prev.degenerate {
        0.0
    } else {
        (out.epsilon - prev.epsilon).abs()
    };
    if jump_d >= FRAC_PI_2 || jump_e >= FRAC_PI_4 {
        return Err(Error::Continuity {
            k_lo: k_prev,
            k_hi: point.k,
            message: format!(
                "eigenphase jump {jump_d:.3} rad, mixing-angle jump {jump_e:.3} rad; refine the k grid"
            ),
        });
    }
    Ok(out)
}

/// Continuous eigenphase and mixing-angle curves.
#[derive(Clone, Debug)]
pub struct PhaseData {
    pub k: Vec<f64>,
    pub points: Vec<SMatrixPoint>,
    pub phases: Vec<Eigenphases>,
}

impl PhaseData {
    pub fn delta1(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.delta1).collect()
    }

    pub fn delta2(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.delta2).collect()
    }

    pub fn epsilon(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.epsilon).collect()
    }

    /// Per-k flag: channel labels exchanged relative to the raw diagonal-dominance order.
    pub fn channel_order(&self) -> Vec<bool> {
        self.phases.iter().map(|p| p.swapped).collect()
    }

    /// CSV with header `k,delta1,delta2,epsilon`, twelve significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,delta1,delta2,epsilon\n");
        for (k, p) in self.k.iter().zip(&self.phases) {
            out.push_str(&format!(
                "{:.11e},{:.11e},{:.11e},{:.11e}\n",
                k, p.delta1, p.delta2, p.epsilon
            ));
        }
        out
    }
}

/// Unwraps decompositions of S-matrices ordered by increasing `k`.
///
/// Raw decompositions run in parallel; the continuity pass is sequential.
pub fn phases_from_points(points: Vec<SMatrixPoint>) -> Result<PhaseData> {
    let raw: Vec<Eigenphases> = points
        .par_iter()
        .map(|p| eigenphases(p, None))
        .collect::<Result<_>>()?;
    let mut phases: Vec<Eigenphases> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if i == 0 {
            phases.push(raw[0]);
        } else {
            let prev = phases[i - 1];
            phases.push(eigenphases(p, Some((points[i - 1].k, &prev)))?);
        }
    }
    Ok(PhaseData {
        k: points.iter().map(|p| p.k).collect(),
        points,
        phases,
    })
}

/// S-matrices of `v` on `k_grid`, solved in parallel.
pub fn s_matrices(v: &Potential, k_grid: &[f64], grid: &RadialGrid) -> Result<Vec<SMatrixPoint>> {
    if k_grid.windows(2).any(|w| !(w[1] > w[0])) || k_grid.first().is_some_and(|&k| k <= 0.0) {
        return Err(Error::Config(
            "k grid must be positive and strictly increasing".into(),
        ));
    }
    k_grid
        .par_iter()
        .map(|&k| {
            let jm = jost_matrix(v, C64::new(k, 0.0), grid)?;
            s_matrix(&jm, v.spec())
        })
        .collect()
}

/// Eigenphase and mixing-angle curves of `v`, seeded at the smallest `k`.
pub fn phase_curves(v: &Potential, k_grid: &[f64], grid: &RadialGrid) -> Result<PhaseData> {
    phases_from_points(s_matrices(v, k_grid, grid)?)
}
