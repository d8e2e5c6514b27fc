//! Matrix solutions of `ψ″ = (V − k²) ψ` and the Jost matrix.
//!
//! Jost solutions are integrated inward from `r_max`, regular solutions outward from `r_min`;
//! each direction is the stable one for its solution.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::{
    condition_number, conj, lagrange_derivative_weights, max_abs, wronskian, CMat, C64,
};
use crate::ode::{Dop853, Tolerance};
use crate::potential::Potential;
use crate::riccati::{double_factorial, free_jost_matrix};

/// Largest admissible `2 |Im k| r_max`; keeps `e^{2|Im k| r}` inside double range.
pub const GROWTH_LIMIT: f64 = 600.0;

/// Relative mismatch of the Jost-matrix Wronskian between two radii that counts as failure.
pub const CONSTANCY_TOL: f64 = 1e-6;

/// Condition number of `F` beyond which it is treated as singular.
pub const SINGULAR_COND: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Jost,
    Regular,
    Transformed,
}

/// Matrix solution sampled on a radial grid.
#[derive(Clone, Debug)]
pub struct MatrixSolution {
    pub k: C64,
    pub r: Vec<f64>,
    pub values: Vec<CMat>,
    pub derivatives: Vec<CMat>,
    pub kind: SolutionKind,
}

impl MatrixSolution {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Largest entry modulus over the grid.
    pub fn scale(&self) -> f64 {
        self.values.iter().map(max_abs).fold(0.0, f64::max)
    }

    /// Relative residual `|ψ″ − (V − k²) ψ|` at grid index `i`, with `ψ″` from a seven-point
    /// differentiation of the stored `ψ′`.
    pub fn residual(&self, v: &Potential, i: usize) -> f64 {
        let n = self.r.len();
        let lo = i.saturating_sub(3).min(n.saturating_sub(7));
        let idx: Vec<usize> = (lo..(lo + 7).min(n)).collect();
        let x: Vec<f64> = idx.iter().map(|&j| self.r[j]).collect();
        let w = lagrange_derivative_weights(&x, self.r[i]);
        let mut second = CMat::zeros();
        for (wj, &j) in w.iter().zip(&idx) {
            second += self.derivatives[j] * C64::new(*wj, 0.0);
        }
        let rhs = (v.value(self.r[i]).map(|x| C64::new(x, 0.0))
            - CMat::identity() * self.k * self.k)
            * self.values[i];
        max_abs(&(second - rhs)) / (max_abs(&rhs).max(max_abs(&second))).max(f64::MIN_POSITIVE)
    }
}

/// Jost matrix `F(k) = W[f(k,·), φ(k,·)]`, with `F(−k)` for real `k`.
#[derive(Clone, Debug)]
pub struct JostMatrix {
    pub k: C64,
    pub f: CMat,
    pub f_neg: Option<CMat>,
    /// Relative change of the Wronskian between the two evaluation radii.
    pub constancy: f64,
}

fn check_growth(k: C64, grid: &RadialGrid) -> Result<()> {
    let growth = 2.0 * k.im.abs() * grid.r_max();
    if growth > GROWTH_LIMIT {
        return Err(Error::Config(format!(
            "2|Im k| r_max = {growth:.1} exceeds {GROWTH_LIMIT}; shorten the grid or lower |Im k|"
        )));
    }
    if k.norm() == 0.0 || !k.is_finite() {
        return Err(Error::Domain(format!("wave number k = {k} is not usable")));
    }
    Ok(())
}

fn pack(psi: &CMat, dpsi: &CMat) -> [C64; 8] {
    [
        psi[(0, 0)],
        psi[(1, 0)],
        psi[(0, 1)],
        psi[(1, 1)],
        dpsi[(0, 0)],
        dpsi[(1, 0)],
        dpsi[(0, 1)],
        dpsi[(1, 1)],
    ]
}

fn unpack(y: &[C64; 8]) -> (CMat, CMat) {
    (
        CMat::new(y[0], y[2], y[1], y[3]),
        CMat::new(y[4], y[6], y[5], y[7]),
    )
}

/// Integrates the matrix equation from `(r0, ψ0, ψ0′)` through `targets`.
pub(crate) fn propagate(
    v: &Potential,
    k: C64,
    r0: f64,
    psi0: &CMat,
    dpsi0: &CMat,
    targets: &[f64],
    tol: Tolerance,
) -> Result<Vec<(CMat, CMat)>> {
    let k2 = k * k;
    let rhs = |r: f64, y: &[C64; 8]| -> [C64; 8] {
        let vr = v.value(r);
        let a = C64::new(vr[(0, 0)], 0.0) - k2;
        let b = C64::new(vr[(0, 1)], 0.0);
        let d = C64::new(vr[(1, 1)], 0.0) - k2;
        [
            y[4],
            y[5],
            y[6],
            y[7],
            a * y[0] + b * y[1],
            b * y[0] + d * y[1],
            a * y[2] + b * y[3],
            b * y[2] + d * y[3],
        ]
    };
    // columns of ψ and of ψ′ form separate error groups
    let solver = Dop853::new(tol, [0, 0, 1, 1, 2, 2, 3, 3]);
    let ys = solver.integrate(rhs, r0, pack(psi0, dpsi0), targets)?;
    Ok(ys.iter().map(unpack).collect())
}

/// Jost solution `f(k, r)` with `f → diag(h_l(kr))` at `r_max`.
pub fn jost_solution(v: &Potential, k: C64, grid: &RadialGrid) -> Result<MatrixSolution> {
    jost_solution_with(v, k, grid, Tolerance::default())
}

pub fn jost_solution_with(
    v: &Potential,
    k: C64,
    grid: &RadialGrid,
    tol: Tolerance,
) -> Result<MatrixSolution> {
    check_growth(k, grid)?;
    let r_max = grid.r_max();
    let (f0, df0) = free_jost_matrix(v.spec(), k, r_max)?;
    let targets: Vec<f64> = grid.points().iter().rev().copied().collect();
    let mut sol = propagate(v, k, r_max, &f0, &df0, &targets, tol)?;
    sol.reverse();
    let (values, derivatives) = sol.into_iter().unzip();
    Ok(MatrixSolution {
        k,
        r: grid.points().to_vec(),
        values,
        derivatives,
        kind: SolutionKind::Jost,
    })
}

/// Boundary values of the regular solution at `r`: the leading power `r^{ν+1}/(2ν+1)!!`
/// plus the first `r²` correction from the bounded part of `V`.
pub fn regular_boundary(v: &Potential, k: C64, r: f64) -> Result<(CMat, CMat)> {
    let nu = v.spec().nu();
    let core = v.spec().core();
    let vr = v.value(r);
    let mut q = CMat::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let singular = if i == j { core[i] / (r * r) } else { 0.0 };
            q[(i, j)] = C64::new(vr[(i, j)] - singular, 0.0);
        }
        q[(i, i)] -= k * k;
    }
    let mut psi = CMat::zeros();
    let mut dpsi = CMat::zeros();
    for j in 0..2 {
        let nuj = nu[j] as f64;
        let norm = double_factorial(2 * nu[j] as i64 + 1)? as f64;
        let rho = r.powf(nuj + 1.0) / norm;
        let drho = (nuj + 1.0) * r.powf(nuj) / norm;
        psi[(j, j)] += rho;
        dpsi[(j, j)] += drho;
        for i in 0..2 {
            let denom = (nuj + 3.0) * (nuj + 2.0) - core[i];
            if denom == 0.0 {
                continue;
            }
            let c = q[(i, j)] / denom;
            psi[(i, j)] += c * r * r * rho;
            dpsi[(i, j)] += c * (nuj + 3.0) * r * r * r.powf(nuj) / norm;
        }
    }
    Ok((psi, dpsi))
}

/// Regular solution `φ(k, r) → diag(r^{ν+1}/(2ν+1)!!)` as `r → 0`.
pub fn regular_solution(v: &Potential, k: C64, grid: &RadialGrid) -> Result<MatrixSolution> {
    regular_solution_with(v, k, grid, Tolerance::default())
}

pub fn regular_solution_with(
    v: &Potential,
    k: C64,
    grid: &RadialGrid,
    tol: Tolerance,
) -> Result<MatrixSolution> {
    check_growth(k, grid)?;
    let r_min = grid.r_min();
    let (p0, dp0) = regular_boundary(v, k, r_min)?;
    let sol = propagate(v, k, r_min, &p0, &dp0, grid.points(), tol)?;
    let (values, derivatives) = sol.into_iter().unzip();
    Ok(MatrixSolution {
        k,
        r: grid.points().to_vec(),
        values,
        derivatives,
        kind: SolutionKind::Regular,
    })
}

/// `W[a, b]` at grid index `i`.
pub fn wronskian_at(a: &MatrixSolution, b: &MatrixSolution, i: usize) -> CMat {
    wronskian(
        &a.values[i],
        &a.derivatives[i],
        &b.values[i],
        &b.derivatives[i],
    )
}

/// Jost matrix from solutions already computed at the same `k` on the same grid.
pub fn jost_matrix_from(f: &MatrixSolution, phi: &MatrixSolution) -> Result<JostMatrix> {
    let n = f.len();
    let r_half = 0.5 * f.r[n - 1];
    let i_mid = f.r.partition_point(|&x| x < r_half).min(n - 1);
    let i_end = n - 1;
    let f_mid = wronskian_at(f, phi, i_mid);
    let f_end = wronskian_at(f, phi, i_end);
    let constancy = max_abs(&(f_mid - f_end)) / max_abs(&f_end).max(f64::MIN_POSITIVE);
    if !(constancy <= CONSTANCY_TOL) {
        return Err(Error::Numerical {
            message: format!(
                "Jost-matrix Wronskian changes by {constancy:.2e} between r = {:.3} and r = {:.3}; refine the grid",
                f.r[i_mid], f.r[i_end]
            ),
            worst: constancy,
        });
    }
    let cond = condition_number(&f_mid);
    if !(cond <= SINGULAR_COND) {
        return Err(Error::Hypothesis(format!(
            "Jost matrix at k = {} is singular (condition number {cond:.2e})",
            f.k
        )));
    }
    let f_neg = if f.k.im == 0.0 {
        let w = wronskian(
            &conj(&f.values[i_mid]),
            &conj(&f.derivatives[i_mid]),
            &phi.values[i_mid],
            &phi.derivatives[i_mid],
        );
        Some(w)
    } else {
        None
    };
    Ok(JostMatrix {
        k: f.k,
        f: f_mid,
        f_neg,
        constancy,
    })
}

/// `F(k) = W[f(k,·), φ(k,·)]`, validated at `r_max/2` and `r_max`.
pub fn jost_matrix(v: &Potential, k: C64, grid: &RadialGrid) -> Result<JostMatrix> {
    let f = jost_solution(v, k, grid)?;
    let phi = regular_solution(v, k, grid)?;
    jost_matrix_from(&f, &phi)
}
