//! Numerical verification of the transformation against a full re-solve of `V₂`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::Result;
use crate::grid::RadialGrid;
use crate::linalg::{lagrange_derivative_weights, max_abs, max_abs_real, CMat, RMat, C64, I};
use crate::potential::Potential;
use crate::smatrix::{eigenphases, s_matrices, Eigenphases, SMatrixPoint};

use super::chain::{chain, predicted_chain_mixing};
use super::theory::{predicted_mixing, predicted_s2};
use super::transform::{transform_potential, TransformOutput};
use super::Sign;

/// Pass thresholds of the report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Reality, symmetry and self-Wronskian residuals.
    pub structure: f64,
    pub wronskian_derivative: f64,
    pub asymptotics: f64,
    pub tail: f64,
    /// `|r W₂|` at the tail radius when `l₁ = l₂`.
    pub equal_l_tail: f64,
    pub s_matrix: f64,
    pub unitarity: f64,
    pub phase: f64,
    pub chain_phase: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structure: 1e-8,
            wronskian_derivative: 1e-6,
            asymptotics: 1e-5,
            tail: 1e-2,
            equal_l_tail: 1e-3,
            s_matrix: 1e-5,
            unitarity: 1e-8,
            phase: 1e-4,
            chain_phase: 1e-3,
        }
    }
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            tolerance,
            // NaN fails
            pass: residual <= tolerance,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<34} {:>11.4e} {:>9.1e} {}",
                c.name,
                c.residual,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn dist_mod_pi(a: f64, b: f64) -> f64 {
    let x = a - b;
    (x - PI * (x / PI).round()).abs()
}

/// Distance between two eigenphase pairs as multisets, modulo `π`.
pub fn multiset_mismatch(p: [f64; 2], q: [f64; 2]) -> f64 {
    let same = dist_mod_pi(p[0], q[0]).max(dist_mod_pi(p[1], q[1]));
    let cross = dist_mod_pi(p[0], q[1]).max(dist_mod_pi(p[1], q[0]));
    same.min(cross)
}

/// Compares a decomposition with `(δ, ε)`, allowing `ε + nπ/2` with the channel exchange that
/// accompanies odd `n`. Returns the eigenphase and mixing mismatches of the best `n`.
pub fn decomposition_mismatch(e: &Eigenphases, delta: [f64; 2], eps: f64) -> (f64, f64) {
    let mut best = (f64::INFINITY, f64::INFINITY);
    let shift = (eps / FRAC_PI_2).round() as i64;
    for n in (-shift - 2)..=(-shift + 2) {
        let q = if n.rem_euclid(2) == 1 {
            [delta[1], delta[0]]
        } else {
            delta
        };
        let mix = (e.epsilon - eps - n as f64 * FRAC_PI_2).abs();
        let eig = dist_mod_pi(e.delta1, q[0]).max(dist_mod_pi(e.delta2, q[1]));
        if mix.max(eig) < best.0.max(best.1) {
            best = (eig, mix);
        }
    }
    best
}

fn raw(points: &[SMatrixPoint]) -> Result<Vec<Eigenphases>> {
    points.iter().map(|p| eigenphases(p, None)).collect()
}

/// `max_i |ΔW[u,u*] − 4iχ² uᵀu*| / |4iχ² uᵀu*|` over 100 interior points, with the derivative
/// from a seven-point stencil on the grid.
pub fn wronskian_derivative_residual(t: &TransformOutput) -> f64 {
    let f = &t.factorization;
    let n = f.len();
    let c = 4.0 * I * f.chi * f.chi;
    let lo = 3;
    let hi = n - 4;
    let count = 100.min(hi - lo);
    let mut worst: f64 = 0.0;
    for s in 0..count {
        let i = lo + (s * (hi - lo)) / count.max(1);
        let idx: Vec<usize> = (i - 3..=i + 3).collect();
        let x: Vec<f64> = idx.iter().map(|&j| f.r[j]).collect();
        let w = lagrange_derivative_weights(&x, f.r[i]);
        let mut d = CMat::zeros();
        for (wj, &j) in w.iter().zip(&idx) {
            d += t.superpotential.wronskian[j] * C64::new(*wj, 0.0);
        }
        let exact = f.u[i].transpose() * f.u[i].map(|z| z.conj()) * c;
        worst = worst.max(max_abs(&(d - exact)) / max_abs(&exact));
    }
    worst
}

/// Radius of the tail checks: `50` on grids reaching past it, else `5/6` of `r_max`.
pub fn tail_radius(grid: &RadialGrid) -> f64 {
    if grid.r_max() > 55.0 {
        50.0
    } else {
        grid.r_max() * 5.0 / 6.0
    }
}

/// Parts A and B of the theorem for one transformation.
fn structure_report(t: &TransformOutput, tol: &Tolerances) -> Result<Report> {
    let mut rep = Report::default();
    rep.push("A.reality", t.reality_residual(), tol.structure);
    rep.push("A.symmetry", t.symmetry_residual(), tol.structure);
    let bad = t
        .superpotential
        .determinants()
        .iter()
        .filter(|d| !(**d > 0.0))
        .count();
    rep.push("A.regularity_nonpositive_det", bad as f64, 0.0);
    rep.push(
        "A.self_wronskian",
        t.factorization.self_wronskian_residual(),
        tol.structure,
    );
    rep.push(
        "A.wronskian_derivative",
        wronskian_derivative_residual(t),
        tol.wronskian_derivative,
    );
    let [a1, a2] = t.factorization.asymptotic_residual()?;
    rep.push("A.factorization_asymptotics", a1.max(a2), tol.asymptotics);

    let r = tail_radius(&t.grid);
    let lbar = t.spec().centrifugal();
    let want = RMat::new(lbar[0], 0.0, 0.0, lbar[1]);
    rep.push(
        "B.tail",
        max_abs_real(&(t.scaled_potential(r) - want)),
        tol.tail,
    );
    let lam = t.parent.spec().centrifugal();
    let rw = t.scaled_superpotential(r);
    if lam[0] == lam[1] {
        rep.push("B.superpotential_tail", max_abs_real(&rw), tol.equal_l_tail);
    } else {
        let h = 0.5 * (lam[1] - lam[0]);
        rep.push(
            "B.superpotential_tail",
            max_abs_real(&(rw - RMat::new(h, 0.0, 0.0, -h))),
            tol.tail,
        );
    }
    Ok(rep)
}

/// Parts C and D from S-matrices of `V₀` and of the re-solved `V₂`.
fn scattering_report(
    t: &TransformOutput,
    s0: &[SMatrixPoint],
    s2: &[SMatrixPoint],
    tol: &Tolerances,
) -> Result<Report> {
    let mut rep = Report::default();
    let spec0 = t.parent.spec();
    let predicted: Vec<SMatrixPoint> = s0
        .iter()
        .map(|p| predicted_s2(p, spec0, t.chi, t.sign))
        .collect::<Result<_>>()?;
    let c = predicted
        .iter()
        .zip(s2)
        .map(|(a, b)| max_abs(&(a.s - b.s)))
        .fold(0.0, f64::max);
    rep.push("C.predicted_vs_recomputed", c, tol.s_matrix);
    let all = || s0.iter().chain(s2).chain(&predicted);
    rep.push(
        "C.unitarity",
        all()
            .map(SMatrixPoint::unitarity_residual)
            .fold(0.0, f64::max),
        tol.unitarity,
    );
    rep.push(
        "C.symmetry",
        all()
            .map(SMatrixPoint::symmetry_residual)
            .fold(0.0, f64::max),
        tol.unitarity,
    );

    let e0 = raw(s0)?;
    let e2 = raw(s2)?;
    let m = spec0.m();
    let mut eig: f64 = 0.0;
    let mut mix: f64 = 0.0;
    for ((a, b), p) in e0.iter().zip(&e2).zip(s0) {
        eig = eig.max(multiset_mismatch(
            [a.delta1, a.delta2],
            [b.delta1, b.delta2],
        ));
        if a.degenerate || b.degenerate {
            continue;
        }
        let eps = predicted_mixing(a.epsilon, p.k, t.chi, t.sign, m);
        let (_, dm) = decomposition_mismatch(b, [a.delta1, a.delta2], eps);
        mix = mix.max(dm);
    }
    rep.push("D.eigenphases", eig, tol.phase);
    rep.push("D.mixing", mix, tol.phase);
    if let (Some(a), Some(b), Some(p)) = (e0.first(), e2.first(), s0.first()) {
        let bound = 2.0 * (p.k * p.k / (2.0 * t.chi * t.chi)).atan();
        let (_, d) = decomposition_mismatch(b, [a.delta1, a.delta2], a.epsilon);
        rep.push("D.zero_energy_anchor", d, bound);
    }
    Ok(rep)
}

/// Parts A–D of the theorem for one transformation of `v`.
pub fn verify_theorem(
    v: &Potential,
    chi: f64,
    sign: Sign,
    k_grid: &[f64],
    grid: &RadialGrid,
    tol: &Tolerances,
) -> Result<(TransformOutput, Report)> {
    let t = transform_potential(v, chi, sign, grid)?;
    let mut rep = structure_report(&t, tol)?;
    let s0 = s_matrices(v, k_grid, grid)?;
    let s2 = s_matrices(&t.v2, k_grid, grid)?;
    let sc = scattering_report(&t, &s0, &s2, tol)?;
    rep.checks.extend(sc.checks);
    Ok((t, rep))
}

/// Per-step parts A and B, then eigenphases and the summed mixing formula for the last
/// potential against `v`.
pub fn verify_chain(
    v: &Potential,
    chis: &[f64],
    sign: Sign,
    k_grid: &[f64],
    grid: &RadialGrid,
    tol: &Tolerances,
) -> Result<(Vec<TransformOutput>, Report)> {
    let steps = chain(v, chis, sign, grid)?;
    let mut rep = Report::default();
    for (j, t) in steps.iter().enumerate() {
        rep.extend(&format!("step{}.", j + 1), structure_report(t, tol)?);
    }
    let last = &steps.last().expect("chain is non-empty").v2;
    let s0 = s_matrices(v, k_grid, grid)?;
    let sn = s_matrices(last, k_grid, grid)?;
    let e0 = raw(&s0)?;
    let en = raw(&sn)?;
    let m = v.spec().m();
    let mut eig: f64 = 0.0;
    let mut mix: f64 = 0.0;
    for ((a, b), p) in e0.iter().zip(&en).zip(&s0) {
        eig = eig.max(multiset_mismatch(
            [a.delta1, a.delta2],
            [b.delta1, b.delta2],
        ));
        if a.degenerate || b.degenerate {
            continue;
        }
        let eps = predicted_chain_mixing(a.epsilon, p.k, chis, sign, m);
        let (_, dm) = decomposition_mismatch(b, [a.delta1, a.delta2], eps);
        mix = mix.max(dm);
    }
    rep.push("chain.eigenphases", eig, tol.chain_phase);
    rep.push("chain.summed_mixing", mix, tol.chain_phase);
    rep.push(
        "chain.unitarity",
        sn.iter()
            .map(SMatrixPoint::unitarity_residual)
            .fold(0.0, f64::max),
        tol.unitarity,
    );
    Ok((steps, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smatrix::reconstruct;
    use proptest::prelude::*;

    #[test]
    fn report_lines() {
        let mut r = Report::default();
        r.push("A.reality", 1e-12, 1e-8);
        r.push("D.mixing", 2e-3, 1e-4);
        r.push("nan", f64::NAN, 1.0);
        assert!(!r.all_pass());
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("A.reality") && lines[0].ends_with("PASS"));
        assert!(lines[1].ends_with("FAIL") && lines[2].ends_with("FAIL"));
        assert_eq!(r.failures().count(), 2);
    }

    #[test]
    fn multiset_ignores_order_and_pi() {
        assert!(multiset_mismatch([0.1, -1.2], [-1.2 + PI, 0.1]) < 1e-15);
        assert!((multiset_mismatch([0.1, 0.2], [0.1, 0.3]) - 0.1).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn decomposition_mismatch_sees_through_branches(
            d1 in -1.5f64..1.5, d2 in -1.5f64..1.5, eps in -1.5f64..1.5,
        ) {
            prop_assume!(dist_mod_pi(d1, d2) > 0.05);
            let s = SMatrixPoint { k: 1.0, s: reconstruct(d1, d2, eps) };
            let e = eigenphases(&s, None).unwrap();
            let (eig, mix) = decomposition_mismatch(&e, [d1, d2], eps);
            prop_assert!(eig < 1e-9 && mix < 1e-9, "{} {}", eig, mix);
            let (_, off) = decomposition_mismatch(&e, [d1, d2], eps + 0.01);
            prop_assert!(off > 0.009);
        }
    }
}
