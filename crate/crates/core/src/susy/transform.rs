//! The two-fold superpotential `W₂`, the transformed potential `V₂ = V₀ − 2W₂′` and the
//! transformed solutions.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::{
    conj, imag_part, max_abs, max_abs_real, real_part, to_complex, CMat, RMat, C64, I,
};
use crate::potential::{ChannelSpec, Potential};
use crate::solver::{jost_solution, MatrixSolution, SolutionKind};

use super::factorization::{factorization_solution, origin_window, FactorizationSolution};
use super::theory::{singularity_rules, u_infinity};
use super::Sign;

/// `W[u,u*]`, its inverse, `W₂` and `W₂′` on the grid of the factorization solution.
#[derive(Clone, Debug)]
pub struct Superpotential {
    pub wronskian: Vec<CMat>,
    pub inverse: Vec<CMat>,
    pub w2: Vec<CMat>,
    pub w2_prime: Vec<CMat>,
}

impl Superpotential {
    /// `det W[u,u*]` at every grid point (real up to rounding).
    pub fn determinants(&self) -> Vec<f64> {
        self.wronskian.iter().map(|w| w.determinant().re).collect()
    }
}

/// `W₂ = 4iχ² u* W[u,u*]⁻¹ uᵀ` and its derivative by the product rule, using
/// `W[u,u*]′ = 4iχ² uᵀu*`.
pub fn two_fold_superpotential(f: &FactorizationSolution) -> Result<Superpotential> {
    build_superpotential(f, true)
}

fn build_superpotential(f: &FactorizationSolution, check: bool) -> Result<Superpotential> {
    let c = 4.0 * I * f.chi * f.chi;
    let n = f.len();
    let mut out = Superpotential {
        wronskian: Vec::with_capacity(n),
        inverse: Vec::with_capacity(n),
        w2: Vec::with_capacity(n),
        w2_prime: Vec::with_capacity(n),
    };
    for i in 0..n {
        let u = &f.u[i];
        let du = &f.u_prime[i];
        let us = conj(u);
        let dus = conj(du);
        let w = f.wronskian_conj(i);
        let det = w.determinant();
        if check && !(det.re > 0.0) {
            return Err(Error::Regularity {
                r: f.r[i],
                det: det.re,
            });
        }
        let m = CMat::new(w[(1, 1)], -w[(0, 1)], -w[(1, 0)], w[(0, 0)]) / det;
        let dw = u.transpose() * us * c;
        let dm = -(m * dw * m);
        let ut = u.transpose();
        out.w2.push(us * m * ut * c);
        out.w2_prime
            .push((dus * m * ut + us * dm * ut + us * m * du.transpose()) * c);
        out.wronskian.push(w);
        out.inverse.push(m);
    }
    Ok(out)
}

/// Where the singularity indices of `V₂` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuSource {
    Rules,
    /// Read off `r²V₂` near the origin because the rules give no answer for `|Δν| = 2`.
    Measured,
}

/// A transformed potential together with everything used to build it.
#[derive(Clone, Debug)]
pub struct TransformOutput {
    pub chi: f64,
    pub sign: Sign,
    pub parent: Potential,
    pub grid: RadialGrid,
    pub factorization: FactorizationSolution,
    pub superpotential: Superpotential,
    /// `V₀ − 2 Re W₂′` at the grid points, before symmetrization.
    pub v2_values: Vec<RMat>,
    pub v2: Potential,
    pub nu_source: NuSource,
    pub provenance: String,
}

impl TransformOutput {
    pub fn spec(&self) -> &ChannelSpec {
        self.v2.spec()
    }

    /// `max |Im W₂| / max |W₂|` over the grid.
    pub fn reality_residual(&self) -> f64 {
        let im = self
            .superpotential
            .w2
            .iter()
            .map(|w| max_abs_real(&imag_part(w)))
            .fold(0.0, f64::max);
        let scale = self
            .superpotential
            .w2
            .iter()
            .map(max_abs)
            .fold(0.0, f64::max);
        im / scale.max(f64::MIN_POSITIVE)
    }

    /// `max |V₂ − V₂ᵀ| / max |V₂|` over the grid.
    pub fn symmetry_residual(&self) -> f64 {
        let asym = self
            .v2_values
            .iter()
            .map(|v| max_abs_real(&(v - v.transpose())))
            .fold(0.0, f64::max);
        let scale = self.v2_values.iter().map(max_abs_real).fold(0.0, f64::max);
        asym / scale.max(f64::MIN_POSITIVE)
    }

    /// Smallest `det W[u,u*]` and the radius where it occurs.
    pub fn min_wronskian_determinant(&self) -> (f64, f64) {
        self.superpotential
            .determinants()
            .into_iter()
            .zip(&self.factorization.r)
            .map(|(d, &r)| (d, r))
            .fold(
                (f64::INFINITY, f64::NAN),
                |a, b| if b.0 < a.0 { b } else { a },
            )
    }

    /// `r² V₂(r)`.
    pub fn scaled_potential(&self, r: f64) -> RMat {
        self.v2.value(r) * (r * r)
    }

    /// `r W₂(r)` at the grid point nearest `r` (real part).
    pub fn scaled_superpotential(&self, r: f64) -> RMat {
        let i = self.grid.nearest(r);
        real_part(&self.superpotential.w2[i]) * self.grid.points()[i]
    }
}

fn measured_nu(r: &[f64], values: &[RMat], spec: &ChannelSpec) -> Option<[u32; 2]> {
    let rows: Vec<RMat> = origin_window(r)
        .into_iter()
        .map(|i| values[i] * (r[i] * r[i]))
        .collect();
    if rows.is_empty() {
        return None;
    }
    let g = rows.iter().sum::<RMat>() / rows.len() as f64;
    if g[(0, 1)].abs().max(g[(1, 0)].abs()) > 1e-3 {
        return None;
    }
    let fit = |c: f64| -> Option<u32> {
        // smallest n with n(n+1) = c
        let n = ((-1.0 + (1.0 + 4.0 * c).max(0.0).sqrt()) / 2.0).round();
        ((n * (n + 1.0) - c).abs() <= 1e-3).then_some(n as u32)
    };
    let nu = [fit(g[(0, 0)])?, fit(g[(1, 1)])?];
    let [a, b] = spec.nu();
    (nu[0] + nu[1] == a + b).then_some(nu)
}

/// Applies the two-fold transformation to `v`.
///
/// `ν̄` follows the singularity rules. For `|Δν| = 2`, where the rules predict off-diagonal
/// singular terms in general, the core of `V₂` is measured instead and accepted only if it is
/// diagonal with integer indices and the same trace.
pub fn transform_potential(
    v: &Potential,
    chi: f64,
    sign: Sign,
    grid: &RadialGrid,
) -> Result<TransformOutput> {
    let spec = *v.spec();
    let rules = singularity_rules(spec.nu());
    let fs = factorization_solution(v, chi, sign, grid)?;
    let sp = two_fold_superpotential(&fs)?;
    let v2_values: Vec<RMat> = grid
        .points()
        .iter()
        .zip(&sp.w2_prime)
        .map(|(&r, dw)| v.value(r) - real_part(dw) * 2.0)
        .collect();
    let (nu_bar, nu_source) = match rules {
        Ok(nu) => (nu, NuSource::Rules),
        Err(e) => match measured_nu(grid.points(), &v2_values, &spec) {
            Some(nu) => (nu, NuSource::Measured),
            None => return Err(e),
        },
    };
    let [l1, l2] = spec.l();
    let spec2 = ChannelSpec::new(l2, l1, nu_bar[0], nu_bar[1])
        .map_err(|e| Error::Unphysical(format!("transformed indices are inconsistent: {e}")))?;
    let provenance = format!(
        "two-fold transform chi={chi} sign={sign} of [{}]",
        v.provenance()
    );
    let v2 = Potential::from_samples(
        spec2,
        grid.points().to_vec(),
        &v2_values,
        provenance.clone(),
    )?;
    Ok(TransformOutput {
        chi,
        sign,
        parent: v.clone(),
        grid: grid.clone(),
        factorization: fs,
        superpotential: sp,
        v2_values,
        v2,
        nu_source,
        provenance,
    })
}

/// `ψ₂ = (E₁ − k²) ψ₀ − 4iχ² u* W[u,u*]⁻¹ W[u,ψ₀]` with its derivative; `k² = psi.k²`.
pub fn transform_solution(t: &TransformOutput, psi: &MatrixSolution) -> Result<MatrixSolution> {
    let f = &t.factorization;
    if psi.r.len() != f.r.len() || psi.r.first() != f.r.first() || psi.r.last() != f.r.last() {
        return Err(Error::Config(
            "solution and factorization solution live on different grids".into(),
        ));
    }
    let c = 4.0 * I * f.chi * f.chi;
    let de = f.e1 - psi.k * psi.k;
    let mut values = Vec::with_capacity(psi.len());
    let mut derivatives = Vec::with_capacity(psi.len());
    for i in 0..psi.len() {
        let u = &f.u[i];
        let du = &f.u_prime[i];
        let us = conj(u);
        let dus = conj(du);
        let m = &t.superpotential.inverse[i];
        let dm = -(m * (u.transpose() * us * c) * m);
        let p = &psi.values[i];
        let dp = &psi.derivatives[i];
        let x = u.transpose() * dp - du.transpose() * p;
        let dx = u.transpose() * p * de;
        values.push(p * de - us * m * x * c);
        derivatives.push(dp * de - (dus * m * x + us * dm * x + us * m * dx) * c);
    }
    Ok(MatrixSolution {
        k: psi.k,
        r: psi.r.clone(),
        values,
        derivatives,
        kind: SolutionKind::Transformed,
    })
}

/// `f₂(k, r) = L f₀(k, r) U∞⁻¹(k)` at real `k > 0`.
pub fn transformed_jost(t: &TransformOutput, k: f64) -> Result<MatrixSolution> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!(
            "transformed Jost solution needs k > 0, got {k}"
        )));
    }
    let f0 = jost_solution(&t.parent, C64::new(k, 0.0), &t.grid)?;
    let mut f2 = transform_solution(t, &f0)?;
    let inv = to_complex(
        &u_infinity(k, t.chi, t.sign)
            .try_inverse()
            .expect("det U∞ = k⁴ + 4χ⁴ > 0"),
    );
    for x in f2.values.iter_mut().chain(f2.derivatives.iter_mut()) {
        *x *= inv;
    }
    Ok(f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lagrange_derivative_weights;
    use crate::potential::{make_example_v0, make_free, make_s_wave_pair};
    use crate::riccati::riccati_hankel;
    use std::sync::OnceLock;

    fn grid() -> RadialGrid {
        RadialGrid::log_uniform(1e-4, 1.0, 60.0, 6000).unwrap()
    }

    fn example(sign: Sign) -> &'static TransformOutput {
        static PLUS: OnceLock<TransformOutput> = OnceLock::new();
        static MINUS: OnceLock<TransformOutput> = OnceLock::new();
        let cell = match sign {
            Sign::Plus => &PLUS,
            Sign::Minus => &MINUS,
        };
        cell.get_or_init(|| {
            let v = make_example_v0(0.232, 0.944).unwrap();
            transform_potential(&v, 1.22, sign, &grid()).unwrap()
        })
    }

    #[test]
    fn example_output_spec() {
        let t = example(Sign::Plus);
        assert_eq!(t.spec().l(), [0, 2]);
        assert_eq!(t.spec().nu(), [2, 2]);
        assert_eq!(t.nu_source, NuSource::Rules);
    }

    #[test]
    fn example_theorem_a() {
        let t = example(Sign::Plus);
        assert!(t.reality_residual() <= 1e-8, "{:e}", t.reality_residual());
        assert!(t.symmetry_residual() <= 1e-8, "{:e}", t.symmetry_residual());
        let (d, r) = t.min_wronskian_determinant();
        assert!(d > 0.0, "det {d:e} at r = {r}");
    }

    #[test]
    fn wronskian_is_anti_hermitian() {
        let t = example(Sign::Plus);
        for w in &t.superpotential.wronskian {
            let scale = max_abs(w);
            assert!(max_abs(&(w + w.adjoint())) <= 1e-9 * scale);
        }
    }

    #[test]
    fn example_tail_is_reordered() {
        let t = example(Sign::Plus);
        let g = t.scaled_potential(50.0);
        let want = RMat::new(0.0, 0.0, 0.0, 6.0);
        assert!(max_abs_real(&(g - want)) <= 1e-2, "{g}");
        let w = t.scaled_superpotential(50.0);
        // (Λ₂ − Λ₁)/2 diag(1, −1) with Λ = (6, 0)
        assert!(
            max_abs_real(&(w - RMat::new(-3.0, 0.0, 0.0, 3.0))) <= 1e-2,
            "{w}"
        );
    }

    #[test]
    fn sign_flip_negates_coupling() {
        let p = example(Sign::Plus);
        let m = example(Sign::Minus);
        let scale = p.v2_values.iter().map(max_abs_real).fold(0.0, f64::max);
        for (a, b) in p.v2_values.iter().zip(&m.v2_values) {
            assert!((a[(0, 1)] + b[(0, 1)]).abs() <= 1e-8 * scale);
            assert!((a[(0, 0)] - b[(0, 0)]).abs() <= 1e-8 * scale);
            assert!((a[(1, 1)] - b[(1, 1)]).abs() <= 1e-8 * scale);
        }
        let coupling = p
            .v2_values
            .iter()
            .map(|v| v[(0, 1)].abs())
            .fold(0.0, f64::max);
        assert!(coupling > 1e-2);
    }

    #[test]
    fn wronskian_derivative_identity() {
        let t = example(Sign::Plus);
        let f = &t.factorization;
        let c = 4.0 * I * f.chi * f.chi;
        let n = f.len();
        for i in (50..n - 50).step_by(59) {
            let idx: Vec<usize> = (i - 3..=i + 3).collect();
            let x: Vec<f64> = idx.iter().map(|&j| f.r[j]).collect();
            let w = lagrange_derivative_weights(&x, f.r[i]);
            let mut d = CMat::zeros();
            for (wj, &j) in w.iter().zip(&idx) {
                d += t.superpotential.wronskian[j] * C64::new(*wj, 0.0);
            }
            let exact = f.u[i].transpose() * conj(&f.u[i]) * c;
            let err = max_abs(&(d - exact)) / max_abs(&exact);
            assert!(err <= 1e-6, "r = {} err = {err:e}", f.r[i]);
        }
    }

    #[test]
    fn wronskian_integral_representation() {
        // W₁₁ = 4iχ² ∫₀^r |u₁₁|²+|u₂₁|², W₂₂ = −4iχ² ∫_r^∞ |u₁₂|²+|u₂₂|²
        let t = example(Sign::Plus);
        let f = &t.factorization;
        let c = 4.0 * f.chi * f.chi;
        let n = f.len();
        let col = |i: usize, j: usize| f.u[i][(0, j)].norm_sqr() + f.u[i][(1, j)].norm_sqr();
        let dcol = |i: usize, j: usize| {
            2.0 * (0..2)
                .map(|a| (f.u[i][(a, j)].conj() * f.u_prime[i][(a, j)]).re)
                .sum::<f64>()
        };
        // trapezoid with the endpoint-derivative correction
        let segment = |i: usize, j: usize| {
            let h = f.r[i] - f.r[i - 1];
            0.5 * h * (col(i, j) + col(i - 1, j)) + h * h / 12.0 * (dcol(i - 1, j) - dcol(i, j))
        };
        let mut inner = 0.0;
        let mut checked = 0;
        for i in 1..n {
            inner += segment(i, 0);
            if i % 400 == 0 && f.r[i] > 0.1 {
                let w = t.superpotential.wronskian[i][(0, 0)];
                assert!(w.re.abs() <= 1e-6 * w.im.abs());
                assert!(
                    (w.im - c * inner).abs() <= 1e-4 * w.im.abs(),
                    "r={}",
                    f.r[i]
                );
                checked += 1;
            }
        }
        assert!(checked > 5);
        let mut outer = 0.0;
        for i in (1..n).rev() {
            outer += segment(i, 1);
            if i % 400 == 0 && f.r[i] < 10.0 {
                let w = t.superpotential.wronskian[i - 1][(1, 1)];
                assert!(
                    (w.im + c * outer).abs() <= 1e-4 * w.im.abs(),
                    "r={}",
                    f.r[i - 1]
                );
            }
        }
    }

    #[test]
    fn gauge_invariance() {
        // Mixing the columns of u loses the smaller one to rounding wherever their sizes differ
        // by many orders, so the comparison is restricted to r where both are comparable.
        let t = example(Sign::Plus);
        let gauge = CMat::new(
            C64::new(0.3, -1.1),
            C64::new(2.0, 0.4),
            C64::new(-0.7, 0.2),
            C64::new(0.5, 0.9),
        );
        let mut f = t.factorization.clone();
        for (u, du) in f.u.iter_mut().zip(f.u_prime.iter_mut()) {
            *u *= gauge;
            *du *= gauge;
        }
        let sp = build_superpotential(&f, false).unwrap();
        let mut checked = 0;
        for (i, (a, b)) in t.superpotential.w2.iter().zip(&sp.w2).enumerate() {
            if (0.5..=3.0).contains(&f.r[i]) {
                assert!(max_abs(&(a - b)) <= 1e-9 * max_abs(a), "r = {}", f.r[i]);
                checked += 1;
            }
        }
        assert!(checked > 100);
        // a diagonal gauge does not mix columns and holds on the whole grid
        let d = crate::linalg::diag(C64::new(0.2, 3.0), C64::new(-5.0, 0.1));
        let mut g = t.factorization.clone();
        for (u, du) in g.u.iter_mut().zip(g.u_prime.iter_mut()) {
            *u *= d;
            *du *= d;
        }
        let sp = two_fold_superpotential(&g).unwrap();
        for (a, b) in t.superpotential.w2.iter().zip(&sp.w2) {
            assert!(max_abs(&(a - b)) <= 1e-9 * max_abs(a));
        }
    }

    #[test]
    fn kernel_of_the_transformation() {
        let t = example(Sign::Plus);
        let f = &t.factorization;
        let r = f.r.clone();
        let u = MatrixSolution {
            k: f.k1,
            r: r.clone(),
            values: f.u.clone(),
            derivatives: f.u_prime.clone(),
            kind: SolutionKind::Transformed,
        };
        let us = MatrixSolution {
            k: f.k2,
            r,
            values: f.u.iter().map(conj).collect(),
            derivatives: f.u_prime.iter().map(conj).collect(),
            kind: SolutionKind::Transformed,
        };
        for sol in [u, us] {
            let l = transform_solution(t, &sol).unwrap();
            for (i, x) in l.values.iter().enumerate() {
                let scale = max_abs(&sol.values[i]) * 4.0 * f.chi * f.chi;
                assert!(
                    max_abs(x) <= 1e-7 * scale,
                    "r = {} {:e}",
                    sol.r[i],
                    max_abs(x) / scale
                );
            }
        }
    }

    #[test]
    fn transformed_jost_solution() {
        let t = example(Sign::Plus);
        let f2 = transformed_jost(t, 1.0).unwrap();
        let n = f2.len() - 1;
        let r = f2.r[n];
        let lbar = t.spec().l();
        let h = crate::linalg::diag(
            riccati_hankel(lbar[0], C64::new(r, 0.0)).unwrap().value,
            riccati_hankel(lbar[1], C64::new(r, 0.0)).unwrap().value,
        );
        assert!(max_abs(&(f2.values[n] - h)) <= 1e-4, "{}", f2.values[n]);
        for i in [300, 1200, 2500, 3100, 3700, 4200, 4800, 5100, 5500, 5900] {
            let res = f2.residual(&t.v2, i);
            assert!(res <= 1e-5, "r = {} residual {res:e}", f2.r[i]);
        }
    }

    #[test]
    fn s_wave_superpotential_decays_faster_than_one_over_r() {
        let v = make_s_wave_pair(0.232, 0.944).unwrap();
        let g = grid();
        let fs = factorization_solution(&v, 1.22, Sign::Plus, &g).unwrap();
        let sp = two_fold_superpotential(&fs).unwrap();
        let i = g.nearest(50.0);
        let rw = max_abs(&sp.w2[i]) * g.points()[i];
        assert!(rw <= 1e-3, "{rw:e}");
    }

    #[test]
    fn d_wave_superpotential_tail() {
        let v = make_free(ChannelSpec::new(2, 0, 2, 0).unwrap()).unwrap();
        let g = grid();
        let fs = factorization_solution(&v, 1.22, Sign::Plus, &g).unwrap();
        let sp = two_fold_superpotential(&fs).unwrap();
        let i = g.len() - 1;
        let rw = real_part(&sp.w2[i]) * g.points()[i];
        assert!(
            max_abs_real(&(rw - RMat::new(-3.0, 0.0, 0.0, 3.0))) <= 1e-2,
            "{rw}"
        );
    }

    #[test]
    fn unphysical_index_gap_is_refused_when_core_is_coupled() {
        let v = make_s_wave_pair(0.232, 0.944).unwrap();
        match transform_potential(&v, 1.22, Sign::Plus, &grid()) {
            Err(Error::Unphysical(_)) => {}
            Ok(t) => assert_eq!(t.nu_source, NuSource::Measured),
            Err(e) => panic!("{e}"),
        }
    }
}
