//! Adaptive Dormand–Prince 8(5,3) integrator for complex first-order systems.
//!
//! Steps are clipped so that every requested output radius is hit exactly; no dense output
//! is needed because all consumers sample on a fixed grid.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    /// Absolute floor, relative to the norm of the component's group.
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

/// Integrator settings for an `N`-component complex system.
///
/// `groups[i]` names the group of component `i`; the absolute error floor of a component
/// scales with the largest magnitude in its group, which keeps the control invariant under
/// rescaling of exponentially growing or decaying solutions.
#[derive(Clone, Debug)]
pub struct Dop853<const N: usize> {
    pub tol: Tolerance,
    pub groups: [usize; N],
    pub max_steps: usize,
}

impl<const N: usize> Dop853<N> {
    pub fn new(tol: Tolerance, groups: [usize; N]) -> Self {
        Self {
            tol,
            groups,
            max_steps: 2_000_000,
        }
    }

    /// Integrates `y′ = f(t, y)` from `(t0, y0)` and returns `y` at each target.
    ///
    /// Targets must be monotone in the direction of integration; a target equal to `t0`
    /// returns `y0`.
    pub fn integrate<F>(
        &self,
        mut f: F,
        t0: f64,
        y0: [C64; N],
        targets: &[f64],
    ) -> Result<Vec<[C64; N]>>
    where
        F: FnMut(f64, &[C64; N]) -> [C64; N],
    {
        let mut out = Vec::with_capacity(targets.len());
        let Some(&t_end) = targets.last() else {
            return Ok(out);
        };
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        if targets.windows(2).any(|w| dir * (w[1] - w[0]) < 0.0) || dir * (targets[0] - t0) < 0.0 {
            return Err(Error::Config("integration targets are not monotone".into()));
        }

        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = dir * self.initial_step(&mut f, t, &y, &k1, (t_end - t0).abs());
        let mut steps = 0usize;
        let mut worst = 0.0_f64;
        let mut last_rejected = false;

        for &target in targets {
            while dir * (target - t) > 0.0 {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::Numerical {
                        message: format!("step limit {} reached at r = {t:e}", self.max_steps),
                        worst,
                    });
                }
                let remaining = target - t;
                let clipped = dir * h >= dir * remaining;
                let h_try = if clipped { remaining } else { h };
                if h_try.abs() <= 1e-14 * t.abs().max(1e-300) {
                    return Err(Error::Numerical {
                        message: format!("step size underflow at r = {t:e}"),
                        worst,
                    });
                }

                let (y_new, err) = self.step(&mut f, t, &y, &k1, h_try);
                if !err.is_finite() {
                    // overflow or NaN in a stage: shrink hard and retry
                    h = h_try * 0.1;
                    last_rejected = true;
                    continue;
                }
                let fac11 = err.powf(1.0 / 8.0);
                if err <= 1.0 {
                    worst = worst.max(err);
                    let mut h_new = h_try / (fac11 / SAFE).clamp(FAC_MIN, FAC_MAX);
                    if last_rejected {
                        h_new = dir * h_new.abs().min(h_try.abs());
                    }
                    last_rejected = false;
                    t = if clipped { target } else { t + h_try };
                    y = y_new;
                    k1 = f(t, &y);
                    // a clipped step says nothing about the natural size; keep the larger one
                    h = if clipped {
                        dir * h.abs().max(h_new.abs())
                    } else {
                        h_new
                    };
                } else {
                    h = h_try / (fac11 / SAFE).min(FAC_MAX);
                    last_rejected = true;
                }
            }
            out.push(y);
        }
        Ok(out)
    }

    fn scale(&self, y: &[C64; N], y_new: &[C64; N]) -> [f64; N] {
        let mut group_max = [0.0_f64; N];
        for i in 0..N {
            let g = self.groups[i];
            group_max[g] = group_max[g].max(y[i].norm()).max(y_new[i].norm());
        }
        std::array::from_fn(|i| {
            let floor = self.tol.atol * group_max[self.groups[i]];
            (self.tol.rtol * y[i].norm().max(y_new[i].norm()) + floor).max(f64::MIN_POSITIVE)
        })
    }

    fn initial_step<F>(&self, f: &mut F, t: f64, y: &[C64; N], k1: &[C64; N], span: f64) -> f64
    where
        F: FnMut(f64, &[C64; N]) -> [C64; N],
    {
        let sk = self.scale(y, y);
        let dnf: f64 = (0..N).map(|i| (k1[i].norm() / sk[i]).powi(2)).sum();
        let dny: f64 = (0..N).map(|i| (y[i].norm() / sk[i]).powi(2)).sum();
        let h0 = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        let h0 = h0.min(span);
        let y1: [C64; N] = std::array::from_fn(|i| y[i] + h0 * k1[i]);
        let k2 = f(t + h0, &y1);
        let der2 = ((0..N)
            .map(|i| ((k2[i] - k1[i]).norm() / sk[i]).powi(2))
            .sum::<f64>())
        .sqrt()
            / h0;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h0).min(h1).min(span).max(1e-12 * t.abs().max(1.0))
    }

    /// One DOP853 step; returns the new state and the scaled error norm.
    fn step<F>(&self, f: &mut F, t: f64, y: &[C64; N], k1: &[C64; N], h: f64) -> ([C64; N], f64)
    where
        F: FnMut(f64, &[C64; N]) -> [C64; N],
    {
        let comb = |terms: &[(f64, &[C64; N])]| -> [C64; N] {
            std::array::from_fn(|i| {
                let mut acc = C64::new(0.0, 0.0);
                for (a, k) in terms {
                    acc += *a * k[i];
                }
                y[i] + h * acc
            })
        };
        let k2 = f(t + C2 * h, &comb(&[(A21, k1)]));
        let k3 = f(t + C3 * h, &comb(&[(A31, k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &comb(&[(A41, k1), (A43, &k3)]));
        let k5 = f(t + C5 * h, &comb(&[(A51, k1), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + C6 * h, &comb(&[(A61, k1), (A64, &k4), (A65, &k5)]));
        let k7 = f(
            t + C7 * h,
            &comb(&[(A71, k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
        );
        let k8 = f(
            t + C8 * h,
            &comb(&[(A81, k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
        );
        let k9 = f(
            t + C9 * h,
            &comb(&[
                (A91, k1),
                (A94, &k4),
                (A95, &k5),
                (A96, &k6),
                (A97, &k7),
                (A98, &k8),
            ]),
        );
        let k10 = f(
            t + C10 * h,
            &comb(&[
                (A101, k1),
                (A104, &k4),
                (A105, &k5),
                (A106, &k6),
                (A107, &k7),
                (A108, &k8),
                (A109, &k9),
            ]),
        );
        let k11 = f(
            t + C11 * h,
            &comb(&[
                (A111, k1),
                (A114, &k4),
                (A115, &k5),
                (A116, &k6),
                (A117, &k7),
                (A118, &k8),
                (A119, &k9),
                (A1110, &k10),
            ]),
        );
        let k12 = f(
            t + h,
            &comb(&[
                (A121, k1),
                (A124, &k4),
                (A125, &k5),
                (A126, &k6),
                (A127, &k7),
                (A128, &k8),
                (A129, &k9),
                (A1210, &k10),
                (A1211, &k11),
            ]),
        );
        let slope: [C64; N] = std::array::from_fn(|i| {
            B1 * k1[i]
                + B6 * k6[i]
                + B7 * k7[i]
                + B8 * k8[i]
                + B9 * k9[i]
                + B10 * k10[i]
                + B11 * k11[i]
                + B12 * k12[i]
        });
        let y_new: [C64; N] = std::array::from_fn(|i| y[i] + h * slope[i]);

        let sk = self.scale(y, &y_new);
        let (mut err, mut err2) = (0.0, 0.0);
        for i in 0..N {
            let e5 = slope[i] - BHH1 * k1[i] - BHH2 * k9[i] - BHH3 * k12[i];
            err2 += (e5.norm() / sk[i]).powi(2);
            let e8 = ER1 * k1[i]
                + ER6 * k6[i]
                + ER7 * k7[i]
                + ER8 * k8[i]
                + ER9 * k9[i]
                + ER10 * k10[i]
                + ER11 * k11[i]
                + ER12 * k12[i];
            err += (e8.norm() / sk[i]).powi(2);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err * (1.0 / (deno * N as f64)).sqrt();
        (y_new, err)
    }
}

const SAFE: f64 = 0.9;
/// Bounds on `h_old / h_new`.
const FAC_MIN: f64 = 1.0 / 6.0;
const FAC_MAX: f64 = 1.0 / 0.333;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;
