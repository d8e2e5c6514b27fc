//! Two-channel potentials `V(r) = V^int(r) + l(l+1)/r²` in units with `ħ²/2μ = 1`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::RMat;
use crate::spline::CubicSpline;

/// Below this radius every potential reports its pure `ν(ν+1)/r²` core.
pub const R_FLOOR: f64 = 1e-8;

/// Partial waves `l` and singularity indices `ν` of a two-channel problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelSpec {
    l1: u32,
    l2: u32,
    nu1: u32,
    nu2: u32,
}

impl ChannelSpec {
    pub fn new(l1: u32, l2: u32, nu1: u32, nu2: u32) -> Result<Self> {
        if !(l1 + l2).is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "partial waves l = ({l1}, {l2}) must have the same parity"
            )));
        }
        if nu1 < l1 || nu2 < l2 {
            return Err(Error::Domain(format!(
                "singularity indices ν = ({nu1}, {nu2}) must not be below l = ({l1}, {l2})"
            )));
        }
        Ok(Self { l1, l2, nu1, nu2 })
    }

    pub fn l(&self) -> [u32; 2] {
        [self.l1, self.l2]
    }

    pub fn nu(&self) -> [u32; 2] {
        [self.nu1, self.nu2]
    }

    /// `m = (l₂ − l₁)/2`.
    pub fn m(&self) -> i64 {
        (self.l2 as i64 - self.l1 as i64) / 2
    }

    /// `l(l+1)` per channel.
    pub fn centrifugal(&self) -> [f64; 2] {
        [lambda(self.l1), lambda(self.l2)]
    }

    /// `ν(ν+1)` per channel.
    pub fn core(&self) -> [f64; 2] {
        [lambda(self.nu1), lambda(self.nu2)]
    }
}

fn lambda(l: u32) -> f64 {
    (l as f64) * (l as f64 + 1.0)
}

/// Bargmann s-wave potential `−2 (ln W[sinh κ₁r, sinh κ₂r])″`.
///
/// No bound state, `6/r²` core, tail decaying like `e^{−2 κ_min r}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bargmann {
    pub kappa1: f64,
    pub kappa2: f64,
}

impl Bargmann {
    /// Below `(κ₁+κ₂) r` of this size the odd power series replaces the hyperbolic form.
    const SERIES_LIMIT: f64 = 0.5;

    pub fn value(&self, r: f64) -> f64 {
        let (w, wp, wpp) = self.wronskian_scaled(r);
        let lw = wp / w;
        -2.0 * (wpp / w - lw * lw)
    }

    /// `(W, W′, W″)` up to a common positive factor.
    pub fn wronskian_scaled(&self, r: f64) -> (f64, f64, f64) {
        let (k1, k2) = (self.kappa1, self.kappa2);
        let s = k1 + k2;
        let d = k1 - k2;
        let gap = k2 * k2 - k1 * k1;
        if s * r < Self::SERIES_LIMIT {
            // W = Σ_{n odd ≥ 3} c_n rⁿ/n!,  c_n = (κ₂²−κ₁²)(s^{n−1} − d^{n−1})/2
            let (mut w, mut wp, mut wpp) = (0.0, 0.0, 0.0);
            // rⁿ/n!, r^{n−1}/(n−1)!, r^{n−2}/(n−2)! starting at n = 3
            let mut p0 = r * r * r / 6.0;
            let mut p1 = r * r / 2.0;
            let mut p2 = r;
            let (mut s_pow, mut d_pow) = (s * s, d * d);
            let mut n = 3.0;
            loop {
                let c = 0.5 * gap * (s_pow - d_pow);
                w += c * p0;
                wp += c * p1;
                wpp += c * p2;
                if (c * p2).abs() <= 1e-18 * wpp.abs() {
                    break;
                }
                p0 *= r * r / ((n + 1.0) * (n + 2.0));
                p1 *= r * r / (n * (n + 1.0));
                p2 *= r * r / ((n - 1.0) * n);
                s_pow *= s * s;
                d_pow *= d * d;
                n += 2.0;
            }
            (w, wp, wpp)
        } else {
            // common factor e^{sr}/4 removed
            let e1 = (-2.0 * k1 * r).exp();
            let e2 = (-2.0 * k2 * r).exp();
            let w = k2 * (1.0 - e1) * (1.0 + e2) - k1 * (1.0 + e1) * (1.0 - e2);
            let wp = gap * (1.0 - e1) * (1.0 - e2);
            let wpp = gap * (k1 * (1.0 + e1) * (1.0 - e2) + k2 * (1.0 - e1) * (1.0 + e2));
            (w, wp, wpp)
        }
    }
}

/// Validated Bargmann s-wave potential.
pub fn make_bargmann_s(kappa1: f64, kappa2: f64) -> Result<Bargmann> {
    if !(kappa1 > 0.0 && kappa2 > 0.0) || !kappa1.is_finite() || !kappa2.is_finite() {
        return Err(Error::Domain(format!(
            "Bargmann rates must be positive, got κ₁ = {kappa1}, κ₂ = {kappa2}"
        )));
    }
    if kappa1 == kappa2 {
        return Err(Error::Hypothesis(format!(
            "κ₁ = κ₂ = {kappa1} makes the Bargmann Wronskian vanish identically"
        )));
    }
    Ok(Bargmann { kappa1, kappa2 })
}

/// One diagonal entry of an uncoupled potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelTerm {
    /// `λ/r²`.
    Centrifugal(f64),
    Bargmann(Bargmann),
}

impl ChannelTerm {
    fn value(&self, r: f64) -> f64 {
        match self {
            ChannelTerm::Centrifugal(lam) => lam / (r * r),
            ChannelTerm::Bargmann(b) => b.value(r),
        }
    }
}

/// Tabulated potential, interpolated through `g = r² V`.
#[derive(Clone, Debug)]
pub struct Table {
    r: Vec<f64>,
    v: Vec<[f64; 3]>,
    g: [CubicSpline; 3],
}

impl Table {
    fn new(r: Vec<f64>, v: Vec<[f64; 3]>) -> Self {
        let g = std::array::from_fn(|c| {
            let y = r.iter().zip(&v).map(|(ri, vi)| ri * ri * vi[c]).collect();
            CubicSpline::new(r.clone(), y)
        });
        Self { r, v, g }
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    /// Rows `[V11, V12, V22]` as supplied.
    pub fn rows(&self) -> &[[f64; 3]] {
        &self.v
    }
}

#[derive(Clone, Debug)]
pub enum Model {
    Diagonal([ChannelTerm; 2]),
    Tabulated(Box<Table>),
}

/// Real symmetric two-channel potential.
#[derive(Clone, Debug)]
pub struct Potential {
    spec: ChannelSpec,
    model: Model,
    provenance: String,
}

impl Potential {
    pub fn new(spec: ChannelSpec, model: Model, provenance: impl Into<String>) -> Self {
        Self {
            spec,
            model,
            provenance: provenance.into(),
        }
    }

    /// Builds a tabulated potential from samples `V(r_i)`.
    pub fn from_samples(
        spec: ChannelSpec,
        r: Vec<f64>,
        values: &[RMat],
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if r.len() != values.len() {
            return Err(Error::Format(format!(
                "{} radii for {} potential samples",
                r.len(),
                values.len()
            )));
        }
        let rows: Vec<[f64; 3]> = values
            .iter()
            .map(|m| [m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]])
            .collect();
        check_rows(&r, &rows)?;
        Ok(Self::new(
            spec,
            Model::Tabulated(Box::new(Table::new(r, rows))),
            provenance,
        ))
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.model, Model::Diagonal(_))
    }

    /// `V(r)`, exactly symmetric. Requires `r > 0`.
    pub fn value(&self, r: f64) -> RMat {
        debug_assert!(r > 0.0);
        let r2 = r * r;
        if r < R_FLOOR {
            let [c1, c2] = self.spec.core();
            return RMat::new(c1 / r2, 0.0, 0.0, c2 / r2);
        }
        match &self.model {
            Model::Diagonal([a, b]) => RMat::new(a.value(r), 0.0, 0.0, b.value(r)),
            Model::Tabulated(t) => {
                let r0 = t.r[0];
                let r_last = *t.r.last().expect("table has at least two rows");
                if r < r0 {
                    let [c1, c2] = self.spec.core();
                    let v0 = t.v[0];
                    let r02 = r0 * r0;
                    let v11 = c1 / r2 + (v0[0] - c1 / r02);
                    let v22 = c2 / r2 + (v0[2] - c2 / r02);
                    RMat::new(v11, v0[1], v0[1], v22)
                } else if r > r_last {
                    let [c1, c2] = self.spec.centrifugal();
                    RMat::new(c1 / r2, 0.0, 0.0, c2 / r2)
                } else {
                    let v12 = t.g[1].eval(r) / r2;
                    RMat::new(t.g[0].eval(r) / r2, v12, v12, t.g[2].eval(r) / r2)
                }
            }
        }
    }

    /// Short description of the large-r behaviour.
    pub fn tail_decay(&self) -> String {
        let [l1, l2] = self.spec.l();
        match &self.model {
            Model::Diagonal(_) => {
                format!("centrifugal l = ({l1}, {l2}) plus exponentially decaying interaction")
            }
            Model::Tabulated(t) => format!(
                "centrifugal l = ({l1}, {l2}) beyond r = {:e}",
                t.r.last().copied().unwrap_or(f64::NAN)
            ),
        }
    }

    /// Writes the potential on `r` in the table format.
    pub fn write_table(&self, path: &Path, r: &[f64]) -> Result<()> {
        let values: Vec<RMat> = r.iter().map(|&ri| self.value(ri)).collect();
        std::fs::write(path, format_table(&self.spec, r, &values))?;
        Ok(())
    }
}

/// Free centrifugal potential; requires `ν = l`.
pub fn make_free(spec: ChannelSpec) -> Result<Potential> {
    if spec.nu() != spec.l() {
        return Err(Error::Domain(format!(
            "a free potential has ν = l, got ν = {:?}, l = {:?}",
            spec.nu(),
            spec.l()
        )));
    }
    let [c1, c2] = spec.centrifugal();
    Ok(Potential::new(
        spec,
        Model::Diagonal([ChannelTerm::Centrifugal(c1), ChannelTerm::Centrifugal(c2)]),
        format!("free l=({}, {})", spec.l()[0], spec.l()[1]),
    ))
}

/// `diag(6/r², Bargmann)` with `l = (2,0)`, `ν = (2,2)`.
pub fn make_example_v0(kappa1: f64, kappa2: f64) -> Result<Potential> {
    let b = make_bargmann_s(kappa1, kappa2)?;
    Ok(Potential::new(
        ChannelSpec::new(2, 0, 2, 2)?,
        Model::Diagonal([ChannelTerm::Centrifugal(6.0), ChannelTerm::Bargmann(b)]),
        format!("s-d example kappa1={kappa1} kappa2={kappa2}"),
    ))
}

/// `diag(0, Bargmann)` with `l = (0,0)`, `ν = (0,2)`.
pub fn make_s_wave_pair(kappa1: f64, kappa2: f64) -> Result<Potential> {
    let b = make_bargmann_s(kappa1, kappa2)?;
    Ok(Potential::new(
        ChannelSpec::new(0, 0, 0, 2)?,
        Model::Diagonal([ChannelTerm::Centrifugal(0.0), ChannelTerm::Bargmann(b)]),
        format!("s-s pair kappa1={kappa1} kappa2={kappa2}"),
    ))
}

fn check_rows(r: &[f64], rows: &[[f64; 3]]) -> Result<()> {
    if r.len() < 2 {
        return Err(Error::Format(
            "a potential table needs at least two rows".into(),
        ));
    }
    for (i, (ri, v)) in r.iter().zip(rows).enumerate() {
        if !(ri.is_finite() && *ri > 0.0) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Format(format!(
                "non-finite or non-positive entry in row {i}"
            )));
        }
        if i > 0 && r[i - 1] >= *ri {
            return Err(Error::Format(format!(
                "radii not strictly increasing at row {i}"
            )));
        }
    }
    Ok(())
}

/// Renders the table format: one header line, then `r V11 V12 V22` rows.
pub fn format_table(spec: &ChannelSpec, r: &[f64], values: &[RMat]) -> String {
    let [l1, l2] = spec.l();
    let [nu1, nu2] = spec.nu();
    let mut out = format!("# l1={l1} l2={l2} nu1={nu1} nu2={nu2}\n");
    for (ri, v) in r.iter().zip(values) {
        let _ = writeln!(
            out,
            "{:e} {:e} {:e} {:e}",
            ri,
            v[(0, 0)],
            v[(0, 1)],
            v[(1, 1)]
        );
    }
    out
}

/// Parses the table format.
pub fn parse_table(text: &str, provenance: &str) -> Result<Potential> {
    let mut spec: Option<ChannelSpec> = None;
    let mut r = Vec::new();
    let mut rows = Vec::new();
    let mut saw_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        saw_content = true;
        if let Some(rest) = line.strip_prefix('#') {
            if rest.contains("l1=") {
                if spec.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "duplicate header".into(),
                    });
                }
                spec = Some(parse_header(rest, line_no)?);
            }
            continue;
        }
        if spec.is_none() {
            return Err(Error::Parse {
                line: line_no,
                message: "data row before the `# l1=.. l2=.. nu1=.. nu2=..` header".into(),
            });
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.len() {
            4 => {}
            3 => {
                return Err(Error::Format(format!(
                    "line {line_no}: three columns; the V12 column is required (r V11 V12 V22)"
                )))
            }
            n => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 4 columns, found {n}"),
                })
            }
        }
        let mut nums = [0.0; 4];
        for (slot, field) in nums.iter_mut().zip(&fields) {
            *slot = field.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("`{field}`: {e}"),
            })?;
            if !slot.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite value `{field}`"),
                });
            }
        }
        if nums[0] <= 0.0 || r.last().is_some_and(|&prev| prev >= nums[0]) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("radius {} is not positive and strictly increasing", nums[0]),
            });
        }
        r.push(nums[0]);
        rows.push([nums[1], nums[2], nums[3]]);
    }

    if !saw_content {
        return Err(Error::Parse {
            line: 1,
            message: "empty potential table".into(),
        });
    }
    let spec = spec.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `# l1=.. l2=.. nu1=.. nu2=..` header".into(),
    })?;
    if r.len() < 2 {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "a potential table needs at least two rows".into(),
        });
    }
    Ok(Potential::new(
        spec,
        Model::Tabulated(Box::new(Table::new(r, rows))),
        provenance,
    ))
}

fn parse_header(rest: &str, line: usize) -> Result<ChannelSpec> {
    let mut vals: [Option<u32>; 4] = [None; 4];
    for token in rest.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            continue;
        };
        let slot = match key {
            "l1" => 0,
            "l2" => 1,
            "nu1" => 2,
            "nu2" => 3,
            _ => continue,
        };
        vals[slot] = Some(value.parse().map_err(|e| Error::Parse {
            line,
            message: format!("header `{token}`: {e}"),
        })?);
    }
    match vals {
        [Some(l1), Some(l2), Some(nu1), Some(nu2)] => {
            ChannelSpec::new(l1, l2, nu1, nu2).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })
        }
        _ => Err(Error::Parse {
            line,
            message: "header must define l1, l2, nu1 and nu2".into(),
        }),
    }
}

/// Loads a potential table from disk.
pub fn load_tabulated(path: &Path) -> Result<Potential> {
    let text = std::fs::read_to_string(path)?;
    parse_table(&text, &format!("table {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct hyperbolic form, accurate away from the origin.
    fn bargmann_direct(k1: f64, k2: f64, r: f64) -> f64 {
        let (s1, c1) = ((k1 * r).sinh(), (k1 * r).cosh());
        let (s2, c2) = ((k2 * r).sinh(), (k2 * r).cosh());
        let w = k2 * s1 * c2 - k1 * c1 * s2;
        let wp = (k2 * k2 - k1 * k1) * s1 * s2;
        let wpp = (k2 * k2 - k1 * k1) * (k1 * c1 * s2 + k2 * s1 * c2);
        -2.0 * (wpp / w - (wp / w).powi(2))
    }

    #[test]
    fn spec_validation() {
        assert!(ChannelSpec::new(2, 1, 2, 1).is_err());
        assert!(ChannelSpec::new(2, 0, 1, 0).is_err());
        let s = ChannelSpec::new(2, 0, 2, 2).unwrap();
        assert_eq!(s.m(), -1);
        assert_eq!(ChannelSpec::new(1, 3, 1, 3).unwrap().m(), 1);
    }

    #[test]
    fn free_examples() {
        let v = make_free(ChannelSpec::new(0, 0, 0, 0).unwrap()).unwrap();
        assert_eq!(v.value(1.7), RMat::zeros());
        let v = make_free(ChannelSpec::new(2, 0, 2, 0).unwrap()).unwrap();
        assert_eq!(v.value(2.0), RMat::new(1.5, 0.0, 0.0, 0.0));
        let v = make_free(ChannelSpec::new(1, 3, 1, 3).unwrap()).unwrap();
        assert_eq!(v.value(1.0), RMat::new(2.0, 0.0, 0.0, 12.0));
        assert!(make_free(ChannelSpec::new(0, 0, 0, 2).unwrap()).is_err());
    }

    #[test]
    fn bargmann_rejects_bad_rates() {
        assert!(matches!(
            make_bargmann_s(0.5, 0.5),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(make_bargmann_s(-0.5, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn bargmann_core_and_tail() {
        let v = make_example_v0(0.232, 0.944).unwrap();
        let r = 1e-3;
        assert!((v.value(r)[(1, 1)] * r * r - 6.0).abs() < 1e-3);
        for r in [40.0 / 0.232, 200.0, 400.0] {
            assert!(v.value(r)[(1, 1)].abs() <= 1e-10);
        }
        // exponential decay bound |V| ≤ C e^{−2κ_min r}
        let c = v.value(30.0)[(1, 1)].abs() * (2.0 * 0.232 * 30.0f64).exp();
        for r in [35.0, 40.0, 45.0, 50.0] {
            let bound = 1.01 * c * (-2.0f64 * 0.232 * r).exp();
            assert!(v.value(r)[(1, 1)].abs() <= bound);
        }
    }

    #[test]
    fn example_structure() {
        let v = make_example_v0(0.232, 0.944).unwrap();
        assert_eq!(v.spec().nu(), [2, 2]);
        assert_eq!(v.spec().l(), [2, 0]);
        for r in [1e-4, 0.3, 2.0, 17.0] {
            let m = v.value(r);
            assert_eq!(m[(0, 0)], 6.0 / (r * r));
            assert_eq!(m[(0, 1)], 0.0);
            assert_eq!(m[(1, 0)], 0.0);
        }
    }

    #[test]
    fn series_and_hyperbolic_forms_agree_at_the_switch() {
        let b = make_bargmann_s(0.232, 0.944).unwrap();
        let r_switch = Bargmann::SERIES_LIMIT / (0.232 + 0.944);
        let lo = b.value(r_switch * (1.0 - 1e-12));
        let hi = b.value(r_switch * (1.0 + 1e-12));
        assert!((lo - hi).abs() / hi.abs() < 1e-10);
    }

    #[test]
    fn near_floor_reports_core() {
        let v = make_example_v0(0.232, 0.944).unwrap();
        let r = 1e-9;
        assert_eq!(v.value(r)[(1, 1)], 6.0 / (r * r));
    }

    #[test]
    fn table_round_trip_at_nodes() {
        let v = make_example_v0(0.232, 0.944).unwrap();
        let r: Vec<f64> = (1..400).map(|i| 0.05 * i as f64).collect();
        let values: Vec<RMat> = r.iter().map(|&x| v.value(x)).collect();
        let text = format_table(v.spec(), &r, &values);
        let t = parse_table(&text, "test").unwrap();
        assert_eq!(t.spec(), v.spec());
        for (ri, vi) in r.iter().zip(&values) {
            let d = t.value(*ri) - vi;
            assert!(d.abs().max() <= 1e-12 * vi.abs().max().max(1.0));
        }
    }

    #[test]
    fn table_extrapolates_core_below_first_point() {
        let v = make_example_v0(0.232, 0.944).unwrap();
        let r: Vec<f64> = (0..200).map(|i| 0.01 + 0.05 * i as f64).collect();
        let values: Vec<RMat> = r.iter().map(|&x| v.value(x)).collect();
        let t = parse_table(&format_table(v.spec(), &r, &values), "test").unwrap();
        for x in [1e-3, 1e-4] {
            let a = t.value(x);
            let b = v.value(x);
            assert!((a[(1, 1)] * x * x - 6.0).abs() < 1e-3);
            assert!((a[(1, 1)] - b[(1, 1)]).abs() / b[(1, 1)] < 1e-3);
        }
        let far = t.value(50.0);
        assert_eq!(far, RMat::new(6.0 / 2500.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn table_errors() {
        assert!(matches!(parse_table("", "t"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_table("  \n\n", "t"),
            Err(Error::Parse { .. })
        ));
        let hdr = "# l1=0 l2=0 nu1=0 nu2=0\n";
        assert!(matches!(
            parse_table(&format!("{hdr}1 0 0\n2 0 0\n"), "t"),
            Err(Error::Format(_))
        ));
        match parse_table(&format!("{hdr}1 0 0 0\n2 x 0 0\n"), "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_table(&format!("{hdr}2 0 0 0\n1 0 0 0\n"), "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_table("1 0 0 0\n2 0 0 0\n", "t"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_table("# l1=0 l2=1 nu1=0 nu2=1\n1 0 0 0\n2 0 0 0\n", "t"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn load_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.dat");
        let v = make_example_v0(0.232, 0.944).unwrap();
        let r: Vec<f64> = (1..50).map(|i| 0.2 * i as f64).collect();
        v.write_table(&path, &r).unwrap();
        let t = load_tabulated(&path).unwrap();
        assert!((t.value(1.0) - v.value(1.0)).abs().max() < 1e-12);
        assert!(matches!(
            load_tabulated(&dir.path().join("missing.dat")),
            Err(Error::Io(_))
        ));
    }

    proptest! {
        #[test]
        fn symmetric_everywhere(r in 1e-9f64..100.0, k1 in 0.1f64..2.0, k2 in 0.1f64..2.0) {
            prop_assume!((k1 - k2).abs() > 1e-3);
            let v = make_s_wave_pair(k1, k2).unwrap();
            let m = v.value(r);
            prop_assert_eq!(m, m.transpose());
        }

        #[test]
        fn bargmann_matches_direct_form(r in 0.5f64..20.0, k1 in 0.1f64..2.0, k2 in 0.1f64..2.0) {
            prop_assume!((k1 - k2).abs() > 0.05);
            let b = make_bargmann_s(k1, k2).unwrap();
            let exact = bargmann_direct(k1, k2, r);
            prop_assert!((b.value(r) - exact).abs() <= 1e-9 * (1.0 + exact.abs()));
        }
    }
}
