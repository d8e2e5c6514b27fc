//! Run configuration: INI sections with `key = value` lines and `#` comments.
//!
//! ```text
//! [channel]
//! l1 = 2
//! l2 = 0
//! nu1 = 2
//! nu2 = 2
//!
//! [model]
//! type = example_nf
//! kappa1 = 0.232
//! kappa2 = 0.944
//!
//! [transform]
//! chi = 1.22
//! sign = +
//!
//! [radial_grid]
//! r_min = 1e-4
//! knee = 1
//! r_max = 60
//! n = 6000
//!
//! [k_grid]
//! k_min = 0.01
//! k_max = 5
//! n = 200
//!
//! [output]
//! phases = phases.csv
//! v2_phases = phases_v2.csv
//! table = v2_table.dat
//! report = report.txt
//! ```
//!
//! `type` is one of free, example_nf, table. Several `chi` values run a chain.
//! `[channel]` is required for `type = free` and otherwise only checked against the model.
//! A relative table `path` is resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use epsusy::{
    load_tabulated, make_example_v0, make_free, ChannelSpec, Error, Potential, RadialGrid, Result,
    Sign,
};
use ini::Ini;

pub const MIN_POINTS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub l1: u32,
    pub l2: u32,
    pub nu1: u32,
    pub nu2: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelConfig {
    Free,
    ExampleNf { kappa1: f64, kappa2: f64 },
    Table { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformConfig {
    pub chis: Vec<f64>,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGridConfig {
    pub r_min: f64,
    pub knee: f64,
    pub r_max: f64,
    pub n: usize,
}

impl Default for RadialGridConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-4,
            knee: 1.0,
            r_max: 60.0,
            n: 6000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KGridConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub n: usize,
}

impl Default for KGridConfig {
    fn default() -> Self {
        Self {
            k_min: 0.01,
            k_max: 5.0,
            n: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub phases: PathBuf,
    pub v2_phases: PathBuf,
    pub table: PathBuf,
    pub report: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            phases: "phases.csv".into(),
            v2_phases: "phases_v2.csv".into(),
            table: "v2_table.dat".into(),
            report: "report.txt".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RunConfig {
    pub channel: Option<Channel>,
    pub model: Option<ModelConfig>,
    pub transform: Option<TransformConfig>,
    pub radial_grid: RadialGridConfig,
    pub k_grid: KGridConfig,
    pub output: OutputConfig,
}

const SECTIONS: [&str; 6] = [
    "channel",
    "model",
    "transform",
    "radial_grid",
    "k_grid",
    "output",
];

impl RunConfig {
    /// The s–d example with `κ = (0.232, 0.944)`, `χ = 1.22`, sign `+`.
    pub fn example_nf() -> Self {
        Self {
            channel: Some(Channel {
                l1: 2,
                l2: 0,
                nu1: 2,
                nu2: 2,
            }),
            model: Some(ModelConfig::ExampleNf {
                kappa1: 0.232,
                kappa2: 0.944,
            }),
            transform: Some(TransformConfig {
                chis: vec![1.22],
                sign: Sign::Plus,
            }),
            ..Self::default()
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        if let Some(ModelConfig::Table { path: p }) = &mut cfg.model {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Parse {
            line: e.line,
            message: e.msg.to_string(),
        })?;
        for (name, props) in ini.iter() {
            match name {
                None if props.is_empty() => {}
                None => return Err(Error::Config("keys outside a section".into())),
                Some(s) if SECTIONS.contains(&s) => {}
                Some(s) => return Err(Error::Config(format!("unknown section [{s}]"))),
            }
        }
        let mut cfg = Self::default();
        if let Some(s) = Section::get(&ini, "channel") {
            cfg.channel = Some(Channel {
                l1: s.req("l1")?,
                l2: s.req("l2")?,
                nu1: s.req("nu1")?,
                nu2: s.req("nu2")?,
            });
            s.finish()?;
        }
        if let Some(s) = Section::get(&ini, "model") {
            let ty: String = s.req("type")?;
            cfg.model = Some(match ty.as_str() {
                "free" => ModelConfig::Free,
                "example_nf" => ModelConfig::ExampleNf {
                    kappa1: s.opt("kappa1")?.unwrap_or(0.232),
                    kappa2: s.opt("kappa2")?.unwrap_or(0.944),
                },
                "table" => ModelConfig::Table {
                    path: s.req::<String>("path")?.into(),
                },
                other => {
                    return Err(Error::Config(format!(
                        "[model] type must be free, example_nf or table, got {other:?}"
                    )))
                }
            });
            s.finish()?;
        }
        if let Some(s) = Section::get(&ini, "transform") {
            let raw: String = s.req("chi")?;
            let chis = raw
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::Config(format!("[transform] chi: cannot parse {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cfg.transform = Some(TransformConfig {
                chis,
                sign: s.opt("sign")?.unwrap_or(Sign::Plus),
            });
            s.finish()?;
        }
        if let Some(s) = Section::get(&ini, "radial_grid") {
            let d = RadialGridConfig::default();
            cfg.radial_grid = RadialGridConfig {
                r_min: s.opt("r_min")?.unwrap_or(d.r_min),
                knee: s.opt("knee")?.unwrap_or(d.knee),
                r_max: s.opt("r_max")?.unwrap_or(d.r_max),
                n: s.opt("n")?.unwrap_or(d.n),
            };
            s.finish()?;
        }
        if let Some(s) = Section::get(&ini, "k_grid") {
            let d = KGridConfig::default();
            cfg.k_grid = KGridConfig {
                k_min: s.opt("k_min")?.unwrap_or(d.k_min),
                k_max: s.opt("k_max")?.unwrap_or(d.k_max),
                n: s.opt("n")?.unwrap_or(d.n),
            };
            s.finish()?;
        }
        if let Some(s) = Section::get(&ini, "output") {
            let d = OutputConfig::default();
            cfg.output = OutputConfig {
                phases: s.opt::<String>("phases")?.map_or(d.phases, Into::into),
                v2_phases: s
                    .opt::<String>("v2_phases")?
                    .map_or(d.v2_phases, Into::into),
                table: s.opt::<String>("table")?.map_or(d.table, Into::into),
                report: s.opt::<String>("report")?.map_or(d.report, Into::into),
            };
            s.finish()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let g = &self.radial_grid;
        if !(g.r_min > 0.0 && g.knee > g.r_min && g.r_max > g.knee && g.r_max.is_finite()) {
            return bad(format!(
                "[radial_grid] needs 0 < r_min < knee < r_max, got {} {} {}",
                g.r_min, g.knee, g.r_max
            ));
        }
        if g.n < MIN_POINTS {
            return bad(format!("[radial_grid] n = {} is below {MIN_POINTS}", g.n));
        }
        let k = &self.k_grid;
        if !(k.k_min > 0.0 && k.k_max > k.k_min && k.k_max.is_finite()) {
            return bad(format!(
                "[k_grid] needs 0 < k_min < k_max, got {} {}",
                k.k_min, k.k_max
            ));
        }
        if k.n < MIN_POINTS {
            return bad(format!("[k_grid] n = {} is below {MIN_POINTS}", k.n));
        }
        if let Some(t) = &self.transform {
            if t.chis.is_empty() {
                return bad("[transform] chi is empty".into());
            }
            if let Some(c) = t.chis.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
                return bad(format!("[transform] chi must be positive, got {c}"));
            }
        }
        if let Some(ModelConfig::ExampleNf { kappa1, kappa2 }) = &self.model {
            if !(*kappa1 > 0.0 && *kappa2 > 0.0 && kappa1.is_finite() && kappa2.is_finite()) {
                return bad(format!(
                    "[model] kappas must be positive, got {kappa1} {kappa2}"
                ));
            }
        }
        if matches!(self.model, Some(ModelConfig::Free)) && self.channel.is_none() {
            return bad("[model] type = free needs a [channel] section".into());
        }
        Ok(())
    }

    /// Serializes to the same grammar; `parse(to_ini_string())` gives back `self`.
    pub fn to_ini_string(&self) -> String {
        let mut ini = Ini::new();
        if let Some(c) = &self.channel {
            ini.with_section(Some("channel"))
                .set("l1", c.l1.to_string())
                .set("l2", c.l2.to_string())
                .set("nu1", c.nu1.to_string())
                .set("nu2", c.nu2.to_string());
        }
        match &self.model {
            None => {}
            Some(ModelConfig::Free) => {
                ini.with_section(Some("model")).set("type", "free");
            }
            Some(ModelConfig::ExampleNf { kappa1, kappa2 }) => {
                ini.with_section(Some("model"))
                    .set("type", "example_nf")
                    .set("kappa1", kappa1.to_string())
                    .set("kappa2", kappa2.to_string());
            }
            Some(ModelConfig::Table { path }) => {
                ini.with_section(Some("model"))
                    .set("type", "table")
                    .set("path", path.display().to_string());
            }
        }
        if let Some(t) = &self.transform {
            let chis: Vec<String> = t.chis.iter().map(f64::to_string).collect();
            ini.with_section(Some("transform"))
                .set("chi", chis.join(", "))
                .set("sign", t.sign.to_string());
        }
        let g = &self.radial_grid;
        ini.with_section(Some("radial_grid"))
            .set("r_min", g.r_min.to_string())
            .set("knee", g.knee.to_string())
            .set("r_max", g.r_max.to_string())
            .set("n", g.n.to_string());
        let k = &self.k_grid;
        ini.with_section(Some("k_grid"))
            .set("k_min", k.k_min.to_string())
            .set("k_max", k.k_max.to_string())
            .set("n", k.n.to_string());
        let o = &self.output;
        ini.with_section(Some("output"))
            .set("phases", o.phases.display().to_string())
            .set("v2_phases", o.v2_phases.display().to_string())
            .set("table", o.table.display().to_string())
            .set("report", o.report.display().to_string());
        let mut buf = Vec::new();
        ini.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ini output is UTF-8")
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        let g = &self.radial_grid;
        RadialGrid::log_uniform(g.r_min, g.knee, g.r_max, g.n)
    }

    /// Uniform, both ends included.
    pub fn k_values(&self) -> Vec<f64> {
        let k = &self.k_grid;
        let h = (k.k_max - k.k_min) / (k.n - 1) as f64;
        (0..k.n)
            .map(|i| {
                if i + 1 == k.n {
                    k.k_max
                } else {
                    k.k_min + h * i as f64
                }
            })
            .collect()
    }

    pub fn transform(&self) -> Result<&TransformConfig> {
        self.transform
            .as_ref()
            .ok_or_else(|| Error::Config("missing [transform] section".into()))
    }

    /// Builds the model potential.
    pub fn potential(&self) -> Result<Potential> {
        let model = self
            .model
            .as_ref()
            .ok_or_else(|| Error::Config("missing [model] section".into()))?;
        let v = match model {
            ModelConfig::Free => {
                let c = self.channel.as_ref().expect("validated");
                make_free(ChannelSpec::new(c.l1, c.l2, c.nu1, c.nu2)?)?
            }
            ModelConfig::ExampleNf { kappa1, kappa2 } => make_example_v0(*kappa1, *kappa2)?,
            ModelConfig::Table { path } => load_tabulated(path)?,
        };
        if let Some(c) = &self.channel {
            let s = v.spec();
            if s.l() != [c.l1, c.l2] || s.nu() != [c.nu1, c.nu2] {
                return Err(Error::Config(format!(
                    "[channel] l = ({}, {}), nu = ({}, {}) does not match the model's l = {:?}, nu = {:?}",
                    c.l1,
                    c.l2,
                    c.nu1,
                    c.nu2,
                    s.l(),
                    s.nu()
                )));
            }
        }
        Ok(v)
    }
}

/// Typed access to one section that rejects keys nobody asked for.
struct Section<'a> {
    name: &'static str,
    props: &'a ini::Properties,
    seen: std::cell::RefCell<Vec<&'static str>>,
}

impl<'a> Section<'a> {
    fn get(ini: &'a Ini, name: &'static str) -> Option<Self> {
        ini.section(Some(name)).map(|props| Self {
            name,
            props,
            seen: Default::default(),
        })
    }

    fn opt<T: std::str::FromStr>(&self, key: &'static str) -> Result<Option<T>> {
        self.seen.borrow_mut().push(key);
        let Some(raw) = self.props.get(key) else {
            return Ok(None);
        };
        raw.trim()
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::Config(format!("[{}] {key}: cannot parse {raw:?}", self.name)))
    }

    fn req<T: std::str::FromStr>(&self, key: &'static str) -> Result<T> {
        self.opt(key)?
            .ok_or_else(|| Error::Config(format!("[{}] is missing {key}", self.name)))
    }

    fn finish(&self) -> Result<()> {
        let seen = self.seen.borrow();
        match self.props.iter().find(|(k, _)| !seen.contains(k)) {
            Some((k, _)) => Err(Error::Config(format!("[{}] unknown key {k}", self.name))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAGSHIP: &str = "\
# s-d example
[model]
type = example_nf
kappa1 = 0.232
kappa2 = 0.944

[transform]
chi = 1.22
sign = +
";

    #[test]
    fn defaults_fill_missing_sections() {
        let c = RunConfig::parse(FLAGSHIP).unwrap();
        assert_eq!(c.radial_grid, RadialGridConfig::default());
        assert_eq!(c.k_grid, KGridConfig::default());
        assert_eq!(c.transform.as_ref().unwrap().chis, vec![1.22]);
        assert_eq!(c.transform.unwrap().sign, Sign::Plus);
        assert!(c.channel.is_none());
    }

    #[test]
    fn round_trip() {
        let mut c = RunConfig::example_nf();
        c.transform = Some(TransformConfig {
            chis: vec![1.22, 0.1 + 0.2, 3e-3],
            sign: Sign::Minus,
        });
        c.radial_grid.r_min = 1.0 / 3.0 * 1e-4;
        c.output.table = "out dir/table.dat".into();
        let text = c.to_ini_string();
        assert_eq!(RunConfig::parse(&text).unwrap(), c, "{text}");
        let t = RunConfig {
            model: Some(ModelConfig::Table {
                path: "/tmp/v.dat".into(),
            }),
            ..c
        };
        assert_eq!(RunConfig::parse(&t.to_ini_string()).unwrap(), t);
    }

    #[test]
    fn chi_lists() {
        let c = RunConfig::parse("[transform]\nchi = 1.0, 2.0 3.5\n").unwrap();
        assert_eq!(c.transform.unwrap().chis, vec![1.0, 2.0, 3.5]);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "[k_grid]\nk_min = 0\n",
            "[k_grid]\nn = 15\n",
            "[radial_grid]\nn = 8\n",
            "[radial_grid]\nr_min = -1\n",
            "[radial_grid]\nknee = 100\n",
            "[transform]\nchi = -1\n",
            "[transform]\nchi = 1\nsign = maybe\n",
            "[model]\ntype = harmonic\n",
            "[model]\ntype = free\n",
            "[model]\ntype = example_nf\nkappa1 = 0\n",
            "[channel]\nl1 = 1\n",
            "[channel]\nl1 = 0\nl2 = 0\nnu1 = 0\nnu2 = 0\nspin = 1\n",
            "[extras]\nx = 1\n",
            "stray = 1\n",
        ] {
            let e = RunConfig::parse(text).unwrap_err();
            assert!(
                matches!(e, Error::Config(_) | Error::Parse { .. }),
                "{text}: {e}"
            );
        }
    }

    #[test]
    fn missing_model_is_named() {
        let c = RunConfig::parse("[k_grid]\nn = 20\n").unwrap();
        let e = c.potential().unwrap_err();
        assert!(e.to_string().contains("[model]"));
        assert!(c
            .transform()
            .unwrap_err()
            .to_string()
            .contains("[transform]"));
    }

    #[test]
    fn channel_must_match_model() {
        let mut c = RunConfig::example_nf();
        assert!(c.potential().is_ok());
        c.channel = Some(Channel {
            l1: 0,
            l2: 2,
            nu1: 2,
            nu2: 2,
        });
        assert!(matches!(c.potential(), Err(Error::Config(_))));
    }

    #[test]
    fn k_values_hit_both_ends() {
        let c = RunConfig::default();
        let k = c.k_values();
        assert_eq!(k.len(), 200);
        assert_eq!(k[0], 0.01);
        assert_eq!(k[199], 5.0);
        assert!(k.windows(2).all(|w| w[1] > w[0]));
    }
}
