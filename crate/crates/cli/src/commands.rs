use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use epsusy::potential::format_table;
use epsusy::susy::Tolerances;
use epsusy::{
    chain, phase_curves, transform_potential, verify_chain, verify_theorem, Error, Potential,
    Report, Result, TransformOutput,
};

use crate::config::RunConfig;

/// Where output files go; relative configured paths are joined onto `dir`.
pub struct Sink {
    dir: PathBuf,
}

impl Sink {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn write(&self, rel: &Path, text: &str) -> Result<PathBuf> {
        let path = self.dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, text)?;
        Ok(path)
    }
}

/// Effective configuration written next to the outputs.
pub const RUN_INI: &str = "run.ini";

/// Verification verdict of a command; commands without checks always pass.
pub type Verdict = bool;

pub fn phases(cfg: &RunConfig, sink: &Sink) -> Result<Verdict> {
    let v = cfg.potential()?;
    let data = phase_curves(&v, &cfg.k_values(), &cfg.grid()?)?;
    let path = sink.write(&cfg.output.phases, &data.to_csv())?;
    println!(
        "{}: {} rows -> {}",
        v.provenance(),
        data.k.len(),
        path.display()
    );
    Ok(true)
}

pub fn transform(cfg: &RunConfig, sink: &Sink) -> Result<Verdict> {
    let v = cfg.potential()?;
    let tc = cfg.transform()?;
    let [chi] = tc.chis[..] else {
        return Err(Error::Config(format!(
            "transform takes one chi, got {}; use the chain command",
            tc.chis.len()
        )));
    };
    let t = transform_potential(&v, chi, tc.sign, &cfg.grid()?)?;
    let path = sink.write(&cfg.output.table, &table_text(&t))?;
    print!("{}", metadata(&v, &t));
    println!("table = {}", path.display());
    Ok(true)
}

pub fn chain_cmd(cfg: &RunConfig, sink: &Sink) -> Result<Verdict> {
    let v = cfg.potential()?;
    let tc = cfg.transform()?;
    let steps = chain(&v, &tc.chis, tc.sign, &cfg.grid()?)?;
    let mut parent = &v;
    for (j, t) in steps.iter().enumerate() {
        println!("[step {}]", j + 1);
        print!("{}", metadata(parent, t));
        parent = &t.v2;
    }
    let last = steps.last().expect("chain is non-empty");
    let path = sink.write(&cfg.output.table, &table_text(last))?;
    println!("table = {}", path.display());
    Ok(true)
}

pub fn verify(cfg: &RunConfig, sink: &Sink) -> Result<Verdict> {
    let v = cfg.potential()?;
    let tc = cfg.transform()?;
    let (grid, k) = (cfg.grid()?, cfg.k_values());
    let tol = Tolerances::default();
    let rep = if tc.chis.len() == 1 {
        verify_theorem(&v, tc.chis[0], tc.sign, &k, &grid, &tol)?.1
    } else {
        verify_chain(&v, &tc.chis, tc.sign, &k, &grid, &tol)?.1
    };
    finish_report(cfg, sink, &v, &rep)
}

/// V₀ phases, the V₂ table, V₂ phases and the report for the s–d example.
pub fn example_nf(sink: &Sink) -> Result<Verdict> {
    let cfg = RunConfig::example_nf();
    sink.write(Path::new(RUN_INI), &cfg.to_ini_string())?;
    let v = cfg.potential()?;
    let tc = cfg.transform()?;
    let (grid, k) = (cfg.grid()?, cfg.k_values());
    let (t, rep) = verify_theorem(&v, tc.chis[0], tc.sign, &k, &grid, &Tolerances::default())?;
    let p0 = phase_curves(&v, &k, &grid)?;
    let p2 = phase_curves(&t.v2, &k, &grid)?;
    let o = &cfg.output;
    println!(
        "phases V0 -> {}",
        sink.write(&o.phases, &p0.to_csv())?.display()
    );
    println!(
        "table V2 -> {}",
        sink.write(&o.table, &table_text(&t))?.display()
    );
    println!(
        "phases V2 -> {}",
        sink.write(&o.v2_phases, &p2.to_csv())?.display()
    );
    print!("{}", metadata(&v, &t));
    finish_report(&cfg, sink, &v, &rep)
}

fn table_text(t: &TransformOutput) -> String {
    let r = t.grid.points();
    let values: Vec<_> = r.iter().map(|&ri| t.v2.value(ri)).collect();
    format_table(t.spec(), r, &values)
}

fn metadata(parent: &Potential, t: &TransformOutput) -> String {
    let m = parent.spec().m();
    let shift = t.sign.value() * if m % 2 == 0 { 1.0 } else { -1.0 };
    let [l1, l2] = t.spec().l();
    let [n1, n2] = t.spec().nu();
    let mut s = String::new();
    let _ = writeln!(s, "chi = {}", t.chi);
    let _ = writeln!(s, "sign = {}", t.sign);
    let _ = writeln!(s, "l_bar = ({l1}, {l2})");
    let _ = writeln!(s, "nu_bar = ({n1}, {n2}) from {:?}", t.nu_source);
    let _ = writeln!(s, "m = {m}");
    let _ = writeln!(
        s,
        "epsilon2 = epsilon0 {} arctan(k^2 / {})",
        if shift > 0.0 { "+" } else { "-" },
        2.0 * t.chi * t.chi
    );
    s
}

fn finish_report(cfg: &RunConfig, sink: &Sink, v: &Potential, rep: &Report) -> Result<Verdict> {
    let tc = cfg.transform()?;
    let mut text = String::new();
    let chis: Vec<String> = tc.chis.iter().map(f64::to_string).collect();
    let _ = writeln!(text, "# model: {}", v.provenance());
    let _ = writeln!(text, "# chi: {}", chis.join(", "));
    let _ = writeln!(text, "# sign: {}", tc.sign);
    let _ = writeln!(
        text,
        "{:<34} {:>11} {:>9} verdict",
        "check", "residual", "tol"
    );
    text.push_str(&rep.to_string());
    let pass = rep.all_pass();
    let _ = writeln!(text, "overall {}", if pass { "PASS" } else { "FAIL" });
    let path = sink.write(&cfg.output.report, &text)?;
    print!("{rep}");
    println!("report -> {}", path.display());
    for c in rep.failures() {
        eprintln!(
            "FAIL {} residual {:.3e} > {:.1e}",
            c.name, c.residual, c.tolerance
        );
    }
    Ok(pass)
}
