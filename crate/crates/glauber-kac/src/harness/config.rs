use crate::error::{Error, Result};
use crate::glauber::TestMode;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Ising,
    BlumeCapel(f64),
    /// Uniform measure on the unit sphere of `ℝ^m`.
    MVector,
    /// Atomic measure solving the moment problem for the configured coefficients.
    Synthesized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialSpec {
    Iid,
    Zeros,
}

/// Everything needed to reproduce a run. Parsed from `key = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub gamma: f64,
    pub n: usize,
    pub m: usize,
    /// Limit coefficients `ā₁, ā₃, …, ā_{2n-1}`.
    pub abar: Vec<f64>,
    /// Inverse temperature; `None` selects `β(γ)`.
    pub beta: Option<f64>,
    pub measure: MeasureSpec,
    pub initial: InitialSpec,
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
    pub modes: Vec<TestMode>,
    pub nu: f64,
    pub threshold: f64,
    pub check_interval: Option<f64>,
    pub cutoff: f64,
    pub dt: f64,
    /// Continuum noise amplitude; `None` selects the value matching the lattice model.
    pub noise: Option<f64>,
    pub permutations: usize,
    pub write_fields: bool,
    /// `assert_<metric> = <bound>` lines.
    pub assertions: BTreeMap<String, f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            gamma: 0.3,
            n: 2,
            m: 1,
            abar: vec![0.0, -1.0 / 3.0],
            beta: None,
            measure: MeasureSpec::Ising,
            initial: InitialSpec::Iid,
            t_end: 0.5,
            snapshots: vec![0.25, 0.5],
            replicas: 8,
            seed: 1,
            modes: vec![TestMode::cos(0, 1, 0), TestMode::sin(0, 0, 1), TestMode::cos(0, 1, 1)],
            nu: 0.1,
            threshold: f64::INFINITY,
            check_interval: None,
            cutoff: 16.0,
            dt: 2e-3,
            noise: None,
            permutations: 199,
            write_fields: false,
            assertions: BTreeMap::new(),
        }
    }
}

fn parse_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).map(|s| parse_f64(s)).collect()
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| format!("`{s}`: {e}")),
    }
}

pub fn mode_label(mode: &TestMode) -> String {
    let shape = match mode.shape {
        crate::glauber::TestShape::Cos => "cos",
        crate::glauber::TestShape::Sin => "sin",
    };
    format!("{shape}:{}:{}:{}", mode.component, mode.omega.0, mode.omega.1)
}

fn parse_mode(s: &str) -> std::result::Result<TestMode, String> {
    let parts: Vec<&str> = s.split(':').map(|p| p.trim()).collect();
    if parts.len() != 4 {
        return Err(format!("test mode `{s}` must read shape:component:w1:w2"));
    }
    let c = parts[1].parse::<usize>().map_err(|e| e.to_string())?;
    let w1 = parts[2].parse::<i64>().map_err(|e| e.to_string())?;
    let w2 = parts[3].parse::<i64>().map_err(|e| e.to_string())?;
    match parts[0] {
        "cos" => Ok(TestMode::cos(c, w1, w2)),
        "sin" => Ok(TestMode::sin(c, w1, w2)),
        other => Err(format!("unknown test-mode shape `{other}`")),
    }
}

fn parse_measure(s: &str) -> std::result::Result<MeasureSpec, String> {
    let (name, arg) = match s.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s.trim(), None),
    };
    match (name, arg) {
        ("ising", None) => Ok(MeasureSpec::Ising),
        ("blume_capel", Some(t)) => Ok(MeasureSpec::BlumeCapel(parse_f64(t)?)),
        ("blume_capel", None) => Ok(MeasureSpec::BlumeCapel(0.0)),
        ("m_vector", None) => Ok(MeasureSpec::MVector),
        ("synth", None) => Ok(MeasureSpec::Synthesized),
        _ => Err(format!("unknown measure preset `{s}`")),
    }
}

fn measure_text(m: &MeasureSpec) -> String {
    match m {
        MeasureSpec::Ising => "ising".into(),
        MeasureSpec::BlumeCapel(t) => format!("blume_capel:{t}"),
        MeasureSpec::MVector => "m_vector".into(),
        MeasureSpec::Synthesized => "synth".into(),
    }
}

fn list_text(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: line_no, message: format!("expected `key = value`, got `{line}`") })?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set(key, value).map_err(|message| Error::Config { line: line_no, message })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        let uint = |v: &str| v.parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
        match key {
            "gamma" => self.gamma = parse_f64(v)?,
            "n" => self.n = uint(v)?,
            "m" => self.m = uint(v)?,
            "abar" => self.abar = parse_list(v)?,
            "beta" => self.beta = if v == "auto" { None } else { Some(parse_f64(v)?) },
            "measure" => self.measure = parse_measure(v)?,
            "initial" => {
                self.initial = match v {
                    "iid" => InitialSpec::Iid,
                    "zeros" => InitialSpec::Zeros,
                    _ => return Err(format!("unknown initial condition `{v}`")),
                }
            }
            "t_end" => self.t_end = parse_f64(v)?,
            "snapshots" => self.snapshots = parse_list(v)?,
            "replicas" => self.replicas = uint(v)?,
            "seed" => self.seed = v.parse::<u64>().map_err(|e| e.to_string())?,
            "modes" => self.modes = v.split(',').map(|s| parse_mode(s.trim())).collect::<std::result::Result<_, _>>()?,
            "nu" => self.nu = parse_f64(v)?,
            "threshold" => self.threshold = parse_f64(v)?,
            "check_interval" => self.check_interval = if v == "auto" { None } else { Some(parse_f64(v)?) },
            "cutoff" => self.cutoff = parse_f64(v)?,
            "dt" => self.dt = parse_f64(v)?,
            "noise" => self.noise = if v == "auto" { None } else { Some(parse_f64(v)?) },
            "permutations" => self.permutations = uint(v)?,
            "write_fields" => self.write_fields = v.parse::<bool>().map_err(|e| e.to_string())?,
            k if k.starts_with("assert_") => {
                self.assertions.insert(k.trim_start_matches("assert_").to_string(), parse_f64(v)?);
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config { line: 0, message: msg });
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if self.abar.len() != self.n {
            return bad(format!("abar needs {} entries for n = {}", self.n, self.n));
        }
        if !(self.t_end >= 0.0) || self.snapshots.iter().any(|&t| t < 0.0 || t > self.t_end) {
            return bad("snapshot times must lie in [0, t_end]".into());
        }
        if self.snapshots.windows(2).any(|w| w[1] <= w[0]) {
            return bad("snapshot times must be strictly increasing".into());
        }
        if let Some(md) = self.modes.iter().find(|md| md.component >= self.m) {
            return bad(format!("test mode {} acts on a missing component", mode_label(md)));
        }
        if !(self.dt > 0.0 && self.cutoff > 0.0) {
            return bad("dt and cutoff must be positive".into());
        }
        if matches!(self.measure, MeasureSpec::Ising | MeasureSpec::BlumeCapel(_)) && self.m != 1 {
            return bad("scalar presets need m = 1".into());
        }
        Ok(())
    }

    /// Canonical text form; parsing it gives back the same configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "gamma = {}", self.gamma);
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "m = {}", self.m);
        let _ = writeln!(s, "abar = {}", list_text(&self.abar));
        let _ = writeln!(s, "beta = {}", self.beta.map(|b| b.to_string()).unwrap_or_else(|| "auto".into()));
        let _ = writeln!(s, "measure = {}", measure_text(&self.measure));
        let _ = writeln!(s, "initial = {}", if self.initial == InitialSpec::Iid { "iid" } else { "zeros" });
        let _ = writeln!(s, "t_end = {}", self.t_end);
        let _ = writeln!(s, "snapshots = {}", list_text(&self.snapshots));
        let _ = writeln!(s, "replicas = {}", self.replicas);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "modes = {}", self.modes.iter().map(mode_label).collect::<Vec<_>>().join(", "));
        let _ = writeln!(s, "nu = {}", self.nu);
        let _ = writeln!(s, "threshold = {}", if self.threshold.is_infinite() { "inf".into() } else { self.threshold.to_string() });
        let _ = writeln!(s, "check_interval = {}", self.check_interval.map(|b| b.to_string()).unwrap_or_else(|| "auto".into()));
        let _ = writeln!(s, "cutoff = {}", self.cutoff);
        let _ = writeln!(s, "dt = {}", self.dt);
        let _ = writeln!(s, "noise = {}", self.noise.map(|b| b.to_string()).unwrap_or_else(|| "auto".into()));
        let _ = writeln!(s, "permutations = {}", self.permutations);
        let _ = writeln!(s, "write_fields = {}", self.write_fields);
        for (k, v) in &self.assertions {
            let _ = writeln!(s, "assert_{k} = {v}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "gamma = 0.25\nm = 2\nabar = 0.1, -0.05 # comment\nmeasure = synth\nmodes = cos:1:1:0, sin:0:0:2\nassert_max_stopped_fraction = 0.2\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.m, 2);
        assert_eq!(cfg.modes[0], TestMode::cos(1, 1, 0));
        assert_eq!(cfg.assertions["max_stopped_fraction"], 0.2);
        assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn schema_violations_report_lines() {
        match ExperimentConfig::parse("gamma = 0.3\nfoo = 1\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(ExperimentConfig::parse("abar = 0.0\n").is_err());
        assert!(ExperimentConfig::parse("m = 2\n").is_err());
        assert!(ExperimentConfig::parse("snapshots = 0.3, 0.2\n").is_err());
    }
}
