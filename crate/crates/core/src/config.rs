// Copyright 2026 The qsbackflow Authors
// SPDX-License-Identifier: Apache-2.0

//! TOML scan configuration.
//!
//! ```toml
//! model.kind = "pure_decoherence"
//! model.G.family = "jaynes_cummings"
//! model.G.params = { lambda = 1.0, gamma0 = 5.0 }
//! grid.t1 = 10.0
//! ```

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::frames::FrameKind;
use crate::grid::TimeGrid;
use crate::linalg::{c, CMat};
use crate::models::{DecoherenceFunction, DynamicalModel, ModelKind, RateFunction, RateFunctions};

/// One problem found while reading a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub model: DynamicalModel,
    pub dim: usize,
    pub frame: FrameKind,
    pub grid: TimeGrid,
    pub output: Option<PathBuf>,
    pub emit_eigenvalues: bool,
    pub emit_entropy: bool,
    pub compare_oracles: bool,
    pub blp_resolution: usize,
}

impl ScanConfig {
    /// Config for an already-built model with default grid settings.
    pub fn for_model(model: DynamicalModel, t1: f64) -> Result<Self> {
        use crate::models::Dynamics;
        let dim = model.dim();
        Ok(ScanConfig {
            frame: FrameKind::wigner_for(dim)?,
            grid: TimeGrid::new(0.0, t1, TimeGrid::DEFAULT_STEPS)?,
            model,
            dim,
            output: None,
            emit_eigenvalues: true,
            emit_entropy: false,
            compare_oracles: false,
            blp_resolution: 24,
        })
    }
}

struct Reader<'a> {
    text: &'a str,
    issues: Vec<ConfigIssue>,
}

fn normalize(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('-', "_")
}

impl<'a> Reader<'a> {
    fn line_of(&self, key: &str) -> Option<usize> {
        let last = key.rsplit('.').next().unwrap_or(key);
        let lines: Vec<&str> = self.text.lines().collect();
        let starts = |l: &str, k: &str| {
            l.trim_start()
                .strip_prefix(k)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        };
        lines
            .iter()
            .position(|l| starts(l, key))
            .or_else(|| lines.iter().position(|l| l.contains(key)))
            .or_else(|| lines.iter().position(|l| starts(l, last) || l.contains(&format!("{last} ="))))
            .map(|i| i + 1)
    }

    fn issue(&mut self, key: &str, message: impl Into<String>) {
        let line = self.line_of(key);
        self.issues.push(ConfigIssue {
            key: key.to_string(),
            line,
            message: message.into(),
        });
    }

    fn number(&mut self, table: &Table, name: &str, key: &str) -> Option<f64> {
        match table.get(name) {
            Some(Value::Float(x)) => Some(*x),
            Some(Value::Integer(i)) => Some(*i as f64),
            Some(_) => {
                self.issue(key, "expected a number");
                None
            }
            None => None,
        }
    }

    fn required_number(&mut self, table: &Table, name: &str, key: &str) -> Option<f64> {
        let v = self.number(table, name, key);
        if v.is_none() && !table.contains_key(name) {
            self.issue(key, "missing required value");
        }
        v
    }

    fn string(&mut self, table: &Table, name: &str, key: &str) -> Option<String> {
        match table.get(name) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.issue(key, "expected a string");
                None
            }
            None => None,
        }
    }

    fn boolean(&mut self, table: &Table, name: &str, key: &str, default: bool) -> bool {
        match table.get(name) {
            Some(Value::Boolean(b)) => *b,
            Some(_) => {
                self.issue(key, "expected true or false");
                default
            }
            None => default,
        }
    }

    fn table<'t>(&mut self, parent: &'t Table, name: &str, key: &str) -> Option<&'t Table> {
        match parent.get(name) {
            Some(Value::Table(t)) => Some(t),
            Some(_) => {
                self.issue(key, "expected a table");
                None
            }
            None => None,
        }
    }

    fn reject_unknown(&mut self, table: &Table, allowed: &[&str], prefix: &str) {
        for k in table.keys() {
            if !allowed.contains(&k.as_str()) {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                self.issue(&key, format!("unknown key (expected one of: {})", allowed.join(", ")));
            }
        }
    }

    /// Reads `params` of a family, requiring exactly the listed names.
    fn params(&mut self, spec: &Table, prefix: &str, names: &[&str]) -> Option<Vec<f64>> {
        let empty = Table::new();
        let key = format!("{prefix}.params");
        let params = self.table(spec, "params", &key).unwrap_or(&empty);
        self.reject_unknown(params, names, &key);
        let values: Vec<Option<f64>> = names
            .iter()
            .map(|n| self.required_number(params, n, &format!("{key}.{n}")))
            .collect();
        values.into_iter().collect()
    }

    fn decoherence(&mut self, model: &Table) -> Option<DecoherenceFunction> {
        let Some(spec) = self.table(model, "G", "model.G") else {
            self.issue("model.G", "missing decoherence function");
            return None;
        };
        self.reject_unknown(spec, &["family", "params"], "model.G");
        let Some(family) = self.string(spec, "family", "model.G.family") else {
            self.issue("model.G.family", "missing family");
            return None;
        };
        let built = match normalize(&family).as_str() {
            "exponential" => self
                .params(spec, "model.G", &["kappa"])
                .map(|p| DecoherenceFunction::exponential(p[0])),
            "damped_oscillatory" => self
                .params(spec, "model.G", &["kappa", "omega"])
                .map(|p| DecoherenceFunction::damped_oscillatory(p[0], p[1])),
            "jaynes_cummings" => self
                .params(spec, "model.G", &["lambda", "gamma0"])
                .map(|p| DecoherenceFunction::jaynes_cummings(p[0], p[1])),
            other => {
                self.issue(
                    "model.G.family",
                    format!("unknown family `{other}` (exponential, damped_oscillatory, jaynes_cummings)"),
                );
                None
            }
        }?;
        match built {
            Ok(f) => Some(f),
            Err(e) => {
                self.issue("model.G.params", e.to_string());
                None
            }
        }
    }

    fn rate(&mut self, spec: &Table, prefix: &str) -> Option<RateFunction> {
        self.reject_unknown(spec, &["family", "params"], prefix);
        let family_key = format!("{prefix}.family");
        let Some(family) = self.string(spec, "family", &family_key) else {
            self.issue(&family_key, "missing family");
            return None;
        };
        match normalize(&family).as_str() {
            "constant" => self.params(spec, prefix, &["c"]).map(|p| RateFunction::Constant { c: p[0] }),
            "ramp" => self
                .params(spec, prefix, &["a", "b"])
                .map(|p| RateFunction::Ramp { a: p[0], b: p[1] }),
            "damped_oscillatory" => self
                .params(spec, prefix, &["c", "kappa", "omega"])
                .map(|p| RateFunction::DampedOscillatory { c: p[0], kappa: p[1], omega: p[2] }),
            other => {
                self.issue(&family_key, format!("unknown family `{other}` (constant, ramp, damped_oscillatory)"));
                None
            }
        }
    }

    fn rates(&mut self, model: &Table, d: usize) -> Option<RateFunctions> {
        let Some(spec) = self.table(model, "rates", "model.rates") else {
            self.issue("model.rates", "missing rate functions");
            return None;
        };
        let count = d * d - 1;
        let mut slots: Vec<Option<RateFunction>> = vec![None; count];
        let mut ok = true;
        for (name, value) in spec {
            let prefix = format!("model.rates.{name}");
            let index = match name.parse::<usize>() {
                Ok(k) if (1..=count).contains(&k) => k,
                _ => {
                    let key = match value {
                        Value::Table(t) if t.contains_key("family") => format!("{prefix}.family"),
                        _ => prefix.clone(),
                    };
                    self.issue(&key, format!("rate index must be 1..={count} (dimension {d} has {count} rates)"));
                    ok = false;
                    continue;
                }
            };
            let Value::Table(t) = value else {
                self.issue(&prefix, "expected a table");
                ok = false;
                continue;
            };
            match self.rate(t, &prefix) {
                Some(r) => slots[index - 1] = Some(r),
                None => ok = false,
            }
        }
        for (k, slot) in slots.iter().enumerate() {
            if slot.is_none() && ok {
                self.issue(&format!("model.rates.{}", k + 1), "missing rate function");
            }
        }
        let rates: Option<Vec<RateFunction>> = slots.into_iter().collect();
        match RateFunctions::new(d, rates?) {
            Ok(r) => Some(r),
            Err(e) => {
                self.issue("model.rates", e.to_string());
                None
            }
        }
    }
}

fn parse_kind(name: &str) -> Option<ModelKind> {
    match normalize(name).as_str() {
        "pure_decoherence" | "dephasing" => Some(ModelKind::PureDecoherence),
        "dissipation" | "amplitude_damping" => Some(ModelKind::Dissipation),
        "random_unitary" => Some(ModelKind::RandomUnitary),
        _ => None,
    }
}

fn toml_line(text: &str, err: &toml::de::Error) -> Option<usize> {
    err.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
}

/// Parses and validates a TOML scan configuration. All problems are
/// reported together.
pub fn parse_config(text: &str) -> Result<ScanConfig> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| {
        Error::Config(vec![ConfigIssue {
            key: "<document>".into(),
            line: toml_line(text, &e),
            message: e.message().to_string(),
        }])
    })?;
    let mut r = Reader { text, issues: Vec::new() };
    r.reject_unknown(&doc, &["model", "grid", "frame", "output", "flags", "blp"], "");

    let empty = Table::new();
    let model_table = r.table(&doc, "model", "model");
    if model_table.is_none() && !doc.contains_key("model") {
        r.issue("model", "missing [model] section");
    }
    let model_table = model_table.unwrap_or(&empty);
    r.reject_unknown(model_table, &["kind", "dim", "G", "rates"], "model");

    let kind = match r.string(model_table, "kind", "model.kind") {
        Some(k) => {
            let parsed = parse_kind(&k);
            if parsed.is_none() {
                r.issue("model.kind", format!("unknown model `{k}` (pure_decoherence, dissipation, random_unitary)"));
            }
            parsed
        }
        None => {
            if model_table.is_empty() || !model_table.contains_key("kind") {
                r.issue("model.kind", "missing model kind");
            }
            None
        }
    };

    let dim = match model_table.get("dim") {
        None => Some(2),
        Some(Value::Integer(d)) if *d == 2 || *d == 3 => Some(*d as usize),
        Some(Value::Integer(d)) => {
            r.issue("model.dim", format!("unsupported dimension {d} (2 or 3)"));
            None
        }
        Some(_) => {
            r.issue("model.dim", "expected an integer");
            None
        }
    };

    let model = match (kind, dim) {
        (Some(ModelKind::PureDecoherence | ModelKind::Dissipation), Some(d)) if d != 2 => {
            r.issue("model.dim", "pure_decoherence and dissipation are qubit models (dim = 2)");
            None
        }
        (Some(ModelKind::PureDecoherence), Some(_)) => r.decoherence(model_table).map(DynamicalModel::PureDecoherence),
        (Some(ModelKind::Dissipation), Some(_)) => r.decoherence(model_table).map(DynamicalModel::Dissipation),
        (Some(ModelKind::RandomUnitary), Some(d)) => r.rates(model_table, d).map(DynamicalModel::RandomUnitary),
        _ => None,
    };

    let grid_table = r.table(&doc, "grid", "grid").unwrap_or(&empty);
    r.reject_unknown(grid_table, &["t0", "t1", "steps"], "grid");
    let t0 = r.number(grid_table, "t0", "grid.t0").unwrap_or(0.0);
    let t1 = r.required_number(grid_table, "t1", "grid.t1");
    let steps = match grid_table.get("steps") {
        None => Some(TimeGrid::DEFAULT_STEPS),
        Some(Value::Integer(s)) if *s >= 3 => Some(*s as usize),
        Some(Value::Integer(s)) => {
            r.issue("grid.steps", format!("steps = {s} must be at least 3"));
            None
        }
        Some(_) => {
            r.issue("grid.steps", "expected an integer");
            None
        }
    };
    if !(t0 >= 0.0 && t0.is_finite()) {
        r.issue("grid.t0", format!("t0 = {t0} must be finite and non-negative"));
    }
    let grid = match (t1, steps) {
        (Some(t1), Some(steps)) => {
            if !(t1 > t0 && t1.is_finite()) {
                r.issue("grid.t1", format!("t1 = {t1} must be finite and greater than t0 = {t0}"));
                None
            } else {
                TimeGrid::new(t0, t1, steps).ok()
            }
        }
        _ => None,
    };

    let frame_table = r.table(&doc, "frame", "frame").unwrap_or(&empty);
    r.reject_unknown(frame_table, &["kind"], "frame");
    let frame = match (r.string(frame_table, "kind", "frame.kind"), dim) {
        (Some(k), Some(d)) => match k.parse::<FrameKind>() {
            Ok(kind) if kind == FrameKind::SicPovm || FrameKind::wigner_for(d).ok() == Some(kind) => Some(kind),
            Ok(kind) => {
                r.issue("frame.kind", format!("{kind} frame is not available in dimension {d}"));
                None
            }
            Err(_) => {
                r.issue("frame.kind", format!("unknown frame `{k}` (wootters, gross, sic)"));
                None
            }
        },
        (None, Some(d)) => FrameKind::wigner_for(d).ok(),
        _ => None,
    };

    let output_table = r.table(&doc, "output", "output").unwrap_or(&empty);
    r.reject_unknown(output_table, &["path"], "output");
    let output = r.string(output_table, "path", "output.path").map(PathBuf::from);

    let flags = r.table(&doc, "flags", "flags").unwrap_or(&empty);
    r.reject_unknown(flags, &["emit_eigenvalues", "emit_entropy", "compare_oracles"], "flags");
    let emit_eigenvalues = r.boolean(flags, "emit_eigenvalues", "flags.emit_eigenvalues", true);
    let emit_entropy = r.boolean(flags, "emit_entropy", "flags.emit_entropy", false);
    let compare_oracles = r.boolean(flags, "compare_oracles", "flags.compare_oracles", false);

    let blp = r.table(&doc, "blp", "blp").unwrap_or(&empty);
    r.reject_unknown(blp, &["resolution"], "blp");
    let blp_resolution = match blp.get("resolution") {
        None => 24,
        Some(Value::Integer(n)) if *n >= 12 => *n as usize,
        Some(_) => {
            r.issue("blp.resolution", "expected an integer >= 12");
            24
        }
    };

    if !r.issues.is_empty() {
        return Err(Error::Config(r.issues));
    }
    match (model, dim, frame, grid) {
        (Some(model), Some(dim), Some(frame), Some(grid)) => Ok(ScanConfig {
            model,
            dim,
            frame,
            grid,
            output,
            emit_eigenvalues,
            emit_entropy,
            compare_oracles,
            blp_resolution,
        }),
        _ => Err(Error::Config(vec![ConfigIssue {
            key: "<document>".into(),
            line: None,
            message: "incomplete configuration".into(),
        }])),
    }
}

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<ScanConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

fn ket_to_state(amplitudes: &[f64], spec: &str) -> Result<CMat> {
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidStateSpec(format!("`{spec}` has zero or non-finite norm")));
    }
    let v: Vec<_> = amplitudes.iter().map(|a| c(a / norm, 0.0)).collect();
    Ok(crate::linalg::projector(&v))
}

/// Density matrix from a short textual description:
/// `0`, `1`, `2` (basis states), `plus`, `minus`, `mixed`,
/// `bloch:THETA,PHI` (qubit), or `ket:A,B[,C]` (real amplitudes).
pub fn parse_state_spec(spec: &str, d: usize) -> Result<CMat> {
    let s = spec.trim().to_ascii_lowercase();
    let bad = |why: &str| Error::InvalidStateSpec(format!("`{spec}`: {why}"));
    if let Ok(k) = s.strip_prefix("basis:").unwrap_or(&s).parse::<usize>() {
        if k >= d {
            return Err(bad(&format!("basis index must be below {d}")));
        }
        return Ok(crate::linalg::ket_bra(d, k, k));
    }
    match s.as_str() {
        "plus" | "+" => return ket_to_state(&vec![1.0; d], spec),
        "minus" | "-" if d == 2 => return ket_to_state(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], spec),
        "mixed" => return Ok(crate::linalg::identity(d) * c(1.0 / d as f64, 0.0)),
        _ => {}
    }
    let numbers = |rest: &str| -> Result<Vec<f64>> {
        rest.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad("expected comma-separated numbers")))
            .collect()
    };
    if let Some(rest) = s.strip_prefix("bloch:") {
        let v = numbers(rest)?;
        if d != 2 || v.len() != 2 {
            return Err(bad("bloch:THETA,PHI is a qubit state"));
        }
        let (theta, phi) = (v[0], v[1]);
        let psi = [c((theta / 2.0).cos(), 0.0), num_complex::Complex64::from_polar((theta / 2.0).sin(), phi)];
        return Ok(crate::linalg::projector(&psi));
    }
    if let Some(rest) = s.strip_prefix("ket:") {
        let v = numbers(rest)?;
        if v.len() != d {
            return Err(bad(&format!("expected {d} amplitudes")));
        }
        return ket_to_state(&v, spec);
    }
    Err(bad("unknown state (0, 1, plus, minus, mixed, bloch:THETA,PHI, ket:A,B,...)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn issues(text: &str) -> Vec<ConfigIssue> {
        match parse_config(text) {
            Err(Error::Config(v)) => v,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(
            "model.kind = \"pure_decoherence\"\nmodel.G.family = \"exponential\"\nmodel.G.params.kappa = 1.0\ngrid.t1 = 5\n",
        )
        .unwrap();
        assert_eq!(cfg.grid.steps(), 2000);
        assert_eq!(cfg.grid.start(), 0.0);
        assert_eq!(cfg.frame, FrameKind::WoottersWigner);
        assert_eq!(cfg.dim, 2);
        assert!(cfg.emit_eigenvalues);
    }

    #[test]
    fn qutrit_defaults_to_gross_frame() {
        let mut text = String::from("[model]\nkind = \"random_unitary\"\ndim = 3\n");
        for k in 1..=8 {
            text.push_str(&format!("rates.{k} = {{ family = \"constant\", params = {{ c = 0.1 }} }}\n"));
        }
        text.push_str("[grid]\nt1 = 1.0\nsteps = 10\n");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.frame, FrameKind::GrossWigner);
        assert_eq!(cfg.model.rate_functions().unwrap().dim(), 3);
    }

    #[test]
    fn reversed_grid_names_t1() {
        let v = issues(
            "model.kind = \"pure_decoherence\"\nmodel.G.family = \"exponential\"\nmodel.G.params.kappa = 1.0\n[grid]\nt0 = 2.0\nt1 = 1.0\n",
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].key, "grid.t1");
        assert_eq!(v[0].line, Some(6));
    }

    #[test]
    fn too_many_rates_for_qubit() {
        let text = "[model]\nkind = \"random_unitary\"\ndim = 2\n\
                    [model.rates.1]\nfamily = \"constant\"\nparams = { c = 1.0 }\n\
                    [model.rates.2]\nfamily = \"constant\"\nparams = { c = 1.0 }\n\
                    [model.rates.3]\nfamily = \"constant\"\nparams = { c = 1.0 }\n\
                    [model.rates.9]\nfamily = \"constant\"\nparams = { c = 1.0 }\n\
                    [grid]\nt1 = 1.0\n";
        let v = issues(text);
        assert!(v.iter().any(|i| i.key == "model.rates.9.family" && i.message.contains("3 rates")), "{v:?}");
    }

    #[test]
    fn issues_are_aggregated() {
        let v = issues("model.kind = \"pure_decoherence\"\nmodel.G.family = \"bessel\"\ngrid.t1 = -1\ngrid.steps = 1\nframe.kind = \"gross\"\n");
        let keys: Vec<&str> = v.iter().map(|i| i.key.as_str()).collect();
        assert!(keys.contains(&"model.G.family"));
        assert!(keys.contains(&"grid.steps"));
        assert!(keys.contains(&"frame.kind"));
    }

    #[test]
    fn missing_params_and_unknown_keys() {
        let v = issues("model.kind = \"pure_decoherence\"\nmodel.G.family = \"jaynes_cummings\"\nmodel.G.params.lambda = 1.0\ngrid.t1 = 1\ngrid.dt = 0.1\n");
        let keys: Vec<&str> = v.iter().map(|i| i.key.as_str()).collect();
        assert!(keys.contains(&"model.G.params.gamma0"));
        assert!(keys.contains(&"grid.dt"));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let v = issues("model.kind = \"pure_decoherence\"\ngrid.t1 = = 2\n");
        assert_eq!(v[0].line, Some(2));
    }

    #[test]
    fn state_specs() {
        let plus = parse_state_spec("plus", 2).unwrap();
        assert!((plus[(0, 1)].re - 0.5).abs() < 1e-15);
        let minus = parse_state_spec("minus", 2).unwrap();
        assert!((minus[(0, 1)].re + 0.5).abs() < 1e-15);
        assert_eq!(parse_state_spec("1", 3).unwrap(), crate::linalg::ket_bra(3, 1, 1));
        let b = parse_state_spec("bloch:1.5707963267948966,0", 2).unwrap();
        assert!((b - plus).norm() < 1e-15);
        assert!(parse_state_spec("3", 3).is_err());
        assert!(parse_state_spec("ket:1,1", 3).is_err());
        assert!(parse_state_spec("banana", 2).is_err());
    }
}
