//! Residual reports and their canonical JSON encoding.
//!
//! The JSON layout is fixed: `{"config": {...}, "perEquation": [{"label",
//! "maxResidual", "argmaxPoint", "informational"}], "pass", "toolVersion"}`,
//! keys in declaration order, floats printed with 17 significant digits.
//! Two runs with the same configuration and seed produce byte-identical
//! output.

use std::fmt::Write as _;

/// A configuration value echoed into the report header.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigValue {
    Str(String),
    Int(i64),
    Float(f64),
    FloatList(Vec<f64>),
    Bool(bool),
}

/// Largest absolute residual of one labelled equation over the sample set,
/// with the point attaining it. Informational entries are surfaced in the
/// report but excluded from the pass decision.
#[derive(Debug, Clone)]
pub struct EquationResidual {
    pub label: String,
    pub max_residual: f64,
    pub argmax_point: Vec<f64>,
    pub informational: bool,
}

/// Per-equation maximum absolute residuals over a sample set, with pass/fail
/// against a single tolerance.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub config: Vec<(String, ConfigValue)>,
    pub per_equation: Vec<EquationResidual>,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
    pub tool_version: String,
}

impl ResidualReport {
    pub fn new(config: Vec<(String, ConfigValue)>, tolerance: f64, samples: usize) -> Self {
        Self {
            config,
            per_equation: Vec::new(),
            tolerance,
            samples,
            pass: true,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn push(&mut self, label: &str, max_residual: f64, argmax_point: Vec<f64>) {
        self.per_equation.push(EquationResidual {
            label: label.to_string(),
            max_residual,
            argmax_point,
            informational: false,
        });
    }

    pub fn push_informational(&mut self, label: &str, max_residual: f64, argmax_point: Vec<f64>) {
        self.per_equation.push(EquationResidual {
            label: label.to_string(),
            max_residual,
            argmax_point,
            informational: true,
        });
    }

    /// Recomputes `pass`: every non-informational residual must stay below
    /// the tolerance.
    pub fn finalize(&mut self) {
        self.pass = self
            .per_equation
            .iter()
            .filter(|e| !e.informational)
            .all(|e| e.max_residual < self.tolerance);
    }

    pub fn max_residual(&self, label: &str) -> Option<f64> {
        self.per_equation
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.max_residual)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(1024);
        out.push_str("{\"config\":{");
        let mut first = true;
        for (key, value) in &self.config {
            if !first {
                out.push(',');
            }
            first = false;
            write_json_string(&mut out, key);
            out.push(':');
            write_config_value(&mut out, value);
        }
        if !first {
            out.push(',');
        }
        out.push_str("\"tol\":");
        out.push_str(&format_float(self.tolerance));
        let _ = write!(out, ",\"samples\":{}", self.samples);
        out.push_str("},\"perEquation\":[");
        for (i, e) in self.per_equation.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"label\":");
            write_json_string(&mut out, &e.label);
            out.push_str(",\"maxResidual\":");
            out.push_str(&format_float(e.max_residual));
            out.push_str(",\"argmaxPoint\":[");
            for (j, x) in e.argmax_point.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format_float(*x));
            }
            let _ = write!(out, "],\"informational\":{}}}", e.informational);
        }
        let _ = write!(
            out,
            "],\"pass\":{},\"toolVersion\":",
            self.pass
        );
        write_json_string(&mut out, &self.tool_version);
        out.push('}');
        out
    }
}

fn write_config_value(out: &mut String, value: &ConfigValue) {
    match value {
        ConfigValue::Str(s) => write_json_string(out, s),
        ConfigValue::Int(i) => {
            let _ = write!(out, "{i}");
        }
        ConfigValue::Float(x) => out.push_str(&format_float(*x)),
        ConfigValue::FloatList(xs) => {
            out.push('[');
            for (j, x) in xs.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format_float(*x));
            }
            out.push(']');
        }
        ConfigValue::Bool(b) => {
            let _ = write!(out, "{b}");
        }
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Scientific notation with 17 significant digits: enough to round-trip any
/// f64 exactly, and a fixed width for diffable reports.
pub fn format_float(x: f64) -> String {
    debug_assert!(x.is_finite(), "reports only carry finite values");
    format!("{x:.16e}")
}
