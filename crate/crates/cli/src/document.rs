//! Serializable output documents and value formatting.

use serde::{Deserialize, Serialize};
use specjoin::power_report::FamilyReport;
use specjoin::spectra::{Source, Spectrum, COMPARE_TOL, GROUP_TOL};
use specjoin::verify::{CaseResult, Status, Suite, VerifyReport};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Structural,
    Oracle,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub value: f64,
    pub multiplicity: usize,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviations {
    pub structural_vs_oracle: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub compare: f64,
    pub group: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            compare: COMPARE_TOL,
            group: GROUP_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub schema: u32,
    pub graph_descriptor: String,
    pub order: usize,
    pub method: Method,
    pub eigenvalues: Vec<EigenRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviations: Option<Deviations>,
    pub version: String,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl SpectrumDocument {
    pub fn new(
        graph_descriptor: String,
        method: Method,
        spectrum: &Spectrum,
        deviations: Option<Deviations>,
        tolerances: Tolerances,
    ) -> Self {
        let eigenvalues = spectrum
            .regrouped(tolerances.group)
            .entries()
            .iter()
            .map(|e| EigenRow {
                value: round_sig(e.value),
                multiplicity: e.multiplicity,
                source: e.source,
            })
            .collect();
        Self {
            schema: SCHEMA,
            graph_descriptor,
            order: spectrum.total(),
            method,
            eigenvalues,
            deviations,
            version: VERSION.to_string(),
            tolerances,
            generated_at: None,
        }
    }

    pub fn multiplicity_total(&self) -> usize {
        self.eigenvalues.iter().map(|r| r.multiplicity).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub warn: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub schema: u32,
    pub version: String,
    pub suite: Suite,
    pub max_n: u64,
    pub tol: f64,
    pub summary: Summary,
    pub cases: Vec<CaseResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl From<VerifyReport> for VerifyDocument {
    fn from(r: VerifyReport) -> Self {
        let summary = Summary {
            pass: r.count(Status::Pass),
            warn: r.count(Status::Warn),
            fail: r.count(Status::Fail),
        };
        Self {
            schema: SCHEMA,
            version: VERSION.to_string(),
            suite: r.suite,
            max_n: r.max_n,
            tol: r.tol,
            summary,
            cases: r.cases,
            generated_at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub version: String,
    pub tol: f64,
    pub report: FamilyReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

/// Rounds to 12 significant digits; magnitudes below `1e-12` become zero.
pub fn round_sig(v: f64) -> f64 {
    if v.abs() < 1e-12 {
        return 0.0;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// `%.12g`-style rendering.
pub fn fmt_value(v: f64) -> String {
    let v = round_sig(v);
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

pub fn fmt_dev(v: f64) -> String {
    format!("{v:.3e}")
}
