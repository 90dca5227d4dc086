//! Report structures and serialisation.
//!
//! JSON output is versioned under `"schema": "bivector-spectra/1"` and every
//! floating-point number is printed with 17 significant digits, so reports
//! round-trip bit-exactly and identical inputs produce byte-identical output.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use bivector_spectra::decomp::Decomposition;
use bivector_spectra::spectral::SpectralData;
use bivector_spectra::verify::VerifyRecord;
use bivector_spectra::{Multivector, Signature};

pub const SCHEMA: &str = "bivector-spectra/1";

#[derive(Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub command: String,
    pub signature: SignatureEcho,
    /// Canonical form of the parsed input.
    pub input: String,
    pub effective_dimension: usize,
    pub is_pseudo_null: bool,
    pub wk_squared: f64,
    pub w_ladder: Vec<LadderEntry>,
    /// `c_j = ⟨W_j²⟩₀`; the monic polynomial in λ = μ² alternates signs.
    pub q_coeffs: Vec<f64>,
    pub spectrum: Vec<SpectrumEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotor: Option<RotorReport>,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Serialize)]
pub struct SignatureEcho {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl From<Signature> for SignatureEcho {
    fn from(sig: Signature) -> Self {
        SignatureEcho {
            p: sig.p(),
            q: sig.q(),
            r: sig.r(),
        }
    }
}

#[derive(Serialize)]
pub struct LadderEntry {
    pub index: usize,
    pub grade: usize,
    pub value: String,
}

#[derive(Serialize)]
pub struct SpectrumEntry {
    pub mu_re: f64,
    pub mu_im: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct DecompositionReport {
    pub parts: Vec<PartReport>,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct PartReport {
    pub value: String,
    pub mu_re: f64,
    pub mu_im: f64,
    pub method: String,
    /// `⟨b²⟩₀` of the part.
    pub square: f64,
}

#[derive(Serialize)]
pub struct RotorReport {
    pub method: String,
    pub value: String,
    pub unit_residual: f64,
    pub scalar_part: f64,
    pub tangent: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: String,
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub count: usize,
    pub max_dim: usize,
    pub pass: bool,
    pub records: Vec<VerifyRecord>,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub schema: &'static str,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub paper_note: String,
}

// ---- report assembly ----

pub fn spectral_section(report: &mut AnalysisReport, data: &SpectralData) {
    report.effective_dimension = data.effective_dimension();
    report.is_pseudo_null = data.is_pseudo_null;
    report.wk_squared = data.ladder.wk_squared().re;
    report.w_ladder = data
        .ladder
        .terms()
        .iter()
        .enumerate()
        .map(|(index, term)| LadderEntry {
            index,
            grade: 2 * index,
            value: term.to_string(),
        })
        .collect();
    report.q_coeffs = data.q_coeffs.clone();
    report.spectrum = data
        .pairs
        .iter()
        .map(|p| SpectrumEntry {
            mu_re: p.mu.re,
            mu_im: p.mu.im,
            lambda_re: p.lambda.re,
            lambda_im: p.lambda.im,
            multiplicity: p.multiplicity,
        })
        .collect();
}

pub fn decomposition_section(d: &Decomposition) -> DecompositionReport {
    DecompositionReport {
        parts: d
            .parts
            .iter()
            .map(|p| PartReport {
                value: p.b.to_string(),
                mu_re: p.mu.re,
                mu_im: p.mu.im,
                method: p.method.as_str().to_string(),
                square: p.square(),
            })
            .collect(),
        residual: d.residual,
    }
}

pub fn empty_report(command: &str, sig: Signature, input: &Multivector) -> AnalysisReport {
    AnalysisReport {
        schema: SCHEMA,
        command: command.to_string(),
        signature: sig.into(),
        input: input.to_string(),
        effective_dimension: 0,
        is_pseudo_null: false,
        wk_squared: 1.0,
        w_ladder: Vec::new(),
        q_coeffs: Vec::new(),
        spectrum: Vec::new(),
        warnings: Vec::new(),
        decomposition: None,
        rotor: None,
        residuals: BTreeMap::new(),
    }
}

// ---- serialisation with pinned float formatting ----

/// `serde_json` formatter that renders every finite f64 with 17 significant
/// digits (`{:.16e}`), the printed precision pinned by the report contract.
struct SigFig17;

impl serde_json::ser::Formatter for SigFig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFig17);
    value
        .serialize(&mut ser)
        .expect("report serialisation cannot fail");
    String::from_utf8(out).expect("report JSON is UTF-8")
}

// ---- human-readable tables ----

/// Short float form for tables (the JSON form keeps full precision).
pub fn short(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded = (x * 1e9).round() / 1e9;
    format!("{rounded}")
}

fn short_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        short(re)
    } else if re == 0.0 {
        format!("{}i", short(im))
    } else if im < 0.0 {
        format!("{} - {}i", short(re), short(-im))
    } else {
        format!("{} + {}i", short(re), short(im))
    }
}

/// Compact multivector rendering for tables: shortest-float coefficients,
/// implicit unit coefficients.
pub fn pretty_mv(mv: &Multivector) -> String {
    use bivector_spectra::ga_core::blade_name;
    let mut out = String::new();
    let mut first = true;
    for mask in 0..mv.sig().blade_count() {
        let c = mv.coeff(mask);
        for (value, imag) in [(c.re, false), (c.im, true)] {
            if value.abs() <= 1e-12 * mv.max_norm().max(1e-300) || value == 0.0 {
                continue;
            }
            let sign_negative = value < 0.0;
            if first {
                if sign_negative {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if sign_negative { " - " } else { " + " });
            }
            let magnitude = value.abs();
            let coeff_str = short(magnitude);
            let unit = coeff_str == "1" && !imag && mask != 0;
            if !unit {
                out.push_str(&coeff_str);
                if imag {
                    out.push('i');
                }
                if mask != 0 {
                    out.push('*');
                }
            }
            if mask != 0 {
                out.push_str(&blade_name(mask));
            }
        }
    }
    if first {
        out.push('0');
    }
    out
}

/// Canonical strings are exact but verbose; tables re-parse and shorten.
fn prettify(text: &str, sig: Signature) -> String {
    match bivector_spectra::parse_multivector(text, sig) {
        Ok(mv) => pretty_mv(&mv),
        Err(_) => text.to_string(),
    }
}

pub fn render_analysis_table(report: &AnalysisReport, sig: Signature) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(&mut out, format!("signature            {}", sig.algebra_name()));
    push(
        &mut out,
        format!("input                {}", prettify(&report.input, sig)),
    );
    push(
        &mut out,
        format!("effective dimension  {}", report.effective_dimension),
    );
    push(
        &mut out,
        format!(
            "classification       {}",
            if report.is_pseudo_null {
                "pseudo-null"
            } else {
                "regular"
            }
        ),
    );
    push(
        &mut out,
        format!("W_k squared          {}", short(report.wk_squared)),
    );
    push(&mut out, "W ladder".to_string());
    for entry in &report.w_ladder {
        push(
            &mut out,
            format!(
                "  W_{} (grade {})    {}",
                entry.index,
                entry.grade,
                prettify(&entry.value, sig)
            ),
        );
    }
    push(
        &mut out,
        format!(
            "Q_k coefficients     [{}]",
            report
                .q_coeffs
                .iter()
                .map(|c| short(*c))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    push(&mut out, "spectrum".to_string());
    if report.spectrum.is_empty() {
        push(&mut out, "  (empty: zero bivector)".to_string());
    }
    for entry in &report.spectrum {
        push(
            &mut out,
            format!(
                "  mu = +-({})   multiplicity {}",
                short_complex(entry.mu_re, entry.mu_im),
                entry.multiplicity
            ),
        );
    }
    for warning in &report.warnings {
        push(&mut out, format!("warning: {warning}"));
    }
    if let Some(d) = &report.decomposition {
        push(
            &mut out,
            format!("decomposition        residual {}", short(d.residual)),
        );
        for (i, part) in d.parts.iter().enumerate() {
            push(
                &mut out,
                format!(
                    "  b_{} = {}   mu = +-({})   method {}   <b^2>_0 = {}",
                    i + 1,
                    prettify(&part.value, sig),
                    short_complex(part.mu_re, part.mu_im),
                    part.method,
                    short(part.square)
                ),
            );
        }
    }
    if let Some(r) = &report.rotor {
        push(&mut out, format!("rotor ({})", r.method));
        push(&mut out, format!("  R = {}", prettify(&r.value, sig)));
        push(
            &mut out,
            format!("  unit residual      {}", short(r.unit_residual)),
        );
        push(
            &mut out,
            format!(
                "  <R>0 = {}   T = {}",
                short(r.scalar_part),
                prettify(&r.tangent, sig)
            ),
        );
    }
    if !report.residuals.is_empty() {
        push(&mut out, "residuals".to_string());
        for (name, value) in &report.residuals {
            push(&mut out, format!("  {name}: {}", short(*value)));
        }
    }
    out
}

pub fn render_verify_table(report: &VerifyReport) -> String {
    let mut out = String::new();
    for suite in &report.suites {
        out.push_str(&format!(
            "suite {}  seed {}  count {}  max-dim {}\n",
            suite.suite, report.seed, suite.count, suite.max_dim
        ));
        for record in &suite.records {
            out.push_str(&format!(
                "  [{}] {:<24} {:<10} max residual {:.3e}\n",
                if record.pass { "pass" } else { "FAIL" },
                record.check,
                record.signature,
                record.max_residual
            ));
        }
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.pass { "pass" } else { "FAIL" }
    ));
    out
}
