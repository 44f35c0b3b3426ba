//! CSV, JSON and SVG output for sweeps and symmetry verdicts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::c;
use crate::sweep::{
    AsymmetryProfile, Binding, FamilySource, OutputQuantity, PhaseLabel, SweepResult, SweepSpec,
};
use crate::symmetry::{SymmetryKind, SymmetryVerdict};
use crate::template::parse_template;
use crate::transform::FamilyId;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CSV_HEADER: &str = "param,re_l1,im_l1,re_l2,im_l2,phase,asymmetry";

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 600.0;
pub const SVG_MARGIN: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub family: String,
    /// `.ham` source when the family is a template.
    pub template: Option<String>,
    pub sweep_param: Option<String>,
    pub range: Option<[f64; 2]>,
    pub bindings: BTreeMap<String, Binding>,
    pub steps: Option<usize>,
    pub output_quantity: Option<OutputQuantity>,
    pub asymmetry_interval: Option<[f64; 2]>,
    pub asymmetry_notice: Option<String>,
    pub notes: Vec<String>,
    pub tool_version: String,
}

impl Metadata {
    pub fn for_sweep(spec: &SweepSpec, result: &SweepResult) -> Self {
        Metadata {
            family: spec.family.label(),
            template: match &spec.family {
                FamilySource::Template(t) => Some(t.to_source()),
                FamilySource::Builtin(_) => None,
            },
            sweep_param: Some(spec.sweep_param.clone()),
            range: Some([spec.range.0, spec.range.1]),
            bindings: spec.bindings.clone(),
            steps: Some(spec.steps),
            output_quantity: Some(spec.quantity),
            asymmetry_interval: result.asymmetry.interval.map(|(a, b)| [a, b]),
            asymmetry_notice: result.asymmetry.notice.clone(),
            notes: vec![format!("quantity: {}", spec.quantity.description())],
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Metadata for a single-point classification.
    pub fn for_point(family: &FamilySource, values: &BTreeMap<String, f64>) -> Self {
        Metadata {
            family: family.label(),
            template: match family {
                FamilySource::Template(t) => Some(t.to_source()),
                FamilySource::Builtin(_) => None,
            },
            sweep_param: None,
            range: None,
            bindings: values
                .iter()
                .map(|(k, &v)| (k.clone(), Binding::Const(v)))
                .collect(),
            steps: None,
            output_quantity: None,
            asymmetry_interval: None,
            asymmetry_notice: None,
            notes: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    fn family_source(&self) -> Result<FamilySource> {
        match &self.template {
            Some(src) => Ok(FamilySource::Template(Arc::new(parse_template(src)?))),
            None => Ok(FamilySource::Builtin(self.family.parse::<FamilyId>()?)),
        }
    }

    /// Rebuilds the sweep that produced this metadata.
    pub fn to_spec(&self) -> Result<SweepSpec> {
        let missing = |what: &str| Error::Report(format!("metadata has no {what}"));
        let range = self.range.ok_or_else(|| missing("range"))?;
        Ok(SweepSpec {
            family: self.family_source()?,
            sweep_param: self.sweep_param.clone().ok_or_else(|| missing("sweep_param"))?,
            range: (range[0], range[1]),
            steps: self.steps.ok_or_else(|| missing("steps"))?,
            bindings: self.bindings.clone(),
            quantity: self.output_quantity.ok_or_else(|| missing("output_quantity"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    /// What was checked, e.g. `pt`, `anti_pt`, `commutes`.
    pub check: String,
    pub operator: String,
    pub kind: SymmetryKind,
    pub residual: f64,
    pub holds: bool,
    pub threshold: f64,
}

impl VerdictRecord {
    pub fn new(check: &str, operator: &str, v: &SymmetryVerdict) -> Self {
        VerdictRecord {
            check: check.to_string(),
            operator: operator.to_string(),
            kind: v.kind,
            residual: v.residual,
            holds: v.holds,
            threshold: v.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Sweep(SweepResult),
    Verdicts(Vec<VerdictRecord>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub payload: Payload,
}

impl ReportBundle {
    pub fn from_sweep(spec: &SweepSpec, result: SweepResult) -> Self {
        ReportBundle {
            metadata: Metadata::for_sweep(spec, &result),
            payload: Payload::Sweep(result),
        }
    }

    fn sweep(&self) -> Result<&SweepResult> {
        match &self.payload {
            Payload::Sweep(r) => Ok(r),
            Payload::Verdicts(_) => Err(Error::Report(
                "this output needs a sweep payload, not verdicts".into(),
            )),
        }
    }
}

/// Formats with 17 significant digits, then drops trailing zeros. Plain
/// decimal notation for moderate exponents, scientific otherwise. Always
/// parses back to the identical `f64`.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn to_csv(bundle: &ReportBundle) -> Result<String> {
    let r = bundle.sweep()?;
    let mut out = String::new();
    if r.branch_count() == 2 {
        out.push_str(CSV_HEADER);
    } else {
        out.push_str("param");
        for i in 1..=r.branch_count() {
            let _ = write!(out, ",re_l{i},im_l{i}");
        }
        out.push_str(",phase,asymmetry");
    }
    out.push('\n');
    for (k, &t) in r.grid.iter().enumerate() {
        out.push_str(&fmt17(t));
        for branch in &r.branches {
            let z = branch[k];
            let _ = write!(out, ",{},{}", fmt17(z.re), fmt17(z.im));
        }
        let _ = write!(out, ",{}", r.phases[k]);
        out.push(',');
        if let Some(a) = r.asymmetry.values.get(k).copied().flatten() {
            out.push_str(&fmt17(a));
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct BranchDoc {
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SweepDoc {
    metadata: Metadata,
    grid: Vec<f64>,
    branches: Vec<BranchDoc>,
    phases: Vec<PhaseLabel>,
    exceptional_points: Vec<f64>,
    asymmetry: Vec<Option<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VerdictDoc {
    metadata: Metadata,
    verdicts: Vec<VerdictRecord>,
}

pub fn to_json(bundle: &ReportBundle) -> Result<String> {
    let text = match &bundle.payload {
        Payload::Sweep(r) => serde_json::to_string_pretty(&SweepDoc {
            metadata: bundle.metadata.clone(),
            grid: r.grid.clone(),
            branches: r
                .branches
                .iter()
                .map(|b| BranchDoc {
                    re: b.iter().map(|z| z.re).collect(),
                    im: b.iter().map(|z| z.im).collect(),
                })
                .collect(),
            phases: r.phases.clone(),
            exceptional_points: r.exceptional_points.clone(),
            asymmetry: r.asymmetry.values.clone(),
        }),
        Payload::Verdicts(v) => serde_json::to_string_pretty(&VerdictDoc {
            metadata: bundle.metadata.clone(),
            verdicts: v.clone(),
        }),
    };
    let mut text = text.map_err(|e| Error::Report(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json(text: &str) -> Result<ReportBundle> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))?;
    let bad = |e: serde_json::Error| Error::Report(e.to_string());
    if value.get("grid").is_some() {
        let doc: SweepDoc = serde_json::from_value(value).map_err(bad)?;
        let n = doc.grid.len();
        let lengths_ok = doc.phases.len() == n
            && doc.asymmetry.len() == n
            && doc.branches.iter().all(|b| b.re.len() == n && b.im.len() == n);
        if !lengths_ok {
            return Err(Error::Report("arrays are not parallel to the grid".into()));
        }
        let notice = doc.metadata.asymmetry_notice.clone();
        let result = SweepResult {
            grid: doc.grid,
            branches: doc
                .branches
                .iter()
                .map(|b| b.re.iter().zip(&b.im).map(|(&x, &y)| c(x, y)).collect())
                .collect(),
            phases: doc.phases,
            exceptional_points: doc.exceptional_points,
            asymmetry: AsymmetryProfile {
                values: doc.asymmetry,
                interval: doc.metadata.asymmetry_interval.map(|[a, b]| (a, b)),
                notice,
            },
        };
        Ok(ReportBundle {
            metadata: doc.metadata,
            payload: Payload::Sweep(result),
        })
    } else {
        let doc: VerdictDoc = serde_json::from_value(value).map_err(bad)?;
        Ok(ReportBundle {
            metadata: doc.metadata,
            payload: Payload::Verdicts(doc.verdicts),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Re,
    Im,
    Both,
}

impl Component {
    fn parts(self) -> &'static [(bool, &'static str)] {
        match self {
            Component::Re => &[(true, "Re")],
            Component::Im => &[(false, "Im")],
            Component::Both => &[(true, "Re"), (false, "Im")],
        }
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let factor = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = nice_step(hi - lo);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    let values = (first..=last)
        .map(|k| {
            let v = k as f64 * step;
            if v.abs() < step * 1e-9 {
                0.0
            } else {
                v
            }
        })
        .collect();
    (values, decimals)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn quantity_symbol(q: Option<OutputQuantity>, branch: usize) -> String {
    match q {
        Some(OutputQuantity::EigenvalueSquared) => format!("λ{branch}²"),
        Some(OutputQuantity::ModulusSquared) => format!("|λ{branch}|²"),
        Some(OutputQuantity::RealPartSquared) => format!("(Re λ{branch})²"),
        _ => format!("λ{branch}"),
    }
}

/// Line plot of the sweep: one polyline per branch and selected component,
/// dashed vertical markers at exceptional points.
pub fn to_svg(bundle: &ReportBundle, which: Component) -> Result<String> {
    let r = bundle.sweep()?;
    let meta = &bundle.metadata;
    let (x_lo, x_hi) = (r.grid[0], r.grid[r.grid.len() - 1]);
    let parts = which.parts();

    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for branch in &r.branches {
        for z in branch {
            for &(is_re, _) in parts {
                let v = if is_re { z.re } else { z.im };
                y_lo = y_lo.min(v);
                y_hi = y_hi.max(v);
            }
        }
    }
    if y_hi - y_lo < 1e-12 * y_hi.abs().max(1.0) {
        y_lo -= 1.0;
        y_hi += 1.0;
    } else {
        let pad = 0.05 * (y_hi - y_lo);
        y_lo -= pad;
        y_hi += pad;
    }

    let (left, right) = (SVG_MARGIN, SVG_WIDTH - SVG_MARGIN);
    let (top, bottom) = (SVG_MARGIN, SVG_HEIGHT - SVG_MARGIN);
    let px = |t: f64| left + (t - x_lo) / (x_hi - x_lo) * (right - left);
    let py = |v: f64| bottom - (v - y_lo) / (y_hi - y_lo) * (bottom - top);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = SVG_WIDTH,
        h = SVG_HEIGHT
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#);
    let param = meta.sweep_param.clone().unwrap_or_else(|| "t".into());
    let title = match meta.output_quantity {
        Some(q) => format!("{}: {} vs {param}", meta.family, q.description()),
        None => meta.family.clone(),
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="30" text-anchor="middle" font-size="14">{}</text>"#,
        SVG_WIDTH / 2.0,
        escape(&title)
    );

    // Axes and ticks.
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{left}" y="{top}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    let (xt, xdec) = ticks(x_lo, x_hi);
    for t in xt {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{x:.3}" y1="{bottom}" x2="{x:.3}" y2="{:.3}" stroke="black"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.3}" y="{:.3}" text-anchor="middle">{t:.xdec$}</text>"#,
            bottom + 18.0
        );
    }
    let (yt, ydec) = ticks(y_lo, y_hi);
    for v in yt {
        let y = py(v);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{:.3}" y1="{y:.3}" x2="{left}" y2="{y:.3}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{v:.ydec$}</text>"#,
            left - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        SVG_HEIGHT - 20.0,
        escape(&param)
    );

    // Exceptional points.
    for &ep in &r.exceptional_points {
        let x = px(ep);
        let _ = writeln!(
            s,
            r#"<line class="ep-marker" x1="{x:.3}" y1="{top}" x2="{x:.3}" y2="{bottom}" stroke="gray" stroke-dasharray="4,4"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text class="ep-label" x="{:.3}" y="{:.3}" fill="gray">EP {}</text>"#,
            x + 3.0,
            top + 12.0,
            fmt17(ep)
        );
    }

    // Curves.
    let mut legend = Vec::new();
    for (i, branch) in r.branches.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for &(is_re, label) in parts {
            let points: Vec<String> = r
                .grid
                .iter()
                .zip(branch)
                .map(|(&t, z)| {
                    let v = if is_re { z.re } else { z.im };
                    format!("{:.3},{:.3}", px(t), py(v))
                })
                .collect();
            let dash = if is_re { "" } else { r#" stroke-dasharray="8,3""# };
            let name = format!("{label} {}", quantity_symbol(meta.output_quantity, i + 1));
            let _ = writeln!(
                s,
                r#"<polyline class="branch" data-branch="{}" data-component="{label}" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                i + 1,
                points.join(" ")
            );
            legend.push((name, color, dash));
        }
    }

    let lx = right - 130.0;
    for (k, (name, color, dash)) in legend.iter().enumerate() {
        let y = top + 18.0 + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line class="legend" x1="{lx:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="{color}" stroke-width="2"{dash}/>"#,
            lx + 24.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}">{}</text>"#,
            lx + 30.0,
            y + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
