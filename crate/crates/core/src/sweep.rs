//! One-parameter sweeps: branch-tracked eigenvalue curves, exceptional
//! points, split-type phase labels and the mirror asymmetry metric.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{canonical_cmp, coalescence_threshold, eigenvalues, Spectrum, COALESCENCE_TOL};
use crate::error::{Error, Result};
use crate::numerics::{real, ComplexScalar, DenseMatrix};
use crate::template::{Assignment, HamiltonianTemplate};
use crate::transform::{build_family, FamilyId, HamiltonianParams};

/// Bisection width used by [`run_sweep`] when refining exceptional points.
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

/// Grid size of the preset cases.
pub const DEFAULT_STEPS: usize = 1001;

const MAX_REFINE_ITERS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySource {
    Builtin(FamilyId),
    Template(Arc<HamiltonianTemplate>),
}

impl FamilySource {
    pub fn params(&self) -> Vec<String> {
        match self {
            FamilySource::Builtin(id) => id.params().iter().map(|s| s.to_string()).collect(),
            FamilySource::Template(t) => t.params().to_vec(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FamilySource::Builtin(id) => id.as_str().to_string(),
            FamilySource::Template(t) => format!("template:{}", t.name()),
        }
    }

    pub fn instantiate(&self, assignment: &Assignment) -> Result<DenseMatrix> {
        match self {
            FamilySource::Builtin(id) => {
                let get = |k: &str| {
                    assignment.get(k).copied().ok_or_else(|| {
                        Error::InvalidArgument(format!("no value for parameter '{k}'"))
                    })
                };
                let p = HamiltonianParams::new(get("a")?, get("b")?, get("c")?)?;
                Ok(build_family(*id, p))
            }
            FamilySource::Template(t) => Ok(t.instantiate(assignment)?),
        }
    }
}

impl From<FamilyId> for FamilySource {
    fn from(id: FamilyId) -> Self {
        FamilySource::Builtin(id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    Const(f64),
    /// Follows the value of the named sweep parameter (`c = b`).
    Alias(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputQuantity {
    /// λ
    Eigenvalue,
    /// λ², real and imaginary parts reported separately.
    EigenvalueSquared,
    /// |λ|²
    ModulusSquared,
    /// (Re λ)²
    RealPartSquared,
}

impl OutputQuantity {
    pub fn apply(self, z: ComplexScalar) -> ComplexScalar {
        match self {
            OutputQuantity::Eigenvalue => z,
            OutputQuantity::EigenvalueSquared => z * z,
            OutputQuantity::ModulusSquared => real(z.norm_sqr()),
            OutputQuantity::RealPartSquared => real(z.re * z.re),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutputQuantity::Eigenvalue => "eig",
            OutputQuantity::EigenvalueSquared => "eig2",
            OutputQuantity::ModulusSquared => "abs2",
            OutputQuantity::RealPartSquared => "re2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            OutputQuantity::Eigenvalue => "eigenvalue λ",
            OutputQuantity::EigenvalueSquared => "squared eigenvalue λ² (complex square, Re and Im reported separately)",
            OutputQuantity::ModulusSquared => "squared modulus |λ|²",
            OutputQuantity::RealPartSquared => "squared real part (Re λ)²",
        }
    }
}

impl fmt::Display for OutputQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OutputQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eig" => Ok(OutputQuantity::Eigenvalue),
            "eig2" => Ok(OutputQuantity::EigenvalueSquared),
            "abs2" => Ok(OutputQuantity::ModulusSquared),
            "re2" => Ok(OutputQuantity::RealPartSquared),
            other => Err(Error::InvalidArgument(format!(
                "unknown quantity '{other}' (expected eig, eig2, abs2 or re2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: FamilySource,
    pub sweep_param: String,
    pub range: (f64, f64),
    pub steps: usize,
    pub bindings: BTreeMap<String, Binding>,
    pub quantity: OutputQuantity,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSweep(msg));
        let (lo, hi) = self.range;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return bad(format!("range [{lo}, {hi}] must be finite with lo < hi"));
        }
        if self.steps < 2 {
            return bad(format!("steps = {} (need at least 2)", self.steps));
        }
        let params = self.family.params();
        if !params.contains(&self.sweep_param) {
            return bad(format!(
                "sweep parameter '{}' is not a parameter of {}",
                self.sweep_param,
                self.family.label()
            ));
        }
        if self.bindings.contains_key(&self.sweep_param) {
            return bad(format!(
                "'{}' is swept and cannot also be bound",
                self.sweep_param
            ));
        }
        for (name, binding) in &self.bindings {
            if !params.contains(name) {
                return bad(format!("'{name}' is not a parameter of {}", self.family.label()));
            }
            match binding {
                Binding::Const(v) if !v.is_finite() => {
                    return bad(format!("constant for '{name}' is not finite"));
                }
                Binding::Alias(target) if *target != self.sweep_param => {
                    return bad(format!(
                        "alias {name}={target} must refer to the sweep parameter '{}'",
                        self.sweep_param
                    ));
                }
                _ => {}
            }
        }
        if let Some(p) = params
            .iter()
            .find(|p| **p != self.sweep_param && !self.bindings.contains_key(*p))
        {
            return bad(format!("parameter '{p}' is not bound"));
        }
        Ok(())
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.range;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    hi
                } else {
                    lo + (hi - lo) * (k as f64) / last
                }
            })
            .collect()
    }

    pub fn assignment_at(&self, t: f64) -> Assignment {
        let mut out = Assignment::new();
        out.insert(self.sweep_param.clone(), t);
        for (name, binding) in &self.bindings {
            let v = match binding {
                Binding::Const(v) => *v,
                Binding::Alias(_) => t,
            };
            out.insert(name.clone(), v);
        }
        out
    }

    pub fn matrix_at(&self, t: f64) -> Result<DenseMatrix> {
        self.family.instantiate(&self.assignment_at(t))
    }

    fn evaluate(&self, t: f64) -> Result<PointEval> {
        let m = self.matrix_at(t)?;
        let spectrum = eigenvalues(&m)?;
        Ok(PointEval {
            norm: m.frobenius_norm(),
            spectrum,
        })
    }

    fn evaluate_grid(&self, grid: &[f64]) -> Result<Vec<PointEval>> {
        grid.par_iter()
            .enumerate()
            .map(|(index, &t)| {
                self.evaluate(t).map_err(|e| Error::GridPoint {
                    index,
                    t,
                    source: Box::new(e),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct PointEval {
    spectrum: Spectrum,
    norm: f64,
}

impl PointEval {
    fn threshold(&self) -> f64 {
        coalescence_threshold(self.norm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseLabel {
    RealSplit,
    ImaginarySplit,
    Degenerate,
    Mixed,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::RealSplit => "RealSplit",
            PhaseLabel::ImaginarySplit => "ImaginarySplit",
            PhaseLabel::Degenerate => "Degenerate",
            PhaseLabel::Mixed => "Mixed",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RealSplit" => Ok(PhaseLabel::RealSplit),
            "ImaginarySplit" => Ok(PhaseLabel::ImaginarySplit),
            "Degenerate" => Ok(PhaseLabel::Degenerate),
            "Mixed" => Ok(PhaseLabel::Mixed),
            other => Err(Error::InvalidArgument(format!("unknown phase '{other}'"))),
        }
    }
}

fn classify_pair(d: ComplexScalar, tol: f64) -> PhaseLabel {
    let size = d.norm();
    if size <= tol {
        PhaseLabel::Degenerate
    } else if d.im.abs() <= tol * size {
        PhaseLabel::RealSplit
    } else if d.re.abs() <= tol * size {
        PhaseLabel::ImaginarySplit
    } else {
        PhaseLabel::Mixed
    }
}

/// Labels the split `λ₁ - λ₂`. For more than two eigenvalues each pair is
/// labelled and the majority wins; a tie gives `Mixed`.
pub fn classify_phase(s: &Spectrum, tol: f64) -> PhaseLabel {
    let ev = &s.eigenvalues;
    match ev.len() {
        0 | 1 => PhaseLabel::Degenerate,
        2 => classify_pair(ev[0] - ev[1], tol),
        n => {
            let mut counts = [0usize; 4];
            for i in 0..n {
                for j in i + 1..n {
                    counts[classify_pair(ev[i] - ev[j], tol) as usize] += 1;
                }
            }
            let best = *counts.iter().max().unwrap();
            let winners: Vec<usize> = (0..4).filter(|&k| counts[k] == best).collect();
            match winners.as_slice() {
                [0] => PhaseLabel::RealSplit,
                [1] => PhaseLabel::ImaginarySplit,
                [2] => PhaseLabel::Degenerate,
                _ => PhaseLabel::Mixed,
            }
        }
    }
}

/// Greedy nearest-neighbour assignment of `next` to the branches in `prev`.
/// Returns `next` reordered so that entry `i` continues branch `i`.
///
/// When the closest pair is tied, each tied opening is completed greedily
/// and the completion with the smallest total displacement wins; remaining
/// ties keep the earliest candidate. Branches that coincide in `prev` (an
/// exceptional point on the grid) are indistinguishable, so they receive
/// their matched values in canonical order.
pub fn match_branches(prev: &[ComplexScalar], next: &[ComplexScalar]) -> Vec<ComplexScalar> {
    let n = prev.len();
    debug_assert_eq!(n, next.len());
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let complete = |first: (usize, usize)| -> (f64, Vec<usize>) {
        let mut target = vec![usize::MAX; n];
        let mut used = vec![false; n];
        target[first.0] = first.1;
        used[first.1] = true;
        let mut total = (prev[first.0] - next[first.1]).norm();
        for &(d, i, j) in &pairs {
            if target[i] == usize::MAX && !used[j] {
                target[i] = j;
                used[j] = true;
                total += d;
            }
        }
        (total, target)
    };

    let best_d = pairs[0].0;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for &(_, i, j) in pairs.iter().take_while(|p| p.0 == best_d) {
        let candidate = complete((i, j));
        if best.as_ref().map_or(true, |b| candidate.0 < b.0) {
            best = Some(candidate);
        }
    }
    let (_, mut target) = best.expect("at least one pair");

    let scale = prev.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let mut grouped = vec![false; n];
    for i in 0..n {
        if grouped[i] {
            continue;
        }
        let group: Vec<usize> = (i..n)
            .filter(|&k| !grouped[k] && (prev[k] - prev[i]).norm() <= COALESCENCE_TOL * scale)
            .collect();
        if group.len() > 1 {
            let mut values: Vec<usize> = group.iter().map(|&k| target[k]).collect();
            values.sort_by(|&x, &y| canonical_cmp(&next[x], &next[y]));
            for (&k, j) in group.iter().zip(values) {
                target[k] = j;
                grouped[k] = true;
            }
        }
    }
    target.into_iter().map(|j| next[j]).collect()
}

/// Continuity tracking over a whole grid of spectra.
pub fn track_branches(points: &[Vec<ComplexScalar>]) -> Vec<Vec<ComplexScalar>> {
    let mut out: Vec<Vec<ComplexScalar>> = Vec::with_capacity(points.len());
    for p in points {
        let row = match out.last() {
            None => p.clone(),
            Some(prev) => match_branches(prev, p),
        };
        out.push(row);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryProfile {
    /// One entry per grid point; `None` outside the mirrored interval.
    pub values: Vec<Option<f64>>,
    /// Interval `[-m, m]` on which mirror points exist.
    pub interval: Option<(f64, f64)>,
    pub notice: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    /// `branches[i][k]`: output quantity of branch `i` at grid point `k`.
    pub branches: Vec<Vec<ComplexScalar>>,
    pub phases: Vec<PhaseLabel>,
    pub exceptional_points: Vec<f64>,
    pub asymmetry: AsymmetryProfile,
}

impl SweepResult {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let grid = spec.grid();
    let evals = spec.evaluate_grid(&grid)?;

    let raw: Vec<Vec<ComplexScalar>> = evals.iter().map(|e| e.spectrum.eigenvalues.clone()).collect();
    // Tracking happens on the eigenvalues themselves; the output quantity is
    // applied afterwards so that e.g. crossings of λ² do not swap branches.
    let tracked = track_branches(&raw);
    let n_branches = raw[0].len();
    let branches: Vec<Vec<ComplexScalar>> = (0..n_branches)
        .map(|i| tracked.iter().map(|row| spec.quantity.apply(row[i])).collect())
        .collect();
    let phases = evals
        .iter()
        .map(|e| classify_phase(&e.spectrum, e.threshold()))
        .collect();
    let exceptional_points = locate_exceptional_points(spec, &grid, &evals, DEFAULT_REFINE_TOL)?;

    let mut result = SweepResult {
        grid,
        branches,
        phases,
        exceptional_points,
        asymmetry: AsymmetryProfile {
            values: Vec::new(),
            interval: None,
            notice: None,
        },
    };
    result.asymmetry = asymmetry_metric(&result);
    Ok(result)
}

/// Closest eigenvalue pair `(gap, d²)` with `d = λᵢ - λⱼ`.
fn closest_pair(s: &Spectrum) -> (f64, ComplexScalar) {
    let ev = &s.eigenvalues;
    let mut best = (f64::INFINITY, real(0.0));
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            let d = ev[i] - ev[j];
            if d.norm() < best.0 {
                best = (d.norm(), d * d);
            }
        }
    }
    best
}

/// Locates parameter values where eigenvalues coalesce.
///
/// Three kinds of candidate are considered: grid points already degenerate
/// within the coalescence threshold, intervals where `Re(d²)` of the closest
/// pair changes sign (real split turning imaginary, refined by bisection),
/// and local minima of the gap that touch zero without a sign change
/// (refined by golden-section search). Results are sorted and deduplicated
/// within `refine_tol`.
pub fn find_exceptional_points(spec: &SweepSpec, refine_tol: f64) -> Result<Vec<f64>> {
    spec.validate()?;
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "refinement tolerance must be positive, got {refine_tol}"
        )));
    }
    let grid = spec.grid();
    let evals = spec.evaluate_grid(&grid)?;
    locate_exceptional_points(spec, &grid, &evals, refine_tol)
}

fn locate_exceptional_points(
    spec: &SweepSpec,
    grid: &[f64],
    evals: &[PointEval],
    refine_tol: f64,
) -> Result<Vec<f64>> {
    let n = grid.len();
    if evals[0].spectrum.len() < 2 {
        return Ok(Vec::new());
    }
    let pairs: Vec<(f64, ComplexScalar)> = evals.iter().map(|e| closest_pair(&e.spectrum)).collect();
    let hit: Vec<bool> = (0..n).map(|k| pairs[k].0 <= evals[k].threshold()).collect();
    let sigma = |k: usize| pairs[k].1.re;
    let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;

    let mut found: Vec<f64> = (0..n).filter(|&k| hit[k]).map(|k| grid[k]).collect();

    let mut sign_change = vec![false; n - 1];
    for k in 0..n - 1 {
        if hit[k] || hit[k + 1] || sigma(k) * sigma(k + 1) >= 0.0 {
            continue;
        }
        sign_change[k] = true;
        let (t, d2) = bisect_sign(spec, grid[k], grid[k + 1], sigma(k), refine_tol)?;
        let slope = (sigma(k).abs() + sigma(k + 1).abs()) / h;
        let bound = 4.0 * slope * refine_tol + evals[k].threshold().powi(2);
        if d2.norm() <= bound {
            found.push(t);
        }
    }

    for k in 1..n - 1 {
        if hit[k] || sign_change[k - 1] || sign_change[k] {
            continue;
        }
        let (g_prev, g, g_next) = (pairs[k - 1].0, pairs[k].0, pairs[k + 1].0);
        let is_min = g <= g_prev && g <= g_next && (g < g_prev || g < g_next);
        if !is_min {
            continue;
        }
        let (t, gap) = golden_min(spec, grid[k - 1], grid[k + 1], refine_tol)?;
        let lipschitz = (g_prev - g).abs().max((g_next - g).abs()) / h;
        if gap <= evals[k].threshold().max(2.0 * lipschitz * refine_tol) {
            found.push(t);
        }
    }

    found.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(found.len());
    for t in found {
        if out.last().map_or(true, |&last| t - last > refine_tol) {
            out.push(t);
        }
    }
    Ok(out)
}

fn gap_at(spec: &SweepSpec, t: f64) -> Result<(f64, ComplexScalar)> {
    Ok(closest_pair(&spec.evaluate(t)?.spectrum))
}

/// Bisection on `Re(d²)` over `[lo, hi]`, which brackets a sign change.
fn bisect_sign(
    spec: &SweepSpec,
    mut lo: f64,
    mut hi: f64,
    sigma_lo: f64,
    tol: f64,
) -> Result<(f64, ComplexScalar)> {
    let positive_lo = sigma_lo > 0.0;
    for _ in 0..MAX_REFINE_ITERS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (_, d2) = gap_at(spec, mid)?;
        if d2.re == 0.0 {
            return Ok((mid, d2));
        }
        if (d2.re > 0.0) == positive_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((mid, gap_at(spec, mid)?.1))
}

/// Golden-section minimisation of the closest-pair gap.
fn golden_min(spec: &SweepSpec, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = gap_at(spec, x1)?.0;
    let mut f2 = gap_at(spec, x2)?.0;
    for _ in 0..MAX_REFINE_ITERS {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = gap_at(spec, x1)?.0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = gap_at(spec, x2)?.0;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((t, gap_at(spec, t)?.0))
}

/// Value of a grid-sampled curve at `s`; exact grid values are used when `s`
/// is within `1e-9` of a grid spacing of a node, linear interpolation
/// otherwise.
fn sample(grid: &[f64], values: &[ComplexScalar], s: f64) -> ComplexScalar {
    let n = grid.len();
    let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    let snap = 1e-9 * h;
    let j = grid.partition_point(|&t| t <= s).saturating_sub(1).min(n - 2);
    let (t0, t1) = (grid[j], grid[j + 1]);
    if (s - t0).abs() <= snap {
        values[j]
    } else if (s - t1).abs() <= snap {
        values[j + 1]
    } else {
        let w = (s - t0) / (t1 - t0);
        values[j] * (1.0 - w) + values[j + 1] * w
    }
}

/// `A(t) = max_i |Re qᵢ(t) - Re qᵢ(-t)| + |Im qᵢ(t) - Im qᵢ(-t)|` on the
/// largest interval `[-m, m]` inside the sweep range; `None` elsewhere.
pub fn asymmetry_metric(result: &SweepResult) -> AsymmetryProfile {
    let grid = &result.grid;
    let n = grid.len();
    let (lo, hi) = (grid[0], grid[n - 1]);
    if !(lo < 0.0 && hi > 0.0) {
        return AsymmetryProfile {
            values: vec![None; n],
            interval: None,
            notice: Some(format!(
                "range [{lo}, {hi}] does not straddle zero; no mirror points, asymmetry undefined"
            )),
        };
    }
    let m = (-lo).min(hi);
    let h = (hi - lo) / (n - 1) as f64;
    let values = grid
        .iter()
        .map(|&t| {
            if t.abs() > m + 1e-9 * h {
                return None;
            }
            let a = result
                .branches
                .iter()
                .map(|branch| {
                    let here = sample(grid, branch, t);
                    let mirror = sample(grid, branch, -t);
                    (here.re - mirror.re).abs() + (here.im - mirror.im).abs()
                })
                .fold(0.0, f64::max);
            Some(a)
        })
        .collect();
    let notice = (m < (-lo).max(hi)).then(|| {
        format!("asymmetry restricted to the mirrored sub-interval [{}, {m}]", -m)
    });
    AsymmetryProfile {
        values,
        interval: Some((-m, m)),
        notice,
    }
}

/// The four preset sweeps, on the `h1_pt` family.
pub fn preset_case(n: u32) -> Result<SweepSpec> {
    preset_case_with_family(n, FamilyId::H1Pt)
}

pub fn preset_case_with_family(n: u32, family: FamilyId) -> Result<SweepSpec> {
    let konst = |v: f64| Binding::Const(v);
    let alias = || Binding::Alias("b".into());
    let (range, a, c, quantity) = match n {
        1 => ((0.0, 10.0), 8.0, konst(-3.0), OutputQuantity::Eigenvalue),
        2 => ((-10.0, 0.0), 20.0, alias(), OutputQuantity::Eigenvalue),
        3 => ((-10.0, 10.0), 8.0, alias(), OutputQuantity::Eigenvalue),
        4 => ((-10.0, 10.0), 20.0, alias(), OutputQuantity::EigenvalueSquared),
        other => return Err(Error::UnknownCase(other)),
    };
    let mut bindings = BTreeMap::new();
    bindings.insert("a".to_string(), konst(a));
    bindings.insert("c".to_string(), c);
    Ok(SweepSpec {
        family: FamilySource::Builtin(family),
        sweep_param: "b".into(),
        range,
        steps: DEFAULT_STEPS,
        bindings,
        quantity,
    })
}
