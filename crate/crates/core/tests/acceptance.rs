//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.
//!
//! Run alone with `cargo test -p ptsym --test acceptance`.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{closed_pair, pair_distance, random_expr, uniform, C, MALFORMED_TEMPLATES};
use ptsym::eigen::{eig2_closed, eig_iterative, eigenvalues};
use ptsym::numerics::DenseMatrix;
use ptsym::report::{self, Component, ReportBundle};
use ptsym::sweep::{preset_case, run_sweep, PhaseLabel, SweepResult, SweepSpec};
use ptsym::symmetry::{
    build_c, build_c_pt, check_anti_pt_symmetry, check_linear_symmetry, check_pt_symmetry,
    SymmetryOperator,
};
use ptsym::template::{parse_expression, parse_template, Assignment, TemplateError};
use ptsym::transform::{
    build_family, canonical_s, discrepancy_report, similarity, FamilyId, HamiltonianParams,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(a: f64, b: f64, c: f64) -> HamiltonianParams {
    HamiltonianParams::new(a, b, c).unwrap()
}

fn spectrum(m: &DenseMatrix) -> Vec<C> {
    eigenvalues(m).unwrap().eigenvalues
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn eigen_solver_agreement() -> Outcome {
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let entries: Vec<C> = (0..4)
            .map(|_| C::new(uniform(&mut rng, -10.0, 10.0), uniform(&mut rng, -10.0, 10.0)))
            .collect();
        let m = DenseMatrix::new(2, 2, entries).unwrap();
        let closed = eig2_closed(&m).map_err(|e| e.to_string())?;
        let iter = eig_iterative(&m).map_err(|e| e.to_string())?;
        worst = worst.max(pair_distance(&closed.eigenvalues, &iter.eigenvalues));
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("1000 matrices, max deviation {worst:.1e}"))
}

fn original_spectrum_closed_form() -> Outcome {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b, c) = (
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
        );
        let got = spectrum(&build_family(FamilyId::HOriginal, params(a, b, c)));
        let want = closed_pair(C::new(0.0, c), a, b);
        worst = worst.max(pair_distance(&got, &want));
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("200 triples, max deviation {worst:.1e}"))
}

fn c_operators_are_involutions() -> Outcome {
    let mut rng = rng(3);
    let identity = DenseMatrix::identity(2);
    let (mut eig_dev, mut sq_dev): (f64, f64) = (0.0, 0.0);
    let mut n = 0;
    while n < 100 {
        let (a, b) = (uniform(&mut rng, -20.0, 20.0), uniform(&mut rng, -20.0, 20.0));
        if a.abs() - b.abs() < 0.5 {
            continue;
        }
        n += 1;
        for op in [build_c(a, b), build_c_pt(a, b)] {
            let op = op.map_err(|e| e.to_string())?;
            let ev = spectrum(&op.matrix);
            eig_dev = eig_dev.max(pair_distance(&ev, &[C::new(1.0, 0.0), C::new(-1.0, 0.0)]));
            let sq = op.matrix.matmul(&op.matrix).unwrap().sub(&identity).unwrap();
            sq_dev = sq_dev.max(sq.frobenius_norm());
        }
    }
    ensure(eig_dev <= 1e-12 && sq_dev <= 1e-12, || {
        format!("eigenvalue deviation {eig_dev:e}, ||C²-I|| {sq_dev:e}")
    })?;
    Ok(format!("100 pairs, eigenvalue deviation {eig_dev:.1e}, ||C²-I|| {sq_dev:.1e}"))
}

fn commutation_partners() -> Outcome {
    let mut rng = rng(4);
    let mut worst_orig: f64 = 0.0;
    let mut worst_partner: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        let (a, b, c) = (
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
        );
        if a.abs() == b.abs() {
            continue;
        }
        n += 1;
        let p = params(a, b, c);
        let cop = build_c(a, b).map_err(|e| e.to_string())?;
        let cpt = build_c_pt(a, b).map_err(|e| e.to_string())?;

        let h = build_family(FamilyId::HOriginal, p);
        let v = check_linear_symmetry(&h, &cop, 1e-12).unwrap();
        worst_orig = worst_orig.max(v.residual / h.frobenius_norm());
        ensure(v.residual <= 1e-12 * h.frobenius_norm(), || {
            format!("[H_original, C] = {:e} at ({a}, {b}, {c})", v.residual)
        })?;

        let h1 = build_family(FamilyId::H1Pt, p);
        let with_c = check_linear_symmetry(&h1, &cop, 1e-12).unwrap();
        let with_cpt = check_linear_symmetry(&h1, &cpt, 1e-12).unwrap();
        // With b != 0 exactly one of the two commutes; C is the partner.
        ensure(with_c.residual <= 1e-12 * h1.frobenius_norm(), || {
            format!("[h1_pt, C] = {:e} at ({a}, {b}, {c})", with_c.residual)
        })?;
        ensure(with_cpt.residual > 1e-6 * h1.frobenius_norm(), || {
            format!("h1_pt unexpectedly commutes with C^PT at ({a}, {b}, {c})")
        })?;
        worst_partner = worst_partner.max(with_c.residual / h1.frobenius_norm());
    }
    Ok(format!(
        "100 triples, relative residual {worst_orig:.1e}; h1_pt partner is C ({worst_partner:.1e}), not C^PT"
    ))
}

fn anti_pt_rejected_for_original() -> Outcome {
    let mut rng = rng(5);
    let p = SymmetryOperator::parity(&[1.0, -1.0]).unwrap();
    let mut n = 0;
    let mut min_margin = f64::INFINITY;
    while n < 200 {
        let (a, b, c) = (
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
        );
        if a.abs() < 1.0 {
            continue;
        }
        n += 1;
        let h = build_family(FamilyId::HOriginal, params(a, b, c));
        let v = check_anti_pt_symmetry(&h, &p, 1e-10).unwrap();
        let bound = 2.0 * 2f64.sqrt() * a.abs().min(1.0);
        ensure(!v.holds && v.residual >= bound, || {
            format!("({a}, {b}, {c}): holds={} residual {}", v.holds, v.residual)
        })?;
        min_margin = min_margin.min(v.residual - bound);
    }
    for c in [0.0, 1.0, -7.5, 20.0] {
        let h = build_family(FamilyId::HOriginal, params(0.0, 0.0, c));
        let v = check_anti_pt_symmetry(&h, &p, 1e-10).unwrap();
        ensure(v.holds && v.residual <= 1e-12, || {
            format!("a=b=0, c={c}: holds={} residual {:e}", v.holds, v.residual)
        })?;
    }
    Ok(format!("200 generic triples rejected (min margin {min_margin:.3}); a=b=0 limit holds"))
}

fn h1_pt_symmetric_on_grid() -> Outcome {
    let p = SymmetryOperator::parity(&[-1.0, 1.0]).unwrap();
    let axis: Vec<f64> = (0..21).map(|k| -10.0 + k as f64).collect();
    let mut worst: f64 = 0.0;
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                let h = build_family(FamilyId::H1Pt, params(a, b, c));
                let v = check_pt_symmetry(&h, &p, 1e-10).unwrap();
                ensure(v.holds, || format!("fails at ({a}, {b}, {c})"))?;
                worst = worst.max(v.residual);
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max residual {worst:e}"))?;
    Ok(format!("9261 grid points, max residual {worst:.1e}"))
}

fn similarity_and_discrepancy() -> Outcome {
    let mut rng = rng(7);
    let s = canonical_s();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b, c) = (
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
            uniform(&mut rng, -20.0, 20.0),
        );
        let h = build_family(FamilyId::HOriginal, params(a, b, c));
        let hs = similarity(&s, &h).unwrap();
        worst = worst.max(pair_distance(&spectrum(&hs), &spectrum(&h)));
        let report = discrepancy_report(params(a, b, c));
        ensure(!report.spectra_equal, || {
            format!("spectra_equal at c = {c} ({a}, {b})")
        })?;
        let report0 = discrepancy_report(params(a, b, 0.0));
        ensure(report0.spectra_equal, || {
            format!("spectra differ at c = 0 ({a}, {b}): {:e}", report0.spectrum_distance)
        })?;
    }
    ensure(worst <= 1e-9, || format!("similarity moved the spectrum by {worst:e}"))?;
    Ok(format!("100 triples, spectrum drift {worst:.1e}; discrepancy iff c != 0"))
}

fn run_preset(n: u32) -> (SweepSpec, SweepResult) {
    let spec = preset_case(n).unwrap();
    let result = run_sweep(&spec).unwrap();
    (spec, result)
}

fn case_presets() -> Outcome {
    let (_, r1) = run_preset(1);
    ensure(
        r1.exceptional_points.len() == 1 && (r1.exceptional_points[0] - 8.0).abs() <= 1e-6,
        || format!("case 1 EPs {:?}", r1.exceptional_points),
    )?;

    let (_, r3) = run_preset(3);
    let eps = &r3.exceptional_points;
    ensure(
        eps.len() == 2 && (eps[0] + 8.0).abs() <= 1e-6 && (eps[1] - 8.0).abs() <= 1e-6,
        || format!("case 3 EPs {eps:?}"),
    )?;

    let (_, r2) = run_preset(2);
    ensure(r2.exceptional_points.is_empty(), || {
        format!("case 2 EPs {:?}", r2.exceptional_points)
    })?;
    ensure(
        r2.branches.iter().flatten().all(|z| z.im == 0.0),
        || "case 2 has complex branch values".into(),
    )?;
    let root = 300f64.sqrt();
    let ends = [r2.branches[0][0].re, r2.branches[1][0].re];
    ensure(
        (ends[0] - (-10.0 + root)).abs() <= 1e-9 && (ends[1] - (-10.0 - root)).abs() <= 1e-9,
        || format!("case 2 endpoint values {ends:?}"),
    )?;

    let (_, r4) = run_preset(4);
    let zero = r4.grid.iter().position(|&t| t == 0.0).ok_or("b = 0 not on grid")?;
    for branch in &r4.branches {
        let z = branch[zero];
        ensure((z.re - 400.0).abs() <= 1e-9 && z.im.abs() <= 1e-9, || {
            format!("case 4 branch square at b=0 is {z}")
        })?;
    }
    let last = r4.grid.len() - 1;
    ensure(r4.grid[last] == 10.0, || "grid does not end at 10".into())?;
    let a10 = r4.asymmetry.values[last].ok_or("A(10) undefined")?;
    ensure((a10 - 692.8203).abs() <= 1e-3, || format!("A(10) = {a10}"))?;

    Ok(format!(
        "EPs {:.7} | {:.7}, {:.7}; case 2 ends {:.10}, {:.10}; A(10) = {a10:.4}",
        r1.exceptional_points[0], eps[0], eps[1], ends[0], ends[1]
    ))
}

fn phase_labels_match_regimes() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        let (spec, r) = run_preset(n);
        for (k, &t) in r.grid.iter().enumerate() {
            let values = spec.assignment_at(t);
            let (a, b) = (values["a"], values["b"]);
            let disc = a * a - b * b;
            // Grid points within rounding of an exceptional point are skipped.
            if disc.abs() <= 1e-9 * a * a {
                continue;
            }
            let want = if disc > 0.0 {
                PhaseLabel::RealSplit
            } else {
                PhaseLabel::ImaginarySplit
            };
            ensure(r.phases[k] == want, || {
                format!("case {n}, b = {t}: {} instead of {want}", r.phases[k])
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-EP grid points across the four presets"))
}

fn template_layer() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/templates");
    let mut rng = rng(10);
    for id in FamilyId::ALL {
        let text = fs::read_to_string(dir.join(format!("{}.ham", id.as_str())))
            .map_err(|e| format!("{}: {e}", id.as_str()))?;
        let t = parse_template(&text).map_err(|e| format!("{}: {e}", id.as_str()))?;
        for _ in 0..50 {
            let (a, b, c) = (
                uniform(&mut rng, -20.0, 20.0),
                uniform(&mut rng, -20.0, 20.0),
                uniform(&mut rng, -20.0, 20.0),
            );
            let values: Assignment =
                [("a", a), ("b", b), ("c", c)].map(|(k, v)| (k.to_string(), v)).into();
            let from_template = t.instantiate(&values).map_err(|e| e.to_string())?;
            let built = build_family(id, params(a, b, c));
            ensure(from_template == built, || {
                format!("{} differs from build_family at ({a}, {b}, {c})", id.as_str())
            })?;
        }
    }

    for k in 0..1000 {
        let e = random_expr(&mut rng, 6);
        let printed = e.to_string();
        let back = parse_expression(&printed).map_err(|err| format!("#{k} '{printed}': {err}"))?;
        ensure(back == e, || format!("#{k} '{printed}' reparsed to a different tree"))?;
    }

    for (label, src) in MALFORMED_TEMPLATES {
        let outcome = catch_unwind(|| parse_template(src));
        match outcome {
            Err(_) => return Err(format!("'{label}' panicked")),
            Ok(Ok(_)) => return Err(format!("'{label}' was accepted")),
            Ok(Err(
                TemplateError::Format { .. }
                | TemplateError::Expression { .. }
                | TemplateError::Undeclared { .. },
            )) => {}
            Ok(Err(e)) => return Err(format!("'{label}' error has no location: {e}")),
        }
    }
    Ok(format!(
        "4 fixtures exact, 1000 expressions round-trip, {} malformed inputs located",
        MALFORMED_TEMPLATES.len()
    ))
}

fn parse_csv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn golden_path(n: u32) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/case{n}.json"))
}

fn strip_version(json: &str) -> String {
    json.lines()
        .filter(|l| !l.trim_start().starts_with("\"tool_version\""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn output_formats() -> Outcome {
    for n in 1..=4 {
        let (spec, r) = run_preset(n);
        let bundle = ReportBundle::from_sweep(&spec, r.clone());

        let csv = report::to_csv(&bundle).map_err(|e| e.to_string())?;
        ensure(csv.lines().next() == Some(report::CSV_HEADER), || "CSV header".into())?;
        let rows = parse_csv(&csv);
        ensure(rows.len() == r.grid.len(), || format!("case {n}: {} CSV rows", rows.len()))?;
        for (k, row) in rows.iter().enumerate() {
            let num = |j: usize| row[j].parse::<f64>().map_err(|e| format!("case {n} row {k}: {e}"));
            let mut exact = num(0)? == r.grid[k];
            for (i, branch) in r.branches.iter().enumerate() {
                exact &= num(1 + 2 * i)? == branch[k].re && num(2 + 2 * i)? == branch[k].im;
            }
            exact &= row[5] == r.phases[k].as_str();
            exact &= match r.asymmetry.values[k] {
                Some(a) => num(6)? == a,
                None => row[6].is_empty(),
            };
            ensure(exact, || format!("case {n}: CSV row {k} does not round-trip"))?;
        }

        let json = report::to_json(&bundle).map_err(|e| e.to_string())?;
        let back = report::from_json(&json).map_err(|e| e.to_string())?;
        ensure(back == bundle, || format!("case {n}: JSON does not round-trip"))?;

        let golden = fs::read_to_string(golden_path(n)).map_err(|e| format!("golden case {n}: {e}"))?;
        ensure(strip_version(&golden) == strip_version(&json), || {
            format!("case {n}: JSON differs from golden file")
        })?;
    }

    let markers = |n: u32| -> Result<usize, String> {
        let (spec, r) = run_preset(n);
        let svg = report::to_svg(&ReportBundle::from_sweep(&spec, r), Component::Both)
            .map_err(|e| e.to_string())?;
        Ok(svg.matches("class=\"ep-marker\"").count())
    };
    let (m1, m3) = (markers(1)?, markers(3)?);
    ensure(m1 == 1 && m3 == 2, || format!("EP markers: case 1 {m1}, case 3 {m3}"))?;
    Ok(format!("CSV/JSON round-trip and golden match for 4 presets; EP markers {m1} and {m3}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("eigen-solver agreement", eigen_solver_agreement),
        ("H_original spectrum closed form", original_spectrum_closed_form),
        ("C and C^PT are involutions", c_operators_are_involutions),
        ("C commutation partners", commutation_partners),
        ("anti-PT rejected for H_original", anti_pt_rejected_for_original),
        ("h1_pt PT-symmetric on grid", h1_pt_symmetric_on_grid),
        ("similarity invariance and discrepancy", similarity_and_discrepancy),
        ("case presets", case_presets),
        ("phase classification", phase_labels_match_regimes),
        ("template layer", template_layer),
        ("output formats", output_formats),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
