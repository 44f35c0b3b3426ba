//! Eigenvalues of small complex matrices.
//!
//! Two independent routes: [`eig2_closed`] is the quadratic formula for 2x2
//! matrices, [`eig_iterative`] runs Householder reduction to Hessenberg form
//! followed by Wilkinson-shifted QR sweeps. The iterative solver never falls
//! back on the closed form, so the two can check each other.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, principal_sqrt, ComplexScalar, DenseMatrix};

/// Relative gap below which two eigenvalues count as coalesced.
pub const COALESCENCE_TOL: f64 = 1e-8;

/// Largest dimension accepted by [`eig_iterative`].
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<ComplexScalar>,
    pub degenerate: bool,
}

impl Spectrum {
    /// Sorts `values` into canonical order and sets the degeneracy flag using
    /// the coalescence threshold for a matrix of Frobenius norm `norm`.
    pub fn from_values(mut values: Vec<ComplexScalar>, norm: f64) -> Self {
        sort_canonical(&mut values);
        let degenerate = values.len() >= 2 && min_gap(&values) <= coalescence_threshold(norm);
        Spectrum {
            eigenvalues: values,
            degenerate,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> ComplexScalar {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> ComplexScalar {
        self.eigenvalues.iter().product()
    }
}

pub fn coalescence_threshold(norm: f64) -> f64 {
    COALESCENCE_TOL * norm.max(1.0)
}

/// Canonical order: real part descending, then imaginary part descending.
pub fn canonical_cmp(x: &ComplexScalar, y: &ComplexScalar) -> Ordering {
    y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im))
}

pub fn sort_canonical(values: &mut [ComplexScalar]) {
    // total_cmp separates -0.0 from +0.0; fold them first.
    for z in values.iter_mut() {
        if z.re == 0.0 {
            z.re = 0.0;
        }
        if z.im == 0.0 {
            z.im = 0.0;
        }
    }
    values.sort_by(canonical_cmp);
}

fn min_gap(values: &[ComplexScalar]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Minimum pairwise distance between eigenvalues.
pub fn spectral_gap(s: &Spectrum) -> f64 {
    if s.len() < 2 {
        return 0.0;
    }
    min_gap(&s.eigenvalues)
}

/// Closed-form eigenvalues of a 2x2 matrix:
/// `tr/2 ± sqrt(((m00 - m11)/2)^2 + m01*m10)`, principal root.
pub fn eig2_closed(m: &DenseMatrix) -> Result<Spectrum> {
    if m.dim() != (2, 2) {
        return Err(Error::shape(
            "eig2_closed",
            format!("expected 2x2, got {}x{}", m.rows(), m.cols()),
        ));
    }
    let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_trace = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let root = principal_sqrt(half_diff * half_diff + b * cc);
    Ok(Spectrum::from_values(
        vec![half_trace + root, half_trace - root],
        m.frobenius_norm(),
    ))
}

/// Eigenvalues via Hessenberg reduction and shifted QR iteration.
///
/// Gives up after `100 * N^2` QR sweeps.
pub fn eig_iterative(m: &DenseMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::shape(
            "eig_iterative",
            format!("expected a square matrix, got {}x{}", m.rows(), m.cols()),
        ));
    }
    let n = m.rows();
    if n > MAX_DIM {
        return Err(Error::SizeLimit {
            op: "eig_iterative",
            dim: n,
            limit: MAX_DIM,
        });
    }
    let mut h: Vec<Vec<ComplexScalar>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    hessenberg(&mut h);
    let values = hessenberg_qr(&mut h, 100 * n * n)?;
    Ok(Spectrum::from_values(values, m.frobenius_norm()))
}

/// Dispatches to the closed form for 2x2 input and the iterative solver
/// otherwise.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Spectrum> {
    if m.dim() == (2, 2) {
        eig2_closed(m)
    } else {
        eig_iterative(m)
    }
}

fn hessenberg(h: &mut [Vec<ComplexScalar>]) {
    let n = h.len();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm = (k + 1..n).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            c(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * alpha_norm;
        let mut v: Vec<ComplexScalar> = (k + 1..n).map(|i| h[i][k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // Left: rows k+1.., H <- (I - 2 v v*) H
        for j in 0..n {
            let dot: ComplexScalar = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * h[k + 1 + t][j])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                h[k + 1 + t][j] -= *vt * dot * 2.0;
            }
        }
        // Right: columns k+1.., H <- H (I - 2 v v*)
        for row in h.iter_mut() {
            let dot: ComplexScalar = v
                .iter()
                .enumerate()
                .map(|(t, vt)| row[k + 1 + t] * vt)
                .sum();
            for (t, vt) in v.iter().enumerate() {
                row[k + 1 + t] -= dot * vt.conj() * 2.0;
            }
        }
        for row in h.iter_mut().skip(k + 2) {
            row[k] = c(0.0, 0.0);
        }
    }
}

fn hessenberg_qr(h: &mut [Vec<ComplexScalar>], max_sweeps: usize) -> Result<Vec<ComplexScalar>> {
    let n = h.len();
    let mut eig = vec![c(0.0, 0.0); n];
    let norm = h
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let eps = f64::EPSILON;
    let mut sweeps = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let mut scale = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if scale == 0.0 {
                scale = norm;
            }
            if h[lo][lo - 1].norm() <= eps * scale {
                h[lo][lo - 1] = c(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(Error::Convergence { iterations: max_sweeps });
        }

        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[hi][hi] + c(0.75 * h[hi][hi - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        for k in lo..=hi {
            h[k][k] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = x.norm().hypot(y.norm());
            let (cs, sn) = if r == 0.0 {
                (c(1.0, 0.0), c(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let (h1, h2) = (h[k][j], h[k + 1][j]);
                h[k][j] = cs.conj() * h1 + sn.conj() * h2;
                h[k + 1][j] = -sn * h1 + cs * h2;
            }
            rotations.push((cs, sn));
        }
        for (offset, &(cs, sn)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for row in h.iter_mut().take((k + 1).min(hi) + 1).skip(lo) {
                let (h1, h2) = (row[k], row[k + 1]);
                row[k] = h1 * cs + h2 * sn;
                row[k + 1] = -h1 * sn.conj() + h2 * cs.conj();
            }
        }
        for k in lo..=hi {
            h[k][k] += shift;
        }
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(
    a: ComplexScalar,
    b: ComplexScalar,
    cc: ComplexScalar,
    d: ComplexScalar,
) -> ComplexScalar {
    let half_trace = (a + d) * 0.5;
    let root = principal_sqrt(((a - d) * 0.5).powi(2) + b * cc);
    let (m1, m2) = (half_trace + root, half_trace - root);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Largest eigenvalue mismatch under the best one-to-one pairing of the two
/// spectra (minimising the worst mismatch). Brute force over permutations;
/// fine for N <= 8.
pub fn paired_distance(a: &[ComplexScalar], b: &[ComplexScalar]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let worst = p
            .iter()
            .enumerate()
            .map(|(i, &j)| (a[i] - b[j]).norm())
            .fold(0.0, f64::max);
        best = best.min(worst);
    });
    best
}

pub(crate) fn permute(perm: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}
