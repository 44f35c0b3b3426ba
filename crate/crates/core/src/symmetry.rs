//! Parity, time reversal, PT and C operators, and the checks built on them.
//!
//! Time reversal is entrywise complex conjugation (`T² = 1`). An antilinear
//! operator is stored as its linear part plus a conjugation flag, so
//! `PT · H · (PT)⁻¹ = P · conj(H) · P⁻¹`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, principal_sqrt, real, ComplexScalar, DenseMatrix};

/// Default relative tolerance for symmetry verdicts.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative width of the `a² = b²` band in which C is undefined.
pub const EP_TOL: f64 = 1e-12;

/// Largest dimension for the exhaustive parity search.
pub const PARITY_SEARCH_MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryOperator {
    pub name: String,
    pub matrix: DenseMatrix,
    /// Compose with entrywise complex conjugation.
    pub antilinear: bool,
}

impl SymmetryOperator {
    /// A linear operator; the matrix must be square and invertible.
    pub fn linear(name: impl Into<String>, matrix: DenseMatrix) -> Result<Self> {
        Self::with_flag(name.into(), matrix, false)
    }

    pub fn antilinear(name: impl Into<String>, matrix: DenseMatrix) -> Result<Self> {
        Self::with_flag(name.into(), matrix, true)
    }

    fn with_flag(name: String, matrix: DenseMatrix, antilinear: bool) -> Result<Self> {
        // inverse() covers both the square and the non-singular requirement.
        matrix.inverse()?;
        Ok(SymmetryOperator {
            name,
            matrix,
            antilinear,
        })
    }

    /// Diagonal parity with the given signs, e.g. `[1, -1]`.
    pub fn parity(signs: &[f64]) -> Result<Self> {
        if signs.iter().any(|s| s.abs() != 1.0) {
            return Err(Error::InvalidArgument(format!(
                "parity entries must be ±1, got {signs:?}"
            )));
        }
        let name = format!(
            "diag({})",
            signs
                .iter()
                .map(|s| format!("{}", *s as i32))
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::linear(name, DenseMatrix::real_diag(signs)?)
    }

    pub fn identity(n: usize) -> Self {
        SymmetryOperator {
            name: "I".into(),
            matrix: DenseMatrix::identity(n),
            antilinear: false,
        }
    }

    pub fn time_reversal(n: usize) -> Self {
        SymmetryOperator {
            name: "T".into(),
            matrix: DenseMatrix::identity(n),
            antilinear: true,
        }
    }

    /// The antilinear product `P·T` of a linear parity with time reversal.
    pub fn pt(parity: &SymmetryOperator) -> Result<Self> {
        if parity.antilinear {
            return Err(Error::OperatorKind(format!(
                "{} is already antilinear",
                parity.name
            )));
        }
        Ok(SymmetryOperator {
            name: format!("{}·T", parity.name),
            matrix: parity.matrix.clone(),
            antilinear: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        if self.antilinear {
            let conj: Vec<_> = v.iter().map(|z| z.conj()).collect();
            self.matrix.apply(&conj)
        } else {
            self.matrix.apply(v)
        }
    }

    /// Applies the operator twice to `probe` and reports whether the probe
    /// comes back within `1e-10` (relative to its norm).
    pub fn is_involution_on(&self, probe: &[ComplexScalar]) -> Result<bool> {
        let twice = self.apply(&self.apply(probe)?)?;
        let norm = probe.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let diff = twice
            .iter()
            .zip(probe)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(diff <= 1e-10 * norm.max(1.0))
    }

    /// Involution check on a fixed set of probes (basis vectors plus one
    /// generic complex vector).
    pub fn is_involution(&self) -> bool {
        let n = self.dim();
        let mut probes: Vec<Vec<ComplexScalar>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| if j == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
                    .collect()
            })
            .collect();
        probes.push((0..n).map(|j| c(1.0 + j as f64, 0.5 - j as f64)).collect());
        probes
            .iter()
            .all(|p| self.is_involution_on(p).unwrap_or(false))
    }

    /// `O · H · O⁻¹`; conjugates `H` first when the operator is antilinear.
    pub fn conjugate(&self, h: &DenseMatrix) -> Result<DenseMatrix> {
        let inner = if self.antilinear { h.conj() } else { h.clone() };
        self.matrix.matmul(&inner)?.matmul(&self.matrix.inverse()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    LinearCommuting,
    PTSymmetric,
    AntiPTSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryVerdict {
    pub kind: SymmetryKind,
    pub residual: f64,
    pub holds: bool,
    /// Absolute threshold the residual was compared against.
    pub threshold: f64,
}

impl SymmetryVerdict {
    fn new(kind: SymmetryKind, residual: f64, h: &DenseMatrix, tol: f64) -> Self {
        let threshold = tol * h.frobenius_norm().max(1.0);
        SymmetryVerdict {
            kind,
            residual,
            holds: residual <= threshold,
            threshold,
        }
    }
}

pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    check_square_pair("commutator", a, b)?;
    a.matmul(b)?.sub(&b.matmul(a)?)
}

pub fn anticommutator(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    check_square_pair("anticommutator", a, b)?;
    a.matmul(b)?.add(&b.matmul(a)?)
}

fn check_square_pair(op: &'static str, a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if !a.is_square() || a.dim() != b.dim() {
        return Err(Error::shape(
            op,
            format!("{}x{} with {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    Ok(())
}

/// `‖[H, O]‖_F` against `tol · max(1, ‖H‖_F)`.
pub fn check_linear_symmetry(
    h: &DenseMatrix,
    op: &SymmetryOperator,
    tol: f64,
) -> Result<SymmetryVerdict> {
    if op.antilinear {
        return Err(Error::OperatorKind(format!(
            "check_linear_symmetry needs a linear operator, {} is antilinear",
            op.name
        )));
    }
    let residual = commutator(h, &op.matrix)?.frobenius_norm();
    Ok(SymmetryVerdict::new(SymmetryKind::LinearCommuting, residual, h, tol))
}

fn pt_image(h: &DenseMatrix, parity: &SymmetryOperator) -> Result<DenseMatrix> {
    if parity.antilinear {
        return Err(Error::OperatorKind(format!(
            "parity {} must be linear; time reversal is applied internally",
            parity.name
        )));
    }
    if !h.is_square() || h.dim() != parity.matrix.dim() {
        return Err(Error::shape(
            "pt_image",
            format!(
                "H is {}x{}, P is {}x{}",
                h.rows(),
                h.cols(),
                parity.matrix.rows(),
                parity.matrix.cols()
            ),
        ));
    }
    SymmetryOperator::pt(parity)?.conjugate(h)
}

/// PT-symmetry: `P · conj(H) · P⁻¹ = H`.
pub fn check_pt_symmetry(
    h: &DenseMatrix,
    parity: &SymmetryOperator,
    tol: f64,
) -> Result<SymmetryVerdict> {
    let residual = pt_image(h, parity)?.sub(h)?.frobenius_norm();
    Ok(SymmetryVerdict::new(SymmetryKind::PTSymmetric, residual, h, tol))
}

/// Anti-PT-symmetry: `P · conj(H) · P⁻¹ = -H`.
pub fn check_anti_pt_symmetry(
    h: &DenseMatrix,
    parity: &SymmetryOperator,
    tol: f64,
) -> Result<SymmetryVerdict> {
    let residual = pt_image(h, parity)?.add(h)?.frobenius_norm();
    Ok(SymmetryVerdict::new(SymmetryKind::AntiPTSymmetric, residual, h, tol))
}

/// Splits `H` into PT-even and PT-odd parts with respect to `parity`;
/// `even + odd = H`.
pub fn pt_decompose(
    h: &DenseMatrix,
    parity: &SymmetryOperator,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let image = pt_image(h, parity)?;
    let even = h.add(&image)?.scale(real(0.5));
    let odd = h.sub(&image)?.scale(real(0.5));
    Ok((even, odd))
}

fn c_normalization(a: f64, b: f64) -> Result<ComplexScalar> {
    let gap = a * a - b * b;
    if gap.abs() <= EP_TOL * (a * a + b * b).max(1.0) {
        return Err(Error::ExceptionalPoint { a, b, gap });
    }
    // Principal root: imaginary when a² < b².
    Ok(principal_sqrt(real(gap)))
}

/// `C = [[a, ib], [ib, -a]] / sqrt(a² - b²)`.
pub fn build_c(a: f64, b: f64) -> Result<SymmetryOperator> {
    let norm = c_normalization(a, b)?;
    let m = DenseMatrix::from_rows(&[[real(a), c(0.0, b)], [c(0.0, b), real(-a)]])?;
    SymmetryOperator::linear("C", m.scale(norm.inv()))
}

/// `C^PT = [[-a, ib], [ib, a]] / sqrt(a² - b²)`.
pub fn build_c_pt(a: f64, b: f64) -> Result<SymmetryOperator> {
    let norm = c_normalization(a, b)?;
    let m = DenseMatrix::from_rows(&[[real(-a), c(0.0, b)], [c(0.0, b), real(a)]])?;
    SymmetryOperator::linear("C_pt", m.scale(norm.inv()))
}

/// Every signed permutation matrix, permutations in lexicographic order and,
/// within each, sign patterns in binary order (bit k set = row k negated).
pub fn signed_permutations(n: usize) -> Vec<DenseMatrix> {
    let mut out = Vec::new();
    for perm in lex_permutations(n) {
        for mask in 0..(1u32 << n) {
            let mut m = vec![c(0.0, 0.0); n * n];
            for (row, &col) in perm.iter().enumerate() {
                let sign = if mask & (1 << row) != 0 { -1.0 } else { 1.0 };
                m[row * n + col] = real(sign);
            }
            out.push(DenseMatrix::new(n, n, m).expect("finite entries"));
        }
    }
    out
}

fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn describe_signed_permutation(m: &DenseMatrix) -> String {
    let n = m.rows();
    let diagonal = (0..n).all(|r| m[(r, r)].norm() == 1.0);
    if diagonal {
        let signs: Vec<String> = (0..n).map(|r| format!("{}", m[(r, r)].re as i32)).collect();
        return format!("diag({})", signs.join(","));
    }
    let rows: Vec<String> = (0..n)
        .map(|r| {
            let (col, v) = (0..n)
                .map(|k| (k, m[(r, k)]))
                .find(|(_, v)| v.norm() != 0.0)
                .expect("one nonzero per row");
            format!("{}e{}", if v.re < 0.0 { "-" } else { "+" }, col)
        })
        .collect();
    format!("perm({})", rows.join(","))
}

/// Exhaustive search over signed permutation parities. Returns every
/// candidate under which `H` is PT-symmetric or anti-PT-symmetric, one entry
/// per verdict that holds, in canonical candidate order.
pub fn search_parity(
    h: &DenseMatrix,
    tol: f64,
) -> Result<Vec<(SymmetryOperator, SymmetryVerdict)>> {
    if !h.is_square() {
        return Err(Error::shape("search_parity", "expected a square matrix"));
    }
    let n = h.rows();
    if n > PARITY_SEARCH_MAX_DIM {
        return Err(Error::SizeLimit {
            op: "search_parity",
            dim: n,
            limit: PARITY_SEARCH_MAX_DIM,
        });
    }
    let found: Vec<Vec<(SymmetryOperator, SymmetryVerdict)>> = signed_permutations(n)
        .into_par_iter()
        .map(|m| -> Result<_> {
            let op = SymmetryOperator {
                name: describe_signed_permutation(&m),
                matrix: m,
                antilinear: false,
            };
            let mut hits = Vec::new();
            for verdict in [
                check_pt_symmetry(h, &op, tol)?,
                check_anti_pt_symmetry(h, &op, tol)?,
            ] {
                if verdict.holds {
                    hits.push((op.clone(), verdict));
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}
