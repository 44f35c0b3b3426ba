//! Built-in two-level families and the similarity transform between them.
//!
//! The families:
//!
//! | id                   | matrix                                   | spectrum              |
//! |----------------------|------------------------------------------|-----------------------|
//! | `h_original`         | `[[a + ic, ib], [ib, -a + ic]]`          | `ic ± sqrt(a² - b²)`  |
//! | `h_pt_printed`       | `[[-a + c, ib], [ib, a + c]]`            | `c ± sqrt(a² - b²)`   |
//! | `h1_pt`              | `[[a + c, ib], [ib, -a + c]]`            | `c ± sqrt(a² - b²)`   |
//! | `h_similarity_exact` | `S⁻¹ · h_original · S`, `S = [[0, 1], [-i, 0]]` | same as `h_original` |
//!
//! `h_pt_printed` is *not* the image of `h_original` under `S`: the exact
//! image keeps `ic` on the diagonal, the printed form has `c`. Both are kept
//! and [`discrepancy_report`] quantifies the gap.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eigen::{coalescence_threshold, eigenvalues, paired_distance, Spectrum};
use crate::error::{Error, Result};
use crate::numerics::{c, ComplexScalar, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HamiltonianParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite parameters a={a}, b={b}, c={c}"
            )));
        }
        Ok(HamiltonianParams { a, b, c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    HOriginal,
    HPtPrinted,
    H1Pt,
    HSimilarityExact,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [
        FamilyId::HOriginal,
        FamilyId::HPtPrinted,
        FamilyId::H1Pt,
        FamilyId::HSimilarityExact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::HOriginal => "h_original",
            FamilyId::HPtPrinted => "h_pt_printed",
            FamilyId::H1Pt => "h1_pt",
            FamilyId::HSimilarityExact => "h_similarity_exact",
        }
    }

    /// Parameter names, in declaration order.
    pub fn params(self) -> &'static [&'static str] {
        &["a", "b", "c"]
    }

    /// Template-file source describing the same family.
    pub fn template_source(self) -> &'static str {
        match self {
            FamilyId::HOriginal => include_str!("../fixtures/templates/h_original.ham"),
            FamilyId::HPtPrinted => include_str!("../fixtures/templates/h_pt_printed.ham"),
            FamilyId::H1Pt => include_str!("../fixtures/templates/h1_pt.ham"),
            FamilyId::HSimilarityExact => {
                include_str!("../fixtures/templates/h_similarity_exact.ham")
            }
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown family '{s}' (expected one of h_original, h_pt_printed, h1_pt, h_similarity_exact)"
                ))
            })
    }
}

fn two_by_two(m00: ComplexScalar, m01: ComplexScalar, m10: ComplexScalar, m11: ComplexScalar) -> DenseMatrix {
    DenseMatrix::from_rows(&[[m00, m01], [m10, m11]]).expect("finite 2x2 entries")
}

pub fn build_family(id: FamilyId, p: HamiltonianParams) -> DenseMatrix {
    let HamiltonianParams { a, b, c: cc } = p;
    match id {
        FamilyId::HOriginal => two_by_two(c(a, cc), c(0.0, b), c(0.0, b), c(-a, cc)),
        FamilyId::HPtPrinted => two_by_two(c(-a + cc, 0.0), c(0.0, b), c(0.0, b), c(a + cc, 0.0)),
        FamilyId::H1Pt => two_by_two(c(a + cc, 0.0), c(0.0, b), c(0.0, b), c(-a + cc, 0.0)),
        FamilyId::HSimilarityExact => similarity(
            &canonical_s(),
            &build_family(FamilyId::HOriginal, p),
        )
        .expect("canonical S is invertible"),
    }
}

/// `S = [[0, 1], [-i, 0]]`.
pub fn canonical_s() -> DenseMatrix {
    two_by_two(c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0))
}

/// `S⁻¹ H S`.
pub fn similarity(s: &DenseMatrix, h: &DenseMatrix) -> Result<DenseMatrix> {
    if !s.is_square() || s.dim() != h.dim() {
        return Err(Error::shape(
            "similarity",
            format!(
                "S is {}x{}, H is {}x{}",
                s.rows(),
                s.cols(),
                h.rows(),
                h.cols()
            ),
        ));
    }
    s.inverse()?.matmul(h)?.matmul(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub params: HamiltonianParams,
    /// `S⁻¹ · h_original · S`.
    pub exact: DenseMatrix,
    /// The printed `h^PT` form.
    pub printed: DenseMatrix,
    pub entry_diff_norm: f64,
    pub exact_spectrum: Spectrum,
    pub printed_spectrum: Spectrum,
    pub spectrum_distance: f64,
    pub spectra_equal: bool,
}

/// Compares the exact similarity image of `h_original` with the printed
/// `h_pt_printed` family at the same parameters.
pub fn discrepancy_report(p: HamiltonianParams) -> DiscrepancyReport {
    let exact = build_family(FamilyId::HSimilarityExact, p);
    let printed = build_family(FamilyId::HPtPrinted, p);
    let entry_diff_norm = exact
        .sub(&printed)
        .expect("both families are 2x2")
        .frobenius_norm();
    let exact_spectrum = eigenvalues(&exact).expect("2x2 closed form");
    let printed_spectrum = eigenvalues(&printed).expect("2x2 closed form");
    let spectrum_distance = paired_distance(&exact_spectrum.eigenvalues, &printed_spectrum.eigenvalues);
    let scale = exact.frobenius_norm().max(printed.frobenius_norm());
    DiscrepancyReport {
        params: p,
        entry_diff_norm,
        spectra_equal: spectrum_distance <= SPECTRUM_MATCH_TOL * scale.max(1.0),
        exact,
        printed,
        exact_spectrum,
        printed_spectrum,
        spectrum_distance,
    }
}

/// Relative tolerance for declaring two spectra equal.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-9;

/// True when the two spectra agree within the coalescence threshold of `norm`
/// under the best pairing.
pub fn spectra_match(a: &Spectrum, b: &Spectrum, norm: f64) -> bool {
    paired_distance(&a.eigenvalues, &b.eigenvalues) <= coalescence_threshold(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eig2_closed;

    fn p(a: f64, b: f64, cc: f64) -> HamiltonianParams {
        HamiltonianParams::new(a, b, cc).unwrap()
    }

    #[test]
    fn original_family_entries() {
        let h = build_family(FamilyId::HOriginal, p(8.0, 2.0, -3.0));
        assert_eq!(h[(0, 0)], c(8.0, -3.0));
        assert_eq!(h[(0, 1)], c(0.0, 2.0));
        assert_eq!(h[(1, 0)], c(0.0, 2.0));
        assert_eq!(h[(1, 1)], c(-8.0, -3.0));
    }

    #[test]
    fn h1_pt_case2_endpoint() {
        let s = eig2_closed(&build_family(FamilyId::H1Pt, p(20.0, -10.0, -10.0))).unwrap();
        let r = 300f64.sqrt();
        assert!((s.eigenvalues[0] - c(-10.0 + r, 0.0)).norm() < 1e-12);
        assert!((s.eigenvalues[1] - c(-10.0 - r, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_similarity_keeps_spectrum() {
        for &(a, b, cc) in &[(8.0, 2.0, -3.0), (1.0, 5.0, 0.5), (-3.0, 3.5, 2.0)] {
            let h = eig2_closed(&build_family(FamilyId::HOriginal, p(a, b, cc))).unwrap();
            let s = eig2_closed(&build_family(FamilyId::HSimilarityExact, p(a, b, cc))).unwrap();
            assert!(paired_distance(&h.eigenvalues, &s.eigenvalues) < 1e-10);
        }
    }

    #[test]
    fn similarity_identities() {
        let h = build_family(FamilyId::HOriginal, p(8.0, 2.0, -3.0));
        assert_eq!(similarity(&DenseMatrix::identity(2), &h).unwrap(), h);
        let two = DenseMatrix::identity(2).scale(c(2.0, 0.0));
        assert_eq!(similarity(&two, &h).unwrap(), h);
        assert!(similarity(&DenseMatrix::zeros(2, 2), &h).is_err());
        assert!(similarity(&DenseMatrix::identity(3), &h).is_err());
    }

    #[test]
    fn similarity_by_s_matches_hand_computation() {
        let (a, b, cc) = (8.0, 2.0, -3.0);
        let got = similarity(&canonical_s(), &build_family(FamilyId::HOriginal, p(a, b, cc))).unwrap();
        let want = DenseMatrix::from_rows(&[[c(-a, cc), c(-b, 0.0)], [c(b, 0.0), c(a, cc)]]).unwrap();
        assert_eq!(got.normalized_zeros(), want.normalized_zeros());
    }

    #[test]
    fn canonical_s_properties() {
        let s = canonical_s();
        assert_eq!(s.det().unwrap(), c(0.0, 1.0));
        let s2 = s.matmul(&s).unwrap();
        assert_eq!(s2, DenseMatrix::identity(2).scale(c(0.0, -1.0)));
        let s4 = s2.matmul(&s2).unwrap();
        assert_eq!(s4, DenseMatrix::identity(2).scale(c(-1.0, 0.0)));
        let inv = DenseMatrix::from_rows(&[[c(0., 0.), c(0., 1.)], [c(1., 0.), c(0., 0.)]]).unwrap();
        assert_eq!(s.inverse().unwrap(), inv);
    }

    #[test]
    fn discrepancy_is_visible_when_c_nonzero() {
        let r = discrepancy_report(p(8.0, 2.0, -3.0));
        assert!(!r.spectra_equal);
        assert!(r.entry_diff_norm > 0.0);
        let root = 60f64.sqrt();
        let exact: Vec<_> = vec![c(root, -3.0), c(-root, -3.0)];
        let printed: Vec<_> = vec![c(-3.0 + root, 0.0), c(-3.0 - root, 0.0)];
        assert!(paired_distance(&r.exact_spectrum.eigenvalues, &exact) < 1e-12);
        assert!(paired_distance(&r.printed_spectrum.eigenvalues, &printed) < 1e-12);
    }

    #[test]
    fn discrepancy_vanishes_spectrally_at_c_zero() {
        for &(a, b) in &[(8.0, 2.0), (1.0, 4.0), (0.0, 0.0)] {
            assert!(discrepancy_report(p(a, b, 0.0)).spectra_equal);
        }
    }

    #[test]
    fn family_ids_parse() {
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
        }
        assert!("h2".parse::<FamilyId>().is_err());
    }

    #[test]
    fn params_must_be_finite() {
        assert!(HamiltonianParams::new(f64::NAN, 0.0, 0.0).is_err());
    }
}
