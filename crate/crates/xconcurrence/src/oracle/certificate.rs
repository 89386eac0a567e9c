//! Constructive biseparability certificates.
//!
//! The formula side of this crate declares an X-form state biseparable when
//! `|z_i| <= w_i` holds for every pair. This module provides the matching
//! constructive evidence: an explicit decomposition of the state into
//! weighted parts, each supported on at most two anti-diagonal pairs and
//! each manifestly biseparable (its own two-pair concurrence is zero). An
//! independent checker can verify such a [`Certificate`] by re-adding the
//! parts and testing each one, without trusting the concurrence formula.
//!
//! The construction sorts pairs by their root product `r_i = sqrt(a_i b_i)`
//! and dispatches on the dominant pair (index 1 after sorting, cross sum
//! `w_1 = sum of the other r_j`):
//!
//! * `|z_1| > w_1`: the state is entangled. Every other pair is matched
//!   against a slice of the dominant pair sized to cancel exactly
//!   (`|z| = r` on both sides), and what remains of the dominant pair is an
//!   [`Evidence::EntangledCore`] whose coherence is exactly half the
//!   state's concurrence. The certificate then documents entanglement
//!   rather than biseparability.
//! * `r_1 >= w_1`: the dominant pair is split across the others in
//!   proportion `T_i = r_i / w_1`; every piece satisfies both two-pair
//!   inequalities outright. Terminal.
//! * `r_1 < w_1`: no pair dominates. A fraction `t = w_1 / (w_1 + r_1)` of
//!   the dominant pair is paired with a fraction `r = 1 - t` of the others
//!   (chosen so matched pieces have equal root products), and the loop
//!   re-sorts the remainder, whose trace contracts geometrically. Stops
//!   when the remainder drops below `tol` or after `max_iter` splits; an
//!   unfinished run is reported with `complete = false` and the remainder
//!   in `residual`, never silently.
//!
//! Pairs with a zero root product cannot absorb coherence and are emitted
//! up front as [`Evidence::Diagonal`] parts.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::xmatrix::{sorted_sum, PairEntry};
use crate::{Error, Result, XMatrix};

/// Why a part is (or is not) biseparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Single pair with no coherence; a mixture of basis states.
    Diagonal,
    /// Two pairs whose coherences are covered by the partner's root
    /// product, so the piece's own concurrence is zero.
    PairedZero,
    /// Remainder of the dominant pair carrying the uncancelled coherence;
    /// present exactly when the input state is genuinely entangled.
    EntangledCore,
}

/// One weighted piece of the decomposition. `entries` maps 1-based pair
/// indices of the original state to sub-blocks; their traces sum to
/// `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificatePart {
    pub weight: f64,
    pub entries: Vec<(usize, PairEntry)>,
    pub evidence: Evidence,
}

impl CertificatePart {
    /// Smallest eigenvalue across the part's 2x2 blocks; nonnegative (up
    /// to rounding) iff the part is a valid unnormalized state.
    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, e)| e.min_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    }

    /// Concurrence of the part normalized to unit trace. Zero for every
    /// part the construction labels biseparable.
    // negated comparison, not `<= 0.0`: a NaN weight must also bail out
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn concurrence(&self) -> f64 {
        if !(self.weight > 0.0) {
            return 0.0;
        }
        let roots: Vec<f64> = self.entries.iter().map(|(_, e)| e.root_product()).collect();
        let s = sorted_sum(&roots);
        let excess = self
            .entries
            .iter()
            .zip(&roots)
            .map(|((_, e), &r)| e.z.norm() - (s - r))
            .fold(f64::NEG_INFINITY, f64::max);
        (2.0 * excess / self.weight).max(0.0)
    }

    /// View the normalized part as a two-qubit X-matrix (first entry on
    /// the outer pair, second on the inner), suitable for independent
    /// checks through the spin-flip concurrence.
    // negated comparison, not `<= 0.0`: a NaN weight must also bail out
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn as_two_qubit(&self) -> Result<XMatrix> {
        if self.entries.len() > 2 {
            return Err(Error::NotTwoPairSupport {
                pair: self.entries[2].0,
            });
        }
        if !(self.weight > 0.0) {
            return Err(Error::Domain("part has no weight to normalize".into()));
        }
        let inv = 1.0 / self.weight;
        let mut pairs = vec![PairEntry::ZERO; 2];
        for (slot, (_, e)) in self.entries.iter().enumerate() {
            pairs[slot] = e.scaled(inv);
        }
        XMatrix::with_tolerance(2, pairs, 1e-12)
    }
}

/// Decomposition of an X-form state into parts with two-pair support.
///
/// `complete` records whether the remainder fell below the tolerance; the
/// run's control flow is exposed through `iterations` (number of
/// contraction splits), `case_trace` (remainder trace before each loop
/// pass, strictly decreasing), and `contraction_violations` (passes where
/// the cross sum exceeded three times the dominant root, the slow-shrink
/// regime).
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub n_qubits: u32,
    pub tol: f64,
    pub parts: Vec<CertificatePart>,
    pub residual: Vec<(usize, PairEntry)>,
    pub residual_trace: f64,
    pub case_trace: Vec<f64>,
    pub pair_permutation: Vec<usize>,
    pub complete: bool,
    pub iterations: usize,
    pub contraction_violations: usize,
}

impl Certificate {
    /// True when the decomposition finished and no part carries
    /// entanglement: together, constructive proof of biseparability.
    pub fn proves_biseparability(&self) -> bool {
        self.complete
            && self
                .parts
                .iter()
                .all(|p| p.evidence != Evidence::EntangledCore)
    }

    /// Total coherence content of the entangled cores, in original state
    /// units: equal to the state's concurrence when the input was
    /// entangled, zero otherwise.
    pub fn core_concurrence(&self) -> f64 {
        self.parts
            .iter()
            .filter(|p| p.evidence == Evidence::EntangledCore)
            .map(|p| {
                p.entries
                    .iter()
                    .map(|(_, e)| 2.0 * e.z.norm())
                    .sum::<f64>()
            })
            .sum()
    }

    /// Largest componentwise gap between `sum(parts) + residual` and the
    /// original state.
    pub fn reconstruction_error(&self, x: &XMatrix) -> Result<f64> {
        if x.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: x.n_qubits(),
                right: self.n_qubits,
            });
        }
        let n_pairs = x.n_pairs();
        let mut sum = vec![PairEntry::ZERO; n_pairs];
        let all = self
            .parts
            .iter()
            .flat_map(|p| p.entries.iter())
            .chain(self.residual.iter());
        for &(pair, e) in all {
            if pair < 1 || pair > n_pairs {
                return Err(Error::IndexOutOfRange {
                    index: pair,
                    max: n_pairs,
                });
            }
            let acc = &mut sum[pair - 1];
            acc.a += e.a;
            acc.b += e.b;
            acc.z += e.z;
        }
        let mut worst = 0.0f64;
        for (acc, e) in sum.iter().zip(x.pairs()) {
            worst = worst
                .max((acc.a - e.a).abs())
                .max((acc.b - e.b).abs())
                .max((acc.z - e.z).norm());
        }
        Ok(worst)
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        let text = serde_json::to_string_pretty(&CertificateWire::from(self))
            .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
        writer
            .write_all(text.as_bytes())
            .and_then(|_| writer.write_all(b"\n"))
            .map_err(|e| Error::Domain(format!("write failed: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    pub fn read_json<R: Read>(mut reader: R) -> Result<Certificate> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| Error::Domain(format!("read failed: {e}")))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Certificate> {
        let wire: CertificateWire = serde_json::from_str(text)
            .map_err(|e| Error::Json(format!("malformed certificate JSON: {e}")))?;
        wire.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    pair: usize,
    a: f64,
    b: f64,
    z_re: f64,
    z_im: f64,
}

impl From<&(usize, PairEntry)> for EntryWire {
    fn from(&(pair, e): &(usize, PairEntry)) -> Self {
        EntryWire {
            pair,
            a: e.a,
            b: e.b,
            z_re: e.z.re,
            z_im: e.z.im,
        }
    }
}

impl From<&EntryWire> for (usize, PairEntry) {
    fn from(w: &EntryWire) -> Self {
        (w.pair, PairEntry::new(w.a, w.b, crate::C64::new(w.z_re, w.z_im)))
    }
}

#[derive(Serialize, Deserialize)]
struct PartWire {
    weight: f64,
    evidence: Evidence,
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    n_qubits: u32,
    tol: f64,
    complete: bool,
    iterations: usize,
    contraction_violations: usize,
    residual_trace: f64,
    case_trace: Vec<f64>,
    pair_permutation: Vec<usize>,
    parts: Vec<PartWire>,
    residual: Vec<EntryWire>,
}

impl From<&Certificate> for CertificateWire {
    fn from(c: &Certificate) -> Self {
        CertificateWire {
            n_qubits: c.n_qubits,
            tol: c.tol,
            complete: c.complete,
            iterations: c.iterations,
            contraction_violations: c.contraction_violations,
            residual_trace: c.residual_trace,
            case_trace: c.case_trace.clone(),
            pair_permutation: c.pair_permutation.clone(),
            parts: c
                .parts
                .iter()
                .map(|p| PartWire {
                    weight: p.weight,
                    evidence: p.evidence,
                    entries: p.entries.iter().map(EntryWire::from).collect(),
                })
                .collect(),
            residual: c.residual.iter().map(EntryWire::from).collect(),
        }
    }
}

impl TryFrom<CertificateWire> for Certificate {
    type Error = Error;

    fn try_from(w: CertificateWire) -> Result<Certificate> {
        if w.n_qubits == 0 || w.n_qubits > 63 {
            return Err(Error::Domain(format!(
                "certificate needs 1..=63 qubits, got {}",
                w.n_qubits
            )));
        }
        let n_pairs = 1usize << (w.n_qubits - 1);
        let check = |e: &EntryWire| -> Result<(usize, PairEntry)> {
            if e.pair < 1 || e.pair > n_pairs {
                return Err(Error::IndexOutOfRange {
                    index: e.pair,
                    max: n_pairs,
                });
            }
            Ok(e.into())
        };
        Ok(Certificate {
            n_qubits: w.n_qubits,
            tol: w.tol,
            complete: w.complete,
            iterations: w.iterations,
            contraction_violations: w.contraction_violations,
            residual_trace: w.residual_trace,
            case_trace: w.case_trace,
            pair_permutation: w.pair_permutation,
            parts: w
                .parts
                .iter()
                .map(|p| {
                    Ok(CertificatePart {
                        weight: p.weight,
                        evidence: p.evidence,
                        entries: p.entries.iter().map(check).collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<_>>()?,
            residual: w.residual.iter().map(check).collect::<Result<_>>()?,
        })
    }
}

/// Iteration budget that covers the slowest contraction regime (factor
/// `1 - 2/n` per split for `n` active pairs) down to `tol`, with margin.
pub fn default_max_iter(n_pairs: usize, tol: f64) -> usize {
    let ln_tol = tol.max(1e-300).ln().abs();
    128 + (0.5 * ln_tol * n_pairs as f64).ceil() as usize
}

/// Build a certificate with the default tolerance and iteration budget.
pub fn biseparability_certificate(x: &XMatrix) -> Result<Certificate> {
    let tol = crate::xmatrix::DEFAULT_TOL;
    biseparability_certificate_with(x, tol, default_max_iter(x.n_pairs(), tol))
}

/// Build a certificate with explicit control. `tol` bounds the residual
/// trace of a complete run; `max_iter` caps the contraction splits.
pub fn biseparability_certificate_with(
    x: &XMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<Certificate> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Range {
            name: "tol",
            value: tol,
            lo: f64::MIN_POSITIVE,
            hi: f64::INFINITY,
        });
    }

    let mut parts: Vec<CertificatePart> = Vec::new();
    let mut work: Vec<(usize, PairEntry)> = Vec::new();

    // Pairs with r = 0 cannot participate in coherence transfer; emit them
    // as-is. (Validation guarantees their coherence is at most dust.)
    for (idx, &e) in x.pairs().iter().enumerate() {
        if e.trace() == 0.0 && e.z.norm() == 0.0 {
            continue;
        }
        if e.root_product() == 0.0 {
            parts.push(CertificatePart {
                weight: e.trace(),
                entries: vec![(idx + 1, e)],
                evidence: Evidence::Diagonal,
            });
        } else {
            work.push((idx + 1, e));
        }
    }

    // with no coherence anywhere the state is a plain mixture of basis
    // states; no pairing construction needed
    if work.iter().all(|(_, e)| e.z.norm() == 0.0) {
        for &(idx, e) in &work {
            parts.push(CertificatePart {
                weight: e.trace(),
                entries: vec![(idx, e)],
                evidence: Evidence::Diagonal,
            });
        }
        work.clear();
    }

    let mut case_trace = Vec::new();
    let mut pair_permutation = Vec::new();
    let mut iterations = 0usize;
    let mut contraction_violations = 0usize;
    let mut complete = true;

    loop {
        if work.is_empty() {
            break;
        }
        // stable descending sort keeps ties in pair order, matching the
        // witness tie-break of the concurrence formula
        work.sort_by(|l, r| r.1.root_product().total_cmp(&l.1.root_product()));
        if pair_permutation.is_empty() {
            pair_permutation = work.iter().map(|&(i, _)| i).collect();
        }

        let trace: f64 = work.iter().map(|(_, e)| e.trace()).sum();
        case_trace.push(trace);
        if trace <= tol {
            break;
        }

        let roots: Vec<f64> = work.iter().map(|(_, e)| e.root_product()).collect();
        // same summation the concurrence formula uses, so the case
        // dispatch agrees exactly with the formula's verdict
        let s = sorted_sum(&roots);
        let (idx1, e1) = work[0];
        let r1 = roots[0];
        let w1 = (s - r1).max(0.0);
        let z1_abs = e1.z.norm();

        if z1_abs > w1 {
            // entangled: match each partner exactly, leave the core
            for (&(idx, e), &ri) in work[1..].iter().zip(&roots[1..]) {
                let s_ab = ri / r1;
                let piece = PairEntry::new(e1.a * s_ab, e1.b * s_ab, e1.z * (ri / z1_abs));
                parts.push(CertificatePart {
                    weight: piece.trace() + e.trace(),
                    entries: vec![(idx1, piece), (idx, e)],
                    evidence: Evidence::PairedZero,
                });
            }
            let s_ab = 1.0 - w1 / r1;
            let core = PairEntry::new(e1.a * s_ab, e1.b * s_ab, e1.z * (1.0 - w1 / z1_abs));
            parts.push(CertificatePart {
                weight: core.trace(),
                entries: vec![(idx1, core)],
                evidence: Evidence::EntangledCore,
            });
            work.clear();
            break;
        }

        if w1 == 0.0 {
            // single surviving pair with |z| <= w1 = 0: plain diagonal
            parts.push(CertificatePart {
                weight: e1.trace(),
                entries: vec![(idx1, e1)],
                evidence: Evidence::Diagonal,
            });
            work.clear();
            break;
        }

        if r1 >= w1 {
            // dominant pair: distribute it over the others in proportion
            // to their roots; every piece satisfies both inequalities
            for (&(idx, e), &ri) in work[1..].iter().zip(&roots[1..]) {
                let piece = e1.scaled(ri / w1);
                parts.push(CertificatePart {
                    weight: piece.trace() + e.trace(),
                    entries: vec![(idx1, piece), (idx, e)],
                    evidence: Evidence::PairedZero,
                });
            }
            work.clear();
            break;
        }

        // no dominant pair: split off matched pieces and contract
        if iterations >= max_iter {
            complete = false;
            break;
        }
        iterations += 1;
        if w1 > 3.0 * r1 {
            contraction_violations += 1;
        }
        let t = w1 / (w1 + r1);
        let r = 1.0 - t; // exact: t is in (1/2, 1)
        for (&(idx, e), &ri) in work[1..].iter().zip(&roots[1..]) {
            let outer = e1.scaled(t * (ri / w1));
            let inner = e.scaled(r);
            parts.push(CertificatePart {
                weight: outer.trace() + inner.trace(),
                entries: vec![(idx1, outer), (idx, inner)],
                evidence: Evidence::PairedZero,
            });
        }
        work[0].1 = e1.scaled(r);
        for entry in &mut work[1..] {
            entry.1 = entry.1.scaled(t);
        }
    }

    let residual_trace: f64 = work.iter().map(|(_, e)| e.trace().abs()).sum();
    Ok(Certificate {
        n_qubits: x.n_qubits(),
        tol,
        parts,
        residual: work,
        residual_trace,
        case_trace,
        pair_permutation,
        complete: complete && residual_trace <= tol,
        iterations,
        contraction_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{damp, DampingSpec};
    use crate::ghz::ghz_xmatrix;
    use crate::oracle::{to_dense, wootters_concurrence};
    use crate::C64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn check_soundness(x: &XMatrix, cert: &Certificate) {
        assert!(
            cert.reconstruction_error(x).unwrap() < 1e-10,
            "parts plus residual must re-add to the state"
        );
        for part in &cert.parts {
            assert!(
                part.min_eigenvalue() > -1e-12,
                "parts must be positive semidefinite"
            );
            if part.evidence != Evidence::EntangledCore {
                assert!(
                    part.concurrence() < 1e-10,
                    "non-core parts must be individually biseparable, got {}",
                    part.concurrence()
                );
            }
        }
    }

    #[test]
    fn diagonal_state_gets_a_diagonal_certificate() {
        let x = XMatrix::new(
            3,
            vec![
                PairEntry::real(0.2, 0.1, 0.0),
                PairEntry::real(0.3, 0.05, 0.0),
                PairEntry::real(0.15, 0.1, 0.0),
                PairEntry::real(0.05, 0.05, 0.0),
            ],
        )
        .unwrap();
        let cert = biseparability_certificate(&x).unwrap();
        assert!(cert.complete);
        assert!(cert.proves_biseparability());
        assert_eq!(cert.iterations, 0);
        assert_eq!(cert.parts.len(), 4);
        assert!(cert.parts.iter().all(|p| p.evidence == Evidence::Diagonal));
        check_soundness(&x, &cert);
        let total: f64 = cert.parts.iter().map(|p| p.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_sided_pairs_are_emitted_as_diagonal_parts() {
        let x = XMatrix::new(
            2,
            vec![PairEntry::real(0.6, 0.0, 0.0), PairEntry::real(0.0, 0.4, 0.0)],
        )
        .unwrap();
        let cert = biseparability_certificate(&x).unwrap();
        assert!(cert.proves_biseparability());
        assert_eq!(cert.parts.len(), 2);
        for p in &cert.parts {
            assert_eq!(p.evidence, Evidence::Diagonal);
        }
        check_soundness(&x, &cert);
    }

    #[test]
    fn dominant_pair_case_terminates_without_contraction() {
        let x = XMatrix::new(
            2,
            vec![
                PairEntry::real(0.4, 0.4, 0.08),
                PairEntry::real(0.1, 0.1, 0.05),
            ],
        )
        .unwrap();
        assert_eq!(x.concurrence(), 0.0);
        let cert = biseparability_certificate(&x).unwrap();
        assert!(cert.complete);
        assert!(cert.proves_biseparability());
        assert_eq!(cert.iterations, 0);
        assert_eq!(cert.parts.len(), 1);
        assert_eq!(cert.pair_permutation, vec![1, 2]);
        check_soundness(&x, &cert);
    }

    #[test]
    fn damped_ghz_past_sudden_death_is_certified_biseparable() {
        // p = 0.6 is beyond the three-qubit critical probability 0.4807,
        // and the damped state has no dominant pair, so the contraction
        // loop runs
        let x = damp(
            &ghz_xmatrix(3, 0, FRAC_PI_4).unwrap(),
            &DampingSpec::uniform(3, 0.6).unwrap(),
        )
        .unwrap();
        assert_eq!(x.concurrence(), 0.0);
        let cert = biseparability_certificate(&x).unwrap();
        assert!(cert.complete);
        assert!(cert.proves_biseparability());
        assert!(cert.iterations >= 1);
        assert!(cert.residual_trace <= cert.tol);
        for w in cert.case_trace.windows(2) {
            assert!(w[1] < w[0], "remainder trace must shrink every pass");
        }
        check_soundness(&x, &cert);
    }

    #[test]
    fn entangled_state_yields_a_core_with_its_concurrence() {
        let x = damp(
            &ghz_xmatrix(3, 0, FRAC_PI_4).unwrap(),
            &DampingSpec::uniform(3, 0.19).unwrap(),
        )
        .unwrap();
        let c = x.concurrence();
        assert!(c > 0.5);
        let cert = biseparability_certificate(&x).unwrap();
        assert!(cert.complete);
        assert!(!cert.proves_biseparability());
        let cores: Vec<_> = cert
            .parts
            .iter()
            .filter(|p| p.evidence == Evidence::EntangledCore)
            .collect();
        assert_eq!(cores.len(), 1);
        assert!((cert.core_concurrence() - c).abs() < 1e-10);
        check_soundness(&x, &cert);
    }

    #[test]
    fn parts_pass_the_spin_flip_cross_check() {
        // independent verification: each part, viewed as a two-qubit
        // state, is separable by the spin-flip spectrum
        let x = damp(
            &ghz_xmatrix(3, 0, FRAC_PI_4).unwrap(),
            &DampingSpec::uniform(3, 0.6).unwrap(),
        )
        .unwrap();
        let cert = biseparability_certificate(&x).unwrap();
        assert!(!cert.parts.is_empty());
        for part in &cert.parts {
            let two = part.as_two_qubit().unwrap();
            let w = wootters_concurrence(&to_dense(&two).unwrap()).unwrap();
            assert!(w < 1e-8, "part must be separable, spin-flip gave {w}");
        }
    }

    #[test]
    fn core_value_survives_the_spin_flip_cross_check() {
        let x = damp(
            &ghz_xmatrix(3, 0, FRAC_PI_4).unwrap(),
            &DampingSpec::uniform(3, 0.19).unwrap(),
        )
        .unwrap();
        let cert = biseparability_certificate(&x).unwrap();
        let core = cert
            .parts
            .iter()
            .find(|p| p.evidence == Evidence::EntangledCore)
            .unwrap();
        let two = core.as_two_qubit().unwrap();
        let w = wootters_concurrence(&to_dense(&two).unwrap()).unwrap();
        assert!((w - core.concurrence()).abs() < 1e-9);
    }

    #[test]
    fn iteration_budget_is_honored_and_reported() {
        let x = damp(
            &ghz_xmatrix(3, 0, FRAC_PI_4).unwrap(),
            &DampingSpec::uniform(3, 0.6).unwrap(),
        )
        .unwrap();
        let cert = biseparability_certificate_with(&x, 1e-9, 1).unwrap();
        assert!(!cert.complete);
        assert!(!cert.proves_biseparability());
        assert_eq!(cert.iterations, 1);
        assert!(cert.residual_trace > 1e-9);
        assert!(!cert.residual.is_empty());
        // parts emitted so far plus the residual still re-add exactly
        assert!(cert.reconstruction_error(&x).unwrap() < 1e-12);
    }

    #[test]
    fn bad_tolerances_are_rejected() {
        let x = ghz_xmatrix(2, 0, FRAC_PI_4).unwrap();
        assert!(biseparability_certificate_with(&x, 0.0, 10).is_err());
        assert!(biseparability_certificate_with(&x, -1e-9, 10).is_err());
        assert!(biseparability_certificate_with(&x, f64::NAN, 10).is_err());
    }

    #[test]
    fn json_round_trip_preserves_the_certificate() {
        let x = damp(
            &ghz_xmatrix(3, 0, FRAC_PI_4).unwrap(),
            &DampingSpec::uniform(3, 0.6).unwrap(),
        )
        .unwrap();
        let cert = biseparability_certificate(&x).unwrap();
        let text = cert.to_json_string();
        assert!(text.contains("\"paired-zero\""));
        let back = Certificate::from_json_str(&text).unwrap();
        assert_eq!(cert, back);
    }

    #[test]
    fn malformed_certificate_json_is_rejected() {
        assert!(Certificate::from_json_str("{}").is_err());
        let bad_pair = r#"{
            "n_qubits": 2, "tol": 1e-9, "complete": true, "iterations": 0,
            "contraction_violations": 0, "residual_trace": 0.0,
            "case_trace": [], "pair_permutation": [],
            "parts": [{"weight": 1.0, "evidence": "diagonal",
                       "entries": [{"pair": 3, "a": 1.0, "b": 0.0, "z_re": 0.0, "z_im": 0.0}]}],
            "residual": []
        }"#;
        assert!(matches!(
            Certificate::from_json_str(bad_pair),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        ));
    }

    #[test]
    fn three_pair_part_refuses_the_two_qubit_view() {
        let part = CertificatePart {
            weight: 1.0,
            entries: vec![
                (1, PairEntry::real(0.2, 0.2, 0.0)),
                (2, PairEntry::real(0.2, 0.2, 0.0)),
                (3, PairEntry::real(0.1, 0.1, 0.0)),
            ],
            evidence: Evidence::PairedZero,
        };
        assert!(matches!(
            part.as_two_qubit(),
            Err(Error::NotTwoPairSupport { pair: 3 })
        ));
    }

    prop_compose! {
        // random states conditioned to zero concurrence by scaling all
        // coherences until the dominant excess is safely nonpositive
        fn arb_unentangled(max_qubits: u32)
                (n in 2..=max_qubits)
                (n in Just(n),
                 raw in proptest::collection::vec((1e-6..1.0f64, 1e-6..1.0f64, 0.0..1.0f64, 0.0..std::f64::consts::TAU),
                                                  (1usize << (n - 1))..=(1usize << (n - 1))))
                -> XMatrix {
            let total: f64 = raw.iter().map(|(a, b, _, _)| a + b).sum();
            let pairs: Vec<PairEntry> = raw.iter().map(|&(a, b, s, phi)| {
                let (a, b) = (a / total, b / total);
                PairEntry::new(a, b, C64::from_polar(s * (a * b).sqrt(), phi))
            }).collect();
            let x = XMatrix::new(n, pairs.clone()).expect("sampled state is valid");
            let report = x.gm_concurrence();
            if report.value == 0.0 {
                return x;
            }
            let i = report.witness_pair - 1;
            let scale = (report.w[i] / pairs[i].z.norm()) * (1.0 - 1e-12);
            let damped: Vec<PairEntry> = pairs.iter().map(|e| {
                PairEntry::new(e.a, e.b, e.z * scale)
            }).collect();
            XMatrix::new(n, damped).expect("scaled state is valid")
        }
    }

    proptest! {
        #[test]
        fn certificates_for_unentangled_states_are_sound(x in arb_unentangled(4)) {
            prop_assert_eq!(x.concurrence(), 0.0);
            let cert = biseparability_certificate(&x).unwrap();
            prop_assert!(cert.complete, "residual {} after {} iterations", cert.residual_trace, cert.iterations);
            prop_assert!(cert.proves_biseparability());
            prop_assert!(cert.reconstruction_error(&x).unwrap() < 1e-10);
            for part in &cert.parts {
                prop_assert!(part.min_eigenvalue() > -1e-12);
                prop_assert!(part.concurrence() < 1e-10);
            }
        }

        #[test]
        fn certificates_agree_with_the_formula_verdict(
            x in arb_unentangled(4),
            p in 0.0..0.9f64,
        ) {
            // damping an unentangled state keeps it unentangled; check the
            // certificate tracks the formula on the whole trajectory
            let y = damp(&x, &DampingSpec::uniform(x.n_qubits(), p).unwrap()).unwrap();
            let cert = biseparability_certificate(&y).unwrap();
            prop_assert!(cert.complete);
            prop_assert_eq!(
                cert.proves_biseparability(),
                y.concurrence() == 0.0
            );
        }

        #[test]
        fn entangled_cores_match_the_formula_value(
            alpha in 0.2..1.3f64,
            p_frac in 0.0..0.95f64,
        ) {
            let n = 3u32;
            let pc = crate::ghz::critical_p(n, alpha).unwrap().value;
            let p = p_frac * pc;
            let x = damp(
                &ghz_xmatrix(n, 0, alpha).unwrap(),
                &DampingSpec::uniform(n, p).unwrap(),
            ).unwrap();
            let cert = biseparability_certificate(&x).unwrap();
            prop_assert!(cert.complete);
            prop_assert!((cert.core_concurrence() - x.concurrence()).abs() < 1e-10);
            prop_assert!(cert.reconstruction_error(&x).unwrap() < 1e-10);
        }
    }
}
