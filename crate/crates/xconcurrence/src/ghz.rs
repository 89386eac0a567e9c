//! Generalized GHZ states and the closed-form decay of their concurrence
//! under uniform amplitude damping.
//!
//! The family treated here, parameterized by the excitation count
//! `k in 0..=N` and a mixing angle `alpha`, is
//!
//! ```text
//!     |psi(N, k, alpha)> = cos(alpha) |1..1 0..0>  +  sin(alpha) |0..0 1..1>
//!                                     ^^^^ ^^^^                  ^^^^ ^^^^
//!                                     N-k   k                    N-k   k
//! ```
//!
//! `k = 0` is the standard GHZ state with the cosine component fully excited;
//! `k = N` swaps the roles of the two angles.
//!
//! Under amplitude damping with probability `P` on every qubit, the
//! concurrence of the `k = 0` state follows the closed form
//!
//! ```text
//!     C(P) = max{0, Q(P)},
//!     Q(P) = 2 cos^2(alpha) [ |tan(alpha)| (1-P)^(N/2)
//!                             - (2^(N-1) - 1) (P(1-P))^(N/2) ]
//! ```
//!
//! which reaches zero at a finite critical probability (sudden death)
//!
//! ```text
//!     P_c = [ |tan(alpha)| / (2^(N-1) - 1) ]^(2/N)
//! ```
//!
//! whenever that value is below 1. In sharp contrast, the partially excited
//! members `1 <= k <= N-1` decay as `|sin(2 alpha)| (1-P)^(N/2)` and their
//! entanglement survives all the way to `P = 1`.
//!
//! Everything here is evaluated in log space, so the formulas stay finite
//! and accurate for qubit counts far beyond any explicit matrix
//! representation (N around 10^6 is fine).

use std::f64::consts::{FRAC_PI_2, LN_2};

use crate::xmatrix::PairEntry;
use crate::{Error, Result, XMatrix};

/// Below this magnitude of `cos(alpha)`, `tan(alpha)` is treated as
/// divergent and angle-based entry points refuse the input.
const MIN_COS: f64 = 1e-15;

/// Critical damping probability for the standard GHZ state.
///
/// `value` is clamped to 1; `finite_lifetime` records whether the
/// unclamped crossing lies strictly below 1, i.e. whether entanglement
/// suffers sudden death at finite damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalP {
    pub value: f64,
    pub finite_lifetime: bool,
}

/// Damping probability at which the concurrence has fallen to half its
/// initial value, plus the large-N estimate `2 ln 2 / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLife {
    pub exact: f64,
    pub approx: f64,
}

fn check_n(n_qubits: u32) -> Result<()> {
    if n_qubits < 2 {
        return Err(Error::Domain(format!(
            "GHZ analysis needs at least 2 qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::Range {
            name: "damping probability",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::Domain("alpha must be finite".into()));
    }
    Ok(())
}

fn tan_abs_of(alpha: f64) -> Result<f64> {
    let c = alpha.cos();
    if c.abs() < MIN_COS {
        return Err(Error::Domain(format!(
            "|cos(alpha)| = {:e} too small, tan(alpha) diverges",
            c.abs()
        )));
    }
    Ok((alpha.sin() / c).abs())
}

/// `ln(2^m - 1)`, exact in log space; `-inf` at `m = 0`.
fn ln_pow2_minus_1(m: u32) -> f64 {
    if m == 0 {
        return f64::NEG_INFINITY;
    }
    let t = m as f64 * LN_2;
    t + (-(-t).exp()).ln_1p()
}

/// Q with `cos^2(alpha)` and `|tan(alpha)|` supplied separately, so the
/// angle and tangent entry points agree on the trig they use.
fn q_from(n_qubits: u32, cos2: f64, tan_abs: f64, p: f64) -> f64 {
    let half_n = 0.5 * n_qubits as f64;
    let ln_1mp = (-p).ln_1p();
    // survivor term: |tan| (1-P)^(N/2)
    let t1 = tan_abs * (half_n * ln_1mp).exp();
    // spread term: (2^(N-1) - 1) (P(1-P))^(N/2), always <= 1/2
    let t2 = (half_n * (ln_1mp + p.ln()) + ln_pow2_minus_1(n_qubits - 1)).exp();
    2.0 * cos2 * (t1 - t2)
}

/// Signed excess `2(|z_1| - w_1)` of the damped `k = 0` GHZ state. The
/// concurrence is `max{0, Q}`; the sign carries the sudden-death crossing.
pub fn q_value(n_qubits: u32, alpha: f64, p: f64) -> Result<f64> {
    check_n(n_qubits)?;
    check_alpha(alpha)?;
    check_p(p)?;
    let tan_abs = tan_abs_of(alpha)?;
    let c = alpha.cos();
    Ok(q_from(n_qubits, c * c, tan_abs, p))
}

/// [`q_value`] parameterized by `|tan(alpha)|` instead of the angle.
pub fn q_value_tan(n_qubits: u32, tan_abs: f64, p: f64) -> Result<f64> {
    check_n(n_qubits)?;
    check_p(p)?;
    if !tan_abs.is_finite() || tan_abs < 0.0 {
        return Err(Error::Range {
            name: "tan_abs",
            value: tan_abs,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(q_from(n_qubits, 1.0 / (1.0 + tan_abs * tan_abs), tan_abs, p))
}

/// Concurrence of the damped standard GHZ state (`k = 0`).
pub fn concurrence_k0(n_qubits: u32, alpha: f64, p: f64) -> Result<f64> {
    Ok(q_value(n_qubits, alpha, p)?.max(0.0))
}

/// Concurrence of the damped partially excited states (`1 <= k <= N-1`):
/// `|sin(2 alpha)| (1-P)^(N/2)`, positive for every `P < 1`.
pub fn concurrence_kpos(n_qubits: u32, alpha: f64, p: f64) -> Result<f64> {
    check_n(n_qubits)?;
    check_alpha(alpha)?;
    check_p(p)?;
    let half_n = 0.5 * n_qubits as f64;
    Ok((2.0 * alpha).sin().abs() * (half_n * (-p).ln_1p()).exp())
}

/// Concurrence of any family member after uniform damping, dispatching on
/// the effective excitation `min(k, N - k)`.
pub fn analytic_concurrence(n_qubits: u32, k: u32, alpha: f64, p: f64) -> Result<f64> {
    check_n(n_qubits)?;
    if k > n_qubits {
        return Err(Error::IndexOutOfRange {
            index: k as usize,
            max: n_qubits as usize,
        });
    }
    let k_eff = k.min(n_qubits - k);
    if k_eff == 0 {
        // k = N exchanges which component carries cos(alpha).
        let alpha_eff = if k == 0 { alpha } else { FRAC_PI_2 - alpha };
        concurrence_k0(n_qubits, alpha_eff, p)
    } else {
        concurrence_kpos(n_qubits, alpha, p)
    }
}

/// Sudden-death probability of the standard GHZ state.
pub fn critical_p(n_qubits: u32, alpha: f64) -> Result<CriticalP> {
    check_alpha(alpha)?;
    critical_p_tan(n_qubits, tan_abs_of(alpha)?)
}

/// [`critical_p`] parameterized by `|tan(alpha)|`.
pub fn critical_p_tan(n_qubits: u32, tan_abs: f64) -> Result<CriticalP> {
    check_n(n_qubits)?;
    if !tan_abs.is_finite() || tan_abs < 0.0 {
        return Err(Error::Range {
            name: "tan_abs",
            value: tan_abs,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let raw = ((2.0 / n_qubits as f64)
        * (tan_abs.ln() - ln_pow2_minus_1(n_qubits - 1)))
    .exp();
    Ok(CriticalP {
        value: raw.min(1.0),
        finite_lifetime: raw < 1.0,
    })
}

/// Damping probability at which the standard GHZ concurrence halves.
///
/// The exact value solves `Q(P) = Q(0) / 2` by bisection; the estimate
/// `2 ln 2 / N` is the large-N limit. Diagonal inputs (`sin(2 alpha) = 0`)
/// carry no entanglement to halve.
pub fn half_life(n_qubits: u32, alpha: f64) -> Result<HalfLife> {
    check_n(n_qubits)?;
    check_alpha(alpha)?;
    let tan_abs = tan_abs_of(alpha)?;
    if (2.0 * alpha).sin().abs() < 1e-15 {
        return Err(Error::NoEntanglement);
    }
    let c = alpha.cos();
    let cos2 = c * c;
    let q0 = q_from(n_qubits, cos2, tan_abs, 0.0);
    let target = 0.5 * q0;

    let mut lo = 0.0f64;
    let mut hi = critical_p_tan(n_qubits, tan_abs)?.value;
    debug_assert!(q_from(n_qubits, cos2, tan_abs, hi) <= target);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if q_from(n_qubits, cos2, tan_abs, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(HalfLife {
        exact: 0.5 * (lo + hi),
        approx: 2.0 * LN_2 / n_qubits as f64,
    })
}

/// Explicit X-matrix of `|psi(N, k, alpha)>`, for qubit counts within the
/// storage limit.
pub fn ghz_xmatrix(n_qubits: u32, k: u32, alpha: f64) -> Result<XMatrix> {
    check_n(n_qubits)?;
    check_alpha(alpha)?;
    if k > n_qubits {
        return Err(Error::IndexOutOfRange {
            index: k as usize,
            max: n_qubits as usize,
        });
    }
    if n_qubits > crate::xmatrix::DEFAULT_MAX_QUBITS {
        return Err(Error::StorageLimit {
            n_qubits,
            max: crate::xmatrix::DEFAULT_MAX_QUBITS,
        });
    }
    let ca = alpha.cos();
    let sa = alpha.sin();
    let mut pairs = vec![PairEntry::ZERO; 1usize << (n_qubits - 1)];
    if k == n_qubits {
        // both components flip to the lower-index side: cos on |0..0>
        pairs[0] = PairEntry::real(ca * ca, sa * sa, ca * sa);
    } else {
        // sine component sits at the stored (lower) index 2^k - 1
        let p_lo = (1usize << k) - 1;
        pairs[p_lo] = PairEntry::real(sa * sa, ca * ca, sa * ca);
    }
    XMatrix::new(n_qubits, pairs)
}
