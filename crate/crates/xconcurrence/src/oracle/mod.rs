//! Independent verification routes.
//!
//! Everything in this module recomputes quantities of the compressed X-form
//! machinery through a different representation, so agreement is meaningful
//! evidence rather than a tautology:
//!
//! * [`DenseHermitian`] holds an explicit `2^N x 2^N` matrix and exposes its
//!   spectrum, for states small enough to store.
//! * [`dense_damp`] evolves a dense matrix with explicit Kraus products,
//!   checking the closed-form channel action of [`crate::channels`].
//! * [`wootters_concurrence`] evaluates the two-qubit concurrence from the
//!   spin-flip spectrum, checking the X-form formula at `N = 2`.
//! * [`pure_gm_concurrence`] minimizes `sqrt(2 (1 - purity))` over every
//!   bipartition of a pure state, checking the formula on rank-one inputs.
//! * [`certificate`] constructs explicit biseparable decompositions for
//!   states the formula declares unentangled.

pub mod certificate;

use nalgebra::DMatrix;

use crate::channels::DampingSpec;
use crate::xmatrix::{pair_basis, PairEntry};
use crate::{Error, Result, XMatrix, C64};

/// Explicit storage cutoff for dense matrices and pure-state sweeps.
pub const MAX_DENSE_QUBITS: u32 = 12;

/// Cutoff for Kraus-product evolution, which handles several full
/// `2^N x 2^N` multiplications per qubit.
pub const MAX_KRAUS_QUBITS: u32 = 6;

const HERMITICITY_TOL: f64 = 1e-12;

fn hermitize(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj).map(|c| c * 0.5)
}

/// Dense Hermitian matrix on `N` qubits.
///
/// Construction enforces a power-of-two dimension and hermiticity within
/// `1e-12`, then symmetrizes exactly so downstream spectral calls see a
/// perfectly self-adjoint matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    n_qubits: u32,
    mat: DMatrix<C64>,
}

impl DenseHermitian {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Domain(format!(
                "expected a square 2^N x 2^N matrix with N >= 1, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let n_qubits = dim.trailing_zeros();
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::StorageLimit {
                n_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let gap = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if gap > worst {
                    worst = gap;
                }
            }
        }
        if worst > HERMITICITY_TOL {
            return Err(Error::Domain(format!(
                "matrix is not Hermitian: max |M - M^dagger| = {worst:e}"
            )));
        }
        Ok(DenseHermitian {
            n_qubits,
            mat: hermitize(mat),
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Real spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (mut v, _) = hermitian_eigen(&self.mat);
        v.sort_by(f64::total_cmp);
        v
    }

    /// Check the density-matrix axioms: unit trace within `1e-9` and no
    /// eigenvalue below `-1e-10`.
    pub fn validate_density(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::NotDensityMatrix(format!("trace = {tr}")));
        }
        let eigs = self.eigenvalues();
        if let Some(&min) = eigs.first() {
            if min < -1e-10 {
                return Err(Error::NotDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(())
    }
}

/// Expand an X-matrix to explicit dense form.
pub fn to_dense(x: &XMatrix) -> Result<DenseHermitian> {
    if x.n_qubits() > MAX_DENSE_QUBITS {
        return Err(Error::StorageLimit {
            n_qubits: x.n_qubits(),
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = x.dim();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (idx, e) in x.pairs().iter().enumerate() {
        let (p, q) = (idx, dim - 1 - idx);
        m[(p, p)] = C64::from(e.a);
        m[(q, q)] = C64::from(e.b);
        m[(p, q)] = e.z;
        m[(q, p)] = e.z.conj();
    }
    Ok(DenseHermitian {
        n_qubits: x.n_qubits(),
        mat: m,
    })
}

/// Compress a dense matrix back to X form.
///
/// Any entry off the two diagonals larger than `tol` is an
/// [`Error::XFormViolation`]. Diagonal dust in `(-tol, 0)` from upstream
/// numerics is clamped to zero before the X-matrix validation runs.
pub fn from_dense(d: &DenseHermitian, tol: f64) -> Result<XMatrix> {
    let dim = d.dim();
    for i in 0..dim {
        for j in 0..dim {
            if i != j && i + j != dim - 1 {
                let magnitude = d.mat[(i, j)].norm();
                if magnitude > tol {
                    return Err(Error::XFormViolation {
                        row: i,
                        col: j,
                        magnitude,
                    });
                }
            }
        }
    }
    let clamp = |v: f64| if (-tol..0.0).contains(&v) { 0.0 } else { v };
    let pairs = (0..dim / 2)
        .map(|p| {
            PairEntry::new(
                clamp(d.mat[(p, p)].re),
                clamp(d.mat[(dim - 1 - p, dim - 1 - p)].re),
                d.mat[(p, dim - 1 - p)],
            )
        })
        .collect();
    XMatrix::with_tolerance(d.n_qubits, pairs, tol)
}

/// Normalized state vector on `N` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: u32,
    amps: Vec<C64>,
}

impl PureState {
    /// Accepts a vector of length `2^N` with norm within `1e-9` of 1, then
    /// normalizes it exactly.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Domain(format!(
                "state vector length must be 2^N with N >= 1, got {dim}"
            )));
        }
        let n_qubits = dim.trailing_zeros();
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::StorageLimit {
                n_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let norm_sq: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "state vector norm^2 = {norm_sq} is not 1"
            )));
        }
        let scale = 1.0 / norm_sq.sqrt();
        Ok(PureState {
            n_qubits,
            amps: amps.into_iter().map(|c| c * scale).collect(),
        })
    }

    /// `cos(alpha) |1..1 0..0> + sin(alpha) |0..0 1..1>` with `k` trailing
    /// qubits flipped; the same family as [`crate::ghz::ghz_xmatrix`].
    pub fn ghz(n_qubits: u32, k: u32, alpha: f64) -> Result<Self> {
        if !(2..=MAX_DENSE_QUBITS).contains(&n_qubits) {
            return Err(Error::Domain(format!(
                "pure GHZ construction supports 2..={MAX_DENSE_QUBITS} qubits, got {n_qubits}"
            )));
        }
        if k > n_qubits {
            return Err(Error::IndexOutOfRange {
                index: k as usize,
                max: n_qubits as usize,
            });
        }
        if !alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        let dim = 1usize << n_qubits;
        let p_hi = dim - (1usize << k);
        let p_lo = (1usize << k) - 1;
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[p_hi] = C64::from(alpha.cos());
        amps[p_lo] = C64::from(alpha.sin());
        PureState::new(amps)
    }

    /// Superposition `c_low |p> + c_high |pbar>` on the complementary index
    /// pair `i`; these are exactly the pure states with X-form projectors.
    pub fn two_level(n_qubits: u32, pair: usize, c_low: C64, c_high: C64) -> Result<Self> {
        let (p, q) = pair_basis(pair, n_qubits)?;
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::StorageLimit {
                n_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << n_qubits];
        amps[p] = c_low;
        amps[q] = c_high;
        PureState::new(amps)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Rank-one projector `|psi><psi|`.
    pub fn density(&self) -> DenseHermitian {
        let dim = self.amps.len();
        let mat = DMatrix::from_fn(dim, dim, |i, j| self.amps[i] * self.amps[j].conj());
        DenseHermitian {
            n_qubits: self.n_qubits,
            mat,
        }
    }
}

/// Cut of the qubit labels into two nonempty sides.
///
/// Canonicalized so that side A contains qubit 0; the complement of a cut is
/// the same cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    n_qubits: u32,
    mask: u64,
}

impl Bipartition {
    /// Cut with the given qubit labels on one side.
    pub fn new(n_qubits: u32, side: &[usize]) -> Result<Self> {
        if !(2..=63).contains(&n_qubits) {
            return Err(Error::Domain(format!(
                "bipartitions need 2..=63 qubits, got {n_qubits}"
            )));
        }
        let full = (1u64 << n_qubits) - 1;
        let mut mask = 0u64;
        for &q in side {
            if q >= n_qubits as usize {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    max: n_qubits as usize - 1,
                });
            }
            let bit = 1u64 << q;
            if mask & bit != 0 {
                return Err(Error::Domain(format!("duplicate qubit {q} in bipartition")));
            }
            mask |= bit;
        }
        if mask == 0 || mask == full {
            return Err(Error::Domain(
                "a bipartition needs a nonempty proper subset of the qubits".into(),
            ));
        }
        if mask & 1 == 0 {
            mask ^= full;
        }
        Ok(Bipartition { n_qubits, mask })
    }

    /// All `2^(N-1) - 1` distinct cuts.
    pub fn enumerate(n_qubits: u32) -> Result<Vec<Bipartition>> {
        if !(2..=MAX_DENSE_QUBITS).contains(&n_qubits) {
            return Err(Error::Domain(format!(
                "bipartition enumeration supports 2..={MAX_DENSE_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let full = (1u64 << n_qubits) - 1;
        Ok((1..full)
            .step_by(2)
            .map(|mask| Bipartition { n_qubits, mask })
            .collect())
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Labels on the side containing qubit 0, ascending.
    pub fn side_a(&self) -> Vec<usize> {
        (0..self.n_qubits as usize)
            .filter(|&q| self.mask & (1 << q) != 0)
            .collect()
    }

    /// Labels on the other side, ascending.
    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n_qubits as usize)
            .filter(|&q| self.mask & (1 << q) == 0)
            .collect()
    }
}

/// Purity `tr(rho_A^2)` of the reduced state on either side of the cut
/// (both sides have the same purity for a pure global state).
pub fn purity_of_bipartition(psi: &PureState, cut: &Bipartition) -> Result<f64> {
    if cut.n_qubits() != psi.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: psi.n_qubits(),
            right: cut.n_qubits(),
        });
    }
    let n = psi.n_qubits() as usize;
    let side_a = cut.side_a();
    let side_b = cut.side_b();
    // rows on the smaller side keeps the Gram matrix small
    let (rows, cols) = if side_a.len() <= side_b.len() {
        (side_a, side_b)
    } else {
        (side_b, side_a)
    };
    let project = |s: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((s >> (n - 1 - q)) & 1))
    };
    let mut m = DMatrix::<C64>::zeros(1 << rows.len(), 1 << cols.len());
    for (s, &amp) in psi.amplitudes().iter().enumerate() {
        m[(project(s, &rows), project(s, &cols))] = amp;
    }
    let g = &m * m.adjoint();
    Ok(g.iter().map(|c| c.norm_sqr()).sum())
}

/// Genuinely multipartite concurrence of a pure state from first
/// principles: `min over cuts of sqrt(2 (1 - purity))`.
pub fn pure_gm_concurrence(psi: &PureState) -> Result<f64> {
    if psi.n_qubits() < 2 {
        return Err(Error::Domain(
            "multipartite concurrence needs at least 2 qubits".into(),
        ));
    }
    let mut min_c = f64::INFINITY;
    for cut in Bipartition::enumerate(psi.n_qubits())? {
        let purity = purity_of_bipartition(psi, &cut)?;
        min_c = min_c.min((2.0 * (1.0 - purity)).max(0.0).sqrt());
    }
    Ok(min_c)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations:
/// real eigenvalues (unsorted) plus the unitary of column eigenvectors.
///
/// nalgebra's `SymmetricEigen` silently returns wrong eigenvalues for
/// complex Hermitian input with nontrivial off-diagonal phases, so the
/// oracle carries its own solver. Jacobi converges quadratically and is
/// numerically exemplary at the small dimensions used here.
fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = m
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[(p, q)];
                let r = z.norm();
                if r == 0.0 {
                    continue;
                }
                // factor out the phase: the block equals
                // diag(e^{i phi}, 1) [[app, r], [r, aqq]] diag(e^{-i phi}, 1)
                let phase = z / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0, the
                // rotation tangent that annihilates the off-diagonal
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // plane unitary G = diag(e^{i phi}, 1) * [[c, -s], [s, c]]
                let gpp = phase * c;
                let gpq = phase * -s;
                let gqp = C64::from(s);
                let gqq = C64::from(c);
                // A <- A G on columns p, q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                // A <- G^dagger A on rows p, q
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                // the rotation zeroes these by construction; pin them to
                // keep the iteration exactly Hermitian
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::from(a[(p, p)].re);
                a[(q, q)] = C64::from(a[(q, q)].re);
                // V <- V G accumulates eigenvectors
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// `U diag(sqrt(max(eig, 0))) U^dagger` of a Hermitian PSD matrix.
fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (eigs, vectors) = hermitian_eigen(m);
    let mut scaled = vectors.clone();
    for (j, &e) in eigs.iter().enumerate() {
        let s = C64::from(e.max(0.0).sqrt());
        scaled.column_mut(j).iter_mut().for_each(|c| *c *= s);
    }
    &scaled * vectors.adjoint()
}

/// Two-qubit concurrence from the spin-flip spectrum: with
/// `rho_tilde = (Y (x) Y) rho* (Y (x) Y)` and `lambda_i` the decreasing
/// square roots of the eigenvalues of `sqrt(rho) rho_tilde sqrt(rho)`,
/// `C = max{0, lambda_1 - lambda_2 - lambda_3 - lambda_4}`.
pub fn wootters_concurrence(rho: &DenseHermitian) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::Domain(format!(
            "the spin-flip concurrence is defined for 2 qubits, got {}",
            rho.n_qubits()
        )));
    }
    rho.validate_density()?;
    let yy = {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 3)] = C64::from(-1.0);
        m[(1, 2)] = C64::from(1.0);
        m[(2, 1)] = C64::from(1.0);
        m[(3, 0)] = C64::from(-1.0);
        m
    };
    let tilde = &yy * rho.mat.map(|c| c.conj()) * &yy;
    let root = psd_sqrt(&rho.mat);
    let flip = hermitize(&root * tilde * &root);
    let (eigs, _) = hermitian_eigen(&flip);
    let mut lambda: Vec<f64> = eigs.iter().map(|&e| e.max(0.0).sqrt()).collect();
    lambda.sort_by(|x, y| y.total_cmp(x));
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Evolve a dense matrix through the product amplitude-damping channel by
/// explicit Kraus products, one qubit at a time.
pub fn dense_damp(rho: &DenseHermitian, spec: &DampingSpec) -> Result<DenseHermitian> {
    let n = rho.n_qubits();
    if spec.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: spec.n_qubits(),
        });
    }
    if n > MAX_KRAUS_QUBITS {
        return Err(Error::StorageLimit {
            n_qubits: n,
            max: MAX_KRAUS_QUBITS,
        });
    }
    let mut m = rho.mat.clone();
    for (k, &p) in spec.probabilities().iter().enumerate() {
        let mut k0 = DMatrix::<C64>::zeros(2, 2);
        k0[(0, 0)] = C64::from(1.0);
        k0[(1, 1)] = C64::from((1.0 - p).sqrt());
        let mut k1 = DMatrix::<C64>::zeros(2, 2);
        k1[(0, 1)] = C64::from(p.sqrt());
        let left = DMatrix::<C64>::identity(1 << k, 1 << k);
        let right_dim = 1usize << (n as usize - 1 - k);
        let right = DMatrix::<C64>::identity(right_dim, right_dim);
        let big0 = left.kronecker(&k0).kronecker(&right);
        let big1 = left.kronecker(&k1).kronecker(&right);
        m = &big0 * &m * big0.adjoint() + &big1 * &m * big1.adjoint();
    }
    Ok(DenseHermitian {
        n_qubits: n,
        mat: hermitize(m),
    })
}
