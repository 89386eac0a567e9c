//! Genuinely multipartite concurrence of N-qubit X-form density matrices.
//!
//! An X-matrix is a density matrix whose only nonzero entries sit on the main
//! diagonal and the anti-diagonal. In the computational basis the anti-diagonal
//! couples each basis state to its bitwise complement, so the whole matrix is
//! determined by `n = 2^(N-1)` triples `(a_i, b_i, z_i)`: the two diagonal
//! weights of pair `i` and the coherence between them. This crate stores only
//! those triples, which keeps states with hundreds of qubits tractable as long
//! as they stay in X form.
//!
//! What lives where:
//!
//! * [`xmatrix`]: the compressed representation, validation, the closed-form
//!   genuinely multipartite concurrence `C = 2 max{0, max_i (|z_i| - w_i)}`
//!   with `w_i = sum_{j != i} sqrt(a_j b_j)`, mixing, qubit permutations, and
//!   the JSON interchange format.
//! * [`channels`]: local amplitude damping in closed form on the compressed
//!   representation: per-qubit decay probabilities, channel composition, and
//!   concurrence trajectories.
//! * [`ghz`]: generalized GHZ states `cos(α)|e..eg..g> + sin(α)|g..ge..e>`,
//!   their exact concurrence decay under uniform damping, critical noise
//!   probabilities, and entanglement half-lives. The analytic path works far
//!   beyond the explicit-storage limit (N of a million is fine).
//! * [`oracle`]: independent verification machinery built on dense linear
//!   algebra: dense Kraus evolution, Wootters concurrence from the spin-flip
//!   spectrum, pure-state concurrence from bipartition purities, and
//!   constructive biseparability certificates for states of zero concurrence.
//! * [`sweep`]: deterministic CSV tables for decay curves and critical-
//!   probability scans.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! * `x_state_concurrence`: build, validate, and measure an X state
//! * `ghz_amplitude_damping`: decay trajectory vs. the closed form
//! * `entanglement_lifetime`: critical probability and half-life scaling
//! * `biseparability_certificate`: certify a state that decayed past its
//!   critical probability
//! * `oracle_cross_checks`: formula vs. dense/eigenvalue oracles
//! * `figure_data`: CSV sweeps over N and tan(α)
//!
//! Try `cargo run --example ghz_amplitude_damping`.

pub mod channels;
mod error;
pub mod ghz;
pub mod oracle;
pub mod sweep;
pub mod xmatrix;

pub use error::{Error, Result};
pub use xmatrix::{ConcurrenceReport, PairEntry, XMatrix};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
