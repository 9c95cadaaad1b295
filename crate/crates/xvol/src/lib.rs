//! Volumes of bipartite X-states under the Hilbert-Schmidt measure.
//!
//! An m×n X-state is a density matrix supported on the main diagonal and
//! the main anti-diagonal. This crate computes, exactly, the volume of the
//! X-state body, the volume of its positive-partial-transpose (PPT) subset,
//! and the ratio between the two — (2/5)^(⌊m/2⌋·⌊n/2⌋) — and verifies those
//! closed forms against independent routes:
//!
//! - seeded Monte Carlo over the body (naive indicator and Rao-Blackwell
//!   conditional estimators, [`montecarlo`]);
//! - deterministic nested quadrature of the defining integrals and a dense
//!   partial-transpose + Jacobi eigensolver oracle ([`quadrature`]).
//!
//! The exact side lives in [`analytic`] (big-rational arithmetic with
//! explicit π powers), the combinatorial side in [`pt`] (how the partial
//! transpose permutes anti-diagonal entries), and the model itself in
//! [`state`]. [`sampler`] draws states from the normalized Lebesgue measure
//! on the body with a reproducible stream contract, and [`cli`] exposes the
//! whole thing as the `xvol` binary.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod pt;
pub mod quadrature;
pub mod sampler;
pub mod state;

pub use analytic::{
    beta, dirichlet_integral, i_min, i_zero, ratio, volume_ppt, volume_x, PiRational,
};
pub use error::{Error, Result};
pub use montecarlo::{estimate_naive, estimate_rao_blackwell, sweep, Estimate, Method};
pub use pt::{classify, ppt_check, pt_permute_index, PtClassification};
pub use sampler::{sample_diagonal, sample_state, SampleConfig};
pub use state::{Dims, EigenPair, Spectrum, ValidationReport, XState};
