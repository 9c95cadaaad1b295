//! Seeded generation of X-states distributed by the normalized
//! Hilbert-Schmidt (Lebesgue) measure on the X-state body.
//!
//! The measure factorizes: the diagonal marginal is Dirichlet with weight 2
//! on every pair-participating entry (each anti-diagonal disk has area
//! π·ρ_tt·ρ_jj, and the two area factors cancel the Dirichlet density) and
//! weight 1 on the center entry when mn is odd; given the diagonal, each
//! anti-diagonal entry is uniform on the disk of radius √(ρ_tt·ρ_jj). Both
//! steps are exact and rejection-free.
//!
//! # Stream contract
//!
//! The random source is ChaCha8 (`rand_chacha::ChaCha8Rng`, 256-bit state),
//! keyed by `seed_from_u64(seed)`; substream k of a seed is the same key
//! with `set_stream(k)`. Per state the draws are, in order: for each
//! diagonal index i = 1…N, two uniforms u₁, u₂ for a Gamma(2) variate
//! −ln(u₁u₂) (one uniform, −ln(u), at the center); then for each pair
//! t = 1…P one uniform for the radius (r = R√u) and one for the angle
//! (θ = 2πu). Uniforms for logarithms are taken as 1 − next_f64 ∈ (0, 1].
//! Identical (dims, seed) therefore reproduce identical states bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{Dims, XState};

/// The generator every sampling path uses.
pub type StreamRng = ChaCha8Rng;

/// One run of sampling work: dimensions, master seed, number of states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub dims: Dims,
    pub seed: u64,
    pub count: u64,
}

impl SampleConfig {
    pub fn new(dims: Dims, seed: u64, count: u64) -> Result<Self> {
        if count < 1 {
            return Err(Error::CountTooSmall { min: 1, got: count });
        }
        Ok(SampleConfig { dims, seed, count })
    }
}

/// Master stream for `seed` (substream 0).
pub fn master_rng(seed: u64) -> StreamRng {
    substream(seed, 0)
}

/// Substream `index` of `seed`; distinct indices give statistically
/// independent streams and the (seed, index) → stream map is fixed.
pub fn substream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

// Uniform in (0, 1], safe under the logarithm.
fn uniform_open(rng: &mut StreamRng) -> f64 {
    1.0 - rng.gen::<f64>()
}

// Gamma(1) = Exp(1) as −ln u.
fn gamma1(rng: &mut StreamRng) -> f64 {
    -uniform_open(rng).ln()
}

// Gamma(2) as −ln(u₁u₂).
fn gamma2(rng: &mut StreamRng) -> f64 {
    gamma1(rng) + gamma1(rng)
}

/// Diagonal draw: Dirichlet with α = 2 on pair-participating entries and
/// α = 1 on the center, via normalized Gamma variates. Output sums to 1
/// with every entry ≥ 0.
pub fn sample_diagonal(dims: Dims, rng: &mut StreamRng) -> Vec<f64> {
    let center = dims.center_index();
    let mut diag: Vec<f64> = (1..=dims.product())
        .map(|i| {
            if center == Some(i) {
                gamma1(rng)
            } else {
                gamma2(rng)
            }
        })
        .collect();
    let sum: f64 = diag.iter().sum();
    for d in &mut diag {
        *d /= sum;
    }
    diag
}

/// Full state draw: diagonal from [`sample_diagonal`], then each
/// anti-diagonal entry uniform on its disk of radius √(ρ_tt·ρ_jj).
pub fn sample_state(dims: Dims, rng: &mut StreamRng) -> XState {
    let diag = sample_diagonal(dims, rng);
    let offdiag = (1..=dims.pair_count())
        .map(|t| {
            let j = dims.partner(t);
            let radius_sq = diag[t - 1] * diag[j - 1];
            let u: f64 = rng.gen();
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            Complex64::from_polar((radius_sq * u).sqrt(), theta)
        })
        .collect();
    XState::new(dims, diag, offdiag).expect("sampled components have matching lengths")
}

#[derive(Serialize)]
struct SampleRecord<'a> {
    diag: &'a [f64],
    offdiag: Vec<[f64; 2]>,
}

/// Writes states as JSON lines `{"diag": […], "offdiag": [[re, im], …]}`,
/// one record per state, for external auditing.
pub fn write_jsonl<W: std::io::Write>(cfg: &SampleConfig, mut out: W) -> std::io::Result<()> {
    let mut rng = master_rng(cfg.seed);
    for _ in 0..cfg.count {
        let state = sample_state(cfg.dims, &mut rng);
        let record = SampleRecord {
            diag: state.diag(),
            offdiag: state.offdiag().iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
