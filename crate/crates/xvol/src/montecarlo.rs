//! Monte Carlo estimators for the PPT volume fraction, with standard errors
//! and z-scores against the exact ratio.
//!
//! Two estimators share the same sample budget semantics:
//!
//! - `naive`: draw full states, count the fraction passing the PPT check
//!   (binomial standard error);
//! - `rao_blackwell`: draw only diagonals and average the conditional PPT
//!   probability given the diagonal, ∏ min(p,q)²/(p·q) over the coupled
//!   quadruples with p = ρ_ii·ρ_jj, q = ρ_kk·ρ_ll. Same mean, strictly less
//!   variance.
//!
//! Work is split into fixed 65536-sample chunks; chunk k consumes substream
//! k of the master seed and partial sums merge in chunk order with Kahan
//! compensation. The result is therefore bit-identical no matter how many
//! worker threads the surrounding rayon pool provides.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::analytic;
use crate::error::{Error, Result};
use crate::pt::{self, PtClassification};
use crate::sampler::{self, SampleConfig};
use crate::state::Dims;

/// Samples per substream chunk; part of the reproducibility contract.
pub const CHUNK_SAMPLES: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Naive,
    RaoBlackwell,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::RaoBlackwell => "rb",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Method::Naive),
            "rb" | "rao_blackwell" | "rao-blackwell" => Ok(Method::RaoBlackwell),
            other => Err(format!(
                "unknown method '{other}' (expected 'naive' or 'rb')"
            )),
        }
    }
}

/// One Monte Carlo result, ready for CSV/JSON emission.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub dims: Dims,
    pub method: Method,
    pub mean: f64,
    pub std_error: f64,
    pub count: u64,
    pub seed: u64,
    /// Exact ratio as f64, the reference for the z-score.
    pub analytic_value: f64,
    pub z_score: f64,
}

impl Estimate {
    pub const CSV_HEADER: &'static str = "m,n,method,count,seed,mean,std_error,analytic,z_score";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.dims.m(),
            self.dims.n(),
            self.method,
            self.count,
            self.seed,
            self.mean,
            self.std_error,
            self.analytic_value,
            self.z_score
        )
    }
}

impl Serialize for Estimate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Estimate", 9)?;
        s.serialize_field("m", &self.dims.m())?;
        s.serialize_field("n", &self.dims.n())?;
        s.serialize_field("method", self.method.as_str())?;
        s.serialize_field("count", &self.count)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("mean", &self.mean)?;
        s.serialize_field("std_error", &self.std_error)?;
        s.serialize_field("analytic", &self.analytic_value)?;
        s.serialize_field("z_score", &self.z_score)?;
        s.end()
    }
}

// Compensated accumulator; summation order fixes the result bit pattern.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

fn chunk_lengths(count: u64) -> Vec<u64> {
    let full = count / CHUNK_SAMPLES;
    let rest = count % CHUNK_SAMPLES;
    let mut lengths = vec![CHUNK_SAMPLES; full as usize];
    if rest > 0 {
        lengths.push(rest);
    }
    lengths
}

fn finish(
    dims: Dims,
    method: Method,
    mean: f64,
    std_error: f64,
    count: u64,
    seed: u64,
) -> Estimate {
    let analytic_value = analytic::rational_to_f64(&analytic::ratio(dims));
    let z_score = if std_error > 0.0 {
        (mean - analytic_value) / std_error
    } else if mean == analytic_value {
        0.0
    } else {
        f64::INFINITY.copysign(mean - analytic_value)
    };
    Estimate {
        dims,
        method,
        mean,
        std_error,
        count,
        seed,
        analytic_value,
        z_score,
    }
}

/// Indicator estimator: fraction of sampled states passing the PPT check.
pub fn estimate_naive(cfg: &SampleConfig) -> Result<Estimate> {
    if cfg.count < 2 {
        return Err(Error::CountTooSmall {
            min: 2,
            got: cfg.count,
        });
    }
    let cls = pt::classify(cfg.dims);
    let hits: Vec<u64> = chunk_lengths(cfg.count)
        .into_par_iter()
        .enumerate()
        .map(|(index, len)| {
            let mut rng = sampler::substream(cfg.seed, index as u64);
            let mut hits = 0u64;
            for _ in 0..len {
                let state = sampler::sample_state(cfg.dims, &mut rng);
                if pt::ppt_check(&state, &cls, 0.0).expect("classification matches dims") {
                    hits += 1;
                }
            }
            hits
        })
        .collect();
    let total: u64 = hits.iter().sum();
    let mean = total as f64 / cfg.count as f64;
    let std_error = (mean * (1.0 - mean) / cfg.count as f64).sqrt();
    Ok(finish(
        cfg.dims,
        Method::Naive,
        mean,
        std_error,
        cfg.count,
        cfg.seed,
    ))
}

/// Conditional PPT probability of one sampled diagonal: the product of
/// min(p,q)²/(p·q) over quadruples. A degenerate pair (p or q zero) means a
/// point disk, contributing factor 0.
fn conditional_ppt_probability(diag: &[f64], cls: &PtClassification) -> f64 {
    let mut w = 1.0;
    for &(i, j, k, l) in cls.quadruples() {
        let p = diag[i - 1] * diag[j - 1];
        let q = diag[k - 1] * diag[l - 1];
        if p <= 0.0 || q <= 0.0 {
            return 0.0;
        }
        let m = p.min(q);
        w *= m * m / (p * q);
    }
    w
}

/// Rao-Blackwellized estimator: averages the conditional PPT probability
/// over diagonal draws only. Unbiased for the same ratio with variance at
/// most the naive estimator's at equal count.
pub fn estimate_rao_blackwell(cfg: &SampleConfig) -> Result<Estimate> {
    if cfg.count < 2 {
        return Err(Error::CountTooSmall {
            min: 2,
            got: cfg.count,
        });
    }
    let cls = pt::classify(cfg.dims);
    let partials: Vec<(f64, f64)> = chunk_lengths(cfg.count)
        .into_par_iter()
        .enumerate()
        .map(|(index, len)| {
            let mut rng = sampler::substream(cfg.seed, index as u64);
            let mut sum = KahanSum::default();
            let mut sum_sq = KahanSum::default();
            for _ in 0..len {
                let diag = sampler::sample_diagonal(cfg.dims, &mut rng);
                let w = conditional_ppt_probability(&diag, &cls);
                sum.add(w);
                sum_sq.add(w * w);
            }
            (sum.value(), sum_sq.value())
        })
        .collect();
    let mut sum = KahanSum::default();
    let mut sum_sq = KahanSum::default();
    for (s, s2) in partials {
        sum.add(s);
        sum_sq.add(s2);
    }
    let count = cfg.count as f64;
    let mean = sum.value() / count;
    let variance = ((sum_sq.value() - sum.value() * sum.value() / count) / (count - 1.0)).max(0.0);
    let std_error = (variance / count).sqrt();
    Ok(finish(
        cfg.dims,
        Method::RaoBlackwell,
        mean,
        std_error,
        cfg.count,
        cfg.seed,
    ))
}

pub fn estimate(cfg: &SampleConfig, method: Method) -> Result<Estimate> {
    match method {
        Method::Naive => estimate_naive(cfg),
        Method::RaoBlackwell => estimate_rao_blackwell(cfg),
    }
}

/// Cartesian product of runs over dimensions, counts and seeds, in
/// dims-major, then count-major, then seed order.
pub fn sweep(
    dims_list: &[Dims],
    counts: &[u64],
    seeds: &[u64],
    method: Method,
) -> Result<Vec<Estimate>> {
    if dims_list.is_empty() {
        return Err(Error::EmptySweep { what: "dims" });
    }
    if counts.is_empty() {
        return Err(Error::EmptySweep { what: "counts" });
    }
    if seeds.is_empty() {
        return Err(Error::EmptySweep { what: "seeds" });
    }
    let mut rows = Vec::with_capacity(dims_list.len() * counts.len() * seeds.len());
    for &dims in dims_list {
        for &count in counts {
            for &seed in seeds {
                rows.push(estimate(&SampleConfig::new(dims, seed, count)?, method)?);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: u32, n: u32) -> Dims {
        Dims::new(m, n).unwrap()
    }

    fn cfg(m: u32, n: u32, seed: u64, count: u64) -> SampleConfig {
        SampleConfig::new(dims(m, n), seed, count).unwrap()
    }

    #[test]
    fn both_estimators_reject_tiny_counts() {
        let c = cfg(2, 2, 0, 1);
        assert_eq!(
            estimate_naive(&c),
            Err(Error::CountTooSmall { min: 2, got: 1 })
        );
        assert_eq!(
            estimate_rao_blackwell(&c),
            Err(Error::CountTooSmall { min: 2, got: 1 })
        );
    }

    #[test]
    fn naive_matches_analytic_at_2x2() {
        let e = estimate_naive(&cfg(2, 2, 101, 200_000)).unwrap();
        assert!((e.analytic_value - 0.4).abs() < 1e-15);
        assert!(e.z_score.abs() < 4.0, "z = {}", e.z_score);
        assert!(e.mean > 0.0 && e.mean < 1.0);
    }

    #[test]
    fn rao_blackwell_matches_analytic_at_2x3() {
        let e = estimate_rao_blackwell(&cfg(2, 3, 55, 100_000)).unwrap();
        assert!(e.z_score.abs() < 4.0, "z = {}", e.z_score);
    }

    #[test]
    fn rao_blackwell_std_error_beats_naive() {
        let c = cfg(2, 2, 7, 50_000);
        let naive = estimate_naive(&c).unwrap();
        let rb = estimate_rao_blackwell(&c).unwrap();
        assert!(
            rb.std_error < naive.std_error,
            "rb {} vs naive {}",
            rb.std_error,
            naive.std_error
        );
    }

    #[test]
    fn estimates_are_deterministic_and_worker_independent() {
        let c = cfg(2, 3, 42, 150_000);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| estimate_rao_blackwell(&c).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| estimate_rao_blackwell(&c).unwrap());
        assert_eq!(single, multi);
        assert_eq!(
            serde_json::to_string(&single).unwrap(),
            serde_json::to_string(&multi).unwrap()
        );
        let again = estimate_rao_blackwell(&c).unwrap();
        assert_eq!(single, again);
    }

    #[test]
    fn unbiasedness_at_small_scale() {
        // 100 independent estimates of 10⁴ samples each: the grand mean
        // stays within 4 grand standard errors of 2/5.
        let runs: Vec<Estimate> = (0..100)
            .map(|seed| estimate_naive(&cfg(2, 2, seed, 10_000)).unwrap())
            .collect();
        let grand_mean: f64 = runs.iter().map(|e| e.mean).sum::<f64>() / runs.len() as f64;
        let grand_var: f64 = runs
            .iter()
            .map(|e| (e.mean - grand_mean).powi(2))
            .sum::<f64>()
            / (runs.len() as f64 - 1.0);
        let grand_se = (grand_var / runs.len() as f64).sqrt();
        assert!(
            (grand_mean - 0.4).abs() < 4.0 * grand_se,
            "grand mean {grand_mean} ± {grand_se}"
        );
    }

    #[test]
    fn rao_blackwell_dominates_across_dims() {
        // Sample variance of the per-draw values, 20 paired runs per dims.
        for (m, n) in [(2, 2), (2, 3), (3, 3), (4, 4)] {
            let mut rb_var = 0.0;
            let mut naive_var = 0.0;
            for seed in 0..20 {
                let c = cfg(m, n, seed, 5_000);
                let naive = estimate_naive(&c).unwrap();
                let rb = estimate_rao_blackwell(&c).unwrap();
                naive_var += naive.std_error * naive.std_error;
                rb_var += rb.std_error * rb.std_error;
            }
            assert!(rb_var < naive_var, "{m}x{n}: {rb_var} !< {naive_var}");
        }
    }

    #[test]
    fn ratio_decays_exponentially_with_dimension() {
        let mut means = Vec::new();
        for (m, n) in [(2, 2), (4, 4), (6, 6)] {
            let e = estimate_rao_blackwell(&cfg(m, n, 3, 100_000)).unwrap();
            assert!(
                (e.mean - e.analytic_value).abs() < 3.0 * e.std_error,
                "{m}x{n}: mean {} vs {}",
                e.mean,
                e.analytic_value
            );
            means.push(e.mean);
        }
        assert!(means[0] > means[1] && means[1] > means[2]);
    }

    #[test]
    fn degenerate_diagonal_gives_zero_weight() {
        let cls = pt::classify(dims(2, 2));
        assert_eq!(
            conditional_ppt_probability(&[0.0, 0.5, 0.25, 0.25], &cls),
            0.0
        );
        assert_eq!(
            conditional_ppt_probability(&[0.5, 0.0, 0.0, 0.5], &cls),
            0.0
        );
        let w = conditional_ppt_probability(&[0.25; 4], &cls);
        assert!((w - 1.0).abs() < 1e-15); // equal products: min(p,q)²/(pq) = 1
    }

    #[test]
    fn sweep_shapes_and_errors() {
        let rows = sweep(
            &[dims(2, 2), dims(2, 3)],
            &[10_000],
            &[9],
            Method::RaoBlackwell,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].dims, dims(2, 2));
        assert_eq!(rows[1].dims, dims(2, 3));

        assert_eq!(
            sweep(&[], &[10], &[1], Method::Naive),
            Err(Error::EmptySweep { what: "dims" })
        );
        assert_eq!(
            sweep(&[dims(2, 2)], &[], &[1], Method::Naive),
            Err(Error::EmptySweep { what: "counts" })
        );
        assert_eq!(
            sweep(&[dims(2, 2)], &[10], &[], Method::Naive),
            Err(Error::EmptySweep { what: "seeds" })
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]
            #[test]
            fn means_always_land_in_unit_interval(seed in any::<u64>(), naive in any::<bool>()) {
                let c = cfg(2, 3, seed, 500);
                let method = if naive { Method::Naive } else { Method::RaoBlackwell };
                let e = estimate(&c, method).unwrap();
                prop_assert!((0.0..=1.0).contains(&e.mean));
                prop_assert!(e.std_error >= 0.0);
            }
        }
    }

    #[test]
    fn csv_and_json_schemas() {
        let e = estimate_naive(&cfg(2, 2, 5, 1_000)).unwrap();
        let row = e.to_csv_row();
        assert_eq!(row.split(',').count(), 9);
        assert!(row.starts_with("2,2,naive,1000,5,"));
        let json: serde_json::Value = serde_json::to_value(&e).unwrap();
        for key in [
            "m",
            "n",
            "method",
            "count",
            "seed",
            "mean",
            "std_error",
            "analytic",
            "z_score",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
