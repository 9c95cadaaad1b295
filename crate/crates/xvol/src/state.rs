//! X-state data model: subsystem dimensions, diagonal/anti-diagonal storage,
//! closed-form eigenvalues, and positivity checks.
//!
//! An m×n X-state is an mn×mn density matrix whose only non-zero entries sit
//! on the main diagonal and the main anti-diagonal. Hermiticity pins the lower
//! anti-diagonal half to the conjugate of the upper half, so a state is fully
//! described by N = mn real diagonal entries and P = ⌊N/2⌋ complex entries,
//! entry `t` holding ρ_{t,N+1−t} for t = 1…P (1-based, matching the usual
//! matrix-index convention).
//!
//! Each anti-diagonal pair (t, N+1−t) spans an independent 2×2 block with
//! eigenvalues
//!
//! ```text
//! λ± = ½ [ ρ_tt + ρ_jj ± √((ρ_tt − ρ_jj)² + 4|ρ_tj|²) ],   j = N+1−t,
//! ```
//!
//! so positivity of the whole matrix reduces to ρ_tt·ρ_jj ≥ |ρ_tj|² per pair
//! plus non-negative diagonal entries. When N is odd the middle diagonal
//! entry ρ_cc, c = (N+1)/2, is an eigenvalue on its own.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Validated pair (m, n) of subsystem dimensions with derived metadata.
///
/// Both dimensions must be at least 2; a 1-dimensional factor would collapse
/// the bipartite structure. All index conventions downstream (pair indices,
/// the center, partial-transpose images) derive from a value of this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    m: u32,
    n: u32,
}

impl Dims {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidDims { m, n });
        }
        Ok(Dims { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total dimension N = m·n of the joint space.
    pub fn product(&self) -> usize {
        self.m as usize * self.n as usize
    }

    /// Number of anti-diagonal pairs, P = ⌊N/2⌋.
    pub fn pair_count(&self) -> usize {
        self.product() / 2
    }

    /// True iff N is odd, i.e. the anti-diagonal crosses the diagonal.
    pub fn has_center(&self) -> bool {
        self.product() % 2 == 1
    }

    /// 1-based index c = (N+1)/2 of the center entry, when N is odd.
    pub fn center_index(&self) -> Option<usize> {
        self.has_center().then(|| self.product().div_ceil(2))
    }

    /// Partner index j = N+1−i of a 1-based anti-diagonal index.
    pub fn partner(&self, i: usize) -> usize {
        self.product() + 1 - i
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// An m×n X-state: N real diagonal entries plus P complex anti-diagonal
/// entries (upper half only; the lower half is their conjugate).
///
/// Construction checks structure (vector lengths) only. Trace and positivity
/// are separate, report-style checks, so states violating them can be built
/// and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct XState {
    dims: Dims,
    diag: Vec<f64>,
    offdiag: Vec<Complex64>,
}

impl XState {
    pub fn new(dims: Dims, diag: Vec<f64>, offdiag: Vec<Complex64>) -> Result<Self> {
        if diag.len() != dims.product() {
            return Err(Error::DiagLength {
                expected: dims.product(),
                got: diag.len(),
            });
        }
        if offdiag.len() != dims.pair_count() {
            return Err(Error::OffdiagLength {
                expected: dims.pair_count(),
                got: offdiag.len(),
            });
        }
        Ok(XState {
            dims,
            diag,
            offdiag,
        })
    }

    /// Exact constructor: rational inputs are validated exactly (trace = 1,
    /// non-negative diagonal, ρ_tt·ρ_jj ≥ Re² + Im² per pair) before being
    /// rounded to floating point.
    pub fn from_rationals(
        dims: Dims,
        diag: &[BigRational],
        offdiag: &[(BigRational, BigRational)],
    ) -> Result<Self> {
        if diag.len() != dims.product() {
            return Err(Error::DiagLength {
                expected: dims.product(),
                got: diag.len(),
            });
        }
        if offdiag.len() != dims.pair_count() {
            return Err(Error::OffdiagLength {
                expected: dims.pair_count(),
                got: offdiag.len(),
            });
        }
        let trace: BigRational = diag.iter().sum();
        if !trace.is_one() {
            return Err(Error::TraceNotOne {
                got: trace.to_string(),
            });
        }
        for (i, d) in diag.iter().enumerate() {
            if d < &BigRational::zero() {
                return Err(Error::NegativeDiagonal { index: i + 1 });
            }
        }
        for t in 1..=dims.pair_count() {
            let j = dims.partner(t);
            let (re, im) = &offdiag[t - 1];
            if &diag[t - 1] * &diag[j - 1] < re * re + im * im {
                return Err(Error::PairNotPositive { pair: t });
            }
        }
        let diag = diag.iter().map(|d| d.to_f64().unwrap()).collect();
        let offdiag = offdiag
            .iter()
            .map(|(re, im)| Complex64::new(re.to_f64().unwrap(), im.to_f64().unwrap()))
            .collect();
        Ok(XState {
            dims,
            diag,
            offdiag,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[Complex64] {
        &self.offdiag
    }

    /// Diagonal entry ρ_ii by 1-based index.
    pub fn diag_entry(&self, i: usize) -> f64 {
        self.diag[i - 1]
    }

    /// Anti-diagonal entry ρ_{t,N+1−t} by 1-based pair index t ≤ P.
    pub fn offdiag_entry(&self, t: usize) -> Complex64 {
        self.offdiag[t - 1]
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Closed-form spectrum: one [`EigenPair`] per anti-diagonal pair, plus
    /// the center diagonal entry as a singleton eigenvalue when N is odd.
    pub fn eigenvalues(&self) -> Spectrum {
        let pairs = (1..=self.dims.pair_count())
            .map(|t| {
                let j = self.dims.partner(t);
                let a = self.diag[t - 1];
                let b = self.diag[j - 1];
                // (a+b)² − 4(ab − |ρ|²) = (a−b)² + 4|ρ|², never negative.
                let disc = ((a - b) * (a - b) + 4.0 * self.offdiag[t - 1].norm_sqr()).sqrt();
                EigenPair {
                    lambda_plus: 0.5 * (a + b + disc),
                    lambda_minus: 0.5 * (a + b - disc),
                    pair_index: t,
                }
            })
            .collect();
        Spectrum {
            pairs,
            center: self.dims.center_index().map(|c| self.diag[c - 1]),
        }
    }

    /// Pairwise positivity test: ρ_tt·ρ_jj ≥ |ρ_tj|² − tol for every pair and
    /// every diagonal entry ≥ −tol. Equivalent to all eigenvalues ≥ −tol′.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        if self.diag.iter().any(|&d| d < -tol) {
            return false;
        }
        (1..=self.dims.pair_count()).all(|t| {
            let j = self.dims.partner(t);
            self.diag[t - 1] * self.diag[j - 1] >= self.offdiag[t - 1].norm_sqr() - tol
        })
    }

    /// Report-style validation of this (structurally sound) state.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate_parts(self.dims, &self.diag, &self.offdiag, tol)
    }
}

/// The two eigenvalues contributed by anti-diagonal pair `pair_index`,
/// i.e. by the 2×2 block on rows/columns (t, N+1−t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub pair_index: usize,
}

/// Full closed-form spectrum of an X-state.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
    /// ρ_cc for odd N; `None` otherwise.
    pub center: Option<f64>,
}

impl Spectrum {
    /// All N eigenvalues, unsorted.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .pairs
            .iter()
            .flat_map(|p| [p.lambda_plus, p.lambda_minus])
            .collect();
        v.extend(self.center);
        v
    }

    pub fn min(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.values().iter().sum()
    }
}

/// A single defect found by [`validate_parts`].
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    DiagLength {
        expected: usize,
        got: usize,
    },
    OffdiagLength {
        expected: usize,
        got: usize,
    },
    TraceDeviation {
        deviation: f64,
    },
    NegativeDiagonal {
        index: usize,
        value: f64,
    },
    /// ρ_tt·ρ_jj < |ρ_tj|² beyond tolerance for pair t.
    PairViolation {
        pair: usize,
        product: f64,
        magnitude_sq: f64,
    },
}

/// Outcome of validation; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn issues(&self) -> &[ValidationIssue] {
        &self.issues
    }

    /// |Σρ_ii − 1| when a trace deviation was recorded.
    pub fn trace_deviation(&self) -> Option<f64> {
        self.issues.iter().find_map(|i| match i {
            ValidationIssue::TraceDeviation { deviation } => Some(*deviation),
            _ => None,
        })
    }
}

/// Validate raw state components against `dims`: lengths, trace within
/// `tol` of 1, diagonal non-negativity, and per-pair positivity.
pub fn validate_parts(
    dims: Dims,
    diag: &[f64],
    offdiag: &[Complex64],
    tol: f64,
) -> ValidationReport {
    let mut issues = Vec::new();
    if diag.len() != dims.product() {
        issues.push(ValidationIssue::DiagLength {
            expected: dims.product(),
            got: diag.len(),
        });
    }
    if offdiag.len() != dims.pair_count() {
        issues.push(ValidationIssue::OffdiagLength {
            expected: dims.pair_count(),
            got: offdiag.len(),
        });
    }
    if !issues.is_empty() {
        // Length defects make index-based checks meaningless.
        return ValidationReport { issues };
    }
    let deviation = (diag.iter().sum::<f64>() - 1.0).abs();
    if deviation > tol {
        issues.push(ValidationIssue::TraceDeviation { deviation });
    }
    for (i, &d) in diag.iter().enumerate() {
        if d < -tol {
            issues.push(ValidationIssue::NegativeDiagonal {
                index: i + 1,
                value: d,
            });
        }
    }
    for t in 1..=dims.pair_count() {
        let j = dims.partner(t);
        let product = diag[t - 1] * diag[j - 1];
        let magnitude_sq = offdiag[t - 1].norm_sqr();
        if product < magnitude_sq - tol {
            issues.push(ValidationIssue::PairViolation {
                pair: t,
                product,
                magnitude_sq,
            });
        }
    }
    ValidationReport { issues }
}

/// Default tolerance for floating-point validation.
pub const DEFAULT_TOL: f64 = 1e-12;
