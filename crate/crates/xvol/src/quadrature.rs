//! Brute-force oracles, independent of the fast paths they validate:
//! deterministic nested Gauss-Legendre quadrature for the volume integrals,
//! a dense matrix embedding with an explicit partial transpose, and a
//! self-contained cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Nothing here is used by the production code paths; the CLI `verify`
//! command and the test suites drive these against the closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{Dims, XState};

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

fn gl5<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for i in 0..5 {
        acc += GL5_WEIGHTS[i] * f(mid + half * GL5_NODES[i]);
    }
    acc * half
}

/// Composite 5-point Gauss-Legendre rule with `subdivisions` equal panels.
fn composite_gl5<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, subdivisions: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / subdivisions as f64;
    let mut acc = 0.0;
    for k in 0..subdivisions {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == subdivisions {
            b
        } else {
            a + (k + 1) as f64 * h
        };
        acc += gl5(f, lo, hi);
    }
    acc
}

/// ∫∫ f(x, y) over the 2-simplex {x, y ≥ 0, x + y ≤ 1}.
pub fn quad_simplex2<F: Fn(f64, f64) -> f64>(f: F, subdivisions: usize) -> f64 {
    composite_gl5(
        &|x| composite_gl5(&|y| f(x, y), 0.0, 1.0 - x, subdivisions),
        0.0,
        1.0,
        subdivisions,
    )
}

/// ∫∫∫ f(x, y, z) over the 3-simplex {x, y, z ≥ 0, x + y + z ≤ 1}.
pub fn quad_simplex3<F: Fn(f64, f64, f64) -> f64>(f: F, subdivisions: usize) -> f64 {
    composite_gl5(
        &|x| {
            composite_gl5(
                &|y| composite_gl5(&|z| f(x, y, z), 0.0, 1.0 - x - y, subdivisions),
                0.0,
                1.0 - x,
                subdivisions,
            )
        },
        0.0,
        1.0,
        subdivisions,
    )
}

/// Triple integral of min[x₁(1−x₁−x₂−x₃), x₂x₃]² over the 3-simplex,
/// evaluated by integrating the closed innermost antiderivative
/// (1/3)·x₁²x₂²(1−x₁−x₂)³/(x₁+x₂)² over the 2-simplex. The inner range
/// splits exactly at x₃ = x₁(1−x₁−x₂)/(x₁+x₂), where the two branches of
/// the minimum cross, so only the smooth outer integral is numeric.
///
/// Converges to 1/12600 ≈ 7.936508e-5; relative error ≤ 1e-6 needs about
/// 48 subdivisions (see module tests for the measured convergence order).
pub fn quad_i_zero(subdivisions: usize) -> f64 {
    quad_simplex2(
        |x1, x2| {
            let w = x1 + x2;
            if w <= 0.0 {
                // Removable 0/0: the x₁²x₂² factor dominates (x₁+x₂)².
                return 0.0;
            }
            let rest = 1.0 - w;
            x1 * x1 * x2 * x2 * rest * rest * rest / (3.0 * w * w)
        },
        subdivisions,
    )
}

/// Same integral evaluated the slow way: raw min integrand over the
/// 3-simplex with no split. The kink limits accuracy, so this is only a
/// coarse sanity check on [`quad_i_zero`].
pub fn quad_i_zero_3d(subdivisions: usize) -> f64 {
    quad_simplex3(
        |x1, x2, x3| {
            let v = f64::min(x1 * (1.0 - x1 - x2 - x3), x2 * x3);
            v * v
        },
        subdivisions,
    )
}

/// How the two disk-area factors of an anti-diagonal entry pair are bounded
/// in [`quad_ratio_2x2_with`]. `Min` is the PPT constraint; the other
/// variants are diagnostics (and a deliberate fault for mutation testing).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairBound {
    /// Each entry bounded by min of its own and its partner's diagonal
    /// product: the PPT case, integrating to 2/5 of the body volume.
    Min,
    /// Each entry keeps only its own positivity bound: recovers the full
    /// body volume (ratio 1).
    Own,
    /// Each entry takes its partner's bound instead: same volume by
    /// symmetry of the product.
    Swapped,
    /// min flipped to max; integrates to a ratio > 1. Used to prove the
    /// verification pipeline actually detects a broken integrand.
    Max,
}

/// Ratio of the PPT 2×2 X-state volume to the full 2×2 X-state volume by
/// direct numeric integration of min[ρ₁₁(1−ρ₁₁−ρ₂₂−ρ₃₃), ρ₂₂ρ₃₃]² over the
/// 3-simplex, normalized by the body volume integral value 1/7!.
///
/// The innermost (ρ₃₃) integral is taken numerically on the two subranges
/// meeting at the crossing point of the min arguments, where the integrand
/// is quadratic, so panel placement — not the antiderivative — handles the
/// kink. Converges to 0.4.
pub fn quad_ratio_2x2(subdivisions: usize) -> f64 {
    quad_ratio_2x2_with(subdivisions, PairBound::Min)
}

pub fn quad_ratio_2x2_with(subdivisions: usize, bound: PairBound) -> f64 {
    let factorial_7 = 5040.0;
    let integral = quad_simplex2(
        |x1, x2| {
            let rest = 1.0 - x1 - x2;
            if rest <= 0.0 {
                return 0.0;
            }
            let first = |z: f64| x1 * (rest - z);
            let second = |z: f64| x2 * z;
            match bound {
                PairBound::Own => gl5(&|z| first(z) * second(z), 0.0, rest),
                PairBound::Swapped => gl5(&|z| second(z) * first(z), 0.0, rest),
                PairBound::Min | PairBound::Max => {
                    let pick = |z: f64| {
                        let (a, b) = (first(z), second(z));
                        let v = if bound == PairBound::Min {
                            f64::min(a, b)
                        } else {
                            f64::max(a, b)
                        };
                        v * v
                    };
                    // The arguments cross at z* = x1·rest/(x1+x2); both
                    // branches are quadratics, integrated exactly by one
                    // 5-point panel each.
                    let w = x1 + x2;
                    let split = if w > 0.0 {
                        (x1 * rest / w).clamp(0.0, rest)
                    } else {
                        0.0
                    };
                    gl5(&pick, 0.0, split) + gl5(&pick, split, rest)
                }
            }
        },
        subdivisions,
    );
    integral * factorial_7
}

/// Fully stored Hermitian matrix, the oracle-side stand-in for an X-state.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    order: usize,
    entries: Vec<Complex64>,
}

impl DenseHermitian {
    /// Builds from row-major entries, rejecting matrices farther than 1e-14
    /// from their conjugate transpose.
    pub fn new(order: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::OrderMismatch {
                expected: order * order,
                got: entries.len(),
            });
        }
        let mut deviation: f64 = 0.0;
        for i in 0..order {
            for j in i..order {
                deviation =
                    deviation.max((entries[i * order + j] - entries[j * order + i].conj()).norm());
            }
        }
        if deviation > 1e-14 {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(DenseHermitian { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry by 0-based (row, col).
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.order + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }
}

/// Embeds an X-state into full storage; every entry off the diagonal and
/// anti-diagonal is exactly zero.
pub fn dense_from_x(state: &XState) -> DenseHermitian {
    let n = state.dims().product();
    let mut entries = vec![Complex64::ZERO; n * n];
    for (i, &d) in state.diag().iter().enumerate() {
        entries[i * n + i] = Complex64::new(d, 0.0);
    }
    for t in 1..=state.dims().pair_count() {
        let j = state.dims().partner(t);
        let v = state.offdiag_entry(t);
        entries[(t - 1) * n + (j - 1)] = v;
        entries[(j - 1) * n + (t - 1)] = v.conj();
    }
    DenseHermitian { order: n, entries }
}

/// Reads the X pattern back out of a dense embedding.
pub fn x_from_dense(mat: &DenseHermitian, dims: Dims) -> Result<XState> {
    if mat.order != dims.product() {
        return Err(Error::OrderMismatch {
            expected: dims.product(),
            got: mat.order,
        });
    }
    let n = dims.product();
    let diag = (0..n).map(|i| mat.get(i, i).re).collect();
    let offdiag = (1..=dims.pair_count())
        .map(|t| mat.get(t - 1, dims.partner(t) - 1))
        .collect();
    XState::new(dims, diag, offdiag)
}

/// Partial transpose of the first subsystem on a dense matrix: entry
/// ((a,b),(c,d)) of the output is entry ((c,b),(a,d)) of the input, with
/// row = a·n + b, col = c·n + d in the product basis.
pub fn dense_partial_transpose(mat: &DenseHermitian, dims: Dims) -> Result<DenseHermitian> {
    let order = dims.product();
    if mat.order != order {
        return Err(Error::OrderMismatch {
            expected: order,
            got: mat.order,
        });
    }
    let n = dims.n() as usize;
    let mut entries = vec![Complex64::ZERO; order * order];
    for row in 0..order {
        let (a, b) = (row / n, row % n);
        for col in 0..order {
            let (c, d) = (col / n, col % n);
            entries[(c * n + b) * order + (a * n + d)] = mat.entries[row * order + col];
        }
    }
    Ok(DenseHermitian { order, entries })
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps with complex
/// rotations, sorted ascending. Sweeps run until the off-diagonal Frobenius
/// norm falls below 1e-13 of the matrix norm.
pub fn eigenvalues_dense(mat: &DenseHermitian) -> Result<Vec<f64>> {
    let n = mat.order;
    let mut a = mat.entries.clone();
    let norm = mat.frobenius_norm();
    if n < 2 || norm == 0.0 {
        let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return Ok(eigs);
    }
    let target = 1e-13 * norm;
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = a[p * n + q];
                let r = g.norm();
                if r == 0.0 {
                    continue;
                }
                let alpha = a[p * n + p].re;
                let beta = a[q * n + q].re;
                let phase = g / r;
                let tau = (beta - alpha) / (2.0 * r);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp + s * phase.conj() * akq;
                    a[k * n + q] = c * akq - s * phase * akp;
                    a[p * n + k] = a[k * n + p].conj();
                    a[q * n + k] = a[k * n + q].conj();
                }
                a[p * n + p] = Complex64::new(alpha + t * r, 0.0);
                a[q * n + q] = Complex64::new(beta - t * r, 0.0);
                a[p * n + q] = Complex64::ZERO;
                a[q * n + p] = Complex64::ZERO;
            }
        }
    }
    Err(Error::NoConvergence { sweeps: max_sweeps })
}

/// Smallest eigenvalue, the oracle's PPT decision statistic.
pub fn min_eigenvalue(mat: &DenseHermitian) -> Result<f64> {
    Ok(eigenvalues_dense(mat)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler;
    use rand::Rng;

    fn dims(m: u32, n: u32) -> Dims {
        Dims::new(m, n).unwrap()
    }

    const I_ZERO: f64 = 1.0 / 12600.0;

    #[test]
    fn quad_i_zero_converges() {
        let q = quad_i_zero(48);
        assert!(
            (q - I_ZERO).abs() / I_ZERO <= 1e-6,
            "rel err {:e}",
            (q - I_ZERO).abs() / I_ZERO
        );
    }

    #[test]
    fn quad_i_zero_vanishing_inner_factor() {
        // The reduced integrand carries a factor x1², so the x1 = 0 edge
        // contributes nothing: integrating only over x1 < 1e-3 is tiny.
        let edge = composite_gl5(
            &|x1| {
                composite_gl5(
                    &|x2| {
                        let w = x1 + x2;
                        if w <= 0.0 {
                            0.0
                        } else {
                            let rest = 1.0 - w;
                            x1 * x1 * x2 * x2 * rest * rest * rest / (3.0 * w * w)
                        }
                    },
                    0.0,
                    1.0 - x1,
                    32,
                )
            },
            0.0,
            1e-3,
            32,
        );
        assert!(edge < 1e-9);
    }

    #[test]
    fn quad_i_zero_convergence_order() {
        // Error should drop by at least 2^2 per doubling; in practice the
        // rate is higher away from the corner.
        let e1 = (quad_i_zero(8) - I_ZERO).abs();
        let e2 = (quad_i_zero(16) - I_ZERO).abs();
        let e3 = (quad_i_zero(32) - I_ZERO).abs();
        assert!(e2 < e1 / 4.0, "e1={e1:e} e2={e2:e}");
        assert!(e3 < e2 / 4.0, "e2={e2:e} e3={e3:e}");
    }

    #[test]
    fn quad_i_zero_3d_sanity() {
        // Raw 3-D min integrand at coarse resolution: the kink caps the
        // accuracy, a loose band is all this cross-check claims.
        let q = quad_i_zero_3d(12);
        assert!((q - I_ZERO).abs() / I_ZERO < 1e-2, "got {q:e}");
    }

    #[test]
    fn quad_ratio_2x2_converges_to_two_fifths() {
        let q = quad_ratio_2x2(48);
        assert!((q - 0.4).abs() / 0.4 <= 1e-5, "got {q}");
    }

    #[test]
    fn quad_ratio_2x2_unconstrained_bounds_recover_body_volume() {
        let own = quad_ratio_2x2_with(32, PairBound::Own);
        assert!((own - 1.0).abs() <= 1e-5, "got {own}");
        let swapped = quad_ratio_2x2_with(32, PairBound::Swapped);
        assert!((swapped - 1.0).abs() <= 1e-5, "got {swapped}");
    }

    #[test]
    fn quad_ratio_2x2_fault_injection_detectable() {
        // max in place of min overshoots the body volume; anything near 0.4
        // would mean the fault is invisible to verification.
        let q = quad_ratio_2x2_with(16, PairBound::Max);
        assert!(q > 1.0, "got {q}");
    }

    #[test]
    fn simplex_quadrature_matches_dirichlet_closed_forms() {
        // ∫ x y (1-x-y) over the 2-simplex = 1/5! ... with Γ(2)³/Γ(6) = 1/120.
        let q2 = quad_simplex2(|x, y| x * y * (1.0 - x - y), 16);
        assert!((q2 - 1.0 / 120.0).abs() < 1e-12);
        // ∫ x y z (1-x-y-z) over the 3-simplex = Γ(2)⁴/Γ(8) = 1/5040.
        let q3 = quad_simplex3(|x, y, z| x * y * z * (1.0 - x - y - z), 8);
        assert!((q3 - 1.0 / 5040.0).abs() < 1e-12);
    }

    #[test]
    fn dense_embedding_round_trip() {
        let s = XState::new(
            dims(2, 3),
            vec![0.3, 0.1, 0.15, 0.05, 0.2, 0.2],
            vec![
                Complex64::new(0.1, -0.2),
                Complex64::new(0.05, 0.1),
                Complex64::new(-0.02, 0.03),
            ],
        )
        .unwrap();
        let dense = dense_from_x(&s);
        // Pattern of the 6×6 embedding: ρ16 at (0,5), ρ25 at (1,4), ρ34 at (2,3).
        assert_eq!(dense.get(0, 5), Complex64::new(0.1, -0.2));
        assert_eq!(dense.get(5, 0), Complex64::new(0.1, 0.2));
        assert_eq!(dense.get(1, 4), Complex64::new(0.05, 0.1));
        assert_eq!(dense.get(2, 3), Complex64::new(-0.02, 0.03));
        assert_eq!(dense.get(0, 1), Complex64::ZERO);
        assert_eq!(dense.get(3, 5), Complex64::ZERO);
        let back = x_from_dense(&dense, s.dims()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn dense_all_zero_offdiag_is_diagonal() {
        let s = XState::new(dims(2, 2), vec![0.25; 4], vec![Complex64::ZERO; 2]).unwrap();
        let dense = dense_from_x(&s);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(dense.get(i, j), Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn partial_transpose_fixes_identity() {
        let n = 6;
        let mut entries = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::ONE;
        }
        let id = DenseHermitian::new(n, entries).unwrap();
        let pt = dense_partial_transpose(&id, dims(2, 3)).unwrap();
        assert_eq!(pt, id);
    }

    #[test]
    fn partial_transpose_is_involution_and_trace_preserving() {
        let mut rng = sampler::master_rng(7);
        for d in [dims(2, 2), dims(2, 3), dims(3, 3)] {
            let s = sampler::sample_state(d, &mut rng);
            let dense = dense_from_x(&s);
            let pt = dense_partial_transpose(&dense, d).unwrap();
            assert!((pt.trace() - dense.trace()).abs() < 1e-15);
            let back = dense_partial_transpose(&pt, d).unwrap();
            assert_eq!(back, dense);
        }
    }

    #[test]
    fn partial_transpose_order_mismatch() {
        let id = DenseHermitian::new(4, {
            let mut e = vec![Complex64::ZERO; 16];
            for i in 0..4 {
                e[i * 4 + i] = Complex64::ONE;
            }
            e
        })
        .unwrap();
        assert_eq!(
            dense_partial_transpose(&id, dims(2, 3)),
            Err(Error::OrderMismatch {
                expected: 6,
                got: 4
            })
        );
    }

    #[test]
    fn hermiticity_is_enforced() {
        let entries = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.1),
            Complex64::new(0.5, 0.1), // should be the conjugate
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(
            DenseHermitian::new(2, entries),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn jacobi_on_diagonal_matrix() {
        let entries = vec![
            Complex64::new(0.3, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-0.1, 0.0),
        ];
        let m = DenseHermitian::new(2, entries).unwrap();
        assert_eq!(eigenvalues_dense(&m).unwrap(), vec![-0.1, 0.3]);
    }

    #[test]
    fn jacobi_on_quarter_block() {
        // ((¼,¼),(¼,¼)) embedded at pair 1 of a 2×2 state: spectrum must
        // contain 0 and ½.
        let s = XState::new(
            dims(2, 2),
            vec![0.25; 4],
            vec![Complex64::new(0.25, 0.0), Complex64::ZERO],
        )
        .unwrap();
        let eigs = eigenvalues_dense(&dense_from_x(&s)).unwrap();
        assert!(eigs.iter().any(|e| e.abs() < 1e-12));
        assert!(eigs.iter().any(|e| (e - 0.5).abs() < 1e-12));
    }

    #[test]
    fn jacobi_matches_closed_form_on_random_states() {
        let mut rng = sampler::master_rng(11);
        for d in [dims(2, 3), dims(3, 3), dims(2, 4)] {
            for _ in 0..50 {
                let s = sampler::sample_state(d, &mut rng);
                let dense_eigs = eigenvalues_dense(&dense_from_x(&s)).unwrap();
                let mut closed = s.eigenvalues().values();
                closed.sort_by(|x, y| x.partial_cmp(y).unwrap());
                assert_eq!(dense_eigs.len(), closed.len());
                for (a, b) in dense_eigs.iter().zip(&closed) {
                    assert!((a - b).abs() < 1e-10, "{d}: {a} vs {b}");
                }
                let sum: f64 = dense_eigs.iter().sum();
                assert!((sum - s.trace()).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn jacobi_handles_random_dense_hermitian() {
        // Not an X-state: fill every entry, check trace identity.
        let mut rng = sampler::master_rng(13);
        let n = 5;
        let mut entries = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(rng.gen::<f64>(), 0.0);
            for j in i + 1..n {
                let v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                entries[i * n + j] = v;
                entries[j * n + i] = v.conj();
            }
        }
        let m = DenseHermitian::new(n, entries).unwrap();
        let eigs = eigenvalues_dense(&m).unwrap();
        assert!((eigs.iter().sum::<f64>() - m.trace()).abs() < 1e-11);
        assert!(eigs.windows(2).all(|w| w[0] <= w[1]));
    }
}
