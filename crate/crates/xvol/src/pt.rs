//! Partial-transpose structure of X-states.
//!
//! Transposing one subsystem permutes the anti-diagonal entries among
//! themselves. Each anti-diagonal pair therefore either maps onto itself
//! (up to conjugation) or trades places with exactly one other pair. The
//! classification below records that combinatorics once per (m, n):
//!
//! - a *quadruple* (i, j, k, l), i+j = k+l = N+1, couples two pairs whose
//!   entries are exchanged, yielding the constraints |ρ_ij|² ≤ ρ_kk·ρ_ll and
//!   |ρ_kl|² ≤ ρ_ii·ρ_jj on top of plain positivity;
//! - a *fixed pair* (i, j) is untouched (or sent to its own conjugate
//!   position), adding no constraint beyond positivity;
//! - the *center* index (odd N only) sits on both diagonals and never
//!   participates.
//!
//! With A quadruples, B fixed pairs and C ∈ {0, 1} center entries,
//! 4A + 2B + C = mn always, and A = ⌊m/2⌋·⌊n/2⌋.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::state::{Dims, XState};

/// Which tensor factor is transposed. The criterion itself does not depend
/// on the choice; `Second` exists to let tests prove that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Image of the anti-diagonal position (row, col) under partial
/// transposition of the first subsystem.
///
/// With row−1 = a·n + b and col−1 = c·n + d in the product basis, the entry
/// moves to row′ = c·n + b + 1, col′ = a·n + d + 1. The image is again an
/// anti-diagonal position: row′ + col′ = row + col = N + 1.
pub fn pt_permute_index(dims: Dims, row: usize, col: usize) -> Result<(usize, usize)> {
    pt_permute_index_on(dims, row, col, Subsystem::First)
}

/// Same map for transposition of the second subsystem:
/// row′ = a·n + d + 1, col′ = c·n + b + 1.
pub fn pt_permute_index_second(dims: Dims, row: usize, col: usize) -> Result<(usize, usize)> {
    pt_permute_index_on(dims, row, col, Subsystem::Second)
}

pub fn pt_permute_index_on(
    dims: Dims,
    row: usize,
    col: usize,
    subsystem: Subsystem,
) -> Result<(usize, usize)> {
    let order = dims.product();
    if row < 1 || col < 1 || row > order || col > order || row + col != order + 1 {
        return Err(Error::NotAntiDiagonal { row, col, order });
    }
    let n = dims.n() as usize;
    let (a, b) = ((row - 1) / n, (row - 1) % n);
    let (c, d) = ((col - 1) / n, (col - 1) % n);
    Ok(match subsystem {
        Subsystem::First => (c * n + b + 1, a * n + d + 1),
        Subsystem::Second => (a * n + d + 1, c * n + b + 1),
    })
}

/// The partial-transpose combinatorics of one (m, n): quadruples (the 𝔸
/// set), fixed pairs (𝔹), optional center, and the counts A, B, C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtClassification {
    dims: Dims,
    /// Each quadruple (i, j, k, l) satisfies i + j = k + l = N + 1, with
    /// i the smallest of the four indices and i < k ≤ ⌊N/2⌋.
    quadruples: Vec<(usize, usize, usize, usize)>,
    /// Fixed pairs (i, j), i < j, i + j = N + 1.
    fixed_pairs: Vec<(usize, usize)>,
    center: Option<usize>,
}

impl PtClassification {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn quadruples(&self) -> &[(usize, usize, usize, usize)] {
        &self.quadruples
    }

    pub fn fixed_pairs(&self) -> &[(usize, usize)] {
        &self.fixed_pairs
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    pub fn count_a(&self) -> usize {
        self.quadruples.len()
    }

    pub fn count_b(&self) -> usize {
        self.fixed_pairs.len()
    }

    pub fn count_c(&self) -> usize {
        usize::from(self.center.is_some())
    }

    /// The partition of pair indices {1…P} into coupled sets and fixed
    /// singletons, used to compare classifications across subsystem choice.
    pub fn pair_partition(&self) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut coupled: Vec<(usize, usize)> = self
            .quadruples
            .iter()
            .map(|&(i, _, k, _)| (i.min(k), i.max(k)))
            .collect();
        coupled.sort_unstable();
        let mut fixed: Vec<usize> = self.fixed_pairs.iter().map(|&(i, _)| i).collect();
        fixed.sort_unstable();
        (coupled, fixed)
    }
}

impl Serialize for PtClassification {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PtClassification", 8)?;
        s.serialize_field("m", &self.dims.m())?;
        s.serialize_field("n", &self.dims.n())?;
        s.serialize_field("A", &self.count_a())?;
        s.serialize_field("B", &self.count_b())?;
        s.serialize_field("C", &self.count_c())?;
        let quads: Vec<[usize; 4]> = self
            .quadruples
            .iter()
            .map(|&(i, j, k, l)| [i, j, k, l])
            .collect();
        s.serialize_field("quadruples", &quads)?;
        let fixed: Vec<[usize; 2]> = self.fixed_pairs.iter().map(|&(i, j)| [i, j]).collect();
        s.serialize_field("fixed_pairs", &fixed)?;
        s.serialize_field("center", &self.center)?;
        s.end()
    }
}

/// Classifies every anti-diagonal pair of `dims` by its image under partial
/// transposition of the first subsystem.
pub fn classify(dims: Dims) -> PtClassification {
    classify_on(dims, Subsystem::First)
}

/// Classification via the second subsystem instead; the resulting partition
/// of pairs is identical to [`classify`] (the quadruple orientation may
/// differ), which the test suite checks.
pub fn classify_second_subsystem(dims: Dims) -> PtClassification {
    classify_on(dims, Subsystem::Second)
}

fn classify_on(dims: Dims, subsystem: Subsystem) -> PtClassification {
    let mut quadruples = Vec::new();
    let mut fixed_pairs = Vec::new();
    for t in 1..=dims.pair_count() {
        let j = dims.partner(t);
        let (r, c) = pt_permute_index_on(dims, t, j, subsystem)
            .expect("pair positions are anti-diagonal by construction");
        if (r, c) == (t, j) || (r, c) == (j, t) {
            fixed_pairs.push((t, j));
        } else {
            // Image lands on the pair with index u = min(r, c); record the
            // quadruple once, from the smaller pair index.
            let u = r.min(c);
            if t < u {
                quadruples.push((t, j, u, dims.partner(u)));
            }
        }
    }
    PtClassification {
        dims,
        quadruples,
        fixed_pairs,
        center: dims.center_index(),
    }
}

/// Closed-form counts (A, B, C) by the parity of m and n:
///
/// | parity        | A            | B          | C |
/// |---------------|--------------|------------|---|
/// | even m, even n| mn/4         | 0          | 0 |
/// | even m, odd n | m(n−1)/4     | m/2        | 0 |
/// | odd m, even n | (m−1)n/4     | n/2        | 0 |
/// | odd m, odd n  | (m−1)(n−1)/4 | (m+n−2)/2  | 1 |
pub fn counts_closed_form(dims: Dims) -> (usize, usize, usize) {
    let (m, n) = (dims.m() as usize, dims.n() as usize);
    match (m % 2, n % 2) {
        (0, 0) => (m * n / 4, 0, 0),
        (0, 1) => (m * (n - 1) / 4, m / 2, 0),
        (1, 0) => ((m - 1) * n / 4, n / 2, 0),
        _ => ((m - 1) * (n - 1) / 4, (m + n - 2) / 2, 1),
    }
}

/// PPT test for a state against a precomputed classification: every
/// quadruple (i, j, k, l) must satisfy |ρ_ij|² ≤ ρ_kk·ρ_ll + tol and
/// |ρ_kl|² ≤ ρ_ii·ρ_jj + tol. Fixed pairs and the center add nothing beyond
/// positivity of the state itself.
pub fn ppt_check(state: &XState, cls: &PtClassification, tol: f64) -> Result<bool> {
    if state.dims() != cls.dims {
        return Err(Error::DimsMismatch {
            state_m: state.dims().m(),
            state_n: state.dims().n(),
            cls_m: cls.dims.m(),
            cls_n: cls.dims.n(),
        });
    }
    Ok(cls.quadruples.iter().all(|&(i, j, k, l)| {
        let first = state.offdiag_entry(i).norm_sqr();
        let second = state.offdiag_entry(k).norm_sqr();
        first <= state.diag_entry(k) * state.diag_entry(l) + tol
            && second <= state.diag_entry(i) * state.diag_entry(j) + tol
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{dense_from_x, dense_partial_transpose, min_eigenvalue};
    use crate::sampler;
    use crate::state::DEFAULT_TOL;
    use num_complex::Complex64;

    fn dims(m: u32, n: u32) -> Dims {
        Dims::new(m, n).unwrap()
    }

    #[test]
    fn permute_known_images() {
        // 2×3: ρ16 moves to (4,3); ρ25 to its own conjugate position (5,2).
        assert_eq!(pt_permute_index(dims(2, 3), 1, 6).unwrap(), (4, 3));
        assert_eq!(pt_permute_index(dims(2, 3), 2, 5).unwrap(), (5, 2));
        assert_eq!(pt_permute_index(dims(2, 2), 1, 4).unwrap(), (3, 2));
    }

    #[test]
    fn permute_matches_dense_marked_entry() {
        // Independent route: place a lone mark at (1,4) of a 4×4 matrix
        // (plus its conjugate to stay Hermitian), partial-transpose densely,
        // and find where the mark went.
        let d = dims(2, 2);
        let mut entries = vec![Complex64::ZERO; 16];
        entries[3] = Complex64::new(0.0, 0.5); // (row 1, col 4), 1-based
        entries[12] = Complex64::new(0.0, -0.5);
        let mat = crate::quadrature::DenseHermitian::new(4, entries).unwrap();
        let pt = dense_partial_transpose(&mat, d).unwrap();
        let mut found = None;
        for r in 0..4 {
            for c in 0..4 {
                if pt.get(r, c) == Complex64::new(0.0, 0.5) {
                    found = Some((r + 1, c + 1));
                }
            }
        }
        assert_eq!(found, Some((3, 2)));
        assert_eq!(pt_permute_index(d, 1, 4).unwrap(), (3, 2));
    }

    #[test]
    fn permute_rejects_off_antidiagonal() {
        assert!(matches!(
            pt_permute_index(dims(2, 3), 1, 5),
            Err(Error::NotAntiDiagonal { .. })
        ));
        assert!(matches!(
            pt_permute_index(dims(2, 3), 0, 7),
            Err(Error::NotAntiDiagonal { .. })
        ));
    }

    #[test]
    fn permute_is_involution_preserving_antidiagonal() {
        for m in 2..=12u32 {
            for n in 2..=12u32 {
                let d = dims(m, n);
                let order = d.product();
                for row in 1..=order {
                    let col = order + 1 - row;
                    let (r, c) = pt_permute_index(d, row, col).unwrap();
                    assert_eq!(r + c, order + 1, "{m}x{n} image off anti-diagonal");
                    assert_eq!(pt_permute_index(d, r, c).unwrap(), (row, col));
                }
            }
        }
    }

    #[test]
    fn classify_known_cases() {
        let c22 = classify(dims(2, 2));
        assert_eq!((c22.count_a(), c22.count_b(), c22.count_c()), (1, 0, 0));
        assert_eq!(c22.quadruples(), &[(1, 4, 2, 3)]);

        let c23 = classify(dims(2, 3));
        assert_eq!((c23.count_a(), c23.count_b(), c23.count_c()), (1, 1, 0));
        assert_eq!(c23.quadruples(), &[(1, 6, 3, 4)]);
        assert_eq!(c23.fixed_pairs(), &[(2, 5)]);

        let c33 = classify(dims(3, 3));
        assert_eq!((c33.count_a(), c33.count_b(), c33.count_c()), (1, 2, 1));
        assert_eq!(c33.center(), Some(5));

        let c44 = classify(dims(4, 4));
        assert_eq!((c44.count_a(), c44.count_b(), c44.count_c()), (4, 0, 0));
    }

    #[test]
    fn classify_counts_match_closed_forms() {
        for m in 2..=12u32 {
            for n in 2..=12u32 {
                let d = dims(m, n);
                let cls = classify(d);
                let (a, b, c) = counts_closed_form(d);
                assert_eq!(cls.count_a(), a, "{m}x{n} A");
                assert_eq!(cls.count_b(), b, "{m}x{n} B");
                assert_eq!(cls.count_c(), c, "{m}x{n} C");
                assert_eq!(4 * a + 2 * b + c, d.product(), "{m}x{n} total");
                // The exponent of the volume ratio.
                assert_eq!(a, (m as usize / 2) * (n as usize / 2));
            }
        }
    }

    #[test]
    fn every_pair_appears_exactly_once() {
        for m in 2..=8u32 {
            for n in 2..=8u32 {
                let d = dims(m, n);
                let cls = classify(d);
                let mut seen = vec![0usize; d.pair_count() + 1];
                for &(i, _, k, _) in cls.quadruples() {
                    seen[i] += 1;
                    seen[k] += 1;
                }
                for &(i, _) in cls.fixed_pairs() {
                    seen[i] += 1;
                }
                assert!(seen[1..].iter().all(|&c| c == 1), "{m}x{n}: {seen:?}");
            }
        }
    }

    #[test]
    fn quadruples_are_canonical() {
        for m in 2..=8u32 {
            for n in 2..=8u32 {
                let d = dims(m, n);
                for &(i, j, k, l) in classify(d).quadruples() {
                    assert_eq!(i + j, d.product() + 1);
                    assert_eq!(k + l, d.product() + 1);
                    assert!(i < k && k < l && l < j, "{m}x{n}: ({i},{j},{k},{l})");
                    assert_eq!(i, [i, j, k, l].into_iter().min().unwrap());
                }
            }
        }
    }

    #[test]
    fn subsystem_choice_does_not_change_partition() {
        for m in 2..=12u32 {
            for n in 2..=12u32 {
                let d = dims(m, n);
                let first = classify(d);
                let second = classify_second_subsystem(d);
                assert_eq!(first.pair_partition(), second.pair_partition(), "{m}x{n}");
                assert_eq!(first.center(), second.center());
            }
        }
    }

    #[test]
    fn ppt_check_accepts_diagonal_states() {
        let d = dims(2, 2);
        let s = XState::new(d, vec![0.4, 0.3, 0.2, 0.1], vec![Complex64::ZERO; 2]).unwrap();
        assert!(ppt_check(&s, &classify(d), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn ppt_check_direct_inequality() {
        // |ρ14|² = 0.04 ≤ ρ22·ρ33 = 0.0625.
        let d = dims(2, 2);
        let s = XState::new(
            d,
            vec![0.25; 4],
            vec![Complex64::new(0.2, 0.0), Complex64::ZERO],
        )
        .unwrap();
        assert!(ppt_check(&s, &classify(d), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn ppt_check_detects_violation_and_matches_dense_oracle() {
        // PSD (0.09 ≤ 0.2) but |ρ14|² = 0.09 > ρ22·ρ33 = 0.0025.
        let d = dims(2, 2);
        let s = XState::new(
            d,
            vec![0.4, 0.05, 0.05, 0.5],
            vec![Complex64::new(0.3, 0.0), Complex64::new(0.04, 0.0)],
        )
        .unwrap();
        assert!(s.is_positive_semidefinite(DEFAULT_TOL));
        assert!(!ppt_check(&s, &classify(d), DEFAULT_TOL).unwrap());
        // Oracle confirms: the dense partial transpose has a negative eigenvalue.
        let pt = dense_partial_transpose(&dense_from_x(&s), d).unwrap();
        assert!(min_eigenvalue(&pt).unwrap() < -1e-10);
    }

    #[test]
    fn ppt_check_rejects_dims_mismatch() {
        let s = XState::new(dims(2, 2), vec![0.25; 4], vec![Complex64::ZERO; 2]).unwrap();
        let cls = classify(dims(2, 3));
        assert!(matches!(
            ppt_check(&s, &cls, DEFAULT_TOL),
            Err(Error::DimsMismatch { .. })
        ));
    }

    #[test]
    fn ppt_check_agrees_with_dense_oracle_on_random_states() {
        let mut rng = sampler::master_rng(23);
        for (m, n) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
            let d = dims(m, n);
            let cls = classify(d);
            let cls2 = classify_second_subsystem(d);
            for _ in 0..100 {
                let s = sampler::sample_state(d, &mut rng);
                let fast = ppt_check(&s, &cls, 0.0).unwrap();
                let fast2 = ppt_check(&s, &cls2, 0.0).unwrap();
                let pt = dense_partial_transpose(&dense_from_x(&s), d).unwrap();
                let oracle = min_eigenvalue(&pt).unwrap() >= -1e-10;
                assert_eq!(fast, oracle, "{m}x{n}");
                assert_eq!(fast, fast2, "{m}x{n} subsystem choice changed outcome");
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Beyond the exhaustive 2…12 sweep: classification stays
            // consistent for products up to ~1000.
            #[test]
            fn classification_invariants_scale(m in 2u32..=32, n in 2u32..=32) {
                let d = Dims::new(m, n).unwrap();
                let cls = classify(d);
                let (a, b, c) = counts_closed_form(d);
                prop_assert_eq!(cls.count_a(), a);
                prop_assert_eq!(cls.count_b(), b);
                prop_assert_eq!(cls.count_c(), c);
                prop_assert_eq!(4 * a + 2 * b + c, d.product());
                prop_assert_eq!(
                    classify_second_subsystem(d).pair_partition(),
                    cls.pair_partition()
                );
            }

            #[test]
            fn permutation_is_involution_at_scale(m in 2u32..=32, n in 2u32..=32, t in 1usize..=512) {
                let d = Dims::new(m, n).unwrap();
                prop_assume!(t <= d.pair_count());
                let j = d.partner(t);
                let (r, c) = pt_permute_index(d, t, j).unwrap();
                prop_assert_eq!(r + c, d.product() + 1);
                prop_assert_eq!(pt_permute_index(d, r, c).unwrap(), (t, j));
            }
        }
    }

    #[test]
    fn classification_serializes_to_documented_schema() {
        let json = serde_json::to_value(classify(dims(2, 3))).unwrap();
        assert_eq!(json["m"], 2);
        assert_eq!(json["n"], 3);
        assert_eq!(json["A"], 1);
        assert_eq!(json["B"], 1);
        assert_eq!(json["C"], 0);
        assert_eq!(json["quadruples"], serde_json::json!([[1, 6, 3, 4]]));
        assert_eq!(json["fixed_pairs"], serde_json::json!([[2, 5]]));
        assert_eq!(json["center"], serde_json::Value::Null);
        let j33 = serde_json::to_value(classify(dims(3, 3))).unwrap();
        assert_eq!(j33["center"], 5);
    }
}
