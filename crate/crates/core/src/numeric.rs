//! Small numeric helpers shared by the statistics modules.

use crate::error::{Error, Result};

/// Floor applied to model probabilities so that logarithms stay finite.
pub const PROB_FLOOR: f64 = 1e-10;

/// Tolerance for accepting an input vector as a probability distribution.
pub const SUM_TOLERANCE: f64 = 1e-6;

const PAIRWISE_BLOCK: usize = 8;

/// Pairwise (cascade) summation. The result depends only on the slice
/// contents and order, and the rounding error grows as O(log n).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Arithmetic mean via pairwise summation. Errors on empty input.
pub fn mean(values: &[f64], what: &'static str) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty(what));
    }
    Ok(pairwise_sum(values) / values.len() as f64)
}

/// Index of the largest entry; ties resolve to the lowest index.
///
/// NaN entries never win. Returns 0 for an empty slice.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Checks that `p` is a finite, nonnegative vector summing to one within
/// [`SUM_TOLERANCE`].
pub fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Empty("probability vector"));
    }
    if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::Domain(format!(
            "probability entries must be finite and nonnegative, got {bad}"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Domain(format!(
            "probabilities must sum to 1 (got {total})"
        )));
    }
    Ok(())
}

/// Divides by the sum. Returns the input unchanged when it already sums to
/// exactly one.
pub fn renormalize(mut p: Vec<f64>) -> Vec<f64> {
    let total: f64 = p.iter().sum();
    if total != 1.0 {
        for v in &mut p {
            *v /= total;
        }
    }
    p
}

/// Raises every entry to at least [`PROB_FLOOR`], renormalizing only if some
/// entry was actually raised.
pub fn floor_probabilities(mut p: Vec<f64>) -> Vec<f64> {
    let mut touched = false;
    for v in &mut p {
        if *v < PROB_FLOOR {
            *v = PROB_FLOOR;
            touched = true;
        }
    }
    if touched {
        renormalize(p)
    } else {
        p
    }
}

/// Sample standard deviation (n - 1 denominator). Returns 0 for fewer than
/// two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = pairwise_sum(values) / values.len() as f64;
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    (pairwise_sum(&sq) / (values.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(argmax(&[0.4, 0.4, 0.2]), 0);
        assert_eq!(argmax(&[0.1, 0.45, 0.45]), 1);
        assert_eq!(argmax(&[0.25; 4]), 0);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_and_large_inputs() {
        let small = [1.0, 2.0, 3.0];
        assert_eq!(pairwise_sum(&small), 6.0);
        let large: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&large), 500_500.0);
    }

    #[test]
    fn sample_std_of_two_points() {
        let s = sample_std(&[8.0, 12.0]);
        assert!((s - 8.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(sample_std(&[5.0]), 0.0);
    }

    #[test]
    fn floor_leaves_positive_vectors_bit_identical() {
        let p = vec![0.5, 0.3, 0.2];
        assert_eq!(floor_probabilities(p.clone()), p);
        let q = floor_probabilities(vec![1.0, 0.0]);
        assert!(q[1] > 0.0);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn check_distribution_rejects_bad_vectors() {
        assert!(check_distribution(&[0.5, 0.5]).is_ok());
        assert!(check_distribution(&[0.5, 0.6]).is_err());
        assert!(check_distribution(&[1.1, -0.1]).is_err());
        assert!(check_distribution(&[f64::NAN, 1.0]).is_err());
        assert!(check_distribution(&[]).is_err());
    }
}
