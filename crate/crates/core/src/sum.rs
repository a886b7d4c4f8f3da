//! Pairwise summation.
//!
//! Sums are split in halves recursively down to small blocks, which keeps the
//! rounding error at O(log n) and fixes the reduction order, so results are
//! bit-stable regardless of how the terms were produced.

const BLOCK: usize = 8;

pub fn pairwise(terms: &[f64]) -> f64 {
    if terms.len() <= BLOCK {
        return terms.iter().sum();
    }
    let mid = terms.len() / 2;
    pairwise(&terms[..mid]) + pairwise(&terms[mid..])
}

/// Collects `f(i)` for `i in 0..n` and sums pairwise.
pub fn sum_by(n: usize, f: impl FnMut(usize) -> f64) -> f64 {
    let terms: Vec<f64> = (0..n).map(f).collect();
    pairwise(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_small_input() {
        assert_eq!(pairwise(&[1.0, 2.0, 3.0]), 6.0);
        assert_eq!(pairwise(&[]), 0.0);
    }

    #[test]
    fn beats_naive_on_long_input() {
        let terms = vec![0.1; 1 << 16];
        let exact = 0.1 * (1 << 16) as f64;
        let naive: f64 = terms.iter().sum();
        assert!((pairwise(&terms) - exact).abs() <= (naive - exact).abs());
    }
}
