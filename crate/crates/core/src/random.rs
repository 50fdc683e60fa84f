//! Random matrix generators shared by the falsifier and the test suites.

use rand::Rng;

use crate::pcm::Pcm;
use crate::ranking::WeightVector;

/// Upper entries `exp(u)`, `u` uniform on `[-log_range, log_range]`.
pub fn random_pcm<R: Rng + ?Sized>(rng: &mut R, n: usize, log_range: f64) -> Pcm {
    Pcm::from_upper_fn(n, |_, _| rng.random_range(-log_range..=log_range).exp())
}

/// A consistent matrix `w_i / w_j` together with its generating weights, with
/// `ln w_i` uniform on `[-log_range, log_range]` before normalization.
pub fn random_consistent<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    log_range: f64,
) -> (Pcm, WeightVector) {
    let scores: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-log_range..=log_range).exp())
        .collect();
    let w = WeightVector::from_scores(&scores).expect("positive scores");
    let a = Pcm::from_weights(w.as_slice()).expect("n >= 2 and positive weights");
    (a, w)
}
