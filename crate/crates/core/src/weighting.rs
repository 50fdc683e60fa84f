//! Weighting and ranking methods.
//!
//! Row geometric mean and the Perron eigenvector are the two principal
//! methods. The remaining ones are simple rules that serve as rivals and
//! counterexample generators when auditing the axioms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcm::Pcm;
use crate::ranking::{ranking_from_weights, Ranking, WeightVector, DEFAULT_TIE_TOL};

/// The implemented ranking methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MethodId {
    #[serde(rename = "rgm")]
    Rgm,
    #[serde(rename = "em")]
    Em,
    /// Row sums, `i ≽ j` iff `Σ_k a_ik ≥ Σ_k a_jk`.
    #[serde(rename = "arith")]
    RowArithmeticMean,
    /// `i ≽ j` iff `a_i1 ≥ a_j1`.
    #[serde(rename = "col1")]
    FirstColumn,
    /// Product of the favourable entries `a_ik ≥ 1` of each row.
    #[serde(rename = "favprod")]
    FavourableProduct,
    /// Every alternative tied.
    #[serde(rename = "flat")]
    Flat,
    /// `i ≻ j` iff `i < j`, whatever the matrix.
    #[serde(rename = "index")]
    IndexOrder,
}

impl MethodId {
    pub const ALL: [MethodId; 7] = [
        MethodId::Rgm,
        MethodId::Em,
        MethodId::RowArithmeticMean,
        MethodId::FirstColumn,
        MethodId::FavourableProduct,
        MethodId::Flat,
        MethodId::IndexOrder,
    ];

    /// Short name used on the command line and in JSON.
    pub fn name(self) -> &'static str {
        match self {
            MethodId::Rgm => "rgm",
            MethodId::Em => "em",
            MethodId::RowArithmeticMean => "arith",
            MethodId::FirstColumn => "col1",
            MethodId::FavourableProduct => "favprod",
            MethodId::Flat => "flat",
            MethodId::IndexOrder => "index",
        }
    }

    pub fn has_weight_form(self) -> bool {
        !matches!(self, MethodId::Flat | MethodId::IndexOrder)
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        MethodId::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Power iteration settings for the eigenvector method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmOptions {
    pub max_iterations: usize,
    /// Stop once the L∞ change between normalized iterates is at most this.
    pub convergence_tol: f64,
}

impl Default for EmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            convergence_tol: 1e-12,
        }
    }
}

/// Everything needed to turn a matrix into a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankConfig {
    pub tie_tol: f64,
    pub em: EmOptions,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self {
            tie_tol: DEFAULT_TIE_TOL,
            em: EmOptions::default(),
        }
    }
}

/// Normalized row geometric means, computed in log space.
pub fn rgm_weights(a: &Pcm) -> WeightVector {
    let n = a.n() as f64;
    let logs: Vec<f64> = a.row_log_sums().iter().map(|s| s / n).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scores: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    WeightVector::from_scores(&scores).expect("row geometric means are positive")
}

/// Logarithmic least squares objective `Σ_ij [ln a_ij − ln(w_i / w_j)]²`.
pub fn rgm_objective(a: &Pcm, w: &[f64]) -> Result<f64> {
    let n = a.n();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let lw: Vec<f64> = w.iter().map(|v| v.ln()).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r = a.get(i, j).ln() - (lw[i] - lw[j]);
            total += r * r;
        }
    }
    Ok(total)
}

/// Perron eigenvector by power iteration from the uniform vector, together
/// with the eigenvalue estimate `mean_i (A w)_i / w_i`.
pub fn em_weights(a: &Pcm, opts: &EmOptions) -> Result<(WeightVector, f64)> {
    let n = a.n();
    em_weights_from(a, &vec![1.0 / n as f64; n], opts)
}

/// Power iteration from an arbitrary positive start vector.
pub fn em_weights_from(a: &Pcm, start: &[f64], opts: &EmOptions) -> Result<(WeightVector, f64)> {
    let n = a.n();
    if start.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: start.len(),
        });
    }
    if opts.max_iterations == 0 || !(opts.convergence_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("bad EM options {opts:?}")));
    }
    if start.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidWeights(
            "start vector must be positive".into(),
        ));
    }
    let total: f64 = start.iter().sum();
    let mut w: Vec<f64> = start.iter().map(|v| v / total).collect();
    let mut next = vec![0.0; n];
    let mut change = f64::INFINITY;

    for _ in 0..opts.max_iterations {
        mat_vec(a, &w, &mut next);
        let s: f64 = next.iter().sum();
        change = 0.0;
        for (nv, wv) in next.iter_mut().zip(&w) {
            *nv /= s;
            change = f64::max(change, (*nv - wv).abs());
        }
        std::mem::swap(&mut w, &mut next);
        if change <= opts.convergence_tol {
            mat_vec(a, &w, &mut next);
            let lambda = next.iter().zip(&w).map(|(aw, wv)| aw / wv).sum::<f64>() / n as f64;
            return Ok((WeightVector::from_scores(&w)?, lambda));
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        last_change: change,
    })
}

fn mat_vec(a: &Pcm, w: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = a.row(i).iter().zip(w).map(|(x, y)| x * y).sum();
    }
}

/// Raw, unnormalized scores of a weight-based method. Larger is better.
pub fn method_scores(m: MethodId, a: &Pcm, opts: &EmOptions) -> Result<Vec<f64>> {
    let n = a.n();
    Ok(match m {
        MethodId::Rgm => rgm_weights(a).into_vec(),
        MethodId::Em => em_weights(a, opts)?.0.into_vec(),
        MethodId::RowArithmeticMean => (0..n).map(|i| a.row(i).iter().sum()).collect(),
        MethodId::FirstColumn => (0..n).map(|i| a.get(i, 0)).collect(),
        // The diagonal 1 always qualifies, so every product is non-empty.
        MethodId::FavourableProduct => (0..n)
            .map(|i| a.row(i).iter().filter(|&&v| v >= 1.0).product())
            .collect(),
        MethodId::Flat | MethodId::IndexOrder => return Err(Error::NoWeightForm(m.name())),
    })
}

/// Scores normalized to a weight vector.
pub fn method_weights(m: MethodId, a: &Pcm, opts: &EmOptions) -> Result<WeightVector> {
    WeightVector::from_scores(&method_scores(m, a, opts)?)
}

/// The ranking induced by method `m`.
pub fn method_rank(m: MethodId, a: &Pcm, cfg: &RankConfig) -> Result<Ranking> {
    match m {
        MethodId::Flat => Ok(Ranking::flat(a.n())),
        MethodId::IndexOrder => Ok(Ranking::index_order(a.n())),
        _ => Ok(ranking_from_weights(
            method_weights(m, a, &cfg.em)?.as_slice(),
            cfg.tie_tol,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry;

    fn pcm(text: &str) -> Pcm {
        Pcm::parse(text, 1e-6).unwrap()
    }

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
            assert!((a - e).abs() <= tol, "component {i}: {a} vs {e}");
        }
    }

    #[test]
    fn rgm_ones_is_uniform() {
        for n in 2..6 {
            let w = rgm_weights(&Pcm::ones(n));
            assert_close(w.as_slice(), &vec![1.0 / n as f64; n], 1e-15);
        }
    }

    #[test]
    fn rgm_two_by_two() {
        let w = rgm_weights(&pcm("1,4\n1/4,1"));
        assert_close(w.as_slice(), &[0.8, 0.2], 1e-15);
    }

    #[test]
    fn rgm_objective_zero_when_consistent() {
        let c = pcm("1,2,4\n1/2,1,2\n1/4,1/2,1");
        assert!(rgm_objective(&c, rgm_weights(&c).as_slice()).unwrap() < 1e-18);
        let u = vec![0.25; 4];
        assert_eq!(rgm_objective(&Pcm::ones(4), &u).unwrap(), 0.0);
        assert!(rgm_objective(&c, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn em_ones() {
        let (w, lambda) = em_weights(&Pcm::ones(5), &EmOptions::default()).unwrap();
        assert_close(w.as_slice(), &[0.2; 5], 1e-15);
        assert!((lambda - 5.0).abs() < 1e-12);
    }

    #[test]
    fn em_consistent() {
        let c = pcm("1,2,4\n1/2,1,2\n1/4,1/2,1");
        let (w, lambda) = em_weights(&c, &EmOptions::default()).unwrap();
        assert_close(w.as_slice(), &[4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0], 1e-12);
        assert!((lambda - 3.0).abs() < 1e-12);
    }

    #[test]
    fn em_kendall_published_weights() {
        let a = pcm(registry::KENDALL_6X6);
        let (w, _) = em_weights(&a, &EmOptions::default()).unwrap();
        assert_close(
            w.as_slice(),
            &[0.2286, 0.1430, 0.2102, 0.1321, 0.1430, 0.1430],
            5e-5,
        );
    }

    #[test]
    fn em_reports_no_convergence() {
        let a = pcm(registry::KENDALL_6X6);
        let opts = EmOptions {
            max_iterations: 2,
            convergence_tol: 1e-12,
        };
        assert!(matches!(
            em_weights(&a, &opts),
            Err(Error::NoConvergence { iterations: 2, .. })
        ));
    }

    #[test]
    fn score_rules_on_published_matrices() {
        let opts = EmOptions::default();
        let a1 = pcm(registry::EX41_A1);
        let s = method_scores(MethodId::RowArithmeticMean, &a1, &opts).unwrap();
        assert_close(&s, &[9.0, 10.25, 0.25 + 1.0 / 9.0 + 1.0], 1e-12);

        let b1 = pcm(registry::EX43_A1);
        let s = method_scores(MethodId::FavourableProduct, &b1, &opts).unwrap();
        assert_eq!(s, vec![2.0, 1.0, 9.0]);

        let w = method_weights(MethodId::FirstColumn, &Pcm::ones(4), &opts).unwrap();
        assert_close(w.as_slice(), &[0.25; 4], 1e-15);
        let s = method_scores(MethodId::FirstColumn, &b1, &opts).unwrap();
        assert_eq!(s, vec![1.0, 0.5, 9.0]);
    }

    #[test]
    fn flat_and_index_have_no_weights() {
        let opts = EmOptions::default();
        for m in [MethodId::Flat, MethodId::IndexOrder] {
            assert!(matches!(
                method_weights(m, &Pcm::ones(3), &opts),
                Err(Error::NoWeightForm(_))
            ));
        }
        let cfg = RankConfig::default();
        let a = pcm(registry::KENDALL_6X6);
        assert_eq!(
            method_rank(MethodId::Flat, &a, &cfg).unwrap().labels(),
            &[0; 6]
        );
        assert_eq!(
            method_rank(MethodId::IndexOrder, &Pcm::ones(4), &cfg)
                .unwrap()
                .labels(),
            &[0, 1, 2, 3]
        );
    }

    #[test]
    fn em_flips_pair_on_iic_matrices() {
        let cfg = RankConfig::default();
        let a = pcm(registry::PROP51_IIC_A);
        let a2 = pcm(registry::PROP51_IIC_A_PRIME);
        let r = method_rank(MethodId::Em, &a, &cfg).unwrap();
        let r2 = method_rank(MethodId::Em, &a2, &cfg).unwrap();
        assert_eq!(
            r.pair_relation(0, 1).unwrap(),
            crate::PairRelation::StrictlyAbove
        );
        assert_eq!(
            r2.pair_relation(0, 1).unwrap(),
            crate::PairRelation::StrictlyBelow
        );
    }

    #[test]
    fn method_names_round_trip() {
        for m in MethodId::ALL {
            assert_eq!(m.name().parse::<MethodId>().unwrap(), m);
            assert_eq!(
                serde_json::to_string(&m).unwrap(),
                format!("\"{}\"", m.name())
            );
        }
        assert!("bogus".parse::<MethodId>().is_err());
    }
}
