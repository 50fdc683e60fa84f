//! Constructive machinery behind the characterization of the row geometric
//! mean ranking by anonymity, aggregation invariance and responsiveness.
//!
//! Starting from a matrix whose first two rows have equal products, the chain
//! `A → B → C`, `D`, `E = C ⊕ D` reduces the comparison of alternatives 1 and 2
//! to a matrix `E` on which anonymity alone decides the ranking. This module
//! builds every matrix of the chain, verifies the invariants claimed for each,
//! and checks the algebraic identities the argument rests on.
//!
//! Internally alternatives are 0-based: "alternatives 1 and 2" are indices 0
//! and 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::RationalExponent;
use crate::pcm::Pcm;
use crate::permutation::Permutation;
use crate::ranking::PairRelation;
use crate::transforms::{aggregate, opposite, permute, power};
use crate::weighting::{method_rank, MethodId, RankConfig};

/// Tolerance on `|ln Π row_0 − ln Π row_1|` accepted by [`build_proof_chain`].
pub const EQUAL_PRODUCT_TOL: f64 = 1e-9;

/// Tolerance used for the invariants checked while building a chain.
pub const CHAIN_TOL: f64 = 1e-12;

/// The matrices of the construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofChain {
    #[serde(rename = "A")]
    pub a: Pcm,
    #[serde(rename = "B")]
    pub b: Pcm,
    #[serde(rename = "C")]
    pub c: Pcm,
    #[serde(rename = "D")]
    pub d: Pcm,
    #[serde(rename = "E")]
    pub e: Pcm,
    /// `√a_12`.
    pub alpha: f64,
}

/// Rescales `a_ij` by `√(Π row_j / Π row_i)` so rows `i` and `j` end up with
/// equal products. All other entries are untouched.
pub fn equalize_pair(a: &Pcm, i: usize, j: usize) -> Result<Pcm> {
    a.check_index(i)?;
    a.check_index(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "cannot equalize alternative {i} with itself"
        )));
    }
    let sums = a.row_log_sums();
    let factor = (0.5 * (sums[j] - sums[i])).exp();
    a.with_entry(i, j, a.get(i, j) * factor)
}

/// `σ_m`: fixes 0 and 1, rotates `{2, …, n-1}` by `m`.
pub fn cyclic_shift(n: usize, m: usize) -> Permutation {
    let map = (0..n)
        .map(|k| if k < 2 { k } else { 2 + (m + k - 2) % (n - 2) })
        .collect();
    Permutation::new(map).expect("rotation is a bijection")
}

/// Builds and validates the chain for `a`, whose rows 0 and 1 must have equal
/// products (see [`equalize_pair`]).
pub fn build_proof_chain(a: &Pcm) -> Result<ProofChain> {
    let n = a.n();
    if n < 3 {
        return Err(Error::DimensionTooSmall { required: 3, n });
    }
    let sums = a.row_log_sums();
    let log_diff = sums[0] - sums[1];
    if !(log_diff.abs() <= EQUAL_PRODUCT_TOL) {
        return Err(Error::UnequalRowProducts {
            i: 0,
            j: 1,
            log_diff,
        });
    }

    // B: comparisons among alternatives 3..n flattened to 1.
    let mut b_entries = a.as_slice().to_vec();
    for k in 2..n {
        for l in 2..n {
            b_entries[k * n + l] = 1.0;
        }
    }
    let b = Pcm::from_raw(n, b_entries);

    let shifted = (0..n - 2)
        .map(|m| permute(&b, &cyclic_shift(n, m)))
        .collect::<Result<Vec<_>>>()?;
    let c = aggregate(&shifted)?;

    let spread = (n - 2) as f64;
    let (d0, d1) = ((-sums[0] / spread).exp(), (-sums[1] / spread).exp());
    let d = Pcm::from_upper_fn(n, |i, j| match (i, j) {
        (0, 1) => 1.0,
        (0, _) => d0,
        (1, _) => d1,
        _ => 1.0,
    });

    let e = aggregate(&[c.clone(), d.clone()])?;
    let chain = ProofChain {
        a: a.clone(),
        b,
        c,
        d,
        e,
        alpha: a.get(0, 1).sqrt(),
    };
    check_chain_invariants(&chain)?;
    Ok(chain)
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * y.abs().max(1.0)
}

fn check_chain_invariants(ch: &ProofChain) -> Result<()> {
    let n = ch.a.n();
    let spread = (n - 2) as f64;
    let fail = |what: String| Err(Error::ChainInvariant(what));

    for i in 0..n {
        for j in 0..n {
            let want = if i >= 2 && j >= 2 {
                1.0
            } else {
                ch.a.get(i, j)
            };
            if ch.b.get(i, j) != want {
                return fail(format!("b[{i}][{j}] = {} != {want}", ch.b.get(i, j)));
            }
        }
    }

    let off_mean = |row: usize| (2..n).map(|l| ch.a.get(row, l).ln()).sum::<f64>() / spread;
    let (c0, c1) = (off_mean(0).exp(), off_mean(1).exp());
    let inv_alpha_root = (-(ch.alpha.ln()) / spread).exp();
    let alpha_root = (ch.alpha.ln() / spread).exp();
    for (label, m, want_01, want_0k, want_1k) in [
        ("c", &ch.c, ch.a.get(0, 1), c0, c1),
        ("e", &ch.e, ch.alpha, inv_alpha_root, alpha_root),
    ] {
        if !close(m.get(0, 1), want_01, CHAIN_TOL) {
            return fail(format!("{label}[0][1] = {} != {want_01}", m.get(0, 1)));
        }
        for k in 2..n {
            if !close(m.get(0, k), want_0k, CHAIN_TOL) {
                return fail(format!("{label}[0][{k}] = {} != {want_0k}", m.get(0, k)));
            }
            if !close(m.get(1, k), want_1k, CHAIN_TOL) {
                return fail(format!("{label}[1][{k}] = {} != {want_1k}", m.get(1, k)));
            }
            for l in 2..n {
                if !close(m.get(k, l), 1.0, CHAIN_TOL) {
                    return fail(format!("{label}[{k}][{l}] = {} != 1", m.get(k, l)));
                }
            }
        }
    }

    let worst = max_row_mean_deviation(&ch.e);
    if worst > CHAIN_TOL {
        return fail(format!(
            "row geometric mean of e deviates from 1 by {worst:e}"
        ));
    }
    Ok(())
}

fn max_row_mean_deviation(m: &Pcm) -> f64 {
    let n = m.n() as f64;
    m.row_log_sums()
        .iter()
        .map(|s| ((s / n).exp() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Outcome of one identity: whether it held and by how much it missed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub max_deviation: f64,
}

impl IdentityCheck {
    fn new(max_deviation: f64, tol: f64) -> Self {
        Self {
            holds: max_deviation <= tol,
            max_deviation,
        }
    }
}

/// The identities of the construction, each checked entrywise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    /// `σ_{1,2}(E) = E⁻`.
    pub inv_swap: IdentityCheck,
    /// `σ_{1,2}(E)^(1/(n−2)) = σ_{2,3}(E) ⊕ … ⊕ σ_{2,n}(E)`; `None` for n = 3
    /// where it is vacuous.
    pub swap_aggregation: Option<IdentityCheck>,
    /// Every row of `E` has geometric mean 1.
    pub unit_row_means: IdentityCheck,
    /// `e_12 = √a_12`.
    pub alpha: IdentityCheck,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.inv_swap.holds
            && self.swap_aggregation.is_none_or(|c| c.holds)
            && self.unit_row_means.holds
            && self.alpha.holds
    }
}

pub fn verify_proof_identities(chain: &ProofChain, tol: f64) -> Result<IdentityReport> {
    let e = &chain.e;
    let n = e.n();
    let swap12 = permute(e, &Permutation::transposition(n, 0, 1)?)?;
    let inv_swap = IdentityCheck::new(swap12.max_abs_diff(&opposite(e)), tol);

    let swap_aggregation = if n >= 4 {
        let lhs = power(&swap12, RationalExponent::new(1, (n - 2) as u64)?);
        let parts = (2..n)
            .map(|m| permute(e, &Permutation::transposition(n, 1, m)?))
            .collect::<Result<Vec<_>>>()?;
        let rhs = aggregate(&parts)?;
        Some(IdentityCheck::new(lhs.max_abs_diff(&rhs), tol))
    } else {
        None
    };

    Ok(IdentityReport {
        inv_swap,
        swap_aggregation,
        unit_row_means: IdentityCheck::new(max_row_mean_deviation(e), tol),
        alpha: IdentityCheck::new((e.get(0, 1) - chain.a.get(0, 1).sqrt()).abs(), tol),
    })
}

/// End-to-end sanity of the row geometric mean ranking on alternatives 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmokeReport {
    /// Equal row products give a tie; `None` when the products differ.
    pub equal_products_tie: Option<bool>,
    /// After [`equalize_pair`] the two alternatives are tied.
    pub equalized_tie: bool,
    /// The ranking agrees with the sign of `ln Π row_1 − ln Π row_2`.
    pub sign_matches: bool,
}

impl SmokeReport {
    pub fn all_pass(&self) -> bool {
        self.equal_products_tie.unwrap_or(true) && self.equalized_tie && self.sign_matches
    }
}

pub fn characterization_smoke(a: &Pcm, cfg: &RankConfig) -> Result<SmokeReport> {
    let n = a.n() as f64;
    let relation = |m: &Pcm| -> Result<PairRelation> {
        method_rank(MethodId::Rgm, m, cfg)?.pair_relation(0, 1)
    };
    let sums = a.row_log_sums();
    let diff = sums[0] - sums[1];
    let observed = relation(a)?;

    let equal_products_tie =
        (diff.abs() <= EQUAL_PRODUCT_TOL).then_some(observed == PairRelation::Tied);
    let equalized_tie = relation(&equalize_pair(a, 0, 1)?)? == PairRelation::Tied;

    // Weight ratio of the weaker to the stronger alternative is exp(-|diff| / n).
    let expected = if 1.0 - (-diff.abs() / n).exp() <= cfg.tie_tol {
        PairRelation::Tied
    } else if diff > 0.0 {
        PairRelation::StrictlyAbove
    } else {
        PairRelation::StrictlyBelow
    };
    Ok(SmokeReport {
        equal_products_tie,
        equalized_tie,
        sign_matches: observed == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pcm(text: &str) -> Pcm {
        Pcm::parse(text, 1e-6).unwrap()
    }

    #[test]
    fn equalize_hand_example() {
        let a = pcm("1,4,1/2\n1/4,1,2\n2,1/2,1");
        let eq = equalize_pair(&a, 0, 1).unwrap();
        assert!((eq.get(0, 1) - 2.0).abs() < 1e-15);
        for s in eq.row_log_sums() {
            assert!(s.abs() < 1e-15);
        }
    }

    #[test]
    fn equalize_noop_cases() {
        let ones = Pcm::ones(4);
        assert_eq!(equalize_pair(&ones, 1, 3).unwrap(), ones);
        let a = pcm("1,2,1/2\n1/2,1,2\n2,1/2,1");
        assert!(equalize_pair(&a, 0, 1).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(equalize_pair(&a, 0, 0).is_err());
        assert!(equalize_pair(&a, 0, 3).is_err());
    }

    #[test]
    fn cyclic_shifts() {
        assert_eq!(cyclic_shift(5, 0).as_slice(), &[0, 1, 2, 3, 4]);
        assert_eq!(cyclic_shift(5, 1).as_slice(), &[0, 1, 3, 4, 2]);
        assert_eq!(cyclic_shift(5, 2).as_slice(), &[0, 1, 4, 2, 3]);
    }

    #[test]
    fn chain_three_by_three() {
        let a = pcm("1,2,1/2\n1/2,1,2\n2,1/2,1");
        let ch = build_proof_chain(&a).unwrap();
        assert_eq!(ch.b, a);
        assert_eq!(ch.c, a);
        assert!(ch.d.max_abs_diff(&Pcm::ones(3)) < 1e-15);
        let root = Pcm::from_upper_fn(3, |i, j| a.get(i, j).sqrt());
        assert!(ch.e.max_abs_diff(&root) < 1e-15);
        assert!((ch.alpha - 2f64.sqrt()).abs() < 1e-15);
        let rep = verify_proof_identities(&ch, 1e-12).unwrap();
        assert!(rep.inv_swap.holds && rep.unit_row_means.holds && rep.alpha.holds);
        assert!(rep.swap_aggregation.is_none());
    }

    #[test]
    fn chain_of_ones() {
        for n in 3..7 {
            let ch = build_proof_chain(&Pcm::ones(n)).unwrap();
            for m in [&ch.b, &ch.c, &ch.d, &ch.e] {
                assert!(m.max_abs_diff(&Pcm::ones(n)) < 1e-15);
            }
            assert_eq!(ch.alpha, 1.0);
            assert!(verify_proof_identities(&ch, 1e-12).unwrap().all_hold());
        }
    }

    #[test]
    fn chain_preconditions() {
        assert!(matches!(
            build_proof_chain(&Pcm::ones(2)),
            Err(Error::DimensionTooSmall { required: 3, n: 2 })
        ));
        let a = pcm("1,1,4\n1,1,3\n1/4,1/3,1");
        assert!(matches!(
            build_proof_chain(&a),
            Err(Error::UnequalRowProducts { .. })
        ));
    }

    #[test]
    fn smoke_examples() {
        let cfg = RankConfig::default();
        let r = characterization_smoke(&Pcm::ones(4), &cfg).unwrap();
        assert_eq!(r.equal_products_tie, Some(true));
        assert!(r.all_pass());

        let b = pcm("1,1,4\n1,1,3\n1/4,1/3,1");
        let r = characterization_smoke(&b, &cfg).unwrap();
        assert_eq!(r.equal_products_tie, None);
        assert!(r.all_pass());
        let rank = method_rank(MethodId::Rgm, &b, &cfg).unwrap();
        assert_eq!(
            rank.pair_relation(0, 1).unwrap(),
            PairRelation::StrictlyAbove
        );

        let eq = pcm("1,2,1/2\n1/2,1,2\n2,1/2,1");
        assert!(characterization_smoke(&eq, &cfg).unwrap().all_pass());
        assert_eq!(
            method_rank(MethodId::Rgm, &eq, &cfg).unwrap().labels(),
            &[0, 0, 0]
        );
    }
}
