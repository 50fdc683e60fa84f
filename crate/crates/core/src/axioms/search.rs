//! Seeded randomized counterexample search with greedy witness shrinking.
//!
//! Trial `t` draws its inputs from a ChaCha stream keyed by `(seed, t)`, so the
//! inputs of every trial, and the first failing trial, do not depend on how
//! trials are scheduled across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AxiomId, Instance, Witness};
use crate::error::{Error, Result};
use crate::exponent::RationalExponent;
use crate::pcm::Pcm;
use crate::permutation::Permutation;
use crate::random::random_pcm;
use crate::weighting::{method_rank, MethodId, RankConfig};

/// Largest numerator and denominator drawn for scale exponents.
const MAX_EXPONENT_TERM: u64 = 5;
/// Smallest log-factor by which a responsiveness trial raises `a_ij`.
const MIN_LOG_INCREASE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive range of alternative counts.
    pub n_range: (usize, usize),
    /// Upper entries are `exp(u)` with `u` uniform on `[-r, r]`.
    pub entry_log_range: f64,
    /// Inclusive range of matrix counts for aggregation trials.
    pub k_range: (usize, usize),
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 10_000,
            n_range: (2, 6),
            entry_log_range: 9f64.ln(),
            k_range: (2, 4),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        if lo < 2 || hi > 64 || lo > hi {
            return Err(Error::InvalidArgument(format!(
                "n_range {:?} must lie within [2, 64]",
                self.n_range
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        let (klo, khi) = self.k_range;
        if klo < 2 || klo > khi {
            return Err(Error::InvalidArgument(format!(
                "k_range {:?} must start at 2 or more",
                self.k_range
            )));
        }
        if !(self.entry_log_range.is_finite() && self.entry_log_range > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "entry_log_range {} must be positive",
                self.entry_log_range
            )));
        }
        Ok(())
    }

    /// The alternative-count range actually sampled for `axiom`;
    /// independence of irrelevant comparisons needs four alternatives.
    pub fn effective_n_range(&self, axiom: AxiomId) -> Result<(usize, usize)> {
        let (lo, hi) = self.n_range;
        if axiom == AxiomId::Iic {
            if hi < 4 {
                return Err(Error::DimensionTooSmall { required: 4, n: hi });
            }
            return Ok((lo.max(4), hi));
        }
        Ok((lo, hi))
    }
}

/// The deterministic random stream of trial `t`.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Searches for a violation of `axiom` by method `m`. Returns the witness of
/// the lowest-numbered failing trial after shrinking, or `None` when every
/// trial passes.
pub fn falsify(
    m: MethodId,
    axiom: AxiomId,
    cfg: &SearchConfig,
    rank: &RankConfig,
) -> Result<Option<Witness>> {
    cfg.validate()?;
    let n_range = cfg.effective_n_range(axiom)?;
    let found = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Option<Witness>> {
            let mut rng = trial_rng(cfg.seed, t);
            let instance = draw_instance(m, axiom, n_range, cfg, rank, &mut rng)?;
            Ok(instance.check(m, rank)?.witness)
        })
        .find_map_first(|r| r.transpose());
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(w)) => Ok(Some(shrink(w, rank)?)),
    }
}

/// Draws the inputs of one trial.
pub fn draw_instance<R: Rng + ?Sized>(
    m: MethodId,
    axiom: AxiomId,
    (n_lo, n_hi): (usize, usize),
    cfg: &SearchConfig,
    rank: &RankConfig,
    rng: &mut R,
) -> Result<Instance> {
    let n = rng.random_range(n_lo..=n_hi);
    let range = cfg.entry_log_range;
    let a = random_pcm(rng, n, range);
    Ok(match axiom {
        AxiomId::Ano => {
            let sigma = Permutation::random(n, rng);
            Instance::Ano { a, sigma }
        }
        AxiomId::Ai => {
            let k = rng.random_range(cfg.k_range.0..=cfg.k_range.1);
            let mut matrices = vec![a];
            matrices.extend((1..k).map(|_| random_pcm(rng, n, range)));
            Instance::Ai { matrices }
        }
        AxiomId::Inv => Instance::Inv { a },
        AxiomId::Rsi => {
            let p = rng.random_range(1..=MAX_EXPONENT_TERM);
            let q = rng.random_range(1..=MAX_EXPONENT_TERM);
            Instance::Rsi {
                a,
                kappa: RationalExponent::new(p, q)?,
            }
        }
        AxiomId::Iic => {
            let picks = rand::seq::index::sample(rng, n, 4);
            let (i, j, k, l) = (
                picks.index(0),
                picks.index(1),
                picks.index(2),
                picks.index(3),
            );
            let value = loop {
                let v = rng.random_range(-range..=range).exp();
                if v != a.get(k, l) {
                    break v;
                }
            };
            Instance::Iic {
                a,
                cell: (k, l),
                value,
                pair: (i, j),
            }
        }
        AxiomId::Res => {
            let picks = rand::seq::index::sample(rng, n, 2);
            let (mut i, mut j) = (picks.index(0), picks.index(1));
            // Orient the pair so the premise i ≽ j holds and the trial is not vacuous.
            let r = method_rank(m, &a, rank)?;
            if !r.relation(i, j).is_weakly_above() {
                std::mem::swap(&mut i, &mut j);
            }
            let log_increase = rng.random_range(MIN_LOG_INCREASE..=range.max(MIN_LOG_INCREASE));
            let value = a.get(i, j) * log_increase.exp();
            Instance::Res {
                a,
                pair: (i, j),
                value,
            }
        }
    })
}

/// Greedy, best-effort reduction of a witness: first delete alternatives not
/// involved in the violation, then round entries to one significant digit.
/// Every accepted step is re-checked and still falsifies.
pub fn shrink(witness: Witness, rank: &RankConfig) -> Result<Witness> {
    let m = witness.method;
    let mut instance = witness.instance()?;
    let mut current = witness;

    let still_fails = |candidate: &Instance| -> Option<Witness> {
        match candidate.check(m, rank) {
            Ok(v) if !v.holds => v.witness,
            _ => None,
        }
    };

    'deletion: loop {
        let n = instance.n();
        if n <= min_n(instance.axiom()) {
            break;
        }
        let protected = protected_indices(&instance, &current);
        for d in (0..n).rev() {
            if protected.contains(&d) {
                continue;
            }
            if let Some(candidate) = without_alternative(&instance, d) {
                if let Some(w) = still_fails(&candidate) {
                    instance = candidate;
                    current = w;
                    continue 'deletion;
                }
            }
        }
        break;
    }

    let all_rounded = map_matrices(&instance, round_matrix);
    let all_rounded = round_aux(&all_rounded);
    if let Some(w) = still_fails(&all_rounded) {
        return Ok(w);
    }
    let matrix_count = match &instance {
        Instance::Ai { matrices } => matrices.len(),
        _ => 1,
    };
    let n = instance.n();
    for idx in 0..matrix_count {
        for i in 0..n {
            for j in (i + 1)..n {
                let candidate = map_nth_matrix(&instance, idx, |a| {
                    let rounded = round_sig1(a.get(i, j));
                    if rounded == a.get(i, j) {
                        None
                    } else {
                        a.with_entry(i, j, rounded).ok()
                    }
                });
                if let Some(candidate) = candidate {
                    if let Some(w) = still_fails(&candidate) {
                        instance = candidate;
                        current = w;
                    }
                }
            }
        }
    }
    let candidate = round_aux(&instance);
    if candidate != instance {
        if let Some(w) = still_fails(&candidate) {
            current = w;
        }
    }
    Ok(current)
}

fn min_n(axiom: AxiomId) -> usize {
    if axiom == AxiomId::Iic {
        4
    } else {
        2
    }
}

fn protected_indices(instance: &Instance, witness: &Witness) -> Vec<usize> {
    let (i, j) = witness.aux.pair;
    let mut keep = vec![i, j];
    if let Instance::Iic { cell, pair, .. } = instance {
        keep.extend([cell.0, cell.1, pair.0, pair.1]);
    }
    if let Instance::Res { pair, .. } = instance {
        keep.extend([pair.0, pair.1]);
    }
    keep
}

fn shift(index: usize, d: usize) -> usize {
    if index > d {
        index - 1
    } else {
        index
    }
}

fn without_alternative(instance: &Instance, d: usize) -> Option<Instance> {
    let drop = |a: &Pcm| a.without_alternative(d).ok();
    let shift2 = |(x, y): (usize, usize)| (shift(x, d), shift(y, d));
    Some(match instance {
        Instance::Ano { a, sigma } => Instance::Ano {
            a: drop(a)?,
            sigma: sigma.without(d),
        },
        Instance::Ai { matrices } => Instance::Ai {
            matrices: matrices.iter().map(drop).collect::<Option<Vec<_>>>()?,
        },
        Instance::Inv { a } => Instance::Inv { a: drop(a)? },
        Instance::Rsi { a, kappa } => Instance::Rsi {
            a: drop(a)?,
            kappa: *kappa,
        },
        Instance::Iic {
            a,
            cell,
            value,
            pair,
        } => Instance::Iic {
            a: drop(a)?,
            cell: shift2(*cell),
            value: *value,
            pair: shift2(*pair),
        },
        Instance::Res { a, pair, value } => Instance::Res {
            a: drop(a)?,
            pair: shift2(*pair),
            value: *value,
        },
    })
}

fn map_matrices(instance: &Instance, f: impl Fn(&Pcm) -> Pcm) -> Instance {
    let mut out = instance.clone();
    match &mut out {
        Instance::Ai { matrices } => matrices.iter_mut().for_each(|a| *a = f(a)),
        Instance::Ano { a, .. }
        | Instance::Inv { a }
        | Instance::Rsi { a, .. }
        | Instance::Iic { a, .. }
        | Instance::Res { a, .. } => *a = f(a),
    }
    out
}

fn map_nth_matrix(
    instance: &Instance,
    idx: usize,
    f: impl Fn(&Pcm) -> Option<Pcm>,
) -> Option<Instance> {
    let mut out = instance.clone();
    match &mut out {
        Instance::Ai { matrices } => matrices[idx] = f(&matrices[idx])?,
        Instance::Ano { a, .. }
        | Instance::Inv { a }
        | Instance::Rsi { a, .. }
        | Instance::Iic { a, .. }
        | Instance::Res { a, .. } => *a = f(a)?,
    }
    Some(out)
}

fn round_aux(instance: &Instance) -> Instance {
    let mut out = instance.clone();
    match &mut out {
        Instance::Iic { value, .. } | Instance::Res { value, .. } => *value = round_sig1(*value),
        _ => {}
    }
    out
}

fn round_matrix(a: &Pcm) -> Pcm {
    Pcm::from_upper_fn(a.n(), |i, j| round_sig1(a.get(i, j)))
}

/// Rounds to one significant digit on the side of 1 the value lies on:
/// `x >= 1` rounds `x` itself, `x < 1` rounds `1/x` and inverts, so 0.137
/// becomes 1/7.
pub fn round_sig1(x: f64) -> f64 {
    fn round_up_side(y: f64) -> f64 {
        let scale = 10f64.powi(y.log10().floor() as i32);
        ((y / scale).round() * scale).max(1.0)
    }
    if x >= 1.0 {
        round_up_side(x)
    } else {
        1.0 / round_up_side(1.0 / x)
    }
}
