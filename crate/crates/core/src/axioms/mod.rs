//! Executable checks for the six ranking axioms.
//!
//! Every check evaluates one concrete instance. A failing check returns a
//! [`Witness`] that carries the full instance, so [`replay`] can rebuild it and
//! reach the same verdict.

mod lemmas;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::RationalExponent;
use crate::pcm::Pcm;
use crate::permutation::Permutation;
use crate::ranking::{PairRelation, Ranking};
use crate::transforms::{aggregate, opposite, permute, power};
use crate::weighting::{method_rank, MethodId, RankConfig};

pub use lemmas::{lemma_meta_check, Implication, ImplicationStatus, LemmaReport};
pub use search::{falsify, SearchConfig};

/// The six axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxiomId {
    /// Anonymity.
    #[serde(rename = "ANO")]
    Ano,
    /// Aggregation invariance.
    #[serde(rename = "AI")]
    Ai,
    /// Inversion.
    #[serde(rename = "INV")]
    Inv,
    /// Rational scale invariance.
    #[serde(rename = "RSI")]
    Rsi,
    /// Independence of irrelevant comparisons.
    #[serde(rename = "IIC")]
    Iic,
    /// Responsiveness.
    #[serde(rename = "RES")]
    Res,
}

impl AxiomId {
    pub const ALL: [AxiomId; 6] = [
        AxiomId::Ano,
        AxiomId::Ai,
        AxiomId::Inv,
        AxiomId::Rsi,
        AxiomId::Iic,
        AxiomId::Res,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Ano => "ANO",
            AxiomId::Ai => "AI",
            AxiomId::Inv => "INV",
            AxiomId::Rsi => "RSI",
            AxiomId::Iic => "IIC",
            AxiomId::Res => "RES",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == upper)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown axiom {s:?}")))
    }
}

/// Auxiliary inputs of a witness. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessAux {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<RationalExponent>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// The violated pair, oriented as the axiom states it.
    pub pair: (usize, usize),
}

/// A concrete falsifying instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub axiom: AxiomId,
    pub method: MethodId,
    pub matrices: Vec<Pcm>,
    pub aux: WitnessAux,
    pub narrative: String,
}

impl Witness {
    /// The check inputs this witness was built from.
    pub fn instance(&self) -> Result<Instance> {
        let missing =
            |what: &str| Error::InvalidArgument(format!("{} witness lacks {what}", self.axiom));
        let a = || self.matrices.first().cloned().ok_or(Error::EmptyList);
        Ok(match self.axiom {
            AxiomId::Ano => Instance::Ano {
                a: a()?,
                sigma: self
                    .aux
                    .permutation
                    .clone()
                    .ok_or_else(|| missing("permutation"))?,
            },
            AxiomId::Ai => Instance::Ai {
                matrices: self.matrices.clone(),
            },
            AxiomId::Inv => Instance::Inv { a: a()? },
            AxiomId::Rsi => Instance::Rsi {
                a: a()?,
                kappa: self.aux.kappa.ok_or_else(|| missing("kappa"))?,
            },
            AxiomId::Iic => Instance::Iic {
                a: a()?,
                cell: self.aux.cell.ok_or_else(|| missing("cell"))?,
                value: self.aux.value.ok_or_else(|| missing("value"))?,
                pair: self.aux.pair,
            },
            AxiomId::Res => Instance::Res {
                a: a()?,
                pair: self.aux.pair,
                value: self.aux.value.ok_or_else(|| missing("value"))?,
            },
        })
    }
}

/// Outcome of one check. A witness is present exactly when the axiom fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: Witness) -> Self {
        Self {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Inputs of a single axiom check.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Ano {
        a: Pcm,
        sigma: Permutation,
    },
    Ai {
        matrices: Vec<Pcm>,
    },
    Inv {
        a: Pcm,
    },
    Rsi {
        a: Pcm,
        kappa: RationalExponent,
    },
    Iic {
        a: Pcm,
        cell: (usize, usize),
        value: f64,
        pair: (usize, usize),
    },
    Res {
        a: Pcm,
        pair: (usize, usize),
        value: f64,
    },
}

impl Instance {
    pub fn axiom(&self) -> AxiomId {
        match self {
            Instance::Ano { .. } => AxiomId::Ano,
            Instance::Ai { .. } => AxiomId::Ai,
            Instance::Inv { .. } => AxiomId::Inv,
            Instance::Rsi { .. } => AxiomId::Rsi,
            Instance::Iic { .. } => AxiomId::Iic,
            Instance::Res { .. } => AxiomId::Res,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Ai { matrices } => matrices.first().map_or(0, Pcm::n),
            Instance::Ano { a, .. }
            | Instance::Inv { a }
            | Instance::Rsi { a, .. }
            | Instance::Iic { a, .. }
            | Instance::Res { a, .. } => a.n(),
        }
    }

    pub fn check(&self, m: MethodId, cfg: &RankConfig) -> Result<AxiomVerdict> {
        match self {
            Instance::Ano { a, sigma } => check_ano(m, a, sigma, cfg),
            Instance::Ai { matrices } => check_ai(m, matrices, cfg),
            Instance::Inv { a } => check_inv(m, a, cfg),
            Instance::Rsi { a, kappa } => check_rsi(m, a, *kappa, cfg),
            Instance::Iic {
                a,
                cell,
                value,
                pair,
            } => check_iic(m, a, *cell, *value, *pair, cfg),
            Instance::Res { a, pair, value } => check_res(m, a, *pair, *value, cfg),
        }
    }
}

/// Re-runs the check a witness came from.
pub fn replay(witness: &Witness, cfg: &RankConfig) -> Result<AxiomVerdict> {
    witness.instance()?.check(witness.method, cfg)
}

fn aux(pair: (usize, usize)) -> WitnessAux {
    WitnessAux {
        permutation: None,
        kappa: None,
        cell: None,
        value: None,
        pair,
    }
}

fn rel(r: &Ranking, i: usize, j: usize) -> PairRelation {
    r.relation(i, j)
}

/// Anonymity: `i ≽_A j ⟺ σ(i) ≽_σ(A) σ(j)` for every pair.
pub fn check_ano(
    m: MethodId,
    a: &Pcm,
    sigma: &Permutation,
    cfg: &RankConfig,
) -> Result<AxiomVerdict> {
    let relabeled = permute(a, sigma)?;
    let before = method_rank(m, a, cfg)?;
    let after = method_rank(m, &relabeled, cfg)?;
    let n = a.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let (si, sj) = (sigma.apply(i), sigma.apply(j));
            let (r0, r1) = (rel(&before, i, j), rel(&after, si, sj));
            if r0 != r1 {
                let narrative = format!(
                    "{} {} {} under A, but relabeled {} {} {} under σ(A)",
                    i + 1,
                    r0.symbol(),
                    j + 1,
                    si + 1,
                    r1.symbol(),
                    sj + 1
                );
                return Ok(AxiomVerdict::fail(Witness {
                    axiom: AxiomId::Ano,
                    method: m,
                    matrices: vec![a.clone()],
                    aux: WitnessAux {
                        permutation: Some(sigma.clone()),
                        ..aux((i, j))
                    },
                    narrative,
                }));
            }
        }
    }
    Ok(AxiomVerdict::pass())
}

/// Aggregation invariance: a pair weakly preferred in every matrix stays
/// weakly preferred in the aggregate, strictly if strict in some matrix.
pub fn check_ai(m: MethodId, matrices: &[Pcm], cfg: &RankConfig) -> Result<AxiomVerdict> {
    if matrices.len() < 2 {
        return Err(if matrices.is_empty() {
            Error::EmptyList
        } else {
            Error::TooFewMatrices(matrices.len())
        });
    }
    let agg = aggregate(matrices)?;
    let ranks = matrices
        .iter()
        .map(|a| method_rank(m, a, cfg))
        .collect::<Result<Vec<_>>>()?;
    let agg_rank = method_rank(m, &agg, cfg)?;
    let n = agg.n();
    for lo in 0..n {
        for hi in (lo + 1)..n {
            for (i, j) in [(lo, hi), (hi, lo)] {
                let rels: Vec<PairRelation> = ranks.iter().map(|r| rel(r, i, j)).collect();
                if !rels.iter().all(|r| r.is_weakly_above()) {
                    continue;
                }
                let strict = rels.contains(&PairRelation::StrictlyAbove);
                let got = rel(&agg_rank, i, j);
                let ok = if strict {
                    got == PairRelation::StrictlyAbove
                } else {
                    got.is_weakly_above()
                };
                if !ok {
                    let per = rels
                        .iter()
                        .map(|r| r.symbol())
                        .collect::<Vec<_>>()
                        .join(", ");
                    let narrative = format!(
                        "{i1} vs {j1} across the {k} matrices: [{per}], unanimously {want}, \
                         but {i1} {got} {j1} in the aggregate",
                        i1 = i + 1,
                        j1 = j + 1,
                        k = matrices.len(),
                        want = if strict { "≽ with some ≻" } else { "≽" },
                        got = got.symbol(),
                    );
                    return Ok(AxiomVerdict::fail(Witness {
                        axiom: AxiomId::Ai,
                        method: m,
                        matrices: matrices.to_vec(),
                        aux: aux((i, j)),
                        narrative,
                    }));
                }
            }
        }
    }
    Ok(AxiomVerdict::pass())
}

/// Inversion: the opposite matrix reverses every pairwise relation.
pub fn check_inv(m: MethodId, a: &Pcm, cfg: &RankConfig) -> Result<AxiomVerdict> {
    let before = method_rank(m, a, cfg)?;
    let after = method_rank(m, &opposite(a), cfg)?;
    let n = a.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let (r0, r1) = (rel(&before, i, j), rel(&after, i, j));
            if r1 != r0.reversed() {
                let narrative = format!(
                    "{i1} {} {j1} under A, and {i1} {} {j1} under A⁻ (expected {})",
                    r0.symbol(),
                    r1.symbol(),
                    r0.reversed().symbol(),
                    i1 = i + 1,
                    j1 = j + 1,
                );
                return Ok(AxiomVerdict::fail(Witness {
                    axiom: AxiomId::Inv,
                    method: m,
                    matrices: vec![a.clone()],
                    aux: aux((i, j)),
                    narrative,
                }));
            }
        }
    }
    Ok(AxiomVerdict::pass())
}

/// Rational scale invariance: `A` and `A^(κ)` rank every pair alike.
pub fn check_rsi(
    m: MethodId,
    a: &Pcm,
    kappa: RationalExponent,
    cfg: &RankConfig,
) -> Result<AxiomVerdict> {
    let before = method_rank(m, a, cfg)?;
    let after = method_rank(m, &power(a, kappa), cfg)?;
    let n = a.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let (r0, r1) = (rel(&before, i, j), rel(&after, i, j));
            if r0 != r1 {
                let narrative = format!(
                    "{i1} {} {j1} under A, but {i1} {} {j1} under A^({kappa})",
                    r0.symbol(),
                    r1.symbol(),
                    i1 = i + 1,
                    j1 = j + 1,
                );
                return Ok(AxiomVerdict::fail(Witness {
                    axiom: AxiomId::Rsi,
                    method: m,
                    matrices: vec![a.clone()],
                    aux: WitnessAux {
                        kappa: Some(kappa),
                        ..aux((i, j))
                    },
                    narrative,
                }));
            }
        }
    }
    Ok(AxiomVerdict::pass())
}

/// Independence of irrelevant comparisons: changing `a_kl` (with `{k,l}`
/// disjoint from `{i,j}`) leaves the relation of `i` and `j` unchanged.
pub fn check_iic(
    m: MethodId,
    a: &Pcm,
    cell: (usize, usize),
    value: f64,
    pair: (usize, usize),
    cfg: &RankConfig,
) -> Result<AxiomVerdict> {
    let n = a.n();
    if n < 4 {
        return Err(Error::DimensionTooSmall { required: 4, n });
    }
    let ((k, l), (i, j)) = (cell, pair);
    for index in [k, l, i, j] {
        a.check_index(index)?;
    }
    if k == l || i == j || k == i || k == j || l == i || l == j {
        return Err(Error::OverlappingIndices { k, l, i, j });
    }
    if value == a.get(k, l) {
        return Err(Error::UnchangedValue(value));
    }
    let modified = a.with_entry(k, l, value)?;
    let r0 = rel(&method_rank(m, a, cfg)?, i, j);
    let r1 = rel(&method_rank(m, &modified, cfg)?, i, j);
    if r0 == r1 {
        return Ok(AxiomVerdict::pass());
    }
    let narrative = format!(
        "changing a_{k1}{l1} from {} to {} turns {i1} {} {j1} into {i1} {} {j1}",
        fmt_num(a.get(k, l)),
        fmt_num(value),
        r0.symbol(),
        r1.symbol(),
        k1 = k + 1,
        l1 = l + 1,
        i1 = i + 1,
        j1 = j + 1,
    );
    Ok(AxiomVerdict::fail(Witness {
        axiom: AxiomId::Iic,
        method: m,
        matrices: vec![a.clone()],
        aux: WitnessAux {
            cell: Some(cell),
            value: Some(value),
            ..aux(pair)
        },
        narrative,
    }))
}

/// Responsiveness: if `i ≽ j`, raising `a_ij` makes `i ≻ j`.
pub fn check_res(
    m: MethodId,
    a: &Pcm,
    pair: (usize, usize),
    value: f64,
    cfg: &RankConfig,
) -> Result<AxiomVerdict> {
    let (i, j) = pair;
    a.check_index(i)?;
    a.check_index(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "pair ({i},{j}) is not two alternatives"
        )));
    }
    let current = a.get(i, j);
    if !(value > current) {
        return Err(Error::NotAnIncrease { value, current });
    }
    let r0 = rel(&method_rank(m, a, cfg)?, i, j);
    if !r0.is_weakly_above() {
        return Ok(AxiomVerdict::pass());
    }
    let modified = a.with_entry(i, j, value)?;
    let r1 = rel(&method_rank(m, &modified, cfg)?, i, j);
    if r1 == PairRelation::StrictlyAbove {
        return Ok(AxiomVerdict::pass());
    }
    let narrative = format!(
        "{i1} {} {j1} under A, raising a_{i1}{j1} from {} to {} gives {i1} {} {j1} instead of ≻",
        r0.symbol(),
        fmt_num(current),
        fmt_num(value),
        r1.symbol(),
        i1 = i + 1,
        j1 = j + 1,
    );
    Ok(AxiomVerdict::fail(Witness {
        axiom: AxiomId::Res,
        method: m,
        matrices: vec![a.clone()],
        aux: WitnessAux {
            value: Some(value),
            ..aux(pair)
        },
        narrative,
    }))
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}
