//! Empirical check of the implications "ANO and AI imply INV / RSI / IIC".
//!
//! If the falsifier finds neither an anonymity nor an aggregation-invariance
//! violation for a method, it must not find a violation of any of the three
//! implied axioms under the same budget. A contradiction points at a bug in
//! the checks, not at the lemmas.

use serde::Serialize;

use super::search::{falsify, SearchConfig};
use super::{AxiomId, Witness};
use crate::error::Result;
use crate::weighting::{MethodId, RankConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicationStatus {
    Consistent,
    Contradicted,
}

#[derive(Debug, Clone, Serialize)]
pub struct Implication {
    pub conclusion: AxiomId,
    /// No ANO and no AI violation was found.
    pub premises_hold: bool,
    pub conclusion_violated: bool,
    pub status: ImplicationStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub method: MethodId,
    pub ano_witness: Option<Witness>,
    pub ai_witness: Option<Witness>,
    pub implications: Vec<Implication>,
}

impl LemmaReport {
    pub fn all_consistent(&self) -> bool {
        self.implications
            .iter()
            .all(|i| i.status == ImplicationStatus::Consistent)
    }
}

pub fn lemma_meta_check(m: MethodId, cfg: &SearchConfig, rank: &RankConfig) -> Result<LemmaReport> {
    let ano_witness = falsify(m, AxiomId::Ano, cfg, rank)?;
    let ai_witness = falsify(m, AxiomId::Ai, cfg, rank)?;
    let premises_hold = ano_witness.is_none() && ai_witness.is_none();

    let mut iic_cfg = cfg.clone();
    iic_cfg.n_range.1 = iic_cfg.n_range.1.max(4);

    let implications = [AxiomId::Inv, AxiomId::Rsi, AxiomId::Iic]
        .into_iter()
        .map(|conclusion| {
            let search = if conclusion == AxiomId::Iic {
                &iic_cfg
            } else {
                cfg
            };
            let conclusion_violated = falsify(m, conclusion, search, rank)?.is_some();
            let status = if premises_hold && conclusion_violated {
                ImplicationStatus::Contradicted
            } else {
                ImplicationStatus::Consistent
            };
            Ok(Implication {
                conclusion,
                premises_hold,
                conclusion_violated,
                status,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LemmaReport {
        method: m,
        ano_witness,
        ai_witness,
        implications,
    })
}
