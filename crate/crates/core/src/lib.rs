//! Pairwise comparison matrices, the weighting methods that rank them, and
//! executable checks of the axioms that characterize the row geometric mean.
//!
//! ```
//! use pcmrank_core::{method_rank, MethodId, Pcm, RankConfig};
//!
//! let a = Pcm::parse("1,1,4\n1,1,3\n1/4,1/3,1", 1e-6).unwrap();
//! let r = method_rank(MethodId::Rgm, &a, &RankConfig::default()).unwrap();
//! assert_eq!(r.labels(), &[0, 1, 2]);
//! ```

pub mod axioms;
pub mod error;
pub mod exponent;
pub mod pcm;
pub mod permutation;
pub mod random;
pub mod ranking;
pub mod registry;
pub mod theorem;
pub mod transforms;
pub mod weighting;

pub use axioms::{
    check_ai, check_ano, check_iic, check_inv, check_res, check_rsi, falsify, lemma_meta_check,
    replay, AxiomId, AxiomVerdict, Instance, LemmaReport, SearchConfig, Witness, WitnessAux,
};
pub use error::{Error, Result};
pub use exponent::RationalExponent;
pub use pcm::{Pcm, DEFAULT_RECIPROCITY_TOL};
pub use permutation::Permutation;
pub use ranking::{ranking_from_weights, PairRelation, Ranking, WeightVector, DEFAULT_TIE_TOL};
pub use theorem::{
    build_proof_chain, characterization_smoke, equalize_pair, verify_proof_identities,
    IdentityReport, ProofChain, SmokeReport,
};
pub use transforms::{aggregate, opposite, permute, power};
pub use weighting::{
    em_weights, method_rank, method_scores, method_weights, rgm_objective, rgm_weights, EmOptions,
    MethodId, RankConfig,
};
