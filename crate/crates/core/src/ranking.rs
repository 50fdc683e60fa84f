//! Weight vectors and the weak orders they induce.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default relative tolerance under which two weights count as tied.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Tolerance on `|sum(w) - 1|` for a valid weight vector.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A positive priority vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates an already normalized vector.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidWeights("empty vector".into()));
        }
        if let Some(v) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeights(format!("non-positive weight {v}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(Self(w))
    }

    /// Normalizes positive scores to sum one.
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        if let Some(v) = scores.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidWeights(format!("non-positive score {v}")));
        }
        let sum: f64 = scores.iter().sum();
        Self::new(scores.iter().map(|s| s / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Outcome of comparing two alternatives in a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairRelation {
    StrictlyAbove,
    Tied,
    StrictlyBelow,
}

impl PairRelation {
    /// The relation seen from the other alternative.
    pub fn reversed(self) -> Self {
        match self {
            Self::StrictlyAbove => Self::StrictlyBelow,
            Self::Tied => Self::Tied,
            Self::StrictlyBelow => Self::StrictlyAbove,
        }
    }

    /// `i ≽ j`.
    pub fn is_weakly_above(self) -> bool {
        !matches!(self, Self::StrictlyBelow)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::StrictlyAbove => "≻",
            Self::Tied => "∼",
            Self::StrictlyBelow => "≺",
        }
    }
}

/// A weak order stored as dense rank labels: 0 is best, tied alternatives
/// share a label and labels are consecutive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    rank: Vec<usize>,
}

impl Ranking {
    /// Validates dense labels.
    pub fn from_labels(rank: Vec<usize>) -> Result<Self> {
        let max = rank.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; max + 1];
        for &r in &rank {
            seen[r] = true;
        }
        if rank.is_empty() || seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "rank labels {rank:?} are not dense"
            )));
        }
        Ok(Self { rank })
    }

    /// Every alternative tied.
    pub fn flat(n: usize) -> Self {
        Self { rank: vec![0; n] }
    }

    /// Alternative `i` gets label `i`.
    pub fn index_order(n: usize) -> Self {
        Self {
            rank: (0..n).collect(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.rank
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Alternatives grouped by label, best group first.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let levels = self.rank.iter().copied().max().map_or(0, |m| m + 1);
        let mut groups = vec![Vec::new(); levels];
        for (alt, &r) in self.rank.iter().enumerate() {
            groups[r].push(alt);
        }
        groups
    }

    pub fn pair_relation(&self, i: usize, j: usize) -> Result<PairRelation> {
        let n = self.rank.len();
        for index in [i, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        Ok(self.relation(i, j))
    }

    /// Unchecked variant of [`Ranking::pair_relation`] for in-range indices.
    pub(crate) fn relation(&self, i: usize, j: usize) -> PairRelation {
        use std::cmp::Ordering::*;
        match self.rank[i].cmp(&self.rank[j]) {
            Less => PairRelation::StrictlyAbove,
            Equal => PairRelation::Tied,
            Greater => PairRelation::StrictlyBelow,
        }
    }
}

impl Serialize for Ranking {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Fragment<'a> {
            rank: &'a [usize],
            groups: Vec<Vec<usize>>,
        }
        Fragment {
            rank: &self.rank,
            groups: self.groups(),
        }
        .serialize(serializer)
    }
}

/// Ranks by descending weight. Two weights are near-equal when
/// `|w_i - w_j| <= tie_tol * max(w_i, w_j)`; ties are the transitive closure
/// of near-equality, so the result is always a weak order.
pub fn ranking_from_weights(w: &[f64], tie_tol: f64) -> Ranking {
    let n = w.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));

    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if (w[i] - w[j]).abs() <= tie_tol * w[i].max(w[j]) {
                uf.union(i, j);
            }
        }
    }

    // Closed tie classes are contiguous in the sorted order: any alternative
    // between two near-equal ones is near-equal to one of them.
    let mut rank = vec![0; n];
    let mut label = 0;
    let mut prev_root = None;
    for &alt in &order {
        let root = uf.find(alt);
        if let Some(p) = prev_root {
            if p != root {
                label += 1;
            }
        }
        rank[alt] = label;
        prev_root = Some(root);
    }
    Ranking { rank }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_weights_tie() {
        let r = ranking_from_weights(&[1.0 / 3.0; 3], 1e-9);
        assert_eq!(r.labels(), &[0, 0, 0]);
    }

    #[test]
    fn strict_order() {
        let r = ranking_from_weights(&[0.5, 0.3, 0.2], 1e-9);
        assert_eq!(r.labels(), &[0, 1, 2]);
    }

    #[test]
    fn published_eigenvector_weights() {
        let w = [0.2286, 0.1430, 0.2102, 0.1321, 0.1430, 0.1430];
        let r = ranking_from_weights(&w, 1e-9);
        assert_eq!(r.labels(), &[0, 2, 1, 3, 2, 2]);
        assert_eq!(r.groups(), vec![vec![0], vec![2], vec![1, 4, 5], vec![3]]);
    }

    #[test]
    fn near_tie_chain_is_closed() {
        // 1.0 ~ 1.0 + 0.6e-9 ~ 1.0 + 1.2e-9 although the ends are 1.2e-9 apart.
        let w = [1.0, 1.0 + 0.6e-9, 1.0 + 1.2e-9, 0.5];
        let r = ranking_from_weights(&w, 1e-9);
        assert_eq!(r.labels(), &[0, 0, 0, 1]);
    }

    #[test]
    fn pair_relations() {
        let r = Ranking::from_labels(vec![0, 0, 1]).unwrap();
        assert_eq!(r.pair_relation(0, 1).unwrap(), PairRelation::Tied);
        let r = Ranking::from_labels(vec![0, 2, 1, 3, 2, 2]).unwrap();
        assert_eq!(r.pair_relation(1, 3).unwrap(), PairRelation::StrictlyAbove);
        let r = Ranking::from_labels(vec![0, 1, 2]).unwrap();
        assert_eq!(r.pair_relation(2, 0).unwrap(), PairRelation::StrictlyBelow);
        assert!(matches!(
            r.pair_relation(0, 3),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn rejects_gapped_labels() {
        assert!(Ranking::from_labels(vec![0, 2]).is_err());
        assert!(Ranking::from_labels(vec![]).is_err());
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.6, 0.5]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        let w = WeightVector::from_scores(&[9.0, 10.25]).unwrap();
        assert!((w.as_slice()[0] - 9.0 / 19.25).abs() < 1e-15);
    }

    #[test]
    fn ranking_json_fragment() {
        let r = Ranking::from_labels(vec![1, 0, 1]).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"rank":[1,0,1],"groups":[[1],[0,2]]}"#
        );
    }
}
