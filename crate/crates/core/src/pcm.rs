//! Pairwise comparison matrices: construction, validation and the CSV format.
//!
//! A [`Pcm`] is always stored in canonical form. The diagonal is exactly 1 and
//! every off-diagonal pair `{a_ij, a_ji}` is a reciprocal pair: one entry is the
//! correctly rounded reciprocal of the other. Constructors build the upper
//! triangle and mirror it; relabelings (transpose, permutation) only move
//! entries around, so they keep the pairing bit for bit.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default tolerance on `|a_ij * a_ji - 1|` accepted by the parser.
pub const DEFAULT_RECIPROCITY_TOL: f64 = 1e-6;

/// A positive reciprocal `n x n` matrix, `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pcm {
    n: usize,
    entries: Vec<f64>,
}

impl Pcm {
    /// The all-ones matrix: every alternative equally good.
    ///
    /// Panics if `n < 2`.
    pub fn ones(n: usize) -> Self {
        assert!(n >= 2, "a pairwise comparison matrix needs n >= 2");
        Self {
            n,
            entries: vec![1.0; n * n],
        }
    }

    /// Builds a matrix from its strict upper triangle. `upper(i, j)` is called
    /// once for every `i < j` and must return a positive finite value; the
    /// lower triangle is filled with reciprocals.
    ///
    /// Panics if `n < 2` or an upper entry is not positive and finite.
    pub fn from_upper_fn(n: usize, mut upper: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::ones(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper(i, j);
                assert!(v.is_finite() && v > 0.0, "upper entry ({i},{j}) = {v}");
                m.entries[i * n + j] = v;
                m.entries[j * n + i] = 1.0 / v;
            }
        }
        m
    }

    /// Validates a full grid and returns its canonical form. Reciprocity is
    /// checked within `reciprocity_tol` (diagonal included), then the lower
    /// triangle is rebuilt from the upper one.
    pub fn from_rows(rows: &[Vec<f64>], reciprocity_tol: f64) -> Result<Self> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    row: r,
                    found: row.len(),
                    expected: n,
                });
            }
        }
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::NonPositive {
                        row: r,
                        col: c,
                        literal: v.to_string(),
                    });
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                let product = rows[i][j] * rows[j][i];
                if !((product - 1.0).abs() <= reciprocity_tol) {
                    return Err(Error::ReciprocityViolation { i, j, product });
                }
            }
        }
        Ok(Self::from_upper_fn(n, |i, j| rows[i][j]))
    }

    /// The consistent matrix `a_ij = w_i / w_j` generated by positive weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::TooSmall(weights.len()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("non-positive weight {w}")));
        }
        Ok(Self::from_upper_fn(weights.len(), |i, j| {
            weights[i] / weights[j]
        }))
    }

    /// Parses the CSV matrix format (decimal or `p/q` literals) and
    /// canonicalizes it.
    pub fn parse(text: &str, reciprocity_tol: f64) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let r = rows.len();
            let row = line
                .split(',')
                .enumerate()
                .map(|(c, field)| parse_literal(field.trim(), r, c))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows, reciprocity_tol)
    }

    /// Serializes to CSV with 17 significant digits per entry, which round-trips
    /// every `f64` exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format_entry(self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }

    /// Number of alternatives.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// `ln` of every row product, summed in log space.
    pub fn row_log_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.ln()).sum())
            .collect()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n })
        }
    }

    /// Copy with `a_ij = value` and `a_ji = 1 / value`.
    pub fn with_entry(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::InvalidArgument(format!(
                "cannot modify diagonal entry ({i},{i})"
            )));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositive {
                row: i,
                col: j,
                literal: value.to_string(),
            });
        }
        let mut m = self.clone();
        m.entries[i * self.n + j] = value;
        m.entries[j * self.n + i] = 1.0 / value;
        Ok(m)
    }

    /// Removes alternative `d`, keeping the relative order of the rest.
    pub fn without_alternative(&self, d: usize) -> Result<Self> {
        self.check_index(d)?;
        if self.n <= 2 {
            return Err(Error::TooSmall(self.n - 1));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&k| k != d).collect();
        let n = keep.len();
        let mut entries = Vec::with_capacity(n * n);
        for &r in &keep {
            for &c in &keep {
                entries.push(self.get(r, c));
            }
        }
        Ok(Self { n, entries })
    }

    /// Multiplicative transitivity `a_ik = a_ij a_jk`, checked relative to `a_ik`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let lhs = self.get(i, k);
                    (lhs - self.get(i, j) * self.get(j, k)).abs() <= tol * lhs
                })
            })
        })
    }

    /// Largest absolute entrywise difference. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Pcm) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Raw constructor for relabelings that only move canonical entries.
    pub(crate) fn from_raw(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }
}

impl Serialize for Pcm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl std::fmt::Display for Pcm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            let line = self
                .row(i)
                .iter()
                .map(|v| format!("{v:>9.4}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "[{line} ]")?;
        }
        Ok(())
    }
}

fn parse_literal(field: &str, row: usize, col: usize) -> Result<f64> {
    let bad = || Error::NonPositive {
        row,
        col,
        literal: field.to_string(),
    };
    let value = match field.split_once('/') {
        Some((p, q)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if p == 0 || q == 0 {
                return Err(bad());
            }
            p as f64 / q as f64
        }
        None => field.parse::<f64>().map_err(|_| bad())?,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Positional decimal with exactly 17 significant digits.
pub fn format_entry(v: f64) -> String {
    let sci = format!("{v:.16e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    let mut s = String::new();
    let _ = write!(s, "{v:.decimals$}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_literals() {
        let a = Pcm::parse("1,4\n1/4,1", 1e-6).unwrap();
        assert_eq!(a.n(), 2);
        assert_eq!(a.get(0, 1), 4.0);
        assert_eq!(a.get(1, 0), 0.25);
    }

    #[test]
    fn canonicalizes_near_reciprocals() {
        let a = Pcm::parse("1,4\n0.2500001,1", 1e-6).unwrap();
        assert_eq!(a.get(1, 0), 0.25);
    }

    #[test]
    fn rejects_reciprocity_violation() {
        let err = Pcm::parse("1,4\n0.3,1", 1e-6).unwrap_err();
        assert!(matches!(
            err,
            Error::ReciprocityViolation { i: 0, j: 1, .. }
        ));
    }

    #[test]
    fn rejects_bad_diagonal() {
        let err = Pcm::parse("2,1\n1,1", 1e-6).unwrap_err();
        assert!(matches!(
            err,
            Error::ReciprocityViolation { i: 0, j: 0, .. }
        ));
    }

    #[test]
    fn rejects_shape_and_values() {
        assert!(matches!(
            Pcm::parse("1,2,3\n1/2,1", 1e-6),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(Pcm::parse("1", 1e-6), Err(Error::TooSmall(1))));
        assert!(matches!(Pcm::parse("", 1e-6), Err(Error::TooSmall(0))));
        assert!(matches!(
            Pcm::parse("1,-2\n-0.5,1", 1e-6),
            Err(Error::NonPositive { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            Pcm::parse("1,0/3\n3,1", 1e-6),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            Pcm::parse("1,abc\n1,1", 1e-6),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            Pcm::parse("1,inf\n0,1", 1e-6),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn whitespace_is_ignored() {
        let a = Pcm::parse("  1 , 1/3 \n 3 ,1 \n\n", 1e-6).unwrap();
        assert_eq!(a.get(0, 1), 1.0 / 3.0);
        assert_eq!(a.get(1, 0), 3.0);
    }

    #[test]
    fn csv_has_17_significant_digits() {
        assert_eq!(format_entry(0.25), "0.25000000000000000");
        assert_eq!(format_entry(4.0), "4.0000000000000000");
        assert_eq!(format_entry(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_entry(12.5), "12.500000000000000");
    }

    #[test]
    fn consistency() {
        assert!(Pcm::ones(4).is_consistent(1e-12));
        let c = Pcm::parse("1,2,4\n1/2,1,2\n1/4,1/2,1", 1e-6).unwrap();
        assert!(c.is_consistent(1e-12));
        let b = Pcm::parse("1,1,4\n1,1,3\n1/4,1/3,1", 1e-6).unwrap();
        assert!(!b.is_consistent(1e-9));
    }

    #[test]
    fn from_weights_is_consistent() {
        let a = Pcm::from_weights(&[0.5, 0.3, 0.2]).unwrap();
        assert!(a.is_consistent(1e-12));
        assert!(Pcm::from_weights(&[0.5, 0.0]).is_err());
    }

    #[test]
    fn with_entry_keeps_reciprocity() {
        let a = Pcm::ones(4).with_entry(2, 3, 4.0).unwrap();
        assert_eq!(a.get(2, 3), 4.0);
        assert_eq!(a.get(3, 2), 0.25);
        assert!(Pcm::ones(3).with_entry(1, 1, 2.0).is_err());
        assert!(Pcm::ones(3).with_entry(0, 5, 2.0).is_err());
    }

    #[test]
    fn without_alternative_keeps_order() {
        let a = Pcm::parse("1,2,3\n1/2,1,5\n1/3,1/5,1", 1e-6).unwrap();
        let b = a.without_alternative(1).unwrap();
        assert_eq!(b.rows(), vec![vec![1.0, 3.0], vec![1.0 / 3.0, 1.0]]);
        assert!(b.without_alternative(0).is_err());
    }
}
