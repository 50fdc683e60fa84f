//! Matrix algebra behind the axioms: geometric-mean aggregation, the
//! opposite matrix, rational powers and relabeling.

use crate::error::{Error, Result};
use crate::exponent::RationalExponent;
use crate::pcm::Pcm;
use crate::permutation::Permutation;

/// Entrywise geometric mean of `k >= 1` matrices of equal size.
///
/// Each upper entry is `exp` of the mean of the logs, summed in sorted order so
/// the result does not depend on the order of `matrices`. A single matrix is
/// returned unchanged.
pub fn aggregate(matrices: &[Pcm]) -> Result<Pcm> {
    let first = matrices.first().ok_or(Error::EmptyList)?;
    let n = first.n();
    if let Some(m) = matrices.iter().find(|m| m.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.n(),
        });
    }
    if matrices.len() == 1 {
        return Ok(first.clone());
    }
    let k = matrices.len() as f64;
    let mut logs = Vec::with_capacity(matrices.len());
    Ok(Pcm::from_upper_fn(n, |i, j| {
        logs.clear();
        logs.extend(matrices.iter().map(|m| m.get(i, j).ln()));
        logs.sort_by(f64::total_cmp);
        (logs.iter().sum::<f64>() / k).exp()
    }))
}

/// Reverses every judgment, `a⁻_ij = a_ji`. This is an exact transpose, so
/// applying it twice gives back the input bit for bit.
pub fn opposite(a: &Pcm) -> Pcm {
    let n = a.n();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(a.get(j, i));
        }
    }
    Pcm::from_raw(n, entries)
}

/// `a_ij^(p/q)` on the upper triangle, mirrored.
pub fn power(a: &Pcm, kappa: RationalExponent) -> Pcm {
    if kappa == RationalExponent::ONE {
        return a.clone();
    }
    let k = kappa.value();
    Pcm::from_upper_fn(a.n(), |i, j| a.get(i, j).powf(k))
}

/// Relabels alternatives: the data of alternative `i` moves to label `σ(i)`,
/// i.e. `result[σ(i)][σ(j)] = a[i][j]`.
pub fn permute(a: &Pcm, sigma: &Permutation) -> Result<Pcm> {
    let n = a.n();
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sigma.len(),
        });
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let si = sigma.apply(i);
        for j in 0..n {
            entries[si * n + sigma.apply(j)] = a.get(i, j);
        }
    }
    Ok(Pcm::from_raw(n, entries))
}
