//! Chi-square tests for comparing visit-count distributions.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Smallest expected count a bin may have before it is pooled into the tail.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn p_value(statistic: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::InvalidArgument(
            "chi-square test needs at least two bins".into(),
        ));
    }
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(dist.sf(statistic))
}

/// Homogeneity test of two count vectors over the same categories
/// (`a[k]`, `b[k]`). Categories from the first one whose expected count
/// falls below [`MIN_EXPECTED`] onward are pooled into a single tail bin.
pub fn homogeneity(a: &[u64], b: &[u64]) -> Result<ChiSquareTest> {
    let len = a.len().max(b.len());
    let at = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0) as f64;
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let n = na + nb;

    // Drop categories empty in both samples, then pool the sparse tail.
    let cats: Vec<(f64, f64)> = (0..len)
        .map(|k| (at(a, k), at(b, k)))
        .filter(|&(x, y)| x + y > 0.0)
        .collect();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut tail = (0.0, 0.0);
    let mut pooling = false;
    for (x, y) in cats {
        let col = x + y;
        if !pooling && (col * na / n < MIN_EXPECTED || col * nb / n < MIN_EXPECTED) {
            pooling = true;
        }
        if pooling {
            tail.0 += x;
            tail.1 += y;
        } else {
            bins.push((x, y));
        }
    }
    if tail.0 + tail.1 > 0.0 {
        // An undersized tail is folded into the last full bin.
        let col = tail.0 + tail.1;
        if (col * na / n < MIN_EXPECTED || col * nb / n < MIN_EXPECTED) && !bins.is_empty() {
            let last = bins.last_mut().unwrap();
            last.0 += tail.0;
            last.1 += tail.1;
        } else {
            bins.push(tail);
        }
    }

    let statistic = bins
        .iter()
        .map(|&(x, y)| {
            let col = x + y;
            let (ea, eb) = (col * na / n, col * nb / n);
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: p_value(statistic, dof)?,
    })
}

/// Goodness of fit of `counts[k]` (k >= 1; `counts[0]` must be 0) to the
/// geometric law `P(K = k) = p^(k-1) (1 - p)`. Bins are pooled from the
/// first one with expected count below [`MIN_EXPECTED`] into a tail
/// `P(K >= k) = p^(k-1)`.
pub fn geometric_fit(counts: &[u64], p: f64) -> Result<ChiSquareTest> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} outside (0, 1)")));
    }
    if counts.first().copied().unwrap_or(0) != 0 {
        return Err(Error::InvalidArgument("visit counts start at 1".into()));
    }
    let n: f64 = counts.iter().sum::<u64>() as f64;
    if n == 0.0 {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let mut statistic = 0.0;
    let mut bins = 0;
    let mut k = 1usize;
    loop {
        let tail_expected = n * p.powi(k as i32 - 1);
        let point_expected = tail_expected * (1.0 - p);
        // Close with a tail bin once the next point bin, or what would
        // remain after it, is too small.
        if point_expected < MIN_EXPECTED || tail_expected - point_expected < MIN_EXPECTED {
            let observed: f64 = counts.iter().skip(k).sum::<u64>() as f64;
            statistic += (observed - tail_expected).powi(2) / tail_expected;
            bins += 1;
            break;
        }
        let observed = counts.get(k).copied().unwrap_or(0) as f64;
        statistic += (observed - point_expected).powi(2) / point_expected;
        bins += 1;
        k += 1;
    }
    let dof = bins - 1;
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: p_value(statistic, dof)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_are_homogeneous() {
        let a = [0, 500, 250, 125, 60, 30, 15, 7, 3, 1];
        let t = homogeneity(&a, &a).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert!((t.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_samples_are_rejected() {
        let a = [0, 500, 250, 125, 60];
        let b = [0, 250, 500, 125, 60];
        assert!(homogeneity(&a, &b).unwrap().p_value < 1e-6);
    }

    #[test]
    fn exact_geometric_counts_fit() {
        let p: f64 = 0.3;
        let n = 100_000.0;
        let counts: Vec<u64> = std::iter::once(0)
            .chain((1..30).map(|k| (n * p.powi(k - 1) * (1.0 - p)).round() as u64))
            .collect();
        let t = geometric_fit(&counts, p).unwrap();
        assert!(t.p_value > 0.99, "{t:?}");
        assert!(geometric_fit(&counts, 0.5).unwrap().p_value < 1e-6);
    }

    #[test]
    fn textbook_statistic() {
        // 2x2 table [[10, 20], [30, 40]]: chi-square = 0.7937 on 1 dof.
        let t = homogeneity(&[10, 20], &[30, 40]).unwrap();
        assert_eq!(t.dof, 1);
        assert!((t.statistic - 0.793_650_793_650_8).abs() < 1e-9);
    }

    #[test]
    fn bad_inputs() {
        assert!(homogeneity(&[], &[1]).is_err());
        assert!(geometric_fit(&[1, 2], 0.5).is_err());
        assert!(geometric_fit(&[0, 2], 1.5).is_err());
    }
}
