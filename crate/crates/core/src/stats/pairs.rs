//! Exact concordant / discordant / tied pair counts.
//!
//! The fast path is Knight's algorithm: sort by (x, y), count x-ties and
//! joint ties from runs, then merge-sort the y column counting inversions
//! (discordant pairs) and finally count y-ties from runs of the sorted y.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::check_pair;
use crate::error::Result;

/// Pair classification of a bivariate sample.
///
/// A pair is tied when it is tied in x, in y, or in both; tied pairs are
/// neither concordant nor discordant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub n: usize,
    pub concordant: u64,
    pub discordant: u64,
    pub tied: u64,
    /// Pairs tied in x (including joint ties).
    pub tied_x: u64,
    /// Pairs tied in y (including joint ties).
    pub tied_y: u64,
    /// Pairs tied in both coordinates.
    pub tied_xy: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        choose2(self.n as u64)
    }

    /// Proportion of tied pairs.
    pub fn upsilon(&self) -> f64 {
        self.tied as f64 / self.total() as f64
    }

    /// Kendall's tau as (Nc - Nd) / C(n, 2).
    pub fn tau_a(&self) -> f64 {
        (self.concordant as f64 - self.discordant as f64) / self.total() as f64
    }
}

pub(crate) fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Exact pair counts in O(n log n).
pub fn count_pairs(x: &[f64], y: &[f64]) -> Result<PairCounts> {
    check_pair(x, y, 2)?;
    // -0.0 + 0.0 == +0.0, so total_cmp agrees with == below.
    let x: Vec<f64> = x.iter().map(|v| v + 0.0).collect();
    let y: Vec<f64> = y.iter().map(|v| v + 0.0).collect();
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));

    let mut tied_x = 0u64;
    let mut tied_xy = 0u64;
    let mut run_x = 1u64;
    let mut run_xy = 1u64;
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        if x[a] == x[b] {
            run_x += 1;
            if y[a] == y[b] {
                run_xy += 1;
            } else {
                tied_xy += choose2(run_xy);
                run_xy = 1;
            }
        } else {
            tied_x += choose2(run_x);
            tied_xy += choose2(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    tied_x += choose2(run_x);
    tied_xy += choose2(run_xy);

    let mut ys: Vec<f64> = order.iter().map(|&i| y[i]).collect();
    let discordant = merge_sort_inversions(&mut ys);

    let mut tied_y = 0u64;
    let mut run_y = 1u64;
    for w in ys.windows(2) {
        if w[0] == w[1] {
            run_y += 1;
        } else {
            tied_y += choose2(run_y);
            run_y = 1;
        }
    }
    tied_y += choose2(run_y);

    let total = choose2(n as u64);
    let tied = tied_x + tied_y - tied_xy;
    Ok(PairCounts {
        n,
        concordant: total - tied - discordant,
        discordant,
        tied,
        tied_x,
        tied_y,
        tied_xy,
    })
}

/// Sorts `v` ascending, returning the number of pairs i < j with v[i] > v[j].
fn merge_sort_inversions(v: &mut [f64]) -> u64 {
    let n = v.len();
    let mut src = v.to_vec();
    let mut dst = vec![0.0; n];
    let mut swaps = 0u64;
    let mut width = 1;
    while width < n {
        let mut start = 0;
        while start < n {
            let mid = (start + width).min(n);
            let end = (start + 2 * width).min(n);
            let (mut i, mut j, mut k) = (start, mid, start);
            while i < mid && j < end {
                if src[j].total_cmp(&src[i]) == Ordering::Less {
                    dst[k] = src[j];
                    swaps += (mid - i) as u64;
                    j += 1;
                } else {
                    dst[k] = src[i];
                    i += 1;
                }
                k += 1;
            }
            dst[k..k + (mid - i)].copy_from_slice(&src[i..mid]);
            k += mid - i;
            dst[k..k + (end - j)].copy_from_slice(&src[j..end]);
            start = end;
        }
        std::mem::swap(&mut src, &mut dst);
        width *= 2;
    }
    v.copy_from_slice(&src);
    swaps
}

/// O(n^2) reference enumeration of every pair.
pub fn count_pairs_brute(x: &[f64], y: &[f64]) -> Result<PairCounts> {
    check_pair(x, y, 2)?;
    let n = x.len();
    let mut c = PairCounts {
        n,
        concordant: 0,
        discordant: 0,
        tied: 0,
        tied_x: 0,
        tied_y: 0,
        tied_xy: 0,
    };
    for i in 0..n {
        for j in i + 1..n {
            let tx = x[i] == x[j];
            let ty = y[i] == y[j];
            c.tied_x += u64::from(tx);
            c.tied_y += u64::from(ty);
            c.tied_xy += u64::from(tx && ty);
            if tx || ty {
                c.tied += 1;
            } else if (x[i] < x[j]) == (y[i] < y[j]) {
                c.concordant += 1;
            } else {
                c.discordant += 1;
            }
        }
    }
    Ok(c)
}

/// Sizes of the groups of equal values (only groups larger than one).
pub(crate) fn tie_groups(v: &[f64]) -> Vec<u64> {
    let mut s = v.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut run = 1u64;
    for w in s.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            if run > 1 {
                groups.push(run);
            }
            run = 1;
        }
    }
    if run > 1 {
        groups.push(run);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn no_ties() {
        let c = count_pairs(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((c.concordant, c.discordant, c.tied), (3, 0, 0));
    }

    // Enumerated by hand: the only tied pair is (1,1),(1,2), tied in x.
    #[test]
    fn one_x_tie() {
        let c = count_pairs(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((c.concordant, c.discordant, c.tied), (5, 0, 1));
        assert_eq!((c.tied_x, c.tied_y, c.tied_xy), (1, 0, 0));
    }

    #[test]
    fn size_errors() {
        assert!(count_pairs(&[1.0], &[1.0]).is_err());
        assert!(count_pairs(&[1.0, 2.0], &[1.0]).is_err());
        assert!(count_pairs(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn tie_group_sizes() {
        assert_eq!(tie_groups(&[3.0, 1.0, 3.0, 2.0, 3.0, 1.0]), vec![2, 3]);
        assert!(tie_groups(&[1.0, 2.0]).is_empty());
    }

    fn tied_sample() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..200, 1u32..20, 1u32..20).prop_flat_map(|(n, kx, ky)| {
            (
                prop::collection::vec(0..kx, n).prop_map(|v| v.into_iter().map(f64::from).collect()),
                prop::collection::vec(0..ky, n).prop_map(|v| v.into_iter().map(f64::from).collect()),
            )
        })
    }

    proptest! {
        #[test]
        fn fast_equals_brute((x, y) in tied_sample()) {
            let fast = count_pairs(&x, &y).unwrap();
            let brute = count_pairs_brute(&x, &y).unwrap();
            prop_assert_eq!(fast, brute);
            prop_assert_eq!(fast.concordant + fast.discordant + fast.tied, fast.total());
        }
    }
}
