use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Means of consecutive groups of `lambda` rank-ordered values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSeries {
    pub lambda: usize,
    /// (bin index j starting at 1, mean value of the bin)
    pub points: Vec<(usize, f64)>,
}

impl BinSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xy(&self) -> (Vec<f64>, Vec<f64>) {
        self.points.iter().map(|&(j, m)| (j as f64, m)).unzip()
    }
}

/// Bin j holds ranks lambda*(j-1)+1 ..= lambda*j. The incomplete final bin
/// is dropped, so there are floor(n / lambda) bins.
pub fn linear_binning(values: &[f64], lambda: usize) -> Result<BinSeries> {
    if lambda == 0 {
        return Err(Error::Config("bin width must be >= 1".into()));
    }
    if values.len() < lambda {
        return Err(Error::NoCompleteBin {
            n: values.len(),
            lambda,
        });
    }
    let points = values
        .chunks_exact(lambda)
        .enumerate()
        .map(|(i, chunk)| (i + 1, chunk.iter().sum::<f64>() / lambda as f64))
        .collect();
    Ok(BinSeries { lambda, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bin_counts() {
        let v = vec![1.0; 16_235];
        assert_eq!(linear_binning(&v, 100).unwrap().len(), 162);
        assert_eq!(linear_binning(&v, 500).unwrap().len(), 32);
        assert_eq!(linear_binning(&v[..9_930], 100).unwrap().len(), 99);
    }

    #[test]
    fn identity_and_errors() {
        let v = [3.0, 1.0, 2.0];
        let b = linear_binning(&v, 1).unwrap();
        assert_eq!(b.points, vec![(1, 3.0), (2, 1.0), (3, 2.0)]);
        assert!(matches!(linear_binning(&v, 4), Err(Error::NoCompleteBin { .. })));
        assert!(linear_binning(&v, 0).is_err());
    }

    proptest! {
        #[test]
        fn bins_partition_ranks(v in prop::collection::vec(1u8..30, 1..400), lambda in 1usize..40) {
            prop_assume!(v.len() >= lambda);
            let v: Vec<f64> = v.into_iter().map(f64::from).collect();
            let b = linear_binning(&v, lambda).unwrap();
            let covered = lambda * b.len();
            prop_assert_eq!(b.len(), v.len() / lambda);
            let direct = v[..covered].iter().sum::<f64>() / covered as f64;
            let weighted = b.points.iter().map(|p| p.1 * lambda as f64).sum::<f64>() / covered as f64;
            prop_assert!((direct - weighted).abs() < 1e-9);
        }
    }
}
