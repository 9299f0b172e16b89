use serde::Serialize;

use crate::error::{Error, Result};

/// Five-number summary with Tukey hinges and 1.5·IQR whiskers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxplotSummary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub outliers: Vec<f64>,
}

fn median_sorted(x: &[f64]) -> f64 {
    let n = x.len();
    if n % 2 == 1 {
        x[n / 2]
    } else {
        (x[n / 2 - 1] + x[n / 2]) / 2.0
    }
}

/// Quartiles are medians of the lower and upper halves; for odd sizes the
/// median belongs to both halves. Whiskers reach the most extreme data point
/// within 1.5·IQR of the hinges.
pub fn boxplot_summary(values: &[f64]) -> Result<BoxplotSummary> {
    if values.is_empty() {
        return Err(Error::EmptySample("boxplot_summary"));
    }
    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len();
    let half = n.div_ceil(2);
    let q1 = median_sorted(&x[..half]);
    let q3 = median_sorted(&x[n - half..]);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let whisker_lo = x.iter().copied().find(|&v| v >= lo_fence).unwrap_or(x[0]);
    let whisker_hi = x
        .iter()
        .rev()
        .copied()
        .find(|&v| v <= hi_fence)
        .unwrap_or(x[n - 1]);
    let outliers = x
        .iter()
        .copied()
        .filter(|&v| v < lo_fence || v > hi_fence)
        .collect();
    Ok(BoxplotSummary {
        n,
        min: x[0],
        q1,
        median: median_sorted(&x),
        q3,
        max: x[n - 1],
        whisker_lo,
        whisker_hi,
        outliers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_sample_hinges() {
        let b = boxplot_summary(&[5.0, 1.0, 4.0, 2.0, 3.0]).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (2.0, 3.0, 4.0));
        assert!(b.outliers.is_empty());
    }

    #[test]
    fn constant_sample() {
        let b = boxplot_summary(&[7.0; 6]).unwrap();
        assert_eq!([b.min, b.q1, b.median, b.q3, b.max], [7.0; 5]);
        assert!(b.outliers.is_empty());
    }

    #[test]
    fn far_point_is_outlier() {
        let mut v: Vec<f64> = (1..=9).map(f64::from).collect();
        v.push(100.0);
        let b = boxplot_summary(&v).unwrap();
        assert_eq!((b.q1, b.q3), (3.0, 8.0));
        assert_eq!(b.outliers, vec![100.0]);
        assert_eq!(b.whisker_hi, 9.0);
        assert_eq!(b.whisker_lo, 1.0);
    }

    #[test]
    fn empty_is_error() {
        assert!(boxplot_summary(&[]).is_err());
    }
}
