//! Five-number summaries.

use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub count: usize,
}

/// Quantile of sorted data by linear interpolation between order statistics.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if frac == 0.0 || lo + 1 >= sorted.len() || sorted[lo] == sorted[lo + 1] {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac
    }
}

pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Runtime("box plot of an empty sample".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(BoxplotStats {
        min: v[0],
        q1: quantile(&v, 0.25),
        median: quantile(&v, 0.5),
        q3: quantile(&v, 0.75),
        max: v[v.len() - 1],
        count: v.len(),
    })
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = boxplot_stats(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max, s.count), (1.0, 2.0, 3.0, 4.0, 5.0, 5));
        let s = boxplot_stats(&[7.5]).unwrap();
        assert!([s.min, s.q1, s.median, s.q3, s.max].iter().all(|&v| v == 7.5));
        let s = boxplot_stats(&[9.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!((s.median, s.max), (1.0, 9.0));
        assert!(boxplot_stats(&[]).is_err());
    }

    #[test]
    fn interpolates_between_order_statistics() {
        let s = boxplot_stats(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
    }

    #[test]
    fn infinite_values_do_not_poison_quartiles() {
        let s = boxplot_stats(&[1.0, 2.0, 3.0, f64::INFINITY, f64::INFINITY]).unwrap();
        assert_eq!(s.median, 3.0);
        assert_eq!(s.max, f64::INFINITY);
    }
}
