use super::FeatureMatrix;
use crate::error::{Error, Result};

/// Per-column affine scaling fitted on a subset of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation; `None` for columns left untouched
    /// because their variance is zero.
    pub std: Vec<Option<f64>>,
}

impl Standardizer {
    /// Fits on `rows`, each of length `ncols`. Uses the population (divisor
    /// `n`) standard deviation.
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a [f64]>, ncols: usize) -> Result<Self> {
        let mut count = 0usize;
        let mut mean = vec![0.0; ncols];
        let mut m2 = vec![0.0; ncols];
        for row in rows {
            if row.len() != ncols {
                return Err(Error::Argument(format!("row has {} values, expected {ncols}", row.len())));
            }
            count += 1;
            let k = count as f64;
            for ((x, mu), s) in row.iter().zip(&mut mean).zip(&mut m2) {
                let d = x - *mu;
                *mu += d / k;
                *s += d * (x - *mu);
            }
        }
        if count == 0 {
            return Err(Error::Argument("standardizer needs at least one training row".into()));
        }
        let std = mean
            .iter()
            .zip(&m2)
            .map(|(mu, s)| {
                let sd = (s / count as f64).sqrt();
                (sd > 1e-12 * mu.abs().max(1.0)).then_some(sd)
            })
            .collect();
        Ok(Standardizer { mean, std })
    }

    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(x, (mu, sd))| match sd {
                Some(sd) => (x - mu) / sd,
                None => *x,
            })
            .collect()
    }

    pub(super) fn select(&self, columns: &[usize]) -> Standardizer {
        Standardizer {
            mean: columns.iter().map(|&c| self.mean[c]).collect(),
            std: columns.iter().map(|&c| self.std[c]).collect(),
        }
    }
}

/// Standardizes every row of `fm` with statistics of the `train_idx` rows
/// only.
pub fn fit_standardizer(fm: &FeatureMatrix, train_idx: &[usize]) -> Result<FeatureMatrix> {
    if let Some(&bad) = train_idx.iter().find(|&&i| i >= fm.nrows()) {
        return Err(Error::Argument(format!("training row {bad} out of range")));
    }
    let s = Standardizer::fit(train_idx.iter().map(|&i| fm.row(i)), fm.ncols())?;
    let mut out = fm.clone();
    for r in &mut out.rows {
        r.values = s.apply(&r.values);
    }
    out.standardization = Some(s);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureVector;

    fn matrix(cols: &[&[f64]]) -> FeatureMatrix {
        let n = cols[0].len();
        let rows = (0..n)
            .map(|i| FeatureVector {
                graph_id: i.to_string(),
                values: cols.iter().map(|c| c[i]).collect(),
                degenerate: Default::default(),
            })
            .collect();
        let names = (0..cols.len()).map(|c| format!("c{c}")).collect();
        FeatureMatrix::new(names, rows, vec![0; n]).unwrap()
    }

    #[test]
    fn population_std() {
        let fm = fit_standardizer(&matrix(&[&[1.0, 2.0, 3.0]]), &[0, 1, 2]).unwrap();
        let z = (2.0f64 / 3.0).sqrt();
        let got: Vec<f64> = (0..3).map(|i| fm.row(i)[0]).collect();
        for (g, want) in got.iter().zip([-1.0 / z, 0.0, 1.0 / z]) {
            assert!((g - want).abs() < 1e-12);
        }
        assert!((got[2] - 1.224744871391589).abs() < 1e-12);
    }

    #[test]
    fn constant_column_untouched() {
        let fm = fit_standardizer(&matrix(&[&[7.0, 7.0, 7.0], &[0.0, 1.0, 2.0]]), &[0, 1, 2]).unwrap();
        assert_eq!((0..3).map(|i| fm.row(i)[0]).collect::<Vec<_>>(), vec![7.0; 3]);
        assert_eq!(fm.standardization.unwrap().std[0], None);
    }

    #[test]
    fn test_rows_use_train_statistics() {
        let a = fit_standardizer(&matrix(&[&[0.0, 2.0, 100.0]]), &[0, 1]).unwrap();
        let b = fit_standardizer(&matrix(&[&[0.0, 2.0, -5.0]]), &[0, 1]).unwrap();
        assert_eq!(a.standardization, b.standardization);
        assert_eq!(a.row(2)[0], 99.0);
    }

    #[test]
    fn empty_training_set_rejected() {
        assert!(fit_standardizer(&matrix(&[&[1.0]]), &[]).is_err());
    }
}
