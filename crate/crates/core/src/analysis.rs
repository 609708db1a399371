//! Principal component analysis of metric tables.
//!
//! Columns are z-scored (population standard deviation) before the
//! population covariance is decomposed, since the metrics have unrelated
//! units.

use alloc::vec::Vec;

use crate::linalg::{self, Matrix};
use crate::{abs, sqrt, Error};

/// Standard deviation below which a column is treated as constant.
const ZERO_VARIANCE: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardizeWarning {
    /// Column was centred but left unscaled.
    ZeroVariance { column: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub data: Matrix,
    pub warnings: Vec<StandardizeWarning>,
}

fn column_moments(table: &Matrix, j: usize) -> (f64, f64) {
    let m = table.rows() as f64;
    let mean = table.column(j).sum::<f64>() / m;
    let var = table.column(j).map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    (mean, sqrt(var))
}

/// Shifts every column to zero mean and scales it to unit population
/// standard deviation.
pub fn standardize(table: &Matrix) -> Standardized {
    let mut data = table.clone();
    let mut warnings = Vec::new();
    if table.rows() == 0 {
        return Standardized { data, warnings };
    }
    for j in 0..table.cols() {
        let (mean, sd) = column_moments(table, j);
        let scale = if sd > ZERO_VARIANCE {
            sd
        } else {
            warnings.push(StandardizeWarning::ZeroVariance { column: j });
            1.0
        };
        for i in 0..table.rows() {
            data[(i, j)] = (table[(i, j)] - mean) / scale;
        }
    }
    Standardized { data, warnings }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult<L> {
    /// Row `c` is the unit direction of component `c`, by descending variance.
    pub loadings: Matrix,
    pub eigenvalues: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    /// Scores on the first two components, one row per input row.
    pub projection: Matrix,
    pub row_labels: Vec<L>,
    pub warnings: Vec<StandardizeWarning>,
}

impl<L> PcaResult<L> {
    /// Variance share of the first two components.
    pub fn explained_by_plane(&self) -> f64 {
        self.explained_variance_ratio.iter().take(2).sum()
    }
}

/// Population covariance of the columns of `data`.
pub fn covariance(data: &Matrix) -> Matrix {
    let m = data.rows() as f64;
    let k = data.cols();
    let means: Vec<f64> = (0..k).map(|j| data.column(j).sum::<f64>() / m).collect();
    let mut cov = Matrix::zeros(k, k);
    for row in data.row_iter() {
        for a in 0..k {
            for b in a..k {
                cov[(a, b)] += (row[a] - means[a]) * (row[b] - means[b]);
            }
        }
    }
    for a in 0..k {
        for b in a..k {
            let v = cov[(a, b)] / m;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    cov
}

/// PCA of an `m x k` table (`m >= 3`, `k >= 2`) with one label per row.
///
/// Component signs are fixed so that each component's largest-magnitude
/// loading is positive.
pub fn pca<L>(table: &Matrix, labels: Vec<L>) -> Result<PcaResult<L>, Error> {
    let (m, k) = (table.rows(), table.cols());
    if m < 3 {
        return Err(Error::TooFewRows { needed: 3, found: m });
    }
    if k < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: k });
    }
    if labels.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: labels.len(),
        });
    }
    for (i, row) in table.row_iter().enumerate() {
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }

    let Standardized { data, warnings } = standardize(table);
    let cov = covariance(&data);
    let (values, vectors) = linalg::symmetric_eigen(&cov)?;

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut loadings = Matrix::zeros(k, k);
    let mut eigenvalues = Vec::with_capacity(k);
    for (c, &src) in order.iter().enumerate() {
        let mut dir: Vec<f64> = vectors.column(src).collect();
        let lead = dir
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if abs(*v) > abs(dir[best]) { i } else { best });
        if dir[lead] < 0.0 {
            dir.iter_mut().for_each(|v| *v = -*v);
        }
        loadings.row_mut(c).copy_from_slice(&dir);
        eigenvalues.push(f64::max(values[src], 0.0));
    }

    let total: f64 = eigenvalues.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::NoVariance);
    }
    let explained_variance_ratio = eigenvalues.iter().map(|v| v / total).collect();

    let mut projection = Matrix::zeros(m, 2);
    for (i, row) in data.row_iter().enumerate() {
        for c in 0..2 {
            projection[(i, c)] = row.iter().zip(loadings.row(c)).map(|(a, b)| a * b).sum();
        }
    }

    Ok(PcaResult {
        loadings,
        eigenvalues,
        explained_variance_ratio,
        projection,
        row_labels: labels,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn z_scores_of_arithmetic_sequence() {
        let t = Matrix::from_rows(&[[1.0], [2.0], [3.0]]).unwrap();
        let z = standardize(&t);
        assert!(z.warnings.is_empty());
        let want = sqrt(1.5);
        assert!(abs(z.data[(0, 0)] + want) < 1e-12);
        assert_eq!(z.data[(1, 0)], 0.0);
        assert!(abs(z.data[(2, 0)] - want) < 1e-12);
    }

    #[test]
    fn constant_column_warns() {
        let t = Matrix::from_rows(&[[5.0, 1.0], [5.0, 2.0], [5.0, 4.0]]).unwrap();
        let z = standardize(&t);
        assert_eq!(z.warnings, vec![StandardizeWarning::ZeroVariance { column: 0 }]);
        assert!(z.data.column(0).all(|v| v == 0.0));
    }

    #[test]
    fn standardize_is_idempotent() {
        let t = Matrix::from_rows(&[[1.0, 10.0], [4.0, -2.0], [2.5, 3.0], [0.0, 7.0]]).unwrap();
        let once = standardize(&t).data;
        let twice = standardize(&once).data;
        for i in 0..4 {
            for j in 0..2 {
                assert!(abs(once[(i, j)] - twice[(i, j)]) < 1e-12);
            }
        }
    }

    #[test]
    fn line_data_is_rank_one() {
        let rows: Vec<[f64; 3]> = (0..6)
            .map(|i| {
                let t = i as f64;
                [1.0 + 2.0 * t, -3.0 * t, 0.5 + t]
            })
            .collect();
        let t = Matrix::from_rows(&rows).unwrap();
        let r = pca(&t, (0..6).collect()).unwrap();
        assert!(abs(r.explained_variance_ratio[0] - 1.0) < 1e-12);
        assert!(r.explained_variance_ratio[1] < 1e-12);
        assert!(r.explained_variance_ratio[2] < 1e-12);
    }

    #[test]
    fn loadings_are_orthonormal_with_sign_rule() {
        let t = Matrix::from_rows(&[
            [1.0, 2.0, 0.3],
            [2.0, 1.0, 0.1],
            [3.0, 5.0, 0.9],
            [0.0, 0.5, 0.4],
            [4.0, 2.0, 0.2],
        ])
        .unwrap();
        let r = pca(&t, vec!['a', 'b', 'c', 'd', 'e']).unwrap();
        let lt = r.loadings.mul(&r.loadings.transpose()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(abs(lt[(i, j)] - want) < 1e-10);
            }
            let row = r.loadings.row(i);
            let lead = row.iter().fold(0.0, |m: f64, v| if abs(*v) > abs(m) { *v } else { m });
            assert!(lead > 0.0);
        }
        let ratios = &r.explained_variance_ratio;
        assert!(ratios[0] >= ratios[1] && ratios[1] >= ratios[2] && ratios[2] >= 0.0);
        assert!(abs(ratios.iter().sum::<f64>() - 1.0) < 1e-12);
    }

    #[test]
    fn pca_rejects_bad_tables() {
        let two = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert!(matches!(pca(&two, vec![0, 1]), Err(Error::TooFewRows { .. })));
        let nan = Matrix::from_rows(&[[1.0, 2.0], [f64::NAN, 4.0], [0.0, 1.0]]).unwrap();
        assert_eq!(pca(&nan, vec![0, 1, 2]), Err(Error::NonFinite { row: 1, col: 0 }));
        let ok = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [0.0, 1.0]]).unwrap();
        assert!(pca(&ok, vec![0, 1]).is_err());
        let flat = Matrix::from_rows(&[[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]]).unwrap();
        assert_eq!(pca(&flat, vec![0, 1, 2]), Err(Error::NoVariance));
    }
}
