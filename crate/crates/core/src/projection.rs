//! Constraint projection: scatter matrices, the scaling coefficient and the
//! orthonormal projection maximizing `Tr(Wᵀ(S_C − r·S_M)W)`.

use alloc::format;
use alloc::vec::Vec;

use crate::eigen::symmetric_eigen;
use crate::{Error, Matrix, MultiLabelDataset, PairConstraintSets, Result};

/// Eigenvalues within this fraction of `‖S_C − r·S_M‖_F` of zero are treated as zero.
pub const RELATIVE_ZERO_EIGENVALUE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPair {
    pub s_cannot: Matrix,
    pub s_must: Matrix,
    pub n_cannot: usize,
    pub n_must: usize,
}

/// Learned projection `z = Wᵀx`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProjectionModel {
    /// `k × d`, orthonormal columns.
    pub w: Matrix,
    /// Kept eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub reduced_dim: usize,
    pub scaling_r: f64,
    /// `J(W) = Σ eigenvalues`.
    pub objective: f64,
}

fn check_pairs(pairs: &[(usize, usize)], n: usize) -> Result<()> {
    match pairs.iter().find(|&&(i, j)| i >= n || j >= n || i == j) {
        Some(&(i, j)) => Err(Error::validation(format!("invalid constraint pair ({i}, {j}) for {n} instances"))),
        None => Ok(()),
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `(1 / 2m) Σ (x_i − x_j)(x_i − x_j)ᵀ` over `m` pairs; zero for no pairs.
fn pair_scatter(ds: &MultiLabelDataset, pairs: &[(usize, usize)]) -> Matrix {
    let k = ds.feature_count();
    let mut s = Matrix::zeros(k, k);
    if pairs.is_empty() {
        return s;
    }
    let mut diff = alloc::vec![0.0; k];
    for &(i, j) in pairs {
        for ((d, a), b) in diff.iter_mut().zip(ds.instance(i)).zip(ds.instance(j)) {
            *d = a - b;
        }
        for p in 0..k {
            let dp = diff[p];
            if dp == 0.0 {
                continue;
            }
            // upper triangle only; mirrored below
            for q in p..k {
                s[(p, q)] += dp * diff[q];
            }
        }
    }
    let scale = 1.0 / (2.0 * pairs.len() as f64);
    for p in 0..k {
        for q in p..k {
            let v = s[(p, q)] * scale;
            s[(p, q)] = v;
            s[(q, p)] = v;
        }
    }
    s
}

pub fn scatter_matrices(ds: &MultiLabelDataset, sets: &PairConstraintSets) -> Result<ScatterPair> {
    let n = ds.instance_count();
    check_pairs(&sets.cannot, n)?;
    check_pairs(&sets.must, n)?;
    Ok(ScatterPair {
        s_cannot: pair_scatter(ds, &sets.cannot),
        s_must: pair_scatter(ds, &sets.must),
        n_cannot: sets.cannot.len(),
        n_must: sets.must.len(),
    })
}

/// Mean squared cannot-link distance over mean squared must-link distance.
///
/// Falls back to 1 when either set is empty or must-linked points coincide.
pub fn scaling_coefficient(ds: &MultiLabelDataset, sets: &PairConstraintSets) -> Result<f64> {
    let n = ds.instance_count();
    check_pairs(&sets.cannot, n)?;
    check_pairs(&sets.must, n)?;
    if sets.cannot.is_empty() || sets.must.is_empty() {
        return Ok(1.0);
    }
    let mean = |pairs: &[(usize, usize)]| {
        pairs.iter().map(|&(i, j)| squared_distance(ds.instance(i), ds.instance(j))).sum::<f64>() / pairs.len() as f64
    };
    let must = mean(&sets.must);
    if must == 0.0 {
        return Ok(1.0);
    }
    Ok(mean(&sets.cannot) / must)
}

/// Fits the projection for one pair of constraint sets.
///
/// Keeps every eigenvector of `S_C − r·S_M` with a non-negative eigenvalue.
/// When all eigenvalues are negative the single largest one is kept so the
/// projected space is never empty.
pub fn fit_projection(ds: &MultiLabelDataset, sets: &PairConstraintSets) -> Result<ProjectionModel> {
    if ds.instance_count() < 2 {
        return Err(Error::config("projection needs at least two instances"));
    }
    let scatter = scatter_matrices(ds, sets)?;
    let r = scaling_coefficient(ds, sets)?;
    ProjectionModel::from_scatter(&scatter, r)
}

impl ProjectionModel {
    pub fn from_scatter(scatter: &ScatterPair, scaling_r: f64) -> Result<Self> {
        let d_matrix = scatter.s_cannot.sub_scaled(scaling_r, &scatter.s_must)?;
        let eig = symmetric_eigen(&d_matrix)?;
        let k = d_matrix.rows();
        let zero_tol = RELATIVE_ZERO_EIGENVALUE * d_matrix.norm_frobenius();

        let mut kept: Vec<f64> = eig
            .values
            .iter()
            .take_while(|&&v| v >= -zero_tol)
            .map(|&v| if v.abs() <= zero_tol { 0.0 } else { v })
            .collect();
        if kept.is_empty() {
            kept.push(eig.values[0]);
        }
        let d = kept.len();
        let mut w = Matrix::zeros(k, d);
        for row in 0..k {
            for col in 0..d {
                w[(row, col)] = eig.vectors[(row, col)];
            }
        }
        let objective = kept.iter().sum();
        Ok(ProjectionModel { w, eigenvalues: kept, reduced_dim: d, scaling_r, objective })
    }

    pub fn input_dim(&self) -> usize {
        self.w.rows()
    }

    /// Projects one instance.
    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut z = alloc::vec![0.0; self.reduced_dim];
        self.transform_into(x, &mut z)?;
        Ok(z)
    }

    pub fn transform_into(&self, x: &[f64], z: &mut [f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: x.len() });
        }
        z.iter_mut().for_each(|v| *v = 0.0);
        for (row, &xv) in x.iter().enumerate() {
            for (zv, &wv) in z.iter_mut().zip(self.w.row(row)) {
                *zv += wv * xv;
            }
        }
        Ok(())
    }

    /// Projects every row of `x`.
    pub fn transform_matrix(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: x.cols() });
        }
        x.matmul(&self.w)
    }
}
