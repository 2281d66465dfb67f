//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use alloc::vec::Vec;

use crate::{Error, Matrix, Result};

/// Inputs whose largest `|a_ij - a_ji|` exceeds this are rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this fraction of `‖A‖_F`.
pub const RELATIVE_OFF_DIAGONAL_TOLERANCE: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V Λ Vᵀ` of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: Matrix,
    /// Number of full sweeps performed.
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }
}

/// Decomposes a symmetric matrix with cyclic Jacobi rotations.
///
/// Eigenvalues come back in descending order; equal eigenvalues keep the order
/// in which the rotations left them on the diagonal. Each eigenvector is
/// flipped so that its largest-magnitude component (the first one, on ties) is
/// positive, which makes the output reproducible bit for bit.
pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::validation("eigen-decomposition needs a square matrix"));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("matrix has non-finite entries"));
    }
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::validation("matrix is not symmetric"));
    }

    let n = a.rows();
    // symmetrize so rotations only need to track one triangle's worth of error
    let mut m = a.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = Matrix::identity(n);
    let threshold = RELATIVE_OFF_DIAGONAL_TOLERANCE * m.norm_frobenius();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_norm(&m) > threshold {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep diagonal order
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));

    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        for r in 0..n {
            if v[(r, src)].abs() > v[(pivot, src)].abs() {
                pivot = r;
            }
        }
        let sign = if v[(pivot, src)] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            vectors[(r, dst)] = sign * v[(r, src)];
        }
    }

    Ok(SymmetricEigen { values, vectors, sweeps })
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)] * m[(i, j)];
            }
        }
    }
    libm::sqrt(sum)
}

/// Zeroes `m[p][q]` with a Givens rotation applied on both sides, accumulating it into `v`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    // smaller root of t² + 2θt - 1 = 0 keeps the rotation angle below π/4
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    let n = m.rows();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = m[(r, p)];
        let arq = m[(r, q)];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        m[(r, p)] = new_rp;
        m[(p, r)] = new_rp;
        m[(r, q)] = new_rq;
        m[(q, r)] = new_rq;
    }
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}
