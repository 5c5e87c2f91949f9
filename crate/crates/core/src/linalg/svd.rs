use super::{dot, norm, DenseMatrix};
use crate::error::{Error, Result};

/// Economy SVD `A = U · Diag(sigma) · Vᵀ` with `r = min(m, n)` columns.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    /// m × r, orthonormal columns.
    pub u: DenseMatrix,
    /// Length r, nonincreasing, nonnegative.
    pub sigma: Vec<f64>,
    /// n × r, orthonormal columns.
    pub v: DenseMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        DenseMatrix::from_factors(&self.u, &self.sigma, &self.v)
    }
}

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns of the taller orientation are orthogonalised pairwise until every
/// pair satisfies `|a_p·a_q| ≤ eps·‖a_p‖‖a_q‖`; singular values are the final
/// column norms. Wide inputs are handled through the transpose.
pub fn svd(a: &DenseMatrix) -> Result<SvdFactors> {
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("svd input"));
    }
    if a.rows() >= a.cols() {
        Ok(jacobi_tall(a))
    } else {
        let t = jacobi_tall(&a.transpose());
        Ok(SvdFactors {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

fn jacobi_tall(a: &DenseMatrix) -> SvdFactors {
    let (m, n) = a.shape();
    // column-major working copies
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let eps = f64::EPSILON * (m as f64).sqrt().max(1.0);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s);
                rotate_pair(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = cols.iter().map(|c| norm(c)).enumerate().collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));

    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    let mut sigma = Vec::with_capacity(n);
    let mut vsorted = Vec::with_capacity(n);
    for (slot, &(j, s)) in order.iter().enumerate() {
        sigma.push(s);
        vsorted.push(vcols[j].clone());
        if s > f64::MIN_POSITIVE * 1e4 {
            ucols.push(cols[j].iter().map(|x| x / s).collect());
        } else {
            ucols.push(vec![0.0; m]);
            missing.push(slot);
        }
    }
    complete_orthonormal(&mut ucols, &missing);

    SvdFactors {
        u: from_columns(m, &ucols),
        sigma,
        v: from_columns(n, &vsorted),
    }
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Fills the listed slots with unit vectors orthogonal to every other column.
pub(crate) fn complete_orthonormal(cols: &mut [Vec<f64>], missing: &[usize]) {
    if missing.is_empty() {
        return;
    }
    let m = cols[0].len();
    let mut candidate = 0usize;
    for &slot in missing {
        loop {
            assert!(candidate < m, "cannot complete an orthonormal basis");
            let mut v = vec![0.0; m];
            v[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for (k, c) in cols.iter().enumerate() {
                    if k == slot || c.iter().all(|x| *x == 0.0) {
                        continue;
                    }
                    let proj = dot(c, &v);
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let nv = norm(&v);
            if nv > 1e-8 {
                cols[slot] = v.iter().map(|x| x / nv).collect();
                break;
            }
        }
    }
}

pub(crate) fn from_columns(rows: usize, cols: &[Vec<f64>]) -> DenseMatrix {
    let ncols = cols.len();
    DenseMatrix::from_fn(rows, ncols, |i, j| cols[j][i])
}
