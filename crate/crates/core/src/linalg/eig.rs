use super::DenseMatrix;
use crate::error::{Error, Result};

/// `W = U · Diag(lambda) · Uᵀ` with `lambda` nonincreasing.
#[derive(Clone, Debug)]
pub struct EigFactors {
    pub u: DenseMatrix,
    pub lambda: Vec<f64>,
}

impl EigFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        DenseMatrix::from_factors(&self.u, &self.lambda, &self.u)
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Input must satisfy `‖W − Wᵀ‖_max ≤ 1e-12·‖W‖_max`; the lower triangle is
/// mirrored from the upper one before iterating.
pub fn sym_eig(w: &DenseMatrix) -> Result<EigFactors> {
    if !w.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    if w.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigendecomposition input"));
    }
    let asymmetry = w.asymmetry();
    if asymmetry > 1e-12 * w.max_abs() {
        return Err(Error::Asymmetric { asymmetry });
    }
    let n = w.rows();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if j >= i { w.get(i, j) } else { w.get(j, i) }).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let scale = w.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 { 1.0 } else { -1.0 }
                    / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y][y].total_cmp(&a[x][x]).then(x.cmp(&y)));
    let lambda = order.iter().map(|&j| a[j][j]).collect();
    let u = DenseMatrix::from_fn(n, n, |i, j| v[i][order[j]]);
    Ok(EigFactors { u, lambda })
}
