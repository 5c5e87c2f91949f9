//! Leading singular triplets by block subspace iteration with a
//! Rayleigh–Ritz step, for the case `k ≪ min(m, n)`.

use super::svd::{complete_orthonormal, from_columns};
use super::{dot, norm, svd, DenseMatrix, SvdFactors};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Clone, Copy, Debug)]
pub struct SubspaceOptions {
    /// Extra basis columns beyond `k`.
    pub oversample: usize,
    pub max_iter: usize,
    /// Accept when every residual `‖Aᵀu_i − σ_i v_i‖ ≤ tol·σ_1`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        Self {
            oversample: 8,
            max_iter: 300,
            tol: 1e-12,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LeadingTriplets {
    /// `k` leading triplets.
    pub factors: SvdFactors,
    /// Full `n × p` Ritz basis, suitable as a warm start for a nearby matrix.
    pub basis: DenseMatrix,
    pub iterations: usize,
}

/// Top-`k` singular triplets of `a`.
///
/// Returns `Ok(None)` when the residual test does not pass within
/// `max_iter` rounds, or when the result cannot be certified as the top `k`:
/// accepted triplets must satisfy `σ_k² ≥ ‖A‖_F² − Σ_{i≤k} σ_i²`, which rules
/// out a larger singular value hiding outside the basis.
pub fn leading_singular_triplets(
    a: &DenseMatrix,
    k: usize,
    opts: &SubspaceOptions,
    warm: Option<&DenseMatrix>,
) -> Result<Option<LeadingTriplets>> {
    let (m, n) = a.shape();
    let r = m.min(n);
    if k == 0 || k > r {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k ≤ {r}, got k = {k}"
        )));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("subspace iteration input"));
    }
    let p = (k + opts.oversample).min(r);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    if let Some(w) = warm.filter(|w| w.rows() == n) {
        for j in 0..w.cols().min(p) {
            cols.push(w.column(j));
        }
    }
    while cols.len() < p {
        cols.push((0..n).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let mut v = orthonormalize(cols, n);
    let total = a.frobenius_norm().powi(2);

    for it in 1..=opts.max_iter {
        let b = a.matmul(&v);
        let small = svd(&b)?;
        let vr = v.matmul(&small.v);
        let z = a.t_matmul(&small.u);
        let scale = small.sigma[0];
        let converged = (0..k).all(|i| {
            let res: f64 = (0..n)
                .map(|row| {
                    let d = z.get(row, i) - small.sigma[i] * vr.get(row, i);
                    d * d
                })
                .sum::<f64>()
                .sqrt();
            res <= opts.tol * scale
        });
        if converged {
            let captured: f64 = small.sigma[..k].iter().map(|s| s * s).sum();
            let tail = (total - captured).max(0.0);
            let sk = small.sigma[k - 1];
            if k < r && sk * sk < tail * (1.0 - 1e-12) {
                return Ok(None);
            }
            return Ok(Some(LeadingTriplets {
                factors: SvdFactors {
                    u: small.u.leading_columns(k),
                    sigma: small.sigma[..k].to_vec(),
                    v: vr.leading_columns(k),
                },
                basis: vr,
                iterations: it,
            }));
        }
        v = orthonormalize((0..p).map(|j| z.column(j)).collect(), n);
    }
    Ok(None)
}

/// Twice-applied modified Gram–Schmidt; dependent columns are replaced by
/// completion vectors.
fn orthonormalize(mut cols: Vec<Vec<f64>>, n: usize) -> DenseMatrix {
    let mut missing = Vec::new();
    for j in 0..cols.len() {
        let original = norm(&cols[j]);
        for _ in 0..2 {
            for i in 0..j {
                if missing.contains(&i) {
                    continue;
                }
                let (done, rest) = cols.split_at_mut(j);
                let proj = dot(&done[i], &rest[0]);
                for (x, q) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= proj * q;
                }
            }
        }
        let nv = norm(&cols[j]);
        if original > 0.0 && nv > 1e-10 * original {
            cols[j].iter_mut().for_each(|x| *x /= nv);
        } else {
            cols[j].iter_mut().for_each(|x| *x = 0.0);
            missing.push(j);
        }
    }
    complete_orthonormal(&mut cols, &missing);
    from_columns(n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn low_rank_plus_noise(m: usize, n: usize, k: usize, noise: f64, seed: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = |r, c| DenseMatrix::from_fn(r, c, |_, _| StandardNormal.sample(&mut rng));
        let l = g(m, k).matmul(&g(k, n));
        let e = g(m, n);
        DenseMatrix::from_fn(m, n, |i, j| l.get(i, j) + noise * e.get(i, j))
    }

    #[test]
    fn agrees_with_full_svd_on_low_rank_data() {
        let a = low_rank_plus_noise(120, 60, 4, 0.05, 3);
        let full = svd(&a).unwrap();
        let top = leading_singular_triplets(&a, 4, &SubspaceOptions::default(), None)
            .unwrap()
            .expect("converges");
        for i in 0..4 {
            assert!((top.factors.sigma[i] - full.sigma[i]).abs() <= 1e-10 * full.sigma[0]);
        }
        let proj_full = DenseMatrix::from_factors(&full.u, &full.sigma[..4], &full.v);
        let proj_top = top.factors.reconstruct();
        assert!(proj_full.sub(&proj_top).frobenius_norm() <= 1e-9 * a.frobenius_norm());
    }

    #[test]
    fn warm_start_converges_in_one_round() {
        let a = low_rank_plus_noise(80, 50, 3, 0.0, 5);
        let opts = SubspaceOptions::default();
        let first = leading_singular_triplets(&a, 3, &opts, None).unwrap().unwrap();
        let again = leading_singular_triplets(&a, 3, &opts, Some(&first.basis))
            .unwrap()
            .unwrap();
        assert_eq!(again.iterations, 1);
    }

    #[test]
    fn zero_matrix_is_handled() {
        let a = DenseMatrix::zeros(30, 20);
        let top = leading_singular_triplets(&a, 2, &SubspaceOptions::default(), None)
            .unwrap()
            .unwrap();
        assert_eq!(top.factors.sigma, vec![0.0, 0.0]);
        let g = top.factors.u.t_matmul(&top.factors.u);
        assert!(g.sub(&DenseMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn flat_spectrum_is_not_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = DenseMatrix::from_fn(60, 40, |_, _| rng.random_range(-1.0..1.0));
        let got = leading_singular_triplets(&a, 2, &SubspaceOptions::default(), None).unwrap();
        if let Some(t) = got {
            let full = svd(&a).unwrap();
            assert!((t.factors.sigma[1] - full.sigma[1]).abs() <= 1e-10 * full.sigma[0]);
        }
    }

    #[test]
    fn rejects_bad_rank() {
        let a = DenseMatrix::identity(3);
        assert!(leading_singular_triplets(&a, 0, &SubspaceOptions::default(), None).is_err());
        assert!(leading_singular_triplets(&a, 4, &SubspaceOptions::default(), None).is_err());
    }
}
