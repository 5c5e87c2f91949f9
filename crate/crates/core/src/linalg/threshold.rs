use crate::error::{Error, Result};
use std::cmp::Ordering;

fn check_k(len: usize, k: usize) -> Result<()> {
    if k > len {
        return Err(Error::InvalidArgument(format!(
            "cannot keep {k} entries of a length-{len} vector"
        )));
    }
    Ok(())
}

/// Indices of the `k` largest scores, ties broken toward lower indices.
/// Returned in ascending index order.
pub fn top_k_indices(scores: &[f64], k: usize) -> Result<Vec<usize>> {
    check_k(scores.len(), k)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let rank = |a: &usize, b: &usize| -> Ordering {
        scores[*b].total_cmp(&scores[*a]).then(a.cmp(b))
    };
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    if k < idx.len() {
        idx.select_nth_unstable_by(k - 1, rank);
        idx.truncate(k);
    }
    idx.sort_unstable();
    Ok(idx)
}

/// Keeps `v_i` on the `k` indices with the largest `score_i`, zero elsewhere.
pub fn hard_threshold_by_score(v: &[f64], score: &[f64], k: usize) -> Result<Vec<f64>> {
    if v.len() != score.len() {
        return Err(Error::Dimension(format!(
            "{} values but {} scores",
            v.len(),
            score.len()
        )));
    }
    let mut out = vec![0.0; v.len()];
    for i in top_k_indices(score, k)? {
        out[i] = v[i];
    }
    Ok(out)
}

/// `H_k`: keep the `k` entries largest in magnitude.
pub fn hard_threshold_magnitude(v: &[f64], k: usize) -> Result<Vec<f64>> {
    let score: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    hard_threshold_by_score(v, &score, k)
}

/// `H̃_k`: keep the `k` largest entries by signed value.
pub fn hard_threshold_value(v: &[f64], k: usize) -> Result<Vec<f64>> {
    hard_threshold_by_score(v, v, k)
}
