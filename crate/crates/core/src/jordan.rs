//! Jordan structure of constant matrices from rank sequences.
//!
//! Only the triangular case is handled: eigenvalues are read off the
//! diagonal and clustered, and block sizes follow from the ranks of the
//! powers of `A - lambda I`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{identity_const, ConstMatrix};
use crate::scalar::{C64, ZERO};

/// Relative tolerance for clustering diagonal eigenvalues.
pub const EIGEN_CLUSTER_REL: f64 = 1e-8;

/// Singular values at most this fraction of the largest count as zero.
pub const RANK_REL: f64 = 1e-9;

/// Number of singular values above `RANK_REL * max(1, sigma_max)`.
pub fn numerical_rank(m: &ConstMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    let threshold = RANK_REL * top.max(1.0);
    sv.iter().filter(|&&s| s > threshold).count()
}

fn frobenius(m: &ConstMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Block sizes at eigenvalue `lambda` of algebraic multiplicity `mult`,
/// sorted descending.
fn partition_at(a: &ConstMatrix, lambda: C64, mult: usize) -> Result<Vec<usize>> {
    let n = a.nrows();
    let shifted = a - identity_const(n) * lambda;
    // ranks r_0..=r_{mult+1}; they stabilise at n - mult
    let mut ranks = vec![n];
    let mut power = identity_const(n);
    for _ in 0..=mult {
        power = &power * &shifted;
        ranks.push(numerical_rank(&power));
    }
    let mut parts = Vec::new();
    for j in 1..=mult {
        let count = ranks[j - 1] as i64 - 2 * ranks[j] as i64 + ranks[j + 1] as i64;
        if count < 0 {
            return Err(Error::Domain(format!("inconsistent rank sequence {ranks:?}")));
        }
        parts.extend(std::iter::repeat_n(j, count as usize));
    }
    if parts.iter().sum::<usize>() != mult {
        return Err(Error::Domain(format!(
            "rank sequence {ranks:?} does not account for multiplicity {mult}"
        )));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(parts)
}

/// Jordan block sizes of `n` at `lambda`, where `n - lambda I` must be nilpotent.
///
/// Block counts come from the rank sequence `r_k = rank((N - lambda I)^k)`
/// via `c_j = r_{j-1} - 2 r_j + r_{j+1}`.
pub fn jordan_type_unipotent(n: &ConstMatrix, lambda: C64) -> Result<Vec<usize>> {
    if n.nrows() != n.ncols() || n.nrows() == 0 {
        return Err(Error::Shape("expected a non-empty square matrix".into()));
    }
    let size = n.nrows();
    let shifted = n - identity_const(size) * lambda;
    let mut power = identity_const(size);
    for _ in 0..size {
        power = &power * &shifted;
    }
    let residual = frobenius(&power);
    let bound = 1e-9 * frobenius(&shifted).powi(size as i32).max(1.0);
    if residual > bound {
        return Err(Error::NotNilpotent(residual));
    }
    partition_at(n, lambda, size)
}

pub(crate) fn is_triangular(a: &ConstMatrix) -> bool {
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = 1e-12 * scale;
    let upper = (0..n).all(|i| (0..i).all(|j| a[(i, j)].norm() <= tol));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)].norm() <= tol));
    upper || lower
}

/// Eigenvalue clusters `(value, multiplicity)` read off the diagonal.
pub(crate) fn diagonal_clusters(a: &ConstMatrix) -> Vec<(C64, usize)> {
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for i in 0..a.nrows() {
        let d = a[(i, i)];
        match clusters
            .iter_mut()
            .find(|(v, _)| (*v - d).norm() <= EIGEN_CLUSTER_REL * v.norm().max(d.norm()).max(1.0))
        {
            Some((v, m)) => {
                *v = (*v * *m as f64 + d) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => clusters.push((d, 1)),
        }
    }
    clusters
}

/// Jordan data of a triangular matrix: clusters with their partitions.
pub fn jordan_data(a: &ConstMatrix) -> Result<Vec<(C64, Vec<usize>)>> {
    if !is_triangular(a) {
        return Err(Error::Shape(
            "Jordan types are computed for triangular matrices only".into(),
        ));
    }
    diagonal_clusters(a)
        .into_iter()
        .map(|(v, m)| partition_at(a, v, m).map(|p| (v, p)))
        .collect()
}

fn same_jordan_data(x: &[(C64, Vec<usize>)], y: &[(C64, Vec<usize>)]) -> bool {
    x.len() == y.len()
        && x.iter().all(|(v, p)| {
            y.iter()
                .any(|(w, p2)| (*v - *w).norm() <= EIGEN_CLUSTER_REL * v.norm().max(w.norm()).max(1.0) && p == p2)
        })
}

/// Searches for an invertible `S` with `a * S = S * b`, i.e. `a = S b S^-1`.
///
/// Triangular inputs are first screened by their Jordan data. The witness
/// itself is a generic element of the null space of `S -> a S - S b`.
pub fn similarity_witness(a: &ConstMatrix, b: &ConstMatrix) -> Result<Option<ConstMatrix>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n || n == 0 {
        return Err(Error::Shape(
            "similarity needs two square matrices of the same size".into(),
        ));
    }
    if is_triangular(a) && is_triangular(b) && !same_jordan_data(&jordan_data(a)?, &jordan_data(b)?) {
        return Ok(None);
    }
    // column-major vec: vec(aS) = (I (x) a) vec S, vec(Sb) = (b^T (x) I) vec S
    let id = identity_const(n);
    let op = id.kronecker(a) - b.transpose().kronecker(&id);
    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..n * n)
        .filter(|&i| svd.singular_values[i] <= RANK_REL * top.max(1.0))
        .collect();
    if null.is_empty() {
        return Ok(None);
    }
    let scale = 1.0 + a.iter().chain(b.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..4 {
        let mut vec = DMatrix::<C64>::zeros(n * n, 1);
        for &i in &null {
            let w = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            for k in 0..n * n {
                vec[k] += w * v_t[(i, k)].conj();
            }
        }
        let s = ConstMatrix::from_column_slice(n, n, vec.as_slice());
        let sv = s.clone().svd(false, false).singular_values;
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if smax == 0.0 || smin <= 1e-8 * smax {
            continue;
        }
        let residual = frobenius(&(a * &s - &s * b));
        if residual <= 1e-9 * scale * smax {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// The `r x r` Jordan block with eigenvalue `a`.
pub fn jordan_block(r: usize, a: C64) -> ConstMatrix {
    ConstMatrix::from_fn(r, r, |i, j| {
        if i == j {
            a
        } else if j == i + 1 {
            C64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn real(rows: &[&[f64]]) -> ConstMatrix {
        let n = rows.len();
        ConstMatrix::from_fn(n, n, |i, j| c(rows[i][j], 0.0))
    }

    #[test]
    fn unipotent_types() {
        let one = c(1.0, 0.0);
        assert_eq!(jordan_type_unipotent(&identity_const(3), one).unwrap(), vec![1, 1, 1]);
        assert_eq!(jordan_type_unipotent(&jordan_block(3, one), one).unwrap(), vec![3]);
        let j2 = jordan_block(2, one);
        assert_eq!(jordan_type_unipotent(&j2.kronecker(&j2), one).unwrap(), vec![3, 1]);
    }

    #[test]
    fn not_nilpotent() {
        let m = real(&[&[1.0, 1.0], &[0.0, 2.0]]);
        assert!(matches!(
            jordan_type_unipotent(&m, c(1.0, 0.0)),
            Err(Error::NotNilpotent(_))
        ));
    }

    #[test]
    fn mixed_eigenvalue_data() {
        let mut m = ConstMatrix::zeros(4, 4);
        m.view_mut((0, 0), (2, 2)).copy_from(&jordan_block(2, c(2.0, 0.0)));
        m.view_mut((2, 2), (2, 2)).copy_from(&jordan_block(2, c(-1.0, 0.5)));
        m[(2, 3)] = ZERO;
        let data = jordan_data(&m).unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0].1, vec![2]);
        assert_eq!(data[1].1, vec![1, 1]);
    }

    #[test]
    fn witness_for_binomial_matrix() {
        let a = real(&[&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0], &[0.0, 0.0, 1.0]]);
        let b = jordan_block(3, c(1.0, 0.0));
        let s = similarity_witness(&a, &b).unwrap().expect("same Jordan type");
        assert!(frobenius(&(&a * &s - &s * &b)) < 1e-9);
        assert!(similarity_witness(&identity_const(2), &jordan_block(2, c(1.0, 0.0)))
            .unwrap()
            .is_none());
    }
}
