//! Tensor, symmetric and exterior powers, and duals of factors.
//!
//! Basis conventions: `S^n` uses monomials `e_{i1} ... e_{in}` with
//! `i1 <= ... <= in`, ordered lexicographically on the index tuple (for rank
//! 2 this is `e1^n, e1^(n-1) e2, ..., e2^n`). `Λ^k` uses sorted index sets in
//! lexicographic order. Column `J` of each matrix is the image of the basis
//! vector `J`, so both constructions are multiplicative.

use std::collections::BTreeMap;

use crate::cocycle::FactorOfAutomorphy;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::LaurentMatrix;

/// `E(A) ⊗ E(B) = E(A ⊗ B)` with row-major Kronecker blocks.
pub fn tensor(f: &FactorOfAutomorphy, g: &FactorOfAutomorphy) -> Result<FactorOfAutomorphy> {
    f.check_same_torus(g)?;
    FactorOfAutomorphy::new(*f.torus(), f.generator().kron(g.generator()))
}

/// Non-decreasing index tuples of length `n` over `0..m`, in lex order.
pub fn multisets(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(m, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Strictly increasing index tuples of length `k` over `0..m`, in lex order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// The matrix of `S^n(A)` acting on degree-`n` monomials.
pub fn sym_power_matrix(a: &LaurentMatrix, n: usize) -> LaurentMatrix {
    let m = a.size();
    let basis = multisets(m, n);
    let index: BTreeMap<&[usize], usize> = basis.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let mut out = LaurentMatrix::zeros(basis.len());
    for (col, word) in basis.iter().enumerate() {
        // expand (A e_{j1}) ... (A e_{jn}) one factor at a time
        let mut expansion: BTreeMap<Vec<usize>, LaurentPoly> = BTreeMap::new();
        expansion.insert(Vec::new(), LaurentPoly::one());
        for &j in word {
            let mut next: BTreeMap<Vec<usize>, LaurentPoly> = BTreeMap::new();
            for (mono, p) in &expansion {
                for i in 0..m {
                    let entry = a.get(i, j);
                    if entry.is_zero() {
                        continue;
                    }
                    let mut key = mono.clone();
                    let at = key.partition_point(|&x| x <= i);
                    key.insert(at, i);
                    let term = p * entry;
                    let slot = next.entry(key).or_insert_with(LaurentPoly::zero);
                    *slot = &*slot + &term;
                }
            }
            expansion = next;
        }
        for (mono, p) in expansion {
            if !p.is_zero() {
                out.set(index[mono.as_slice()], col, p);
            }
        }
    }
    out
}

pub fn sym_power(f: &FactorOfAutomorphy, n: usize) -> Result<FactorOfAutomorphy> {
    FactorOfAutomorphy::new(*f.torus(), sym_power_matrix(f.generator(), n))
}

/// The matrix of `Λ^k(A)`: entry `(I, J)` is the minor on rows `I`, columns `J`.
pub fn wedge_power_matrix(a: &LaurentMatrix, k: usize) -> Result<LaurentMatrix> {
    let m = a.size();
    if k > m {
        return Err(Error::Domain(format!("exterior power {k} exceeds rank {m}")));
    }
    if k == 0 {
        return Ok(LaurentMatrix::identity(1));
    }
    let basis = subsets(m, k);
    let mut out = LaurentMatrix::zeros(basis.len());
    for (r, rows) in basis.iter().enumerate() {
        for (c, cols) in basis.iter().enumerate() {
            out.set(r, c, a.submatrix(rows, cols)?.det());
        }
    }
    Ok(out)
}

pub fn wedge_power(f: &FactorOfAutomorphy, k: usize) -> Result<FactorOfAutomorphy> {
    FactorOfAutomorphy::new(*f.torus(), wedge_power_matrix(f.generator(), k)?)
}

/// `(A^-1)^T`; needs a monomial determinant.
pub fn dual(f: &FactorOfAutomorphy) -> Result<FactorOfAutomorphy> {
    FactorOfAutomorphy::new(*f.torus(), f.generator().inverse()?.transpose())
}

/// Indices of `F_p ⊗ F_q = F_{p+q-1} ⊕ F_{p+q-3} ⊕ ... ⊕ F_{p-q+1}`.
pub fn clebsch_gordan_f(p: usize, q: usize) -> Result<Vec<usize>> {
    if q == 0 || p < q {
        return Err(Error::Domain(format!("need p >= q >= 1, got p = {p}, q = {q}")));
    }
    Ok((0..q).map(|i| p + q - 1 - 2 * i).collect())
}
