//! Square matrices of Laurent polynomials.
//!
//! A [`LaurentMatrix`] is the generator `A(u)` of a factor of automorphy.
//! Entries are stored row-major. Pruning happens per entry, relative to the
//! scale of the polynomial operation that produced it; entries that are
//! small but exact (e.g. `q^9 u^-3` next to `10^3`) are kept.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, PRUNE_REL};
use crate::scalar::{C64, ONE, ZERO};

/// Constant complex matrix.
pub type ConstMatrix = DMatrix<C64>;

/// Size from which [`LaurentMatrix::det`] switches to fraction-free elimination.
pub const BAREISS_FROM: usize = 9;

/// Number of points on `|u| = 1` used by the sampled invertibility check.
pub const INVERTIBILITY_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn new(n: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("matrix size must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(LaurentMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape(format!("row of length {} in a {n}x{n} matrix", row.len())));
            }
            entries.extend(row);
        }
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        LaurentMatrix {
            n,
            entries: vec![LaurentPoly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = LaurentPoly::one();
        }
        m
    }

    pub fn diagonal(diag: Vec<LaurentPoly>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::Shape("empty diagonal".into()));
        }
        let mut m = Self::zeros(n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        Ok(m)
    }

    pub fn from_constant(a: &ConstMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Shape(format!(
                "{}x{} constant matrix is not square",
                a.nrows(),
                a.ncols()
            )));
        }
        let n = a.nrows();
        let entries = (0..n * n)
            .map(|idx| LaurentPoly::constant(a[(idx / n, idx % n)]))
            .collect();
        Self::new(n, entries)
    }

    /// Block-diagonal assembly, first block in the top-left corner.
    pub fn block_diag(blocks: &[LaurentMatrix]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        if n == 0 {
            return Err(Error::Shape("no blocks".into()));
        }
        let mut m = Self::zeros(n);
        let mut off = 0;
        for b in blocks {
            m.set_block(off, off, b);
            off += b.n;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.n + j] = p;
    }

    pub(crate) fn set_block(&mut self, row: usize, col: usize, b: &LaurentMatrix) {
        for i in 0..b.n {
            for j in 0..b.n {
                self.set(row + i, col + j, b.get(i, j).clone());
            }
        }
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(LaurentPoly::max_abs).fold(0.0, f64::max)
    }

    /// Drops coefficients below `PRUNE_REL` times the matrix-wide maximum.
    pub fn prune(&mut self) {
        let threshold = PRUNE_REL * self.max_abs();
        for e in &mut self.entries {
            e.prune_absolute(threshold);
        }
    }

    fn check_size(&self, other: &LaurentMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.check_size(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let acc = LaurentPoly::sum_of_products((0..n).map(|k| (1.0, self.get(i, k), other.get(k, j))));
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &LaurentMatrix,
        f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly,
    ) -> Result<LaurentMatrix> {
        self.check_size(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(LaurentMatrix { n: self.n, entries })
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> LaurentMatrix {
        LaurentMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale_by(&self, p: &LaurentPoly) -> LaurentMatrix {
        self.map_entries(|e| e * p)
    }

    /// `A(c * u)`.
    pub fn substitute_scaled(&self, c: C64) -> Result<LaurentMatrix> {
        if c == ZERO {
            return Err(Error::Domain("substitution u -> c*u needs c != 0".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.substitute_scaled(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentMatrix { n: self.n, entries })
    }

    pub fn transpose(&self) -> LaurentMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|idx| self.get(idx % n, idx / n).clone()).collect();
        LaurentMatrix { n, entries }
    }

    /// Kronecker product with the row-major block convention: block `(i, j)`
    /// of the result is `self[i][j] * other`.
    pub fn kron(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let (n, m) = (self.n, other.n);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<LaurentMatrix> {
        if rows.len() != cols.len() || rows.is_empty() {
            return Err(Error::Shape(
                "submatrix index sets must be non-empty and of equal length".into(),
            ));
        }
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Ok(LaurentMatrix { n: rows.len(), entries })
    }

    fn minor_matrix(&self, row: usize, col: usize) -> LaurentMatrix {
        let rows: Vec<usize> = (0..self.n).filter(|&i| i != row).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&j| j != col).collect();
        self.submatrix(&rows, &cols).expect("minor of a matrix of size >= 2")
    }

    pub fn det(&self) -> LaurentPoly {
        if self.n < BAREISS_FROM {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion, memoised over column subsets (`2^n` states).
    pub fn det_cofactor(&self) -> LaurentPoly {
        let n = self.n;
        assert!(n <= 24, "cofactor expansion is limited to small matrices");
        let full = (1usize << n) - 1;
        let mut memo: Vec<Option<LaurentPoly>> = vec![None; full + 1];
        memo[0] = Some(LaurentPoly::one());
        // masks in order of increasing popcount
        let mut masks: Vec<usize> = (1..=full).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            let size = mask.count_ones() as usize;
            let row = n - size;
            let cols: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
            let acc = LaurentPoly::sum_of_products(cols.iter().enumerate().map(|(pos, &j)| {
                let rest = memo[mask & !(1 << j)]
                    .as_ref()
                    .expect("smaller subsets are filled first");
                (if pos % 2 == 0 { 1.0 } else { -1.0 }, self.get(row, j), rest)
            }));
            memo[mask] = Some(acc);
        }
        memo[full].take().expect("full mask")
    }

    /// Fraction-free (Bareiss) elimination over the Laurent ring.
    pub fn det_bareiss(&self) -> LaurentPoly {
        let n = self.n;
        let mut m: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n.saturating_sub(1) {
            let pivot_row = (k..n)
                .filter(|&i| !m[i][k].is_zero())
                .max_by(|&a, &b| m[a][k].max_abs().total_cmp(&m[b][k].max_abs()));
            let Some(p) = pivot_row else {
                return LaurentPoly::zero();
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = LaurentPoly::sum_of_products([(1.0, &m[k][k], &m[i][j]), (-1.0, &m[i][k], &m[k][j])]);
                    m[i][j] = num.exact_div(&prev).expect("Bareiss pivot is non-zero");
                }
                m[i][k] = LaurentPoly::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            -&det
        } else {
            det
        }
    }

    /// Classical adjugate: `adj(A) * A = det(A) * I`.
    pub fn adjugate(&self) -> LaurentMatrix {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor_matrix(j, i).det();
                out.set(i, j, if (i + j) % 2 == 0 { minor } else { -&minor });
            }
        }
        out
    }

    /// Inverse within the Laurent ring; exists exactly when `det` is a monomial.
    pub fn inverse(&self) -> Result<LaurentMatrix> {
        let (k, c) = self.det().as_monomial().ok_or(Error::NotInvertibleInRing)?;
        let inv_det = LaurentPoly::monomial(c.inv(), -k);
        Ok(self.adjugate().scale_by(&inv_det))
    }

    pub fn eval_at(&self, u0: C64) -> Result<ConstMatrix> {
        if u0 == ZERO {
            return Err(Error::Domain("Laurent matrices cannot be evaluated at u = 0".into()));
        }
        let n = self.n;
        Ok(ConstMatrix::from_fn(n, n, |i, j| self.get(i, j).eval(u0)))
    }

    /// `Some` when every entry is constant.
    pub fn as_constant(&self) -> Option<ConstMatrix> {
        let n = self.n;
        let vals: Option<Vec<C64>> = self.entries.iter().map(LaurentPoly::as_constant).collect();
        vals.map(|v| ConstMatrix::from_row_slice(n, n, &v))
    }

    /// Necessary condition for being a factor of automorphy: the determinant
    /// is non-zero at [`INVERTIBILITY_SAMPLES`] points of the unit circle.
    ///
    /// "Non-zero" means larger than `1e-12` times the coefficient mass of
    /// `det A`, which bounds `|det A(u)|` on the circle.
    pub fn sampled_invertible(&self) -> bool {
        let det = self.det();
        let mass: f64 = det.terms().map(|(_, c)| c.norm()).sum();
        if !(mass > 0.0 && mass.is_finite()) {
            return false;
        }
        (0..INVERTIBILITY_SAMPLES).all(|k| {
            let theta = 2.0 * PI * (k as f64 + 0.37) / INVERTIBILITY_SAMPLES as f64;
            det.eval(C64::from_polar(1.0, theta)).norm() > 1e-12 * mass
        })
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &LaurentMatrix) -> Result<f64> {
        self.check_size(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max))
    }

    /// `max |self - other| / (1 + max coefficient modulus of either side)`.
    pub fn relative_residual(&self, other: &LaurentMatrix) -> Result<f64> {
        let diff = self.max_abs_diff(other)?;
        Ok(diff / (1.0 + self.max_abs().max(other.max_abs())))
    }
}

pub fn identity_const(n: usize) -> ConstMatrix {
    ConstMatrix::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let mut widths = vec![0; self.n];
        for (idx, c) in cells.iter().enumerate() {
            widths[idx % self.n] = widths[idx % self.n].max(c.len());
        }
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:<w$}", cells[i * self.n + j], w = widths[j]))
                .collect();
            writeln!(f, "[ {} ]", row.join(" | "))?;
        }
        Ok(())
    }
}
