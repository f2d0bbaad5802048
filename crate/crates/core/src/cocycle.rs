//! Factors of automorphy on `C*/<q>` and their equivalence.
//!
//! A factor is fixed by its generator `A(u) = A(1, u)`; the whole cocycle is
//! `A(m, u) = A(q^(m-1) u) ... A(q u) A(u)` for `m > 0`, the identity for
//! `m = 0`, and `A(|m|, q^(-|m|) u)^(-1)` for `m < 0`. Two factors `A`, `A'`
//! are equivalent when `A(u) B(u) = B(q u) A'(u)` for an invertible `B`.

use crate::error::{Error, Result};
use crate::jordan;
use crate::laurent::LaurentPoly;
use crate::matrix::{ConstMatrix, LaurentMatrix};
use crate::scalar::{C64, ONE};
use crate::torus::Torus;

pub use crate::jordan::jordan_type_unipotent;

/// Relative tolerance for every identity check in the calculus.
pub const IDENTITY_TOL: f64 = 1e-9;

/// `lhs == rhs` up to `IDENTITY_TOL * (1 + largest coefficient of either side)`.
pub fn identity_holds(lhs: &LaurentMatrix, rhs: &LaurentMatrix) -> Result<bool> {
    Ok(lhs.relative_residual(rhs)? <= IDENTITY_TOL)
}

/// `lhs == rhs` up to `IDENTITY_TOL * (1 + scale)`, where `scale` bounds the
/// size of the terms that were summed: the largest `max|X| * max|Y|` over
/// the products `X Y` each side was built from.
///
/// Badly scaled factors cancel down to small results, so measuring against
/// the results alone would demand more than double precision can give.
pub fn identity_holds_for(
    lhs: &LaurentMatrix,
    rhs: &LaurentMatrix,
    products: &[(&LaurentMatrix, &LaurentMatrix)],
) -> Result<bool> {
    let scale = products
        .iter()
        .map(|(x, y)| x.max_abs() * y.max_abs())
        .fold(lhs.max_abs().max(rhs.max_abs()), f64::max);
    Ok(lhs.max_abs_diff(rhs)? <= IDENTITY_TOL * (1.0 + scale))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorOfAutomorphy {
    torus: Torus,
    generator: LaurentMatrix,
}

impl FactorOfAutomorphy {
    /// Fails with [`Error::SingularSample`] if `det A` vanishes at one of the
    /// sampled points of the unit circle.
    pub fn new(torus: Torus, generator: LaurentMatrix) -> Result<Self> {
        if !generator.sampled_invertible() {
            return Err(Error::SingularSample);
        }
        Ok(FactorOfAutomorphy { torus, generator })
    }

    pub fn constant(torus: Torus, a: &ConstMatrix) -> Result<Self> {
        Self::new(torus, LaurentMatrix::from_constant(a)?)
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn generator(&self) -> &LaurentMatrix {
        &self.generator
    }

    pub fn into_generator(self) -> LaurentMatrix {
        self.generator
    }

    pub fn rank(&self) -> usize {
        self.generator.size()
    }

    /// Same torus, generator replaced by `A(c u)`.
    pub fn substituted(&self, c: C64) -> Result<Self> {
        Self::new(self.torus, self.generator.substitute_scaled(c)?)
    }

    pub(crate) fn check_same_torus(&self, other: &FactorOfAutomorphy) -> Result<()> {
        if self.torus.same_as(&other.torus) {
            Ok(())
        } else {
            Err(Error::TorusMismatch)
        }
    }
}

/// An invertible `B(u)` certifying `A(u) B(u) = B(q u) A'(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceWitness {
    b: LaurentMatrix,
}

impl EquivalenceWitness {
    pub fn new(b: LaurentMatrix) -> Result<Self> {
        if !b.sampled_invertible() {
            return Err(Error::SingularSample);
        }
        Ok(EquivalenceWitness { b })
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.b
    }
}

/// `A(m, u)` for any integer `m`.
///
/// Negative `m` needs `det A` to be a monomial, otherwise the inverse leaves
/// the Laurent-polynomial class and [`Error::NotInvertibleInRing`] is returned.
pub fn iterate(f: &FactorOfAutomorphy, m: i64) -> Result<LaurentMatrix> {
    let a = f.generator();
    let q = f.torus().q();
    match m {
        0 => Ok(LaurentMatrix::identity(a.size())),
        m if m > 0 => {
            let mut acc = a.clone();
            for j in 1..m {
                let shifted = a.substitute_scaled(q.powi(j as i32))?;
                acc = shifted.mul(&acc)?;
            }
            Ok(acc)
        }
        m => {
            // A(-k, u) = A(q^-k u)^-1 ... A(q^-1 u)^-1
            let inv = a.inverse()?;
            let mut acc = inv.substitute_scaled(q.powi(-1))?;
            for j in 2..=(-m) {
                acc = inv.substitute_scaled(q.powi(-(j as i32)))?.mul(&acc)?;
            }
            Ok(acc)
        }
    }
}

/// Checks `A(u) B(u) = B(q u) A'(u)` with [`identity_holds_for`].
pub fn check_witness(f: &FactorOfAutomorphy, g: &FactorOfAutomorphy, w: &EquivalenceWitness) -> Result<bool> {
    f.check_same_torus(g)?;
    let (a, a2, b) = (f.generator(), g.generator(), w.matrix());
    if a.size() != a2.size() || a.size() != b.size() {
        return Err(Error::SizeMismatch {
            expected: a.size(),
            found: if a2.size() != a.size() { a2.size() } else { b.size() },
        });
    }
    let lhs = a.mul(b)?;
    let bq = b.substitute_scaled(f.torus().q())?;
    let rhs = bq.mul(a2)?;
    identity_holds_for(&lhs, &rhs, &[(a, b), (&bq, a2)])
}

/// For a constant line bundle `[[a]]`: the `nu` with `a = q^nu`, `|nu| <= nu_range`.
///
/// The answer is unique because `|q| < 1` separates the powers of `q`.
pub fn is_trivial_rank1_constant(f: &FactorOfAutomorphy, nu_range: u32) -> Result<Option<i32>> {
    let a = match f.generator().as_constant() {
        Some(m) if m.nrows() == 1 => m[(0, 0)],
        _ => return Err(Error::Shape("expected a constant 1x1 generator".into())),
    };
    let q = f.torus().q();
    let range = nu_range as i32;
    Ok((-range..=range).find(|&nu| {
        let qn = q.powi(nu);
        (a - qn).norm() <= IDENTITY_TOL * qn.norm()
    }))
}

/// For `A = [[1, a(u)], [0, 1]]`: a `b(u)` with `a(u) = b(q u) - b(u)`, if any.
///
/// Coefficientwise `b_k (q^k - 1) = a_k`; solvable exactly when `a_0 = 0`.
pub fn is_trivial_unipotent2(f: &FactorOfAutomorphy) -> Result<Option<LaurentPoly>> {
    let m = f.generator();
    let near_one = |p: &LaurentPoly| p.as_constant().is_some_and(|c| (c - ONE).norm() <= IDENTITY_TOL);
    if m.size() != 2 || !near_one(m.get(0, 0)) || !near_one(m.get(1, 1)) || m.get(1, 0).max_abs() > 0.0 {
        return Err(Error::Shape(
            "expected a generator of the form [[1, a(u)], [0, 1]]".into(),
        ));
    }
    let a = m.get(0, 1);
    if a.coeff(0).norm() > IDENTITY_TOL * (1.0 + a.max_abs()) {
        return Ok(None);
    }
    let q = f.torus().q();
    Ok(Some(LaurentPoly::from_terms(
        a.terms()
            .filter(|&(k, _)| k != 0)
            .map(|(k, c)| (k, c / (q.powi(k) - ONE))),
    )))
}

/// Constant witness `S` with `A = S A' S^-1` when the Jordan types agree.
pub fn equivalent_constant(a: &ConstMatrix, a2: &ConstMatrix) -> Result<Option<EquivalenceWitness>> {
    match jordan::similarity_witness(a, a2)? {
        Some(s) => Ok(Some(EquivalenceWitness::new(LaurentMatrix::from_constant(&s)?)?)),
        None => Ok(None),
    }
}
