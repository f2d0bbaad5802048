//! Normal forms for indecomposable bundles of rank `r` and degree `d`, and
//! the rank and degree of an arbitrary factor.
//!
//! With `h = gcd(r, |d|)` (`h = r` for `d = 0`), `r' = r / h`, `d' = d / h`,
//! the bundle with parameter `a` has generator
//! `[[0, I_{(r'-1)h}], [phi0^d' A_h(a), 0]]` where `phi0(u) = s^-1 u^-1` and
//! `A_h(a)` is the Jordan block. For `d = 0` this is just `A_r(a)`.

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use crate::cocycle::FactorOfAutomorphy;
use crate::error::{Error, Result};
use crate::functors::tensor;
use crate::isogeny::{companion_block, pushforward, IsogenyContext};
use crate::jordan::{jordan_block, jordan_type_unipotent};
use crate::laurent::LaurentPoly;
use crate::matrix::{ConstMatrix, LaurentMatrix};
use crate::scalar::{C64, ZERO};
use crate::torus::Torus;

/// Roots of a non-monomial determinant with modulus in this range are
/// treated as zeros on the working annulus.
pub const ANNULUS: (f64, f64) = (1e-6, 1e6);

/// Relative widening of the reduction annulus `|q| < |a| <= 1`.
pub const REDUCE_COLLAR: f64 = 1e-12;

/// Relative tolerance for reading a constant diagonal.
const DIAGONAL_TOL: f64 = 1e-9;

/// `(rank, degree, a)` naming the bundle built by [`normal_form`].
///
/// The parameter is stored reduced to the annulus `|q| < |a| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BundleDescriptor {
    pub rank: usize,
    pub degree: i64,
    #[serde(with = "pair")]
    pub param: C64,
}

mod pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

impl BundleDescriptor {
    pub fn new(t: &Torus, rank: usize, degree: i64, param: C64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Domain("rank must be positive".into()));
        }
        Ok(BundleDescriptor {
            rank,
            degree,
            param: reduce(t, param)?,
        })
    }

    /// Descriptors read from outside are re-reduced on the given torus.
    pub fn canonical(&self, t: &Torus) -> Result<Self> {
        Self::new(t, self.rank, self.degree, self.param)
    }

    pub fn factor(&self, t: &Torus) -> Result<FactorOfAutomorphy> {
        normal_form(t, self.rank, self.degree, self.param)
    }
}

fn nonzero(a: C64) -> Result<C64> {
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::NonFinite("parameter"));
    }
    if a == ZERO {
        return Err(Error::Domain("parameter must be non-zero".into()));
    }
    Ok(a)
}

/// Representative of `a` modulo `<q>` with `|q| < |a| <= 1`, both bounds
/// widened by [`REDUCE_COLLAR`].
pub fn reduce(t: &Torus, a: C64) -> Result<C64> {
    let a = nonzero(a)?;
    let lq = t.q().norm().ln();
    let j = (-a.norm().ln() / lq).ceil() as i32;
    let mut b = a * t.q_pow(j);
    // the collar keeps exact powers of q on the unit circle despite rounding
    let (top, bottom) = (1.0 + REDUCE_COLLAR, t.q().norm() * (1.0 + REDUCE_COLLAR));
    while b.norm() > top {
        b *= t.q();
    }
    while b.norm() <= bottom {
        b /= t.q();
    }
    Ok(b)
}

/// Jordan block `A_r(a)` as a constant factor.
pub fn normal_form_deg0(t: &Torus, r: usize, a: C64) -> Result<FactorOfAutomorphy> {
    let a = nonzero(a)?;
    if r == 0 {
        return Err(Error::Domain("rank must be positive".into()));
    }
    FactorOfAutomorphy::constant(*t, &jordan_block(r, a))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(h, r', d')` for rank `r` and degree `d`.
pub fn split(r: usize, d: i64) -> (usize, usize, i64) {
    let h = if d == 0 {
        r
    } else {
        gcd(r as u64, d.unsigned_abs()) as usize
    };
    (h, r / h, d / h as i64)
}

/// `phi0^k = s^-k u^-k`.
pub fn phi0_power(t: &Torus, k: i64) -> LaurentPoly {
    LaurentPoly::monomial(t.half_q_pow(-(k as i32)), -(k as i32))
}

pub fn normal_form(t: &Torus, r: usize, d: i64, a: C64) -> Result<FactorOfAutomorphy> {
    let a = nonzero(a)?;
    if r == 0 {
        return Err(Error::Domain("rank must be positive".into()));
    }
    let (h, r1, d1) = split(r, d);
    let twisted = LaurentMatrix::from_constant(&jordan_block(h, a))?.scale_by(&phi0_power(t, d1));
    FactorOfAutomorphy::new(*t, companion_block(&twisted, r1))
}

/// The same bundle built as the pushforward of `L' ⊗ A_h(a)` from the
/// `r'`-fold cover, with `L' = phi0^d'`.
pub fn atiyah_construct(t: &Torus, r: usize, d: i64, a: C64) -> Result<FactorOfAutomorphy> {
    let a = nonzero(a)?;
    if r == 0 {
        return Err(Error::Domain("rank must be positive".into()));
    }
    let (h, r1, d1) = split(r, d);
    let ctx = IsogenyContext::new(*t, r1 as u32)?;
    let cover = *ctx.cover();
    let line = FactorOfAutomorphy::new(cover, LaurentMatrix::diagonal(vec![phi0_power(t, d1)])?)?;
    let on_cover = tensor(&line, &normal_form_deg0(&cover, h, a)?)?;
    pushforward(&ctx, &on_cover)
}

pub fn rank(f: &FactorOfAutomorphy) -> usize {
    f.rank()
}

/// Minus the winding number of `det A(u)` along `|u| = 1`.
///
/// A monomial determinant `c u^k` gives `-k`. Otherwise the roots of the
/// determinant are located through its companion matrix, and any root with
/// modulus in [`ANNULUS`] is reported as [`Error::DetVanishesOnCstar`].
pub fn degree(f: &FactorOfAutomorphy) -> Result<i64> {
    let det = f.generator().det();
    if let Some((k, _)) = det.as_monomial() {
        return Ok(-(k as i64));
    }
    let (lo, hi) = match (det.min_exp(), det.max_exp()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::DetVanishesOnCstar(0.0)),
    };
    let inside = roots(&det, lo, hi)?
        .into_iter()
        .map(|z| {
            let m = z.norm();
            if (ANNULUS.0..=ANNULUS.1).contains(&m) {
                Err(Error::DetVanishesOnCstar(m))
            } else {
                Ok(m < 1.0)
            }
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count() as i64;
    Ok(-(inside + lo as i64))
}

/// Roots of `u^-lo det(u)`, a polynomial of degree `hi - lo`.
fn roots(det: &LaurentPoly, lo: i32, hi: i32) -> Result<Vec<C64>> {
    let deg = (hi - lo) as usize;
    let lead = det.coeff(hi);
    let mut companion = ConstMatrix::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -det.coeff(lo + i as i32) / lead;
    }
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Domain("root finding did not converge".into()))?;
    let (_, tri) = schur.unpack();
    Ok((0..deg).map(|i| tri[(i, i)]).collect())
}

/// Reads a constant upper-triangular unipotent-up-to-scalar generator back
/// to its descriptor; `None` when it is not a single Jordan block.
pub fn recognize_deg0(f: &FactorOfAutomorphy) -> Result<Option<BundleDescriptor>> {
    let a = f
        .generator()
        .as_constant()
        .ok_or_else(|| Error::Shape("recognition needs a constant generator".into()))?;
    let n = a.nrows();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let upper = (0..n).all(|i| (0..i).all(|j| a[(i, j)].norm() <= 1e-12 * scale));
    let lambda = a[(0, 0)];
    let flat = (0..n).all(|i| (a[(i, i)] - lambda).norm() <= DIAGONAL_TOL * lambda.norm().max(1.0));
    if !upper || !flat || lambda == ZERO {
        return Ok(None);
    }
    match jordan_type_unipotent(&a, lambda) {
        Ok(parts) if parts == [n] => Ok(Some(BundleDescriptor::new(f.torus(), n, 0, lambda)?)),
        Ok(_) | Err(Error::NotNilpotent(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn torus() -> Torus {
        Torus::new(c(0.3, 1.1)).unwrap()
    }

    #[test]
    fn reduction_lands_in_annulus() {
        let t = torus();
        let qn = t.q().norm();
        for a in [
            c(1.0, 0.0),
            c(0.0, -3.0),
            c(1e-4, 2e-4),
            c(250.0, 1.0),
            t.q(),
            t.q() * t.q(),
        ] {
            let b = reduce(&t, a).unwrap();
            assert!(qn < b.norm() && b.norm() <= 1.0 + REDUCE_COLLAR, "{a} -> {b}");
        }
        assert!((reduce(&t, t.q()).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(reduce(&t, ZERO).is_err());
    }

    #[test]
    fn deg0_examples() {
        let t = torus();
        assert_eq!(
            normal_form_deg0(&t, 1, c(1.0, 0.0)).unwrap().generator(),
            &LaurentMatrix::identity(1)
        );
        let f = normal_form_deg0(&t, 3, c(0.5, 0.5)).unwrap();
        let m = f.generator().as_constant().unwrap();
        assert_eq!(m, jordan_block(3, c(0.5, 0.5)));
        assert!(normal_form_deg0(&t, 2, ZERO).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let t = torus();
        let a = c(0.7, -0.2);
        let f = normal_form(&t, 1, 0, a).unwrap();
        assert_eq!(f.generator().get(0, 0).as_constant(), Some(a));

        let phi = normal_form(&t, 1, 1, c(1.0, 0.0)).unwrap();
        let (k, coeff) = phi.generator().get(0, 0).as_monomial().unwrap();
        assert_eq!(k, -1);
        assert!((coeff - t.s().inv()).norm() < 1e-15);
        assert_eq!(degree(&phi).unwrap(), 1);

        let g = normal_form(&t, 2, 1, c(1.0, 0.0)).unwrap().into_generator();
        assert!(g.get(0, 0).is_zero() && g.get(1, 1).is_zero());
        assert_eq!(g.get(0, 1), &LaurentPoly::one());
        assert_eq!(g.get(1, 0).as_monomial().unwrap().0, -1);
    }

    #[test]
    fn degrees_and_constructions_agree() {
        let t = torus();
        let a = c(1.3, 0.4);
        for r in 1..=6 {
            for d in -6..=6 {
                let f = normal_form(&t, r, d, a).unwrap();
                let g = atiyah_construct(&t, r, d, a).unwrap();
                assert!(
                    f.generator().relative_residual(g.generator()).unwrap() < 1e-12,
                    "r={r} d={d}"
                );
                assert_eq!(degree(&f).unwrap(), d);
                assert_eq!(rank(&f), r);
            }
        }
    }

    #[test]
    fn split_convention() {
        assert_eq!(split(4, 0), (4, 1, 0));
        assert_eq!(split(4, 6), (2, 2, 3));
        assert_eq!(split(3, -2), (1, 3, -2));
    }

    #[test]
    fn winding_of_non_monomial_det() {
        let t = torus();
        // det = (u - 1e-8)(u - 1e8) u^-1: one root inside, one outside
        let p = LaurentPoly::from_terms([(1, c(1.0, 0.0)), (0, c(-1e8 - 1e-8, 0.0)), (-1, c(1.0, 0.0))]);
        let f = FactorOfAutomorphy::new(t, LaurentMatrix::diagonal(vec![p]).unwrap()).unwrap();
        assert_eq!(degree(&f).unwrap(), 0);
        let p = LaurentPoly::from_terms([(1, c(1.0, 0.0)), (0, c(-3.0, 0.0))]);
        let f = FactorOfAutomorphy::new(t, LaurentMatrix::diagonal(vec![p]).unwrap()).unwrap();
        assert!(matches!(degree(&f), Err(Error::DetVanishesOnCstar(m)) if (m - 3.0).abs() < 1e-9));
    }

    #[test]
    fn recognition() {
        let t = torus();
        let a = c(2.0, 1.0);
        let d = recognize_deg0(&normal_form_deg0(&t, 3, a).unwrap()).unwrap().unwrap();
        assert_eq!((d.rank, d.degree), (3, 0));
        assert!((d.param - reduce(&t, a).unwrap()).norm() < 1e-12);

        let binomial = ConstMatrix::from_fn(3, 3, |i, j| {
            c([[1.0, 1.0, 1.0], [0.0, 1.0, 2.0], [0.0, 0.0, 1.0]][i][j], 0.0)
        });
        let d = recognize_deg0(&FactorOfAutomorphy::constant(t, &binomial).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!((d.rank, d.degree), (3, 0));
        assert!((d.param - c(1.0, 0.0)).norm() < 1e-12);

        let diag = ConstMatrix::from_diagonal_element(2, 2, a);
        assert_eq!(
            recognize_deg0(&FactorOfAutomorphy::constant(t, &diag).unwrap()).unwrap(),
            None
        );

        let nonconst = normal_form(&t, 1, 1, a).unwrap();
        assert!(recognize_deg0(&nonconst).is_err());
    }

    #[test]
    fn descriptor_json_shape() {
        let t = torus();
        let d = BundleDescriptor::new(&t, 2, -1, c(0.5, 0.25)).unwrap();
        let v = serde_json::to_value(d).unwrap();
        assert_eq!(v["rank"], 2);
        assert_eq!(v["degree"], -1);
        assert_eq!(v["param"][0], 0.5);
        let back: BundleDescriptor = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
