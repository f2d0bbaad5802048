//! Laurent polynomials in one variable `u` with complex coefficients.
//!
//! Exponents are exact integers; coefficients are `f64` complex. Whenever
//! several contributions are summed into one coefficient, the result is
//! dropped if its modulus is at most [`PRUNE_REL`] times the total modulus
//! of the contributions. Cancellation residue therefore never enlarges the
//! support, while coefficients that are small but exact (like `q^9` next to
//! `10^9`) survive.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{C64, ONE, ZERO};

/// Relative pruning threshold.
pub const PRUNE_REL: f64 = 1e-12;

/// Sum of contributions to one coefficient, with their total modulus.
#[derive(Clone, Copy, Default)]
struct Acc {
    sum: C64,
    mass: f64,
}

impl Acc {
    fn push(&mut self, c: C64) {
        self.sum += c;
        self.mass += c.norm();
    }
}

fn settle(acc: BTreeMap<i32, Acc>) -> LaurentPoly {
    LaurentPoly {
        terms: acc
            .into_iter()
            .filter(|(_, a)| a.sum.norm() > PRUNE_REL * a.mass)
            .map(|(k, a)| (k, a.sum))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, C64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: C64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * u^k`
    pub fn monomial(c: C64, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != ZERO {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    /// `u`
    pub fn var() -> Self {
        Self::monomial(ONE, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, C64)>>(terms: I) -> Self {
        let mut acc: BTreeMap<i32, Acc> = BTreeMap::new();
        for (k, c) in terms {
            acc.entry(k).or_default().push(c);
        }
        settle(acc)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, C64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, k: i32) -> C64 {
        self.terms.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Some((k, c))` when the polynomial is exactly `c * u^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(i32, C64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&k, &c)| (k, c))
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `Some(c)` when the support is contained in `{0}`.
    pub fn as_constant(&self) -> Option<C64> {
        match self.terms.len() {
            0 => Some(ZERO),
            1 => self.terms.get(&0).copied(),
            _ => None,
        }
    }

    pub fn eval(&self, u: C64) -> C64 {
        self.terms.iter().map(|(&k, &c)| c * u.powi(k)).sum()
    }

    /// Drops every coefficient with modulus at most `PRUNE_REL * scale`.
    pub fn prune_relative(&mut self, scale: f64) {
        let threshold = PRUNE_REL * scale;
        self.terms.retain(|_, c| c.norm() > threshold);
    }

    pub(crate) fn prune_absolute(&mut self, threshold: f64) {
        self.terms.retain(|_, c| c.norm() > threshold);
    }

    pub fn scale(&self, c: C64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, &v)| (k, v * c))
                .filter(|(_, v)| *v != ZERO)
                .collect(),
        }
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, &v)| (e + k, v)).collect(),
        }
    }

    /// `p(c * u)`: the coefficient at exponent `k` is multiplied by `c^k`.
    pub fn substitute_scaled(&self, c: C64) -> Result<Self> {
        if c == ZERO {
            return Err(Error::Domain("substitution u -> c*u needs c != 0".into()));
        }
        Ok(LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, &v)| (k, v * c.powi(k)))
                .filter(|(_, v)| *v != ZERO)
                .collect(),
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `sum sign_i * a_i * b_i`, with cancellation judged over all products at once.
    pub fn sum_of_products<'a, I>(items: I) -> LaurentPoly
    where
        I: IntoIterator<Item = (f64, &'a LaurentPoly, &'a LaurentPoly)>,
    {
        let mut acc: BTreeMap<i32, Acc> = BTreeMap::new();
        for (sign, a, b) in items {
            for (&i, &x) in &a.terms {
                for (&j, &y) in &b.terms {
                    acc.entry(i + j).or_default().push(x * y * sign);
                }
            }
        }
        settle(acc)
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &LaurentPoly) -> f64 {
        let mut worst: f64 = 0.0;
        for (&k, &c) in &self.terms {
            worst = worst.max((c - other.coeff(k)).norm());
        }
        for (&k, &c) in &other.terms {
            if !self.terms.contains_key(&k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Quotient of a division known to be exact in the Laurent ring.
    ///
    /// Long division runs from whichever end of the divisor has the larger
    /// coefficient; any remainder is discarded.
    pub fn exact_div(&self, d: &LaurentPoly) -> Result<Self> {
        let (Some(dmin), Some(dmax)) = (d.min_exp(), d.max_exp()) else {
            return Err(Error::Domain("division by the zero polynomial".into()));
        };
        let (Some(nmin), Some(nmax)) = (self.min_exp(), self.max_exp()) else {
            return Ok(LaurentPoly::zero());
        };
        let (qlo, qhi) = (nmin - dmin, nmax - dmax);
        if qhi < qlo {
            return Ok(LaurentPoly::zero());
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        let lead = d.coeff(dmax);
        let trail = d.coeff(dmin);
        let step = |k: i32, anchor: i32, pivot: C64, rem: &mut BTreeMap<i32, C64>, quot: &mut BTreeMap<i32, C64>| {
            let r = rem.get(&(k + anchor)).copied().unwrap_or(ZERO);
            if r == ZERO {
                return;
            }
            let t = r / pivot;
            quot.insert(k, t);
            for (&e, &v) in &d.terms {
                *rem.entry(k + e).or_insert(ZERO) -= t * v;
            }
        };
        if lead.norm() >= trail.norm() {
            for k in (qlo..=qhi).rev() {
                step(k, dmax, lead, &mut rem, &mut quot);
            }
        } else {
            for k in qlo..=qhi {
                step(k, dmin, trail, &mut rem, &mut quot);
            }
        }
        let mut out = LaurentPoly { terms: quot };
        out.prune_relative(self.max_abs() / d.max_abs());
        Ok(out)
    }
}

fn combine(p: &LaurentPoly, r: &LaurentPoly, sign: f64) -> LaurentPoly {
    let mut acc: BTreeMap<i32, Acc> = BTreeMap::new();
    for (&k, &c) in &p.terms {
        acc.entry(k).or_default().push(c);
    }
    for (&k, &c) in &r.terms {
        acc.entry(k).or_default().push(c * sign);
    }
    settle(acc)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        combine(self, rhs, -1.0)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i32, Acc> = BTreeMap::new();
        for (&i, &a) in &self.terms {
            for (&j, &b) in &rhs.terms {
                acc.entry(i + j).or_default().push(a * b);
            }
        }
        settle(acc)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, &c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coef = crate::scalar::format_complex(c);
            match k {
                0 => write!(f, "({coef})")?,
                1 => write!(f, "({coef})u")?,
                _ => write!(f, "({coef})u^{k}")?,
            }
        }
        Ok(())
    }
}
