//! Classical theta functions with characteristic and their scalar factors.
//!
//! For `xi = a tau + b`,
//! `theta_xi(z) = sum_n exp(pi i (n+a)^2 tau + 2 pi i (n+a)(z+b))`
//! satisfies `theta_xi(z + gamma) = e_xi(gamma, z) theta_xi(z)` for
//! `gamma = p tau + n`, with
//! `e_xi(gamma, z) = exp(2 pi i a gamma - pi i p^2 tau - 2 pi i p (z + xi))`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::C64;
use crate::torus::Torus;

/// Default truncation `|n| <= 40`.
pub const DEFAULT_TERMS: u32 = 40;

/// Pass threshold for [`verify_theta_function`].
pub const THETA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaCharacteristic {
    a: f64,
    b: f64,
}

impl ThetaCharacteristic {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("theta characteristic"));
        }
        Ok(ThetaCharacteristic { a, b })
    }

    pub fn zero() -> Self {
        ThetaCharacteristic { a: 0.0, b: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `xi = a tau + b`.
    pub fn xi(&self, t: &Torus) -> C64 {
        t.tau() * self.a + self.b
    }
}

fn cis(z: C64) -> C64 {
    (C64::i() * z).exp()
}

/// Symmetric partial sum over `n` in `[-terms, terms]`.
pub fn theta_eval(t: &Torus, xi: &ThetaCharacteristic, z: C64, terms: u32) -> C64 {
    let tau = t.tau();
    let terms = terms as i64;
    (-terms..=terms)
        .map(|n| {
            let m = n as f64 + xi.a;
            cis(PI * m * m * tau + 2.0 * PI * m * (z + xi.b))
        })
        .sum()
}

/// `e_xi(p tau + n, z)`.
pub fn e_factor(t: &Torus, xi: &ThetaCharacteristic, p: i32, n: i32, z: C64) -> C64 {
    let tau = t.tau();
    let p = p as f64;
    let gamma = tau * p + n as f64;
    cis(2.0 * PI * xi.a * gamma - PI * p * p * tau - 2.0 * PI * p * (z + xi.xi(t)))
}

/// `phi0(u) = s^-1 u^-1` at `u = exp(2 pi i z)`.
pub fn phi0_at(t: &Torus, z: C64) -> C64 {
    (t.s() * cis(2.0 * PI * z)).inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub max_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Checks `s(gamma + z) = f(p, n, z) s(z)` at random `z = alpha + beta tau`,
/// `alpha, beta` in `[0.05, 0.95]`, and random `|p|, |n| <= 2`.
///
/// The residual at each sample is scaled by `max(1, |s(gamma + z)|, |f s(z)|)`
/// because the factor grows like `exp(pi p^2 Im tau)`.
pub fn verify_theta_function<F, S>(t: &Torus, f: F, s: S, samples: usize, seed: u64) -> ThetaReport
where
    F: Fn(i32, i32, C64) -> C64,
    S: Fn(C64) -> C64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let alpha = rng.random_range(0.05..=0.95);
        let beta = rng.random_range(0.05..=0.95);
        let p = rng.random_range(-2..=2);
        let n = rng.random_range(-2..=2);
        let z = t.tau() * beta + alpha;
        let gamma = t.tau() * p as f64 + n as f64;
        let lhs = s(z + gamma);
        let rhs = f(p, n, z) * s(z);
        let scale = 1f64.max(lhs.norm()).max(rhs.norm());
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    ThetaReport {
        max_residual: worst,
        samples,
        pass: worst <= THETA_TOL,
    }
}

/// [`verify_theta_function`] for `theta_xi` against `e_xi`.
pub fn verify_characteristic(
    t: &Torus,
    xi: &ThetaCharacteristic,
    terms: u32,
    samples: usize,
    seed: u64,
) -> ThetaReport {
    verify_theta_function(
        t,
        |p, n, z| e_factor(t, xi, p, n, z),
        |z| theta_eval(t, xi, z, terms),
        samples,
        seed,
    )
}
