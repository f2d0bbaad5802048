use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::{ensure_finite, C64};

/// The elliptic curve `C*/<q>` for a modulus `tau` in the upper half plane.
///
/// Stores the nome `q = exp(2 pi i tau)` and the fixed square root
/// `s = exp(pi i tau)`, so half-integer powers of `q` are written `s^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    tau: C64,
    q: C64,
    s: C64,
}

impl Torus {
    pub fn new(tau: C64) -> Result<Self> {
        ensure_finite(tau, "torus modulus")?;
        if tau.im.is_nan() || tau.im <= 0.0 {
            return Err(Error::InvalidModulus { re: tau.re, im: tau.im });
        }
        let s = (C64::i() * PI * tau).exp();
        let q = (C64::i() * 2.0 * PI * tau).exp();
        Ok(Torus { tau, q, s })
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    /// `q^(1/2)`.
    pub fn s(&self) -> C64 {
        self.s
    }

    pub fn q_pow(&self, k: i32) -> C64 {
        self.q.powi(k)
    }

    /// `q^(m/2)` as `s^m`.
    pub fn half_q_pow(&self, m: i32) -> C64 {
        self.s.powi(m)
    }

    /// The torus with modulus `r * tau`.
    pub fn scaled(&self, r: u32) -> Result<Torus> {
        Torus::new(self.tau * r as f64)
    }

    /// Two tori are treated as equal when their moduli agree to 1e-12.
    pub fn same_as(&self, other: &Torus) -> bool {
        (self.tau - other.tau).norm() <= 1e-12 * (1.0 + self.tau.norm())
    }
}
