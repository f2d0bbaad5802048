//! Pullback and pushforward along the `r`-fold cover `C*/<q^r> -> C*/<q>`.
//!
//! The cover has modulus `r tau`. Pulling back takes the `r`-th iterate of
//! the cocycle; pushing forward builds the block companion
//! `[[0, I], [Ã(u), 0]]` of size `r n`.

use crate::cocycle::{iterate, FactorOfAutomorphy};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::LaurentMatrix;
use crate::torus::Torus;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsogenyContext {
    base: Torus,
    cover: Torus,
    r: u32,
}

impl IsogenyContext {
    pub fn new(base: Torus, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("covering degree must be positive".into()));
        }
        Ok(IsogenyContext {
            base,
            cover: base.scaled(r)?,
            r,
        })
    }

    pub fn base(&self) -> &Torus {
        &self.base
    }

    pub fn cover(&self) -> &Torus {
        &self.cover
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    /// The context one level up: from this cover to its own `r2`-fold cover.
    pub fn then(&self, r2: u32) -> Result<IsogenyContext> {
        IsogenyContext::new(self.cover, r2)
    }
}

fn expect_torus(f: &FactorOfAutomorphy, t: &Torus) -> Result<()> {
    if f.torus().same_as(t) {
        Ok(())
    } else {
        Err(Error::TorusMismatch)
    }
}

/// `Ã(u) = A(q^(r-1) u) ... A(q u) A(u)` with the base nome, on the cover.
pub fn pullback(ctx: &IsogenyContext, f: &FactorOfAutomorphy) -> Result<FactorOfAutomorphy> {
    expect_torus(f, &ctx.base)?;
    FactorOfAutomorphy::new(ctx.cover, iterate(f, ctx.r as i64)?)
}

/// `[[0, I_{(r-1)n}], [a, 0]]`; for `r = 1` this is `a` itself.
pub fn companion_block(a: &LaurentMatrix, r: usize) -> LaurentMatrix {
    let n = a.size();
    let mut out = LaurentMatrix::zeros(r * n);
    for i in 0..(r - 1) * n {
        out.set(i, n + i, LaurentPoly::one());
    }
    out.set_block((r - 1) * n, 0, a);
    out
}

pub fn pushforward(ctx: &IsogenyContext, f: &FactorOfAutomorphy) -> Result<FactorOfAutomorphy> {
    expect_torus(f, &ctx.cover)?;
    FactorOfAutomorphy::new(ctx.base, companion_block(f.generator(), ctx.r as usize))
}

/// The diagonal blocks of `pullback(pushforward(f))`, top-left first:
/// `A(u), A(q u), ..., A(q^(r-1) u)` with the base nome.
pub fn roundtrip_diag(ctx: &IsogenyContext, f: &FactorOfAutomorphy) -> Result<Vec<FactorOfAutomorphy>> {
    expect_torus(f, &ctx.cover)?;
    (0..ctx.r as i32).map(|i| f.substituted(ctx.base.q_pow(i))).collect()
}

/// Product `M_1 M_2 ... M_r` of the companion blocks `M_i = [[0, I], [A_i, 0]]`.
///
/// The result is `diag(A_r, ..., A_1)`.
pub fn block_product_identity(blocks: &[LaurentMatrix]) -> Result<LaurentMatrix> {
    let first = blocks.first().ok_or_else(|| Error::Shape("no blocks".into()))?;
    let (n, r) = (first.size(), blocks.len());
    if let Some(bad) = blocks.iter().find(|b| b.size() != n) {
        return Err(Error::SizeMismatch {
            expected: n,
            found: bad.size(),
        });
    }
    let mut acc = companion_block(first, r);
    for b in &blocks[1..] {
        acc = acc.mul(&companion_block(b, r))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, C64};

    fn base() -> Torus {
        Torus::new(c(0.3, 1.1)).unwrap()
    }

    fn line(t: Torus, p: LaurentPoly) -> FactorOfAutomorphy {
        FactorOfAutomorphy::new(t, LaurentMatrix::diagonal(vec![p]).unwrap()).unwrap()
    }

    #[test]
    fn context_nomes() {
        let ctx = IsogenyContext::new(base(), 3).unwrap();
        assert!((ctx.cover().q() - base().q().powi(3)).norm() < 1e-15);
        assert!(IsogenyContext::new(base(), 0).is_err());
    }

    #[test]
    fn pullback_examples() {
        let t = base();
        let f = line(t, LaurentPoly::constant(c(2.0, 0.5)));
        let ctx1 = IsogenyContext::new(t, 1).unwrap();
        assert_eq!(pullback(&ctx1, &f).unwrap().generator(), f.generator());
        let ctx3 = IsogenyContext::new(t, 3).unwrap();
        let g = pullback(&ctx3, &f).unwrap();
        assert!((g.generator().get(0, 0).coeff(0) - c(2.0, 0.5).powi(3)).norm() < 1e-13);
        assert!(g.torus().same_as(ctx3.cover()));

        let ctx2 = IsogenyContext::new(t, 2).unwrap();
        let g = pullback(&ctx2, &line(t, LaurentPoly::monomial(C64::new(1.0, 0.0), -1))).unwrap();
        let (k, coeff) = g.generator().get(0, 0).as_monomial().unwrap();
        assert_eq!(k, -2);
        assert!((coeff - t.q().inv()).norm() < 1e-13);
    }

    #[test]
    fn pullback_wrong_torus() {
        let ctx = IsogenyContext::new(base(), 2).unwrap();
        let f = line(*ctx.cover(), LaurentPoly::one());
        assert_eq!(pullback(&ctx, &f), Err(Error::TorusMismatch));
    }

    #[test]
    fn pushforward_examples() {
        let t = base();
        let ctx = IsogenyContext::new(t, 2).unwrap();
        let f = line(*ctx.cover(), LaurentPoly::constant(c(5.0, 0.0)));
        let g = pushforward(&ctx, &f).unwrap();
        let expect = LaurentMatrix::from_rows(vec![
            vec![LaurentPoly::zero(), LaurentPoly::one()],
            vec![LaurentPoly::constant(c(5.0, 0.0)), LaurentPoly::zero()],
        ])
        .unwrap();
        assert_eq!(g.generator(), &expect);

        let ctx3 = IsogenyContext::new(t, 3).unwrap();
        let phi = LaurentPoly::monomial(ctx3.cover().s().inv(), -1);
        let g = pushforward(&ctx3, &line(*ctx3.cover(), phi.clone())).unwrap();
        assert_eq!(g.generator().get(0, 1), &LaurentPoly::one());
        assert_eq!(g.generator().get(1, 2), &LaurentPoly::one());
        assert_eq!(g.generator().get(2, 0), &phi);
        assert_eq!(g.generator().entries().iter().filter(|p| !p.is_zero()).count(), 3);
    }

    #[test]
    fn roundtrip_of_a_monomial() {
        let t = base();
        let ctx = IsogenyContext::new(t, 2).unwrap();
        let f = line(*ctx.cover(), LaurentPoly::var());
        let blocks = roundtrip_diag(&ctx, &f).unwrap();
        assert_eq!(blocks[0].generator(), f.generator());
        assert!((blocks[1].generator().get(0, 0).coeff(1) - t.q()).norm() < 1e-15);

        let back = pullback(&ctx, &pushforward(&ctx, &f).unwrap()).unwrap();
        let gens: Vec<LaurentMatrix> = blocks.into_iter().map(FactorOfAutomorphy::into_generator).collect();
        let diag = LaurentMatrix::block_diag(&gens).unwrap();
        assert!(back.generator().relative_residual(&diag).unwrap() < 1e-12);
    }

    #[test]
    fn three_scalar_blocks_reverse() {
        let k = |x: f64| LaurentMatrix::diagonal(vec![LaurentPoly::constant(c(x, 0.0))]).unwrap();
        let prod = block_product_identity(&[k(2.0), k(3.0), k(7.0)]).unwrap();
        let expect = LaurentMatrix::block_diag(&[k(7.0), k(3.0), k(2.0)]).unwrap();
        assert_eq!(prod, expect);
        assert_eq!(block_product_identity(&[k(2.0)]).unwrap(), k(2.0));
        assert!(block_product_identity(&[]).is_err());
    }
}
