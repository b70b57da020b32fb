//! From the Frobenius matrix mod `p^N` to the exact zeta numerator.
//!
//! With `chi(X) = X^(2g) + a_1 X^(2g-1) + ... + a_(2g)` the characteristic
//! polynomial of Frobenius, `a_(2g-i) = p^(g-i) a_i` and
//! `|a_i| <= binom(2g, i) p^(i/2)`, so `a_1..a_g` pin down everything once
//! `p^N` exceeds twice the bound. The Jacobian order is `chi(1)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{charpoly_berkowitz, RingCtx, RingElem, RingMatrix};

/// Monic, ascending: `coeffs[k]` multiplies `T^k`, `coeffs[2g] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyModP {
    pub p: u64,
    pub precision: u32,
    pub coeffs: Vec<RingElem>,
}

impl CharPolyModP {
    pub fn genus(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// `a_i`, the coefficient of `T^(2g-i)`.
    pub fn a(&self, i: usize) -> &RingElem {
        &self.coeffs[self.coeffs.len() - 1 - i]
    }

    /// `a_(2g-i) = p^(g-i) a_i (mod p^N)` for `0 <= i <= g`.
    pub fn functional_equation_holds(&self, ctx: &RingCtx) -> bool {
        let g = self.genus();
        (0..=g).all(|i| {
            let scaled = ctx.mul(&ctx.pow(&ctx.from_u64(self.p), (g - i) as u64), self.a(i));
            &scaled == self.a(2 * g - i)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaNumerator {
    pub p: u64,
    pub genus: usize,
    /// `a_0 = 1, a_1, ..., a_(2g)`.
    pub coeffs: Vec<BigInt>,
    /// Exactness of `a_1..a_g`; the upper half inherits it.
    pub exact: Vec<bool>,
}

impl ZetaNumerator {
    /// From exact `a_1..a_g`.
    pub fn from_exact(p: u64, a: &[BigInt]) -> Self {
        let g = a.len();
        let mut coeffs = vec![BigInt::one()];
        coeffs.extend_from_slice(a);
        for i in (0..g).rev() {
            coeffs.push(&coeffs[i] * BigInt::from(p).pow((g - i) as u32));
        }
        ZetaNumerator {
            p,
            genus: g,
            coeffs,
            exact: vec![true; g],
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.iter().all(|&e| e)
    }

    pub fn a(&self) -> &[BigInt] {
        &self.coeffs[1..=self.genus]
    }

    /// `chi(1)`, only when every coefficient is exact.
    pub fn jacobian_order(&self) -> Option<BigInt> {
        self.is_exact().then(|| self.coeffs.iter().sum())
    }

    /// `#C(F_(p^k)) = p^k + 1 - S_k` with `S_k` the power sums of the roots.
    pub fn point_counts(&self, upto: usize) -> Vec<BigInt> {
        power_sums(&self.coeffs, upto)
            .into_iter()
            .enumerate()
            .map(|(k, s)| BigInt::from(self.p).pow(k as u32 + 1) + 1 - s)
            .collect()
    }
}

/// Power sums `S_1..S_upto` of the roots of `X^n + c_1 X^(n-1) + ...`.
fn power_sums(c: &[BigInt], upto: usize) -> Vec<BigInt> {
    let n = c.len() - 1;
    let mut s: Vec<BigInt> = Vec::with_capacity(upto);
    for k in 1..=upto {
        // S_k = -k c_k - sum_{i=1}^{k-1} c_i S_(k-i), with c_k = 0 past n
        let mut acc = if k <= n {
            -BigInt::from(k) * &c[k]
        } else {
            BigInt::zero()
        };
        for i in 1..k.min(n + 1) {
            acc -= &c[i] * &s[k - i - 1];
        }
        s.push(acc);
    }
    s
}

pub fn charpoly_frobenius(ctx: &RingCtx, m: &RingMatrix) -> Result<CharPolyModP> {
    let poly = charpoly_berkowitz(ctx, m)?;
    Ok(CharPolyModP {
        p: ctx.p(),
        precision: ctx.exponent(),
        coeffs: poly.coeffs,
    })
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `2 binom(2g, i) p^(i/2) < p^N`, compared after squaring.
pub fn coefficient_is_exact(p: u64, genus: usize, i: usize, precision: u32) -> bool {
    let b = binomial(2 * genus as u64, i as u64);
    let lhs = BigUint::from(4u32) * &b * &b * BigUint::from(p).pow(i as u32);
    lhs < BigUint::from(p).pow(2 * precision)
}

/// Smallest `N` making every `a_i` exact.
pub fn precision_for_exact_zeta(p: u64, genus: usize) -> u32 {
    (1..)
        .find(|&n| (1..=genus).all(|i| coefficient_is_exact(p, genus, i, n)))
        .expect("some precision suffices")
}

pub fn recover_zeta(ctx: &RingCtx, cp: &CharPolyModP) -> Result<ZetaNumerator> {
    if cp.coeffs.len() < 3 || cp.coeffs.len().is_multiple_of(2) || !ctx.is_one(cp.coeffs.last().unwrap()) {
        return Err(Error::ShapeMismatch(
            "charpoly must be monic of even degree >= 2".into(),
        ));
    }
    let g = cp.genus();
    let lifted: Vec<BigInt> = (1..=g).map(|i| ctx.signed_lift(cp.a(i))).collect();
    let mut z = ZetaNumerator::from_exact(cp.p, &lifted);
    z.exact = (1..=g)
        .map(|i| coefficient_is_exact(cp.p, g, i, cp.precision))
        .collect();
    for i in 0..g {
        // the upper half is only known mod p^N when a_(g-i) is not exact
        if !z.exact[g - 1 - i] {
            z.coeffs[g + 1 + i] = ctx.signed_lift(cp.a(g + 1 + i));
        }
    }
    Ok(z)
}
