//! Test oracles that share no code path with the block-product pipeline:
//! single-step reductions at high precision with explicit tracking of the
//! powers of `p` divided out, and random curve generation.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;

use frobzeta::curve::{validate, CurveData};
use frobzeta::reduction::{apply_step, horizontal_family, vertical_family, DifferentialVec};
use frobzeta::ring::{is_prime, RingCtx, RingElem, RingMatrix};

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| n > 2 && is_prime(n)).collect()
}

/// Random monic `Q` of degree `2g+1` that passes validation at `(p, n)`.
pub fn random_curve<R: Rng>(rng: &mut R, p: u64, n: u32, g: usize) -> CurveData {
    loop {
        let mut q: Vec<BigInt> = (0..=2 * g).map(|_| BigInt::from(rng.gen_range(-50i64..50))).collect();
        q.push(BigInt::one());
        if let Ok(c) = validate(p, n, &q) {
            return c;
        }
    }
}

/// `v / p^k` with `v` over a high-precision ring.
#[derive(Clone, Debug)]
pub struct Scaled {
    pub v: DifferentialVec,
    pub k: u32,
}

impl Scaled {
    /// Divides by the integer `den`: its unit part exactly, its `p`-part into the scale.
    fn divide(ctx: &RingCtx, v: DifferentialVec, den: i128, k: u32) -> Scaled {
        assert_ne!(den, 0);
        let (mut unit, mut a) = (den, 0);
        while unit % ctx.p() as i128 == 0 {
            unit /= ctx.p() as i128;
            a += 1;
        }
        let inv = ctx.inv_unit(&ctx.from_i128(unit)).expect("unit part");
        let coeffs = v.coeffs.iter().map(|c| ctx.mul(c, &inv)).collect();
        Scaled {
            v: DifferentialVec { coeffs, ..v },
            k: k + a,
        }
    }

    /// Adds an integral coefficient to coordinate `idx`.
    fn add_integral(&mut self, ctx: &RingCtx, idx: usize, x: &RingElem) {
        let scale = ctx.pow(&ctx.from_u64(ctx.p()), self.k as u64);
        self.v.coeffs[idx] = ctx.add(&self.v.coeffs[idx], &ctx.mul(x, &scale));
    }

    /// `v / p^k mod p^n`, or `None` if too few digits survive or `p^k` does not divide `v`.
    pub fn unscale(&self, ctx: &RingCtx, n: u32) -> Option<Vec<BigUint>> {
        if self.k + n > ctx.exponent() {
            return None;
        }
        let pk = BigUint::from(ctx.p()).pow(self.k);
        let pn = BigUint::from(ctx.p()).pow(n);
        self.v
            .coeffs
            .iter()
            .map(|c| {
                let c = c.value();
                (c % &pk).is_zero().then(|| (c / &pk) % &pn)
            })
            .collect()
    }
}

/// One horizontal step with the denominator's `p`-part moved into the scale.
pub fn horizontal_step(ctx: &RingCtx, fam: &frobzeta::reduction::MatrixFamily, x: &Scaled) -> Scaled {
    let s = x.v.s;
    let g = (fam.dim() - 1) as i128 / 2;
    let moved = apply_step(ctx, fam, s, &x.v, false).expect("horizontal step");
    Scaled::divide(ctx, moved, (2 * g + 1) * (2 * x.v.t - 1) - 2 * s, x.k)
}

pub fn vertical_step(ctx: &RingCtx, fam: &frobzeta::reduction::MatrixFamily, x: &Scaled) -> Scaled {
    let t = x.v.t;
    let moved = apply_step(ctx, fam, t, &x.v, false).expect("vertical step");
    Scaled::divide(ctx, moved, 2 * t - 1, x.k)
}

/// Reduces `F(x) y^(-2t) dx/y` (coefficients of `x^0, x^1, ...`) to `W_{-1,t}`
/// one step at a time.
pub fn reduce_horizontally(ctx: &RingCtx, curve: &CurveData, f: &[RingElem], t: i128, k0: u32) -> Scaled {
    let g = curve.genus();
    let fam = horizontal_family(curve, t, ctx).unwrap();
    let deg = f.len().max(2 * g + 1) - 1;
    let s_top = (deg - 2 * g) as i128;
    let coeff = |e: i128| -> RingElem {
        if e >= 0 && (e as usize) < f.len() {
            f[e as usize].clone()
        } else {
            ctx.zero()
        }
    };
    let mut x = Scaled {
        v: DifferentialVec {
            s: s_top,
            t,
            coeffs: vec![ctx.zero(); 2 * g + 1],
        },
        k: k0,
    };
    for i in 0..=2 * g {
        x.add_integral(ctx, i, &coeff(s_top + i as i128));
    }
    while x.v.s >= 0 {
        x = horizontal_step(ctx, &fam, &x);
        if x.v.s >= 0 {
            x.add_integral(ctx, 0, &coeff(x.v.s));
        }
    }
    x
}

/// Brings `x` in `W_{-1,t}` down to `W_{-1,t_end}`.
pub fn reduce_vertically(ctx: &RingCtx, curve: &CurveData, mut x: Scaled, t_end: i128) -> Scaled {
    let fam = vertical_family(curve, ctx).unwrap();
    while x.v.t > t_end {
        x = vertical_step(ctx, &fam, &x);
    }
    x
}

/// Combines two scaled vectors in the same space.
pub fn add_scaled(ctx: &RingCtx, a: &Scaled, b: &Scaled) -> Scaled {
    let p = ctx.from_u64(ctx.p());
    let k = a.k.max(b.k);
    let up = |x: &Scaled| -> Vec<RingElem> {
        let f = ctx.pow(&p, (k - x.k) as u64);
        x.v.coeffs.iter().map(|c| ctx.mul(c, &f)).collect()
    };
    let coeffs = up(a).iter().zip(&up(b)).map(|(x, y)| ctx.add(x, y)).collect();
    Scaled {
        v: DifferentialVec { coeffs, ..a.v.clone() },
        k,
    }
}

/// `binom(-1/2, k)` from its defining product.
fn binom_minus_half(ctx: &RingCtx, k: u64) -> RingElem {
    let half = ctx.inv_unit(&ctx.from_u64(2)).unwrap();
    (0..k).fold(ctx.one(), |acc, i| {
        let num = ctx.sub(&ctx.neg(&half), &ctx.from_u64(i));
        ctx.mul(&acc, &ctx.mul(&num, &ctx.inv_unit(&ctx.from_u64(i + 1)).unwrap()))
    })
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Frobenius-series coefficients `B[j][r]` recomputed from scratch over `ctx`.
pub fn series_coefficients(ctx: &RingCtx, curve: &CurveData) -> Vec<Vec<RingElem>> {
    let n = curve.precision() as u64;
    let q: Vec<RingElem> = curve.q_coeffs().iter().map(|c| ctx.from_bigint(c)).collect();
    let mut pow = vec![ctx.one()];
    let mut out = Vec::new();
    for j in 0..n {
        let mut sum = ctx.zero();
        for k in j..n {
            let term = ctx.mul(&binom_minus_half(ctx, k), &ctx.from_biguint(&binomial(k, j)));
            sum = if (k + j) % 2 == 0 {
                ctx.add(&sum, &term)
            } else {
                ctx.sub(&sum, &term)
            };
        }
        let factor = ctx.mul_u64(&sum, ctx.p());
        out.push(pow.iter().map(|c| ctx.mul(c, &factor)).collect());
        let mut next = vec![ctx.zero(); pow.len() + q.len() - 1];
        for (a, x) in pow.iter().enumerate() {
            for (b, y) in q.iter().enumerate() {
                next[a + b] = ctx.add(&next[a + b], &ctx.mul(x, y));
            }
        }
        pow = next;
    }
    out
}

/// The Frobenius matrix mod `p^N` by single-step reduction of every term of
/// the series over `Z/p^(N + extra)`. Cost is linear in `p`.
pub fn naive_frobenius(curve: &CurveData, extra: u32) -> RingMatrix {
    let (p, g, n) = (curve.p(), curve.genus(), curve.precision());
    let ctx = RingCtx::new(p, n + extra).unwrap();
    let out_ctx = curve.ctx_n();
    let b = series_coefficients(&ctx, curve);
    let mut m = RingMatrix::zeros(out_ctx, 2 * g, 2 * g);
    for i in 0..2 * g {
        let mut acc: Option<Scaled> = None;
        for j in (0..n as usize).rev() {
            let t = ((2 * j as i128 + 1) * p as i128 - 1) / 2;
            if let Some(a) = acc.take() {
                acc = Some(reduce_vertically(&ctx, curve, a, t));
            }
            // T_{i,j} = sum_r B[j][r] x^(p(i+r+1)-1)
            let top = p as usize * (i + b[j].len()) - 1;
            let mut f = vec![ctx.zero(); top + 1];
            for (r, c) in b[j].iter().enumerate() {
                f[p as usize * (i + r + 1) - 1] = c.clone();
            }
            let w = reduce_horizontally(&ctx, curve, &f, t, 0);
            acc = Some(match acc {
                None => w,
                Some(a) => add_scaled(&ctx, &a, &w),
            });
        }
        let w = reduce_vertically(&ctx, curve, acc.unwrap(), 0);
        let col = w.unscale(&ctx, n).expect("oracle precision exhausted");
        for (r, x) in col.iter().enumerate() {
            m.set(r, i, out_ctx.from_biguint(x));
        }
    }
    m
}

/// Exact differential `d(x^a y^(1-2t))` as `F(x) y^(-2t) dx/y`, scaled by 2:
/// `F = 2a x^(a-1) Q - (2t-1) x^a Q'`.
pub fn exact_differential(ctx: &RingCtx, curve: &CurveData, a: usize, t: i128) -> Vec<RingElem> {
    let q: Vec<RingElem> = curve.q_coeffs().iter().map(|c| ctx.from_bigint(c)).collect();
    let mut f = vec![ctx.zero(); q.len() + a];
    for (k, c) in q.iter().enumerate() {
        if a > 0 {
            f[k + a - 1] = ctx.add(&f[k + a - 1], &ctx.mul_u64(c, 2 * a as u64));
        }
        if k > 0 {
            let d = ctx.mul(&ctx.mul_u64(c, k as u64), &ctx.from_i128(2 * t - 1));
            f[k - 1 + a] = ctx.sub(&f[k - 1 + a], &d);
        }
    }
    f
}
