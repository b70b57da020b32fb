//! Input validation and the per-curve precomputations: the coefficient
//! table of the truncated Frobenius series and the Bezout cofactors of
//! `Q` and `Q'`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{Error, Result};
use crate::ring::{RingCtx, RingElem, RingMatrix, RingPoly};

/// A validated curve `y^2 = Q(x)` together with both working precisions.
#[derive(Clone, Debug)]
pub struct CurveData {
    p: u64,
    precision: u32,
    genus: usize,
    q: Vec<BigInt>,
    ctx_n: RingCtx,
    ctx_n1: RingCtx,
}

impl CurveData {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Target precision exponent `N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Integer coefficients of `Q` as supplied, ascending.
    pub fn q_coeffs(&self) -> &[BigInt] {
        &self.q
    }

    /// `Z/p^N`.
    pub fn ctx_n(&self) -> &RingCtx {
        &self.ctx_n
    }

    /// `Z/p^(N+1)`.
    pub fn ctx_n1(&self) -> &RingCtx {
        &self.ctx_n1
    }

    pub fn q_poly(&self, ctx: &RingCtx) -> RingPoly {
        RingPoly::new(self.q.iter().map(|c| ctx.from_bigint(c)).collect())
    }

    /// `P = Q - x^(2g+1)`, of degree at most `2g`.
    pub fn p_poly(&self, ctx: &RingCtx) -> RingPoly {
        RingPoly::new(
            self.q[..2 * self.genus + 1]
                .iter()
                .map(|c| ctx.from_bigint(c))
                .collect(),
        )
    }
}

/// The gate every computation passes through.
pub fn validate(p: u64, precision: u32, q: &[BigInt]) -> Result<CurveData> {
    let ctx_n = RingCtx::new(p, precision.max(1))?;
    if precision == 0 {
        return Err(Error::BadExponent(0));
    }
    let ctx_n1 = ctx_n.with_exponent(precision + 1)?;
    if q.len() < 2 || !q.len().is_multiple_of(2) || !q[q.len() - 1].is_one() {
        return Err(Error::EvenDegreeOrNotMonic(format!(
            "{} coefficients, leading {}",
            q.len(),
            q.last().map_or("none".into(), |c| c.to_string())
        )));
    }
    if q.len() == 2 {
        return Err(Error::GenusZero);
    }
    let genus = (q.len() - 2) / 2;
    let bound = (2 * precision as u128 - 1) * (2 * genus as u128 + 1);
    if (p as u128) <= bound {
        return Err(Error::PrecisionAssumptionViolated { p, bound });
    }
    if !squarefree_mod_p(p, q) {
        return Err(Error::SingularCurve);
    }
    Ok(CurveData {
        p,
        precision,
        genus,
        q: q.to_vec(),
        ctx_n,
        ctx_n1,
    })
}

fn squarefree_mod_p(p: u64, q: &[BigInt]) -> bool {
    let ctx = RingCtx::new(p, 1).expect("validated prime");
    let f: Vec<u64> = q.iter().map(|c| ctx.to_u64(&ctx.from_bigint(c)).unwrap()).collect();
    let df: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    fp_gcd_degree(f, df, p) == Some(0)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of `gcd(a, b)` over `F_p`; `None` if both are zero.
fn fp_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Option<usize> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let c = mulmod(*a.last().unwrap(), inv, p);
            let shift = a.len() - b.len();
            for (k, &bk) in b.iter().enumerate() {
                a[shift + k] = (a[shift + k] + p - mulmod(c, bk, p)) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

/// Coefficients `C[j][r]` of `Q^j` and `B[j][r]` of the truncated Frobenius
/// series, all in `Z/p^(N+1)`.
#[derive(Clone, Debug)]
pub struct BCoeffTable {
    pub precision: u32,
    pub genus: usize,
    pub c: Vec<Vec<RingElem>>,
    pub b: Vec<Vec<RingElem>>,
}

impl BCoeffTable {
    /// `B[j][r]`, zero outside the stored triangle (in particular for `r < 0`).
    pub fn get(&self, j: usize, r: i64) -> Option<&RingElem> {
        if r < 0 {
            return None;
        }
        self.b.get(j).and_then(|row| row.get(r as usize))
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn compute_b_table(curve: &CurveData) -> BCoeffTable {
    let ctx = curve.ctx_n1();
    let n = curve.precision() as usize;
    let q = curve.q_poly(ctx);
    let mut c = Vec::with_capacity(n);
    let mut pow = RingPoly::constant(ctx.one());
    for _ in 0..n {
        c.push(pow.coeffs.clone());
        pow = pow.mul(ctx, &q);
    }
    let inv4 = ctx.inv_unit(&ctx.from_u64(4)).expect("p is odd");
    // sum_{k=j}^{N-1} (-1)^(k+j) binom(-1/2, k) binom(k, j)
    //   = (-1)^j sum_k binom(2k, k) binom(k, j) / 4^k
    let factors: Vec<RingElem> = (0..n as u64)
        .map(|j| {
            let mut sum = ctx.zero();
            for k in j..n as u64 {
                let num = ctx.from_biguint(&(binomial(2 * k, k) * binomial(k, j)));
                sum = ctx.add(&sum, &ctx.mul(&num, &ctx.pow(&inv4, k)));
            }
            if j % 2 == 1 {
                sum = ctx.neg(&sum);
            }
            ctx.mul_u64(&sum, curve.p())
        })
        .collect();
    let b = c
        .iter()
        .zip(&factors)
        .map(|(row, f)| row.iter().map(|x| ctx.mul(x, f)).collect())
        .collect();
    BCoeffTable {
        precision: curve.precision(),
        genus: curve.genus(),
        c,
        b,
    }
}

/// `x^i = R_i Q + S_i Q'` with `deg R_i <= 2g-1`, `deg S_i <= 2g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutPair {
    pub index: usize,
    pub r: RingPoly,
    pub s: RingPoly,
}

/// Inverse of the Sylvester-type matrix whose columns are the shifts
/// `x^a Q` (a < 2g) followed by `x^b Q'` (b <= 2g).
fn sylvester_inverse(curve: &CurveData, ctx: &RingCtx) -> Result<RingMatrix> {
    let g = curve.genus();
    let dim = 4 * g + 1;
    let q = curve.q_poly(ctx);
    let dq = q.derivative(ctx);
    let mut a = RingMatrix::zeros(ctx, dim, dim);
    for shift in 0..2 * g {
        for (k, c) in q.coeffs.iter().enumerate() {
            a.set(k + shift, shift, c.clone());
        }
    }
    for shift in 0..=2 * g {
        for (k, c) in dq.coeffs.iter().enumerate() {
            a.set(k + shift, 2 * g + shift, c.clone());
        }
    }
    a.inverse(ctx).map_err(|_| Error::InternalNonUnitPivot)
}

fn bezout_from_inverse(g: usize, inv: &RingMatrix, i: usize) -> BezoutPair {
    let col = inv.column(i);
    BezoutPair {
        index: i,
        r: RingPoly::new(col[..2 * g].to_vec()),
        s: RingPoly::new(col[2 * g..].to_vec()),
    }
}

pub fn compute_bezout(curve: &CurveData, i: usize) -> Result<BezoutPair> {
    compute_bezout_in(curve, curve.ctx_n1(), i)
}

/// Same as [`compute_bezout`] but over an arbitrary precision of the same prime.
pub fn compute_bezout_in(curve: &CurveData, ctx: &RingCtx, i: usize) -> Result<BezoutPair> {
    let g = curve.genus();
    if i >= 2 * g {
        return Err(Error::ShapeMismatch(format!(
            "Bezout index {i} out of range 0..{}",
            2 * g
        )));
    }
    Ok(bezout_from_inverse(g, &sylvester_inverse(curve, ctx)?, i))
}

/// All `2g` pairs with a single linear solve.
pub fn compute_all_bezout(curve: &CurveData, ctx: &RingCtx) -> Result<Vec<BezoutPair>> {
    let g = curve.genus();
    let inv = sylvester_inverse(curve, ctx)?;
    Ok((0..2 * g).map(|i| bezout_from_inverse(g, &inv, i)).collect())
}
