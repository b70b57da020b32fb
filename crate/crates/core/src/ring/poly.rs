use num_bigint::BigUint;
use num_traits::Zero;

use super::{RingCtx, RingElem};

const KARATSUBA_MIN: usize = 32;
const KRONECKER_MIN: usize = 64;
const FAST_EVAL_MIN: usize = 32;

/// Dense polynomial over a residue ring, ascending degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingPoly {
    pub coeffs: Vec<RingElem>,
}

impl RingPoly {
    pub fn new(coeffs: Vec<RingElem>) -> Self {
        RingPoly { coeffs }
    }

    pub fn zero() -> Self {
        RingPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: RingElem) -> Self {
        RingPoly { coeffs: vec![c] }
    }

    pub fn from_u64s(ctx: &RingCtx, cs: &[u64]) -> Self {
        RingPoly::new(cs.iter().map(|&c| ctx.from_u64(c)).collect())
    }

    /// Degree ignoring zero leading terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn trimmed(mut self) -> Self {
        let len = self.degree().map_or(0, |d| d + 1);
        self.coeffs.truncate(len);
        self
    }

    pub fn add(&self, ctx: &RingCtx, other: &RingPoly) -> RingPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RingPoly::new((0..n).map(|i| ctx.add(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn sub(&self, ctx: &RingCtx, other: &RingPoly) -> RingPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RingPoly::new((0..n).map(|i| ctx.sub(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn scale(&self, ctx: &RingCtx, c: &RingElem) -> RingPoly {
        RingPoly::new(self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &RingCtx, other: &RingPoly) -> RingPoly {
        let a: Vec<BigUint> = self.coeffs.iter().map(|c| c.value().clone()).collect();
        let b: Vec<BigUint> = other.coeffs.iter().map(|c| c.value().clone()).collect();
        RingPoly::new(int_poly_mul(&a, &b).into_iter().map(|c| ctx.reduce(c)).collect())
    }

    pub fn derivative(&self, ctx: &RingCtx) -> RingPoly {
        RingPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ctx.mul_u64(c, i as u64))
                .collect(),
        )
    }

    pub fn eval(&self, ctx: &RingCtx, x: &RingElem) -> RingElem {
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = ctx.add(&ctx.mul(&acc, x), c);
        }
        acc
    }

    /// Truncate to the first `n` coefficients (i.e. reduce mod `x^n`).
    fn truncated(&self, n: usize) -> RingPoly {
        RingPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    fn reversed(&self, len: usize) -> RingPoly {
        let mut c: Vec<RingElem> = (0..len).map(|i| self.coeff(i)).collect();
        c.reverse();
        RingPoly::new(c)
    }

    /// Inverse power series mod `x^n`; the constant term must be a unit.
    fn inverse_series(&self, ctx: &RingCtx, n: usize) -> Option<RingPoly> {
        let c0 = ctx.inv_unit(&self.coeff(0)).ok()?;
        let mut g = RingPoly::constant(c0);
        let mut prec = 1;
        let two = RingPoly::constant(ctx.from_u64(2));
        while prec < n {
            prec = (2 * prec).min(n);
            let fg = self.truncated(prec).mul(ctx, &g).truncated(prec);
            g = g.mul(ctx, &two.sub(ctx, &fg)).truncated(prec);
        }
        Some(g)
    }

    /// Remainder on division by a monic polynomial.
    pub fn rem_monic(&self, ctx: &RingCtx, divisor: &RingPoly) -> RingPoly {
        let d = divisor.degree().expect("divisor must be nonzero");
        debug_assert!(ctx.is_one(&divisor.coeff(d)));
        let n = match self.degree() {
            Some(n) if n >= d => n,
            _ => return self.clone().trimmed(),
        };
        if d == 0 {
            return RingPoly::zero();
        }
        if n - d < FAST_EVAL_MIN {
            return self.rem_monic_schoolbook(ctx, divisor, d);
        }
        // q = rev(a) * rev(b)^-1 mod x^(n-d+1), reversed.
        let qlen = n - d + 1;
        let rb_inv = divisor
            .reversed(d + 1)
            .inverse_series(ctx, qlen)
            .expect("monic divisor has unit reversed constant term");
        let rq = self.reversed(n + 1).truncated(qlen).mul(ctx, &rb_inv).truncated(qlen);
        let q = rq.reversed(qlen);
        let r = self.sub(ctx, &q.mul(ctx, divisor));
        RingPoly::new(r.coeffs.into_iter().take(d).collect())
    }

    fn rem_monic_schoolbook(&self, ctx: &RingCtx, divisor: &RingPoly, d: usize) -> RingPoly {
        let mut r = self.coeffs.clone();
        for top in (d..r.len()).rev() {
            let c = r[top].clone();
            if c.is_zero() {
                continue;
            }
            for k in 0..d {
                let idx = top - d + k;
                r[idx] = ctx.sub(&r[idx], &ctx.mul(&c, &divisor.coeffs[k]));
            }
            r[top] = ctx.zero();
        }
        r.truncate(d);
        RingPoly::new(r)
    }
}

/// Exact product of integer polynomials with non-negative coefficients.
pub fn int_poly_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len().min(b.len());
    if n < KARATSUBA_MIN {
        schoolbook(a, b)
    } else if n < KRONECKER_MIN {
        karatsuba(a, b)
    } else {
        kronecker(a, b)
    }
}

pub(crate) fn schoolbook(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn karatsuba(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len().max(b.len());
    let mut pa = a.to_vec();
    let mut pb = b.to_vec();
    pa.resize(n, BigUint::zero());
    pb.resize(n, BigUint::zero());
    let mut out = karatsuba_eq(&pa, &pb);
    out.truncate(a.len() + b.len() - 1);
    out
}

fn karatsuba_eq(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n = a.len();
    if n < KARATSUBA_MIN {
        return schoolbook(a, b);
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba_eq(a0, b0);
    let z2 = karatsuba_eq(a1, b1);
    let sa = sum_padded(a0, a1);
    let sb = sum_padded(b0, b1);
    let mut z1 = karatsuba_eq(&sa, &sb);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v;
    }
    let mut out = vec![BigUint::zero(); 2 * n - 1];
    for (i, v) in z0.into_iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in z1.into_iter().enumerate() {
        if i + h < out.len() {
            out[i + h] += v;
        }
    }
    for (i, v) in z2.into_iter().enumerate() {
        out[i + 2 * h] += v;
    }
    out
}

fn sum_padded(lo: &[BigUint], hi: &[BigUint]) -> Vec<BigUint> {
    let n = lo.len().max(hi.len());
    (0..n)
        .map(|i| {
            let mut s = lo.get(i).cloned().unwrap_or_default();
            if let Some(h) = hi.get(i) {
                s += h;
            }
            s
        })
        .collect()
}

/// Kronecker substitution: pack both operands into single integers and let
/// the bignum multiplier do the work.
pub(crate) fn kronecker(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let bits = |v: &[BigUint]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let n = a.len().min(b.len()) as u64;
    let slot_bits = bits(a) + bits(b) + (64 - n.leading_zeros() as u64) + 1;
    let w = slot_bits.div_ceil(32) as usize;
    let pack = |v: &[BigUint]| {
        let mut digits = vec![0u32; v.len() * w];
        for (i, x) in v.iter().enumerate() {
            for (k, d) in x.iter_u32_digits().enumerate() {
                digits[i * w + k] = d;
            }
        }
        BigUint::new(digits)
    };
    let prod = pack(a) * pack(b);
    let digits = prod.to_u32_digits();
    let len = a.len() + b.len() - 1;
    (0..len)
        .map(|i| {
            let lo = (i * w).min(digits.len());
            let hi = ((i + 1) * w).min(digits.len());
            BigUint::from_slice(&digits[lo..hi])
        })
        .collect()
}

/// Evaluate `f` at every point. Uses a subproduct tree from 32 points up,
/// Horner below.
pub fn poly_eval_multi(ctx: &RingCtx, f: &RingPoly, points: &[RingElem]) -> Vec<RingElem> {
    if points.len() < FAST_EVAL_MIN {
        points.iter().map(|x| f.eval(ctx, x)).collect()
    } else {
        subproduct_eval(ctx, f, points)
    }
}

pub(crate) fn subproduct_eval(ctx: &RingCtx, f: &RingPoly, points: &[RingElem]) -> Vec<RingElem> {
    // levels[0] holds the linear leaves (x - x_i).
    let mut levels: Vec<Vec<RingPoly>> = vec![points
        .iter()
        .map(|x| RingPoly::new(vec![ctx.neg(x), ctx.one()]))
        .collect()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next = prev
            .chunks(2)
            .map(|pair| match pair {
                [l, r] => l.mul(ctx, r),
                [l] => l.clone(),
                _ => unreachable!(),
            })
            .collect();
        levels.push(next);
    }
    let mut rems = vec![f.rem_monic(ctx, &levels.last().unwrap()[0])];
    for level in levels.iter().rev().skip(1) {
        let mut next = Vec::with_capacity(level.len());
        for (i, node) in level.iter().enumerate() {
            next.push(rems[i / 2].rem_monic(ctx, node));
        }
        rems = next;
    }
    rems.into_iter().map(|r| r.coeff(0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, e: u32) -> RingCtx {
        RingCtx::new(p, e).unwrap()
    }

    #[test]
    fn small_evaluations() {
        let r = ctx(101, 1);
        let sq = RingPoly::from_u64s(&r, &[0, 0, 1]);
        let pts: Vec<_> = (0..3).map(|k| r.from_u64(k)).collect();
        assert_eq!(
            poly_eval_multi(&r, &sq, &pts),
            RingPoly::from_u64s(&r, &[0, 1, 4]).coeffs
        );

        let nine = RingPoly::constant(r.from_u64(9));
        let pts: Vec<_> = (0..50).map(|k| r.from_u64(k * 3)).collect();
        assert!(poly_eval_multi(&r, &nine, &pts).iter().all(|v| *v == r.from_u64(9)));

        let r = ctx(7, 2);
        let lin = RingPoly::from_u64s(&r, &[1, 3]);
        let got = poly_eval_multi(&r, &lin, &[r.from_u64(10), r.from_u64(20)]);
        assert_eq!(got, vec![r.from_u64(31), r.from_u64(12)]);
    }

    #[test]
    fn derivative_and_degree() {
        let r = ctx(7, 2);
        let f = RingPoly::from_u64s(&r, &[1, 2, 3, 0, 0]);
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.derivative(&r).trimmed(), RingPoly::from_u64s(&r, &[2, 6]));
        assert_eq!(RingPoly::zero().degree(), None);
    }

    fn big_vec(max_len: usize) -> impl Strategy<Value = Vec<BigUint>> {
        prop::collection::vec(any::<u128>().prop_map(BigUint::from), 1..max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn multiplication_algorithms_agree(a in big_vec(150), b in big_vec(150)) {
            let s = schoolbook(&a, &b);
            prop_assert_eq!(&karatsuba(&a, &b), &s);
            prop_assert_eq!(&kronecker(&a, &b), &s);
            prop_assert_eq!(&int_poly_mul(&a, &b), &s);
        }

        #[test]
        fn fast_eval_matches_horner(
            coeffs in prop::collection::vec(any::<u64>(), 0..120),
            pts in prop::collection::vec(any::<u64>(), 32..90),
        ) {
            let r = ctx(10007, 3);
            let f = RingPoly::from_u64s(&r, &coeffs);
            let xs: Vec<_> = pts.iter().map(|&x| r.from_u64(x)).collect();
            let horner: Vec<_> = xs.iter().map(|x| f.eval(&r, x)).collect();
            prop_assert_eq!(subproduct_eval(&r, &f, &xs), horner);
        }

        #[test]
        fn fast_remainder_matches_schoolbook(
            a in prop::collection::vec(any::<u64>(), 0..200),
            b in prop::collection::vec(any::<u64>(), 1..40),
        ) {
            let r = ctx(101, 4);
            let f = RingPoly::from_u64s(&r, &a);
            let mut bc = b.clone();
            bc.push(1);
            let g = RingPoly::from_u64s(&r, &bc);
            let d = g.degree().unwrap();
            let fast = f.rem_monic(&r, &g);
            let mut slow = f.rem_monic_schoolbook(&r, &g, d);
            if f.degree().is_none_or(|n| n < d) {
                slow = f.clone().trimmed();
            }
            prop_assert_eq!(fast.trimmed(), slow.trimmed());
        }
    }
}
