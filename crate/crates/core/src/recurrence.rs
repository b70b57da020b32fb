//! Interval products `M(k, k') = M(k') M(k'-1) ... M(k+1)` of a matrix of
//! linear polynomials, in roughly `sqrt(K)` matrix products and
//! `m^2` polynomial multiplications of degree `sqrt(K)`.
//!
//! Step 0 builds the block products `M(iH, (i+1)H)` for all `i < B` by
//! repeatedly doubling `G_d(x) = M(Hx + d) ... M(Hx + 1)`, known at
//! `x = 0..=d`, with Lagrange evaluation shifts. Partial blocks at the ends
//! of each requested interval are multiplied out directly, then everything
//! is glued in order.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::reduction::MatrixFamily;
use crate::ring::{int_poly_mul, RingCtx, RingElem, RingMatrix};

/// Below this total length the naive product is used.
pub const NAIVE_THRESHOLD: u64 = 64;
const LEAF_LEN: u64 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EngineKind {
    #[default]
    Fast,
    Naive,
}

/// Sorted, disjoint intervals `0 <= K_1 < L_1 <= K_2 < ... < L_r <= K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRequest {
    intervals: Vec<(u64, u64)>,
    bound: u64,
}

impl IntervalRequest {
    pub fn new(intervals: Vec<(u64, u64)>, bound: u64) -> Result<Self> {
        let mut prev_end = 0;
        for (i, &(k, l)) in intervals.iter().enumerate() {
            if k >= l {
                return Err(Error::MalformedRequest(format!("empty interval ({k}, {l})")));
            }
            if i > 0 && k < prev_end {
                return Err(Error::MalformedRequest(format!(
                    "interval ({k}, {l}) overlaps its predecessor"
                )));
            }
            prev_end = l;
        }
        if prev_end > bound {
            return Err(Error::MalformedRequest(format!(
                "interval end {prev_end} exceeds bound {bound}"
            )));
        }
        Ok(IntervalRequest { intervals, bound })
    }

    /// Uses the last interval end as the bound.
    pub fn covering(intervals: Vec<(u64, u64)>) -> Result<Self> {
        let bound = intervals.last().map_or(0, |&(_, l)| l);
        Self::new(intervals, bound)
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }
}

/// Block stride `H` (a power of two with `H^2 >= K`), block count `B = ceil(K/H)`
/// and `s = floor(log_4 K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineParams {
    pub stride: u64,
    pub blocks: u64,
    pub s: u32,
}

impl EngineParams {
    pub fn for_length(k: u64) -> Self {
        let k = k.max(1);
        let mut stride = 1u64;
        while (stride as u128) * (stride as u128) < k as u128 {
            stride *= 2;
        }
        EngineParams {
            stride,
            blocks: k.div_ceil(stride),
            s: (63 - k.leading_zeros()) / 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub fast_path: bool,
    pub matrix_products: u64,
    pub shifts: u64,
}

fn check_length(ctx: &RingCtx, k: u64) -> Result<()> {
    let pm1 = (ctx.p() - 1) as u128;
    if k as u128 >= pm1 * pm1 {
        return Err(Error::IntervalTooLong { k, p: ctx.p() });
    }
    Ok(())
}

pub fn interval_products(ctx: &RingCtx, family: &MatrixFamily, req: &IntervalRequest) -> Result<Vec<RingMatrix>> {
    interval_products_with_stats(ctx, family, req).map(|(m, _)| m)
}

pub fn compute_intervals(
    kind: EngineKind,
    ctx: &RingCtx,
    family: &MatrixFamily,
    req: &IntervalRequest,
) -> Result<Vec<RingMatrix>> {
    match kind {
        EngineKind::Fast => interval_products(ctx, family, req),
        EngineKind::Naive => naive_interval_products(ctx, family, req),
    }
}

pub fn interval_products_with_stats(
    ctx: &RingCtx,
    family: &MatrixFamily,
    req: &IntervalRequest,
) -> Result<(Vec<RingMatrix>, EngineStats)> {
    check_length(ctx, req.bound())?;
    let params = EngineParams::for_length(req.bound());
    let mut stats = EngineStats::default();
    // Shifts need 1..=H+1 to be units.
    if req.bound() < NAIVE_THRESHOLD || params.stride + 1 >= ctx.p() {
        let out = naive_interval_products(ctx, family, req)?;
        stats.matrix_products = req.intervals().iter().map(|&(k, l)| l - k).sum();
        return Ok((out, stats));
    }
    stats.fast_path = true;
    let blocks = block_products(ctx, family, params, &mut stats)?;
    let h = params.stride;
    let mut out = Vec::with_capacity(req.intervals().len());
    for &(k, l) in req.intervals() {
        let mut acc: Option<RingMatrix> = None;
        let mut pos = k;
        while pos < l {
            let (piece, next) = if pos % h == 0 && pos + h <= l {
                (blocks[(pos / h) as usize].clone(), pos + h)
            } else {
                let next = l.min((pos / h + 1) * h);
                (range_product(ctx, family, pos, next, &mut stats)?, next)
            };
            acc = Some(match acc {
                None => piece,
                Some(a) => {
                    stats.matrix_products += 1;
                    piece.mul(ctx, &a)?
                }
            });
            pos = next;
        }
        out.push(acc.expect("non-empty interval"));
    }
    Ok((out, stats))
}

/// `M(b) ... M(a+1)` by balanced splitting, direct below [`LEAF_LEN`].
fn range_product(ctx: &RingCtx, family: &MatrixFamily, a: u64, b: u64, stats: &mut EngineStats) -> Result<RingMatrix> {
    if b - a <= LEAF_LEN {
        let mut acc = family.eval(ctx, &ctx.from_u64(a + 1));
        for x in a + 2..=b {
            acc = family.eval(ctx, &ctx.from_u64(x)).mul(ctx, &acc)?;
            stats.matrix_products += 1;
        }
        return Ok(acc);
    }
    let mid = a + (b - a) / 2;
    let lo = range_product(ctx, family, a, mid, stats)?;
    let hi = range_product(ctx, family, mid, b, stats)?;
    stats.matrix_products += 1;
    hi.mul(ctx, &lo)
}

/// `M(iH, (i+1)H)` for `i < B`.
fn block_products(
    ctx: &RingCtx,
    family: &MatrixFamily,
    params: EngineParams,
    stats: &mut EngineStats,
) -> Result<Vec<RingMatrix>> {
    let h = params.stride;
    let h_inv = ctx.inv_unit(&ctx.from_u64(h))?;
    let mut vals = vec![
        family.eval(ctx, &ctx.from_u64(1)),
        family.eval(ctx, &ctx.from_u64(h + 1)),
    ];
    let mut d = 1u64;
    while d < h {
        let ahead = ctx.from_u64(d + 1);
        let offset = ctx.mul_u64(&h_inv, d);
        let left_tail = ShiftPlan::new(ctx, d as usize, &ahead)?.apply_matrices(ctx, &vals);
        let mid_plan = ShiftPlan::new(ctx, d as usize, &offset)?;
        let right = mid_plan.apply_matrices(ctx, &vals);
        let right_tail = ShiftPlan::new(ctx, d as usize, &ahead)?.apply_matrices(ctx, &right);
        stats.shifts += 3;
        let left_all = vals.iter().chain(left_tail.iter().take(d as usize));
        let right_all = right.iter().chain(right_tail.iter().take(d as usize));
        vals = right_all
            .zip(left_all)
            .map(|(r, l)| r.mul(ctx, l))
            .collect::<Result<_>>()?;
        stats.matrix_products += 2 * d + 1;
        d *= 2;
    }
    vals.truncate(params.blocks as usize);
    Ok(vals)
}

/// Oracle and small-size fallback: one evaluation and product per index.
pub fn naive_interval_products(ctx: &RingCtx, family: &MatrixFamily, req: &IntervalRequest) -> Result<Vec<RingMatrix>> {
    req.intervals()
        .iter()
        .map(|&(k, l)| {
            let mut acc = family.eval(ctx, &ctx.from_u64(k + 1));
            for x in k + 2..=l {
                acc = family.eval(ctx, &ctx.from_u64(x)).mul(ctx, &acc)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Lagrange shift from `F(0..=d)` to `F(y..=y+d)` for a fixed `d` and `y`.
/// Requires `y + l` to be a unit for `-d <= l <= d`.
struct ShiftPlan {
    d: usize,
    weights: Vec<RingElem>,
    kernel: Vec<BigUint>,
    prefactor: Vec<RingElem>,
}

impl ShiftPlan {
    fn new(ctx: &RingCtx, d: usize, y: &RingElem) -> Result<Self> {
        if d as u64 >= ctx.p() {
            return Err(Error::NonUnitAbscissa);
        }
        let base = ctx.sub(y, &ctx.from_u64(d as u64));
        let v: Vec<RingElem> = (0..=2 * d as u64).map(|n| ctx.add(&base, &ctx.from_u64(n))).collect();
        if v.iter().any(|x| !ctx.is_unit(x)) {
            return Err(Error::NonUnitAbscissa);
        }
        let u = ctx.batch_inverse(&v)?;
        let mut fact = vec![ctx.one()];
        for i in 1..=d as u64 {
            fact.push(ctx.mul_u64(fact.last().unwrap(), i));
        }
        let inv_fact = ctx.batch_inverse(&fact)?;
        let weights = (0..=d)
            .map(|i| {
                let w = ctx.mul(&inv_fact[i], &inv_fact[d - i]);
                if (d - i) % 2 == 1 {
                    ctx.neg(&w)
                } else {
                    w
                }
            })
            .collect();
        // prefactor[k] = v_k * ... * v_(k+d)
        let mut prefix = vec![ctx.one()];
        for x in &v {
            prefix.push(ctx.mul(prefix.last().unwrap(), x));
        }
        let mut inv_prefix = ctx.one();
        let mut prefactor = Vec::with_capacity(d + 1);
        for k in 0..=d {
            prefactor.push(ctx.mul(&prefix[k + d + 1], &inv_prefix));
            inv_prefix = ctx.mul(&inv_prefix, &u[k]);
        }
        Ok(ShiftPlan {
            d,
            weights,
            kernel: u.into_iter().map(RingElem::into_value).collect(),
            prefactor,
        })
    }

    fn apply(&self, ctx: &RingCtx, vals: &[RingElem]) -> Vec<RingElem> {
        debug_assert_eq!(vals.len(), self.d + 1);
        let c: Vec<BigUint> = vals
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| ctx.mul(a, w).into_value())
            .collect();
        let conv = int_poly_mul(&c, &self.kernel);
        (0..=self.d)
            .map(|k| ctx.mul(&ctx.reduce(conv[k + self.d].clone()), &self.prefactor[k]))
            .collect()
    }

    fn apply_matrices(&self, ctx: &RingCtx, vals: &[RingMatrix]) -> Vec<RingMatrix> {
        let (rows, cols) = (vals[0].rows(), vals[0].cols());
        let mut out: Vec<Vec<RingElem>> = vec![Vec::with_capacity(rows * cols); vals.len()];
        for r in 0..rows {
            for c in 0..cols {
                let seq: Vec<RingElem> = vals.iter().map(|m| m.get(r, c).clone()).collect();
                for (k, x) in self.apply(ctx, &seq).into_iter().enumerate() {
                    out[k].push(x);
                }
            }
        }
        out.into_iter()
            .map(|data| RingMatrix::from_vec(rows, cols, data).unwrap())
            .collect()
    }
}

/// Shift scalar samples `F(0), F(1), ..., F(d)` to `F(y), ..., F(y+d)`.
/// Integer `y` overlapping the sample range is handled by reuse plus an
/// extrapolation on the uncovered side.
fn shift_scalars(ctx: &RingCtx, vals: &[RingElem], y: &RingElem) -> Result<Vec<RingElem>> {
    let d = vals.len() - 1;
    let small = |x: &RingElem| ctx.to_u64(x).filter(|&v| v <= d as u64);
    let overlap: Option<i64> = small(y)
        .map(|c| c as i64)
        .or_else(|| small(&ctx.neg(y)).map(|c| -(c as i64)));
    let Some(c) = overlap else {
        return Ok(ShiftPlan::new(ctx, d, y)?.apply(ctx, vals));
    };
    let ahead = if c > 0 {
        Some(ShiftPlan::new(ctx, d, &ctx.from_u64(d as u64 + 1))?.apply(ctx, vals))
    } else {
        None
    };
    let behind = if c < 0 {
        Some(ShiftPlan::new(ctx, d, &ctx.from_i64(-(d as i64) - 1))?.apply(ctx, vals))
    } else {
        None
    };
    Ok((0..=d as i64)
        .map(|k| {
            let j = c + k;
            if j < 0 {
                behind.as_ref().unwrap()[(j + d as i64 + 1) as usize].clone()
            } else if j as usize > d {
                ahead.as_ref().unwrap()[j as usize - d - 1].clone()
            } else {
                vals[j as usize].clone()
            }
        })
        .collect())
}

/// Given `F(0), F(a), ..., F(da)` for a matrix polynomial `F` of degree at
/// most `d`, return `F(shift), F(shift + a), ..., F(shift + da)`.
pub fn shift_evaluations(
    ctx: &RingCtx,
    values: &[RingMatrix],
    alpha: &RingElem,
    shift: &RingElem,
) -> Result<Vec<RingMatrix>> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let (rows, cols) = (values[0].rows(), values[0].cols());
    if values.iter().any(|m| m.rows() != rows || m.cols() != cols) {
        return Err(Error::ShapeMismatch("shift inputs differ in shape".into()));
    }
    let a_inv = ctx.inv_unit(alpha).map_err(|_| Error::NonUnitAbscissa)?;
    let y = ctx.mul(shift, &a_inv);
    let mut out: Vec<Vec<RingElem>> = vec![Vec::with_capacity(rows * cols); values.len()];
    for r in 0..rows {
        for c in 0..cols {
            let seq: Vec<RingElem> = values.iter().map(|m| m.get(r, c).clone()).collect();
            for (k, x) in shift_scalars(ctx, &seq, &y)?.into_iter().enumerate() {
                out[k].push(x);
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|data| RingMatrix::from_vec(rows, cols, data).unwrap())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::FamilyKind;
    use crate::ring::RingPoly;

    fn scalar_family(ctx: &RingCtx, c0: i64, c1: i64) -> MatrixFamily {
        MatrixFamily::new(
            RingMatrix::from_vec(1, 1, vec![ctx.from_i64(c0)]).unwrap(),
            RingMatrix::from_vec(1, 1, vec![ctx.from_i64(c1)]).unwrap(),
            (ctx.one(), ctx.zero()),
            FamilyKind::Generic,
        )
        .unwrap()
    }

    fn scalars(ctx: &RingCtx, v: &[u64]) -> Vec<RingMatrix> {
        v.iter()
            .map(|&x| RingMatrix::from_vec(1, 1, vec![ctx.from_u64(x)]).unwrap())
            .collect()
    }

    #[test]
    fn factorial_via_identity_family() {
        let r = RingCtx::new(101, 3).unwrap();
        let fam = scalar_family(&r, 0, 1);
        let req = IntervalRequest::covering(vec![(0, 4)]).unwrap();
        assert_eq!(interval_products(&r, &fam, &req).unwrap()[0].get(0, 0), &r.from_u64(24));
    }

    #[test]
    fn params_follow_power_of_two_stride() {
        let p = EngineParams::for_length(30015);
        assert_eq!((p.stride, p.blocks, p.s), (256, 118, 7));
        let p = EngineParams::for_length(64);
        assert_eq!((p.stride, p.blocks, p.s), (8, 8, 3));
    }

    #[test]
    fn malformed_requests() {
        assert!(IntervalRequest::new(vec![(3, 3)], 10).is_err());
        assert!(IntervalRequest::new(vec![(0, 5), (4, 6)], 10).is_err());
        assert!(IntervalRequest::new(vec![(0, 5), (5, 11)], 10).is_err());
        assert!(IntervalRequest::new(vec![(0, 5), (5, 10)], 10).is_ok());
    }

    #[test]
    fn too_long_is_rejected() {
        let r = RingCtx::new(11, 2).unwrap();
        let fam = scalar_family(&r, 1, 1);
        let req = IntervalRequest::covering(vec![(0, 100)]).unwrap();
        assert_eq!(
            interval_products(&r, &fam, &req),
            Err(Error::IntervalTooLong { k: 100, p: 11 })
        );
        let req = IntervalRequest::covering(vec![(0, 99)]).unwrap();
        assert!(interval_products(&r, &fam, &req).is_ok());
    }

    #[test]
    fn shift_examples() {
        let r = RingCtx::new(101, 1).unwrap();
        let one = r.one();
        let constant = scalars(&r, &[7, 7, 7, 7]);
        assert_eq!(
            shift_evaluations(&r, &constant, &one, &r.from_u64(55)).unwrap(),
            constant
        );
        let id = scalars(&r, &[0, 1, 2]);
        assert_eq!(
            shift_evaluations(&r, &id, &one, &r.from_u64(10)).unwrap(),
            scalars(&r, &[10, 11, 12])
        );
        // F(X) = X with samples at 0, 3, 6, 9 and a shift overlapping them
        let steps = scalars(&r, &[0, 3, 6, 9]);
        let three = r.from_u64(3);
        assert_eq!(
            shift_evaluations(&r, &steps, &three, &r.from_u64(6)).unwrap(),
            scalars(&r, &[6, 9, 12, 15])
        );
        assert_eq!(
            shift_evaluations(&r, &steps, &three, &r.from_i64(-3)).unwrap(),
            scalars(&r, &[98, 0, 3, 6])
        );
    }

    #[test]
    fn shift_cubic_matches_horner() {
        let r = RingCtx::new(10007, 2).unwrap();
        let f = RingPoly::from_u64s(&r, &[12345, 678, 91011, 1213]);
        let vals: Vec<_> = (0..4u64)
            .map(|x| RingMatrix::from_vec(1, 1, vec![f.eval(&r, &r.from_u64(x))]).unwrap())
            .collect();
        let got = shift_evaluations(&r, &vals, &r.one(), &r.from_u64(55)).unwrap();
        for (k, m) in got.iter().enumerate() {
            assert_eq!(m.get(0, 0), &f.eval(&r, &r.from_u64(55 + k as u64)));
        }
    }

    #[test]
    fn non_unit_shift_is_reported() {
        let r = RingCtx::new(11, 2).unwrap();
        let vals = scalars(&r, &[1, 2, 3]);
        assert_eq!(
            shift_evaluations(&r, &vals, &r.one(), &r.from_u64(12)),
            Err(Error::NonUnitAbscissa)
        );
        assert_eq!(
            shift_evaluations(&r, &vals, &r.from_u64(11), &r.one()),
            Err(Error::NonUnitAbscissa)
        );
    }
}
