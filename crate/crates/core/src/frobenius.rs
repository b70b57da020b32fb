//! The Frobenius matrix mod `p^N`: push each term of the Frobenius series
//! horizontally down to `s = -1` one row `j` at a time, then vertically down
//! to `t = 0`.
//!
//! Horizontal work happens in `R1 = Z/p^(N+1)` except for the block products,
//! which only need `R0 = Z/p^N`. The single division by a denominator of
//! valuation one per block is where the extra digit is spent.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::curve::{compute_b_table, validate, BCoeffTable, CurveData};
use crate::error::{Error, Result};
use crate::recurrence::{compute_intervals, EngineKind, IntervalRequest};
use crate::reduction::{apply_step, horizontal_family, vertical_family, DifferentialVec, MatrixFamily};
use crate::ring::{RingCtx, RingElem, RingMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusOptions {
    pub engine: EngineKind,
    /// Worker threads; 0 and 1 both mean sequential.
    pub threads: usize,
}

impl Default for FrobeniusOptions {
    fn default() -> Self {
        FrobeniusOptions {
            engine: EngineKind::Fast,
            threads: 1,
        }
    }
}

/// `M(k) = M_H^t((k-1)p, kp-2g-2)` and the matching `D(k)`, `1 <= k <= L`,
/// stored at index `k - 1` over `R0`.
#[derive(Clone, Debug)]
pub struct HorizontalBlocks {
    pub j: usize,
    pub t: i128,
    pub l: usize,
    pub l_prime: usize,
    pub m: Vec<RingMatrix>,
    pub d: Vec<RingElem>,
}

/// `M_j`, `D_j` over the vertical working ring and `X_j = D_j^-1 M_j` over `R0`.
#[derive(Clone, Debug)]
pub struct VerticalBlocks {
    pub m: Vec<RingMatrix>,
    pub d: Vec<RingElem>,
    pub x: Vec<RingMatrix>,
}

/// `w_{i,j}` for every `i`, over `R1`, plus how many divisibility checks passed.
#[derive(Clone, Debug)]
pub struct HorizontalOutput {
    pub j: usize,
    pub w: Vec<Vec<RingElem>>,
    pub handoff_checks: usize,
}

#[derive(Clone, Debug)]
pub struct FrobeniusRun {
    pub matrix: RingMatrix,
    pub handoff_checks: usize,
    pub vertical: VerticalBlocks,
}

/// `t = ((2j+1)p - 1) / 2`.
pub fn row_t(p: u64, j: usize) -> i128 {
    ((2 * j as i128 + 1) * p as i128 - 1) / 2
}

/// Products in reduction order `M(a+1) ... M(b)` for each `(a, b)`.
fn reduction_products(
    kind: EngineKind,
    ctx: &RingCtx,
    family: &MatrixFamily,
    intervals: Vec<(u64, u64)>,
) -> Result<Vec<RingMatrix>> {
    let req = IntervalRequest::covering(intervals)?;
    let out = compute_intervals(kind, ctx, &family.transposed(), &req)?;
    Ok(out.iter().map(RingMatrix::transpose).collect())
}

/// `(2^(2g+1) (2g+1)!)^-1 mod p`.
pub fn wilson_denominator(ctx_p: &RingCtx, genus: usize) -> Result<RingElem> {
    let n = 2 * genus as u64 + 1;
    let mut acc = ctx_p.pow(&ctx_p.from_u64(2), n);
    for k in 2..=n {
        acc = ctx_p.mul_u64(&acc, k);
    }
    ctx_p.inv_unit(&acc)
}

pub fn horizontal_block_matrices(curve: &CurveData, j: usize, kind: EngineKind) -> Result<HorizontalBlocks> {
    let (p, g, n) = (curve.p(), curve.genus(), curve.precision() as usize);
    let r0 = curve.ctx_n();
    let t = row_t(p, j);
    let l = (2 * g + 1) * j + 2 * g;
    let l_prime = n.min(l);
    let family = horizontal_family(curve, t, r0)?;
    let intervals: Vec<(u64, u64)> = (1..=l_prime as u64)
        .map(|k| ((k - 1) * p, k * p - 2 * g as u64 - 2))
        .collect();
    let mut m = reduction_products(kind, r0, &family, intervals.clone())?;
    let mut d: Vec<RingElem> = reduction_products(kind, r0, &family.denominator_family(), intervals)?
        .into_iter()
        .map(|x| x.get(0, 0).clone())
        .collect();
    if l > l_prime {
        if n == 1 {
            let wilson = wilson_denominator(r0, g)?;
            m.resize(l, m[0].clone());
            d = vec![wilson; l];
        } else {
            let taylor = TaylorFit::new(r0, n)?;
            let m_coeffs = taylor.fit_matrices(r0, &m)?;
            let scalar = |x: &RingElem| RingMatrix::from_vec(1, 1, vec![x.clone()]).unwrap();
            let d_coeffs = taylor.fit_matrices(r0, &d.iter().map(scalar).collect::<Vec<_>>())?;
            for k in l_prime + 1..=l {
                m.push(taylor.eval(r0, &m_coeffs, k as u64)?);
                d.push(taylor.eval(r0, &d_coeffs, k as u64)?.get(0, 0).clone());
            }
        }
    }
    if let Some(bad) = d.iter().position(|x| !r0.is_unit(x)) {
        return Err(Error::ValuationAssertionFailed(format!(
            "horizontal block denominator D({}) is not a unit",
            bad + 1
        )));
    }
    Ok(HorizontalBlocks { j, t, l, l_prime, m, d })
}

/// Solves `F(kp) = sum_i c_i k^i`, `k = 1..=N`, for the scaled Taylor
/// coefficients `c_i = F^(i)(0) p^i / i!` mod `p^N`.
struct TaylorFit {
    inverse: RingMatrix,
}

impl TaylorFit {
    fn new(ctx: &RingCtx, n: usize) -> Result<Self> {
        let data = (1..=n as u64)
            .flat_map(|k| (0..n as u64).map(move |i| k.pow(i as u32)))
            .map(|v| ctx.from_u64(v))
            .collect();
        let vandermonde = RingMatrix::from_vec(n, n, data)?;
        Ok(TaylorFit {
            inverse: vandermonde.inverse(ctx)?,
        })
    }

    fn fit_matrices(&self, ctx: &RingCtx, samples: &[RingMatrix]) -> Result<Vec<RingMatrix>> {
        let n = self.inverse.rows();
        (0..n)
            .map(|i| {
                let mut acc = RingMatrix::zeros(ctx, samples[0].rows(), samples[0].cols());
                for (k, sample) in samples.iter().enumerate() {
                    acc = acc.add(ctx, &sample.scale(ctx, self.inverse.get(i, k)))?;
                }
                Ok(acc)
            })
            .collect()
    }

    fn eval(&self, ctx: &RingCtx, coeffs: &[RingMatrix], k: u64) -> Result<RingMatrix> {
        let kr = ctx.from_u64(k);
        let mut acc = RingMatrix::zeros(ctx, coeffs[0].rows(), coeffs[0].cols());
        for c in coeffs.iter().rev() {
            acc = acc.scale(ctx, &kr).add(ctx, c)?;
        }
        Ok(acc)
    }
}

fn require_p_divides(ctx: &RingCtx, x: &RingElem, what: impl FnOnce() -> String) -> Result<()> {
    if ctx.is_unit(x) {
        return Err(Error::ValuationAssertionFailed(what()));
    }
    Ok(())
}

/// Reduces `T_{i,j}` to `w_{i,j}` in `W_{-1,t}` for every `i`.
pub fn horizontal_phase(
    curve: &CurveData,
    btable: &BCoeffTable,
    blocks: &HorizontalBlocks,
) -> Result<HorizontalOutput> {
    let g = curve.genus();
    let out: Vec<(Vec<RingElem>, usize)> = (0..2 * g)
        .into_par_iter()
        .map(|i| reduce_row_term(curve, btable, blocks, i))
        .collect::<Result<_>>()?;
    let handoff_checks = out.iter().map(|(_, c)| c).sum();
    Ok(HorizontalOutput {
        j: blocks.j,
        w: out.into_iter().map(|(w, _)| w).collect(),
        handoff_checks,
    })
}

fn reduce_row_term(
    curve: &CurveData,
    btable: &BCoeffTable,
    blocks: &HorizontalBlocks,
    i: usize,
) -> Result<(Vec<RingElem>, usize)> {
    let (p, g) = (curve.p() as i128, curve.genus());
    let r1 = curve.ctx_n1();
    let (j, t) = (blocks.j, blocks.t);
    let family = horizontal_family(curve, t, r1)?;
    let b = |k: i128| -> RingElem {
        btable
            .get(j, (k - i as i128 - 1) as i64)
            .cloned()
            .unwrap_or_else(|| r1.zero())
    };
    let m_top = (i + (2 * g + 1) * j + 1) as i128;
    let mut v = DifferentialVec::zero(r1, g, m_top * p - 1, t);
    v.coeffs[0] = b(m_top);
    let mut checks = 0;
    for m in (1..=m_top).rev() {
        for ell in 1..=2 * g + 1 {
            let s = m * p - ell as i128;
            require_p_divides(r1, &v.coeffs[ell - 1], || {
                format!("coordinate {ell} of v at s = {} not divisible by p (i={i}, j={j})", s)
            })?;
            checks += 1;
            if ell == 2 * g + 1 {
                let den = family.eval_den_at(r1, s);
                if r1.valuation(&den) != 1 {
                    return Err(Error::ValuationAssertionFailed(format!(
                        "D_H({s}) does not have valuation 1"
                    )));
                }
            }
            v = apply_step(r1, &family, s, &v, true)?;
        }
        let k = (m - 1) as usize;
        let den_inv = r1.inv_unit(&r1.lift(&blocks.d[k]))?;
        let moved = blocks.m[k].lift_to(r1).mul_vec(r1, &v.coeffs)?;
        v = DifferentialVec {
            s: (m - 1) * p,
            t,
            coeffs: moved.iter().map(|c| r1.mul(c, &den_inv)).collect(),
        };
        v = apply_step(r1, &family, (m - 1) * p, &v, true)?;
        if m > 1 {
            v.coeffs[0] = r1.add(&v.coeffs[0], &b(m - 1));
        }
    }
    Ok((v.coeffs, checks))
}

/// The working ring of the vertical phase: `R1`, or `Z/p` when `N = 1`.
pub fn vertical_ring(curve: &CurveData) -> &RingCtx {
    if curve.precision() == 1 {
        curve.ctx_n()
    } else {
        curve.ctx_n1()
    }
}

pub fn vertical_blocks(curve: &CurveData, kind: EngineKind) -> Result<VerticalBlocks> {
    let (p, n) = (curve.p(), curve.precision() as usize);
    let ring = vertical_ring(curve);
    let r0 = curve.ctx_n();
    let family = vertical_family(curve, ring)?;
    let ends: Vec<u64> = (0..n).map(|j| row_t(p, j) as u64).collect();
    let intervals: Vec<(u64, u64)> = (0..n)
        .map(|j| (if j == 0 { 0 } else { ends[j - 1] }, ends[j]))
        .collect();
    let m = reduction_products(kind, ring, &family, intervals.clone())?;
    let d: Vec<RingElem> = reduction_products(kind, ring, &family.denominator_family(), intervals)?
        .into_iter()
        .map(|x| x.get(0, 0).clone())
        .collect();
    let mut x = Vec::with_capacity(n);
    for j in 0..n {
        if j == 0 {
            if !ring.is_unit(&d[0]) {
                return Err(Error::ValuationAssertionFailed("D_0 is not a unit".into()));
            }
            x.push(m[0].scale(ring, &ring.inv_unit(&d[0])?).lift_to(r0));
            continue;
        }
        if ring.valuation(&d[j]) != 1 {
            return Err(Error::ValuationAssertionFailed(format!(
                "v_p(D_{j}) = {}, expected 1",
                ring.valuation(&d[j])
            )));
        }
        if !m[j].is_zero_mod_p(ring) {
            return Err(Error::ValuationAssertionFailed(format!("M_{j} is not zero mod p")));
        }
        let entries = m[j]
            .entries()
            .iter()
            .map(|e| ring.div_exact(e, &d[j]).map(|q| r0.lift(&q)))
            .collect::<Result<Vec<_>>>()?;
        x.push(RingMatrix::from_vec(m[j].rows(), m[j].cols(), entries)?);
    }
    Ok(VerticalBlocks { m, d, x })
}

/// `w[j][i]` are the horizontal outputs; returns `w_i` over `R0`.
pub fn vertical_phase(
    curve: &CurveData,
    blocks: &VerticalBlocks,
    w: &[Vec<Vec<RingElem>>],
) -> Result<Vec<Vec<RingElem>>> {
    let r0 = curve.ctx_n();
    let n = curve.precision() as usize;
    if w.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{} horizontal rows for precision {n}",
            w.len()
        )));
    }
    let lift = |v: &[RingElem]| v.iter().map(|c| r0.lift(c)).collect::<Vec<_>>();
    (0..2 * curve.genus())
        .map(|i| {
            let mut v = lift(&w[n - 1][i]);
            for j in (1..n).rev() {
                let moved = blocks.x[j].mul_vec(r0, &v)?;
                v = lift(&w[j - 1][i])
                    .iter()
                    .zip(&moved)
                    .map(|(a, b)| r0.add(a, b))
                    .collect();
            }
            blocks.x[0].mul_vec(r0, &v)
        })
        .collect()
}

pub fn frobenius_matrix(p: u64, precision: u32, q: &[BigInt]) -> Result<RingMatrix> {
    let curve = validate(p, precision, q)?;
    frobenius_matrix_with(&curve, FrobeniusOptions::default())
}

pub fn frobenius_matrix_with(curve: &CurveData, opts: FrobeniusOptions) -> Result<RingMatrix> {
    frobenius_run(curve, opts).map(|r| r.matrix)
}

/// Full computation, keeping the intermediate data the invariant checks look at.
pub fn frobenius_run(curve: &CurveData, opts: FrobeniusOptions) -> Result<FrobeniusRun> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::InvariantViolated(format!("thread pool: {e}")))?;
    pool.install(|| run_inner(curve, opts.engine))
}

fn run_inner(curve: &CurveData, kind: EngineKind) -> Result<FrobeniusRun> {
    let btable = compute_b_table(curve);
    let n = curve.precision() as usize;
    let (rows, vertical) = rayon::join(
        || {
            (0..n)
                .into_par_iter()
                .map(|j| {
                    let blocks = horizontal_block_matrices(curve, j, kind)?;
                    horizontal_phase(curve, &btable, &blocks)
                })
                .collect::<Result<Vec<_>>>()
        },
        || vertical_blocks(curve, kind),
    );
    let (rows, vertical) = (rows?, vertical?);
    let handoff_checks = rows.iter().map(|r| r.handoff_checks).sum();
    let w: Vec<Vec<Vec<RingElem>>> = rows.into_iter().map(|r| r.w).collect();
    let columns = vertical_phase(curve, &vertical, &w)?;
    let dim = 2 * curve.genus();
    let mut matrix = RingMatrix::zeros(curve.ctx_n(), dim, dim);
    for (c, col) in columns.into_iter().enumerate() {
        for (r, x) in col.into_iter().enumerate() {
            matrix.set(r, c, x);
        }
    }
    Ok(FrobeniusRun {
        matrix,
        handoff_checks,
        vertical,
    })
}
