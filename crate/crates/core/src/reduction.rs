//! Reduction matrices for moving differentials `F(x) x^s y^(-2t) dx/y` towards
//! the basis `{x^i dx/y : i < 2g}`.
//!
//! Horizontal maps lower `s` at fixed `t`; vertical maps lower `t` at `s = -1`.
//! Both are matrices of linear polynomials with a linear scalar denominator.

use crate::curve::{compute_all_bezout, CurveData};
use crate::error::{Error, Result};
use crate::ring::{RingCtx, RingElem, RingMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Variable `t`, acting on `W_{-1,t}`.
    Vertical,
    /// Variable `s`, acting on `W_{s,t}` for the stored `t`.
    Horizontal {
        t: i128,
    },
    Generic,
}

/// `M(X) = constant + X * linear` with denominator `D(X) = den.0 + X * den.1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFamily {
    pub constant: RingMatrix,
    pub linear: RingMatrix,
    pub den: (RingElem, RingElem),
    pub kind: FamilyKind,
}

impl MatrixFamily {
    pub fn new(constant: RingMatrix, linear: RingMatrix, den: (RingElem, RingElem), kind: FamilyKind) -> Result<Self> {
        if !constant.is_square() || constant.rows() != linear.rows() || constant.cols() != linear.cols() {
            return Err(Error::ShapeMismatch(
                "family parts must be equal square matrices".into(),
            ));
        }
        Ok(MatrixFamily {
            constant,
            linear,
            den,
            kind,
        })
    }

    pub fn dim(&self) -> usize {
        self.constant.rows()
    }

    pub fn eval(&self, ctx: &RingCtx, x: &RingElem) -> RingMatrix {
        let data = self
            .constant
            .entries()
            .iter()
            .zip(self.linear.entries())
            .map(|(c, l)| ctx.add(c, &ctx.mul(l, x)))
            .collect();
        RingMatrix::from_vec(self.dim(), self.dim(), data).unwrap()
    }

    pub fn eval_at(&self, ctx: &RingCtx, x: i128) -> RingMatrix {
        self.eval(ctx, &ctx.from_i128(x))
    }

    pub fn eval_den(&self, ctx: &RingCtx, x: &RingElem) -> RingElem {
        ctx.add(&self.den.0, &ctx.mul(&self.den.1, x))
    }

    pub fn eval_den_at(&self, ctx: &RingCtx, x: i128) -> RingElem {
        self.eval_den(ctx, &ctx.from_i128(x))
    }

    /// Entrywise transpose; turns `M(a+1)...M(b)` products into the opposite order.
    pub fn transposed(&self) -> MatrixFamily {
        MatrixFamily {
            constant: self.constant.transpose(),
            linear: self.linear.transpose(),
            den: self.den.clone(),
            kind: self.kind,
        }
    }

    /// The denominator viewed as a 1x1 family.
    pub fn denominator_family(&self) -> MatrixFamily {
        MatrixFamily {
            constant: RingMatrix::from_vec(1, 1, vec![self.den.0.clone()]).unwrap(),
            linear: RingMatrix::from_vec(1, 1, vec![self.den.1.clone()]).unwrap(),
            den: self.den.clone(),
            kind: FamilyKind::Generic,
        }
    }

    /// Re-embed into another precision of the same prime.
    pub fn lift_to(&self, ctx: &RingCtx) -> MatrixFamily {
        MatrixFamily {
            constant: self.constant.lift_to(ctx),
            linear: self.linear.lift_to(ctx),
            den: (ctx.lift(&self.den.0), ctx.lift(&self.den.1)),
            kind: self.kind,
        }
    }
}

/// A differential in `W_{s,t}`: coordinates w.r.t. `x^(i+s) y^(-2t) dx/y`,
/// `i = 0..=2g`, or `x^i y^(-2t) dx/y`, `i < 2g`, when `s = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialVec {
    pub s: i128,
    pub t: i128,
    pub coeffs: Vec<RingElem>,
}

impl DifferentialVec {
    pub fn zero(ctx: &RingCtx, genus: usize, s: i128, t: i128) -> Self {
        let len = if s == -1 { 2 * genus } else { 2 * genus + 1 };
        DifferentialVec {
            s,
            t,
            coeffs: vec![ctx.zero(); len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero)
    }
}

/// `M_V(t)`: column `i` holds `(2t-1) R_i + 2 S_i'`, i.e. constant part
/// `2 S_i' - R_i` and linear part `2 R_i`; `D_V(t) = 2t - 1`.
pub fn vertical_family(curve: &CurveData, ctx: &RingCtx) -> Result<MatrixFamily> {
    let g = curve.genus();
    let dim = 2 * g;
    let mut constant = RingMatrix::zeros(ctx, dim, dim);
    let mut linear = RingMatrix::zeros(ctx, dim, dim);
    for pair in compute_all_bezout(curve, ctx)? {
        let ds = pair.s.derivative(ctx);
        for row in 0..dim {
            let r = pair.r.coeff(row);
            let c = ctx.sub(&ctx.mul_u64(&ds.coeff(row), 2), &r);
            constant.set(row, pair.index, c);
            linear.set(row, pair.index, ctx.mul_u64(&r, 2));
        }
    }
    MatrixFamily::new(
        constant,
        linear,
        (ctx.from_i64(-1), ctx.from_u64(2)),
        FamilyKind::Vertical,
    )
}

/// `M_H^t(s)`: `D_H^t(s) = (2g+1)(2t-1) - 2s` on the subdiagonal and
/// `C_h(s) = 2s P_h - (2t-1) h P_h` down the last column.
pub fn horizontal_family(curve: &CurveData, t: i128, ctx: &RingCtx) -> Result<MatrixFamily> {
    let g = curve.genus();
    let dim = 2 * g + 1;
    let p_poly = curve.p_poly(ctx);
    let two_t_minus_one = ctx.from_i128(2 * t - 1);
    let d0 = ctx.mul_u64(&two_t_minus_one, dim as u64);
    let d1 = ctx.from_i64(-2);
    let mut constant = RingMatrix::zeros(ctx, dim, dim);
    let mut linear = RingMatrix::zeros(ctx, dim, dim);
    for r in 1..dim {
        constant.set(r, r - 1, d0.clone());
        linear.set(r, r - 1, d1.clone());
    }
    for h in 0..dim {
        let ph = p_poly.coeff(h);
        linear.set(h, dim - 1, ctx.mul_u64(&ph, 2));
        let c = ctx.neg(&ctx.mul(&ctx.mul_u64(&ph, h as u64), &two_t_minus_one));
        constant.set(h, dim - 1, c);
    }
    MatrixFamily::new(constant, linear, (d0, d1), FamilyKind::Horizontal { t })
}

/// One reduction step at `x` (the current `s` or `t` of `v`), optionally
/// followed by exact division by `D(x)`.
pub fn apply_step(
    ctx: &RingCtx,
    family: &MatrixFamily,
    x: i128,
    v: &DifferentialVec,
    divide: bool,
) -> Result<DifferentialVec> {
    match family.kind {
        FamilyKind::Horizontal { t } => {
            if v.s != x || v.t != t || v.coeffs.len() != family.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "horizontal step at s={x}, t={t} applied to W_({},{}) of length {}",
                    v.s,
                    v.t,
                    v.coeffs.len()
                )));
            }
            let xr = ctx.from_i128(x);
            let n = family.dim();
            let last = &v.coeffs[n - 1];
            let den = family.eval_den(ctx, &xr);
            let col_at = |h: usize| {
                ctx.add(
                    family.constant.get(h, n - 1),
                    &ctx.mul(family.linear.get(h, n - 1), &xr),
                )
            };
            let mut out = Vec::with_capacity(n);
            out.push(ctx.mul(&col_at(0), last));
            for r in 1..n {
                out.push(ctx.add(&ctx.mul(&den, &v.coeffs[r - 1]), &ctx.mul(&col_at(r), last)));
            }
            if divide {
                out = out.iter().map(|c| ctx.div_exact(c, &den)).collect::<Result<_>>()?;
            }
            if x == 0 {
                if !out[0].is_zero() {
                    return Err(Error::InvariantViolated(
                        "x^-1 coefficient after horizontal step to s = -1".into(),
                    ));
                }
                out.remove(0);
            }
            Ok(DifferentialVec {
                s: x - 1,
                t,
                coeffs: out,
            })
        }
        FamilyKind::Vertical => {
            if v.s != -1 || v.t != x || v.coeffs.len() != family.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "vertical step at t={x} applied to W_({},{})",
                    v.s, v.t
                )));
            }
            let xr = ctx.from_i128(x);
            let mut out = family.eval(ctx, &xr).mul_vec(ctx, &v.coeffs)?;
            if divide {
                let den = family.eval_den(ctx, &xr);
                out = out.iter().map(|c| ctx.div_exact(c, &den)).collect::<Result<_>>()?;
            }
            Ok(DifferentialVec {
                s: -1,
                t: x - 1,
                coeffs: out,
            })
        }
        FamilyKind::Generic => Err(Error::ShapeMismatch("generic family has no reduction semantics".into())),
    }
}
