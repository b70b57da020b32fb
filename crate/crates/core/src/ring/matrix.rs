use num_bigint::BigUint;
use num_traits::Zero;

use super::{RingCtx, RingElem, RingPoly};
use crate::error::{Error, Result};

/// Dense row-major matrix over a residue ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(ctx: &RingCtx, rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &RingCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = ctx.one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<RingElem>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        Ok(RingMatrix { rows, cols, data })
    }

    pub fn from_u64_rows(ctx: &RingCtx, rows: &[&[u64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| ctx.from_u64(v)))
            .collect();
        RingMatrix::from_vec(r, c, data).expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[RingElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<RingElem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        RingMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map(&self, f: impl Fn(&RingElem) -> RingElem) -> RingMatrix {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Re-embed every entry into `ctx` by least representative.
    pub fn lift_to(&self, ctx: &RingCtx) -> RingMatrix {
        self.map(|x| ctx.lift(x))
    }

    pub fn add(&self, ctx: &RingCtx, other: &RingMatrix) -> Result<RingMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("matrix addition".into()));
        }
        Ok(RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ctx.add(a, b)).collect(),
        })
    }

    pub fn scale(&self, ctx: &RingCtx, c: &RingElem) -> RingMatrix {
        self.map(|x| ctx.mul(x, c))
    }

    /// Schoolbook product; each entry is accumulated exactly and reduced once.
    pub fn mul(&self, ctx: &RingCtx, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigUint::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a.value() * other.get(k, j).value();
                    }
                }
                data.push(ctx.reduce(acc));
            }
        }
        Ok(RingMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, ctx: &RingCtx, v: &[RingElem]) -> Result<Vec<RingElem>> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigUint::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    acc += a.value() * x.value();
                }
                ctx.reduce(acc)
            })
            .collect())
    }

    pub fn is_zero_mod_p(&self, ctx: &RingCtx) -> bool {
        self.data.iter().all(|x| !ctx.is_unit(x))
    }

    /// Inverse of a square matrix that is invertible mod p (Gauss-Jordan with unit pivots).
    pub fn inverse(&self, ctx: &RingCtx) -> Result<RingMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RingMatrix::identity(ctx, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| ctx.is_unit(a.get(r, col)))
                .ok_or_else(|| Error::NotAUnit("matrix is singular mod p".into()))?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let pinv = ctx.inv_unit(a.get(col, col))?;
            a.scale_row(ctx, col, &pinv);
            inv.scale_row(ctx, col, &pinv);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.sub_row_multiple(ctx, r, col, &f);
                inv.sub_row_multiple(ctx, r, col, &f);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, ctx: &RingCtx, r: usize, f: &RingElem) {
        for c in 0..self.cols {
            let v = ctx.mul(self.get(r, c), f);
            self.set(r, c, v);
        }
    }

    // row[target] -= f * row[src]
    fn sub_row_multiple(&mut self, ctx: &RingCtx, target: usize, src: usize, f: &RingElem) {
        for c in 0..self.cols {
            let v = ctx.sub(self.get(target, c), &ctx.mul(f, self.get(src, c)));
            self.set(target, c, v);
        }
    }
}

/// `det(T*I - A)` by Berkowitz's division-free algorithm, ascending coefficients.
pub fn charpoly_berkowitz(ctx: &RingCtx, a: &RingMatrix) -> Result<RingPoly> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("charpoly of non-square matrix".into()));
    }
    let n = a.rows();
    // Descending coefficients of the charpoly of the leading r x r block.
    let mut poly = vec![ctx.one()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R S, -R A S, ..., -R A^(r-1) S
        let mut col = Vec::with_capacity(r + 2);
        col.push(ctx.one());
        col.push(ctx.neg(a.get(r, r)));
        let mut s: Vec<RingElem> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for _ in 0..r {
            let rs = (0..r).fold(ctx.zero(), |acc, k| ctx.add(&acc, &ctx.mul(a.get(r, k), &s[k])));
            col.push(ctx.neg(&rs));
            s = (0..r)
                .map(|i| (0..r).fold(ctx.zero(), |acc, k| ctx.add(&acc, &ctx.mul(a.get(i, k), &s[k]))))
                .collect();
        }
        // new[i] = sum_k col[i-k] * poly[k]
        let next: Vec<RingElem> = (0..r + 2)
            .map(|i| (0..=i.min(r)).fold(ctx.zero(), |acc, k| ctx.add(&acc, &ctx.mul(&col[i - k], &poly[k]))))
            .collect();
        poly = next;
    }
    poly.reverse();
    Ok(RingPoly::new(poly))
}
