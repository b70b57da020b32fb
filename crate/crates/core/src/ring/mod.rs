//! Fixed-precision arithmetic in `Z/p^e`.
//!
//! Elements are plain canonical residues; every operation goes through the
//! [`RingCtx`] that owns the modulus, in the style of a ring object. Division
//! by non-units is supported through [`RingCtx::div_exact`], which loses the
//! top `v_p(divisor)` digits of the quotient.

mod matrix;
mod poly;

pub use matrix::{charpoly_berkowitz, RingMatrix};
pub use poly::{int_poly_mul, poly_eval_multi, RingPoly};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical residue in `[0, p^e)`. Carries no modulus of its own.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(BigUint);

impl RingElem {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::fmt::Display for RingElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// The residue ring `Z/p^e` for an odd prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingCtx {
    p: u64,
    e: u32,
    modulus: BigUint,
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    primal_check::miller_rabin(n)
}

impl RingCtx {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if e == 0 {
            return Err(Error::BadExponent(0));
        }
        Ok(RingCtx {
            p,
            e,
            modulus: BigUint::from(p).pow(e),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Same prime, different precision.
    pub fn with_exponent(&self, e: u32) -> Result<Self> {
        RingCtx::new(self.p, e)
    }

    pub fn zero(&self) -> RingElem {
        RingElem(BigUint::zero())
    }

    pub fn one(&self) -> RingElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> RingElem {
        RingElem(BigUint::from(v) % &self.modulus)
    }

    pub fn from_biguint(&self, v: &BigUint) -> RingElem {
        RingElem(v % &self.modulus)
    }

    pub fn from_bigint(&self, v: &BigInt) -> RingElem {
        let m = BigInt::from_biguint(Sign::Plus, self.modulus.clone());
        let r = v.mod_floor(&m);
        RingElem(r.to_biguint().expect("mod_floor is non-negative"))
    }

    pub fn from_i64(&self, v: i64) -> RingElem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_i128(&self, v: i128) -> RingElem {
        self.from_bigint(&BigInt::from(v))
    }

    /// Embed a residue from another precision via its least non-negative representative.
    pub fn lift(&self, a: &RingElem) -> RingElem {
        self.from_biguint(&a.0)
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let s = &a.0 + &b.0;
        if s >= self.modulus {
            RingElem(s - &self.modulus)
        } else {
            RingElem(s)
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if a.0 >= b.0 {
            RingElem(&a.0 - &b.0)
        } else {
            RingElem(&self.modulus - &b.0 + &a.0)
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        if a.0.is_zero() {
            a.clone()
        } else {
            RingElem(&self.modulus - &a.0)
        }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem((&a.0 * &b.0) % &self.modulus)
    }

    pub fn mul_u64(&self, a: &RingElem, k: u64) -> RingElem {
        RingElem((&a.0 * k) % &self.modulus)
    }

    /// Reduce an unreduced non-negative integer (e.g. an accumulated dot product).
    pub fn reduce(&self, v: BigUint) -> RingElem {
        RingElem(v % &self.modulus)
    }

    pub fn pow(&self, a: &RingElem, k: u64) -> RingElem {
        RingElem(a.0.modpow(&BigUint::from(k), &self.modulus))
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        !(&a.0 % self.p).is_zero()
    }

    pub fn inv_unit(&self, a: &RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit(a.to_string()));
        }
        a.0.modinv(&self.modulus)
            .map(RingElem)
            .ok_or_else(|| Error::NotAUnit(a.to_string()))
    }

    /// Largest `v <= e` with `p^v` dividing the canonical representative; `e` for zero.
    pub fn valuation(&self, a: &RingElem) -> u32 {
        if a.0.is_zero() {
            return self.e;
        }
        let mut v = 0;
        let mut x = a.0.clone();
        loop {
            let (q, r) = x.div_rem(&BigUint::from(self.p));
            if !r.is_zero() || v == self.e {
                return v;
            }
            x = q;
            v += 1;
        }
    }

    /// Returns some `c` with `b*c = a (mod p^(e-v))`, `v = v_p(b)`, as the least
    /// representative of `(a/p^v) * (b/p^v)^-1` computed in `Z/p^(e-v)`.
    pub fn div_exact(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        let vb = self.valuation(b);
        let va = self.valuation(a);
        if a.is_zero() {
            return Ok(self.zero());
        }
        if vb > va || vb >= self.e {
            return Err(Error::DivisibilityViolated {
                dividend_val: va,
                divisor_val: vb,
            });
        }
        if vb == 0 {
            return Ok(self.mul(a, &self.inv_unit(b)?));
        }
        let pv = BigUint::from(self.p).pow(vb);
        let m = BigUint::from(self.p).pow(self.e - vb);
        let an = &a.0 / &pv;
        let bn = &b.0 / &pv;
        let inv = bn.modinv(&m).ok_or_else(|| Error::NotAUnit(b.to_string()))?;
        Ok(RingElem((an * inv) % m))
    }

    /// Balanced representative in `(-p^e/2, p^e/2]`.
    pub fn signed_lift(&self, a: &RingElem) -> BigInt {
        let v = BigInt::from_biguint(Sign::Plus, a.0.clone());
        let m = BigInt::from_biguint(Sign::Plus, self.modulus.clone());
        if &v * 2 > m {
            v - m
        } else {
            v
        }
    }

    /// Inverses of `1..=n` (all must be units).
    pub fn small_inverses(&self, n: u64) -> Result<Vec<RingElem>> {
        let vals: Vec<RingElem> = (1..=n).map(|k| self.from_u64(k)).collect();
        self.batch_inverse(&vals)
    }

    /// Montgomery's simultaneous inversion; one modular inverse for the whole slice.
    pub fn batch_inverse(&self, vals: &[RingElem]) -> Result<Vec<RingElem>> {
        if vals.is_empty() {
            return Ok(Vec::new());
        }
        let mut prefix = Vec::with_capacity(vals.len());
        let mut acc = self.one();
        for v in vals {
            if !self.is_unit(v) {
                return Err(Error::NotAUnit(v.to_string()));
            }
            acc = self.mul(&acc, v);
            prefix.push(acc.clone());
        }
        let mut inv = self.inv_unit(&acc)?;
        let mut out = vec![self.zero(); vals.len()];
        for i in (0..vals.len()).rev() {
            out[i] = if i == 0 {
                inv.clone()
            } else {
                self.mul(&inv, &prefix[i - 1])
            };
            inv = self.mul(&inv, &vals[i]);
        }
        Ok(out)
    }

    pub fn to_u64(&self, a: &RingElem) -> Option<u64> {
        a.0.to_u64()
    }

    pub fn is_one(&self, a: &RingElem) -> bool {
        a.0.is_one() || (self.modulus.is_one() && a.0.is_zero())
    }
}
