//! Brute-force point counts of `y^2 = Q(x)` over `F_p` and `F_(p^2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::is_prime;

/// Largest field size counted.
pub const COUNT_CAP: u64 = 1_000_000;

fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Number of `y` in `F_p` with `y^2 = z`.
fn roots_of(z: u64, p: u64) -> u64 {
    if z == 0 {
        1
    } else if powmod(z, (p - 1) / 2, p) == 1 {
        2
    } else {
        0
    }
}

/// Least quadratic non-residue mod `p`.
pub fn least_non_residue(p: u64) -> u64 {
    (2..p)
        .find(|&d| roots_of(d, p) == 0)
        .expect("odd prime has a non-residue")
}

/// Projective points on the odd-degree model: affine solutions plus one at infinity.
pub fn point_count_naive(p: u64, q: &[BigInt], k: u32) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if q.is_empty() {
        return Err(Error::EvenDegreeOrNotMonic("empty polynomial".into()));
    }
    if !(1..=2).contains(&k) {
        return Err(Error::MalformedRequest(format!(
            "extension degree {k} (supported: 1, 2)"
        )));
    }
    let size = (p as u128).pow(k);
    if size > COUNT_CAP as u128 {
        return Err(Error::TooLarge(size));
    }
    let c: Vec<u64> = q.iter().map(|x| reduce(x, p)).collect();
    let affine = if k == 1 {
        count_prime_field(&c, p)
    } else {
        count_quadratic(&c, p)
    };
    Ok(affine + 1)
}

fn count_prime_field(c: &[u64], p: u64) -> u64 {
    (0..p)
        .map(|x| {
            let z = c.iter().rev().fold(0, |acc, &ci| (mulmod(acc, x, p) + ci) % p);
            roots_of(z, p)
        })
        .sum()
}

/// `F_(p^2) = F_p[u]/(u^2 - d)`; `z` is a nonzero square iff its norm is.
fn count_quadratic(c: &[u64], p: u64) -> u64 {
    let d = least_non_residue(p);
    let mul = |(a, b): (u64, u64), (e, f): (u64, u64)| {
        (
            (mulmod(a, e, p) + mulmod(mulmod(b, f, p), d, p)) % p,
            (mulmod(a, f, p) + mulmod(b, e, p)) % p,
        )
    };
    let mut total = 0;
    for a in 0..p {
        for b in 0..p {
            let z = c.iter().rev().fold((0, 0), |acc, &ci| {
                let (s, t) = mul(acc, (a, b));
                ((s + ci) % p, t)
            });
            total += if z == (0, 0) {
                1
            } else {
                let norm = (mulmod(z.0, z.0, p) + p - mulmod(mulmod(z.1, z.1, p), d, p)) % p;
                if roots_of(norm, p) == 2 {
                    2
                } else {
                    0
                }
            };
        }
    }
    total
}

/// Exact `a_0..a_(2g)` from `#C(F_(p^k))`, `k = 1..=g`, by Newton's identities
/// and the functional equation.
pub fn zeta_from_counts(p: u64, counts: &[u64]) -> Vec<BigInt> {
    let g = counts.len();
    let s: Vec<BigInt> = counts
        .iter()
        .enumerate()
        .map(|(k, &n)| BigInt::from(p).pow(k as u32 + 1) + 1 - BigInt::from(n))
        .collect();
    let mut a = vec![BigInt::from(1)];
    for k in 1..=g {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc -= &s[i - 1] * &a[k - i];
        }
        a.push(acc / BigInt::from(k));
    }
    for i in (0..g).rev() {
        let v = &a[i] * BigInt::from(p).pow((g - i) as u32);
        a.push(v);
    }
    a
}
