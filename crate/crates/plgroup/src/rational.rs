//! Exact rationals and the small integer helpers shared by the other modules.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses "n", "n/d" or "-n/d". Decimal points are rejected so that input stays exact.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn qpow(x: &Q, e: i64) -> Q {
    let mut r = one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        r *= &base;
    }
    r
}

pub fn floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn min_q(a: &Q, b: &Q) -> Q {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max_q(a: &Q, b: &Q) -> Q {
    if a >= b { a.clone() } else { b.clone() }
}

/// Prime factors of n (n ≥ 1) by trial division, ascending, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Removes from |n| every factor among `primes`; returns the exponent of each and the cofactor.
pub fn split_over(n: &BigInt, primes: &[u64]) -> (Vec<i64>, BigInt) {
    let mut m = n.abs();
    let mut exps = vec![0i64; primes.len()];
    for (i, &p) in primes.iter().enumerate() {
        let bp = BigInt::from(p);
        loop {
            let (quo, rem) = m.div_rem(&bp);
            if !rem.is_zero() || m.is_zero() {
                break;
            }
            m = quo;
            exps[i] += 1;
        }
    }
    (exps, m)
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}

/// Extended gcd on signed integers: returns (g ≥ 0, x, y) with a x + b y = g.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qq = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - qq * r1);
        (s0, s1) = (s1, s0 - qq * s1);
        (t0, t1) = (t1, t0 - qq * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Modular inverse of a modulo m (m ≥ 1), if it exists.
pub fn mod_inv(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Reduces a big integer modulo a small positive modulus.
pub fn big_mod(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap_or(0)
}
