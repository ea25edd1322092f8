//! The pair (A, P): A = Z[1/N] for a finitely generated slope group P ≤ Q^×_{>0},
//! the submodule IP·A = δA and the quotient A/(IP·A) = Z/δ.

use crate::error::{Error, Result};
use crate::lattice::Echelon;
use crate::rational::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeGroup {
    generators: Vec<Q>,
    primes: Vec<u64>,
    gen_exps: Vec<Vec<i128>>,
    basis: Vec<Vec<i128>>,
    rank: usize,
    n: BigInt,
    delta: u64,
}

/// Class of an element of A in A/(IP·A), stored as a residue modulo δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetIPA {
    pub residue: u64,
}

impl SlopeGroup {
    pub fn new(generators: Vec<Q>) -> Result<SlopeGroup> {
        if generators.is_empty() {
            return Err(Error::UnsupportedContext("P must be non-trivial".into()));
        }
        let mut nn = BigInt::one();
        let mut delta: i128 = 0;
        for g in &generators {
            if !g.is_positive() || g.is_one() {
                return Err(Error::ParamNotInP(fmt_q(g)));
            }
            let num = g.numer();
            let den = g.denom();
            nn *= num * den;
            let diff = (num - den)
                .to_i128()
                .ok_or_else(|| Error::UnsupportedContext("generator too large".into()))?;
            delta = egcd(delta, diff).0;
        }
        let nu = nn
            .to_u64()
            .ok_or_else(|| Error::UnsupportedContext("N exceeds 64 bits".into()))?;
        let primes = prime_factors(nu);
        let gen_exps: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| {
                let (a, _) = split_over(g.numer(), &primes);
                let (b, _) = split_over(g.denom(), &primes);
                a.iter().zip(&b).map(|(x, y)| (*x - *y) as i128).collect()
            })
            .collect();
        let ech = Echelon::new(&gen_exps, primes.len());
        let basis = ech.h[..ech.rank()].to_vec();
        let delta = delta as u64;
        if primes.iter().any(|p| delta % p == 0) {
            return Err(Error::UnsupportedContext(format!(
                "delta = {delta} shares a prime with N"
            )));
        }
        Ok(SlopeGroup {
            rank: ech.rank(),
            generators,
            primes,
            gen_exps,
            basis,
            n: nn,
            delta,
        })
    }

    pub fn from_ints(gens: &[i64]) -> Result<SlopeGroup> {
        SlopeGroup::new(gens.iter().map(|&g| qi(g)).collect())
    }

    pub fn generators(&self) -> &[Q] {
        &self.generators
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Rank of P as an abelian group.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_basis(&self) -> bool {
        self.rank == self.generators.len()
    }

    /// Column-reduced basis of the exponent lattice of P (columns over the primes of N).
    pub fn exponent_lattice_basis(&self) -> &[Vec<i128>] {
        &self.basis
    }

    pub fn in_a(&self, x: &Q) -> bool {
        split_over(x.denom(), &self.primes).1.is_one()
    }

    fn check_a(&self, x: &Q) -> Result<()> {
        if self.in_a(x) {
            Ok(())
        } else {
            Err(Error::NotInA(fmt_q(x)))
        }
    }

    /// Prime-exponent vector of a positive rational over the primes of N, if it has no other primes.
    pub fn prime_exponents(&self, x: &Q) -> Option<Vec<i128>> {
        if !x.is_positive() {
            return None;
        }
        let (a, ra) = split_over(x.numer(), &self.primes);
        let (b, rb) = split_over(x.denom(), &self.primes);
        (ra.is_one() && rb.is_one())
            .then(|| a.iter().zip(&b).map(|(x, y)| (*x - *y) as i128).collect())
    }

    pub fn in_p(&self, x: &Q) -> bool {
        match self.prime_exponents(x) {
            Some(v) => Echelon::new(&self.gen_exps, self.primes.len()).solve(&v).is_some(),
            None => false,
        }
    }

    /// Coordinates of x in the generators; requires the generators to be a basis of P.
    pub fn p_exponents(&self, x: &Q) -> Result<Vec<i64>> {
        if !self.is_basis() {
            return Err(Error::DependentGenerators);
        }
        let v = self.prime_exponents(x).ok_or_else(|| Error::NotInP(fmt_q(x)))?;
        let sol = Echelon::new(&self.gen_exps, self.primes.len())
            .solve(&v)
            .ok_or_else(|| Error::NotInP(fmt_q(x)))?;
        Ok(sol.into_iter().map(|e| e as i64).collect())
    }

    pub fn from_exponents(&self, e: &[i64]) -> Q {
        self.generators
            .iter()
            .zip(e)
            .fold(one(), |acc, (g, &k)| acc * qpow(g, k))
    }

    pub fn coset(&self, a: &Q) -> Result<CosetIPA> {
        self.check_a(a)?;
        if self.delta == 1 {
            return Ok(CosetIPA { residue: 0 });
        }
        let d = self.delta as i128;
        let u = big_mod(a.numer(), self.delta) as i128;
        let v = big_mod(a.denom(), self.delta) as i128;
        let vinv = mod_inv(v, d).expect("denominators of A are units mod delta");
        Ok(CosetIPA {
            residue: (u * vinv).rem_euclid(d) as u64,
        })
    }

    pub fn in_ipa(&self, a: &Q) -> Result<bool> {
        Ok(self.coset(a)?.residue == 0)
    }

    /// Writes a ∈ IP·A as Σ (p_i − 1)·b_i with b_i ∈ A, via δ = Σ c_i (n_i − d_i).
    pub fn express_in_ipa(&self, a: &Q) -> Result<Vec<(Q, Q)>> {
        if !self.in_ipa(a)? {
            return Err(Error::NotInIPA(fmt_q(a)));
        }
        if a.is_zero() {
            return Ok(Vec::new());
        }
        let mut g: i128 = 0;
        let mut coeffs: Vec<i128> = Vec::new();
        for p in &self.generators {
            let diff = (p.numer() - p.denom()).to_i128().unwrap();
            let (ng, x, y) = egcd(g, diff);
            for c in coeffs.iter_mut() {
                *c *= x;
            }
            coeffs.push(y);
            g = ng;
        }
        let a_over_delta = a / qi(self.delta as i64);
        let mut out = Vec::new();
        for (p, c) in self.generators.iter().zip(coeffs) {
            if c != 0 {
                let b = Q::from_integer(BigInt::from(c) * p.denom()) * &a_over_delta;
                out.push((p.clone(), b));
            }
        }
        Ok(out)
    }

    /// Basis of Aut_o(A) = U(A) ∩ R_{>0}: the primes dividing N.
    pub fn aut_o_basis(&self) -> Vec<u64> {
        self.primes.clone()
    }

    /// Minimal k ≥ 1 with (s^k − 1)·b ∈ IP·A.
    pub fn q_b_order(&self, s: &Q, b: &Q) -> Result<u64> {
        if self.prime_exponents(s).is_none() {
            return Err(Error::NotInAutO(fmt_q(s)));
        }
        self.check_a(b)?;
        let mut sk = s.clone();
        for k in 1..=self.delta.max(1) {
            if self.in_ipa(&((&sk - one()) * b))? {
                return Ok(k);
            }
            sk *= s;
        }
        unreachable!("the order of s modulo delta divides phi(delta)")
    }

    /// Orbits of Aut_o(A) acting multiplicatively on Z/δ; residue 0 stands for the class of δ.
    pub fn interval_iso_classes(&self) -> Vec<Vec<u64>> {
        let d = self.delta;
        let mut seen = vec![false; d as usize];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start as usize] = true;
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for &p in &self.primes {
                    for m in [p % d, mod_inv((p % d) as i128, d as i128).unwrap() as u64] {
                        let y = ((x as u128 * m as u128) % d as u128) as u64;
                        if !seen[y as usize] {
                            seen[y as usize] = true;
                            orbit.push(y);
                        }
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// An element of A strictly between lo and hi (lo < hi).
    pub fn a_point_between(&self, lo: &Q, hi: &Q) -> Q {
        self.scaled_point_between(lo, hi, 1)
    }

    /// An element of δA (= IP·A) strictly between lo and hi.
    pub fn ipa_point_between(&self, lo: &Q, hi: &Q) -> Q {
        self.scaled_point_between(lo, hi, self.delta)
    }

    fn scaled_point_between(&self, lo: &Q, hi: &Q, scale: u64) -> Q {
        assert!(lo < hi);
        let n = Q::from_integer(self.n.clone());
        let mut h = qi(scale as i64);
        loop {
            let k = floor(&(lo / &h)) + BigInt::one();
            let x = Q::from_integer(k) * &h;
            if &x < hi {
                return x;
            }
            h /= &n;
        }
    }
}

impl CosetIPA {
    pub fn add(self, other: CosetIPA, delta: u64) -> CosetIPA {
        CosetIPA {
            residue: (self.residue + other.residue) % delta.max(1),
        }
    }
}

/// Greatest common divisor of two non-negative integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
