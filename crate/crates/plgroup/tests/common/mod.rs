#![allow(dead_code)]

use plgroup::plmap::{basic_bounded, PLMap};
use plgroup::rational::*;
use plgroup::subdivide::{from_code, interpolate, CodeSeq};
use plgroup::Q;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A random code with the given arities, cut at random positions.
pub fn random_code(arities: &[u64], rng: &mut ChaCha8Rng) -> CodeSeq {
    let mut leaves = 1usize;
    let mut steps = Vec::new();
    for &p in arities {
        steps.push((rng.gen_range(1..=leaves), p));
        leaves += p as usize - 1;
    }
    CodeSeq::new(steps)
}

/// Interpolation of two random 𝒫-regular subdivisions with the same number of pieces.
pub fn random_tree_element(pp: &[u64], splits: usize, rng: &mut ChaCha8Rng) -> PLMap {
    let arities: Vec<u64> = (0..splits).map(|_| *pp.choose(rng).unwrap()).collect();
    let mut shuffled = arities.clone();
    shuffled.shuffle(rng);
    let d = from_code(&random_code(&arities, rng)).unwrap();
    let d2 = from_code(&random_code(&shuffled, rng)).unwrap();
    interpolate(&d, &d2).unwrap()
}

/// A random point of Z[1/n] strictly inside (lo, hi) with denominator n^k.
pub fn random_point(lo: &Q, hi: &Q, n: i64, k: u32, rng: &mut ChaCha8Rng) -> Q {
    let den = n.pow(k);
    let a = (lo * qi(den)).ceil().to_integer();
    let b = (hi * qi(den)).floor().to_integer();
    let a: i64 = a.try_into().unwrap();
    let b: i64 = b.try_into().unwrap();
    q(rng.gen_range(a + 1..b), den)
}

/// A random b(a,Δ;p) with support inside [lo, hi].
pub fn random_bounded(lo: &Q, hi: &Q, n: i64, slopes: &[Q], rng: &mut ChaCha8Rng) -> PLMap {
    loop {
        let p = slopes.choose(rng).unwrap().clone();
        let a = random_point(lo, hi, n, 3, rng);
        let d = q(1, n.pow(rng.gen_range(2..5)));
        if &a + (&p + one()) * &d < *hi {
            return basic_bounded(&a, &d, &p);
        }
    }
}

/// Membership in IP·A by closing the integer steps (p−1)b under ± instead of using δ.
///
/// With N the product of all numerators and denominators of the generators and
/// b = c/N^K, every (n/d − 1)b becomes an integer multiple of |n−d|·N/d after scaling by
/// N^(K+1), so a ∈ IP·A iff a·N^(K+1) lies in the additive closure of those steps for
/// some K. The closure is enumerated as residues modulo the first step.
pub fn ipa_oracle(a: &Q, gens: &[Q]) -> bool {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, ToPrimitive, Zero};
    let n: BigInt = gens.iter().fold(BigInt::one(), |acc, g| acc * g.numer() * g.denom());
    let steps: Vec<BigInt> = gens.iter().map(|g| (g.numer() - g.denom()).abs() * &n / g.denom()).collect();
    let m = steps[0].to_u64().unwrap();
    let mut reach = vec![false; m as usize];
    reach[0] = true;
    let mut stack = vec![0u64];
    while let Some(r) = stack.pop() {
        for s in &steps[1..] {
            let s = (s % m).to_u64().unwrap();
            for nxt in [(r + s) % m, (r + m - s) % m] {
                if !reach[nxt as usize] {
                    reach[nxt as usize] = true;
                    stack.push(nxt);
                }
            }
        }
    }
    let mut scaled = a * Q::from_integer(n.clone());
    for _ in 0..8 {
        if scaled.is_integer() {
            let r = scaled.to_integer() % BigInt::from(m);
            let r = if r.is_negative() { r + BigInt::from(m) } else { r };
            if reach[r.to_usize().unwrap()] {
                return true;
            }
        }
        scaled *= Q::from_integer(n.clone());
    }
    debug_assert!(!a.is_zero());
    false
}

/// (m, n, c, d, e) of a finite-index Q ≤ Z² by listing Q modulo det·Z², where det is the
/// determinant of the first two generators.
pub fn lattice_oracle(gens: &[(i64, i64)]) -> (i64, i64, i64, Vec<i64>, Vec<i64>) {
    let det = (gens[0].0 * gens[1].1 - gens[0].1 * gens[1].0).abs();
    assert!(det > 0);
    let md = |x: i64| x.rem_euclid(det);
    let mut inq = vec![vec![false; det as usize]; det as usize];
    inq[0][0] = true;
    let mut stack = vec![(0i64, 0i64)];
    while let Some((x, y)) = stack.pop() {
        for &(gx, gy) in gens {
            for s in [1, -1] {
                let (u, v) = (md(x + s * gx), md(y + s * gy));
                if !inq[u as usize][v as usize] {
                    inq[u as usize][v as usize] = true;
                    stack.push((u, v));
                }
            }
        }
    }
    let has = |x: i64, y: i64| inq[md(x) as usize][md(y) as usize];
    let size = inq.iter().flatten().filter(|b| **b).count() as i64;
    let index = det * det / size;
    let m = (1..=det).find(|&x| (0..det).any(|y| has(x, y))).unwrap();
    let n = (1..=det).find(|&y| (0..det).any(|x| has(x, y))).unwrap();
    let m1 = (1..=det).find(|&x| has(x, 0)).unwrap();
    let n1 = (1..=det).find(|&y| has(0, y)).unwrap();
    let c = m1 * n1 / index;
    assert_eq!((m1, n1), (c * m, c * n), "Q₁ and Q₂ have the predicted generators");
    let ds = (0..c).filter(|&d| has(d * m, n)).collect();
    let es = (0..c).filter(|&e| has(m, e * n)).collect();
    (m, n, c, ds, es)
}

/// Rank over Z of a list of integer vectors, by exact row reduction over Q.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != zero()) else { continue };
        m.swap(rank, p);
        let piv = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != zero() {
                let f = &row[c] / &piv[c];
                for (x, y) in row.iter_mut().zip(&piv) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}
