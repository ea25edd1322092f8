//! Infinitary PL homeomorphisms with self-similar tails, conjugation by them, and the
//! finite-index lattices Q ≤ Z² that classify subgroups above B for cyclic P.

use crate::construct::map_interval;
use crate::error::{Error, Result};
use crate::plmap::{AffineMap, PLMap};
use crate::rational::*;
use crate::ring::SlopeGroup;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Left,
    Right,
}

/// Beyond `threshold` (in `direction`) the map satisfies f(β(t)) = α(f(t)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailRule {
    pub threshold: Q,
    pub beta: AffineMap,
    pub alpha: AffineMap,
    pub direction: Dir,
}

impl TailRule {
    fn fixed_point(a: &AffineMap) -> Option<Q> {
        if a.slope.is_one() {
            None
        } else {
            Some(&a.offset / (one() - &a.slope))
        }
    }

    /// Accumulation point of the unrolled domain, if finite.
    pub fn domain_limit(&self) -> Option<Q> {
        TailRule::fixed_point(&self.beta)
    }

    pub fn range_limit(&self) -> Option<Q> {
        TailRule::fixed_point(&self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    /// Continue with the outermost affine piece of the core.
    Affine,
    /// The domain ends at the outermost core vertex.
    Stop,
    Rule(TailRule),
}

/// An increasing homeomorphism given by a finite core and a rule on each side.
#[derive(Debug, Clone)]
pub struct TailMap {
    core: Vec<(Q, Q)>,
    left: Side,
    right: Side,
}

fn reflect_affine(a: &AffineMap, b: &Q) -> AffineMap {
    AffineMap::new(a.slope.clone(), b - &a.slope * b - &a.offset)
}

impl TailMap {
    pub fn new(core: Vec<(Q, Q)>, left: Side, right: Side) -> Result<TailMap> {
        let bad = |m: &str| Error::BadParameters(m.into());
        if core.len() < 2 || core.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
            return Err(bad("core must have at least two strictly increasing points"));
        }
        let tm = TailMap { core, left, right };
        for (side, dir) in [(&tm.left, Dir::Left), (&tm.right, Dir::Right)] {
            let Side::Rule(r) = side else { continue };
            let (x0, xn) = (&tm.core[0].0, &tm.core.last().unwrap().0);
            let thr = if dir == Dir::Left { x0 } else { xn };
            if r.direction != dir || &r.threshold != thr {
                return Err(bad("tail rule must start at the matching end of the core"));
            }
            let back = r.beta.inverse().apply(thr);
            let outward = if dir == Dir::Left { back > *thr } else { back < *thr };
            if !outward || back < *x0 || back > *xn {
                return Err(bad("β must move outward and the core must contain a fundamental domain"));
            }
            let fb = tm.core_eval(&back);
            if r.alpha.apply(&fb) != tm.core_eval(thr) {
                return Err(bad("tail rule does not weld to the core"));
            }
        }
        Ok(tm)
    }

    pub fn core(&self) -> &[(Q, Q)] {
        &self.core
    }

    pub fn left(&self) -> &Side {
        &self.left
    }

    pub fn right(&self) -> &Side {
        &self.right
    }

    fn core_eval(&self, t: &Q) -> Q {
        let c = &self.core;
        let i = c.partition_point(|(x, _)| x <= t).clamp(1, c.len() - 1);
        let ((x0, y0), (x1, y1)) = (&c[i - 1], &c[i]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    fn side(&self, d: Dir) -> &Side {
        if d == Dir::Left { &self.left } else { &self.right }
    }

    fn end(&self, d: Dir) -> &(Q, Q) {
        if d == Dir::Left { &self.core[0] } else { self.core.last().unwrap() }
    }

    /// Whether t lies in the (closed where attained) domain.
    pub fn in_domain(&self, t: &Q) -> bool {
        for d in [Dir::Left, Dir::Right] {
            let (e, _) = self.end(d);
            let beyond = if d == Dir::Left { t < e } else { t > e };
            if !beyond {
                continue;
            }
            match self.side(d) {
                Side::Affine => {}
                Side::Stop => return false,
                Side::Rule(r) => {
                    if let Some(l) = r.domain_limit() {
                        let attained = r.range_limit().is_some();
                        let outside = if d == Dir::Left { t < &l } else { t > &l };
                        if outside || (t == &l && !attained) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn eval(&self, t: &Q) -> Result<Q> {
        if !self.in_domain(t) {
            return Err(Error::SupportOutside);
        }
        for d in [Dir::Left, Dir::Right] {
            let (e, _) = self.end(d);
            let beyond = if d == Dir::Left { t < e } else { t > e };
            if !beyond {
                continue;
            }
            match self.side(d) {
                Side::Stop => unreachable!(),
                Side::Affine => {
                    let c = &self.core;
                    let (a, b) = if d == Dir::Left { (&c[0], &c[1]) } else { (&c[c.len() - 2], &c[c.len() - 1]) };
                    let s = (&b.1 - &a.1) / (&b.0 - &a.0);
                    return Ok(&a.1 + s * (t - &a.0));
                }
                Side::Rule(r) => {
                    if r.domain_limit().as_ref() == Some(t) {
                        return r.range_limit().ok_or(Error::NotEventuallyAffine);
                    }
                    let binv = r.beta.inverse();
                    let mut x = t.clone();
                    let mut n = 0u32;
                    while if d == Dir::Left { &x < e } else { &x > e } {
                        x = binv.apply(&x);
                        n += 1;
                    }
                    let mut y = self.core_eval(&x);
                    for _ in 0..n {
                        y = r.alpha.apply(&y);
                    }
                    return Ok(y);
                }
            }
        }
        Ok(self.core_eval(t))
    }

    pub fn inverse(&self) -> TailMap {
        let flip = |s: &Side| match s {
            Side::Rule(r) => Side::Rule(TailRule {
                threshold: self.core_eval(&r.threshold),
                beta: r.alpha.clone(),
                alpha: r.beta.clone(),
                direction: r.direction,
            }),
            other => other.clone(),
        };
        TailMap {
            core: self.core.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            left: flip(&self.left),
            right: flip(&self.right),
        }
    }

    /// t ↦ b − tm(b − t), the conjugate by the reflection of [0,b].
    pub fn reflect(&self, b: &Q) -> TailMap {
        let refl = |s: &Side| match s {
            Side::Rule(r) => Side::Rule(TailRule {
                threshold: b - &r.threshold,
                beta: reflect_affine(&r.beta, b),
                alpha: reflect_affine(&r.alpha, b),
                direction: if r.direction == Dir::Left { Dir::Right } else { Dir::Left },
            }),
            other => other.clone(),
        };
        TailMap {
            core: self.core.iter().rev().map(|(x, y)| (b - x, b - y)).collect(),
            left: refl(&self.right),
            right: refl(&self.left),
        }
    }

    /// Domain vertices: the core points plus K unrolled periods on each rule side.
    fn unrolled_vertices(&self, from: u32, to: u32) -> Vec<Q> {
        let mut out = Vec::new();
        if from == 0 {
            out.extend(self.core.iter().map(|(x, _)| x.clone()));
        }
        for d in [Dir::Left, Dir::Right] {
            let Side::Rule(r) = self.side(d) else { continue };
            let thr = &r.threshold;
            let back = r.beta.inverse().apply(thr);
            let fundamental: Vec<Q> = self
                .core
                .iter()
                .map(|(x, _)| x.clone())
                .filter(|x| if d == Dir::Left { x >= thr && x <= &back } else { x <= thr && x >= &back })
                .collect();
            for x in fundamental {
                let mut y = x;
                for n in 1..=to {
                    y = r.beta.apply(&y);
                    if n >= from.max(1) {
                        out.push(y.clone());
                    }
                }
            }
        }
        out
    }
}

/// The embedding [0,∞) → [0,b) interpolating (j(p−1)b, (1−p^{−j})b), p > 1.
pub fn make_phi1(b: &Q, p: &Q) -> Result<TailMap> {
    positive(b)?;
    if *p <= one() {
        return Err(Error::BadParameters("this map takes the generator p > 1".into()));
    }
    let step = (p - one()) * b;
    TailMap::new(
        vec![(zero(), zero()), (step.clone(), (one() - p.recip()) * b)],
        Side::Stop,
        Side::Rule(TailRule {
            threshold: step.clone(),
            beta: AffineMap::translation(step),
            alpha: AffineMap::new(p.recip(), b - b / p),
            direction: Dir::Right,
        }),
    )
}

/// R → (0,∞) interpolating (−j(p−1)b, p^{−j}b) and translating by b on [0,∞), p > 1.
pub fn make_psi2(b: &Q, p: &Q) -> Result<TailMap> {
    positive(b)?;
    if *p <= one() {
        return Err(Error::BadParameters("this map takes the generator p > 1".into()));
    }
    let step = (p - one()) * b;
    TailMap::new(
        vec![(-&step, b / p), (zero(), b.clone()), (one(), b + one())],
        Side::Rule(TailRule {
            threshold: -&step,
            beta: AffineMap::translation(-step),
            alpha: AffineMap::scaling(p.recip()),
            direction: Dir::Left,
        }),
        Side::Affine,
    )
}

/// ]0,b] → ]0,b̄] commuting with t ↦ pt, for the generator p < 1 and pb < b̄ < b.
pub fn make_e07(b: &Q, bbar: &Q, p: &Q) -> Result<TailMap> {
    below_one(p)?;
    if !(p * b < *bbar && bbar < b && b.is_positive()) {
        return Err(Error::BadParameters("need 0 < pb < b̄ < b".into()));
    }
    TailMap::new(
        vec![(p * b, p * bbar), (bbar.clone(), bbar + p * (bbar - b)), (b.clone(), bbar.clone())],
        Side::Rule(TailRule {
            threshold: p * b,
            beta: AffineMap::scaling(p.clone()),
            alpha: AffineMap::scaling(p.clone()),
            direction: Dir::Left,
        }),
        Side::Stop,
    )
}

/// ]0,b] → ]0,b] fixing b and sending each p^j b to p^{mj} b, p < 1; on [pb, b] it is the
/// map_interval element taking [pb, b] onto [p^m b, b].
pub fn make_mu_m(m: u32, b: &Q, p: &Q) -> Result<TailMap> {
    below_one(p)?;
    positive(b)?;
    if m == 0 {
        return Err(Error::BadParameters("m must be positive".into()));
    }
    let pm = qpow(p, m as i64);
    let core = if m == 1 {
        vec![(p * b, p * b), (b.clone(), b.clone())]
    } else {
        let slopes = SlopeGroup::new(vec![p.clone()])?;
        let f = map_interval(&(p * b), b, &(&pm * b), b, &slopes)?;
        let mut pts = vec![(p * b, &pm * b)];
        pts.extend(f.vertices().iter().filter(|(x, _)| x > &(p * b) && x < b).cloned());
        pts.push((b.clone(), b.clone()));
        pts
    };
    TailMap::new(
        core,
        Side::Rule(TailRule {
            threshold: p * b,
            beta: AffineMap::scaling(p.clone()),
            alpha: AffineMap::scaling(pm),
            direction: Dir::Left,
        }),
        Side::Stop,
    )
}

/// The reflection of μ_n's homeomorphism: accumulates at b instead of 0.
pub fn make_nu_n(n: u32, b: &Q, p: &Q) -> Result<TailMap> {
    Ok(make_mu_m(n, b, p)?.reflect(b))
}

fn positive(b: &Q) -> Result<()> {
    if b.is_positive() { Ok(()) } else { Err(Error::BadParameters("b must be positive".into())) }
}

fn below_one(p: &Q) -> Result<()> {
    if p.is_positive() && *p < one() {
        Ok(())
    } else {
        Err(Error::BadParameters("this map takes the generator 0 < p < 1".into()))
    }
}

/// tm ∘ f ∘ tm⁻¹ as a finitary map (identity outside the range of tm).
pub fn conj(tm: &TailMap, f: &PLMap) -> Result<PLMap> {
    let inv = tm.inverse();
    for d in [Dir::Left, Dir::Right] {
        let fixed = match tm.side(d) {
            Side::Stop => Some(tm.end(d).0.clone()),
            Side::Rule(r) => r.domain_limit(),
            Side::Affine => None,
        };
        if let Some(e) = fixed {
            if f.eval(&e) != e {
                return Err(Error::SupportOutside);
            }
        }
    }
    let h = |y: &Q| -> Result<Q> {
        if !inv.in_domain(y) {
            return Ok(y.clone());
        }
        let x = f.eval(&inv.eval(y)?);
        tm.eval(&x)
    };
    let mut k = 4u32;
    while k <= 256 {
        if let Some(g) = conj_window(tm, f, k, &h)? {
            return Ok(g);
        }
        k *= 2;
    }
    Err(Error::NotEventuallyAffine)
}

fn conj_window(tm: &TailMap, f: &PLMap, k: u32, h: &dyn Fn(&Q) -> Result<Q>) -> Result<Option<PLMap>> {
    let verts = tm.unrolled_vertices(0, k);
    let mut ys: Vec<Q> = Vec::new();
    for v in &verts {
        ys.push(tm.eval(v)?);
        let u = f.eval_inverse(v);
        if tm.in_domain(&u) {
            ys.push(tm.eval(&u)?);
        }
    }
    for u in f.breaks() {
        if tm.in_domain(&u) {
            ys.push(tm.eval(&u)?);
        }
    }
    // Range ends where the result is extended by the identity.
    let mut walls: [Option<Q>; 2] = [None, None];
    for (i, d) in [Dir::Left, Dir::Right].into_iter().enumerate() {
        walls[i] = match tm.side(d) {
            Side::Stop => Some(tm.end(d).1.clone()),
            Side::Rule(r) => r.range_limit(),
            Side::Affine => None,
        };
    }
    ys.retain(|y| {
        walls[0].as_ref().is_none_or(|w| y > w) && walls[1].as_ref().is_none_or(|w| y < w)
    });
    ys.sort();
    ys.dedup();
    let mut pts: Vec<(Q, Q)> = Vec::new();
    for y in &ys {
        pts.push((y.clone(), h(y)?));
    }
    if let Some(w) = &walls[0] {
        pts.insert(0, (w.clone(), w.clone()));
    } else {
        let g = &pts[0].0 - one();
        let v = h(&g)?;
        pts.insert(0, (g, v));
    }
    if let Some(w) = &walls[1] {
        pts.push((w.clone(), w.clone()));
    } else {
        let g = &pts.last().unwrap().0 + one();
        let v = h(&g)?;
        pts.push((g, v));
    }
    let slope = |a: &(Q, Q), b: &(Q, Q)| (&b.1 - &a.1) / (&b.0 - &a.0);
    let n = pts.len();
    let ls = if walls[0].is_some() { one() } else { slope(&pts[0], &pts[1]) };
    let rs = if walls[1].is_some() { one() } else { slope(&pts[n - 2], &pts[n - 1]) };
    let g = PLMap::from_points(pts.clone(), ls, rs);
    let mut probes: Vec<Q> = pts.windows(2).map(|w| (&w[0].0 + &w[1].0) / qi(2)).collect();
    for v in tm.unrolled_vertices(k + 1, k + 4) {
        let y = tm.eval(&v)?;
        probes.push(y.clone());
        if let Some(z) = ys.first().filter(|z| &y < *z).or(ys.last().filter(|z| &y > *z)) {
            probes.push((&y + z) / qi(2));
        }
    }
    if walls[0].is_none() {
        probes.push(&pts[0].0 - qi(100));
    }
    if walls[1].is_none() {
        probes.push(&pts[n - 1].0 + qi(100));
    }
    for y in &probes {
        if h(y)? != g.eval(y) {
            return Ok(None);
        }
    }
    Ok(Some(g))
}

/// t ↦ b − f(b − t) for f supported in [0,b].
pub fn reflect_conj(f: &PLMap, b: &Q) -> Result<PLMap> {
    if let Some((lo, hi)) = f.support() {
        let inside = lo.is_some_and(|l| l >= zero()) && hi.is_some_and(|h| &h <= b);
        if !inside {
            return Err(Error::SupportOutside);
        }
    } else {
        return Ok(f.clone());
    }
    let mut pts: Vec<(Q, Q)> = f.vertices().iter().rev().map(|(x, y)| (b - x, b - y)).collect();
    if pts.first().is_none_or(|v| v.0 != zero()) {
        pts.insert(0, (zero(), zero()));
    }
    if pts.last().is_none_or(|v| &v.0 != b) {
        pts.push((b.clone(), b.clone()));
    }
    Ok(PLMap::interpolate_fixed(pts))
}

fn log_p(s: &Q, p: &Q) -> Result<i64> {
    let g = SlopeGroup::new(vec![p.clone()])?;
    Ok(g.p_exponents(s)?[0])
}

/// (log_p σ₋, log_p σ₊) for f ∈ G([0,b];A,⟨p⟩), with the generator p < 1.
pub fn pi(f: &PLMap, p: &Q, b: &Q) -> Result<(i64, i64)> {
    below_one(p)?;
    Ok((log_p(&f.slope_right_of(&zero()), p)?, log_p(&f.slope_left_of(b), p)?))
}

/// π(μ_m(ν_n(f))) = (m j, n ℓ) where (j, ℓ) = π(f).
pub fn pi_of_mu(m: u32, n: u32, f: &PLMap, p: &Q, b: &Q) -> Result<bool> {
    let (j, l) = pi(f, p, b)?;
    let g = conj(&make_mu_m(m, b, p)?, &conj(&make_nu_n(n, b, p)?, f)?)?;
    Ok(pi(&g, p, b)? == (m as i64 * j, n as i64 * l))
}

/// A subgroup of Z² given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSubgroup {
    pub generators: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeParams {
    pub m: i64,
    pub n: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

impl LatticeSubgroup {
    pub fn new(generators: Vec<(i64, i64)>) -> LatticeSubgroup {
        LatticeSubgroup { generators }
    }

    /// Basis (a,0), (b,d) with a, d > 0 and 0 ≤ b < a.
    pub fn hnf(&self) -> Result<(i64, i64, i64)> {
        let mut v: Vec<(i64, i64)> = self.generators.clone();
        let mut top: Option<(i64, i64)> = None;
        loop {
            v.retain(|&(x, y)| x != 0 || y != 0);
            let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i].1 != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    top = Some(v.remove(i));
                }
                break;
            }
            let i = *nz.iter().min_by_key(|&&i| v[i].1.abs()).unwrap();
            let piv = v[i];
            for &j in &nz {
                if j != i {
                    let q = Integer::div_floor(&v[j].1, &piv.1);
                    v[j] = (v[j].0 - q * piv.0, v[j].1 - q * piv.1);
                }
            }
        }
        let a = v.iter().fold(0i64, |g, &(x, _)| g.gcd(&x));
        let Some((mut b, mut d)) = top else { return Err(Error::NotFiniteIndex) };
        if a == 0 {
            return Err(Error::NotFiniteIndex);
        }
        if d < 0 {
            b = -b;
            d = -d;
        }
        Ok((a, b.rem_euclid(a), d))
    }

    pub fn index(&self) -> Result<i64> {
        let (a, _, d) = self.hnf()?;
        Ok(a * d)
    }

    pub fn contains(&self, (x, y): (i64, i64)) -> Result<bool> {
        let (a, b, d) = self.hnf()?;
        Ok(y % d == 0 && (x - (y / d) * b) % a == 0)
    }

    /// (i,k) ↦ (k,i)
    pub fn swap(&self) -> LatticeSubgroup {
        LatticeSubgroup::new(self.generators.iter().map(|&(x, y)| (y, x)).collect())
    }
}

pub fn params(q: &LatticeSubgroup) -> Result<LatticeParams> {
    let (a, b, d) = q.hnf()?;
    let m = a.gcd(&b);
    let n = d;
    let c = a / m;
    if c == 1 {
        return Ok(LatticeParams { m, n, c, d: 0, e: 0 });
    }
    let dd = (b / m).rem_euclid(c);
    // (m, ℓ) = x(a,0) + y(b,d) needs y·b ≡ m (mod a), and then ℓ = y·n.
    let (_, _, y) = egcd(a as i128, b as i128);
    let e = (y as i64).rem_euclid(c);
    Ok(LatticeParams { m, n, c, d: dd, e })
}

/// Whether the preimages of Q and Q̄ in G([0,b];A,P) are isomorphic.
pub fn iso_decide(q: &LatticeSubgroup, qbar: &LatticeSubgroup) -> Result<bool> {
    let (x, y) = (params(q)?, params(qbar)?);
    if x.c != y.c {
        return Ok(false);
    }
    Ok(x.c == 1 || (x.d - y.d).rem_euclid(x.c) == 0 || (x.d - y.e).rem_euclid(x.c) == 0)
}
