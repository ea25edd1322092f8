//! Elements with prescribed interval images: stretch maps, interval maps (possible exactly
//! when the two lengths agree modulo IP·A), finite tuple maps, uniform approximation, and
//! the witness u of Higman's commutator condition.

use crate::error::{Error, Result};
use crate::plmap::{commutator, conj, GroupContext, IntervalKind, PLMap};
use crate::rational::*;
use crate::ring::SlopeGroup;
use num_traits::{Signed, Zero};

fn need_a(x: &Q, p: &SlopeGroup) -> Result<()> {
    if p.in_a(x) { Ok(()) } else { Err(Error::ParamNotInA(fmt_q(x))) }
}

/// Smallest k ≥ 0 with a/p^k < b (p > 1).
pub fn minimal_k(a: &Q, b: &Q, p: &Q) -> i64 {
    let mut k = 0;
    let mut x = a.clone();
    while &x >= b {
        x /= p;
        k += 1;
    }
    k
}

/// Map of [0,b] onto [0, b+(p−1)a] with breaks 0, a′/p, a′ (a′ = a/p^k) and slopes 1, p, p^{k+1}, 1.
/// For k = 0 the two middle slopes coincide and the break at a′/p disappears.
pub fn stretch_map(b: &Q, a: &Q, p: &Q, k: i64, slopes: &SlopeGroup) -> Result<PLMap> {
    need_a(a, slopes)?;
    need_a(b, slopes)?;
    if !slopes.in_p(p) {
        return Err(Error::ParamNotInP(fmt_q(p)));
    }
    if !a.is_positive() || !b.is_positive() || p <= &one() || k < 0 {
        return Err(Error::BadParameters("stretch_map needs a, b > 0, p > 1, k ≥ 0".into()));
    }
    let a1 = a / qpow(p, k);
    if &a1 >= b {
        return Err(Error::BadK);
    }
    let top = &a1 + (p - one()) * a;
    Ok(PLMap::from_points(
        vec![(zero(), zero()), (&a1 / p, a1.clone()), (a1, top)],
        one(),
        one(),
    ))
}

/// Terms (p, s) with p > 1 and Σ (p−1)s = d, ordered so that every partial sum added to
/// `start` stays positive. Requires start > 0 and start + d > 0.
pub fn interval_terms(start: &Q, d: &Q, slopes: &SlopeGroup) -> Result<Vec<(Q, Q)>> {
    let raw = slopes.express_in_ipa(d).map_err(|e| match e {
        Error::NotInIPA(_) => Error::CongruenceViolated { delta: slopes.delta() },
        e => e,
    })?;
    let mut pending: Vec<(Q, Q)> = raw
        .into_iter()
        .filter(|(_, b)| !b.is_zero())
        .map(|(p, b)| if p < one() { (p.recip(), -(&p * &b)) } else { (p, b) })
        .collect();
    let mut ordered = Vec::new();
    let mut run = start.clone();
    while !pending.is_empty() {
        let i = pending
            .iter()
            .position(|(p, s)| (&run + (p - one()) * s).is_positive())
            .expect("a term keeping the running length positive always exists");
        let (p, s) = pending.remove(i);
        run += (&p - one()) * &s;
        ordered.push((p, s));
    }
    Ok(ordered)
}

/// An element of G(R;A,P) mapping [a,c] onto [a′,c′].
pub fn map_interval(a: &Q, c: &Q, a2: &Q, c2: &Q, slopes: &SlopeGroup) -> Result<PLMap> {
    for x in [a, c, a2, c2] {
        need_a(x, slopes)?;
    }
    if a >= c || a2 >= c2 {
        return Err(Error::BadParameters("map_interval needs a < c and a′ < c′".into()));
    }
    let len = c - a;
    let d = (c2 - a2) - &len;
    let terms = interval_terms(&len, &d, slopes)?;
    let mut f = PLMap::from_points(vec![(a.clone(), a2.clone())], one(), one());
    let mut x = len;
    for (p, s) in terms {
        let v = (&p - one()) * &s;
        let step = if s.is_positive() {
            let k = minimal_k(&s, &x, &p);
            stretch_map(&x, &s, &p, k, slopes)?
        } else {
            let y = &x + &v;
            let s2 = -&s;
            let k = minimal_k(&s2, &y, &p);
            stretch_map(&y, &s2, &p, k, slopes)?.inverse()
        };
        let shift = PLMap::from_points(vec![(zero(), a2.clone())], one(), one());
        let unshift = shift.inverse();
        f = shift.compose(&step).compose(&unshift).compose(&f);
        x += v;
    }
    debug_assert_eq!(&f.eval(a), a2);
    debug_assert_eq!(&f.eval(c), c2);
    Ok(f)
}

/// Glues interval maps [xs_i, xs_{i+1}] → [ys_i, ys_{i+1}]; slope 1 outside the knots.
fn glue(xs: &[Q], ys: &[Q], slopes: &SlopeGroup) -> Result<PLMap> {
    let mut pts = vec![(xs[0].clone(), ys[0].clone())];
    for i in 0..xs.len() - 1 {
        let piece = map_interval(&xs[i], &xs[i + 1], &ys[i], &ys[i + 1], slopes)?;
        for (x, y) in piece.vertices() {
            if x > &xs[i] && x < &xs[i + 1] {
                pts.push((x.clone(), y.clone()));
            }
        }
        pts.push((xs[i + 1].clone(), ys[i + 1].clone()));
    }
    Ok(PLMap::from_points(pts, one(), one()))
}

fn check_tuple(points: &[Q], images: &[Q], ctx: &GroupContext) -> Result<()> {
    if points.len() != images.len() {
        return Err(Error::LengthMismatch);
    }
    for l in [points, images] {
        if l.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadParameters("points must be strictly increasing".into()));
        }
        for x in l {
            need_a(x, &ctx.slopes)?;
            if !ctx.interval.in_interior(x) {
                return Err(Error::NotInInterior(fmt_q(x)));
            }
        }
    }
    Ok(())
}

/// Compactly supported element inside int(I) with points_i ↦ images_i; needs
/// images_i − points_i ∈ IP·A.
fn bounded_tuple_map(points: &[Q], images: &[Q], ctx: &GroupContext) -> Result<PLMap> {
    let p = &ctx.slopes;
    for (x, y) in points.iter().zip(images) {
        if !p.in_ipa(&(y - x))? {
            return Err(Error::CongruenceViolated { delta: p.delta() });
        }
    }
    if points.is_empty() {
        return Ok(PLMap::identity());
    }
    let m = min_q(&points[0], &images[0]);
    let mm = max_q(points.last().unwrap(), images.last().unwrap());
    let el = match &ctx.interval.lo {
        Some(lo) => p.a_point_between(lo, &m),
        None => &m - one(),
    };
    let er = match &ctx.interval.hi {
        Some(hi) => p.a_point_between(&mm, hi),
        None => &mm + one(),
    };
    let mut xs = vec![el.clone()];
    xs.extend_from_slice(points);
    xs.push(er.clone());
    let mut ys = vec![el];
    ys.extend_from_slice(images);
    ys.push(er);
    glue(&xs, &ys, p)
}

/// An element of G(I;A,P) mapping each points_i to images_i. For I ≠ R the result is the
/// identity outside a compact subinterval of int(I); for I = R it is a translation near ±∞.
pub fn tuple_map(points: &[Q], images: &[Q], ctx: &GroupContext) -> Result<PLMap> {
    check_tuple(points, images, ctx)?;
    if ctx.interval.kind != IntervalKind::Line || points.is_empty() {
        return bounded_tuple_map(points, images, ctx);
    }
    let p = &ctx.slopes;
    let c0 = p.coset(&(&images[0] - &points[0]))?;
    for (x, y) in points.iter().zip(images) {
        if p.coset(&(y - x))? != c0 {
            return Err(Error::CongruenceViolated { delta: p.delta() });
        }
    }
    glue(points, images, p)
}

/// Approximates the homeomorphism sampled by `target` within ε at every sample.
///
/// Each sample t in A becomes a knot sent to a point of t + IP·A within ε/2 of g(t);
/// a sample outside A is bracketed by two knots in A whose images straddle g(t) within ε/2.
/// Between samples the result stays inside the box spanned by neighbouring images, so
/// the sup-distance to g is at most ε plus the oscillation of g between consecutive samples.
pub fn approximate(target: &[(Q, Q)], eps: &Q, ctx: &GroupContext) -> Result<PLMap> {
    if !eps.is_positive() {
        return Err(Error::EpsilonTooTight);
    }
    let p = &ctx.slopes;
    let (a, c) = match (&ctx.interval.kind, &ctx.interval.lo, &ctx.interval.hi) {
        (IntervalKind::Compact, Some(a), Some(c)) if p.in_a(a) && p.in_a(c) => (a.clone(), c.clone()),
        _ => {
            return Err(Error::UnsupportedContext(
                "approximation needs a compact interval with endpoints in A".into(),
            ))
        }
    };
    let mut samples: Vec<(Q, Q)> = Vec::new();
    if target.first().is_none_or(|s| s.0 != a) {
        samples.push((a.clone(), a.clone()));
    }
    samples.extend_from_slice(target);
    if samples.last().is_none_or(|s| s.0 != c) {
        samples.push((c.clone(), c.clone()));
    }
    if samples[0] != (a.clone(), a.clone()) || samples.last() != Some(&(c.clone(), c.clone())) {
        return Err(Error::BadTarget("target must fix the endpoints".into()));
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
        return Err(Error::BadTarget("target must be strictly increasing".into()));
    }
    let min_gap_y = samples.windows(2).map(|w| &w[1].1 - &w[0].1).min().unwrap();
    let min_gap_x = samples.windows(2).map(|w| &w[1].0 - &w[0].0).min().unwrap();
    let n = Q::from_integer(p.n().clone());
    let mut h = qi(p.delta() as i64);
    while &h * qi(2) > *eps || &h * qi(3) >= min_gap_y {
        h /= &n;
    }
    let eta = &min_gap_x / qi(4);
    let grid_near = |base: &Q, target: &Q, mode: i8| -> Q {
        let steps = (target - base) / &h;
        let k = match mode {
            0 => floor(&(steps + q(1, 2))),
            -1 => ceil(&steps) - 1,
            _ => floor(&steps) + 1,
        };
        base + Q::from_integer(k) * &h
    };
    let mut xs = vec![a.clone()];
    let mut ys = vec![a.clone()];
    for (t, g) in &samples[1..samples.len() - 1] {
        if p.in_a(t) {
            xs.push(t.clone());
            ys.push(grid_near(t, g, 0));
        } else {
            let lo = p.a_point_between(&(t - &eta), t);
            let hi = p.a_point_between(t, &(t + &eta));
            ys.push(grid_near(&lo, g, -1));
            ys.push(grid_near(&hi, g, 1));
            xs.push(lo);
            xs.push(hi);
        }
    }
    xs.push(c.clone());
    ys.push(c);
    glue(&xs, &ys, p)
}

/// Largest distance between the approximation and the samples.
pub fn sample_error(f: &PLMap, target: &[(Q, Q)]) -> Q {
    target
        .iter()
        .map(|(t, g)| (f.eval(t) - g).abs())
        .max()
        .unwrap_or_else(zero)
}

/// u ∈ B(I;A,P) with supp(^u x) and supp(^{zu} y) disjoint, so [^u x, ^{zu} y] = 1.
pub fn higman_witness(x: &PLMap, y: &PLMap, z: &PLMap, ctx: &GroupContext) -> Result<PLMap> {
    for f in [x, y, z] {
        if let Some(v) = f.violation(ctx) {
            return Err(Error::NotMember(v.to_string()));
        }
        if !f.has_bounded_support() {
            return Err(Error::NotMember("element is not boundedly supported".into()));
        }
    }
    if z.is_identity() {
        return Err(Error::ZIsIdentity);
    }
    let hulls: Vec<(Q, Q)> = [x, y]
        .iter()
        .filter_map(|f| f.support())
        .map(|(lo, hi)| (lo.unwrap(), hi.unwrap()))
        .collect();
    if hulls.is_empty() {
        return Ok(PLMap::identity());
    }
    let p = &ctx.slopes;
    let s_lo = hulls.iter().map(|h| h.0.clone()).min().unwrap();
    let s_hi = hulls.iter().map(|h| h.1.clone()).max().unwrap();
    let b1 = match &ctx.interval.lo {
        Some(lo) => p.ipa_point_between(lo, &s_lo),
        None => p.ipa_point_between(&(&s_lo - one()), &s_lo),
    };
    let b2 = match &ctx.interval.hi {
        Some(hi) => p.ipa_point_between(&s_hi, hi),
        None => p.ipa_point_between(&s_hi, &(&s_hi + one())),
    };
    let zv = z.vertices();
    let t_star = (&zv[0].0 + &zv[1].0) / qi(2);
    let w = if z.eval(&t_star) > t_star { z.clone() } else { z.inverse() };
    let lower = ctx.interval.lo.clone().unwrap_or_else(|| &t_star - one());
    let mut eta = (&t_star - &lower) / qi(2);
    let c1 = loop {
        let cand = p.ipa_point_between(&(&t_star - &eta), &t_star);
        if w.eval(&cand) > t_star {
            break cand;
        }
        eta /= qi(2);
    };
    let c2 = p.ipa_point_between(&t_star, &w.eval(&c1));
    let u = bounded_tuple_map(&[b1, b2], &[c1, c2], ctx)?;
    debug_assert!(commutator(&conj(&u, x), &conj(&z.compose(&u), y)).is_identity());
    Ok(u)
}

/// [x,y] = ^{xyu⁻¹}z · ^{xu⁻¹}z⁻¹ · ^{u⁻¹}z · ^{yu⁻¹}z⁻¹, checked as an exact equality.
pub fn commutator_identity_check(x: &PLMap, y: &PLMap, z: &PLMap, u: &PLMap) -> bool {
    let ui = u.inverse();
    let zi = z.inverse();
    let rhs = conj(&x.compose(y).compose(&ui), z)
        .compose(&conj(&x.compose(&ui), &zi))
        .compose(&conj(&ui, z))
        .compose(&conj(&y.compose(&ui), &zi));
    commutator(x, y) == rhs
}
