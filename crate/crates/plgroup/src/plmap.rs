//! Finitary PL homeomorphisms of the line as exact data, and membership in G(I;A,P).
//!
//! Composition is written `compose(f, g) = f∘g`, and `conj(a, b) = a b a⁻¹`.

use crate::error::{Error, Result};
use crate::rational::*;
use crate::ring::SlopeGroup;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub slope: Q,
    pub offset: Q,
}

impl AffineMap {
    pub fn new(slope: Q, offset: Q) -> AffineMap {
        assert!(slope.is_positive(), "affine maps must be increasing");
        AffineMap { slope, offset }
    }

    pub fn identity() -> AffineMap {
        AffineMap::new(one(), zero())
    }

    pub fn translation(a: Q) -> AffineMap {
        AffineMap::new(one(), a)
    }

    pub fn scaling(p: Q) -> AffineMap {
        AffineMap::new(p, zero())
    }

    /// The affine map with the given slope passing through (x, y).
    pub fn through(x: &Q, y: &Q, slope: Q) -> AffineMap {
        let offset = y - &slope * x;
        AffineMap::new(slope, offset)
    }

    pub fn apply(&self, t: &Q) -> Q {
        &self.slope * t + &self.offset
    }

    /// self ∘ other
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap::new(&self.slope * &other.slope, &self.slope * &other.offset + &self.offset)
    }

    pub fn inverse(&self) -> AffineMap {
        let s = self.slope.recip();
        let o = -&self.offset * &s;
        AffineMap::new(s, o)
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Line,
    HalfLineUp,
    HalfLineDown,
    Compact,
}

/// An interval I: the line, [a,∞), (−∞,c] or [a,c]. Whether an endpoint lies in A
/// depends on the slope group and is computed by [`GroupContext`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalDesc {
    pub kind: IntervalKind,
    pub lo: Option<Q>,
    pub hi: Option<Q>,
}

impl IntervalDesc {
    pub fn line() -> IntervalDesc {
        IntervalDesc { kind: IntervalKind::Line, lo: None, hi: None }
    }

    pub fn up(a: Q) -> IntervalDesc {
        IntervalDesc { kind: IntervalKind::HalfLineUp, lo: Some(a), hi: None }
    }

    pub fn down(c: Q) -> IntervalDesc {
        IntervalDesc { kind: IntervalKind::HalfLineDown, lo: None, hi: Some(c) }
    }

    pub fn compact(a: Q, c: Q) -> Result<IntervalDesc> {
        if a >= c {
            return Err(Error::BadParameters("compact interval needs a < c".into()));
        }
        Ok(IntervalDesc { kind: IntervalKind::Compact, lo: Some(a), hi: Some(c) })
    }

    pub fn unit() -> IntervalDesc {
        IntervalDesc::compact(zero(), one()).unwrap()
    }

    pub fn in_interior(&self, t: &Q) -> bool {
        self.lo.as_ref().is_none_or(|a| t > a) && self.hi.as_ref().is_none_or(|c| t < c)
    }

    pub fn contains(&self, t: &Q) -> bool {
        self.lo.as_ref().is_none_or(|a| t >= a) && self.hi.as_ref().is_none_or(|c| t <= c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupContext {
    pub interval: IntervalDesc,
    pub slopes: SlopeGroup,
}

impl GroupContext {
    pub fn new(interval: IntervalDesc, slopes: SlopeGroup) -> GroupContext {
        GroupContext { interval, slopes }
    }

    /// Thompson's group F: G([0,1]; Z[1/2], ⟨2⟩).
    pub fn thompson() -> GroupContext {
        GroupContext::new(IntervalDesc::unit(), SlopeGroup::from_ints(&[2]).unwrap())
    }

    pub fn lo_in_a(&self) -> bool {
        self.interval.lo.as_ref().is_some_and(|a| self.slopes.in_a(a))
    }

    pub fn hi_in_a(&self) -> bool {
        self.interval.hi.as_ref().is_some_and(|c| self.slopes.in_a(c))
    }

    /// Type 1–6 of the list of interval kinds: line; half line with endpoint in A / not in A;
    /// compact with both, one, or no endpoints in A.
    pub fn interval_type(&self) -> u8 {
        match self.interval.kind {
            IntervalKind::Line => 1,
            IntervalKind::HalfLineUp => if self.lo_in_a() { 2 } else { 3 },
            IntervalKind::HalfLineDown => if self.hi_in_a() { 2 } else { 3 },
            IntervalKind::Compact => match (self.lo_in_a(), self.hi_in_a()) {
                (true, true) => 4,
                (false, false) => 6,
                _ => 5,
            },
        }
    }
}

/// A finitary PL homeomorphism of R in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    vertices: Vec<(Q, Q)>,
    left: AffineMap,
    right: AffineMap,
}

/// First failed condition of membership in G(I;A,P).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SupportOutsideI,
    SlopeNotInP(Q),
    VertexNotInA(Q, Q),
    OffsetNotInA(Q),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SupportOutsideI => write!(f, "support not contained in I"),
            Violation::SlopeNotInP(s) => write!(f, "slope {s} not in P"),
            Violation::VertexNotInA(x, y) => write!(f, "vertex ({x}, {y}) not in A x A"),
            Violation::OffsetNotInA(o) => write!(f, "offset {o} not in A"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointData {
    pub lambda: AffineMap,
    pub rho: AffineMap,
    pub sigma_minus: Q,
    pub sigma_plus: Q,
    pub tau_minus: Q,
    pub tau_plus: Q,
}

impl PLMap {
    pub fn identity() -> PLMap {
        PLMap::affine(AffineMap::identity())
    }

    pub fn affine(a: AffineMap) -> PLMap {
        PLMap { vertices: Vec::new(), left: a.clone(), right: a }
    }

    /// Builds a map from vertex data and affine end parts, checking consistency.
    pub fn new(vertices: Vec<(Q, Q)>, left: AffineMap, right: AffineMap) -> Result<PLMap> {
        let bad = |m: &str| Error::Parse(m.to_string());
        if vertices.is_empty() {
            if left != right {
                return Err(bad("a map without vertices needs left = right"));
            }
            return Ok(PLMap::affine(left));
        }
        for w in vertices.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(bad("vertices must be strictly increasing"));
            }
        }
        let (x0, y0) = &vertices[0];
        let (xn, yn) = vertices.last().unwrap();
        if &left.apply(x0) != y0 || &right.apply(xn) != yn {
            return Err(bad("affine end parts do not meet the end vertices"));
        }
        Ok(PLMap::canonical(vertices, left.slope, right.slope))
    }

    /// Map through the given points with the given slopes before the first and after the last.
    pub fn from_points(points: Vec<(Q, Q)>, left_slope: Q, right_slope: Q) -> PLMap {
        assert!(!points.is_empty());
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        PLMap::canonical(points, left_slope, right_slope)
    }

    /// Interpolates points whose first and last entries are fixed; identity outside them.
    pub fn interpolate_fixed(points: Vec<(Q, Q)>) -> PLMap {
        debug_assert!(points.first().is_some_and(|(x, y)| x == y));
        debug_assert!(points.last().is_some_and(|(x, y)| x == y));
        PLMap::from_points(points, one(), one())
    }

    fn canonical(points: Vec<(Q, Q)>, left_slope: Q, right_slope: Q) -> PLMap {
        let n = points.len();
        let mut slopes = Vec::with_capacity(n + 1);
        slopes.push(left_slope);
        for w in points.windows(2) {
            slopes.push((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0));
        }
        slopes.push(right_slope);
        let left = AffineMap::through(&points[0].0, &points[0].1, slopes[0].clone());
        let right = AffineMap::through(&points[n - 1].0, &points[n - 1].1, slopes[n].clone());
        let vertices: Vec<(Q, Q)> = points
            .into_iter()
            .enumerate()
            .filter(|(i, _)| slopes[*i] != slopes[*i + 1])
            .map(|(_, v)| v)
            .collect();
        if vertices.is_empty() {
            PLMap::affine(left)
        } else {
            PLMap { vertices, left, right }
        }
    }

    pub fn vertices(&self) -> &[(Q, Q)] {
        &self.vertices
    }

    pub fn left(&self) -> &AffineMap {
        &self.left
    }

    pub fn right(&self) -> &AffineMap {
        &self.right
    }

    pub fn breaks(&self) -> Vec<Q> {
        self.vertices.iter().map(|v| v.0.clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.is_empty() && self.left.is_identity()
    }

    pub fn eval(&self, t: &Q) -> Q {
        let v = &self.vertices;
        if v.is_empty() || t <= &v[0].0 {
            return self.left.apply(t);
        }
        if t >= &v[v.len() - 1].0 {
            return self.right.apply(t);
        }
        let i = v.partition_point(|p| &p.0 <= t);
        let (x0, y0) = &v[i - 1];
        let (x1, y1) = &v[i];
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    pub fn eval_inverse(&self, s: &Q) -> Q {
        let v = &self.vertices;
        if v.is_empty() || s <= &v[0].1 {
            return self.left.inverse().apply(s);
        }
        if s >= &v[v.len() - 1].1 {
            return self.right.inverse().apply(s);
        }
        let i = v.partition_point(|p| &p.1 <= s);
        let (x0, y0) = &v[i - 1];
        let (x1, y1) = &v[i];
        x0 + (x1 - x0) * (s - y0) / (y1 - y0)
    }

    /// Slope on a right neighbourhood of t.
    pub fn slope_right_of(&self, t: &Q) -> Q {
        let v = &self.vertices;
        if v.is_empty() || t < &v[0].0 {
            return self.left.slope.clone();
        }
        if t >= &v[v.len() - 1].0 {
            return self.right.slope.clone();
        }
        let i = v.partition_point(|p| &p.0 <= t);
        (&v[i].1 - &v[i - 1].1) / (&v[i].0 - &v[i - 1].0)
    }

    /// Slope on a left neighbourhood of t.
    pub fn slope_left_of(&self, t: &Q) -> Q {
        let v = &self.vertices;
        if v.is_empty() || t <= &v[0].0 {
            return self.left.slope.clone();
        }
        if t > &v[v.len() - 1].0 {
            return self.right.slope.clone();
        }
        let i = v.partition_point(|p| &p.0 < t);
        (&v[i].1 - &v[i - 1].1) / (&v[i].0 - &v[i - 1].0)
    }

    /// All slopes, from the left end part to the right end part.
    pub fn slopes(&self) -> Vec<Q> {
        let mut out = vec![self.left.slope.clone()];
        for w in self.vertices.windows(2) {
            out.push((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0));
        }
        if !self.vertices.is_empty() {
            out.push(self.right.slope.clone());
        }
        out
    }

    /// f∘g
    pub fn compose(&self, g: &PLMap) -> PLMap {
        let f = self;
        let mut xs: Vec<Q> = g.breaks();
        xs.extend(f.vertices.iter().map(|(x, _)| g.eval_inverse(x)));
        if xs.is_empty() {
            return PLMap::affine(f.left.compose(&g.left));
        }
        xs.sort();
        xs.dedup();
        let ls = &f.left.slope * &g.left.slope;
        let rs = &f.right.slope * &g.right.slope;
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = f.eval(&g.eval(&x));
                (x, y)
            })
            .collect();
        PLMap::canonical(pts, ls, rs)
    }

    pub fn inverse(&self) -> PLMap {
        PLMap {
            vertices: self.vertices.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            left: self.left.inverse(),
            right: self.right.inverse(),
        }
    }

    pub fn pow(&self, n: i64) -> PLMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut r = PLMap::identity();
        for _ in 0..n.unsigned_abs() {
            r = r.compose(&base);
        }
        r
    }

    /// Convex hull of the support as (lower, upper), `None` bounds meaning unbounded;
    /// `None` overall for the identity.
    pub fn support(&self) -> Option<(Option<Q>, Option<Q>)> {
        if self.is_identity() {
            return None;
        }
        let lo = if self.left.is_identity() { Some(self.vertices[0].0.clone()) } else { None };
        let hi = if self.right.is_identity() {
            Some(self.vertices.last().unwrap().0.clone())
        } else {
            None
        };
        Some((lo, hi))
    }

    pub fn has_bounded_support(&self) -> bool {
        self.left.is_identity() && self.right.is_identity()
    }

    /// First violated membership condition for G(I;A,P), or `None` for members.
    ///
    /// Vertices in A² and slopes in P already give f(A) = A: slopes in P are units of
    /// A = Z[P], so each affine piece t ↦ s·t + (y − s·x) maps A onto A.
    pub fn violation(&self, ctx: &GroupContext) -> Option<Violation> {
        let iv = &ctx.interval;
        let support_ok = match iv.kind {
            IntervalKind::Line => true,
            IntervalKind::HalfLineUp => {
                self.left.is_identity() && self.vertices.iter().all(|v| iv.contains(&v.0))
            }
            IntervalKind::HalfLineDown => {
                self.right.is_identity() && self.vertices.iter().all(|v| iv.contains(&v.0))
            }
            IntervalKind::Compact => {
                self.has_bounded_support() && self.vertices.iter().all(|v| iv.contains(&v.0))
            }
        };
        if !support_ok {
            return Some(Violation::SupportOutsideI);
        }
        let p = &ctx.slopes;
        if let Some(s) = self.slopes().into_iter().find(|s| !p.in_p(s)) {
            return Some(Violation::SlopeNotInP(s));
        }
        if let Some((x, y)) = self.vertices.iter().find(|(x, y)| !p.in_a(x) || !p.in_a(y)) {
            return Some(Violation::VertexNotInA(x.clone(), y.clone()));
        }
        if self.vertices.is_empty() && !p.in_a(&self.left.offset) {
            return Some(Violation::OffsetNotInA(self.left.offset.clone()));
        }
        None
    }

    pub fn member(&self, ctx: &GroupContext) -> bool {
        self.violation(ctx).is_none()
    }

    pub fn endpoint_data(&self, ctx: &GroupContext) -> Result<EndpointData> {
        if let Some(v) = self.violation(ctx) {
            return Err(Error::NotMember(v.to_string()));
        }
        let (lambda, sigma_minus, tau_minus) = match &ctx.interval.lo {
            Some(a) => {
                let s = self.slope_right_of(a);
                (AffineMap::new(s.clone(), (one() - &s) * a), s, zero())
            }
            None => (self.left.clone(), self.left.slope.clone(), self.left.offset.clone()),
        };
        let (rho, sigma_plus, tau_plus) = match &ctx.interval.hi {
            Some(c) => {
                let s = self.slope_left_of(c);
                (AffineMap::new(s.clone(), (one() - &s) * c), s, zero())
            }
            None => (self.right.clone(), self.right.slope.clone(), self.right.offset.clone()),
        };
        Ok(EndpointData { lambda, rho, sigma_minus, sigma_plus, tau_minus, tau_plus })
    }
}

/// a b a⁻¹
pub fn conj(a: &PLMap, b: &PLMap) -> PLMap {
    a.compose(b).compose(&a.inverse())
}

/// [f,g] = f g f⁻¹ g⁻¹
pub fn commutator(f: &PLMap, g: &PLMap) -> PLMap {
    f.compose(g).compose(&f.inverse()).compose(&g.inverse())
}

/// aff(a,p): t ↦ p t + a
pub fn aff(a: &Q, p: &Q) -> PLMap {
    PLMap::affine(AffineMap::new(p.clone(), a.clone()))
}

/// g(a,p): identity up to a, slope p beyond.
pub fn one_break(a: &Q, p: &Q) -> PLMap {
    PLMap::from_points(vec![(a.clone(), a.clone())], one(), p.clone())
}

/// f(a,b;p): identity up to a, slope p on [a, a+b], translation by (p−1)b beyond.
pub fn bump(a: &Q, b: &Q, p: &Q) -> PLMap {
    assert!(b.is_positive());
    PLMap::from_points(
        vec![(a.clone(), a.clone()), (a + b, a + p * b)],
        one(),
        one(),
    )
}

/// b(a,Δ;p): breaks a, a+Δ, a+(p+1)Δ with slopes 1, p, 1/p, 1.
pub fn basic_bounded(a: &Q, d: &Q, p: &Q) -> PLMap {
    assert!(d.is_positive());
    let end = a + (p + one()) * d;
    PLMap::interpolate_fixed(vec![(a.clone(), a.clone()), (a + d, a + p * d), (end.clone(), end)])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elementary {
    Aff { a: Q, p: Q },
    OneBreak { a: Q, p: Q },
    Bump { a: Q, b: Q, p: Q },
    Bounded { a: Q, delta: Q, p: Q },
}

impl Elementary {
    /// Builds the map after checking that each parameter lies in A or P as required.
    pub fn build(&self, slopes: &SlopeGroup) -> Result<PLMap> {
        let in_a = |x: &Q| {
            if slopes.in_a(x) { Ok(()) } else { Err(Error::ParamNotInA(fmt_q(x))) }
        };
        let in_p = |x: &Q| {
            if x.is_positive() && slopes.in_p(x) { Ok(()) } else { Err(Error::ParamNotInP(fmt_q(x))) }
        };
        let positive = |x: &Q| {
            if x.is_positive() { Ok(()) } else { Err(Error::BadParameters(format!("{x} must be positive"))) }
        };
        match self {
            Elementary::Aff { a, p } => {
                in_a(a)?;
                in_p(p)?;
                Ok(aff(a, p))
            }
            Elementary::OneBreak { a, p } => {
                in_a(a)?;
                in_p(p)?;
                Ok(one_break(a, p))
            }
            Elementary::Bump { a, b, p } => {
                in_a(a)?;
                in_a(b)?;
                positive(b)?;
                in_p(p)?;
                Ok(bump(a, b, p))
            }
            Elementary::Bounded { a, delta, p } => {
                in_a(a)?;
                in_a(delta)?;
                positive(delta)?;
                in_p(p)?;
                Ok(basic_bounded(a, delta, p))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0() -> PLMap {
        PLMap::interpolate_fixed(vec![
            (zero(), zero()),
            (q(1, 2), q(1, 4)),
            (q(3, 4), q(1, 2)),
            (one(), one()),
        ])
    }

    #[test]
    fn thompson_generator_laws() {
        let f = f0();
        assert!(f.compose(&f.inverse()).is_identity());
        assert_eq!(f.slopes(), vec![one(), q(1, 2), one(), qi(2), one()]);
        assert!(f.member(&GroupContext::thompson()));
    }

    #[test]
    fn one_break_products_and_conjugates() {
        let g = |a: i64, p: i64| one_break(&qi(a), &qi(p));
        assert_eq!(g(0, 2).compose(&g(0, 3)), g(0, 6));
        assert_eq!(conj(&g(0, 2), &g(1, 3)), g(2, 3));
        assert!(g(5, 1).is_identity());
    }

    #[test]
    fn elementary_shapes() {
        let b = basic_bounded(&zero(), &one(), &qi(2));
        assert_eq!(b.eval(&qi(3)), qi(3));
        assert_eq!(b.eval(&zero()), zero());
        assert_eq!(b.slope_right_of(&q(1, 2)), qi(2));
        assert_eq!(b.slope_right_of(&qi(2)), q(1, 2));
        let f = bump(&zero(), &one(), &qi(3));
        assert_eq!(f.slope_right_of(&q(1, 2)), qi(3));
        assert_eq!(f.right(), &AffineMap::translation(qi(2)));
    }

    #[test]
    fn membership_diagnostics() {
        let ctx = GroupContext::new(IntervalDesc::line(), SlopeGroup::from_ints(&[2]).unwrap());
        assert_eq!(
            one_break(&zero(), &qi(3)).violation(&ctx),
            Some(Violation::SlopeNotInP(qi(3)))
        );
        let b = basic_bounded(&q(1, 3), &q(1, 3), &qi(2));
        assert_eq!(
            b.violation(&GroupContext::thompson()),
            Some(Violation::SupportOutsideI)
        );
        let b = basic_bounded(&q(1, 9), &q(1, 9), &qi(2));
        assert_eq!(
            b.violation(&GroupContext::thompson()),
            Some(Violation::VertexNotInA(q(1, 9), q(1, 9)))
        );
        let e = Elementary::Aff { a: q(1, 3), p: qi(2) };
        assert_eq!(e.build(&ctx.slopes), Err(Error::ParamNotInA("1/3".into())));
    }

    #[test]
    fn endpoint_examples() {
        let ctx = GroupContext::new(IntervalDesc::up(zero()), SlopeGroup::from_ints(&[2]).unwrap());
        let e = PLMap::identity().endpoint_data(&ctx).unwrap();
        assert!(e.lambda.is_identity() && e.rho.is_identity());
        let g = one_break(&qi(3), &qi(2));
        let e = g.endpoint_data(&ctx).unwrap();
        assert_eq!(e.rho, AffineMap::new(qi(2), qi(-3)));
        assert_eq!(e.sigma_plus, qi(2));
        assert_eq!(e.tau_plus, qi(-3));
        let b = basic_bounded(&q(1, 4), &q(1, 8), &qi(2));
        let e = b.endpoint_data(&GroupContext::thompson()).unwrap();
        assert!(e.lambda.is_identity() && e.rho.is_identity());
    }

    #[test]
    fn interval_types() {
        let s = SlopeGroup::from_ints(&[2]).unwrap();
        let t = |iv| GroupContext::new(iv, s.clone()).interval_type();
        assert_eq!(t(IntervalDesc::unit()), 4);
        assert_eq!(t(IntervalDesc::up(q(1, 3))), 3);
        assert_eq!(t(IntervalDesc::up(zero())), 2);
        assert_eq!(t(IntervalDesc::line()), 1);
        assert_eq!(t(IntervalDesc::compact(zero(), q(1, 3)).unwrap()), 5);
        assert_eq!(t(IntervalDesc::compact(q(1, 5), q(1, 3)).unwrap()), 6);
        assert!(commutator(&f0(), &f0()).is_identity());
    }
}
