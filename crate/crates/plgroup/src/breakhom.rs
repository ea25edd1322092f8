//! The break homomorphism ν, its augmentation ε, the class map γ, and the
//! abelianization ranks that follow from them.

use crate::error::{Error, Result};
use crate::plmap::{GroupContext, IntervalKind, PLMap};
use crate::rational::*;
use crate::ring::CosetIPA;
use num_integer::Integer;
use std::collections::BTreeMap;

/// A G-orbit of break points: an endpoint of I in A, or an interior coset of IP·A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitLabel {
    Left,
    Interior(u64),
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BreakVector {
    pub terms: BTreeMap<OrbitLabel, Vec<i64>>,
}

impl BreakVector {
    pub fn add_term(&mut self, label: OrbitLabel, v: &[i64]) {
        let e = self.terms.entry(label).or_insert_with(|| vec![0; v.len()]);
        for (a, b) in e.iter_mut().zip(v) {
            *a += b;
        }
        if e.iter().all(|&x| x == 0) {
            self.terms.remove(&label);
        }
    }

    pub fn add(&self, other: &BreakVector) -> BreakVector {
        let mut out = self.clone();
        for (l, v) in &other.terms {
            out.add_term(*l, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Relabels every interior term through `map`.
    pub fn relabel(&self, map: impl Fn(OrbitLabel) -> OrbitLabel) -> BreakVector {
        let mut out = BreakVector::default();
        for (l, v) in &self.terms {
            out.add_term(map(*l), v);
        }
        out
    }
}

/// The orbit of a break point t of a member of G(I;A,P).
pub fn orbit_label(t: &Q, ctx: &GroupContext) -> Result<OrbitLabel> {
    if ctx.interval.lo.as_ref() == Some(t) {
        return Ok(OrbitLabel::Left);
    }
    if ctx.interval.hi.as_ref() == Some(t) {
        return Ok(OrbitLabel::Right);
    }
    if ctx.interval.kind == IntervalKind::Line {
        ctx.slopes.coset(t)?;
        return Ok(OrbitLabel::Interior(0));
    }
    Ok(OrbitLabel::Interior(ctx.slopes.coset(t)?.residue))
}

pub fn nu(f: &PLMap, ctx: &GroupContext) -> Result<BreakVector> {
    if let Some(v) = f.violation(ctx) {
        return Err(Error::NotMember(v.to_string()));
    }
    let mut out = BreakVector::default();
    for (x, _) in f.vertices() {
        let jump = f.slope_right_of(x) / f.slope_left_of(x);
        let e = ctx.slopes.p_exponents(&jump)?;
        out.add_term(orbit_label(x, ctx)?, &e);
    }
    Ok(out)
}

pub fn epsilon(v: &BreakVector, rank: usize) -> Vec<i64> {
    let mut out = vec![0; rank];
    for e in v.terms.values() {
        for (a, b) in out.iter_mut().zip(e) {
            *a += b;
        }
    }
    out
}

/// Class of f(a₀) − a₀ in A/(IP·A), with a₀ = 0.
pub fn gamma(f: &PLMap, ctx: &GroupContext) -> Result<CosetIPA> {
    gamma_at(f, &zero(), ctx)
}

pub fn gamma_at(f: &PLMap, a0: &Q, ctx: &GroupContext) -> Result<CosetIPA> {
    if let Some(v) = f.violation(ctx) {
        return Err(Error::NotMember(v.to_string()));
    }
    ctx.slopes.coset(&(f.eval(a0) - a0))
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RankFormulas {
    /// G([0,∞);A,P)_ab when the endpoint lies in A: rk P · (1 + δ).
    pub g_halfline_ab_rank: u64,
    /// B_ab for cyclic P: δ − 1.
    pub b_ab_rank_or_unknown: Option<u64>,
    /// G(𝒫)_ab for a set 𝒫 of integers: |𝒫| · (1 + gcd{p − 1}).
    pub g_pp_ab_rank_or_na: Option<u64>,
    /// G[p]_ab for a single integer p: p.
    pub g_p_compact_ab_rank_or_na: Option<u64>,
}

pub fn rank_formulas(ctx: &GroupContext) -> RankFormulas {
    let p = &ctx.slopes;
    let d = p.delta();
    let gens = p.generators();
    let all_int = gens.iter().all(|g| g.is_integer());
    let g_minus_one_gcd = gens
        .iter()
        .filter_map(|g| to_u64(&g.to_integer()))
        .fold(0u64, |acc, g| acc.gcd(&(g - 1)));
    RankFormulas {
        g_halfline_ab_rank: p.rank() as u64 * (1 + d),
        b_ab_rank_or_unknown: (gens.len() == 1).then(|| d - 1),
        g_pp_ab_rank_or_na: all_int.then(|| gens.len() as u64 * (1 + g_minus_one_gcd)),
        g_p_compact_ab_rank_or_na: (all_int && gens.len() == 1)
            .then(|| to_u64(&gens[0].to_integer()).unwrap()),
    }
}
