//! Words over the generators of Thompson-style presentations, the rewriting engine
//! producing forms u₁⁻¹u₂, the word problem, and relator verification.
//!
//! Two kinds of letters are rewritten: the x_i of G[p] (conjugation shifts indices by
//! p−1) and the one-break maps g(i,p) of G(𝒫) on [0,∞) (conjugation by g(a,p) sends
//! index k > a to a + p(k−a)). In both cases only conjugation by a positive letter of
//! smaller index is used, so indices stay non-negative integers.

use crate::error::{Error, Result};
use crate::lattice::Echelon;
use crate::plmap::{one_break, PLMap};
use crate::rational::*;
use crate::subdivide::xi_generator;
use num_bigint::BigUint;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Presentation {
    /// G[p] on generators x₀, x₁, … with ^{x_i}x_j = x_{j+p−1} (i < j).
    GpInfinite { p: u64 },
    /// G[p] on x = x₀, x₁, …, x_{p−1}.
    GpFinite { p: u64 },
    /// G([0,∞); Z[1/p], ⟨p⟩) on x ↦ g(0,p)g(1,p)⁻¹ and x_i ↦ g(i,p), 1 ≤ i < p.
    GhalfFinite { p: u64 },
    /// G(𝒫) on g(r,p) for r < p₀, p ∈ 𝒫, and f ↦ g(p₀,p₀)⁻¹g(0,p₀).
    Gpp { pp: Vec<u64>, p0: u64 },
    /// Thompson's group F on x = x₀ and x₁.
    FClassic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub sym: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(sym: usize, exp: i8) -> Letter {
        Letter { sym, exp }
    }

    pub fn inv(self) -> Letter {
        Letter { sym: self.sym, exp: -self.exp }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub pres: Presentation,
    pub letters: Vec<Letter>,
}

impl Presentation {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadParameters(m.into()));
        match self {
            Presentation::GpInfinite { p } | Presentation::GpFinite { p } | Presentation::GhalfFinite { p } => {
                if *p < 2 {
                    return bad("p must be at least 2");
                }
            }
            Presentation::Gpp { pp, p0 } => {
                if pp.is_empty() || pp.iter().any(|&p| p < 2) || !pp.contains(p0) {
                    return bad("𝒫 must be integers ≥ 2 containing p₀");
                }
            }
            Presentation::FClassic => {}
        }
        Ok(())
    }

    /// Number of generators, or `None` for the infinite presentation.
    pub fn rank(&self) -> Option<usize> {
        match self {
            Presentation::GpInfinite { .. } => None,
            Presentation::GpFinite { p } | Presentation::GhalfFinite { p } => Some(*p as usize),
            Presentation::Gpp { pp, p0 } => Some(*p0 as usize * pp.len() + 1),
            Presentation::FClassic => Some(2),
        }
    }

    pub fn symbol_name(&self, sym: usize) -> String {
        match self {
            Presentation::GpInfinite { .. } | Presentation::GpFinite { .. } | Presentation::FClassic => {
                format!("x{sym}")
            }
            Presentation::GhalfFinite { .. } => {
                if sym == 0 { "x".into() } else { format!("x{sym}") }
            }
            Presentation::Gpp { pp, p0 } => {
                let m = pp.len();
                if sym == *p0 as usize * m {
                    "f".into()
                } else {
                    format!("g({},{})", sym / m, pp[sym % m])
                }
            }
        }
    }

    pub fn parse_symbol(&self, name: &str) -> Result<usize> {
        let bad = || Error::Parse(format!("unknown generator {name:?}"));
        let sym = match self {
            Presentation::Gpp { pp, p0 } => {
                if name == "f" {
                    *p0 as usize * pp.len()
                } else {
                    let inner = name
                        .strip_prefix("g(")
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(bad)?;
                    let (r, p) = inner.split_once(',').ok_or_else(bad)?;
                    let r: usize = r.trim().parse().map_err(|_| bad())?;
                    let p: u64 = p.trim().parse().map_err(|_| bad())?;
                    let k = pp.iter().position(|&x| x == p).ok_or_else(bad)?;
                    if r >= *p0 as usize {
                        return Err(bad());
                    }
                    r * pp.len() + k
                }
            }
            _ => {
                if name == "x" {
                    0
                } else {
                    name.strip_prefix('x').and_then(|s| s.parse().ok()).ok_or_else(bad)?
                }
            }
        };
        if self.rank().is_some_and(|r| sym >= r) {
            return Err(bad());
        }
        Ok(sym)
    }

    pub fn generator(&self, sym: usize) -> PLMap {
        let g = |i: u64, p: u64| one_break(&qi(i as i64), &qi(p as i64));
        match self {
            Presentation::GpInfinite { p } | Presentation::GpFinite { p } => xi_generator(sym as u64, *p),
            Presentation::FClassic => xi_generator(sym as u64, 2),
            Presentation::GhalfFinite { p } => {
                if sym == 0 {
                    g(0, *p).compose(&g(1, *p).inverse())
                } else {
                    g(sym as u64, *p)
                }
            }
            Presentation::Gpp { pp, p0 } => {
                let m = pp.len();
                if sym == *p0 as usize * m {
                    g(*p0, *p0).inverse().compose(&g(0, *p0))
                } else {
                    g((sym / m) as u64, pp[sym % m])
                }
            }
        }
    }
}

impl Word {
    pub fn new(pres: Presentation, letters: Vec<Letter>) -> Word {
        Word { pres, letters }
    }

    pub fn empty(pres: Presentation) -> Word {
        Word::new(pres, Vec::new())
    }

    /// Parses tokens like "x0", "x1^-1", "x^3", "g(0,2)^-1", "f".
    pub fn parse(pres: Presentation, tokens: &[String]) -> Result<Word> {
        pres.validate()?;
        let mut letters = Vec::new();
        for t in tokens {
            let (name, e) = match t.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?),
                None => (t.as_str(), 1),
            };
            let sym = pres.parse_symbol(name.trim())?;
            let l = Letter::new(sym, if e < 0 { -1 } else { 1 });
            letters.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
        }
        Ok(Word::new(pres, letters))
    }

    /// Tokens with consecutive equal letters aggregated into powers.
    pub fn tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.exp as i64;
            let name = self.pres.symbol_name(l.sym);
            out.push(if e == 1 { name } else { format!("{name}^{e}") });
            i = j;
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.pres.clone(), self.letters.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Word::new(self.pres.clone(), l)
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word::new(self.pres.clone(), out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.tokens();
        if t.is_empty() { write!(f, "1") } else { write!(f, "{}", t.join(" ")) }
    }
}

/// Product of the generator maps, leftmost letter acting last.
pub fn eval_word(w: &Word) -> PLMap {
    let mut cache: HashMap<usize, (PLMap, PLMap)> = HashMap::new();
    let mut acc = PLMap::identity();
    for l in &w.letters {
        let (g, gi) = cache.entry(l.sym).or_insert_with(|| {
            let g = w.pres.generator(l.sym);
            let gi = g.inverse();
            (g, gi)
        });
        acc = acc.compose(if l.exp > 0 { g } else { gi });
    }
    acc
}

/// Index arithmetic of a rewriting system: conjugation of x_k by a letter x_a (a < k)
/// and the test whether a block of letters at one index is trivial.
#[derive(Debug, Clone)]
enum Shift {
    Infinite { p: u64 },
    OneBreak { pp: Vec<u64> },
}

impl Shift {
    fn colors(&self) -> usize {
        match self {
            Shift::Infinite { .. } => 1,
            Shift::OneBreak { pp } => pp.len(),
        }
    }

    fn conj(&self, a: &BigUint, color: usize, k: &BigUint) -> BigUint {
        debug_assert!(a < k);
        match self {
            Shift::Infinite { p } => k + (p - 1),
            Shift::OneBreak { pp } => a + (k - a) * pp[color],
        }
    }

    fn conj_block(&self, a: &BigUint, exps: &[i64], k: &BigUint) -> BigUint {
        match self {
            Shift::Infinite { p } => k + (p - 1) * exps[0] as u64,
            Shift::OneBreak { pp } => {
                let mut d = k - a;
                for (c, &e) in exps.iter().enumerate() {
                    d *= BigUint::from(pp[c]).pow(e as u32);
                }
                a + d
            }
        }
    }

    fn trivial(&self, net: &[i64]) -> bool {
        match self {
            Shift::Infinite { .. } => net[0] == 0,
            Shift::OneBreak { pp } => {
                let s = pp.iter().zip(net).fold(one(), |acc, (&p, &e)| acc * qpow(&qi(p as i64), e));
                s == one()
            }
        }
    }
}

/// u₁⁻¹u₂: `neg` holds u₁⁻¹ with indices increasing left to right, `pos` holds u₂ with
/// indices decreasing left to right; each entry aggregates the exponents per color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub neg: Vec<(BigUint, Vec<i64>)>,
    pub pos: Vec<(BigUint, Vec<i64>)>,
}

impl NormalForm {
    fn new() -> NormalForm {
        NormalForm { neg: Vec::new(), pos: Vec::new() }
    }

    fn unit(shift: &Shift, c: usize) -> Vec<i64> {
        let mut v = vec![0; shift.colors()];
        v[c] = 1;
        v
    }

    fn mul_pos(&mut self, shift: &Shift, mut k: BigUint, c: usize) {
        let mut j = self.pos.len();
        while j > 0 {
            let (a, e) = &self.pos[j - 1];
            if *a < k {
                k = shift.conj_block(a, e, &k);
                j -= 1;
            } else if *a == k {
                self.pos[j - 1].1[c] += 1;
                return;
            } else {
                break;
            }
        }
        self.pos.insert(j, (k, NormalForm::unit(shift, c)));
    }

    fn mul_neg(&mut self, shift: &Shift, mut k: BigUint, c: usize) {
        let mut j = self.pos.len();
        while j > 0 {
            let a = &self.pos[j - 1].0;
            if *a < k {
                k = shift.conj_block(a, &self.pos[j - 1].1, &k);
                j -= 1;
            } else if *a == k {
                let e = &mut self.pos[j - 1].1;
                if e[c] > 0 {
                    e[c] -= 1;
                    if e.iter().all(|&x| x == 0) {
                        self.pos.remove(j - 1);
                    }
                    return;
                }
                j -= 1;
            } else {
                break;
            }
        }
        for entry in self.pos.iter_mut() {
            if entry.0 > k {
                entry.0 = shift.conj(&k, c, &entry.0);
            }
        }
        let mut i = self.neg.len();
        while i > 0 {
            let b = &self.neg[i - 1].0;
            if *b > k {
                self.neg[i - 1].0 = shift.conj(&k, c, b);
                i -= 1;
            } else if *b == k {
                self.neg[i - 1].1[c] += 1;
                return;
            } else {
                break;
            }
        }
        self.neg.insert(i, (k, NormalForm::unit(shift, c)));
    }

    fn is_empty(&self) -> bool {
        self.neg.is_empty() && self.pos.is_empty()
    }

    /// Cancels equal minimal-index blocks by conjugation; true iff everything cancels.
    fn cyclically_trivial(mut self, shift: &Shift) -> bool {
        loop {
            if self.is_empty() {
                return true;
            }
            let (Some((i, f)), Some((j, e))) = (self.neg.first(), self.pos.last()) else {
                return false;
            };
            if i != j {
                return false;
            }
            let net: Vec<i64> = e.iter().zip(f).map(|(a, b)| a - b).collect();
            if !shift.trivial(&net) {
                return false;
            }
            self.neg.remove(0);
            self.pos.pop();
        }
    }
}

/// Letters of the rewriting system: (index, color, exponent).
type GLetter = (u64, usize, i8);

fn engine_letters(w: &Word) -> (Shift, Vec<GLetter>) {
    let mut out = Vec::new();
    match &w.pres {
        Presentation::GpInfinite { p } | Presentation::GpFinite { p } => {
            for l in &w.letters {
                out.push((l.sym as u64, 0, l.exp));
            }
            (Shift::Infinite { p: *p }, out)
        }
        Presentation::FClassic => {
            for l in &w.letters {
                out.push((l.sym as u64, 0, l.exp));
            }
            (Shift::Infinite { p: 2 }, out)
        }
        Presentation::GhalfFinite { p } => {
            for l in &w.letters {
                if l.sym == 0 {
                    let x = [(0, 0, 1), (1, 0, -1)];
                    if l.exp > 0 {
                        out.extend(x);
                    } else {
                        out.extend(x.iter().rev().map(|&(i, c, e)| (i, c, -e)));
                    }
                } else {
                    out.push((l.sym as u64, 0, l.exp));
                }
            }
            (Shift::OneBreak { pp: vec![*p] }, out)
        }
        Presentation::Gpp { pp, p0 } => {
            let m = pp.len();
            let c0 = pp.iter().position(|p| p == p0).unwrap();
            for l in &w.letters {
                if l.sym == *p0 as usize * m {
                    let f = [(*p0, c0, -1), (0, c0, 1)];
                    if l.exp > 0 {
                        out.extend(f);
                    } else {
                        out.extend(f.iter().rev().map(|&(i, c, e)| (i, c, -e)));
                    }
                } else {
                    out.push(((l.sym / m) as u64, l.sym % m, l.exp));
                }
            }
            (Shift::OneBreak { pp: pp.clone() }, out)
        }
    }
}

fn normal_form_of(shift: &Shift, letters: &[GLetter]) -> NormalForm {
    let mut nf = NormalForm::new();
    for &(k, c, e) in letters {
        if e > 0 {
            nf.mul_pos(shift, BigUint::from(k), c);
        } else {
            nf.mul_neg(shift, BigUint::from(k), c);
        }
    }
    nf
}

/// The form u₁⁻¹u₂ of a word in the index-shifting letters of its presentation.
pub fn normal_form(w: &Word) -> NormalForm {
    let (shift, letters) = engine_letters(w);
    normal_form_of(&shift, &letters)
}

/// Seminormal form over x₀, x₁, … of a word in G[p] (given on the infinite or finite generators).
pub fn seminormal(w: &Word) -> Result<Word> {
    let p = match w.pres {
        Presentation::GpInfinite { p } | Presentation::GpFinite { p } => p,
        Presentation::FClassic => 2,
        _ => return Err(Error::BadParameters("seminormal forms are defined for G[p]".into())),
    };
    let nf = normal_form(w);
    let mut letters = Vec::new();
    let idx = |i: &BigUint| usize::try_from(i).map_err(|_| Error::BadIndex(i.to_string()));
    for (i, e) in &nf.neg {
        letters.extend(std::iter::repeat_n(Letter::new(idx(i)?, -1), e[0] as usize));
    }
    for (i, e) in &nf.pos {
        letters.extend(std::iter::repeat_n(Letter::new(idx(i)?, 1), e[0] as usize));
    }
    Ok(Word::new(Presentation::GpInfinite { p }, letters))
}

/// Checks the shape: inverse letters with strictly increasing indices, then positive
/// letters with strictly decreasing indices (equal letters aggregated).
pub fn is_seminormal(w: &Word) -> bool {
    let mut blocks: Vec<(usize, i8)> = Vec::new();
    for l in &w.letters {
        if blocks.last() != Some(&(l.sym, l.exp)) {
            blocks.push((l.sym, l.exp));
        }
    }
    let split = blocks.iter().position(|b| b.1 > 0).unwrap_or(blocks.len());
    let (neg, pos) = blocks.split_at(split);
    pos.iter().all(|b| b.1 > 0)
        && neg.windows(2).all(|x| x[0].0 < x[1].0)
        && pos.windows(2).all(|x| x[0].0 > x[1].0)
}

/// Decides whether w is trivial by rewriting, and cross-checks against evaluation.
pub fn word_problem(w: &Word) -> Result<bool> {
    let (shift, letters) = engine_letters(w);
    let by_rewriting = normal_form_of(&shift, &letters).cyclically_trivial(&shift);
    let by_eval = eval_word(w).is_identity();
    if by_rewriting != by_eval {
        return Err(Error::MethodDisagreement(w.to_string()));
    }
    Ok(by_rewriting)
}

/// Rewrites a word in x₀, x₁, … as a word in x = x₀, x₁, …, x_{p−1}
/// via x_{r+m(p−1)} = ^{x^m}x_r.
pub fn to_finite(w: &Word) -> Result<Word> {
    let Presentation::GpInfinite { p } = w.pres else {
        return Err(Error::BadParameters("expected a word on x₀, x₁, …".into()));
    };
    let mut out = Vec::new();
    for l in &w.letters {
        let i = l.sym as u64;
        if i < p {
            out.push(*l);
            continue;
        }
        let r = (i - 1) % (p - 1) + 1;
        let m = (i - r) / (p - 1);
        out.extend(std::iter::repeat_n(Letter::new(0, 1), m as usize));
        out.push(Letter::new(r as usize, l.exp));
        out.extend(std::iter::repeat_n(Letter::new(0, -1), m as usize));
    }
    Ok(Word::new(Presentation::GpFinite { p }, out))
}

fn lw(sym: usize, exp: i64) -> Vec<Letter> {
    let l = Letter::new(sym, if exp < 0 { -1 } else { 1 });
    vec![l; exp.unsigned_abs() as usize]
}

fn inv(v: &[Letter]) -> Vec<Letter> {
    v.iter().rev().map(|l| l.inv()).collect()
}

/// a b a⁻¹
fn conj_letters(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out.extend(inv(a));
    out
}

/// lhs · rhs⁻¹
fn relator(lhs: Vec<Letter>, rhs: Vec<Letter>) -> Vec<Letter> {
    let mut out = lhs;
    out.extend(inv(&rhs));
    out
}

fn cat(parts: &[Vec<Letter>]) -> Vec<Letter> {
    parts.concat()
}

/// A named relator word.
#[derive(Debug, Clone)]
pub struct Relator {
    pub family: String,
    pub id: String,
    pub word: Word,
}

/// Relators of a presentation; infinite families are cut off at `bound`
/// (exponent n ≤ bound, indices ≤ 12 for the x_i family).
pub fn relators(pres: &Presentation, bound: u64) -> Result<Vec<Relator>> {
    pres.validate()?;
    let mut out = Vec::new();
    let mut push = |family: &str, id: String, letters: Vec<Letter>| {
        out.push(Relator { family: family.into(), id, word: Word::new(pres.clone(), letters) });
    };
    match pres {
        Presentation::GpInfinite { p } => {
            let p = *p as usize;
            for j in 1..=12usize {
                for i in 0..j {
                    push(
                        "conjugation",
                        format!("^x{i} x{j} = x{}", j + p - 1),
                        relator(conj_letters(&lw(i, 1), &lw(j, 1)), lw(j + p - 1, 1)),
                    );
                }
            }
        }
        Presentation::GpFinite { .. } | Presentation::FClassic => {
            let p = match pres {
                Presentation::GpFinite { p } => *p as usize,
                _ => 2,
            };
            let x = |n: i64| lw(0, n);
            for j in 1..p {
                for i in 1..j {
                    push(
                        "commuting-shift",
                        format!("^x{i} x{j} = ^x x{j}"),
                        relator(conj_letters(&lw(i, 1), &lw(j, 1)), conj_letters(&x(1), &lw(j, 1))),
                    );
                }
            }
            for i in 1..p {
                for j in 1..p {
                    if j <= i + 1 {
                        push(
                            "double-shift",
                            format!("^(x{i} x) x{j} = ^(x^2) x{j}"),
                            relator(conj_letters(&cat(&[lw(i, 1), x(1)]), &lw(j, 1)), conj_letters(&x(2), &lw(j, 1))),
                        );
                    }
                }
            }
            push(
                "triple-shift",
                format!("^(x{} x^2) x1 = ^(x^3) x1", p - 1),
                relator(conj_letters(&cat(&[lw(p - 1, 1), x(2)]), &lw(1, 1)), conj_letters(&x(3), &lw(1, 1))),
            );
        }
        Presentation::GhalfFinite { p } => {
            let p = *p as i64;
            let x = |n: i64| lw(0, n);
            let xi = |i: i64| lw(i as usize, 1);
            for j in 1..p {
                for i in 1..j {
                    push(
                        "shift",
                        format!("^x{i} x{j} = ^(x^{}) x{j}", j - i),
                        relator(conj_letters(&xi(i), &xi(j)), conj_letters(&x(j - i), &xi(j))),
                    );
                }
            }
            for i in 1..p {
                for j in 1..p {
                    if j <= i + 1 {
                        let n = p + j - i;
                        push(
                            "shift-by-x",
                            format!("^(x{i} x) x{j} = ^(x^{n}) x{j}"),
                            relator(conj_letters(&cat(&[xi(i), x(1)]), &xi(j)), conj_letters(&x(n), &xi(j))),
                        );
                    }
                }
            }
            push(
                "shift-by-x2",
                format!("^(x{} x^2) x1 = ^(x^{}) x1", p - 1, p + 2),
                relator(conj_letters(&cat(&[xi(p - 1), x(2)]), &xi(1)), conj_letters(&x(p + 2), &xi(1))),
            );
        }
        Presentation::Gpp { pp, p0 } => {
            let m = pp.len();
            let f_sym = *p0 as usize * m;
            let g = |r: u64, k: usize| Letter::new(r as usize * m + k, 1);
            let cols: Vec<Vec<i128>> = pp
                .iter()
                .map(|&p| {
                    crate::rational::prime_factors(pp.iter().product::<u64>())
                        .iter()
                        .map(|&q| {
                            let mut e = 0;
                            let mut x = p;
                            while x % q == 0 {
                                x /= q;
                                e += 1;
                            }
                            e
                        })
                        .collect()
                })
                .collect();
            let rows = cols[0].len();
            let kernel = Echelon::new(&cols, rows).kernel();
            for r in 0..*p0 {
                for (j, kv) in kernel.iter().enumerate() {
                    let mut w = Vec::new();
                    for (k, &e) in kv.iter().enumerate() {
                        w.extend(lw(g(r, k).sym, e as i64));
                    }
                    push("kernel", format!("w({r},{j})"), w);
                }
                for a in 0..m {
                    for b in a + 1..m {
                        let (x, y) = (vec![g(r, a)], vec![g(r, b)]);
                        push(
                            "commutator",
                            format!("[g({r},{}),g({r},{})]", pp[a], pp[b]),
                            cat(&[x.clone(), y.clone(), inv(&x), inv(&y)]),
                        );
                    }
                }
            }
            let q = *p0 as i64 - 1;
            for r in 0..*p0 as i64 {
                for r1 in 1..*p0 as i64 {
                    for s1 in 0..=bound as i64 {
                        if r1 <= r && s1 == 0 {
                            continue;
                        }
                        for (a, &p) in pp.iter().enumerate() {
                            for b in 0..m {
                                let p = p as i64;
                                let t = r + p * (r1 - r);
                                let r2 = if q == 0 { 1 } else { (t - 1).rem_euclid(q) + 1 };
                                let s2 = p * s1 + if q == 0 { 0 } else { (t - r2) / q };
                                if s2 < 0 {
                                    continue;
                                }
                                let lhs = conj_letters(
                                    &cat(&[vec![g(r as u64, a)], lw(f_sym, s1)]),
                                    &[g(r1 as u64, b)],
                                );
                                let rhs = conj_letters(&lw(f_sym, s2), &[g(r2 as u64, b)]);
                                push(
                                    "rewritten-conjugation",
                                    format!("^(g({r},{p}) f^{s1}) g({r1},{}) = ^(f^{s2}) g({r2},{})", pp[b], pp[b]),
                                    relator(lhs, rhs),
                                );
                            }
                        }
                    }
                }
            }
            let c0 = pp.iter().position(|p| p == p0).unwrap();
            push(
                "definition-of-f",
                "f g(1,p0) g(0,p0)^-1".into(),
                vec![Letter::new(f_sym, 1), g(1, c0), g(0, c0).inv()],
            );
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Report {
    pub presentation: String,
    pub families: Vec<(String, usize)>,
    pub total: usize,
}

/// Evaluates every relator (and, for G(𝒫), the base relations among the g(b,p) for
/// b ≤ bound) and fails on the first that is not the identity.
pub fn verify_presentation(pres: &Presentation, bound: u64) -> Result<Report> {
    let mut families: Vec<(String, usize)> = Vec::new();
    let mut count = |fam: &str| match families.iter_mut().find(|f| f.0 == fam) {
        Some(f) => f.1 += 1,
        None => families.push((fam.to_string(), 1)),
    };
    for r in relators(pres, bound)? {
        if !eval_word(&r.word).is_identity() {
            return Err(Error::RelatorFails(r.id));
        }
        count(&r.family);
    }
    if let Presentation::Gpp { pp, .. } = pres {
        let g = |b: u64, p: u64| one_break(&qi(b as i64), &qi(p as i64));
        for b in 0..=bound {
            for &p in pp {
                for &p2 in pp {
                    if g(b, p).compose(&g(b, p2)) != g(b, p * p2) {
                        return Err(Error::RelatorFails(format!("g({b},{p}) g({b},{p2}) = g({b},{})", p * p2)));
                    }
                    count("product");
                    for b2 in b + 1..=bound {
                        let lhs = crate::plmap::conj(&g(b, p), &g(b2, p2));
                        if lhs != g(b + p * (b2 - b), p2) {
                            return Err(Error::RelatorFails(format!("^g({b},{p}) g({b2},{p2})")));
                        }
                        count("conjugation");
                    }
                }
            }
        }
    }
    let total = families.iter().map(|f| f.1).sum();
    Ok(Report { presentation: format!("{pres:?}"), families, total })
}

/// The family ^{x_i x^n}x_j = ^{x^{pn+j−i}}x_j on [0,∞), for n ≤ bound.
pub fn half_line_family(p: u64, bound: u64) -> Vec<Relator> {
    let pres = Presentation::GhalfFinite { p };
    let mut out = Vec::new();
    for n in 0..=bound as i64 {
        for i in 1..p as i64 {
            for j in 1..p as i64 {
                if j <= i && n == 0 {
                    continue;
                }
                let e = p as i64 * n + j - i;
                let lhs = conj_letters(&cat(&[lw(i as usize, 1), lw(0, n)]), &lw(j as usize, 1));
                let rhs = conj_letters(&lw(0, e), &lw(j as usize, 1));
                out.push(Relator {
                    family: "half-line".into(),
                    id: format!("^(x{i} x^{n}) x{j} = ^(x^{e}) x{j}"),
                    word: Word::new(pres.clone(), relator(lhs, rhs)),
                });
            }
        }
    }
    out
}
