//! Regular subdivisions of [0,1] for a set 𝒫 of integers, affine interpolation between
//! two of them, factoring elements of G[𝒫] = G([0,1]; Z[⟨𝒫⟩], ⟨𝒫⟩) into such pairs, and
//! decomposing them into the generators f(q;p;r,p′), g(p*,p), t(q;p,p′), h(a;b).

use crate::error::{Error, Result};
use crate::plmap::{conj, GroupContext, IntervalDesc, PLMap};
use crate::rational::*;
use crate::ring::SlopeGroup;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;

/// Construction code (n₁,p₁; n₂,p₂; …): step i cuts the n_i-th interval into p_i parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CodeSeq {
    pub steps: Vec<(usize, u64)>,
}

impl CodeSeq {
    pub fn new(steps: Vec<(usize, u64)>) -> CodeSeq {
        CodeSeq { steps }
    }

    pub fn standard(ps: &[u64]) -> CodeSeq {
        CodeSeq::new(ps.iter().map(|&p| (1, p)).collect())
    }
}

/// A subdivision together with the code that built it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    points: Vec<Q>,
    code: CodeSeq,
}

impl Subdivision {
    pub fn points(&self) -> &[Q] {
        &self.points
    }

    pub fn code(&self) -> &CodeSeq {
        &self.code
    }
}

pub fn from_code(code: &CodeSeq) -> Result<Subdivision> {
    let mut pts = vec![zero(), one()];
    for &(n, p) in &code.steps {
        if n == 0 || n >= pts.len() {
            return Err(Error::BadIndex(format!("interval {n} of {}", pts.len() - 1)));
        }
        if p < 2 {
            return Err(Error::BadParameters(format!("cannot cut into {p} parts")));
        }
        let (lo, hi) = (pts[n - 1].clone(), pts[n].clone());
        let w = (&hi - &lo) / qi(p as i64);
        let new: Vec<Q> = (1..p).map(|j| &lo + &w * qi(j as i64)).collect();
        pts.splice(n..n, new);
    }
    Ok(Subdivision { points: pts, code: code.clone() })
}

/// St(p₁,…,p_ℓ): always cut the leftmost interval.
pub fn standard(ps: &[u64]) -> Subdivision {
    from_code(&CodeSeq::standard(ps)).expect("standard codes are valid")
}

/// Affine interpolation sending the i-th point of d to the i-th point of d2.
pub fn interpolate(d: &Subdivision, d2: &Subdivision) -> Result<PLMap> {
    interpolate_points(&d.points, &d2.points)
}

fn interpolate_points(d: &[Q], d2: &[Q]) -> Result<PLMap> {
    if d.len() != d2.len() {
        return Err(Error::LengthMismatch);
    }
    Ok(PLMap::interpolate_fixed(d.iter().cloned().zip(d2.iter().cloned()).collect()))
}

/// Subdivision tree: a leaf is an uncut interval, a split cuts it into equal parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Leaf,
    Split(u64, Vec<Tree>),
}

impl Tree {
    pub fn split(p: u64, children: Vec<Tree>) -> Tree {
        debug_assert_eq!(children.len() as u64, p);
        Tree::Split(p, children)
    }

    /// Cuts into ∏ factors equal parts, one level per factor.
    pub fn uniform(factors: &[u64]) -> Tree {
        match factors.split_first() {
            None => Tree::Leaf,
            Some((&p, rest)) => Tree::Split(p, (0..p).map(|_| Tree::uniform(rest)).collect()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Split(_, ch) => ch.iter().map(Tree::leaves).sum(),
        }
    }

    pub fn from_code(code: &CodeSeq) -> Result<Tree> {
        let mut t = Tree::Leaf;
        for &(n, p) in &code.steps {
            if n == 0 || n > t.leaves() {
                return Err(Error::BadIndex(format!("interval {n} of {}", t.leaves())));
            }
            t.split_leaf(n - 1, p);
        }
        Ok(t)
    }

    fn split_leaf(&mut self, mut idx: usize, p: u64) {
        match self {
            Tree::Leaf => *self = Tree::Split(p, vec![Tree::Leaf; p as usize]),
            Tree::Split(_, ch) => {
                for c in ch.iter_mut() {
                    let n = c.leaves();
                    if idx < n {
                        c.split_leaf(idx, p);
                        return;
                    }
                    idx -= n;
                }
            }
        }
    }

    /// Preorder code: a node is cut when every leaf to its left is final.
    pub fn code(&self) -> CodeSeq {
        fn walk(t: &Tree, before: usize, out: &mut Vec<(usize, u64)>) {
            if let Tree::Split(p, ch) = t {
                out.push((before + 1, *p));
                let mut b = before;
                for c in ch {
                    walk(c, b, out);
                    b += c.leaves();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        CodeSeq::new(out)
    }

    pub fn points(&self) -> Vec<Q> {
        fn walk(t: &Tree, lo: &Q, w: &Q, out: &mut Vec<Q>) {
            match t {
                Tree::Leaf => out.push(lo + w),
                Tree::Split(p, ch) => {
                    let cw = w / qi(*p as i64);
                    for (j, c) in ch.iter().enumerate() {
                        walk(c, &(lo + &cw * qi(j as i64)), &cw, out);
                    }
                }
            }
        }
        let mut out = vec![zero()];
        walk(self, &zero(), &one(), &mut out);
        out
    }

    pub fn subdivision(&self) -> Subdivision {
        Subdivision { points: self.points(), code: self.code() }
    }
}

/// The multiplicative monoid generated by 𝒫.
#[derive(Debug, Clone)]
pub struct Monoid {
    gens: Vec<u64>,
}

impl Monoid {
    pub fn new(pp: &[u64]) -> Result<Monoid> {
        let mut gens: Vec<u64> = pp.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() || gens[0] < 2 {
            return Err(Error::BadParameters("𝒫 must be a non-empty set of integers ≥ 2".into()));
        }
        Ok(Monoid { gens })
    }

    pub fn gens(&self) -> &[u64] {
        &self.gens
    }

    pub fn min(&self) -> u64 {
        self.gens[0]
    }

    /// A factorization of n into elements of 𝒫, if n lies in the monoid.
    pub fn factorize(&self, n: &BigInt) -> Option<Vec<u64>> {
        let mut memo: HashMap<BigInt, Option<Vec<u64>>> = HashMap::new();
        self.factorize_memo(n, &mut memo)
    }

    fn factorize_memo(&self, n: &BigInt, memo: &mut HashMap<BigInt, Option<Vec<u64>>>) -> Option<Vec<u64>> {
        if n.is_one() {
            return Some(Vec::new());
        }
        if let Some(r) = memo.get(n) {
            return r.clone();
        }
        let mut res = None;
        for &p in &self.gens {
            let (quo, rem) = n.div_rem(&BigInt::from(p));
            if rem.is_zero() && !quo.is_zero() {
                if let Some(mut f) = self.factorize_memo(&quo, memo) {
                    f.insert(0, p);
                    res = Some(f);
                    break;
                }
            }
        }
        memo.insert(n.clone(), res.clone());
        res
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        self.factorize(n).is_some()
    }

    /// Monoid elements in increasing order, lazily.
    pub fn ascending(&self) -> impl Iterator<Item = BigInt> + '_ {
        let mut heap = BinaryHeap::from([Reverse(BigInt::one())]);
        let mut seen = BTreeSet::from([BigInt::one()]);
        std::iter::from_fn(move || {
            let Reverse(x) = heap.pop()?;
            for &p in &self.gens {
                let y = &x * p;
                if seen.insert(y.clone()) {
                    heap.push(Reverse(y));
                }
            }
            Some(x)
        })
    }

    /// Smallest monoid element divisible by m.
    pub fn least_multiple_of(&self, m: &BigInt) -> Result<BigInt> {
        self.ascending()
            .take(1_000_000)
            .find(|x| (x % m).is_zero())
            .ok_or_else(|| Error::BadParameters(format!("no monoid multiple of {m} found")))
    }
}

/// The context G([0,1]; Z[⟨𝒫⟩], ⟨𝒫⟩).
pub fn g_pp_context(pp: &[u64]) -> Result<GroupContext> {
    let gens: Vec<i64> = pp.iter().map(|&p| p as i64).collect();
    Ok(GroupContext::new(IntervalDesc::unit(), SlopeGroup::from_ints(&gens)?))
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a Q>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// A pair of regular trees (D, D′) whose interpolation is f.
pub fn factor_trees(f: &PLMap, pp: &[u64]) -> Result<(Tree, Tree)> {
    let ctx = g_pp_context(pp)?;
    if let Some(v) = f.violation(&ctx) {
        return Err(Error::NotMember(v.to_string()));
    }
    let md = Monoid::new(pp)?;
    let p0 = md.least_multiple_of(&lcm_of_denominators(f.vertices().iter().map(|v| &v.0)))?;
    let p0q = Q::from_integer(p0.clone());
    let grid: Vec<Q> = (0..=to_u64(&p0).expect("grid too fine"))
        .map(|j| Q::from_integer(BigInt::from(j)) / &p0q)
        .collect();
    let images: Vec<Q> = grid.iter().map(|x| f.eval(x)).collect();
    let dinv = md.least_multiple_of(&lcm_of_denominators(images.iter()))?;
    let dinvq = Q::from_integer(dinv.clone());
    let mut d_children = Vec::new();
    let mut img_cells: Vec<Tree> = Vec::new();
    for w in images.windows(2) {
        let m = ((&w[1] - &w[0]) * &dinvq).to_integer();
        let (k, nk) = md
            .ascending()
            .take(1_000_000)
            .find_map(|k| {
                let n = &k * &m;
                md.factorize(&n).map(|f| (k, f))
            })
            .ok_or_else(|| Error::BadParameters(format!("no monoid cofactor for {m}")))?;
        d_children.push(Tree::uniform(&nk));
        let kf = md.factorize(&k).unwrap();
        for _ in 0..to_u64(&m).unwrap() {
            img_cells.push(Tree::uniform(&kf));
        }
    }
    let d = graft(&md.factorize(&p0).unwrap(), &mut d_children.into_iter());
    let d2 = graft(&md.factorize(&dinv).unwrap(), &mut img_cells.into_iter());
    let (d, d2) = reduce_pair(d, d2);
    Ok(thin_pair(d, d2, &md))
}

/// Alternates caret reduction with rebuilding both trees from their point sets, so
/// that carets hidden by a particular tree shape also get cancelled.
fn thin_pair(mut d: Tree, mut d2: Tree, md: &Monoid) -> (Tree, Tree) {
    let asc = md.gens().to_vec();
    let desc: Vec<u64> = asc.iter().rev().copied().collect();
    loop {
        let n = d.leaves();
        let (pd, pd2) = (d.points(), d2.points());
        let mut best: Option<(Tree, Tree)> = None;
        for o1 in [&asc, &desc] {
            for o2 in [&asc, &desc] {
                let t = regular_tree_in_order(&pd, o1).expect("points of a tree are regular");
                let t2 = regular_tree_in_order(&pd2, o2).expect("points of a tree are regular");
                let r = reduce_pair(t, t2);
                if best.as_ref().is_none_or(|b| r.0.leaves() < b.0.leaves()) {
                    best = Some(r);
                }
            }
        }
        (d, d2) = best.unwrap();
        if d.leaves() == n {
            return (d, d2);
        }
    }
}

/// A regular tree whose points are exactly `pts` (sorted, from 0 to 1), if one exists.
pub fn regular_tree(pts: &[Q], md: &Monoid) -> Option<Tree> {
    regular_tree_in_order(pts, md.gens())
}

/// As [`regular_tree`], trying cuts in the given order of 𝒫.
pub fn regular_tree_in_order(pts: &[Q], order: &[u64]) -> Option<Tree> {
    fn go(
        pts: &[Q],
        lo: usize,
        hi: usize,
        md: &[u64],
        memo: &mut HashMap<(usize, usize), Option<Tree>>,
    ) -> Option<Tree> {
        if hi == lo + 1 {
            return Some(Tree::Leaf);
        }
        if let Some(r) = memo.get(&(lo, hi)) {
            return r.clone();
        }
        let mut res = None;
        'outer: for &p in md {
            if ((hi - lo) as u64) < p {
                continue;
            }
            let w = (&pts[hi] - &pts[lo]) / qi(p as i64);
            let mut cuts = vec![lo];
            for j in 1..p {
                let x = &pts[lo] + &w * qi(j as i64);
                match pts[lo..=hi].binary_search(&x) {
                    Ok(k) => cuts.push(lo + k),
                    Err(_) => continue 'outer,
                }
            }
            cuts.push(hi);
            let mut ch = Vec::new();
            for c in cuts.windows(2) {
                match go(pts, c[0], c[1], md, memo) {
                    Some(t) => ch.push(t),
                    None => continue 'outer,
                }
            }
            res = Some(Tree::Split(p, ch));
            break;
        }
        memo.insert((lo, hi), res.clone());
        res
    }
    if pts.len() < 2 || pts[0] != zero() || pts[pts.len() - 1] != one() {
        return None;
    }
    go(pts, 0, pts.len() - 1, order, &mut HashMap::new())
}

/// Removes carets that cut corresponding leaves of both trees in the same way; the
/// interpolation is unchanged since it is affine across such a caret.
pub fn reduce_pair(mut d: Tree, mut d2: Tree) -> (Tree, Tree) {
    loop {
        let a = d.exposed_carets();
        let b: BTreeSet<(usize, u64)> = d2.exposed_carets().into_iter().collect();
        let common: BTreeSet<(usize, u64)> = a.into_iter().filter(|c| b.contains(c)).collect();
        if common.is_empty() {
            return (d, d2);
        }
        d.collapse(&common, 0);
        d2.collapse(&common, 0);
    }
}

impl Tree {
    /// (first leaf index, arity) of every node whose children are all leaves.
    fn exposed_carets(&self) -> Vec<(usize, u64)> {
        fn walk(t: &Tree, before: usize, out: &mut Vec<(usize, u64)>) {
            if let Tree::Split(p, ch) = t {
                if ch.iter().all(Tree::is_leaf) {
                    out.push((before, *p));
                    return;
                }
                let mut b = before;
                for c in ch {
                    walk(c, b, out);
                    b += c.leaves();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    fn collapse(&mut self, carets: &BTreeSet<(usize, u64)>, before: usize) {
        if let Tree::Split(p, ch) = self {
            if ch.iter().all(Tree::is_leaf) {
                if carets.contains(&(before, *p)) {
                    *self = Tree::Leaf;
                }
                return;
            }
            let mut b = before;
            for c in ch.iter_mut() {
                let n = c.leaves();
                c.collapse(carets, b);
                b += n;
            }
        }
    }
}

/// A uniform tree with the given level factors whose leaves are replaced by `subs` in order.
fn graft(factors: &[u64], subs: &mut impl Iterator<Item = Tree>) -> Tree {
    match factors.split_first() {
        None => subs.next().expect("enough subtrees"),
        Some((&p, rest)) => Tree::Split(p, (0..p).map(|_| graft(rest, subs)).collect()),
    }
}

/// Codes (c, c′) with interpolate(from_code(c), from_code(c′)) = f.
pub fn factor(f: &PLMap, pp: &[u64]) -> Result<(CodeSeq, CodeSeq)> {
    let (d, d2) = factor_trees(f, pp)?;
    Ok((d.code(), d2.code()))
}

/// Generator symbols. `q` is kept as a list of factors so that rescaled symbols can be
/// represented before they are rewritten in terms of generators with q ∈ {1} ∪ 𝒫.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// f(q;p;r,p′) = interp(code(1,q…;1,p;r,p′) ⊠ St(q…,p,p′)), support in [0,1/q].
    F { q: Vec<u64>, p: u64, r: u64, pp: u64 },
    /// g(p*,p) = h(p*,…,p*; p,…,p) with p−1 and p*−1 entries.
    G { pstar: u64, p: u64 },
    /// t(q;p,p′) = h(q…,p,p′; q…,p′,p).
    T { q: Vec<u64>, p: u64, pp: u64 },
    /// h(a;b) = interp(St(a) ⊠ St(b)).
    H { a: Vec<u64>, b: Vec<u64> },
}

fn prod(xs: &[u64]) -> u64 {
    xs.iter().product()
}

impl Symbol {
    pub fn eval(&self) -> PLMap {
        match self {
            Symbol::F { q, p, r, pp } => {
                let mut steps: Vec<(usize, u64)> = q.iter().map(|&x| (1, x)).collect();
                steps.push((1, *p));
                steps.push((*r as usize, *pp));
                let mut st = q.clone();
                st.extend([*p, *pp]);
                interpolate(&from_code(&CodeSeq::new(steps)).unwrap(), &standard(&st)).unwrap()
            }
            Symbol::G { pstar, p } => Symbol::H {
                a: vec![*pstar; (*p - 1) as usize],
                b: vec![*p; (*pstar - 1) as usize],
            }
            .eval(),
            Symbol::T { q, p, pp } => {
                let mut a = q.clone();
                a.extend([*p, *pp]);
                let mut b = q.clone();
                b.extend([*pp, *p]);
                Symbol::H { a, b }.eval()
            }
            Symbol::H { a, b } => interpolate(&standard(a), &standard(b)).unwrap(),
        }
    }

}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Symbol::F { q, p, r, pp } => write!(f, "f({};{p};{r},{pp})", prod(q)),
            Symbol::G { pstar, p } => write!(f, "g({pstar},{p})"),
            Symbol::T { q, p, pp } => write!(f, "t({};{p},{pp})", prod(q)),
            Symbol::H { a, b } => write!(f, "h({};{})", list(a), list(b)),
        }
    }
}

/// A product s₁^{e₁} ∘ s₂^{e₂} ∘ … (the rightmost letter acts first).
pub type SymbolWord = Vec<(Symbol, i8)>;

pub fn eval_symbols(w: &[(Symbol, i8)]) -> PLMap {
    w.iter().fold(PLMap::identity(), |acc, (s, e)| {
        let m = s.eval();
        acc.compose(&if *e < 0 { m.inverse() } else { m })
    })
}

pub fn invert_word(w: &[(Symbol, i8)]) -> SymbolWord {
    w.iter().rev().map(|(s, e)| (s.clone(), -e)).collect()
}

/// Rewrites the standardization of a tree: returns W and S with interp(D(T) ⊠ St(S)) = W.
/// W consists of f-symbols whose q may be a product of several factors.
fn to_standard(t: &Tree) -> (SymbolWord, Vec<u64>) {
    let mut word: SymbolWord = Vec::new();
    let mut seq = Vec::new();
    let mut prefix: Vec<u64> = Vec::new();
    let mut cur = t.clone();
    while let Tree::Split(p1, ch) = cur {
        if let Some(m) = (1..ch.len()).rev().find(|&i| !ch[i].is_leaf()) {
            let Tree::Split(qq, gs) = &ch[m] else { unreachable!() };
            let q = *qq as usize;
            let mut frontier: Vec<Tree> = ch[..m].to_vec();
            frontier.extend(gs.iter().cloned());
            frontier.extend(ch[m + 1..].iter().cloned());
            let mut children = vec![Tree::Split(*qq, frontier[..q].to_vec())];
            children.extend(frontier[q..].iter().cloned());
            word.push((Symbol::F { q: prefix.clone(), p: p1, r: (m + 1) as u64, pp: *qq }, 1));
            cur = Tree::Split(p1, children);
        } else {
            seq.push(p1);
            prefix.push(p1);
            cur = ch.into_iter().next().unwrap();
        }
    }
    word.reverse();
    (word, seq)
}

/// Replaces f- and t-symbols with composite q by conjugates of symbols with q ∈ {1} ∪ 𝒫,
/// using ^{f(1;p*;p*,s)} x = (x rescaled by s) for x supported in [0, 1/p*].
fn expand_sharp(w: SymbolWord, pstar: u64) -> SymbolWord {
    let mut out = Vec::new();
    for (s, e) in w {
        let (q, base) = match &s {
            Symbol::F { q, p, r, pp } if q.len() > 1 => {
                (q.clone(), Symbol::F { q: vec![*q.last().unwrap()], p: *p, r: *r, pp: *pp })
            }
            Symbol::T { q, p, pp } if q.len() > 1 => {
                (q.clone(), Symbol::T { q: vec![*q.last().unwrap()], p: *p, pp: *pp })
            }
            _ => {
                out.push((s, e));
                continue;
            }
        };
        let conjugators: Vec<Symbol> = q[..q.len() - 1]
            .iter()
            .map(|&s| Symbol::F { q: vec![], p: pstar, r: pstar, pp: s })
            .collect();
        out.extend(conjugators.iter().map(|c| (c.clone(), 1)));
        out.push((base, e));
        out.extend(conjugators.iter().rev().map(|c| (c.clone(), -1)));
    }
    out
}

/// One side of the double-coset normalization: a sequence with its recorded moves
/// h(x_i; x_{i+1}), stored as words.
struct Side {
    seq: Vec<u64>,
    moves: Vec<SymbolWord>,
}

impl Side {
    fn swap(&mut self, i: usize) {
        let (a, b) = (self.seq[i], self.seq[i + 1]);
        if a != b {
            let q = self.seq[..i].to_vec();
            let m = if a < b {
                (Symbol::T { q, p: a, pp: b }, 1)
            } else {
                (Symbol::T { q, p: b, pp: a }, -1)
            };
            self.moves.push(vec![m]);
            self.seq.swap(i, i + 1);
        }
    }

    /// Moves the entry at position i to position j by adjacent transpositions.
    fn move_entry(&mut self, mut i: usize, j: usize) {
        while i > j {
            self.swap(i - 1);
            i -= 1;
        }
        while i < j {
            self.swap(i);
            i += 1;
        }
    }

    /// Enforces: every p ≠ p* occurs fewer than p*−1 times.
    fn reduce_counts(&mut self, pstar: u64) {
        loop {
            let bad = self
                .seq
                .iter()
                .copied()
                .filter(|&p| p != pstar)
                .find(|&p| self.seq.iter().filter(|&&x| x == p).count() as u64 >= pstar - 1);
            let Some(p) = bad else { return };
            for slot in 0..(pstar - 1) as usize {
                let i = (slot..self.seq.len()).find(|&i| self.seq[i] == p).unwrap();
                self.move_entry(i, slot);
            }
            self.moves.push(vec![(Symbol::G { pstar, p }, -1)]);
            self.seq.splice(0..(pstar - 1) as usize, vec![pstar; (p - 1) as usize]);
        }
    }

    fn sort(&mut self) {
        let n = self.seq.len();
        for i in 0..n {
            for j in 0..n - 1 - i {
                if self.seq[j] > self.seq[j + 1] {
                    self.swap(j);
                }
            }
        }
    }

    fn move_to_end(&mut self, v: u64, from_end: usize) {
        let target = self.seq.len() - 1 - from_end;
        let i = (0..=target).rev().find(|&i| self.seq[i] == v).unwrap();
        self.move_entry(i, target);
    }
}

/// Word for h(a;b), with a and b standard sequences of equal length sum Σ(p−1).
pub fn decompose_h(a: &[u64], b: &[u64], pstar: u64) -> SymbolWord {
    let mut sa = Side { seq: a.to_vec(), moves: Vec::new() };
    let mut sb = Side { seq: b.to_vec(), moves: Vec::new() };
    sa.reduce_counts(pstar);
    sb.reduce_counts(pstar);
    let values: BTreeSet<u64> = sa.seq.iter().copied().collect();
    let mut dropped = 0;
    for v in values {
        let common = sa.seq.iter().filter(|&&x| x == v).count().min(sb.seq.iter().filter(|&&x| x == v).count());
        for _ in 0..common {
            sa.move_to_end(v, dropped);
            sb.move_to_end(v, dropped);
            dropped += 1;
        }
    }
    let keep = sa.seq.len() - dropped;
    sa.seq.truncate(keep);
    let keep = sb.seq.len() - dropped;
    sb.seq.truncate(keep);
    sa.sort();
    sb.sort();
    let core: SymbolWord = match (sa.seq.first(), sb.seq.first()) {
        (None, None) => Vec::new(),
        (Some(x), Some(y)) if x < y => vec![(Symbol::H { a: sa.seq.clone(), b: sb.seq.clone() }, 1)],
        (Some(_), Some(_)) => vec![(Symbol::H { a: sb.seq.clone(), b: sa.seq.clone() }, -1)],
        _ => unreachable!("sequences with equal length sums are both empty or both not"),
    };
    let mut w: SymbolWord = Vec::new();
    for m in &sb.moves {
        w.extend(invert_word(m));
    }
    w.extend(core);
    for m in sa.moves.iter().rev() {
        w.extend(m.iter().cloned());
    }
    w
}

/// A word over F ∪ G ∪ T ∪ R whose product is f ∈ G[𝒫].
pub fn decompose(f: &PLMap, pp: &[u64]) -> Result<SymbolWord> {
    let md = Monoid::new(pp)?;
    let pstar = md.min();
    let (d, d2) = factor_trees(f, pp)?;
    let (wd, s) = to_standard(&d);
    let (wd2, s2) = to_standard(&d2);
    let mut w = invert_word(&wd2);
    w.extend(decompose_h(&s, &s2, pstar));
    w.extend(wd);
    let w = expand_sharp(w, pstar);
    Ok(free_reduce(w))
}

pub fn free_reduce(w: SymbolWord) -> SymbolWord {
    let mut out: SymbolWord = Vec::new();
    for (s, e) in w {
        if out.last().is_some_and(|(t, f)| *t == s && *f == -e) {
            out.pop();
        } else {
            out.push((s, e));
        }
    }
    out
}

/// x_i for G[p]: with i = (p−1)m + (p−r), 1 < r ≤ p, x_i = f(p^m; p; r, p).
pub fn xi_symbol(i: u64, p: u64) -> Symbol {
    let m = i / (p - 1);
    let r = p - i % (p - 1);
    Symbol::F { q: vec![p; m as usize], p, r, pp: p }
}

pub fn xi_generator(i: u64, p: u64) -> PLMap {
    xi_symbol(i, p).eval()
}

/// Conjugation by f(1;p*;p*,s): the rescaling used to rewrite composite q.
pub fn rescaling_conjugate(pstar: u64, s: u64, x: &PLMap) -> PLMap {
    conj(&Symbol::F { q: vec![], p: pstar, r: pstar, pp: s }.eval(), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(n, d)| q(n, d)).collect()
    }

    fn f0() -> PLMap {
        PLMap::interpolate_fixed(vec![
            (zero(), zero()),
            (q(1, 2), q(1, 4)),
            (q(3, 4), q(1, 2)),
            (one(), one()),
        ])
    }

    #[test]
    fn code_examples() {
        assert_eq!(standard(&[2, 2]).points(), pts(&[(0, 1), (1, 4), (1, 2), (1, 1)]));
        let d = from_code(&CodeSeq::new(vec![(1, 2), (2, 2)])).unwrap();
        assert_eq!(d.points(), pts(&[(0, 1), (1, 2), (3, 4), (1, 1)]));
        assert_eq!(standard(&[5]).points().len(), 6);
        assert!(matches!(from_code(&CodeSeq::new(vec![(2, 2)])), Err(Error::BadIndex(_))));
    }

    #[test]
    fn interpolation_direction() {
        let code = from_code(&CodeSeq::new(vec![(1, 2), (2, 2)])).unwrap();
        let st = standard(&[2, 2]);
        assert_eq!(interpolate(&code, &st).unwrap(), f0());
        assert_eq!(interpolate(&st, &code).unwrap(), f0().inverse());
        assert!(interpolate(&st, &st).unwrap().is_identity());
        assert_eq!(interpolate(&st, &standard(&[2])), Err(Error::LengthMismatch));
    }

    #[test]
    fn tree_code_roundtrip() {
        let code = CodeSeq::new(vec![(1, 3), (3, 2), (1, 2), (5, 3)]);
        let t = Tree::from_code(&code).unwrap();
        assert_eq!(t.points(), from_code(&code).unwrap().points());
        assert_eq!(from_code(&t.code()).unwrap().points(), t.points());
    }

    #[test]
    fn monoid_search() {
        let md = Monoid::new(&[4, 6]).unwrap();
        assert_eq!(md.least_multiple_of(&BigInt::from(18)).unwrap(), BigInt::from(36));
        assert!(md.contains(&BigInt::from(96)));
        assert!(!md.contains(&BigInt::from(2)));
    }

    #[test]
    fn worked_example_46() {
        let f = PLMap::interpolate_fixed(vec![
            (zero(), zero()),
            (q(1, 18), q(1, 2)),
            (q(1, 2), q(17, 18)),
            (one(), one()),
        ]);
        assert_eq!(f.slopes(), vec![one(), qi(9), one(), q(1, 9), one()]);
        let (c, c2) = factor(&f, &[4, 6]).unwrap();
        let d = from_code(&c).unwrap();
        for x in pts(&[(0, 1), (1, 18), (1, 2), (1, 1)]) {
            assert!(d.points().contains(&x));
        }
        assert_eq!(interpolate(&d, &from_code(&c2).unwrap()).unwrap(), f);
        let w = decompose(&f, &[4, 6]).unwrap();
        assert_eq!(eval_symbols(&w), f);
    }

    #[test]
    fn factor_identity() {
        let (c, c2) = factor(&PLMap::identity(), &[2]).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn one_letter_decomposition() {
        let s = Symbol::F { q: vec![], p: 3, r: 2, pp: 2 };
        let w = decompose(&s.eval(), &[2, 3]).unwrap();
        assert_eq!(w, vec![(s, 1)]);
    }

    #[test]
    fn g_equals_h() {
        assert_eq!(
            Symbol::G { pstar: 2, p: 3 }.eval(),
            Symbol::H { a: vec![2, 2], b: vec![3] }.eval()
        );
    }

    #[test]
    fn xi_examples() {
        let x0 = xi_generator(0, 2);
        assert_eq!(x0, f0());
        assert_eq!(xi_symbol(2, 3), Symbol::F { q: vec![3], p: 3, r: 3, pp: 3 });
        let x2 = xi_generator(2, 3);
        assert!(x2.vertices().iter().all(|(x, _)| x <= &q(1, 3)));
        assert_eq!(conj(&xi_generator(0, 2), &xi_generator(1, 2)), xi_generator(2, 2));
    }

    #[test]
    fn rescaling_identity() {
        let x = Symbol::F { q: vec![3], p: 2, r: 2, pp: 3 }.eval();
        let y = Symbol::F { q: vec![2, 3], p: 2, r: 2, pp: 3 }.eval();
        assert_eq!(rescaling_conjugate(2, 2, &x), y);
    }

    #[test]
    fn thompson_decomposition_uses_x0_x1() {
        let f = f0().compose(&xi_generator(1, 2).inverse()).compose(&xi_generator(3, 2));
        let w = decompose(&f, &[2]).unwrap();
        assert_eq!(eval_symbols(&w), f);
        for (s, _) in &w {
            assert!(*s == xi_symbol(0, 2) || *s == xi_symbol(1, 2), "{s}");
        }
    }
}
