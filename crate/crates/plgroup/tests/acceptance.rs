//! The eleven acceptance criteria. Run with `--nocapture` to see one line per criterion.

mod common;

use common::*;
use plgroup::breakhom::{epsilon, nu, orbit_label, BreakVector, OrbitLabel};
use plgroup::construct::{approximate, commutator_identity_check, higman_witness, map_interval, sample_error};
use plgroup::plmap::{aff, basic_bounded, conj as pconj, one_break, AffineMap, GroupContext, IntervalDesc, PLMap};
use plgroup::rational::*;
use plgroup::ring::SlopeGroup;
use plgroup::subdivide::{decompose, eval_symbols, factor, from_code, interpolate, xi_generator};
use plgroup::tails::{self, iso_decide, params, LatticeSubgroup};
use plgroup::words::{
    eval_word, half_line_family, is_seminormal, relators, seminormal, verify_presentation, word_problem, Letter,
    Presentation, Word,
};
use plgroup::{Error, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use num_traits::Signed;
use std::time::Instant;

type Outcome = std::result::Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond { Ok(()) } else { Err(msg()) }
}

fn sg(gens: Vec<Q>) -> SlopeGroup {
    SlopeGroup::new(gens).unwrap()
}

fn unit_ctx(gens: Vec<Q>) -> GroupContext {
    GroupContext::new(IntervalDesc::unit(), sg(gens))
}

/// A product of up to `k` random basic bounded elements (and their inverses) inside (lo, hi).
fn bounded_product(lo: &Q, hi: &Q, n: i64, slopes: &[Q], k: usize, rng: &mut ChaCha8Rng) -> PLMap {
    let mut f = PLMap::identity();
    for _ in 0..rng.gen_range(1..=k) {
        let b = random_bounded(lo, hi, n, slopes, rng);
        f = f.compose(&if rng.gen_bool(0.5) { b } else { b.inverse() });
    }
    f
}

fn group_laws() -> Outcome {
    let mut r = rng(101);
    let ctx = unit_ctx(vec![qi(2), qi(3)]);
    let slopes = [qi(2), qi(3), q(1, 2), q(1, 3), q(3, 2), q(2, 3), qi(6)];
    let els: Vec<PLMap> = (0..500).map(|_| bounded_product(&zero(), &one(), 6, &slopes, 3, &mut r)).collect();
    let id = PLMap::identity();
    for (i, f) in els.iter().enumerate() {
        let (g, h) = (&els[(i + 1) % 500], &els[(i + 7) % 500]);
        check(f.member(&ctx), || format!("element {i} is not a member"))?;
        check(f.compose(g).compose(h) == f.compose(&g.compose(h)), || format!("associativity at {i}"))?;
        check(f.compose(&f.inverse()) == id && f.inverse().compose(f) == id, || format!("inverse at {i}"))?;
        check(id.compose(f) == *f && f.compose(&id) == *f, || format!("identity at {i}"))?;
        check(f.compose(g).inverse() == g.inverse().compose(&f.inverse()), || format!("(fg)⁻¹ at {i}"))?;
        check(f.compose(g).member(&ctx), || format!("closure at {i}"))?;
    }
    Ok(())
}

fn interval_mapping() -> Outcome {
    check(sg(vec![q(3, 2)]).delta() == 1, || "δ(⟨3/2⟩) ≠ 1".into())?;
    check(sg(vec![qi(65), qi(97)]).delta() == 32, || "δ(⟨65,97⟩) ≠ 32".into())?;
    let mut r = rng(202);
    let contexts: [(Vec<Q>, i64); 4] = [
        (vec![qi(2)], 2),
        (vec![q(3, 2)], 6),
        (vec![qi(65), qi(97)], 65 * 97),
        (vec![q(7, 5)], 35),
    ];
    for (gens, n) in contexts {
        let slopes = sg(gens.clone());
        let line = GroupContext::new(IntervalDesc::line(), slopes.clone());
        let point = |r: &mut ChaCha8Rng| q(r.gen_range(-60..60), n.pow(r.gen_range(0..=1)));
        let mut hits = 0;
        for _ in 0..200 {
            let a = point(&mut r);
            let len = point(&mut r).abs() + q(1, n);
            let a2 = point(&mut r);
            let len2 = if r.gen_bool(0.5) {
                point(&mut r).abs() + q(1, n)
            } else {
                let p = gens.choose(&mut r).unwrap();
                let b = point(&mut r);
                let v = &len + (p - one()) * b;
                if v > zero() { v } else { len.clone() }
            };
            let (c, c2) = (&a + &len, &a2 + &len2);
            let diff = &len2 - &len;
            let expect = ipa_oracle(&diff, &gens);
            check(slopes.in_ipa(&diff).unwrap() == expect, || format!("in_ipa({diff}) disagrees with the closure oracle"))?;
            match map_interval(&a, &c, &a2, &c2, &slopes) {
                Ok(f) => {
                    hits += 1;
                    check(expect, || format!("constructed [{a},{c}] → [{a2},{c2}] against the oracle"))?;
                    check(f.member(&line), || format!("[{a},{c}] → [{a2},{c2}] is not a member"))?;
                    check(f.eval(&a) == a2 && f.eval(&c) == c2, || format!("endpoint images of [{a},{c}]"))?;
                }
                Err(Error::CongruenceViolated { delta }) => {
                    check(!expect && delta == slopes.delta(), || format!("[{a},{c}] → [{a2},{c2}] refused"))?;
                }
                Err(e) => return Err(format!("[{a},{c}] → [{a2},{c2}]: {e}")),
            }
        }
        check(hits > 0, || format!("no successful construction for {gens:?}"))?;
        check(slopes.delta() == 1 || hits < 200, || format!("no refused construction for {gens:?}"))?;
    }
    Ok(())
}

fn presentations() -> Outcome {
    let total = |pres: Presentation, bound| verify_presentation(&pres, bound).map(|r| r.total).map_err(|e| e.to_string());
    check(total(Presentation::FClassic, 8)? == 2, || "F: expected 2 relators".into())?;
    for (p, n) in [(2, 2), (3, 6)] {
        check(total(Presentation::GpFinite { p }, 8)? == n, || format!("G[{p}]: expected {n} relators"))?;
        check(total(Presentation::GhalfFinite { p }, 8)? == n, || format!("half line p={p}: expected {n}"))?;
    }
    for p in [2, 3, 5] {
        let rs = relators(&Presentation::GpInfinite { p }, 12).map_err(|e| e.to_string())?;
        check(rs.len() == 78, || format!("conjugation family p={p} has {} members", rs.len()))?;
        for rel in rs {
            check(eval_word(&rel.word).is_identity(), || format!("p={p}: {} fails", rel.id))?;
        }
    }
    for p in [2, 3, 5] {
        for rel in half_line_family(p, 8) {
            check(eval_word(&rel.word).is_identity(), || format!("half line p={p}: {} fails", rel.id))?;
        }
    }
    Ok(())
}

fn random_word(pres: &Presentation, syms: usize, len: usize, rng: &mut ChaCha8Rng) -> Word {
    let letters = (0..len)
        .map(|_| Letter::new(rng.gen_range(0..syms), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    Word::new(pres.clone(), letters)
}

fn normal_forms() -> Outcome {
    let pres = Presentation::GpInfinite { p: 2 };
    let mut r = rng(404);
    let rels: Vec<Word> = relators(&pres, 12)
        .unwrap()
        .into_iter()
        .filter(|rel| rel.word.letters.iter().all(|l| l.sym <= 4))
        .map(|rel| rel.word)
        .collect();
    let mut words: Vec<(Word, bool)> = (0..200).map(|_| (random_word(&pres, 5, r.gen_range(0..14), &mut r), false)).collect();
    for _ in 0..50 {
        let u = random_word(&pres, 5, r.gen_range(0..6), &mut r);
        let v = random_word(&pres, 5, r.gen_range(0..6), &mut r);
        let rel = rels.choose(&mut r).unwrap();
        let rel = if r.gen_bool(0.5) { rel.clone() } else { rel.inverse() };
        words.push((u.concat(&rel).concat(&u.inverse()).concat(&v).concat(&v.inverse()), true));
    }
    for (w, planted) in &words {
        let s = seminormal(w).map_err(|e| e.to_string())?;
        check(is_seminormal(&s), || format!("{s} is not seminormal"))?;
        check(eval_word(&s) == eval_word(w), || format!("seminormal({w}) changes the element"))?;
        let trivial = word_problem(w).map_err(|e| e.to_string())?;
        check(!planted || trivial, || format!("planted identity {w} not recognised"))?;
    }
    Ok(())
}

fn subdivisions() -> Outcome {
    let mut r = rng(505);
    for pp in [vec![2u64], vec![2, 3], vec![4, 6]] {
        for _ in 0..100 {
            let f = random_tree_element(&pp, 4, &mut r);
            let (c, c2) = factor(&f, &pp).map_err(|e| e.to_string())?;
            let g = interpolate(&from_code(&c).unwrap(), &from_code(&c2).unwrap()).map_err(|e| e.to_string())?;
            check(g == f, || format!("factor round trip in G[{pp:?}]"))?;
            let w = decompose(&f, &pp).map_err(|e| e.to_string())?;
            check(eval_symbols(&w) == f, || format!("decompose round trip in G[{pp:?}]"))?;
        }
    }
    let f = PLMap::interpolate_fixed(vec![(zero(), zero()), (q(1, 18), q(1, 2)), (q(1, 2), q(17, 18)), (one(), one())]);
    check(f.slopes() == vec![one(), qi(9), one(), q(1, 9), one()], || "slopes of the {4,6} example".into())?;
    let (c, c2) = factor(&f, &[4, 6]).map_err(|e| e.to_string())?;
    let d = from_code(&c).unwrap();
    check(interpolate(&d, &from_code(&c2).unwrap()).unwrap() == f, || "{4,6} example round trip".into())?;
    check(
        [zero(), q(1, 18), q(1, 2), one()].iter().all(|x| d.points().contains(x)),
        || "{4,6} example misses a singularity".into(),
    )?;
    Ok(())
}

fn interior_vector(v: &BreakVector, delta: u64) -> Vec<i64> {
    let mut out = vec![0; delta as usize];
    for (l, e) in &v.terms {
        if let OrbitLabel::Interior(r) = l {
            out[*r as usize] += e[0];
        }
    }
    out
}

fn nu_suite() -> Outcome {
    let mut r = rng(606);
    let p = q(7, 5);
    let ps = [p.clone(), p.recip()];
    let half = GroupContext::new(IntervalDesc::up(zero()), sg(vec![p.clone()]));
    let point = |r: &mut ChaCha8Rng| q(r.gen_range(1..400), 35);
    let element = |r: &mut ChaCha8Rng| {
        let mut f = bounded_product(&zero(), &qi(12), 35, &ps, 2, r);
        if r.gen_bool(0.5) {
            f = f.compose(&one_break(&point(r), ps.choose(r).unwrap()));
        }
        f
    };
    for i in 0..200 {
        let (f, g) = (element(&mut r), element(&mut r));
        let lhs = nu(&f.compose(&g), &half).map_err(|e| e.to_string())?;
        let rhs = nu(&f, &half).unwrap().add(&nu(&g, &half).unwrap());
        check(lhs == rhs, || format!("ν is not additive on pair {i}"))?;
    }
    for _ in 0..50 {
        let f = bounded_product(&zero(), &qi(12), 35, &ps, 3, &mut r);
        check(epsilon(&nu(&f, &half).unwrap(), 1) == vec![0], || "ε∘ν ≠ 0 on a bounded element".into())?;
    }
    for _ in 0..20 {
        let (a, d) = (point(&mut r), q(r.gen_range(1..20), 35));
        let s = ps.choose(&mut r).unwrap();
        let e = sg(vec![p.clone()]).p_exponents(s).unwrap()[0];
        let mut expect = BreakVector::default();
        expect.add_term(orbit_label(&a, &half).unwrap(), &[e]);
        expect.add_term(orbit_label(&(&a + &d), &half).unwrap(), &[-2 * e]);
        expect.add_term(orbit_label(&(&a + qi(2) * &d), &half).unwrap(), &[e]);
        check(nu(&basic_bounded(&a, &d, s), &half).unwrap() == expect, || format!("ν(b({a},{d};{s}))"))?;
    }
    for (gen, n, want) in [(q(7, 5), 35, 1), (q(3, 2), 6, 0)] {
        let ctx = GroupContext::new(IntervalDesc::up(zero()), sg(vec![gen.clone()]));
        let delta = ctx.slopes.delta();
        let rows: Vec<Vec<i64>> = (0..50)
            .map(|_| {
                let f = bounded_product(&zero(), &qi(6), n, &[gen.clone(), gen.recip()], 3, &mut r);
                interior_vector(&nu(&f, &ctx).unwrap(), delta)
            })
            .collect();
        let rank = int_rank(&rows);
        check(rank == want, || format!("interior ν-lattice rank for ⟨{gen}⟩ is {rank}, expected {want}"))?;
    }
    let delta = half.slopes.delta();
    for i in 0..20 {
        let mut phi = aff(&q(r.gen_range(-70..70), 35), &one());
        for _ in 0..3 {
            let b = basic_bounded(&q(r.gen_range(-200..200), 35), &q(r.gen_range(1..20), 35), ps.choose(&mut r).unwrap());
            phi = phi.compose(&b);
        }
        let g = element(&mut r);
        let shifted = GroupContext::new(IntervalDesc::up(phi.eval(&zero())), half.slopes.clone());
        let image = pconj(&phi, &g);
        check(image.member(&shifted), || format!("conjugate {i} leaves G(φ(I))"))?;
        let gam = half.slopes.coset(&phi.eval(&zero())).unwrap().residue;
        let moved = nu(&g, &half).unwrap().relabel(|l| match l {
            OrbitLabel::Interior(x) => OrbitLabel::Interior((x + gam) % delta),
            other => other,
        });
        check(nu(&image, &shifted).unwrap() == moved, || format!("naturality fails for conjugation {i}"))?;
    }
    Ok(())
}

fn y(i: i64, p: i64) -> PLMap {
    PLMap::from_points(vec![(qi(i), qi(i)), (qi(i + 1), qi(i + p))], one(), one())
}

fn correspondences() -> Outcome {
    let e = |x: Error| x.to_string();
    for p in [2i64, 3, 5] {
        let psi = tails::make_psi2(&one(), &qi(p)).map_err(e)?.inverse();
        let z0 = tails::conj(&psi, &y(0, p)).map_err(e)?;
        check(z0 == PLMap::affine(AffineMap::translation(qi(p - 1))), || format!("z₀ for p={p}"))?;
        for i in 1..=10 {
            check(tails::conj(&psi, &y(i, p)).map_err(e)? == y(i - 1, p), || format!("z_{i} for p={p}"))?;
        }
        let phi = tails::make_phi1(&one(), &qi(p)).map_err(e)?;
        for i in 0..=2 * p {
            let lhs = tails::conj(&phi, &y(i, p)).map_err(e)?;
            let rhs = tails::reflect_conj(&xi_generator(i as u64, p as u64), &one()).map_err(e)?;
            check(lhs == rhs, || format!("μ₁,₁⁻¹(y_{i}) for p={p}"))?;
        }
    }
    let mut r = rng(707);
    let p = q(1, 2);
    let (b, bbar) = (one(), q(3, 4));
    let e07 = tails::make_e07(&b, &bbar, &p).map_err(e)?;
    let back = e07.inverse();
    let small = GroupContext::new(IntervalDesc::compact(zero(), bbar.clone()).unwrap(), sg(vec![qi(2)]));
    let big = GroupContext::new(IntervalDesc::compact(zero(), b.clone()).unwrap(), sg(vec![qi(2)]));
    let shrink = aff(&zero(), &bbar);
    for i in 0..50 {
        let f = random_tree_element(&[2], 4, &mut r);
        let g = tails::conj(&e07, &f).map_err(e)?;
        check(g.member(&small), || format!("E07 image {i} leaves G([0,b̄])"))?;
        check(tails::conj(&back, &g).map_err(e)? == f, || format!("E07 round trip {i}"))?;
        let h = pconj(&shrink, &random_tree_element(&[2], 4, &mut r));
        let k = tails::conj(&back, &h).map_err(e)?;
        check(k.member(&big), || format!("E07 preimage {i} leaves G([0,b])"))?;
        check(tails::conj(&e07, &k).map_err(e)? == h, || format!("E07 reverse round trip {i}"))?;
    }
    for i in 0..50 {
        let f = random_tree_element(&[2], 3, &mut r);
        for (m, n) in (1..=3).flat_map(|m| (1..=3).map(move |n| (m, n))) {
            check(tails::pi_of_mu(m, n, &f, &p, &b).map_err(e)?, || format!("π scaling ({m},{n}) on element {i}"))?;
        }
    }
    Ok(())
}

fn classification() -> Outcome {
    let mut r = rng(808);
    let mut all = Vec::new();
    for a in 1..=12i64 {
        for d in 1..=12 / a {
            for b in 0..a {
                let (mut u, mut v) = ((a, 0), (b, d));
                for _ in 0..4 {
                    let k = r.gen_range(-2..=2);
                    if r.gen_bool(0.5) {
                        u = (u.0 + k * v.0, u.1 + k * v.1);
                    } else {
                        v = (v.0 + k * u.0, v.1 + k * u.1);
                    }
                }
                let extra = (2 * u.0 - 3 * v.0, 2 * u.1 - 3 * v.1);
                all.push(LatticeSubgroup::new(vec![u, v, extra]));
            }
        }
    }
    check(all.len() == 127, || format!("{} subgroups of index ≤ 12", all.len()))?;
    let mut oracle = Vec::new();
    for qq in &all {
        let got = params(qq).map_err(|e| e.to_string())?;
        let (m, n, c, ds, es) = lattice_oracle(&qq.generators);
        check((got.m, got.n, got.c) == (m, n, c), || format!("(m,n,c) of {:?}", qq.generators))?;
        check(ds.len() == 1 && es.len() == 1, || format!("d, e not unique mod c for {:?}", qq.generators))?;
        check(c == 1 || (got.d == ds[0] && got.e == es[0]), || format!("(d,e) of {:?}", qq.generators))?;
        check(c == 1 || (got.d * got.e).rem_euclid(c) == 1, || format!("d·e ≢ 1 for {:?}", qq.generators))?;
        let sw = params(&qq.swap()).unwrap();
        check((sw.m, sw.n, sw.c) == (n, m, c), || format!("swap parameters of {:?}", qq.generators))?;
        check(c == 1 || (sw.d, sw.e) == (es[0], ds[0]), || format!("swap exchanges d and e for {:?}", qq.generators))?;
        oracle.push((c, ds[0], es[0]));
    }
    for (i, qa) in all.iter().enumerate() {
        check(iso_decide(qa, &qa.swap()).unwrap(), || format!("Q ≇ swap(Q) for {:?}", qa.generators))?;
        for (j, qb) in all.iter().enumerate() {
            let got = iso_decide(qa, qb).unwrap();
            let ((c, d, _), (c2, d2, e2)) = (oracle[i], oracle[j]);
            let want = c == c2 && (c == 1 || d == d2 || d == e2);
            check(got == want, || format!("iso_decide({:?}, {:?})", qa.generators, qb.generators))?;
            check(got == iso_decide(qb, qa).unwrap(), || "iso_decide is not symmetric".into())?;
            check(got == iso_decide(&qa.swap(), &qb.swap()).unwrap(), || "iso_decide is not swap invariant".into())?;
        }
    }
    Ok(())
}

fn aut_numerics() -> Outcome {
    let big = sg(vec![qi(65), qi(97)]);
    let orders: Vec<u64> = (1..=8).map(|b| big.q_b_order(&qi(5), &qi(b)).unwrap()).collect();
    check(orders == vec![8, 4, 8, 2, 8, 4, 8, 1], || format!("orders {orders:?}"))?;
    let classes = big.interval_iso_classes().len();
    check(classes == 10, || format!("{classes} classes"))
}

fn higman() -> Outcome {
    let mut r = rng(1010);
    let contexts = [(unit_ctx(vec![qi(2)]), 2, vec![qi(2), q(1, 2)]), (unit_ctx(vec![qi(2), qi(3)]), 6, vec![qi(2), qi(3), q(2, 3)])];
    for i in 0..50 {
        let (ctx, n, slopes) = &contexts[i % 2];
        let x = bounded_product(&zero(), &one(), *n, slopes, 2, &mut r);
        let y = bounded_product(&zero(), &one(), *n, slopes, 2, &mut r);
        let z = random_bounded(&zero(), &one(), *n, slopes, &mut r);
        let u = higman_witness(&x, &y, &z, ctx).map_err(|e| e.to_string())?;
        check(u.member(ctx) && u.has_bounded_support(), || format!("witness {i} is not in B"))?;
        check(commutator_identity_check(&x, &y, &z, &u), || format!("identity fails for triple {i}"))?;
    }
    Ok(())
}

fn density() -> Outcome {
    let ctx = GroupContext::thompson();
    let eps = q(1, 1024);
    let targets: Vec<(&str, Box<dyn Fn(&Q) -> Q>)> = vec![
        ("t^2", Box::new(|t: &Q| t * t)),
        ("t^3", Box::new(|t: &Q| t * t * t)),
        ("t^5", Box::new(|t: &Q| qpow(t, 5))),
        ("2t/(1+t)", Box::new(|t: &Q| qi(2) * t / (one() + t))),
        ("t(2-t)", Box::new(|t: &Q| t * (qi(2) - t))),
        ("t/(3-2t)", Box::new(|t: &Q| t / (qi(3) - qi(2) * t))),
        ("(t+t^3)/2", Box::new(|t: &Q| (t + t * t * t) / qi(2))),
        ("1-(1-t)^2", Box::new(|t: &Q| one() - (one() - t) * (one() - t))),
        ("7t/(1+6t)", Box::new(|t: &Q| qi(7) * t / (one() + qi(6) * t))),
        ("t^2(3-2t)", Box::new(|t: &Q| t * t * (qi(3) - qi(2) * t))),
    ];
    for (k, (name, g)) in targets.iter().enumerate() {
        let den = [16, 10, 12, 20, 7][k % 5];
        let samples: Vec<(Q, Q)> = (0..=den).map(|i| (q(i, den), g(&q(i, den)))).collect();
        let f = approximate(&samples, &eps, &ctx).map_err(|e| format!("{name}: {e}"))?;
        check(f.member(&ctx), || format!("{name}: not in F"))?;
        let err = sample_error(&f, &samples);
        check(err <= eps, || format!("{name}: error {err} exceeds 2^-10"))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let suites: [(&str, fn() -> Outcome, f64); 11] = [
        ("exact group laws", group_laws, 10.0),
        ("interval mapping iff congruence", interval_mapping, 30.0),
        ("presentation verification", presentations, 20.0),
        ("normal forms", normal_forms, 10.0),
        ("subdivision round trips", subdivisions, 60.0),
        ("break homomorphism", nu_suite, 30.0),
        ("tail correspondences", correspondences, 60.0),
        ("finite-index classification", classification, 20.0),
        ("Aut and Q_b numerics", aut_numerics, 5.0),
        ("Higman identity", higman, 20.0),
        ("density", density, 10.0),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in suites.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let secs = t.elapsed().as_secs_f64();
        let res = res.and_then(|_| check(secs < *budget, || format!("took {secs:.1}s")));
        match &res {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s, budget {budget}s)", i + 1),
            Err(m) => {
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s, budget {budget}s): {m}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
