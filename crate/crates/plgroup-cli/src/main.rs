use clap::{Args, Parser, Subcommand, ValueEnum};
use plgroup::breakhom::{epsilon, gamma, nu};
use plgroup::construct::{approximate, map_interval, tuple_map};
use plgroup::io::*;
use plgroup::plmap::{GroupContext, IntervalDesc, PLMap};
use plgroup::rational::parse_q;
use plgroup::ring::SlopeGroup;
use plgroup::subdivide::{decompose, eval_symbols, factor};
use plgroup::tails::{self, LatticeSubgroup};
use plgroup::words::{self, Letter, Presentation, Word};
use plgroup::{Error, Q};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::process::ExitCode;

/// Exact computations in the groups G(I;A,P) of PL homeomorphisms.
#[derive(Parser)]
#[command(name = "plgroup", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Args, Clone)]
struct CtxArgs {
    /// Context file: {"interval": {...}, "slopes": [...]}.
    #[arg(long)]
    ctx: Option<String>,
    /// Slope generators, e.g. "65,97" or "3/2"; the interval is then R.
    #[arg(long)]
    p: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    MapInterval,
    Tuple,
    Approximate,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresKind {
    GpInfinite,
    GpFinite,
    Ghalf,
    Gpp,
    F,
}

#[derive(Args, Clone)]
struct PresArgs {
    #[arg(long, value_enum, default_value = "gp-infinite")]
    pres: PresKind,
    /// The integer p of G[p].
    #[arg(long = "p", default_value_t = 2)]
    p: u64,
    /// The set 𝒫 for G(𝒫), e.g. "2,3".
    #[arg(long)]
    pp: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TailKind {
    Phi1,
    Psi2,
    E07,
    MuM,
    NuN,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants of A = Z[P] and P: primes, δ, rank, Aut_o(A).
    RingInfo {
        #[arg(long)]
        p: String,
    },
    /// Build an element: map one interval onto another, a tuple onto a tuple, or approximate.
    Construct {
        #[arg(value_enum)]
        mode: Mode,
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
        /// Comma-separated points (tuple mode).
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        images: Option<String>,
        /// Samples file [[t, g(t)], …] (approximate mode).
        #[arg(long = "in")]
        input: Option<String>,
        #[arg(long, default_value = "1/1024")]
        eps: String,
    },
    /// Compose maps given in order f₁ ∘ f₂ ∘ ….
    Compose {
        #[arg(long = "in", required = true)]
        input: Vec<String>,
    },
    Invert {
        #[arg(long = "in")]
        input: String,
    },
    Eval {
        #[arg(long = "in")]
        input: String,
        #[arg(long, allow_hyphen_values = true, required = true)]
        at: Vec<String>,
    },
    /// Membership in G(I;A,P); without a context, Thompson's group F.
    Member {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long = "in")]
        input: String,
    },
    /// The break vector ν(f), its augmentation, and the class γ(f).
    Nu {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long = "in")]
        input: String,
    },
    /// Factor f ∈ G[𝒫] as the interpolation of two regular subdivisions.
    Factor {
        #[arg(long)]
        pp: String,
        #[arg(long = "in")]
        input: String,
    },
    /// Write f ∈ G[𝒫] as a word in the generators.
    Decompose {
        #[arg(long)]
        pp: String,
        #[arg(long = "in")]
        input: String,
    },
    /// Seminormal form of a word in G[p].
    Normalform {
        #[command(flatten)]
        pres: PresArgs,
        #[command(flatten)]
        word: WordArgs,
    },
    Wordproblem {
        #[command(flatten)]
        pres: PresArgs,
        #[command(flatten)]
        word: WordArgs,
    },
    VerifyPresentation {
        #[command(flatten)]
        pres: PresArgs,
        #[arg(long, default_value_t = 8)]
        bound: u64,
    },
    /// Isomorphism classes of the groups G([0,b];A,P), and orders of s in Q_b.
    IsoClasses {
        #[arg(long)]
        p: String,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 8)]
        bound: u64,
    },
    /// Decide whether two finite-index subgroups above B are isomorphic, from Q = π(G).
    SubgroupIso {
        /// Generators "x,y;x,y;…".
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        qbar: String,
    },
    /// Conjugate a map by an infinitary tail map.
    ConjugateTail {
        #[arg(long, value_enum)]
        map: TailKind,
        /// e.g. "b=1,p=2", "b=1,bbar=3/4,p=1/2", "m=2,b=1,p=1/2".
        #[arg(long)]
        params: String,
        /// Conjugate by the inverse instead.
        #[arg(long)]
        inverse: bool,
        #[arg(long = "in")]
        input: String,
    },
    /// Rectangle diagram as SVG.
    RenderSvg {
        #[arg(long = "in")]
        input: String,
        /// "lo,hi"
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, default_value_t = 600)]
        width: u32,
        #[arg(long, default_value_t = 240)]
        height: u32,
    },
}

#[derive(Args, Clone)]
struct WordArgs {
    /// Space-separated letters, e.g. "x0 x1^-1".
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    /// Word file {"presentation": {...}, "word": [...]}.
    #[arg(long = "in")]
    input: Option<String>,
    /// Use a random word of this length (seeded by PLGROUP_SEED).
    #[arg(long)]
    random: Option<usize>,
}

enum Fail {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Parse(m) => Fail::Usage(m),
            e => Fail::Domain(e),
        }
    }
}

type Out = Result<Output, Fail>;

enum Output {
    Json(Value),
    Text(String),
}

fn usage(m: impl Into<String>) -> Fail {
    Fail::Usage(m.into())
}

fn read_text(path: &str) -> Result<String, Fail> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(e.to_string()))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value, Fail> {
    serde_json::from_str(&read_text(path)?).map_err(|e| usage(format!("{path}: {e}")))
}

fn read_map(path: &str) -> Result<PLMap, Fail> {
    Ok(plmap_from_json(&read_json(path)?)?)
}

fn q_list(s: &str) -> Result<Vec<Q>, Fail> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| Ok(parse_q(x.trim())?)).collect()
}

fn u_list(s: &str) -> Result<Vec<u64>, Fail> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| usage(format!("not a positive integer: {x}"))))
        .collect()
}

fn need<'a>(x: &'a Option<String>, name: &str) -> Result<&'a str, Fail> {
    x.as_deref().ok_or_else(|| usage(format!("--{name} is required")))
}

fn context(c: &CtxArgs) -> Result<GroupContext, Fail> {
    if let Some(path) = &c.ctx {
        return Ok(context_from_json(&read_json(path)?)?);
    }
    if let Some(p) = &c.p {
        return Ok(GroupContext::new(IntervalDesc::line(), SlopeGroup::new(q_list(p)?)?));
    }
    Ok(GroupContext::thompson())
}

fn presentation(a: &PresArgs) -> Result<Presentation, Fail> {
    let pres = match a.pres {
        PresKind::GpInfinite => Presentation::GpInfinite { p: a.p },
        PresKind::GpFinite => Presentation::GpFinite { p: a.p },
        PresKind::Ghalf => Presentation::GhalfFinite { p: a.p },
        PresKind::F => Presentation::FClassic,
        PresKind::Gpp => {
            let pp = u_list(need(&a.pp, "pp")?)?;
            let p0 = *pp.iter().min().ok_or_else(|| usage("--pp is empty"))?;
            Presentation::Gpp { pp, p0 }
        }
    };
    pres.validate()?;
    Ok(pres)
}

fn seed() -> u64 {
    std::env::var("PLGROUP_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn word(pres: Presentation, a: &WordArgs) -> Result<Word, Fail> {
    if let Some(n) = a.random {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed());
        let rank = pres.rank().unwrap_or(5);
        let letters = (0..n)
            .map(|_| Letter::new(rng.gen_range(0..rank), if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        return Ok(Word::new(pres, letters));
    }
    if let Some(path) = &a.input {
        return Ok(word_from_json(&read_json(path)?)?);
    }
    let toks: Vec<String> = need(&a.word, "word")?.split_whitespace().map(String::from).collect();
    Ok(Word::parse(pres, &toks)?)
}

fn run(cmd: Cmd) -> Out {
    let json = |v: Value| Ok(Output::Json(v));
    match cmd {
        Cmd::RingInfo { p } => {
            let g = SlopeGroup::new(q_list(&p)?)?;
            json(json!({
                "slopes": slopes_to_json(&g),
                "n": g.n().to_string(),
                "primes": g.primes(),
                "rank": g.rank(),
                "is_basis": g.is_basis(),
                "delta": g.delta(),
                "aut_o_basis": g.aut_o_basis(),
            }))
        }
        Cmd::Construct { mode, ctx, a, c, a2, c2, points, images, input, eps } => {
            let ctx = context(&ctx)?;
            let f = match mode {
                Mode::MapInterval => {
                    let get = |x: &Option<String>, n: &str| -> Result<Q, Fail> { Ok(parse_q(need(x, n)?)?) };
                    map_interval(&get(&a, "a")?, &get(&c, "c")?, &get(&a2, "a2")?, &get(&c2, "c2")?, &ctx.slopes)?
                }
                Mode::Tuple => tuple_map(&q_list(need(&points, "points")?)?, &q_list(need(&images, "images")?)?, &ctx)?,
                Mode::Approximate => {
                    let v = read_json(need(&input, "in")?)?;
                    let samples = v
                        .as_array()
                        .ok_or_else(|| usage("samples must be an array of [t, g(t)]"))?
                        .iter()
                        .map(|s| match s.as_array().map(|a| a.as_slice()) {
                            Some([t, y]) => Ok((q_from_json(t)?, q_from_json(y)?)),
                            _ => Err(usage("samples must be [t, g(t)] pairs")),
                        })
                        .collect::<Result<Vec<_>, Fail>>()?;
                    approximate(&samples, &parse_q(&eps)?, &ctx)?
                }
            };
            json(plmap_to_json(&f))
        }
        Cmd::Compose { input } => {
            let mut f = PLMap::identity();
            for path in &input {
                f = f.compose(&read_map(path)?);
            }
            json(plmap_to_json(&f))
        }
        Cmd::Invert { input } => json(plmap_to_json(&read_map(&input)?.inverse())),
        Cmd::Eval { input, at } => {
            let f = read_map(&input)?;
            let vals: Vec<Value> = at
                .iter()
                .map(|t| Ok(q_to_json(&f.eval(&parse_q(t)?))))
                .collect::<Result<_, Fail>>()?;
            json(json!({"values": vals}))
        }
        Cmd::Member { ctx, input } => {
            let ctx = context(&ctx)?;
            let f = read_map(&input)?;
            let mut out = json!({"member": f.member(&ctx)});
            if let Some(v) = f.violation(&ctx) {
                out["reason"] = json!(v.to_string());
            }
            json(out)
        }
        Cmd::Nu { ctx, input } => {
            let ctx = context(&ctx)?;
            let f = read_map(&input)?;
            let v = nu(&f, &ctx)?;
            let mut out = json!({
                "nu": break_vector_to_json(&v),
                "epsilon": epsilon(&v, ctx.slopes.rank()),
            });
            if ctx.interval.lo.is_none() || ctx.interval.hi.is_none() || f.has_bounded_support() {
                if let Ok(g) = gamma(&f, &ctx) {
                    out["gamma"] = json!(g.residue);
                }
            }
            json(out)
        }
        Cmd::Factor { pp, input } => {
            let (d, d2) = factor(&read_map(&input)?, &u_list(&pp)?)?;
            json(json!({"domain": code_to_json(&d), "range": code_to_json(&d2)}))
        }
        Cmd::Decompose { pp, input } => {
            let f = read_map(&input)?;
            let w = decompose(&f, &u_list(&pp)?)?;
            if eval_symbols(&w) != f {
                return Err(Fail::Domain(Error::MethodDisagreement("decomposition does not evaluate to the input".into())));
            }
            json(json!({"word": symbols_to_json(&w), "length": w.len()}))
        }
        Cmd::Normalform { pres, word: wa } => {
            let w = word(presentation(&pres)?, &wa)?;
            let s = words::seminormal(&w)?;
            json(word_to_json(&s))
        }
        Cmd::Wordproblem { pres, word: wa } => {
            let w = word(presentation(&pres)?, &wa)?;
            json(json!({"word": w.tokens(), "trivial": words::word_problem(&w)?}))
        }
        Cmd::VerifyPresentation { pres, bound } => {
            let rep = words::verify_presentation(&presentation(&pres)?, bound)?;
            json(serde_json::to_value(rep).expect("report serializes"))
        }
        Cmd::IsoClasses { p, s, bound } => {
            let g = SlopeGroup::new(q_list(&p)?)?;
            let classes = g.interval_iso_classes();
            let mut out = json!({"delta": g.delta(), "count": classes.len(), "classes": classes});
            if let Some(s) = s {
                let s = parse_q(&s)?;
                let orders = (1..=bound as i64)
                    .map(|b| g.q_b_order(&s, &Q::from_integer(b.into())))
                    .collect::<Result<Vec<_>, _>>()?;
                out["q_b_orders"] = json!(orders);
            }
            json(out)
        }
        Cmd::SubgroupIso { q, qbar } => {
            let lattice = |s: &str| -> Result<LatticeSubgroup, Fail> {
                let gens = s
                    .split(';')
                    .map(|pr| match pr.split(',').map(|x| x.trim().parse::<i64>()).collect::<Vec<_>>().as_slice() {
                        [Ok(x), Ok(y)] => Ok((*x, *y)),
                        _ => Err(usage(format!("bad generator {pr:?}; expected x,y"))),
                    })
                    .collect::<Result<Vec<_>, Fail>>()?;
                Ok(LatticeSubgroup::new(gens))
            };
            let (q, qbar) = (lattice(&q)?, lattice(&qbar)?);
            json(json!({
                "q": tails::params(&q)?,
                "qbar": tails::params(&qbar)?,
                "isomorphic": tails::iso_decide(&q, &qbar)?,
            }))
        }
        Cmd::ConjugateTail { map, params, inverse, input } => {
            let mut kv = std::collections::HashMap::new();
            for item in params.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("bad parameter {item:?}")))?;
                kv.insert(k.trim().to_string(), v.trim().to_string());
            }
            let get = |k: &str| -> Result<Q, Fail> {
                Ok(parse_q(kv.get(k).ok_or_else(|| usage(format!("missing parameter {k}")))?)?)
            };
            let int = |k: &str| -> Result<u32, Fail> {
                kv.get(k)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| usage(format!("missing integer parameter {k}")))
            };
            let tm = match map {
                TailKind::Phi1 => tails::make_phi1(&get("b")?, &get("p")?)?,
                TailKind::Psi2 => tails::make_psi2(&get("b")?, &get("p")?)?,
                TailKind::E07 => tails::make_e07(&get("b")?, &get("bbar")?, &get("p")?)?,
                TailKind::MuM => tails::make_mu_m(int("m")?, &get("b")?, &get("p")?)?,
                TailKind::NuN => tails::make_nu_n(int("n")?, &get("b")?, &get("p")?)?,
            };
            let tm = if inverse { tm.inverse() } else { tm };
            json(plmap_to_json(&tails::conj(&tm, &read_map(&input)?)?))
        }
        Cmd::RenderSvg { input, window, width, height } => {
            let f = read_map(&input)?;
            let window = match window {
                Some(w) => match q_list(&w)?.as_slice() {
                    [lo, hi] => Some((lo.clone(), hi.clone())),
                    _ => return Err(usage("--window expects lo,hi")),
                },
                None => None,
            };
            Ok(Output::Text(plgroup::svg::render_svg(&f, window, width, height)?))
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": e.code(), "message": e.to_string()});
    if let Error::CongruenceViolated { delta } = e {
        v["delta"] = json!(delta);
    }
    v
}

fn emit(text: &str, out: &Option<String>) -> Result<(), Fail> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{path}: {e}"))),
        // A closed pipe (e.g. `| head`) is not an error.
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(cli.cmd).and_then(|o| match o {
        Output::Json(v) => emit(&serde_json::to_string_pretty(&v).expect("json"), &cli.out),
        Output::Text(t) => emit(t.trim_end(), &cli.out),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Domain(e)) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", error_json(&e));
            ExitCode::from(2)
        }
    }
}
