use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use pdo_core::cmtools::{self, CmConfig, CurveLocalization};
use pdo_core::diffop::{pairwise_commutators, parse_operator, ParseOptions};
use pdo_core::glue::{self, fmt_xh, GlueConfig, GlueInput, MonomialAlgebra};
use pdo_core::json::{OperatorInput, OperatorJson, PairJson, RingJson, ScalarJson, WindowJson};
use pdo_core::schur::{self, SchurConfig, SubspaceUT};
use pdo_core::selftest::{self, SelftestConfig};
use pdo_core::spectral::{self, AnalyzeConfig, GradedConfig, RingPresentation};
use pdo_core::{DiffOp, Error, Poly, Precision, Scalar};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::Report;

#[derive(Args, Debug)]
pub struct CommuteArgs {
    /// Operator expression, e.g. "d1*d2 + inv(1-x2)*E*d1". Repeatable.
    #[arg(long = "op")]
    pub ops: Vec<String>,
    /// Files holding operators: a ring or operator JSON document, or one
    /// expression per line.
    pub files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Ring file, `{"generators": [...]}` or one expression per line.
    #[arg(long)]
    pub ring: Option<PathBuf>,
    /// Generator expression. Repeatable.
    #[arg(long = "op")]
    pub ops: Vec<String>,
    /// Expected data rank; the report then says whether (C^n) equals it.
    #[arg(long)]
    pub rank: Option<u32>,
    /// Lower end of the fit window (default mmax/2).
    #[arg(long = "fit-lo")]
    pub fit_lo: Option<usize>,
    /// Upper end of the fit window (default mmax).
    #[arg(long = "fit-hi")]
    pub fit_hi: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SchurArgs {
    /// Pair file `{"A": ..., "W": ..., "d": ...}`.
    #[arg(long)]
    pub pair: PathBuf,
    /// Overrides the `d` of the pair file (default 1).
    #[arg(long)]
    pub d: Option<u32>,
}

#[derive(Args, Debug)]
pub struct GlueArgs {
    /// Generators of the ideal I of k[x,h], comma separated.
    #[arg(long)]
    pub ideal: String,
    /// Generators of the subring R of k[x,h], comma separated.
    #[arg(long)]
    pub subring: String,
}

#[derive(Args, Debug)]
pub struct CmArgs {
    /// Monomial generators of a subalgebra of k[x,h], comma separated.
    #[arg(long)]
    pub algebra: String,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    /// Rational function in x and h.
    #[arg(long = "fn")]
    pub function: String,
    /// Prime divisors, comma separated.
    #[arg(long)]
    pub primes: String,
    /// Accept nonlinear primes without an irreducibility check.
    #[arg(long)]
    pub assume_irreducible: bool,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Run a single criterion (1 to 10).
    #[arg(long)]
    pub only: Option<u32>,
}

fn scalar(c: &Scalar) -> Value {
    json!(ScalarJson::from(c))
}

fn xi_names(n: usize) -> Vec<String> {
    Poly::default_names("xi", n)
}

fn fmt_xi(p: &Poly) -> String {
    let names = xi_names(p.nvars());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    p.fmt_with(&refs)
}

fn precision_value(p: Precision) -> Value {
    match p {
        Precision::Exact => json!("exact"),
        Precision::Trunc(n) => json!(n),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Splits a file into operator inputs plus optional header values.
fn file_inputs(path: &Path) -> anyhow::Result<RingJson> {
    let src = read(path)?;
    let trimmed = src.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("{} holds no operators", path.display()),
        }
        .into());
    }
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed).map_err(Error::from)?;
        if v.get("generators").is_some() {
            return Ok(serde_json::from_value(v).map_err(Error::from)?);
        }
        let op: OperatorJson = serde_json::from_value(v).map_err(Error::from)?;
        return Ok(RingJson {
            nvars: None,
            precision: None,
            generators: vec![OperatorInput::Json(op)],
        });
    }
    if trimmed.starts_with('[') {
        let generators: Vec<OperatorInput> = serde_json::from_str(trimmed).map_err(Error::from)?;
        return Ok(RingJson {
            nvars: None,
            precision: None,
            generators,
        });
    }
    let generators = trimmed
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| OperatorInput::Expr(l.to_string()))
        .collect();
    Ok(RingJson {
        nvars: None,
        precision: None,
        generators,
    })
}

/// Turns the inputs into operators with a common number of variables.
fn build_ops(rings: &[RingJson], cfg: &RunConfig) -> anyhow::Result<Vec<DiffOp>> {
    let mut nvars = rings.iter().filter_map(|r| r.nvars).max();
    if nvars.is_none() {
        let mut inferred = 0;
        for r in rings {
            for g in &r.generators {
                let n = match g {
                    OperatorInput::Json(j) => j.nvars,
                    OperatorInput::Expr(e) => parse_operator(
                        e,
                        ParseOptions {
                            nvars: None,
                            precision: cfg.precision,
                        },
                    )?
                    .nvars(),
                };
                inferred = inferred.max(n);
            }
        }
        nvars = Some(inferred);
    }
    let mut out = Vec::new();
    for r in rings {
        let opts = ParseOptions {
            nvars,
            precision: r.precision.unwrap_or(cfg.precision),
        };
        for g in &r.generators {
            out.push(match g {
                OperatorInput::Expr(e) => parse_operator(e, opts)?,
                OperatorInput::Json(j) => DiffOp::try_from(j)?,
            });
        }
    }
    if out.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "no operators given".into(),
        }
        .into());
    }
    Ok(out)
}

fn gather(ops: &[String], files: &[PathBuf], cfg: &RunConfig) -> anyhow::Result<Vec<DiffOp>> {
    let mut rings = Vec::new();
    for f in files {
        rings.push(file_inputs(f)?);
    }
    if !ops.is_empty() {
        rings.push(RingJson {
            nvars: None,
            precision: None,
            generators: ops.iter().cloned().map(OperatorInput::Expr).collect(),
        });
    }
    build_ops(&rings, cfg)
}

pub fn commute(args: &CommuteArgs, cfg: &RunConfig) -> anyhow::Result<Report> {
    let ops = gather(&args.ops, &args.files, cfg)?;
    let mut pairs = Vec::new();
    let mut text = String::new();
    let mut all_zero = true;
    for ((i, j), c) in pairwise_commutators(&ops, cfg.strategy()) {
        let c = c?;
        all_zero &= c.is_zero();
        let _ = writeln!(text, "[P{}, P{}] = {c}", i + 1, j + 1);
        pairs.push(json!({
            "i": i + 1,
            "j": j + 1,
            "vanishes": c.is_zero(),
            "precision": precision_value(c.precision()),
            "commutator": c.fmt_expr(),
            "operator": OperatorJson::from(&c),
        }));
    }
    let _ = writeln!(
        text,
        "{}",
        if all_zero {
            "all commutators vanish"
        } else {
            "some commutator is nonzero"
        }
    );
    Ok(Report {
        positive: all_zero,
        result: json!({
            "operators": ops.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "all_commute": all_zero,
            "pairs": pairs,
        }),
        text,
    })
}

pub fn analyze(args: &AnalyzeArgs, cfg: &RunConfig) -> anyhow::Result<Report> {
    let files: Vec<PathBuf> = args.ring.iter().cloned().collect();
    let ops = gather(&args.ops, &files, cfg)?;
    let ring = RingPresentation::new(ops, cfg.strategy())?;
    let window = match (args.fit_lo, args.fit_hi) {
        (None, None) => None,
        (lo, hi) => Some((
            lo.unwrap_or(cfg.mmax as usize / 2),
            hi.unwrap_or(cfg.mmax as usize),
        )),
    };
    let acfg = AnalyzeConfig {
        graded: GradedConfig {
            mmax: cfg.mmax,
            strategy: cfg.strategy(),
            ..GradedConfig::default()
        },
        window,
        rank: args.rank,
        seed: cfg.seed,
        ..AnalyzeConfig::default()
    };
    let r = spectral::analyze_ring(&ring, &acfg)?;
    let rees: Vec<Value> = r
        .rees_generators
        .iter()
        .map(|(p, d)| json!({ "symbol": fmt_xi(p), "degree": d }))
        .collect();
    let result = json!({
        "generators": ring.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "commutation_precision": r.commutation_precision,
        "symbol_check": r.symbol_check,
        "jacobian_nonzero": r.jacobian_nonzero,
        "filtration": r.table,
        "fit_window": [r.window.0, r.window.1],
        "leading_coeff": scalar(&r.leading_coeff),
        "self_intersection": scalar(&r.self_intersection),
        "ba_rank": scalar(&r.ba_rank),
        "ba_rank_from_l": scalar(&r.ba_rank_from_l),
        "rees_generators": rees,
        "trdeg": r.trdeg,
        "coherent_of_rank": r.coherent_of_rank,
    });
    let mut text = String::new();
    let _ = writeln!(text, "generators: {}", ring.generators().len());
    let show = r.table.dims.len().min(11);
    let _ = writeln!(text, "dim B_m (m < {show}): {:?}", &r.table.dims[..show]);
    let _ = writeln!(text, "leading coefficient: {}", r.leading_coeff);
    let _ = writeln!(text, "(C^n) = {}", r.self_intersection);
    let _ = writeln!(text, "rk L = {} (from L: {})", r.ba_rank, r.ba_rank_from_l);
    let degs: Vec<u32> = r.rees_generators.iter().map(|(_, d)| *d).collect();
    let _ = writeln!(text, "Rees generator degrees: {degs:?}");
    if let Some(c) = r.coherent_of_rank {
        let _ = writeln!(text, "(C^n) equals the given rank: {c}");
    }
    Ok(Report {
        positive: r.coherent_of_rank.unwrap_or(true),
        result,
        text,
    })
}

/// Reads a pair file, filling in missing windows from the config.
fn load_pair(path: &Path, cfg: &RunConfig) -> anyhow::Result<PairJson> {
    let mut v: Value = serde_json::from_str(&read(path)?).map_err(Error::from)?;
    let window = serde_json::to_value(WindowJson::from(cfg.window()))?;
    for key in ["A", "W"] {
        if let Some(obj) = v.get_mut(key).and_then(Value::as_object_mut) {
            obj.entry("window").or_insert_with(|| window.clone());
        }
    }
    Ok(serde_json::from_value(v).map_err(Error::from)?)
}

pub fn schur(args: &SchurArgs, cfg: &RunConfig) -> anyhow::Result<Report> {
    let pair = load_pair(&args.pair, cfg)?;
    let a = SubspaceUT::try_from(&pair.a)?;
    let w = SubspaceUT::try_from(&pair.w)?;
    let d = args.d.or(pair.d).unwrap_or(1);
    anyhow::ensure!(d > 0, "d must be positive");
    let scfg = SchurConfig {
        strategy: cfg.strategy(),
        ..SchurConfig::default()
    };
    let n = cfg.nmax;
    // ranks whose levels n*d*r leave the window cannot be tested
    let depth = (-w.window.tmin).max(0) as u32;
    let r_max = cfg.rank_search.min(depth / (n * d));
    anyhow::ensure!(
        r_max > 0,
        "level {} exceeds the window; raise --window-tmin or lower --nmax",
        n * d
    );
    let w_dims = w.filtration_dims(1, n, &scfg)?;
    let rank = match schur::detect_rank(&w, d, n, r_max, &scfg) {
        Ok(r) => Some(r),
        Err(Error::NoRankFits(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let stable = schur::check_stability(&a, &w, n, &scfg)?;
    let witnesses = match rank {
        Some(r) => Some(schur::fg_witness(&a, &w, r, n, &scfg)?),
        None => None,
    };
    let (growth, growth_note) = match schur::algebra_growth(&a, n, 2 * n, &scfg) {
        Ok(g) => (Some(g), None),
        Err(e @ (Error::InvalidInput(_) | Error::NotStabilized(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let mut text = String::new();
    let _ = writeln!(text, "dim W_n (n <= {n}): {w_dims:?}");
    match rank {
        Some(r) => {
            let _ = writeln!(text, "rank: {r}");
        }
        None => {
            let _ = writeln!(text, "no rank <= {r_max} fits");
        }
    }
    let _ = writeln!(text, "A W in W: {stable}");
    if let Some(ws) = &witnesses {
        let counts: Vec<usize> = ws.iter().map(Vec::len).collect();
        let _ = writeln!(text, "new generators per level: {counts:?}");
    }
    if let Some(g) = &growth {
        let _ = writeln!(text, "(C^2) = {}", g.self_intersection);
    }
    if let Some(note) = &growth_note {
        let _ = writeln!(text, "no growth data: {note}");
    }
    let witnesses_json = witnesses.as_ref().map(|ws| {
        ws.iter()
            .enumerate()
            .map(|(i, v)| {
                json!({
                    "level": i + 1,
                    "elements": v.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>()
    });
    let infinitely_generated = witnesses
        .as_ref()
        .map(|ws| ws.iter().all(|v| !v.is_empty()));
    let growth_json = growth.as_ref().map(|g| {
        json!({
            "dims": g.dims,
            "delta": g.delta,
            "veronese_d": g.veronese_d,
            "period": g.period,
            "leading_coeff": scalar(&g.leading_coeff),
            "self_intersection": scalar(&g.self_intersection),
            "generator_degrees": g.generator_degrees.iter()
                .map(|(f, deg)| json!({ "generator": f.to_string(), "degree": deg }))
                .collect::<Vec<_>>(),
        })
    });
    Ok(Report {
        positive: rank.is_some() && stable,
        result: json!({
            "d": d,
            "rank_search": r_max,
            "w_dims": w_dims,
            "rank": rank,
            "stable": stable,
            "witnesses": witnesses_json,
            "witness_at_every_level": infinitely_generated,
            "algebra_growth": growth_json,
            "algebra_growth_note": growth_note,
        }),
        text,
    })
}

fn xh_list(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(fmt_xh).collect()
}

fn glue_config(cfg: &RunConfig, default_budget: u32) -> GlueConfig {
    GlueConfig {
        budget: cfg.budget.unwrap_or(default_budget),
        strategy: cfg.strategy(),
        ..GlueConfig::default()
    }
}

/// The conductor, or `None` when the budget finds no element.
fn conductor(a: &MonomialAlgebra, gcfg: &GlueConfig) -> anyhow::Result<Option<Vec<Poly>>> {
    match a.conductor(gcfg) {
        Ok(c) => Ok(Some(c)),
        Err(Error::NoConductorFound(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn glue(args: &GlueArgs, cfg: &RunConfig) -> anyhow::Result<Report> {
    let input = GlueInput {
        ideal_gens: cmtools::parse_poly_list(&args.ideal)?,
        subring_gens: cmtools::parse_poly_list(&args.subring)?,
    };
    let gcfg = glue_config(cfg, GlueConfig::default().budget);
    let g = glue::glue_affine(&input, &gcfg)?;
    let cond = conductor(&g.algebra, &gcfg)?;
    let cert = &g.certificate;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "R + I = k[{}]",
        xh_list(g.algebra.generators()).join(", ")
    );
    let _ = writeln!(
        text,
        "monic relation of {} over k[{}]: degree {}",
        fmt_xh(&cert.f2),
        fmt_xh(&cert.f1),
        cert.coeffs.len()
    );
    match &cond {
        Some(c) => {
            let _ = writeln!(text, "conductor: ({})", xh_list(c).join(", "));
        }
        None => {
            let _ = writeln!(text, "no conductor element up to degree {}", gcfg.budget);
        }
    }
    Ok(Report {
        positive: cond.is_some(),
        result: json!({
            "generators": xh_list(g.algebra.generators()),
            "seed": xh_list(&g.seed),
            "saturation": xh_list(&g.saturation),
            "certificate": {
                "f1": fmt_xh(&cert.f1),
                "f2": fmt_xh(&cert.f2),
                "coeffs": xh_list(&cert.coeffs),
                "b": fmt_xh(&cert.b),
                "holds": cert.holds(),
            },
            "conductor": cond.as_deref().map(xh_list),
            "budget": g.budget,
        }),
        text,
    })
}

pub fn cm(args: &CmArgs, cfg: &RunConfig) -> anyhow::Result<Report> {
    let a = MonomialAlgebra::new(cmtools::parse_poly_list(&args.algebra)?)?;
    let ccfg = CmConfig {
        glue: glue_config(cfg, CmConfig::default().glue.budget),
    };
    let closure = cmtools::s2_closure(&a, &ccfg)?;
    let is_cm = closure.trace.is_empty();
    let cond = conductor(&a, &ccfg.glue)?;
    let trace: Vec<Value> = closure
        .trace
        .iter()
        .map(|s| {
            json!({
                "iteration": s.iteration,
                "adjoined": fmt_xh(&s.adjoined),
                "witness": [fmt_xh(&s.witness.0), fmt_xh(&s.witness.1)],
            })
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "Cohen-Macaulay: {is_cm}");
    let _ = writeln!(
        text,
        "closure: k[{}]",
        xh_list(closure.algebra.generators()).join(", ")
    );
    for s in &closure.trace {
        let _ = writeln!(
            text,
            "  step {}: adjoin {} (witnesses {}, {})",
            s.iteration,
            fmt_xh(&s.adjoined),
            fmt_xh(&s.witness.0),
            fmt_xh(&s.witness.1)
        );
    }
    Ok(Report {
        positive: true,
        result: json!({
            "is_cm": is_cm,
            "closure_generators": xh_list(closure.algebra.generators()),
            "conductor": cond.as_deref().map(xh_list),
            "trace": trace,
            "budget": closure.budget,
        }),
        text,
    })
}

pub fn cycle(args: &CycleArgs, _cfg: &RunConfig) -> anyhow::Result<Report> {
    let g = cmtools::parse_rational(&args.function)?;
    let primes = cmtools::parse_poly_list(&args.primes)?
        .into_iter()
        .map(|p| {
            if args.assume_irreducible {
                CurveLocalization::assume_irreducible(p)
            } else {
                CurveLocalization::new(p)
            }
        })
        .collect::<pdo_core::Result<Vec<_>>>()?;
    let c = cmtools::cycle_of(&g, &primes)?;
    let orders: Vec<Value> = primes
        .iter()
        .map(|loc| {
            Ok(json!({
                "prime": fmt_xh(loc.prime()),
                "order": cmtools::ord_along(&g, loc)?,
            }))
        })
        .collect::<pdo_core::Result<Vec<_>>>()?;
    Ok(Report {
        positive: true,
        result: json!({
            "function": format!("({}) / ({})", fmt_xh(&g.num), fmt_xh(&g.den)),
            "orders": orders,
            "cycle": c.to_string(),
        }),
        text: format!("div = {c}\n"),
    })
}

pub fn selftest(args: &SelftestArgs, cfg: &RunConfig) -> anyhow::Result<Report> {
    let scfg = SelftestConfig {
        seed: cfg.seed,
        strategy: cfg.strategy(),
    };
    let outcomes = match args.only {
        Some(id) => {
            anyhow::ensure!((1..=10).contains(&id), "criteria are numbered 1 to 10");
            vec![selftest::run(id, &scfg)]
        }
        None => selftest::run_all(&scfg),
    };
    let passed = outcomes.iter().all(|o| o.passed);
    let mut text = String::new();
    for o in &outcomes {
        let mark = if o.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            text,
            "{mark} criterion {}: {} ({})",
            o.id, o.title, o.detail
        );
    }
    // timings vary between runs, so they stay out of the JSON
    let rows: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
        .collect();
    Ok(Report {
        positive: passed,
        result: json!({ "passed": passed, "criteria": rows }),
        text,
    })
}
