use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use nonstd_core::classical::{ed_continuity, ed_derivative, ed_limit, EdOptions, EpsSchedule};
use nonstd_core::expr::{eval_exact, eval_rat, parse, EvalConfig, EvalError, Expr};
use nonstd_core::interval::RatInterval;
use nonstd_core::lc::{LcNumber, DEFAULT_TRUNC_ORDER};
use nonstd_core::nsa::{
    dq_gap_xn, eq1_check, eq1_pairs, nsa_continuity, nsa_derivative, nsa_differentiable_two_point, nsa_limit, NsaConfig,
    ProbeSet,
};
use nonstd_core::rat::{self, Rat};
use nonstd_core::riemann::{
    classical_integral, darboux_bounds, default_mesh_probes, ftc_check, nsa_integral, riemann_sum, Partition,
};
use nonstd_core::series::{
    diverges_to_infinity, nonneg_bounded_verdict, partial_sums, weierstrass_converges, SeqExpr, DEFAULT_HORIZON,
};
use nonstd_core::verdict::{Record, Status, Verdict};
use serde_json::json;

use crate::corpus::{builtin, parse_corpus, random_entries};
use crate::export;
use crate::report::{status_code, Report};
use crate::xcheck::{run_xcheck, XcheckConfig};

pub const TRUNC_ENV: &str = "NONSTD_TRUNC_ORDER";

#[derive(Parser, Debug)]
#[command(name = "nonstd", version, about = "Certified limit, derivative, integral and series verdicts")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Treat f(a) as 0 where f is undefined.
    #[arg(long, global = true)]
    pub extend_zero: bool,
    /// Truncation order for infinitesimal arithmetic (overrides NONSTD_TRUNC_ORDER).
    #[arg(long, global = true)]
    pub trunc: Option<String>,
    /// Bits of precision for transcendental enclosures.
    #[arg(long, global = true, default_value_t = 64)]
    pub prec: u32,
    /// Comma-separated epsilon schedule, e.g. "1/10,1/1000".
    #[arg(long, global = true)]
    pub eps: Option<String>,
    /// Comma-separated infinitesimal probes, e.g. "eps,-eps,eps^2".
    #[arg(long, global = true)]
    pub probes: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PointCriterion {
    Nsa,
    Classical,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DerivCriterion {
    Nsa,
    TwoPoint,
    Eq1,
    Classical,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Limit of f at a.
    Limit {
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Claimed limit.
        #[arg(long = "L", allow_hyphen_values = true)]
        l: Option<String>,
        #[arg(long, value_enum, default_value = "nsa")]
        criterion: PointCriterion,
    },
    /// Continuity of f at a.
    Continuity {
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value = "nsa")]
        criterion: PointCriterion,
    },
    /// Differentiability of f at a.
    Derivative {
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value = "nsa")]
        criterion: DerivCriterion,
        /// Claimed derivative as an expression.
        #[arg(long, conflicts_with = "value")]
        fprime: Option<String>,
        /// Claimed derivative value at a.
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
    },
    /// Riemann integrability of f on [a, b].
    Integrate {
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, value_enum, default_value = "classical")]
        criterion: PointCriterion,
        /// Comma-separated partition; reports the Riemann sum and Darboux bounds on it.
        #[arg(long, allow_hyphen_values = true)]
        partition: Option<String>,
        /// Writes the per-cell range table (of --partition, or --cells equal cells).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        cells: usize,
    },
    /// Checks that the integral of F' over [a, b] is F(b) - F(a).
    Ftc {
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Partial sums and convergence of the series with terms a_n (written in x).
    Series {
        term: String,
        /// First index.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
        /// Comma-separated explicit first terms.
        #[arg(long, allow_hyphen_values = true)]
        head: Option<String>,
        #[arg(long, conflicts_with_all = ["l", "diverges"])]
        sum_to: Option<i64>,
        /// Claimed sum.
        #[arg(long = "L", allow_hyphen_values = true, conflicts_with = "diverges")]
        l: Option<String>,
        /// Checks divergence to +infinity.
        #[arg(long)]
        diverges: bool,
        /// Comma-separated bounds B for --diverges.
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: i64,
        /// Writes the (n, S_n) trace of --sum-to.
        #[arg(long, requires = "sum_to")]
        csv: Option<PathBuf>,
    },
    /// Exact difference-quotient gap for x^n.
    Gap {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        eps: String,
    },
    /// Runs both checker families on a corpus and prints the agreement matrix.
    Xcheck {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Seeded random polynomial entries added to the corpus.
        #[arg(long, default_value_t = 8)]
        random: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Domain(m) => write!(f, "domain error: {}", m),
        }
    }
}

type Res<T> = Result<T, CliError>;

pub fn parse_rational(s: &str) -> Res<Rat> {
    if s.contains('.') || s.contains('e') || s.contains('E') {
        let hint = match decimal_value(s) {
            Some(r) => format!("write it as {}", r),
            None => "write p/q (e.g. 0.25 as 1/4)".into(),
        };
        return Err(CliError::Usage(format!("'{}' is not an exact rational; {}", s, hint)));
    }
    rat::parse_rat(s).ok_or_else(|| CliError::Usage(format!("'{}' is not an integer or p/q", s)))
}

/// Exact value of a decimal such as `-1.25` or `3e-2`.
fn decimal_value(s: &str) -> Option<Rat> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{}{}", int, frac);
    if digits.trim_start_matches(['-', '+']).is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = rat::parse_rat(digits.trim_start_matches('+'))?;
    let shift = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
    (shift.unsigned_abs() <= 10_000).then(|| n * pow10(shift))
}

fn pow10(k: i32) -> Rat {
    let p = rat::powi(&rat::int(10), i64::from(k.abs()));
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

fn parse_list(s: &str) -> Res<Vec<Rat>> {
    s.split(',').map(|p| parse_rational(p.trim())).collect()
}

fn parse_expr(s: &str) -> Res<Expr> {
    parse(s).map_err(|e| CliError::Usage(format!("cannot parse '{}': {}", s, e)))
}

/// Explicit flag, then the environment, then the built-in default.
pub fn trunc_order(flag: Option<&str>) -> Res<Rat> {
    if let Some(t) = flag {
        return positive(parse_rational(t)?, "--trunc");
    }
    match std::env::var(TRUNC_ENV) {
        Ok(v) => positive(parse_rational(v.trim())?, TRUNC_ENV),
        Err(_) => Ok(rat::int(DEFAULT_TRUNC_ORDER)),
    }
}

fn positive(r: Rat, what: &str) -> Res<Rat> {
    if r <= rat::int(0) {
        return Err(CliError::Usage(format!("{} must be positive", what)));
    }
    Ok(r)
}

/// Settings shared by all checkers.
pub struct RunConfig {
    pub nsa: NsaConfig,
    pub ed: EdOptions,
    pub schedule: EpsSchedule,
    pub probes: Option<ProbeSet>,
    pub trunc: Rat,
    pub prec: u32,
    pub json: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_common(c: &Common) -> Res<RunConfig> {
        let trunc = trunc_order(c.trunc.as_deref())?;
        let eval = EvalConfig {
            trunc_order: trunc.clone(),
            prec: c.prec,
            ..EvalConfig::default()
        };
        let nsa = NsaConfig {
            eval,
            extend_zero: c.extend_zero,
        };
        let ed = EdOptions {
            prec: c.prec,
            ..EdOptions::default()
        }
        .extend_zero(c.extend_zero);
        let schedule = match &c.eps {
            Some(s) => EpsSchedule::new(parse_list(s)?).map_err(|e| CliError::Usage(format!("--eps: {}", e)))?,
            None => EpsSchedule::default(),
        };
        let probes = match &c.probes {
            Some(s) => {
                let offs = s
                    .split(',')
                    .map(|p| LcNumber::parse_with(p.trim(), trunc.clone()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Usage(format!("--probes: {}", e)))?;
                Some(ProbeSet::new(offs).map_err(|e| CliError::Usage(format!("--probes: {}", e)))?)
            }
            None => None,
        };
        Ok(RunConfig {
            nsa,
            ed,
            schedule,
            probes,
            trunc,
            prec: c.prec,
            json: c.json,
            seed: c.seed,
        })
    }

    fn probe_set(&self) -> ProbeSet {
        self.probes.clone().unwrap_or_else(|| self.nsa.probes())
    }

    fn eq1_pairs(&self) -> Vec<(LcNumber, LcNumber)> {
        match &self.probes {
            Some(p) => p.pairs(),
            None => eq1_pairs(&self.trunc),
        }
    }
}

/// Judges an NSA result against a claimed value.
fn against_claim(v: Verdict, claim: &RatInterval, what: &str) -> Verdict {
    if !v.is_proved() {
        return v;
    }
    let found = match (&v.value, &v.enclosure) {
        (Some(x), _) => RatInterval::point(x.clone()),
        (None, Some(e)) => e.clone(),
        _ => return v,
    };
    let w = Record::new().with(what, &found).with("claimed", claim);
    if !found.intersects(claim) {
        return Verdict::refuted(w, &format!("{} differs from the claimed value", what));
    }
    if found.is_point() && claim.is_point() {
        return v.with_note(&format!("{} equals the claimed value", what));
    }
    Verdict::undecided(&format!("{} enclosure overlaps the claim but is not exact", what)).with_witness(w)
}

/// Exact value of an expression at a point, or an error naming what is missing.
fn exact_at(g: &Expr, a: &Rat, prec: u32, extend_zero: bool) -> Res<RatInterval> {
    if let Ok(x) = eval_exact(g, a) {
        return Ok(RatInterval::point(x));
    }
    match eval_rat(g, a, prec) {
        Err(EvalError::Domain(_)) if extend_zero => Ok(RatInterval::point(Rat::zero())),
        r => r.map_err(|e| CliError::Domain(format!("{} at {}: {}", g, a, e))),
    }
}

fn point_value(v: &Verdict) -> Option<Rat> {
    v.value.clone()
}

pub enum Output {
    Report(Report),
    Text { text: String, json: serde_json::Value, code: i32 },
}

pub fn execute(cli: &Cli) -> Res<Output> {
    let cfg = RunConfig::from_common(&cli.common)?;
    let report = |cmd: &str, input: Record, v: Verdict| Ok(Output::Report(Report::new(cmd, input, v)));
    match &cli.command {
        Command::Limit { f, at, l, criterion } => {
            let g = parse_expr(f)?;
            let a = parse_rational(at)?;
            let mut input = Record::new().with("f", &g).with("at", &a).with("criterion", format!("{:?}", criterion).to_lowercase());
            let claim = l.as_deref().map(parse_rational).transpose()?;
            if let Some(c) = &claim {
                input.push("L", c);
            }
            let v = match criterion {
                PointCriterion::Nsa => {
                    let v = nsa_limit(&g, &a, &cfg.probe_set(), &cfg.nsa);
                    match claim {
                        Some(c) => against_claim(v, &RatInterval::point(c), "limit"),
                        None => v,
                    }
                }
                PointCriterion::Classical => {
                    let c = match claim {
                        Some(c) => c,
                        None => point_value(&nsa_limit(&g, &a, &cfg.probe_set(), &cfg.nsa)).ok_or_else(|| {
                            CliError::Usage("--criterion classical needs --L (no exact candidate found)".into())
                        })?,
                    };
                    ed_limit(&g, &a, &c, &cfg.schedule, &cfg.ed)
                }
            };
            report("limit", input, v)
        }
        Command::Continuity { f, at, criterion } => {
            let g = parse_expr(f)?;
            let a = parse_rational(at)?;
            let input = Record::new().with("f", &g).with("at", &a).with("criterion", format!("{:?}", criterion).to_lowercase());
            let v = match criterion {
                PointCriterion::Nsa => nsa_continuity(&g, &a, &cfg.probe_set(), &cfg.nsa),
                PointCriterion::Classical => ed_continuity(&g, &a, &cfg.schedule, &cfg.ed),
            };
            report("continuity", input, v)
        }
        Command::Derivative {
            f,
            at,
            criterion,
            fprime,
            value,
        } => {
            let g = parse_expr(f)?;
            let a = parse_rational(at)?;
            let crit = match criterion {
                DerivCriterion::Nsa => "nsa",
                DerivCriterion::TwoPoint => "two-point",
                DerivCriterion::Eq1 => "eq1",
                DerivCriterion::Classical => "classical",
            };
            let mut input = Record::new().with("f", &g).with("at", &a).with("criterion", crit);
            let fp = fprime.as_deref().map(parse_expr).transpose()?;
            let val = value.as_deref().map(parse_rational).transpose()?;
            if let Some(fp) = &fp {
                input.push("fprime", fp);
            }
            if let Some(v) = &val {
                input.push("value", v);
            }
            let needs_claim = matches!(criterion, DerivCriterion::Nsa | DerivCriterion::Classical);
            let claim = match (&fp, &val) {
                _ if !needs_claim => None,
                (Some(fp), _) => Some(exact_at(fp, &a, cfg.prec, cfg.nsa.extend_zero)?),
                (None, Some(v)) => Some(RatInterval::point(v.clone())),
                _ => None,
            };
            let v = match criterion {
                DerivCriterion::Nsa => {
                    let v = nsa_derivative(&g, &a, &cfg.probe_set(), &cfg.nsa);
                    match &claim {
                        Some(c) => against_claim(v, c, "derivative"),
                        None => v,
                    }
                }
                DerivCriterion::TwoPoint => nsa_differentiable_two_point(&g, &a, &cfg.probe_set().pairs(), &cfg.nsa),
                DerivCriterion::Eq1 => {
                    let fp = fp.ok_or_else(|| CliError::Usage("--criterion eq1 requires --fprime <expr>".into()))?;
                    eq1_check(&g, &fp, &a, &cfg.eq1_pairs(), &cfg.nsa)
                }
                DerivCriterion::Classical => {
                    let d = match claim {
                        Some(c) if c.is_point() => c.lo().clone(),
                        Some(_) => {
                            return Err(CliError::Usage(
                                "--criterion classical needs a rational derivative value; pass --value".into(),
                            ))
                        }
                        None => point_value(&nsa_derivative(&g, &a, &cfg.probe_set(), &cfg.nsa)).ok_or_else(|| {
                            CliError::Usage("--criterion classical needs --value or --fprime (no exact candidate found)".into())
                        })?,
                    };
                    ed_derivative(&g, &d, &a, &cfg.schedule, &cfg.ed)
                }
            };
            report("derivative", input, v)
        }
        Command::Integrate {
            f,
            from,
            to,
            criterion,
            partition,
            csv,
            cells,
        } => {
            let g = parse_expr(f)?;
            let a = parse_rational(from)?;
            let b = parse_rational(to)?;
            if a >= b {
                return Err(CliError::Usage("--from must be below --to".into()));
            }
            let mut input = Record::new().with("f", &g).with("from", &a).with("to", &b);
            let part = match partition {
                Some(p) => {
                    let p: Partition = p.parse().map_err(|e| CliError::Usage(format!("--partition: {}", e)))?;
                    if p.a() != &a || p.b() != &b {
                        return Err(CliError::Usage("--partition must run from --from to --to".into()));
                    }
                    Some(p)
                }
                None => None,
            };
            if let Some(path) = csv {
                if *cells == 0 {
                    return Err(CliError::Usage("--cells must be positive".into()));
                }
                let p = part.clone().unwrap_or_else(|| Partition::uniform(&a, &b, *cells));
                let d = darboux_bounds(&g, &p, cfg.prec).map_err(|e| CliError::Domain(e.to_string()))?;
                let file = File::create(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
                export::write_cells(file, &p, &d.ranges).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            let v = match part {
                Some(p) => {
                    input.push("partition", p.points().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                    let s = riemann_sum(&g, &p, cfg.prec).map_err(|e| CliError::Domain(e.to_string()))?;
                    let d = darboux_bounds(&g, &p, cfg.prec).map_err(|e| CliError::Domain(e.to_string()))?;
                    let cert = Record::new()
                        .with("riemann_sum", &s)
                        .with("lower", &d.lower)
                        .with("upper", &d.upper)
                        .with("mesh", p.mesh());
                    Verdict::proved("sums on the given partition")
                        .with_enclosure(RatInterval::new(d.lower, d.upper))
                        .with_certificate(cert)
                }
                None => {
                    input.push("criterion", format!("{:?}", criterion).to_lowercase());
                    match criterion {
                        PointCriterion::Classical => classical_integral(&g, &a, &b, &cfg.schedule, cfg.prec),
                        PointCriterion::Nsa => {
                            let mesh = default_mesh_probes(&cfg.trunc);
                            nsa_integral(&g, &a, &b, &mesh, &cfg.schedule, cfg.prec)
                        }
                    }
                }
            };
            report("integrate", input, v)
        }
        Command::Ftc { f, from, to } => {
            let g = parse_expr(f)?;
            let a = parse_rational(from)?;
            let b = parse_rational(to)?;
            if a >= b {
                return Err(CliError::Usage("--from must be below --to".into()));
            }
            let input = Record::new().with("F", &g).with("from", &a).with("to", &b);
            report("ftc", input, ftc_check(&g, &a, &b, &cfg.schedule, cfg.prec))
        }
        Command::Series {
            term,
            offset,
            head,
            sum_to,
            l,
            diverges,
            bounds,
            horizon,
            csv,
        } => {
            let t = parse_expr(term)?;
            let mut s = SeqExpr::new(t.clone()).with_offset(*offset);
            let mut input = Record::new().with("term", &t).with("offset", offset);
            if let Some(h) = head {
                let h = parse_list(h)?;
                input.push("head", h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                s = s.with_head(h);
            }
            if *horizon < *offset {
                return Err(CliError::Usage("--horizon precedes --offset".into()));
            }
            let v = if let Some(n) = sum_to {
                input.push("sum_to", n);
                let tr = partial_sums(&s, *n, cfg.prec).map_err(|e| CliError::Domain(e.to_string()))?;
                if let Some(path) = csv {
                    let file = File::create(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
                    export::write_trace(file, &tr).map_err(|e| CliError::Usage(e.to_string()))?;
                }
                let last = tr.last().clone();
                let v = Verdict::proved("partial sum");
                if last.is_point() {
                    v.with_value(last.lo().clone())
                } else {
                    v.with_enclosure(last)
                }
            } else if let Some(l) = l {
                let l = parse_rational(l)?;
                input.push("L", &l);
                weierstrass_converges(&s, &l, cfg.schedule.values(), *horizon, cfg.prec)
            } else if *diverges {
                let bs = match bounds {
                    Some(b) => parse_list(b)?,
                    None => (1..=6).map(|k| rat::powi(&rat::int(10), k)).collect(),
                };
                input.push("bounds", bs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                diverges_to_infinity(&s, &bs, *horizon, cfg.prec)
            } else {
                let r = nonneg_bounded_verdict(&s, *horizon, cfg.prec).map_err(|e| CliError::Domain(e.to_string()))?;
                if let Some(b) = r.behaviour {
                    input.push("behaviour", b.as_str());
                }
                r.verdict
            };
            report("series", input, v)
        }
        Command::Gap { n, x, eps } => {
            let xr = parse_rational(x)?;
            let e = parse_rational(eps)?;
            if e <= rat::int(0) {
                return Err(CliError::Usage("--eps must be positive".into()));
            }
            let input = Record::new().with("n", n).with("x", &xr).with("eps", &e);
            let g = dq_gap_xn(*n, &xr, &e);
            report("gap", input, Verdict::proved("exact difference-quotient gap").with_value(g))
        }
        Command::Xcheck { corpus, random, threads } => {
            let mut entries = match corpus {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {}", p.display(), e)))?;
                    parse_corpus(&text).map_err(|e| CliError::Usage(e.to_string()))?
                }
                None => builtin(),
            };
            entries.extend(random_entries(cfg.seed, *random));
            let xc = XcheckConfig {
                nsa: cfg.nsa.clone(),
                ed: cfg.ed.clone(),
                schedule: cfg.schedule.clone(),
                probes: cfg.probes.clone(),
                extend_zero: cfg.nsa.extend_zero,
            };
            let rep = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build()
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    .install(|| run_xcheck(&entries, &xc)),
                None => run_xcheck(&entries, &xc),
            };
            let status = if rep.total.disagreement == 0 { Status::Proved } else { Status::Refuted };
            let note = format!("{} disagreements among {} decided pairs", rep.total.disagreement, rep.total.decided());
            let json = json!({
                "command": "xcheck",
                "input": {
                    "corpus": corpus.as_ref().map_or("builtin".to_string(), |p| p.display().to_string()),
                    "seed": cfg.seed,
                    "random": random,
                },
                "status": status.as_str(),
                "note": note,
                "report": rep,
            });
            let text = format!("{}\n{}: {}", rep.to_table(), status, note);
            Ok(Output::Text {
                text,
                json,
                code: status_code(status),
            })
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (out, code) = match execute(&cli) {
        Ok(Output::Report(r)) => {
            let out = if cli.common.json { r.to_json() } else { r.to_text() };
            (out, r.exit_code())
        }
        Ok(Output::Text { text, json, code }) => {
            let out = if cli.common.json {
                serde_json::to_string_pretty(&json).expect("report serializes")
            } else {
                text
            };
            (out, code)
        }
        Err(e) => {
            eprintln!("{}", e);
            if let CliError::Usage(_) = e {
                eprintln!("expressions use x, + - * / ^, sin cos exp ln sqrt abs; numbers are integers or p/q");
            }
            return 3;
        }
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", out);
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_get_an_exact_hint() {
        assert_eq!(decimal_value("0.5"), Some(rat::ratio(1, 2)));
        assert_eq!(decimal_value("-1.25"), Some(rat::ratio(-5, 4)));
        assert_eq!(decimal_value("3e-2"), Some(rat::ratio(3, 100)));
        assert_eq!(decimal_value("2.5E3"), Some(rat::int(2500)));
        assert_eq!(decimal_value("."), None);
        assert_eq!(decimal_value("1.x"), None);
        let err = parse_rational("0.125").unwrap_err().to_string();
        assert!(err.contains("1/8"), "{}", err);
        assert_eq!(parse_rational("-7/21").unwrap(), rat::ratio(-1, 3));
    }
}
