//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use nonstd::cli::{execute, Cli, Output};
use nonstd::corpus::builtin;
use nonstd::xcheck::{run_xcheck, XcheckConfig};
use nonstd_core::classical::EpsSchedule;
use nonstd_core::expr::{eval_exact, eval_interval, eval_rat, parse, symbolic_diff, EvalError, Expr};
use nonstd_core::interval::RatInterval;
use nonstd_core::lc::{LcNumber, LcOrdering};
use nonstd_core::nsa::{dq_gap_xn, eq1_check, eq1_pairs, nsa_derivative, nsa_differentiable_two_point, NsaConfig};
use nonstd_core::rat::{self, Rat};
use nonstd_core::riemann::{cell_range, ftc_check};
use nonstd_core::series::{
    diverges_to_infinity, nonneg_bounded_verdict, weierstrass_converges, Behaviour, SeqExpr, DEFAULT_HORIZON,
};
use nonstd_core::verdict::Status;
use clap::Parser;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const T: i64 = 12;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ k)
}

fn small_rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    rat::ratio(r.gen_range(-num..=num), r.gen_range(1..=den))
}

fn random_lc(r: &mut ChaCha8Rng, min_exp: i64) -> LcNumber {
    let n = r.gen_range(0..=4);
    let terms: Vec<(Rat, Rat)> = (0..n)
        .map(|_| (rat::ratio(r.gen_range(min_exp..=8), r.gen_range(1..=2)), small_rat(r, 30, 9)))
        .collect();
    LcNumber::from_terms(terms, rat::int(T))
}

/// Equal on every exponent both operands still track.
fn same(a: &LcNumber, b: &LcNumber) -> bool {
    let t = rat::min(a.trunc(), b.trunc());
    a.truncated(&t).terms().eq(b.truncated(&t).terms())
}

fn criterion_1() -> Check {
    let mut r = rng(1);
    for i in 0..1000 {
        let (x, y, z) = (random_lc(&mut r, -4), random_lc(&mut r, -4), random_lc(&mut r, -4));
        let ctx = || format!("triple {}: x = {}, y = {}, z = {}", i, x, y, z);
        ensure(same(&(&(&x + &y) + &z), &(&x + &(&y + &z))), || format!("+ associativity, {}", ctx()))?;
        ensure(same(&(&(&x * &y) * &z), &(&x * &(&y * &z))), || format!("* associativity, {}", ctx()))?;
        ensure(same(&(&x * &(&y + &z)), &(&(&x * &y) + &(&x * &z))), || format!("distributivity, {}", ctx()))?;
        if !x.is_zero() {
            let p = &x * &x.inv().map_err(|e| e.to_string())?;
            ensure(same(&p, &LcNumber::from_rat(Rat::one())), || format!("inverse, {}", ctx()))?;
        }
        let o = x.cmp_trunc(&y);
        ensure((&x + &z).cmp_trunc(&(&y + &z)) == o, || format!("order under +, {}", ctx()))?;
        if z.signum() > 0 && o != LcOrdering::EqWithinTrunc {
            let lost = (&(&y - &x) * &z).is_zero();
            ensure(lost || (&x * &z).cmp_trunc(&(&y * &z)) == o, || format!("order under *, {}", ctx()))?;
        }
        let (lx, ly) = (random_lc(&mut r, 0), random_lc(&mut r, 0));
        let (sx, sy) = (lx.standard_part().unwrap(), ly.standard_part().unwrap());
        ensure((&lx + &ly).standard_part().unwrap() == &sx + &sy, || format!("st(x + y), {}", ctx()))?;
        ensure((&lx * &ly).standard_part().unwrap() == &sx * &sy, || format!("st(x * y), {}", ctx()))?;
    }
    Ok("1000 triples: associativity, distributivity, inverse, order, st homomorphism".into())
}

fn criterion_2() -> Check {
    let mut r = rng(2);
    let e = LcNumber::eps();
    let zero = LcNumber::zero();
    for _ in 0..100 {
        let q = rat::ratio(r.gen_range(1..=1_000_000), r.gen_range(1..=1_000_000));
        let lq = LcNumber::from_rat(q.clone());
        ensure(zero.cmp_trunc(&e) == LcOrdering::Lt && e.cmp_trunc(&lq) == LcOrdering::Lt, || {
            format!("eps not in (0, {})", q)
        })?;
        let lim = random_lc(&mut r, 0);
        let inf = LcNumber::monomial(small_rat(&mut r, 30, 9) + rat::ratio(1, 7), rat::int(r.gen_range(1..=4)), rat::int(T));
        ensure((&lim * &inf).is_infinitesimal(), || format!("{} * {} not infinitesimal", lim, inf))?;
    }
    let y = e.inv().map_err(|e| e.to_string())?;
    let y1 = LcNumber::from_rat(Rat::one());
    let y2 = &y1 + &e;
    ensure(y1.i_close(&y2), || "y1 and y2 not infinitely close".into())?;
    ensure(!(&y * &y1).i_close(&(&y * &y2)), || "y*y1 and y*y2 infinitely close".into())?;
    Ok(format!("100 rationals above eps; y = {} breaks closeness of y1 = 1, y2 = 1 + eps", y))
}

fn random_rational_function(r: &mut ChaCha8Rng) -> String {
    let poly = |r: &mut ChaCha8Rng, deg: u32| {
        (0..=deg)
            .map(|k| format!("({})*x^{}", small_rat(r, 9, 4), k))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let deg = r.gen_range(1..=5);
    let num = poly(r, deg);
    match r.gen_range(0..3) {
        0 => num,
        1 => format!("({}) / (x^2 + {})", num, r.gen_range(1..=5)),
        _ => format!("({}) / (x^4 + {}*x^2 + {})", num, r.gen_range(0..=3), r.gen_range(1..=4)),
    }
}

fn criterion_3() -> Check {
    let mut r = rng(3);
    let cfg = NsaConfig::default();
    let probes = cfg.probes();
    let mut checked = 0;
    for _ in 0..30 {
        let src = random_rational_function(&mut r);
        let f = parse(&src).map_err(|e| format!("{}: {}", src, e))?;
        let df = symbolic_diff(&f).map_err(|e| e.to_string())?;
        for _ in 0..6 {
            let a = small_rat(&mut r, 20, 6);
            let v = nsa_derivative(&f, &a, &probes, &cfg);
            let want = eval_exact(&df, &a).map_err(|e| e.to_string())?;
            ensure(v.status == Status::Proved && v.value.as_ref() == Some(&want), || {
                format!("{} at {}: {} vs {}", src, a, v, want)
            })?;
            checked += 1;
        }
    }
    Ok(format!("30 functions x 6 points = {} exact derivative matches", checked))
}

fn criterion_4() -> Check {
    let corpus = builtin();
    ensure(corpus.len() >= 20, || format!("corpus has {} entries", corpus.len()))?;
    let rep = run_xcheck(&corpus, &XcheckConfig::default());
    ensure(rep.total.disagreement == 0, || rep.to_table())?;
    let row = rep
        .rows
        .iter()
        .find(|r| r.expr == "x^2*sin(1/x)" && r.notion == "derivative")
        .ok_or("oscillating square missing from corpus")?;
    ensure(
        row.nsa == Status::Proved && row.value.as_deref() == Some("0") && row.classical != Status::Refuted,
        || format!("x^2 sin(1/x) derivative row: {:?}", row),
    )?;
    ensure(row.eq1 != Some(Status::Proved), || "eq1 column PROVED for x^2 sin(1/x)".into())?;
    Ok(format!(
        "{} entries, {} decided pairs ({} both PROVED, {} both REFUTED), 0 disagreements",
        rep.entries,
        rep.total.decided(),
        rep.total.both_proved,
        rep.total.both_refuted
    ))
}

fn criterion_5() -> Check {
    let g = dq_gap_xn(100, &rat::int(2), &rat::ratio(1, 100));
    let bound = rat::ratio(99, 2) * rat::pow2(98);
    ensure(g >= bound, || format!("gap {} below (99/2)*2^98", g))?;
    let gaps: Vec<Rat> = (1..=6).map(|k| dq_gap_xn(5, &rat::int(2), &rat::powi(&rat::int(10), -k))).collect();
    ensure(gaps.windows(2).all(|w| w[0] > w[1]), || format!("not strictly decreasing: {:?}", gaps))?;
    let ratio = (g / rat::pow2(98)).to_f64().unwrap_or(f64::NAN);
    Ok(format!("gap(100, 2, 1/100) = {:.4} * 2^98 exactly rational; n = 5 gaps decrease over k = 1..6", ratio))
}

fn criterion_6() -> Check {
    let cfg = NsaConfig::default().extend_zero(true);
    let probes = cfg.probes();
    let zero = rat::int(0);
    let f = parse("x^2*sin(1/x)").unwrap();
    let v = nsa_derivative(&f, &zero, &probes, &cfg);
    ensure(v.is_proved() && v.value == Some(zero.clone()), || format!("derivative: {}", v))?;
    let fp = symbolic_diff(&f).map_err(|e| e.to_string())?;
    let e1 = eq1_check(&f, &fp, &zero, &eq1_pairs(&rat::int(T)), &cfg);
    ensure(!e1.is_proved(), || format!("eq1: {}", e1))?;
    let abs = parse("abs(x)").unwrap();
    let d = nsa_derivative(&abs, &zero, &probes, &cfg);
    let tp = nsa_differentiable_two_point(&abs, &zero, &probes.pairs(), &cfg);
    ensure(d.is_refuted() && tp.is_refuted(), || format!("abs: {} / {}", d, tp))?;
    Ok(format!("x^2 sin(1/x): derivative 0, eq1 {}; abs: REFUTED twice", e1.status))
}

fn criterion_7() -> Check {
    let mut r = rng(7);
    let sched = EpsSchedule::default();
    let tol = rat::ratio(1, 1_000_000);
    for _ in 0..10 {
        let deg = r.gen_range(0..=6);
        let src = (0..=deg).map(|k| format!("({})*x^{}", small_rat(&mut r, 12, 7), k)).collect::<Vec<_>>().join(" + ");
        let big_f = parse(&src).unwrap();
        let (a, b) = loop {
            let (x, y) = (small_rat(&mut r, 10, 3), small_rat(&mut r, 10, 3));
            if x != y {
                break if x < y { (x, y) } else { (y, x) };
            }
        };
        let v = ftc_check(&big_f, &a, &b, &sched, 64);
        let want = eval_exact(&big_f, &b).unwrap() - eval_exact(&big_f, &a).unwrap();
        let enc = match (&v.value, &v.enclosure) {
            (Some(x), _) => RatInterval::point(x.clone()),
            (None, Some(e)) => e.clone(),
            _ => return Err(format!("{} on [{}, {}]: {}", src, a, b, v)),
        };
        ensure(v.is_proved() && enc.width() < tol && enc.contains(&want), || {
            format!("{} on [{}, {}]: {} vs {}", src, a, b, v, want)
        })?;
    }
    Ok("10 polynomials of degree <= 6 on random intervals".into())
}

fn criterion_8() -> Check {
    let sched: Vec<Rat> = (1..=6).map(|k| rat::powi(&rat::int(10), -k)).collect();
    let tol = rat::ratio(1, 1_000_000);
    let seq = |s: &str| SeqExpr::new(parse(s).unwrap());
    let h = seq("1/x - 1/(x - 1)").with_offset(1).with_head(vec![Rat::one()]);
    let v = weierstrass_converges(&h, &Rat::zero(), &sched, DEFAULT_HORIZON, 64);
    ensure(v.is_proved(), || format!("S_n = 1/n: {}", v))?;
    let ms = v.certificate.as_ref().and_then(|c| c.get("M")).unwrap_or("").to_string();
    let want: Vec<String> = sched.iter().map(|e| format!("{}:{}", e, e.recip())).collect();
    ensure(ms == want.join(","), || format!("M(eps) = {}", ms))?;

    let v = weierstrass_converges(&seq("(1/2)^x"), &rat::int(2), &sched, DEFAULT_HORIZON, 64);
    let enc = v.enclosure.clone().unwrap_or_else(|| RatInterval::point(rat::int(-1)));
    ensure(v.is_proved() && v.value == Some(rat::int(2)) && enc.contains(&rat::int(2)), || format!("(1/2)^n: {}", v))?;
    let nb = nonneg_bounded_verdict(&seq("(1/2)^x"), DEFAULT_HORIZON, 64).map_err(|e| e.to_string())?;
    let e2 = nb.verdict.enclosure.clone().ok_or("no enclosure for (1/2)^n")?;
    ensure(e2.contains(&rat::int(2)) && e2.width() < tol, || format!("(1/2)^n bounded: {}", nb.verdict))?;

    let bounds: Vec<Rat> = [1i64, 7, 10, 100, 4_321, 1_000_000].iter().map(|b| rat::int(*b)).collect();
    let v = diverges_to_infinity(&seq("1"), &bounds, DEFAULT_HORIZON, 64);
    let m = v.certificate.as_ref().and_then(|c| c.get("M")).unwrap_or("").to_string();
    let want: Vec<String> = bounds.iter().map(|b| format!("{}:{}", b, b.ceil())).collect();
    ensure(v.is_proved() && m == want.join(","), || format!("sum 1: {} (M = {})", v, m))?;

    let nb = nonneg_bounded_verdict(&seq("(1/3)^x"), DEFAULT_HORIZON, 64).map_err(|e| e.to_string())?;
    let e3 = nb.verdict.enclosure.clone().ok_or("no enclosure for (1/3)^n")?;
    ensure(nb.behaviour == Some(Behaviour::Converges) && e3.contains(&rat::ratio(3, 2)) && e3.width() < tol, || {
        format!("(1/3)^n: {}", nb.verdict)
    })?;
    Ok(format!("1/n -> 0 with M(eps) = 1/eps; (1/2)^n -> 2 in {}; sum 1 M(B) = ceil(B); (1/3)^n in {}", enc, e3))
}

fn random_expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.25) {
        return if r.gen_bool(0.6) { Expr::x() } else { Expr::c(small_rat(r, 9, 4)) };
    }
    let a = random_expr(r, depth - 1);
    match r.gen_range(0..11) {
        0 => a.add(random_expr(r, depth - 1)),
        1 => a.sub(random_expr(r, depth - 1)),
        2 | 3 => a.mul(random_expr(r, depth - 1)),
        4 => a.div(random_expr(r, depth - 1)),
        5 => a.powi(r.gen_range(-2..=3)),
        6 => a.sin(),
        7 => a.cos(),
        8 => a.exp(),
        9 => a.abs().add(Expr::int(1)).sqrt(),
        _ => a.abs().add(Expr::c(rat::ratio(1, 2))).ln(),
    }
}

fn criterion_9() -> Check {
    let mut r = rng(9);
    let mut pairs = 0;
    let mut samples = 0u64;
    let mut unsampled = 0;
    while pairs < 1000 {
        let f = random_expr(&mut r, 4);
        let lo = small_rat(&mut r, 16, 4);
        let hi = &lo + rat::ratio(r.gen_range(1..=16), 8);
        let cell = RatInterval::new(lo.clone(), hi.clone());
        // values beyond 2^40 make 128-bit absolute point evaluation needlessly expensive
        let Ok(enc) = eval_interval(&f, &cell, 64) else { continue };
        if enc.width() > rat::int(1_000_000_000) || enc.mag() > rat::pow2(40) {
            continue;
        }
        let Ok(rng_enc) = cell_range(&f, &cell, 64) else { continue };
        let mut points = Vec::with_capacity(100);
        for i in 1..=100 {
            let x = &lo + (&hi - &lo) * rat::ratio(i, 101);
            let at = match eval_rat(&f, &x, 128) {
                Ok(at) => at,
                Err(EvalError::Precision) => break,
                Err(e) => return Err(format!("{} at {}: {}", f, x, e)),
            };
            // both are sound, so their intersection still holds f(x); tiny values
            // need the relative width of the point enclosure
            let rel = eval_interval(&f, &RatInterval::point(x.clone()), 192).map_err(|e| format!("{} at {}: {}", f, x, e))?;
            let at = at.intersect(&rel).ok_or_else(|| format!("{} at {}: {} and {} are disjoint", f, x, at, rel))?;
            points.push((x, at));
        }
        if points.len() < 100 {
            unsampled += 1;
            continue;
        }
        pairs += 1;
        for (x, at) in points {
            ensure(enc.encloses(&at) && rng_enc.encloses(&at), || {
                format!("{} on {}: f({}) in {} escapes {} / {}", f, cell, x, at, enc, rng_enc)
            })?;
            samples += 1;
        }
    }
    Ok(format!(
        "{} pairs, {} samples inside both cell enclosures ({} pairs without 128-bit samples)",
        pairs, samples, unsampled
    ))
}

fn xcheck_json(threads: usize) -> Result<String, String> {
    let argv = ["nonstd", "--json", "--seed", "11", "xcheck", "--random", "8", "--threads"];
    let cli = Cli::try_parse_from(argv.iter().map(|s| s.to_string()).chain([threads.to_string()])).map_err(|e| e.to_string())?;
    match execute(&cli).map_err(|e| e.to_string())? {
        Output::Text { json, .. } => Ok(serde_json::to_string_pretty(&json).unwrap()),
        Output::Report(r) => Ok(r.to_json()),
    }
}

fn criterion_10() -> Check {
    let one = xcheck_json(1)?;
    let four = xcheck_json(4)?;
    ensure(one == four, || "JSON differs between 1 and 4 threads".into())?;
    let again = xcheck_json(3)?;
    ensure(one == again, || "JSON differs between runs".into())?;
    Ok(format!("{} bytes identical across 1, 4 and 3 threads", one.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("field/order suite", Duration::from_secs(10), criterion_1),
        ("infinitesimal axioms", Duration::from_secs(1), criterion_2),
        ("derivative oracle agreement", Duration::from_secs(30), criterion_3),
        ("equivalence cross-check", Duration::from_secs(300), criterion_4),
        ("binomial gap", Duration::from_secs(1), criterion_5),
        ("counterexample regression", Duration::from_secs(5), criterion_6),
        ("FTC", Duration::from_secs(120), criterion_7),
        ("series", Duration::from_secs(10), criterion_8),
        ("interval soundness", Duration::from_secs(60), criterion_9),
        ("determinism", Duration::from_secs(600), criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let took = t.elapsed();
        let res = match res {
            Ok(m) if took > *limit => Err(format!("{} but took {:.2?} (limit {:?})", m, took, limit)),
            other => other,
        };
        match res {
            Ok(m) => println!("PASS  {:>2} {:<28} {:>9.2?}  {}", i + 1, name, took, m),
            Err(m) => {
                failed += 1;
                println!("FAIL  {:>2} {:<28} {:>9.2?}  {}", i + 1, name, took, m);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
