//! ε-δ checkers backed by interval branch and bound.
//!
//! For a given ε a candidate δ is verified on the punctured ball around `a`,
//! covered by annuli `δ/2^(k+1) ≤ |x − a| ≤ δ/2^k` that are bisected until
//! each cell's enclosure of `|f − L|` is below ε. The ball's innermost part
//! is accepted once the annulus bounds have been non-increasing for
//! [`STABLE_ANNULI`] consecutive annuli; the number of annuli checked is
//! reported as the certificate depth.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::expr::{eval_interval, eval_rat, jet_eval, EvalError, Expr};
use crate::interval::RatInterval;
use crate::poly::RatFunc;
use crate::rat::{self, Rat};
use crate::verdict::{Record, Verdict};

pub const STABLE_ANNULI: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleError {
    Empty,
    NotPositive(Rat),
    NotDescending(Rat),
}

impl fmt::Display for ScheduleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleError::Empty => write!(f, "empty schedule"),
            ScheduleError::NotPositive(e) => write!(f, "schedule value {} is not positive", e),
            ScheduleError::NotDescending(e) => write!(f, "schedule is not strictly descending at {}", e),
        }
    }
}

/// Strictly descending positive tolerances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSchedule {
    values: Vec<Rat>,
}

impl EpsSchedule {
    pub fn new(values: Vec<Rat>) -> Result<EpsSchedule, ScheduleError> {
        if values.is_empty() {
            return Err(ScheduleError::Empty);
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_positive() {
                return Err(ScheduleError::NotPositive(v.clone()));
            }
            if i > 0 && v >= &values[i - 1] {
                return Err(ScheduleError::NotDescending(v.clone()));
            }
        }
        Ok(EpsSchedule { values })
    }

    /// `1/10, 1/100, …, 1/10^k`.
    pub fn decimal(k: u32) -> EpsSchedule {
        let values = (1..=k.max(1)).map(|i| Rat::new(1.into(), num_bigint::BigInt::from(10).pow(i))).collect();
        EpsSchedule { values }
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn last(&self) -> &Rat {
        self.values.last().expect("nonempty")
    }
}

impl Default for EpsSchedule {
    fn default() -> Self {
        EpsSchedule::decimal(6)
    }
}

/// A verified δ for one ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCertificate {
    pub eps: Rat,
    pub delta: Rat,
    pub depth: u32,
    pub cells_checked: u64,
}

impl DeltaCertificate {
    pub fn to_text(&self) -> String {
        format!(
            "eps {}\ndelta {}\ndepth {}\ncells_checked {}\n",
            self.eps, self.delta, self.depth, self.cells_checked
        )
    }

    pub fn from_text(s: &str) -> Option<DeltaCertificate> {
        let mut eps = None;
        let mut delta = None;
        let mut depth = None;
        let mut cells = None;
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line.split_once(' ')?;
            let v = v.trim();
            match k {
                "eps" => eps = Some(rat::parse_rat(v)?),
                "delta" => delta = Some(rat::parse_rat(v)?),
                "depth" => depth = Some(v.parse().ok()?),
                "cells_checked" => cells = Some(v.parse().ok()?),
                _ => return None,
            }
        }
        Some(DeltaCertificate {
            eps: eps?,
            delta: delta?,
            depth: depth?,
            cells_checked: cells?,
        })
    }

    fn record(&self) -> Record {
        Record::new()
            .with("eps", &self.eps)
            .with("delta", &self.delta)
            .with("depth", self.depth)
            .with("cells_checked", self.cells_checked)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdOptions {
    pub prec: u32,
    /// Annuli examined per side before giving up on a δ.
    pub max_annuli: usize,
    /// Bisection levels inside one annulus.
    pub bisect_depth: u32,
    pub max_halvings: u32,
    /// Refutation samples per side and δ level.
    pub samples: u32,
    /// Use `f(a) = 0` when `f` is undefined at `a`.
    pub extend_zero: bool,
}

impl Default for EdOptions {
    fn default() -> Self {
        EdOptions {
            prec: 64,
            max_annuli: 48,
            bisect_depth: 8,
            max_halvings: 40,
            samples: 24,
            extend_zero: false,
        }
    }
}

impl EdOptions {
    pub fn extend_zero(mut self, on: bool) -> Self {
        self.extend_zero = on;
        self
    }
}

enum Enc {
    Value(RatInterval),
    /// No point of the cell is in the domain.
    Vacuous,
    Unknown,
}

/// The function whose limit at `a` is checked.
enum Target<'a> {
    Plain {
        f: &'a Expr,
        reduced: Option<RatFunc>,
    },
    /// `(f(x) − f(a)) / (x − a)` with `f(a)` enclosed by `fa`.
    Quotient {
        f: &'a Expr,
        a: Rat,
        fa: RatInterval,
        reduced: Option<RatFunc>,
        /// `f'(a)` when `f` has a Taylor expansion at `a`.
        slope: Option<RatInterval>,
    },
}

fn meet(acc: Option<RatInterval>, e: Option<RatInterval>) -> Option<RatInterval> {
    match (acc, e) {
        (Some(a), Some(b)) => Some(a.intersect(&b).unwrap_or(a)),
        (a, b) => a.or(b),
    }
}

impl<'a> Target<'a> {
    fn plain(f: &'a Expr) -> Self {
        let reduced = if f.is_rational_function() { RatFunc::from_expr(f) } else { None };
        Target::Plain { f, reduced }
    }

    fn quotient(f: &'a Expr, a: &Rat, fa: RatInterval, prec: u32) -> Self {
        let reduced = match (f.is_rational_function(), fa.is_point()) {
            (true, true) => RatFunc::from_expr(f).and_then(|r| {
                let num = r.sub(&RatFunc::poly(crate::poly::Poly::constant(fa.lo().clone())));
                let den = RatFunc::poly(crate::poly::Poly::new(alloc::vec![-a.clone(), Rat::one()]));
                num.div(&den)
            }),
            _ => None,
        };
        let slope = jet_eval(f, &RatInterval::point(a.clone()), 2, prec).ok().map(|j| j.coeffs[1].clone());
        Target::Quotient {
            f,
            a: a.clone(),
            fa,
            reduced,
            slope,
        }
    }

    fn enclose(&self, cell: &RatInterval, prec: u32) -> Enc {
        match self {
            Target::Plain { f, reduced } => {
                let naive = match eval_interval(f, cell, prec) {
                    Ok(v) => v,
                    Err(EvalError::Domain(d)) if !d.partial => return Enc::Vacuous,
                    Err(_) => return Enc::Unknown,
                };
                let mut acc = Some(naive);
                if let Some(r) = reduced {
                    acc = meet(acc, r.eval_interval_split(cell, 2));
                }
                acc = meet(acc, mean_value(f, cell, prec));
                acc.map_or(Enc::Unknown, Enc::Value)
            }
            Target::Quotient { f, a, fa, reduced, slope } => {
                let off = cell - &RatInterval::point(a.clone());
                let naive = match eval_interval(f, cell, prec) {
                    Ok(v) => (&v - fa).div(&off),
                    Err(EvalError::Domain(d)) if !d.partial => return Enc::Vacuous,
                    Err(_) => None,
                };
                let mut acc = naive;
                if let Some(r) = reduced {
                    acc = meet(acc, r.eval_interval_split(cell, 2));
                }
                if let Some(s) = slope {
                    // f(x) = f(a) + f'(a)(x − a) + c2(ξ)(x − a)^2 with ξ between a and x
                    let hull = cell.hull(&RatInterval::point(a.clone()));
                    if let Ok(j) = jet_eval(f, &hull, 3, prec) {
                        acc = meet(acc, Some(s + &(&j.coeffs[2] * &off)));
                    }
                }
                acc.map_or(Enc::Unknown, Enc::Value)
            }
        }
    }

    fn at(&self, x: &Rat, prec: u32) -> Option<RatInterval> {
        match self {
            Target::Plain { f, .. } => eval_rat(f, x, prec).ok(),
            Target::Quotient { f, a, fa, .. } => {
                let v = eval_rat(f, x, prec).ok()?;
                let h = x - a;
                if h.is_zero() {
                    return None;
                }
                Some((&v - fa).scale(&h.recip()))
            }
        }
    }
}

/// `f(m) + f'(X)·(X − m)` when the jet over the cell exists.
fn mean_value(f: &Expr, cell: &RatInterval, prec: u32) -> Option<RatInterval> {
    if cell.is_point() {
        return None;
    }
    let j = jet_eval(f, cell, 2, prec).ok()?;
    let m = cell.mid();
    let fm = eval_rat(f, &m, prec).ok()?;
    let r = cell.radius();
    Some(fm + &j.coeffs[1] * &RatInterval::new(-r.clone(), r))
}

enum CellResult {
    Below(Rat),
    Violation(Rat, RatInterval),
    Unknown,
}

struct Checker<'a> {
    target: Target<'a>,
    a: Rat,
    l: Rat,
    opts: &'a EdOptions,
    cells: u64,
}

fn golden(j: u32) -> Rat {
    // fractional part of j times a rational approximation of 1/φ
    let v = Rat::new((987i64 * j as i64).into(), 1597.into());
    &v - v.floor()
}

impl<'a> Checker<'a> {
    fn violates(&self, v: &RatInterval, eps: &Rat) -> bool {
        let dev = v - &RatInterval::point(self.l.clone());
        &dev.mig() >= eps
    }

    fn bound_cell(&mut self, cell: &RatInterval, eps: &Rat, depth: u32) -> CellResult {
        self.cells += 1;
        let enc = match self.target.enclose(cell, self.opts.prec) {
            Enc::Vacuous => return CellResult::Below(Rat::zero()),
            Enc::Value(v) => Some(v),
            Enc::Unknown => None,
        };
        if let Some(v) = &enc {
            let dev = v - &RatInterval::point(self.l.clone());
            let mag = dev.mag();
            if &mag < eps {
                return CellResult::Below(mag);
            }
            if &dev.mig() >= eps {
                let m = cell.mid();
                if let Some(pv) = self.target.at(&m, self.opts.prec) {
                    if self.violates(&pv, eps) {
                        return CellResult::Violation(m, pv);
                    }
                }
            }
        }
        if depth == 0 {
            return CellResult::Unknown;
        }
        let (lo, hi) = cell.bisect();
        let mut worst = Rat::zero();
        for half in [lo, hi] {
            match self.bound_cell(&half, eps, depth - 1) {
                CellResult::Below(b) => worst = rat::max(&worst, &b),
                other => return other,
            }
        }
        CellResult::Below(worst)
    }

    /// Annuli on one side of `a`; `Ok((annuli, bound))` when covered.
    fn verify_side(&mut self, sign: i64, delta: &Rat, eps: &Rat) -> Result<(usize, Rat), Option<(Rat, RatInterval)>> {
        let mut bounds: Vec<Rat> = Vec::new();
        let mut outer = delta.clone();
        for k in 0..self.opts.max_annuli {
            let inner = &outer / rat::int(2);
            let cell = RatInterval::spanning(&self.a + &inner * rat::int(sign), &self.a + &outer * rat::int(sign));
            match self.bound_cell(&cell, eps, self.opts.bisect_depth) {
                CellResult::Below(b) => bounds.push(b),
                CellResult::Violation(x, v) => return Err(Some((x, v))),
                CellResult::Unknown => return Err(None),
            }
            if k + 1 >= STABLE_ANNULI {
                let tail = &bounds[bounds.len() - STABLE_ANNULI..];
                if tail.windows(2).all(|w| w[1] <= w[0]) {
                    let worst = bounds.iter().fold(Rat::zero(), |m, b| rat::max(&m, b));
                    return Ok((k + 1, worst));
                }
            }
            outer = inner;
        }
        Err(None)
    }

    fn verify(&mut self, delta: &Rat, eps: &Rat) -> Result<(DeltaCertificate, Rat), Option<(Rat, RatInterval)>> {
        let start = self.cells;
        let (dl, bl) = self.verify_side(-1, delta, eps)?;
        let (dr, br) = self.verify_side(1, delta, eps)?;
        let cert = DeltaCertificate {
            eps: eps.clone(),
            delta: delta.clone(),
            depth: dl.max(dr) as u32,
            cells_checked: self.cells - start,
        };
        Ok((cert, rat::max(&bl, &br)))
    }

    fn sample(&self, delta: &Rat, eps: &Rat) -> Option<(Rat, RatInterval)> {
        for j in 1..=self.opts.samples {
            let u = golden(j);
            for sign in [1i64, -1] {
                let x = &self.a + &(delta * &u) * rat::int(sign);
                if let Some(v) = self.target.at(&x, self.opts.prec) {
                    if self.violates(&v, eps) {
                        return Some((x, v));
                    }
                }
            }
        }
        None
    }

    /// δ search from `start`, halving on failure.
    fn search(&mut self, start: &Rat, eps: &Rat) -> Search {
        let mut delta = start.clone();
        let mut witnessed = 0u32;
        let mut last = None;
        let levels = self.opts.max_halvings + 1;
        for _ in 0..levels {
            match self.verify(&delta, eps) {
                Ok((cert, bound)) => return Search::Proved(cert, bound),
                Err(Some(w)) => {
                    witnessed += 1;
                    last = Some((delta.clone(), w));
                }
                Err(None) => {
                    if let Some(w) = self.sample(&delta, eps) {
                        witnessed += 1;
                        last = Some((delta.clone(), w));
                    }
                }
            }
            delta /= rat::int(2);
        }
        match last {
            Some((d, (x, v))) if witnessed == levels => Search::Refuted { delta: d, x, value: v },
            _ => Search::Undecided,
        }
    }
}

enum Search {
    Proved(DeltaCertificate, Rat),
    Refuted { delta: Rat, x: Rat, value: RatInterval },
    Undecided,
}

fn run(target: Target<'_>, a: &Rat, l: &Rat, sched: &EpsSchedule, opts: &EdOptions) -> (Verdict, Vec<DeltaCertificate>) {
    let mut ck = Checker {
        target,
        a: a.clone(),
        l: l.clone(),
        opts,
        cells: 0,
    };
    let mut certs: Vec<DeltaCertificate> = Vec::new();
    let mut reuse: Option<(DeltaCertificate, Rat)> = None;
    let mut delta = Rat::one();
    for eps in sched.values() {
        if let Some((c, bound)) = &reuse {
            if bound < eps {
                certs.push(DeltaCertificate {
                    eps: eps.clone(),
                    cells_checked: 0,
                    ..c.clone()
                });
                continue;
            }
        }
        match ck.search(&delta, eps) {
            Search::Proved(c, bound) => {
                delta = c.delta.clone();
                certs.push(c.clone());
                reuse = Some((c, bound));
            }
            Search::Refuted { delta: d, x, value } => {
                let w = Record::new()
                    .with("x", &x)
                    .with("value", &value)
                    .with("eps", eps)
                    .with("delta", &d);
                let note = format!("|f(x) - L| >= {} at points within every tried delta", eps);
                return (Verdict::refuted(w, &note), certs);
            }
            Search::Undecided => {
                return (Verdict::undecided(&format!("no delta verified for eps = {}", eps)), certs);
            }
        }
    }
    let last = certs.last().expect("nonempty schedule").clone();
    let deltas: Vec<String> = certs.iter().map(|c| format!("{}:{}", c.eps, c.delta)).collect();
    let total: u64 = certs.iter().map(|c| c.cells_checked).sum();
    let mut rec = last.record();
    rec.push("total_cells", total);
    rec.push("deltas", deltas.join(","));
    let v = Verdict::proved("delta verified for every eps in the schedule")
        .with_value(l.clone())
        .with_certificate(rec);
    (v, certs)
}

/// One ε: a verified δ, a refutation, or neither.
pub fn ed_verify_limit(f: &Expr, a: &Rat, l: &Rat, eps: &Rat, opts: &EdOptions) -> (Verdict, Option<DeltaCertificate>) {
    assert!(eps.is_positive(), "eps must be positive");
    let sched = EpsSchedule {
        values: alloc::vec![eps.clone()],
    };
    let (v, mut certs) = run(Target::plain(f), a, l, &sched, opts);
    (v, certs.pop())
}

/// Re-run the verification recorded in `cert`.
pub fn recheck(f: &Expr, a: &Rat, l: &Rat, cert: &DeltaCertificate, opts: &EdOptions) -> bool {
    let mut ck = Checker {
        target: Target::plain(f),
        a: a.clone(),
        l: l.clone(),
        opts,
        cells: 0,
    };
    ck.verify(&cert.delta, &cert.eps).is_ok()
}

pub fn ed_limit(f: &Expr, a: &Rat, l: &Rat, sched: &EpsSchedule, opts: &EdOptions) -> Verdict {
    run(Target::plain(f), a, l, sched, opts).0
}

/// Like [`ed_limit`], also returning the per-ε certificates.
pub fn ed_limit_certified(f: &Expr, a: &Rat, l: &Rat, sched: &EpsSchedule, opts: &EdOptions) -> (Verdict, Vec<DeltaCertificate>) {
    run(Target::plain(f), a, l, sched, opts)
}

fn value_at(f: &Expr, a: &Rat, opts: &EdOptions) -> Result<RatInterval, Verdict> {
    match eval_rat(f, a, opts.prec) {
        Ok(v) => Ok(v),
        Err(EvalError::Domain(_)) if opts.extend_zero => Ok(RatInterval::point(Rat::zero())),
        Err(EvalError::Domain(d)) => Err(Verdict::refuted(
            Record::new().with("x", a).with("reason", d.reason),
            "f is not defined at a",
        )),
        Err(e) => Err(Verdict::undecided(&e.to_string())),
    }
}

pub fn ed_continuity(f: &Expr, a: &Rat, sched: &EpsSchedule, opts: &EdOptions) -> Verdict {
    let fa = match value_at(f, a, opts) {
        Ok(v) => v,
        Err(v) => return v,
    };
    let l = fa.mid();
    let v = ed_limit(f, a, &l, sched, opts);
    if v.is_proved() && !fa.is_point() {
        let mut out = Verdict::proved(&v.note).with_enclosure(fa);
        out.certificate = v.certificate;
        return out;
    }
    v
}

/// ε-δ limit of the difference quotient at `a`, compared with `fprime`.
pub fn ed_derivative(f: &Expr, fprime: &Rat, a: &Rat, sched: &EpsSchedule, opts: &EdOptions) -> Verdict {
    let fa = match value_at(f, a, opts) {
        Ok(v) => v,
        Err(v) => return v,
    };
    let target = Target::quotient(f, a, fa, opts.prec);
    run(target, a, fprime, sched, opts).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rat::{int, ratio};
    use crate::verdict::Status;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn o() -> EdOptions {
        EdOptions::default()
    }

    #[test]
    fn schedule_validation() {
        assert!(EpsSchedule::new(alloc::vec![ratio(1, 10), ratio(1, 10)]).is_err());
        assert!(EpsSchedule::new(alloc::vec![int(0)]).is_err());
        assert_eq!(EpsSchedule::default().values().len(), 6);
        assert_eq!(EpsSchedule::default().last(), &ratio(1, 1_000_000));
    }

    #[test]
    fn verify_linear() {
        let (v, c) = ed_verify_limit(&p("2*x"), &int(1), &int(2), &ratio(1, 10), &o());
        assert!(v.is_proved());
        let c = c.unwrap();
        assert!(c.delta <= ratio(1, 20));
        assert!(recheck(&p("2*x"), &int(1), &int(2), &c, &o()));
        assert_eq!(DeltaCertificate::from_text(&c.to_text()), Some(c));
    }

    #[test]
    fn removable_singularity() {
        let f = p("(x^2 - 1)/(x - 1)");
        assert!(ed_limit(&f, &int(1), &int(2), &EpsSchedule::default(), &o()).is_proved());
    }

    #[test]
    fn oscillation_refuted() {
        let (v, _) = ed_verify_limit(&p("sin(1/x)"), &int(0), &int(0), &ratio(1, 2), &o());
        assert_eq!(v.status, Status::Refuted);
        let x = rat::parse_rat(v.witness.as_ref().unwrap().get("x").unwrap()).unwrap();
        let fx = eval_rat(&p("sin(1/x)"), &x, 64).unwrap();
        assert!(fx.abs().lo() >= &ratio(1, 2));
    }

    #[test]
    fn limit_examples() {
        let s = EpsSchedule::default();
        let (v, certs) = ed_limit_certified(&p("x^2"), &int(3), &int(9), &s, &o());
        assert!(v.is_proved());
        for w in certs.windows(2) {
            assert!(w[1].delta <= w[0].delta);
        }
        assert!(ed_limit(&p("x^2"), &int(3), &int(8), &s, &o()).is_refuted());
        let v = ed_limit(&p("abs(x)/x"), &int(0), &int(1), &s, &o());
        assert!(v.is_refuted());
        let x = rat::parse_rat(v.witness.unwrap().get("x").unwrap()).unwrap();
        assert!(x.is_negative());
    }

    #[test]
    fn continuity_examples() {
        let s = EpsSchedule::default();
        assert!(ed_continuity(&p("x^2"), &int(3), &s, &o()).is_proved());
        assert!(ed_continuity(&p("1/x"), &int(0), &s, &o()).is_refuted());
        assert!(ed_continuity(&p("abs(x)/x"), &int(0), &s, &o().extend_zero(true)).is_refuted());
        let v = ed_continuity(&p("sin(x)"), &int(1), &s, &o());
        assert!(v.is_proved() && v.enclosure.is_some());
    }

    #[test]
    fn derivative_examples() {
        let s = EpsSchedule::default();
        assert!(ed_derivative(&p("x^3"), &int(12), &int(2), &s, &o()).is_proved());
        assert!(ed_derivative(&p("x^3"), &int(11), &int(2), &s, &o()).is_refuted());
        assert!(ed_derivative(&p("abs(x)"), &int(0), &int(0), &s, &o()).is_refuted());
        let f = p("x^2 * sin(1/x)");
        let v = ed_derivative(&f, &int(0), &int(0), &s, &o().extend_zero(true));
        assert!(v.is_proved(), "{:?}", v);
        assert!(ed_derivative(&p("exp(x)"), &int(1), &int(0), &s, &o()).is_proved());
    }
}
