//! Checkers built on evaluation at points infinitely close to `a`.
//!
//! Universal statements over all `x ≈ a` are sampled on a finite family of
//! infinitesimal offsets. When evaluation certifies that `f` is analytic at
//! `a` (see [`LcEval::smooth`]) closeness between probes holds for every
//! infinitesimal offset, and the verdict no longer depends on the sample.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::expr::{eval_lc_traced, jet_eval, EvalConfig, Expr, LcEval, LcEvalError};
use crate::interval::RatInterval;
use crate::lc::{LcError, LcNumber};
use crate::lc_interval::{i_close_verdict, LcInterval};
use crate::rat::{self, Rat};
use crate::verdict::{Record, Status, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeError {
    Empty,
    NotInfinitesimal(LcNumber),
    Zero,
}

impl fmt::Display for ProbeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeError::Empty => write!(f, "probe set is empty"),
            ProbeError::NotInfinitesimal(x) => write!(f, "probe {} is not infinitesimal", x),
            ProbeError::Zero => write!(f, "probe offsets must be nonzero"),
        }
    }
}

/// Nonzero infinitesimal offsets `h` at which `f(a + h)` is examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeSet {
    offsets: Vec<LcNumber>,
}

impl ProbeSet {
    pub fn new(offsets: Vec<LcNumber>) -> Result<ProbeSet, ProbeError> {
        if offsets.is_empty() {
            return Err(ProbeError::Empty);
        }
        for h in &offsets {
            if h.is_zero() {
                return Err(ProbeError::Zero);
            }
            if !h.is_infinitesimal() {
                return Err(ProbeError::NotInfinitesimal(h.clone()));
            }
        }
        Ok(ProbeSet { offsets })
    }

    /// `{ε, −ε, 2ε, ε², ε + ε³}` at truncation order `trunc`.
    pub fn standard(trunc: &Rat) -> ProbeSet {
        let e = LcNumber::eps_with(trunc.clone());
        let mono = |c: i64, q: i64| LcNumber::monomial(rat::int(c), rat::int(q), trunc.clone());
        ProbeSet {
            offsets: vec![e.clone(), -e.clone(), mono(2, 1), mono(1, 2), &e + &mono(1, 3)],
        }
    }

    pub fn offsets(&self) -> &[LcNumber] {
        &self.offsets
    }

    /// Every unordered pair of distinct offsets.
    pub fn pairs(&self) -> Vec<(LcNumber, LcNumber)> {
        let mut out = Vec::new();
        for i in 0..self.offsets.len() {
            for j in i + 1..self.offsets.len() {
                out.push((self.offsets[i].clone(), self.offsets[j].clone()));
            }
        }
        out
    }

    pub fn has_both_signs(&self) -> bool {
        self.offsets.iter().any(|h| h.signum() > 0) && self.offsets.iter().any(|h| h.signum() < 0)
    }
}

/// Pairs for the two-point quotient criterion: two offsets close to each
/// other, mixed signs and orders, and two pairs anchored at `a` itself
/// (first offset zero).
pub fn eq1_pairs(trunc: &Rat) -> Vec<(LcNumber, LcNumber)> {
    let t = trunc.clone();
    let e = LcNumber::eps_with(t.clone());
    let e2 = LcNumber::monomial(Rat::one(), rat::int(2), t.clone());
    let zero = LcNumber::zero_with(t.clone());
    vec![
        (e.clone(), &e + &e2),
        (e.clone(), e.scale(&rat::int(2))),
        (-e.clone(), e.clone()),
        (e2.clone(), e.clone()),
        (zero.clone(), e.clone()),
        (zero, -e),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsaConfig {
    pub eval: EvalConfig,
    /// Use `f(a) = 0` when `f` is undefined at `a`.
    pub extend_zero: bool,
}

impl Default for NsaConfig {
    fn default() -> Self {
        NsaConfig {
            eval: EvalConfig::default(),
            extend_zero: false,
        }
    }
}

impl NsaConfig {
    pub fn extend_zero(mut self, on: bool) -> Self {
        self.extend_zero = on;
        self
    }

    pub fn probes(&self) -> ProbeSet {
        ProbeSet::standard(&self.eval.trunc_order)
    }
}

fn shifted(a: &Rat, h: &LcNumber) -> LcNumber {
    &LcNumber::from_rat_with(a.clone(), h.trunc().clone()) + h
}

fn describe(e: &LcEvalError) -> &'static str {
    match e {
        LcEvalError::Domain(_) => "domain error",
        LcEvalError::UnlimitedTranscendental(_) => "transcendental function at an unlimited argument",
        LcEvalError::Lc(_) => "field arithmetic error",
        LcEvalError::Precision => "precision exhausted",
    }
}

/// `f(a)` as a degenerate or enclosed field value.
fn value_at(f: &Expr, a: &Rat, cfg: &NsaConfig) -> Result<LcInterval, LcEvalError> {
    let x = LcNumber::from_rat_with(a.clone(), cfg.eval.trunc_order.clone());
    match eval_lc_traced(f, &x, &cfg.eval) {
        Ok(v) => Ok(v.value),
        Err(LcEvalError::Domain(_)) if cfg.extend_zero => Ok(LcInterval::point(LcNumber::zero_with(cfg.eval.trunc_order.clone()))),
        Err(e) => Err(e),
    }
}

struct Sampled {
    label: LcNumber,
    value: LcInterval,
}

/// Shared aggregation over a family of sampled values that should all be
/// limited and pairwise infinitely close.
struct Family {
    items: Vec<Sampled>,
    problems: Vec<(LcNumber, &'static str)>,
    all_smooth: bool,
}

impl Family {
    fn new() -> Self {
        Family {
            items: Vec::new(),
            problems: Vec::new(),
            all_smooth: true,
        }
    }

    fn push(&mut self, label: LcNumber, r: Result<LcEval, LcEvalError>) {
        match r {
            Ok(v) => {
                self.all_smooth &= v.smooth;
                self.items.push(Sampled { label, value: v.value });
            }
            Err(e) => {
                self.all_smooth = false;
                self.problems.push((label, describe(&e)));
            }
        }
    }

    fn push_value(&mut self, label: LcNumber, v: LcInterval, smooth: bool) {
        self.all_smooth &= smooth;
        self.items.push(Sampled { label, value: v });
    }

    /// Refutation if some value is provably unlimited or two values are
    /// provably apart; `Proved` if all values are limited and pairwise
    /// infinitely close; `Undecided` otherwise.
    fn judge(&self, what: &str) -> Verdict {
        for s in &self.items {
            if s.value.is_provably_large() {
                let w = Record::new()
                    .with("probe", &s.label)
                    .with(what, &s.value);
                return Verdict::refuted(w, &format!("{} is infinitely large", what));
            }
        }
        let mut all_close = true;
        for i in 0..self.items.len() {
            for j in i + 1..self.items.len() {
                let v = i_close_verdict(&self.items[i].value, &self.items[j].value);
                match v.status {
                    Status::Refuted => {
                        let w = Record::new()
                            .with("probe_1", &self.items[i].label)
                            .with("value_1", &self.items[i].value)
                            .with("probe_2", &self.items[j].label)
                            .with("value_2", &self.items[j].value);
                        return Verdict::refuted(w, &format!("{}s at two probes are not infinitely close", what));
                    }
                    Status::Undecided => all_close = false,
                    Status::Proved => {}
                }
            }
        }
        if let Some((h, why)) = self.problems.first() {
            return Verdict::undecided(&format!("{} at probe {}", why, h));
        }
        if self.items.is_empty() {
            return Verdict::undecided("no probe could be evaluated");
        }
        let limited = self.items.iter().all(|s| s.value.is_limited());
        if limited && all_close {
            let first = &self.items[0].value;
            match first.center().standard_part() {
                Ok(l) => return Verdict::proved(&format!("all probe {}s infinitely close", what)).with_value(l),
                Err(_) => return Verdict::undecided("standard part beyond truncation order"),
            }
        }
        Verdict::undecided(&format!("probe {}s not certified infinitely close", what))
    }
}

fn value_verdict(enclosure: RatInterval, note: &str) -> Verdict {
    let v = Verdict::proved(note);
    if enclosure.is_point() {
        v.with_value(enclosure.lo().clone())
    } else {
        v.with_enclosure(enclosure)
    }
}

/// Analytic-at-`a` route: the Taylor coefficient of order `k` of `f` at `a`.
fn taylor_coefficient(f: &Expr, a: &Rat, k: usize, cfg: &NsaConfig) -> Option<RatInterval> {
    let j = jet_eval(f, &RatInterval::point(a.clone()), k + 1, cfg.eval.prec).ok()?;
    Some(j.coeffs[k].clone())
}

fn limit_family(f: &Expr, a: &Rat, probes: &ProbeSet, cfg: &NsaConfig) -> Family {
    let mut fam = Family::new();
    for h in probes.offsets() {
        fam.push(h.clone(), eval_lc_traced(f, &shifted(a, h), &cfg.eval));
    }
    fam
}

/// `lim_{x→a} f(x)` via `f(a + h) ≈ L` for every probe `h`.
pub fn nsa_limit(f: &Expr, a: &Rat, probes: &ProbeSet, cfg: &NsaConfig) -> Verdict {
    let fam = limit_family(f, a, probes, cfg);
    let v = fam.judge("value");
    if v.is_undecided() && fam.all_smooth && fam.problems.is_empty() {
        if let Some(c0) = taylor_coefficient(f, a, 0, cfg) {
            return value_verdict(c0, "f is analytic at a");
        }
    }
    v
}

/// Continuity at `a`: the limit exists and equals `f(a)`.
pub fn nsa_continuity(f: &Expr, a: &Rat, probes: &ProbeSet, cfg: &NsaConfig) -> Verdict {
    let fa = match value_at(f, a, cfg) {
        Ok(v) => v,
        Err(e) => return Verdict::undecided(&format!("not defined at a: {}", describe(&e))),
    };
    let fam = limit_family(f, a, probes, cfg);
    // any probe value provably apart from f(a) refutes continuity
    for s in &fam.items {
        let c = i_close_verdict(&s.value, &fa);
        if c.is_refuted() {
            let w = Record::new()
                .with("probe", &s.label)
                .with("value", &s.value)
                .with("f(a)", &fa);
            return Verdict::refuted(w, "value at a probe is not infinitely close to f(a)");
        }
    }
    let lim = fam.judge("value");
    match lim.status {
        Status::Refuted => lim.with_note("limit does not exist"),
        Status::Proved => {
            let l = lim.value.clone().unwrap_or_else(Rat::zero);
            if fa.is_degenerate() {
                match fa.center().standard_part() {
                    Ok(v) if fa.center().is_limited() && v == l && fa.center().infinitesimal_part().is_zero() => {
                        Verdict::proved("limit equals f(a)").with_value(l)
                    }
                    Ok(v) => Verdict::refuted(
                        Record::new().with("limit", &l).with("f(a)", &v),
                        "limit differs from f(a)",
                    ),
                    Err(_) => Verdict::undecided("f(a) not determined"),
                }
            } else if fam.all_smooth {
                fa_verdict(&fa, "f is analytic at a")
            } else {
                Verdict::undecided("f(a) known only as an enclosure")
            }
        }
        Status::Undecided => {
            if fam.all_smooth && fam.problems.is_empty() {
                fa_verdict(&fa, "f is analytic at a")
            } else {
                lim
            }
        }
    }
}

fn fa_verdict(fa: &LcInterval, note: &str) -> Verdict {
    match fa.standard_enclosure() {
        Some(e) => value_verdict(e, note),
        None => Verdict::undecided("f(a) not determined"),
    }
}

fn quotient(fx: &LcInterval, fa: &LcInterval, h: &LcNumber) -> Result<LcInterval, LcEvalError> {
    let num = fx - fa;
    let inv = h.inv().map_err(LcEvalError::Lc)?;
    Ok(&num * &LcInterval::point(inv))
}

fn quotient_family(f: &Expr, a: &Rat, offsets: &[LcNumber], fa: &LcInterval, cfg: &NsaConfig) -> Family {
    let mut fam = Family::new();
    for h in offsets {
        match eval_lc_traced(f, &shifted(a, h), &cfg.eval) {
            Ok(v) => match quotient(&v.value, fa, h) {
                Ok(q) => fam.push_value(h.clone(), q, v.smooth),
                Err(e) => fam.push(h.clone(), Err(e)),
            },
            Err(e) => fam.push(h.clone(), Err(e)),
        }
    }
    fam
}

/// `f'(a) = st((f(a + h) − f(a)) / h)`, required to agree across probes.
pub fn nsa_derivative(f: &Expr, a: &Rat, probes: &ProbeSet, cfg: &NsaConfig) -> Verdict {
    let fa = match value_at(f, a, cfg) {
        Ok(v) => v,
        Err(e) => return Verdict::undecided(&format!("not defined at a: {}", describe(&e))),
    };
    let fam = quotient_family(f, a, probes.offsets(), &fa, cfg);
    let v = fam.judge("difference quotient");
    if v.is_undecided() && fam.all_smooth && fam.problems.is_empty() {
        if let Some(c1) = taylor_coefficient(f, a, 1, cfg) {
            return value_verdict(c1, "f is analytic at a");
        }
    }
    v
}

/// Two-point criterion: for each pair, the quotient through `a + h1` is not
/// large and is infinitely close to the quotient through `a + h2`.
pub fn nsa_differentiable_two_point(f: &Expr, a: &Rat, pairs: &[(LcNumber, LcNumber)], cfg: &NsaConfig) -> Verdict {
    let fa = match value_at(f, a, cfg) {
        Ok(v) => v,
        Err(e) => return Verdict::undecided(&format!("not defined at a: {}", describe(&e))),
    };
    let mut status = Status::Proved;
    let mut first_undecided: Option<Verdict> = None;
    let mut any_rough = false;
    let mut value = None;
    for (h1, h2) in pairs {
        let fam = quotient_family(f, a, &[h1.clone(), h2.clone()], &fa, cfg);
        any_rough |= !(fam.all_smooth && fam.problems.is_empty());
        let v = fam.judge("difference quotient");
        match v.status {
            Status::Refuted => return v,
            Status::Undecided => {
                status = status.combine(Status::Undecided);
                first_undecided.get_or_insert(v);
            }
            Status::Proved => {
                value.get_or_insert(v.value.clone());
            }
        }
    }
    if status == Status::Proved {
        let mut out = Verdict::proved("quotients limited and pairwise infinitely close");
        if let Some(Some(l)) = value {
            out = out.with_value(l);
        }
        return out;
    }
    if !any_rough {
        if let Some(c1) = taylor_coefficient(f, a, 1, cfg) {
            return value_verdict(c1, "f is analytic at a");
        }
    }
    first_undecided.unwrap_or_else(|| Verdict::undecided("no pairs"))
}

/// Cross quotients `(f(a+h2) − f(a+h1)) / (h2 − h1)` compared with `f'(a)`.
pub fn eq1_check(f: &Expr, fprime: &Expr, a: &Rat, pairs: &[(LcNumber, LcNumber)], cfg: &NsaConfig) -> Verdict {
    let fpa = match value_at(fprime, a, cfg) {
        Ok(v) => v,
        Err(e) => return Verdict::undecided(&format!("f' not defined at a: {}", describe(&e))),
    };
    let fa = match value_at(f, a, cfg) {
        Ok(v) => v,
        Err(e) => return Verdict::undecided(&format!("not defined at a: {}", describe(&e))),
    };
    let mut status = Status::Proved;
    let mut first_undecided: Option<Verdict> = None;
    let mut all_smooth = true;
    for (h1, h2) in pairs {
        let span = h2 - h1;
        if span.is_zero() {
            continue;
        }
        let at = |h: &LcNumber| -> Result<LcEval, LcEvalError> {
            if h.is_zero() {
                return Ok(LcEval {
                    value: fa.clone(),
                    smooth: true,
                });
            }
            eval_lc_traced(f, &shifted(a, h), &cfg.eval)
        };
        let (v1, v2) = match (at(h1), at(h2)) {
            (Ok(v1), Ok(v2)) => (v1, v2),
            (Err(e), _) | (_, Err(e)) => {
                all_smooth = false;
                status = status.combine(Status::Undecided);
                first_undecided.get_or_insert(Verdict::undecided(&format!("{} in pair ({}, {})", describe(&e), h1, h2)));
                continue;
            }
        };
        all_smooth &= v1.smooth && v2.smooth;
        let inv = match span.inv() {
            Ok(i) => i,
            Err(LcError::ZeroDivision) | Err(_) => continue,
        };
        let cross = &(&v2.value - &v1.value) * &LcInterval::point(inv);
        if cross.is_provably_large() {
            let w = Record::new().with("h1", h1).with("h2", h2).with("cross_quotient", &cross);
            return Verdict::refuted(w, "cross quotient is infinitely large");
        }
        let c = i_close_verdict(&cross, &fpa);
        match c.status {
            Status::Refuted => {
                let w = Record::new()
                    .with("h1", h1)
                    .with("h2", h2)
                    .with("cross_quotient", &cross)
                    .with("f'(a)", &fpa);
                return Verdict::refuted(w, "cross quotient not infinitely close to f'(a)");
            }
            Status::Undecided => {
                status = status.combine(Status::Undecided);
                first_undecided.get_or_insert(Verdict::undecided(&format!(
                    "cross quotient {} not certified close to f'(a) for pair ({}, {})",
                    cross, h1, h2
                )));
            }
            Status::Proved => {}
        }
    }
    if status == Status::Proved {
        let v = Verdict::proved("cross quotients infinitely close to f'(a)");
        return match fpa.center().standard_part() {
            Ok(l) if fpa.is_degenerate() => v.with_value(l),
            _ => v,
        };
    }
    if all_smooth {
        // analytic f: cross quotients are all infinitely close to the true
        // derivative; compare it with the supplied value
        if let (Some(c1), Some(fp)) = (taylor_coefficient(f, a, 1, cfg), fpa.standard_enclosure()) {
            if !c1.intersects(&fp) {
                let w = Record::new().with("derivative", &c1).with("f'(a)", &fp);
                return Verdict::refuted(w, "f'(a) differs from the derivative of the analytic f");
            }
            if c1.is_point() && fp.is_point() {
                return Verdict::proved("f is analytic at a and f'(a) matches").with_value(c1.lo().clone());
            }
        }
    }
    first_undecided.unwrap_or_else(|| Verdict::undecided("no usable pairs"))
}

/// `((x + e)^n − x^n)/e − n·x^(n−1)`, exactly.
pub fn dq_gap_xn(n: u32, x: &Rat, e: &Rat) -> Rat {
    assert!(!e.is_zero(), "e must be nonzero");
    let n64 = n as i64;
    let q = (rat::powi(&(x + e), n64) - rat::powi(x, n64)) / e;
    let lin = if n == 0 { Rat::zero() } else { rat::int(n64) * rat::powi(x, n64 - 1) };
    q - lin
}

impl fmt::Display for ProbeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.offsets.iter().map(|h| h.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
