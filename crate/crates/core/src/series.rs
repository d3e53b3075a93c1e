//! Partial sums and convergence verdicts for series `Σ a_n`.
//!
//! Statements about every index beyond some `M` are certified by tail
//! enclosures: a set guaranteed to contain `S_n` for all `n > M` and the
//! limit, when it exists. Two sources are recognised: terms of the form
//! `g(n) − g(n−1)` with rational `g` (partial sums in closed form), and terms
//! `c^n·R(n)` with `R` rational, bounded by the ratio test.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::expr::{eval_rat, EvalError, Expr};
use crate::interval::RatInterval;
use crate::poly::RatFunc;
use crate::rat::{self, Rat};
use crate::verdict::{Record, Status, Verdict};

pub const DEFAULT_HORIZON: i64 = 10_000;

/// Width below which a converging sum's enclosure is considered final.
fn target_width() -> Rat {
    rat::pow2(-30)
}

/// `a_n` for `n ≥ offset`; the first `head.len()` terms are given explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqExpr {
    pub term: Expr,
    pub offset: i64,
    pub head: Vec<Rat>,
}

impl SeqExpr {
    pub fn new(term: Expr) -> SeqExpr {
        SeqExpr {
            term,
            offset: 0,
            head: Vec::new(),
        }
    }

    pub fn with_offset(mut self, offset: i64) -> SeqExpr {
        self.offset = offset;
        self
    }

    pub fn with_head(mut self, head: Vec<Rat>) -> SeqExpr {
        self.head = head;
        self
    }

    /// First index where `term` applies.
    fn formula_start(&self) -> i64 {
        self.offset + self.head.len() as i64
    }

    pub fn term_at(&self, n: i64, prec: u32) -> Result<RatInterval, SeriesError> {
        let k = n - self.offset;
        if k >= 0 && (k as usize) < self.head.len() {
            return Ok(RatInterval::point(self.head[k as usize].clone()));
        }
        eval_rat(&self.term, &rat::int(n), prec).map_err(|e| SeriesError::Eval(n, e))
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.head.iter().enumerate() {
            write!(f, "a_{} = {}; ", self.offset + i as i64, h)?;
        }
        write!(f, "a_n = {} (n >= {})", self.term, self.formula_start())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    Eval(i64, EvalError),
    NotNonNegative(i64),
    BadHorizon(i64),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::Eval(n, e) => write!(f, "term {}: {}", n, e),
            SeriesError::NotNonNegative(n) => write!(f, "term {} is not certified non-negative", n),
            SeriesError::BadHorizon(n) => write!(f, "horizon {} precedes the first index", n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumTrace {
    pub horizon: i64,
    /// `(n, S_n)` for every index from the offset to the horizon.
    pub sums: Vec<(i64, RatInterval)>,
    /// Every term enclosure is non-negative.
    pub monotone: bool,
    pub bound_found: Option<Rat>,
}

impl SumTrace {
    pub fn last(&self) -> &RatInterval {
        &self.sums.last().expect("nonempty trace").1
    }
}

pub fn partial_sums(s: &SeqExpr, horizon: i64, prec: u32) -> Result<SumTrace, SeriesError> {
    if horizon < s.offset {
        return Err(SeriesError::BadHorizon(horizon));
    }
    let mut acc = RatInterval::point(Rat::zero());
    let mut sums = Vec::with_capacity((horizon - s.offset + 1) as usize);
    let mut monotone = true;
    for n in s.offset..=horizon {
        let a = s.term_at(n, prec)?;
        monotone &= !a.lo().is_negative();
        acc = &acc + &a;
        sums.push((n, acc.clone()));
    }
    Ok(SumTrace {
        horizon,
        sums,
        monotone,
        bound_found: None,
    })
}

/// Lazily extended partial sums.
struct Sums<'a> {
    s: &'a SeqExpr,
    prec: u32,
    sums: Vec<RatInterval>,
}

impl<'a> Sums<'a> {
    fn new(s: &'a SeqExpr, prec: u32) -> Self {
        Sums { s, prec, sums: Vec::new() }
    }

    /// `S_n`; the empty sum for `n < offset`.
    fn at(&mut self, n: i64) -> Result<RatInterval, SeriesError> {
        if n < self.s.offset {
            return Ok(RatInterval::point(Rat::zero()));
        }
        let k = (n - self.s.offset) as usize;
        while self.sums.len() <= k {
            let i = self.s.offset + self.sums.len() as i64;
            let a = self.s.term_at(i, self.prec)?;
            let next = match self.sums.last() {
                Some(prev) => prev + &a,
                None => a,
            };
            self.sums.push(next);
        }
        Ok(self.sums[k].clone())
    }
}

/// `a_n = c^n · R(n)`.
#[derive(Clone, Debug)]
struct GeomForm {
    base: Rat,
    r: RatFunc,
}

fn geom_form(e: &Expr) -> Option<GeomForm> {
    if e.is_rational_function() {
        return Some(GeomForm {
            base: Rat::one(),
            r: RatFunc::from_expr(e)?,
        });
    }
    match e {
        Expr::PowVar(c) => Some(GeomForm {
            base: c.clone(),
            r: RatFunc::from_expr(&Expr::int(1))?,
        }),
        Expr::Neg(a) => {
            let g = geom_form(a)?;
            Some(GeomForm {
                base: g.base,
                r: RatFunc::from_expr(&Expr::int(0))?.sub(&g.r),
            })
        }
        Expr::Mul(a, b) => {
            let (ga, gb) = (geom_form(a)?, geom_form(b)?);
            Some(GeomForm {
                base: ga.base * gb.base,
                r: ga.r.mul(&gb.r),
            })
        }
        Expr::Div(a, b) if b.is_rational_function() => {
            let ga = geom_form(a)?;
            Some(GeomForm {
                base: ga.base,
                r: ga.r.div(&RatFunc::from_expr(b)?)?,
            })
        }
        _ => None,
    }
}

/// Lower bound of a rational function on `[m, ∞)`.
fn lower_beyond(r: &RatFunc, m: &Rat) -> Option<Rat> {
    if r.is_polynomial() {
        let p = r.num.scale(&r.den.lead().recip());
        let shifted = p.shift(m);
        if shifted.coeffs().iter().all(|c| !c.is_negative()) {
            return Some(p.eval(m));
        }
    }
    r.range_beyond(m).map(|i| i.lo().clone())
}

/// `a_n = g(n) − g(n − 1)` for the formula part.
fn telescoping(term: &Expr) -> Option<Expr> {
    let back = Expr::Var.sub(Expr::int(1));
    if let Expr::Sub(a, b) = term {
        if a.subst(&back).as_ref() == Some(&**b) {
            return Some((**a).clone());
        }
        if b.subst(&back).as_ref() == Some(&**a) {
            return Some((**b).clone().neg());
        }
    }
    None
}

/// Sources of tail enclosures for one series.
struct Tails<'a> {
    s: &'a SeqExpr,
    prec: u32,
    /// `S_n = shift + g(n)` for `n ≥ formula start − 1`.
    tele: Option<(Rat, RatFunc)>,
    geom: Option<GeomForm>,
}

#[derive(Clone, Debug)]
struct Tail {
    /// Contains `S_n` for every `n > M` and the limit if it exists.
    enclosure: RatInterval,
    how: &'static str,
}

impl<'a> Tails<'a> {
    fn new(s: &'a SeqExpr, prec: u32) -> Self {
        let start = s.formula_start();
        let tele = telescoping(&s.term).and_then(|g| {
            let gr = RatFunc::from_expr(&g)?;
            let g_prev = gr.eval(&rat::int(start - 1))?;
            let head: Rat = s.head.iter().fold(Rat::zero(), |a, b| a + b);
            Some((head - g_prev, gr))
        });
        let geom = geom_form(&s.term);
        Tails { s, prec, tele, geom }
    }

    /// Largest `M` worth trying: closed-form tails need no partial sums
    /// beyond the head, so the horizon does not limit them.
    fn m_cap(&self, horizon: i64) -> i64 {
        if self.tele.is_some() {
            i64::MAX / 4
        } else {
            horizon
        }
    }

    fn certified_nonneg_beyond(&self, m: i64) -> bool {
        match &self.geom {
            Some(g) => {
                g.base.is_positive()
                    && lower_beyond(&g.r, &rat::int(m.max(self.s.formula_start()))).is_some_and(|l| !l.is_negative())
            }
            None => false,
        }
    }

    /// Positive lower bound on `a_n` for `n ≥ m`.
    fn term_floor_beyond(&self, m: i64) -> Option<Rat> {
        let g = self.geom.as_ref()?;
        let m = m.max(self.s.formula_start()).max(0);
        if g.base < Rat::one() {
            return None;
        }
        let lo = lower_beyond(&g.r, &rat::int(m))?;
        let floor = lo * rat::powi(&g.base, m);
        floor.is_positive().then_some(floor)
    }

    fn tail(&self, sums: &mut Sums<'_>, m: i64) -> Result<Option<Tail>, SeriesError> {
        let start = self.s.formula_start();
        if m + 1 < start {
            return Ok(None);
        }
        if let Some((shift, g)) = &self.tele {
            if let Some(range) = g.range_beyond(&rat::int(m + 1)).filter(|_| m + 1 > 0) {
                return Ok(Some(Tail {
                    enclosure: &RatInterval::point(shift.clone()) + &range,
                    how: "closed-form partial sums",
                }));
            }
        }
        if let Some(gf) = &self.geom {
            let m1 = rat::int(m + 1);
            let next = gf.r.shift(&Rat::one());
            let ratio = next.div(&gf.r).map(|q| q.mul(&RatFunc::poly(crate::poly::Poly::constant(gf.base.clone()))));
            if let Some(q) = ratio.and_then(|q| q.range_beyond(&m1)) {
                let qmax = q.mag();
                if qmax < Rat::one() {
                    let a_next = self.s.term_at(m + 1, self.prec)?;
                    let t = a_next.mag() / (Rat::one() - &qmax);
                    let sm = sums.at(m)?;
                    let spread = if self.certified_nonneg_beyond(m + 1) {
                        RatInterval::new(Rat::zero(), t)
                    } else {
                        RatInterval::new(-t.clone(), t)
                    };
                    return Ok(Some(Tail {
                        enclosure: &sm + &spread,
                        how: "ratio test",
                    }));
                }
            }
        }
        Ok(None)
    }
}

enum Found {
    /// Smallest `M` whose tail satisfies the goal.
    Goal(i64, Tail),
    /// A probed `M` whose tail satisfies the opposite condition.
    Stop(i64, Tail),
    None,
}

/// Probes `M = lo, lo+1, lo+3, lo+7, …` up to the cap, then bisects down to
/// the smallest `M` meeting `goal`. Stops early when `stop` holds.
fn search_m(
    tails: &Tails<'_>,
    sums: &mut Sums<'_>,
    lo: i64,
    horizon: i64,
    goal: &dyn Fn(&Tail) -> bool,
    stop: &dyn Fn(&Tail) -> bool,
) -> Result<Found, SeriesError> {
    let horizon = tails.m_cap(horizon);
    let mut prev = lo - 1;
    let mut step = 1i64;
    let mut m = lo;
    loop {
        if let Some(t) = tails.tail(sums, m)? {
            if goal(&t) {
                let (mut a, mut b, mut best) = (prev, m, t);
                while b - a > 1 {
                    let mid = a + (b - a) / 2;
                    match tails.tail(sums, mid)? {
                        Some(t) if goal(&t) => {
                            b = mid;
                            best = t;
                        }
                        _ => a = mid,
                    }
                }
                return Ok(Found::Goal(b, best));
            }
            if stop(&t) {
                return Ok(Found::Stop(m, t));
            }
        }
        if m >= horizon {
            return Ok(Found::None);
        }
        prev = m;
        m = (m + step).min(horizon);
        step *= 2;
    }
}

fn schedule_check(values: &[Rat]) {
    assert!(!values.is_empty(), "empty schedule");
}

/// `(∃M)(∀n > M) |S_n − L| < ε` for every `ε` in the schedule.
pub fn weierstrass_converges(s: &SeqExpr, l: &Rat, sched: &[Rat], horizon: i64, prec: u32) -> Verdict {
    schedule_check(sched);
    let tails = Tails::new(s, prec);
    let mut sums = Sums::new(s, prec);
    let start = s.offset;
    let lpt = RatInterval::point(l.clone());
    let mut ms: Vec<String> = Vec::new();
    let mut lo = start;
    let mut last_tail = None;
    for eps in sched {
        let close = |t: &Tail| &(&t.enclosure - &lpt).mag() < eps;
        let apart = |t: &Tail| &(&t.enclosure - &lpt).mig() >= eps;
        match search_m(&tails, &mut sums, lo, horizon, &close, &apart) {
            Ok(Found::Goal(m, t)) => {
                ms.push(format!("{}:{}", eps, m));
                lo = m;
                last_tail = Some(t);
            }
            Ok(Found::Stop(m, t)) => {
                let w = Record::new()
                    .with("eps", eps)
                    .with("M", m)
                    .with("S_n for all n > M", &t.enclosure);
                return Verdict::refuted(w, &format!("partial sums stay at least eps from L ({})", t.how));
            }
            Ok(Found::None) => {
                return Verdict::undecided(&format!("no certified M up to the horizon for eps = {}", eps));
            }
            Err(e) => return Verdict::undecided(&format!("{}", e)),
        }
    }
    let t = last_tail.expect("nonempty schedule");
    let cert = Record::new().with("tail", t.how).with("M", ms.join(","));
    Verdict::proved("tail within eps of L beyond M for every eps")
        .with_value(l.clone())
        .with_enclosure(t.enclosure)
        .with_certificate(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Behaviour {
    Converges,
    Diverges,
}

impl Behaviour {
    pub fn as_str(self) -> &'static str {
        match self {
            Behaviour::Converges => "converges",
            Behaviour::Diverges => "diverges",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedVerdict {
    pub behaviour: Option<Behaviour>,
    pub verdict: Verdict,
}

/// Monotone partial sums of a non-negative series converge iff bounded.
pub fn nonneg_bounded_verdict(s: &SeqExpr, horizon: i64, prec: u32) -> Result<BoundedVerdict, SeriesError> {
    let tails = Tails::new(s, prec);
    let mut sums = Sums::new(s, prec);
    // certify non-negativity: explicitly up to a prefix, symbolically after
    let prefix = (s.formula_start() + 64).min(horizon.max(s.offset));
    for n in s.offset..=prefix {
        if s.term_at(n, prec)?.lo().is_negative() {
            return Err(SeriesError::NotNonNegative(n));
        }
    }
    let beyond = tails.certified_nonneg_beyond(prefix + 1);
    let narrow = |t: &Tail| t.enclosure.width() < target_width();
    if let Found::Goal(m, t) = search_m(&tails, &mut sums, s.offset, horizon, &narrow, &|_| false)? {
        let cert = Record::new().with("tail", t.how).with("M", m);
        let v = Verdict::proved("partial sums bounded").with_enclosure(t.enclosure).with_certificate(cert);
        return Ok(BoundedVerdict {
            behaviour: Some(Behaviour::Converges),
            verdict: v,
        });
    }
    if beyond {
        if let Some(floor) = tails.term_floor_beyond(prefix + 1) {
            let cert = Record::new().with("from", prefix + 1).with("term_lower_bound", &floor);
            let v = Verdict::proved("terms bounded below by a positive constant").with_certificate(cert);
            return Ok(BoundedVerdict {
                behaviour: Some(Behaviour::Diverges),
                verdict: v,
            });
        }
    }
    let note = if beyond {
        "no bound or growth certificate"
    } else {
        "non-negativity not certified beyond the checked prefix"
    };
    Ok(BoundedVerdict {
        behaviour: None,
        verdict: Verdict::undecided(note),
    })
}

/// `(∀B)(∃M)(∀n ≥ M) S_n > B` over the given bounds.
pub fn diverges_to_infinity(s: &SeqExpr, bounds: &[Rat], horizon: i64, prec: u32) -> Verdict {
    schedule_check(bounds);
    let tails = Tails::new(s, prec);
    let mut sums = Sums::new(s, prec);
    let mut ms: Vec<String> = Vec::new();
    let mut status = Status::Proved;
    for b in bounds {
        match diverge_one(&tails, &mut sums, s, b, horizon) {
            Ok(Ok(m)) => ms.push(format!("{}:{}", b, m)),
            Ok(Err(Some(w))) => return Verdict::refuted(w, &format!("partial sums bounded below B = {}", b)),
            Ok(Err(None)) => {
                status = Status::Undecided;
                break;
            }
            Err(e) => return Verdict::undecided(&format!("{}", e)),
        }
    }
    if status == Status::Undecided {
        return Verdict::undecided("no certified M for some B");
    }
    Verdict::proved("partial sums exceed every B from M on").with_certificate(Record::new().with("M", ms.join(",")))
}

fn diverge_one(tails: &Tails<'_>, sums: &mut Sums<'_>, s: &SeqExpr, b: &Rat, horizon: i64) -> Result<Result<i64, Option<Record>>, SeriesError> {
    let start = s.formula_start().max(s.offset);
    if let Some(floor) = tails.term_floor_beyond(start) {
        // S_n ≥ S_(start−1) + floor·(n − start + 1); exact for constant terms
        let base = sums.at(start - 1)?;
        let k = ((b - base.lo()) / &floor).floor().to_integer();
        let k = rat::to_i64(&Rat::from_integer(k)).unwrap_or(i64::MAX / 4).max(-1);
        return Ok(Ok((start + k).max(s.offset)));
    }
    let mut prev = s.offset - 1;
    let mut step = 1i64;
    let mut m = s.offset;
    loop {
        if let Some(t) = tails.tail(sums, m)? {
            if t.enclosure.hi() < b {
                let w = Record::new().with("B", b).with("M", m).with("S_n for all n > M", &t.enclosure);
                return Ok(Err(Some(w)));
            }
        }
        if sums.at(m)?.lo() > b && tails.certified_nonneg_beyond(m + 1) {
            // sums are non-decreasing from here; find the first index above B
            let (mut lo, mut hi) = (prev, m);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if sums.at(mid)?.lo() > b && tails.certified_nonneg_beyond(mid + 1) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Ok(hi));
        }
        if m >= horizon {
            return Ok(Err(None));
        }
        prev = m;
        m = (m + step).min(horizon);
        step *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rat::{int, ratio};
    use alloc::vec;

    fn seq(t: &str) -> SeqExpr {
        SeqExpr::new(parse(t).unwrap())
    }

    fn harmonic_diff() -> SeqExpr {
        seq("1/x - 1/(x - 1)").with_offset(1).with_head(vec![int(1)])
    }

    fn eps() -> Vec<Rat> {
        vec![ratio(1, 10), ratio(1, 100), ratio(1, 1000), ratio(1, 1_000_000)]
    }

    #[test]
    fn partial_sum_examples() {
        let t = partial_sums(&seq("(1/2)^x"), 10, 64).unwrap();
        assert_eq!(t.last(), &RatInterval::point(int(2) - rat::pow2(-10)));
        assert!(t.monotone);
        let t = partial_sums(&harmonic_diff(), 100, 64).unwrap();
        assert_eq!(t.last(), &RatInterval::point(ratio(1, 100)));
        assert!(!t.monotone);
        let t = partial_sums(&seq("1"), 7, 64).unwrap();
        assert_eq!(t.last(), &RatInterval::point(int(8)));
        assert_eq!(t.sums.len(), 8);
    }

    #[test]
    fn weierstrass_examples() {
        let v = weierstrass_converges(&seq("(1/2)^x"), &int(2), &eps(), DEFAULT_HORIZON, 64);
        assert!(v.is_proved());
        let v = weierstrass_converges(&harmonic_diff(), &int(0), &eps(), DEFAULT_HORIZON, 64);
        assert!(v.is_proved());
        let v = weierstrass_converges(&seq("(1/2)^x"), &int(3), &eps(), DEFAULT_HORIZON, 64);
        assert!(v.is_refuted());
    }

    #[test]
    fn telescoping_m_is_ceil_inverse_eps() {
        let sched = vec![ratio(1, 10), ratio(1, 100), ratio(1, 1000)];
        let v = weierstrass_converges(&harmonic_diff(), &int(0), &sched, DEFAULT_HORIZON, 64);
        assert_eq!(v.certificate.unwrap().get("M"), Some("1/10:10,1/100:100,1/1000:1000"));
    }

    #[test]
    fn nonneg_examples() {
        let r = nonneg_bounded_verdict(&seq("(1/3)^x"), DEFAULT_HORIZON, 64).unwrap();
        assert_eq!(r.behaviour, Some(Behaviour::Converges));
        let e = r.verdict.enclosure.unwrap();
        assert!(e.contains(&ratio(3, 2)) && e.width() < ratio(1, 1_000_000));
        let r = nonneg_bounded_verdict(&seq("1"), DEFAULT_HORIZON, 64).unwrap();
        assert_eq!(r.behaviour, Some(Behaviour::Diverges));
        assert_eq!(nonneg_bounded_verdict(&seq("-1"), DEFAULT_HORIZON, 64), Err(SeriesError::NotNonNegative(0)));
    }

    #[test]
    fn divergence_examples() {
        let bs = vec![int(10), ratio(5, 2), int(1000)];
        let v = diverges_to_infinity(&seq("1"), &bs, DEFAULT_HORIZON, 64);
        assert!(v.is_proved());
        assert_eq!(v.certificate.unwrap().get("M"), Some("10:10,5/2:2,1000:1000"));
        assert!(diverges_to_infinity(&seq("2^x"), &[int(1000), int(1_000_000)], DEFAULT_HORIZON, 64).is_proved());
        let v = diverges_to_infinity(&seq("(1/2)^x"), &[int(1), int(3)], DEFAULT_HORIZON, 64);
        assert!(v.is_refuted());
        assert_eq!(v.witness.unwrap().get("B"), Some("3"));
    }
}
