//! Riemann sums, Darboux bounds and integrability verdicts.
//!
//! Both integrability checkers rest on an oscillation bound
//! `U(Q) − L(Q) ≤ slope·‖Q‖ + offset` valid for every partition `Q` of
//! `[a, b]` with mesh below a threshold. Since `∫f` and every tagged sum of
//! `Q` lie in `[L(Q), U(Q)]`, such a bound answers the ε-δ question for all
//! partitions at once. The value of the integral is enclosed separately by
//! Taylor models on an adaptive partition.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::classical::EpsSchedule;
use crate::expr::{eval_interval, eval_rat, jet_eval, symbolic_diff, EvalError, Expr, Func};
use crate::interval::RatInterval;
use crate::lc::LcNumber;
use crate::rat::{self, Rat};
use crate::verdict::{Record, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionError {
    TooFewPoints,
    NotIncreasing(usize),
    Parse(String),
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::TooFewPoints => write!(f, "a partition needs at least two points"),
            PartitionError::NotIncreasing(i) => write!(f, "partition points not strictly increasing at position {}", i),
            PartitionError::Parse(s) => write!(f, "bad partition point '{}'", s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    points: Vec<Rat>,
}

impl Partition {
    pub fn new(points: Vec<Rat>) -> Result<Partition, PartitionError> {
        if points.len() < 2 {
            return Err(PartitionError::TooFewPoints);
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(PartitionError::NotIncreasing(i + 1));
        }
        Ok(Partition { points })
    }

    /// `n` equal cells.
    pub fn uniform(a: &Rat, b: &Rat, n: usize) -> Partition {
        assert!(a < b && n > 0, "need a < b and at least one cell");
        let w = (b - a) / rat::int(n as i64);
        let mut points: Vec<Rat> = (0..n).map(|i| a + &w * rat::int(i as i64)).collect();
        points.push(b.clone());
        Partition { points }
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn a(&self) -> &Rat {
        &self.points[0]
    }

    pub fn b(&self) -> &Rat {
        self.points.last().expect("nonempty")
    }

    pub fn cells(&self) -> impl Iterator<Item = RatInterval> + '_ {
        self.points.windows(2).map(|w| RatInterval::new(w[0].clone(), w[1].clone()))
    }

    /// Largest gap between consecutive points.
    pub fn mesh(&self) -> Rat {
        self.points.windows(2).map(|w| &w[1] - &w[0]).max().expect("two points")
    }

    /// Halves every cell.
    pub fn refine(&self) -> Partition {
        let mut points = Vec::with_capacity(self.points.len() * 2 - 1);
        for w in self.points.windows(2) {
            points.push(w[0].clone());
            points.push((&w[0] + &w[1]) / rat::int(2));
        }
        points.push(self.b().clone());
        Partition { points }
    }
}

/// Comma-separated rationals.
impl FromStr for Partition {
    type Err = PartitionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let points = s
            .split(',')
            .map(|p| rat::parse_rat(p.trim()).ok_or_else(|| PartitionError::Parse(p.trim().into())))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(points)
    }
}

/// Right-endpoint sum `Σ_{i≥2} f(x_i)(x_i − x_{i−1})`.
pub fn riemann_sum(f: &Expr, p: &Partition, prec: u32) -> Result<RatInterval, EvalError> {
    let mut acc = RatInterval::point(Rat::zero());
    for w in p.points.windows(2) {
        let v = eval_rat(f, &w[1], prec)?;
        acc = &acc + &v.scale(&(&w[1] - &w[0]));
    }
    Ok(acc)
}

/// Certified range of `f` over a cell.
pub fn cell_range(f: &Expr, cell: &RatInterval, prec: u32) -> Result<RatInterval, EvalError> {
    let naive = eval_interval(f, cell, prec)?;
    if cell.is_point() || naive.is_point() {
        return Ok(naive);
    }
    // mean-value form around the midpoint
    let m = cell.mid();
    let r = cell.radius();
    let mv = match (jet_eval(f, cell, 2, prec), eval_rat(f, &m, prec)) {
        (Ok(j), Ok(fm)) => Some(fm + &j.coeffs[1] * &RatInterval::new(-r.clone(), r)),
        _ => None,
    };
    Ok(match mv.and_then(|mv| naive.intersect(&mv)) {
        Some(t) => t,
        None => naive,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Darboux {
    pub lower: Rat,
    pub upper: Rat,
    /// Range enclosure per cell.
    pub ranges: Vec<RatInterval>,
}

/// Lower and upper sums from certified per-cell ranges.
pub fn darboux_bounds(f: &Expr, p: &Partition, prec: u32) -> Result<Darboux, EvalError> {
    let mut lower = Rat::zero();
    let mut upper = Rat::zero();
    let mut ranges = Vec::with_capacity(p.points.len() - 1);
    for cell in p.cells() {
        let r = cell_range(f, &cell, prec)?;
        let w = cell.width();
        lower += r.lo() * &w;
        upper += r.hi() * &w;
        ranges.push(r);
    }
    Ok(Darboux { lower, upper, ranges })
}

/// Direction of monotonicity of `f` on a cell, from the structure of `f` or
/// the sign of its derivative: `Some(1)` increasing, `Some(-1)` decreasing,
/// `Some(0)` constant.
pub fn monotone_on(f: &Expr, cell: &RatInterval, prec: u32) -> Option<i8> {
    fn both(a: Option<i8>, b: Option<i8>) -> Option<i8> {
        match (a?, b?) {
            (0, s) | (s, 0) => Some(s),
            (s, t) if s == t => Some(s),
            _ => None,
        }
    }
    let structural = match f {
        Expr::Const(_) => Some(0),
        Expr::Var => Some(1),
        Expr::Neg(a) => monotone_on(a, cell, prec).map(|s| -s),
        Expr::Add(a, b) => both(monotone_on(a, cell, prec), monotone_on(b, cell, prec)),
        Expr::Sub(a, b) => both(monotone_on(a, cell, prec), monotone_on(b, cell, prec).map(|s| -s)),
        Expr::Unary(Func::Sqrt | Func::Exp | Func::Ln, a) => monotone_on(a, cell, prec),
        Expr::Unary(Func::Abs, a) => {
            let r = eval_interval(a, cell, prec).ok()?;
            let s = monotone_on(a, cell, prec)?;
            if !r.lo().is_negative() {
                Some(s)
            } else if !r.hi().is_positive() {
                Some(-s)
            } else {
                None
            }
        }
        Expr::Mul(c, a) | Expr::Mul(a, c) if !c.has_var() => {
            let k = eval_interval(c, cell, prec).ok()?;
            let s = monotone_on(a, cell, prec)?;
            if k.lo().is_positive() {
                Some(s)
            } else if k.hi().is_negative() {
                Some(-s)
            } else {
                None
            }
        }
        _ => None,
    };
    if structural.is_some() {
        return structural;
    }
    let d = jet_eval(f, cell, 2, prec).ok()?;
    let s = &d.coeffs[1];
    if !s.lo().is_negative() {
        Some(1)
    } else if !s.hi().is_positive() {
        Some(-1)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusKind {
    Constant,
    Lipschitz,
    Monotone,
    Piecewise,
}

impl ModulusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModulusKind::Constant => "constant",
            ModulusKind::Lipschitz => "lipschitz",
            ModulusKind::Monotone => "monotone",
            ModulusKind::Piecewise => "piecewise",
        }
    }
}

/// `U(Q) − L(Q) ≤ slope·‖Q‖ + offset` for every partition `Q` with
/// `‖Q‖ < max_mesh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    pub kind: ModulusKind,
    pub slope: Rat,
    pub offset: Rat,
    pub max_mesh: Option<Rat>,
    /// Lipschitz constant when `kind` is `Lipschitz`.
    pub lipschitz: Option<Rat>,
}

impl Modulus {
    /// Largest power-of-two mesh for which the oscillation bound is below `eps`.
    pub fn delta_for(&self, eps: &Rat) -> Option<Rat> {
        if &self.offset >= eps {
            return None;
        }
        let cap = self.max_mesh.clone();
        if self.slope.is_zero() {
            return Some(cap.unwrap_or_else(Rat::one));
        }
        let bound = (eps - &self.offset) / &self.slope;
        let bound = match cap {
            Some(c) => rat::min(&bound, &c),
            None => bound,
        };
        // strictly below the bound
        let k = rat::ilog2(&bound);
        let mut d = rat::pow2(k);
        if d >= bound {
            d /= rat::int(2);
        }
        Some(d)
    }
}

const GLOBAL_CELLS: usize = 32;

fn lipschitz_const(f: &Expr, a: &Rat, b: &Rat, prec: u32) -> Option<Rat> {
    let span = RatInterval::new(a.clone(), b.clone());
    let mut c = Rat::zero();
    for cell in span.split(GLOBAL_CELLS) {
        let j = jet_eval(f, &cell, 2, prec).ok()?;
        c = rat::max(&c, &j.coeffs[1].mag());
    }
    Some(c)
}

fn monotone_global(f: &Expr, a: &Rat, b: &Rat, prec: u32) -> Option<i8> {
    let span = RatInterval::new(a.clone(), b.clone());
    if let Some(s) = monotone_on(f, &span, prec) {
        return Some(s);
    }
    let mut dir = 0i8;
    for cell in span.split(GLOBAL_CELLS) {
        match (dir, monotone_on(f, &cell, prec)?) {
            (_, 0) => {}
            (0, s) => dir = s,
            (d, s) if d == s => {}
            _ => return None,
        }
    }
    Some(dir)
}

/// Oscillation bound for `f` on `[a, b]`; `partition` is used by the
/// piecewise fallback.
pub fn modulus(f: &Expr, a: &Rat, b: &Rat, partition: &Partition, prec: u32) -> Result<Modulus, EvalError> {
    let len = b - a;
    if !f.has_var() {
        return Ok(Modulus {
            kind: ModulusKind::Constant,
            slope: Rat::zero(),
            offset: Rat::zero(),
            max_mesh: None,
            lipschitz: Some(Rat::zero()),
        });
    }
    if let Some(c) = lipschitz_const(f, a, b, prec) {
        // Σ osc_I·|I| ≤ Σ C·|I|² ≤ C·‖Q‖·(b − a)
        return Ok(Modulus {
            kind: ModulusKind::Lipschitz,
            slope: &c * &len,
            offset: Rat::zero(),
            max_mesh: None,
            lipschitz: Some(c),
        });
    }
    if monotone_global(f, a, b, prec).is_some() {
        // Σ osc_I·|I| ≤ ‖Q‖·Σ osc_I ≤ ‖Q‖·|f(b) − f(a)|
        let fb = eval_rat(f, b, prec)?;
        let fa = eval_rat(f, a, prec)?;
        return Ok(Modulus {
            kind: ModulusKind::Monotone,
            slope: (&fb - &fa).mag(),
            offset: Rat::zero(),
            max_mesh: None,
            lipschitz: None,
        });
    }
    // Per cell of the partition: total variation when monotone or Lipschitz,
    // otherwise the plain oscillation times the cell width. Cells of Q that
    // straddle a boundary of the partition see two neighbouring ranges.
    let cells: Vec<RatInterval> = partition.cells().collect();
    let mut ranges = Vec::with_capacity(cells.len());
    let mut slope = Rat::zero();
    let mut offset = Rat::zero();
    for cell in &cells {
        let r = cell_range(f, cell, prec)?;
        if monotone_on(f, cell, prec).is_some() {
            let hi = eval_rat(f, cell.hi(), prec)?;
            let lo = eval_rat(f, cell.lo(), prec)?;
            slope += (&hi - &lo).mag();
        } else if let Ok(j) = jet_eval(f, cell, 2, prec) {
            slope += j.coeffs[1].mag() * cell.width();
        } else {
            offset += r.width() * cell.width();
        }
        ranges.push(r);
    }
    for w in ranges.windows(2) {
        slope += w[0].hull(&w[1]).width();
    }
    let min_cell = cells.iter().map(|c| c.width()).min().expect("nonempty partition");
    Ok(Modulus {
        kind: ModulusKind::Piecewise,
        slope,
        offset,
        max_mesh: Some(min_cell),
        lipschitz: None,
    })
}

/// Taylor-model order for cell integrals.
const TM_ORDER: usize = 7;

/// Enclosure of `∫ f` over one cell.
fn cell_integral(f: &Expr, cell: &RatInterval, prec: u32) -> Result<RatInterval, EvalError> {
    let w = cell.width();
    let m = cell.mid();
    let rho = cell.radius();
    let at_mid = jet_eval(f, &RatInterval::point(m), TM_ORDER, prec);
    let over = jet_eval(f, cell, TM_ORDER + 1, prec);
    if let (Ok(c), Ok(x)) = (at_mid, over) {
        // ∫_{−ρ}^{ρ} t^k dt vanishes for odd k
        let mut acc = RatInterval::point(Rat::zero());
        for k in (0..TM_ORDER).step_by(2) {
            let mom = rat::powi(&rho, k as i64 + 1) * rat::int(2) / rat::int(k as i64 + 1);
            acc = &acc + &c.coeffs[k].scale(&mom);
        }
        let rem = x.coeffs[TM_ORDER].mag() * rat::powi(&rho, TM_ORDER as i64 + 1) * rat::int(2) / rat::int(TM_ORDER as i64 + 1);
        return Ok(&acc + &RatInterval::new(-rem.clone(), rem));
    }
    Ok(cell_range(f, cell, prec)?.scale(&w))
}

struct Pending {
    err: Rat,
    cell: RatInterval,
    value: RatInterval,
}

impl PartialEq for Pending {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Pending {
    fn cmp(&self, o: &Self) -> Ordering {
        // larger error first; ties broken by position for determinism
        rat::cmp(&self.err, &o.err).then_with(|| rat::cmp(o.cell.lo(), self.cell.lo()))
    }
}

/// Enclosure of `∫_a^b f` and the adaptive partition it was computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralEnclosure {
    pub value: RatInterval,
    pub partition: Partition,
}

pub const INITIAL_CELLS: usize = 16;
pub const MAX_CELLS: usize = 4096;

/// Bisects the worst cell until the total width is below `tol` or the cell
/// budget is spent.
pub fn integral_enclosure(f: &Expr, a: &Rat, b: &Rat, tol: &Rat, prec: u32) -> Result<IntegralEnclosure, EvalError> {
    let span = RatInterval::new(a.clone(), b.clone());
    let mut heap = BinaryHeap::new();
    let mut total = Rat::zero();
    for cell in span.split(INITIAL_CELLS) {
        let value = cell_integral(f, &cell, prec)?;
        total += value.width();
        heap.push(Pending {
            err: value.width(),
            cell,
            value,
        });
    }
    while &total >= tol && heap.len() < MAX_CELLS {
        let worst = heap.pop().expect("nonempty");
        if worst.err.is_zero() {
            heap.push(worst);
            break;
        }
        total -= &worst.err;
        for half in [worst.cell.bisect().0, worst.cell.bisect().1] {
            let value = cell_integral(f, &half, prec)?;
            total += value.width();
            heap.push(Pending {
                err: value.width(),
                cell: half,
                value,
            });
        }
    }
    let mut cells: Vec<Pending> = heap.into_vec();
    cells.sort_by(|p, q| rat::cmp(p.cell.lo(), q.cell.lo()));
    let mut value = RatInterval::point(Rat::zero());
    let mut points = Vec::with_capacity(cells.len() + 1);
    for p in &cells {
        value = &value + &p.value;
        points.push(p.cell.lo().clone());
    }
    points.push(b.clone());
    Ok(IntegralEnclosure {
        value,
        partition: Partition { points },
    })
}

fn domain_verdict(e: &EvalError) -> Verdict {
    Verdict::undecided(&format!("{}", e))
}

fn modulus_record(m: &Modulus) -> Record {
    let mut r = Record::new().with("modulus", m.kind.as_str()).with("slope", &m.slope);
    if let Some(c) = &m.lipschitz {
        r.push("C", c);
    }
    if !m.offset.is_zero() {
        r.push("offset", &m.offset);
    }
    r
}

/// ε-δ integrability: for each ε a mesh δ such that every tagged sum of every
/// partition finer than δ is within ε of the integral.
pub fn classical_integral(f: &Expr, a: &Rat, b: &Rat, sched: &EpsSchedule, prec: u32) -> Verdict {
    assert!(a < b, "need a < b");
    let tol = sched.last() / rat::int(4);
    let enc = match integral_enclosure(f, a, b, &tol, prec) {
        Ok(e) => e,
        Err(e) => return domain_verdict(&e),
    };
    let m = match modulus(f, a, b, &enc.partition, prec) {
        Ok(m) => m,
        Err(e) => return domain_verdict(&e),
    };
    let mut deltas = Vec::new();
    for eps in sched.values() {
        match m.delta_for(eps) {
            Some(d) => deltas.push(format!("{}:{}", eps, d)),
            None => return Verdict::undecided(&format!("oscillation bound not below eps = {}", eps)),
        }
    }
    let mut cert = modulus_record(&m);
    cert.push("deltas", deltas.join(","));
    cert.push("cells", enc.partition.points().len() - 1);
    finish(enc.value, sched, cert, "every partition finer than delta has all tagged sums within eps")
}

fn finish(value: RatInterval, sched: &EpsSchedule, cert: Record, note: &str) -> Verdict {
    if &value.width() >= sched.last() {
        return Verdict::undecided("integral enclosure wider than the last eps").with_enclosure(value);
    }
    let v = Verdict::proved(note).with_certificate(cert);
    if value.is_point() {
        v.with_value(value.lo().clone())
    } else {
        v.with_enclosure(value)
    }
}

/// Infinitesimal-mesh integrability: the oscillation bound has no constant
/// part, so at every infinitesimal mesh it is infinitesimal.
pub fn nsa_integral(f: &Expr, a: &Rat, b: &Rat, mesh_probes: &[LcNumber], sched: &EpsSchedule, prec: u32) -> Verdict {
    assert!(a < b, "need a < b");
    for h in mesh_probes {
        assert!(h.signum() > 0 && h.is_infinitesimal(), "mesh probes must be positive infinitesimals");
    }
    let tol = sched.last() / rat::int(4);
    let enc = match integral_enclosure(f, a, b, &tol, prec) {
        Ok(e) => e,
        Err(e) => return domain_verdict(&e),
    };
    let m = match modulus(f, a, b, &enc.partition, prec) {
        Ok(m) => m,
        Err(e) => return domain_verdict(&e),
    };
    if !m.offset.is_zero() {
        return Verdict::undecided("no modulus certificate: oscillation bound has a standard part");
    }
    for h in mesh_probes {
        let osc = h.scale(&m.slope);
        if !osc.is_infinitesimal() {
            let w = Record::new().with("mesh", h).with("oscillation_bound", &osc);
            return Verdict::undecided("oscillation bound not infinitesimal").with_witness(w);
        }
    }
    let cert = modulus_record(&m).with("probes", mesh_probes.len());
    finish(enc.value, sched, cert, "oscillation is infinitesimal at infinitesimal mesh")
}

/// Default mesh probes: `ε`, `ε²`, `ε/2`.
pub fn default_mesh_probes(trunc: &Rat) -> Vec<LcNumber> {
    let e = LcNumber::eps_with(trunc.clone());
    alloc::vec![
        e.clone(),
        LcNumber::monomial(Rat::one(), rat::int(2), trunc.clone()),
        e.scale(&rat::ratio(1, 2)),
    ]
}

/// `∫_a^b F' = F(b) − F(a)` through the classical integral of `F'`.
pub fn ftc_check(big_f: &Expr, a: &Rat, b: &Rat, sched: &EpsSchedule, prec: u32) -> Verdict {
    let f = match symbolic_diff(big_f) {
        Ok(d) => d,
        Err(e) => return Verdict::undecided(&format!("{}", e)),
    };
    let fb_fa = match (eval_rat(big_f, b, prec + 16), eval_rat(big_f, a, prec + 16)) {
        (Ok(x), Ok(y)) => &x - &y,
        (Err(e), _) | (_, Err(e)) => return domain_verdict(&e),
    };
    let v = classical_integral(&f, a, b, sched, prec);
    let enc = match (&v.value, &v.enclosure) {
        (Some(x), _) => RatInterval::point(x.clone()),
        (None, Some(e)) => e.clone(),
        _ => return v.with_note("integral of F' not enclosed"),
    };
    let cert = Record::new().with("integral", &enc).with("F(b) - F(a)", &fb_fa);
    if !enc.intersects(&fb_fa) {
        return Verdict::refuted(cert, "integral of F' differs from F(b) - F(a)");
    }
    if !v.is_proved() {
        return Verdict::undecided(&v.note).with_enclosure(enc);
    }
    if fb_fa.is_point() && !enc.contains(fb_fa.lo()) {
        return Verdict::refuted(cert, "integral of F' differs from F(b) - F(a)");
    }
    let out = Verdict::proved("integral of F' encloses F(b) - F(a)").with_certificate(cert);
    if enc.is_point() {
        out.with_value(enc.lo().clone())
    } else {
        out.with_enclosure(enc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rat::{int, ratio};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn riemann_sum_examples() {
        let part = Partition::uniform(&int(2), &int(7), 9);
        assert_eq!(riemann_sum(&p("3/4"), &part, 32).unwrap(), RatInterval::point(ratio(15, 4)));
        let part = Partition::uniform(&int(0), &int(1), 8);
        assert_eq!(riemann_sum(&p("x"), &part, 32).unwrap(), RatInterval::point(ratio(9, 16)));
        let part = Partition::uniform(&int(0), &int(1), 100);
        let expect = ratio(2 * 100 * 100 + 3 * 100 + 1, 6 * 100 * 100);
        assert_eq!(riemann_sum(&p("x^2"), &part, 32).unwrap(), RatInterval::point(expect));
    }

    #[test]
    fn darboux_examples() {
        let d = darboux_bounds(&p("x"), &Partition::uniform(&int(0), &int(1), 10), 32).unwrap();
        assert!(d.lower <= ratio(1, 2) && ratio(1, 2) <= d.upper);
        assert_eq!(&d.upper - &d.lower, ratio(1, 10));
        let d = darboux_bounds(&p("5"), &Partition::uniform(&int(2), &int(7), 3), 32).unwrap();
        assert_eq!((d.lower.clone(), d.upper.clone()), (int(25), int(25)));
        let d = darboux_bounds(&p("x^2"), &Partition::uniform(&int(0), &int(1), 100), 32).unwrap();
        assert_eq!(&d.upper - &d.lower, ratio(1, 100));
    }

    #[test]
    fn partition_parsing() {
        let part: Partition = "0, 1/2, 1".parse().unwrap();
        assert_eq!(part.mesh(), ratio(1, 2));
        assert!("0, 1, 1".parse::<Partition>().is_err());
        assert_eq!(part.refine().points().len(), 5);
    }

    #[test]
    fn classical_examples() {
        let s = EpsSchedule::default();
        let v = classical_integral(&p("x^2"), &int(0), &int(1), &s, 64);
        assert!(v.is_proved());
        assert_eq!(v.value, Some(ratio(1, 3)));
        let v = classical_integral(&p("5"), &int(2), &int(7), &s, 64);
        assert_eq!(v.value, Some(int(25)));
        let v = nsa_integral(&p("abs(x)"), &int(-1), &int(1), &default_mesh_probes(&int(12)), &s, 64);
        assert_eq!(v.value, Some(int(1)), "{:?}", v);
        let v = classical_integral(&p("1/x"), &int(-1), &int(1), &s, 64);
        assert!(v.is_undecided() && v.note.contains("domain"));
    }

    #[test]
    fn nsa_examples() {
        let s = EpsSchedule::default();
        let probes = default_mesh_probes(&rat::int(12));
        let v = nsa_integral(&p("x^2"), &int(0), &int(1), &probes, &s, 64);
        assert!(v.is_proved());
        assert_eq!(v.certificate.as_ref().unwrap().get("C"), Some("2"));
        let v = nsa_integral(&p("7/2"), &int(0), &int(1), &probes, &s, 64);
        assert_eq!(v.certificate.as_ref().unwrap().get("modulus"), Some("constant"));
        let v = nsa_integral(&p("sqrt(x)"), &int(0), &int(1), &probes, &s, 64);
        assert!(v.is_proved(), "{:?}", v);
        assert_eq!(v.certificate.as_ref().unwrap().get("modulus"), Some("monotone"));
        assert!(v.enclosure.unwrap().contains(&ratio(2, 3)));
    }

    #[test]
    fn ftc_examples() {
        let s = EpsSchedule::default();
        let v = ftc_check(&p("x^3"), &int(0), &int(2), &s, 64);
        assert_eq!((v.is_proved(), v.value), (true, Some(int(8))));
        assert!(ftc_check(&p("4"), &int(0), &int(2), &s, 64).is_proved());
        let v = ftc_check(&p("x^2"), &int(-1), &int(1), &s, 64);
        assert_eq!(v.value, Some(int(0)));
        let v = ftc_check(&p("sin(x)"), &int(0), &int(1), &s, 64);
        assert!(v.is_proved());
    }

    #[test]
    fn sin_integral_encloses_closed_form() {
        let s = EpsSchedule::default();
        let v = classical_integral(&p("sin(x)"), &int(0), &int(3), &s, 64);
        let e = v.enclosure.unwrap();
        // 1 - cos 3 = 1.98999249660044545727...
        assert!(e.lo() < &ratio(198999249660045, 100000000000000));
        assert!(e.hi() > &ratio(198999249660044, 100000000000000));
        assert!(e.width() < ratio(1, 1_000_000));
    }
}
