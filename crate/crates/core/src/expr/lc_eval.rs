//! Evaluation at Levi-Civita points.
//!
//! Field operations go through [`LcInterval`] arithmetic. A transcendental
//! node at a limited argument `u = s + h` (`s` standard, `h` infinitesimal)
//! is expanded as a Taylor polynomial in `h` with enclosed coefficients and
//! a Lagrange remainder; the uncertainty already carried by `u` is
//! propagated through a derivative bound.

use alloc::string::{String, ToString};
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::eval::{domain, DomainError, EvalError};
use super::jet::jet_eval;
use super::{Expr, Func};
use crate::interval::RatInterval;
use crate::lc::{LcError, LcNumber, DEFAULT_MAX_EXP_DENOM, DEFAULT_TRUNC_ORDER};
use crate::lc_interval::{IntervalError, LcInterval};
use crate::rat::{self, Rat};
use crate::transcendental as tr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub trunc_order: Rat,
    /// Bits of precision for standard coefficient enclosures.
    pub prec: u32,
    pub max_exp_denom: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            trunc_order: rat::int(DEFAULT_TRUNC_ORDER),
            prec: 64,
            max_exp_denom: DEFAULT_MAX_EXP_DENOM,
        }
    }
}

impl EvalConfig {
    pub fn with_trunc(mut self, t: Rat) -> Self {
        self.trunc_order = t;
        self
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LcEvalError {
    Domain(DomainError),
    UnlimitedTranscendental(String),
    Lc(LcError),
    Precision,
}

impl fmt::Display for LcEvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcEvalError::Domain(d) => write!(f, "domain error in {}: {}", d.node, d.reason),
            LcEvalError::UnlimitedTranscendental(n) => {
                write!(f, "transcendental function at an unlimited or singular argument in {}", n)
            }
            LcEvalError::Lc(e) => write!(f, "{}", e),
            LcEvalError::Precision => write!(f, "requested precision not reached"),
        }
    }
}

impl core::error::Error for LcEvalError {}

impl From<EvalError> for LcEvalError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Domain(d) => LcEvalError::Domain(d),
            _ => LcEvalError::Precision,
        }
    }
}

impl From<LcError> for LcEvalError {
    fn from(e: LcError) -> Self {
        LcEvalError::Lc(e)
    }
}

/// Value together with a smoothness flag: `smooth` is set when every node
/// was evaluated at a standard point where it is analytic, so the result is
/// a convergent power series in the infinitesimal offset of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcEval {
    pub value: LcInterval,
    pub smooth: bool,
}

fn away_from_zero(v: &LcInterval) -> bool {
    match v.standard_enclosure() {
        Some(e) => !e.contains_zero(),
        None => false,
    }
}

fn div_error(node: &Expr, e: IntervalError) -> LcEvalError {
    match e {
        IntervalError::DivisorStraddlesZero => LcEvalError::Domain(match domain(node, "division by zero", true) {
            EvalError::Domain(d) => d,
            _ => unreachable!(),
        }),
        IntervalError::Lc(l) => LcEvalError::Lc(l),
    }
}

fn dom(node: &Expr, reason: &'static str, partial: bool) -> LcEvalError {
    match domain(node, reason, partial) {
        EvalError::Domain(d) => LcEvalError::Domain(d),
        _ => unreachable!(),
    }
}

fn lc_from_interval(iv: &RatInterval, trunc: &Rat) -> LcInterval {
    LcInterval::from_rat_interval(iv, trunc.clone())
}

/// `c * (mid ± rad)` with a standard interval factor.
fn scale_by_interval(x: &LcNumber, iv: &RatInterval) -> LcInterval {
    let center = x.scale(&iv.mid());
    let radius = x.abs().scale(&iv.radius());
    LcInterval::new(center, radius)
}

fn eval_node(f: &Expr, x: &LcNumber, cfg: &EvalConfig) -> Result<LcEval, LcEvalError> {
    let t = &cfg.trunc_order;
    Ok(match f {
        Expr::Const(c) => LcEval {
            value: LcInterval::point(LcNumber::from_rat_with(c.clone(), t.clone())),
            smooth: true,
        },
        Expr::Var => LcEval {
            value: LcInterval::point(x.clone()),
            smooth: true,
        },
        Expr::PowVar(b) => {
            let n = match (x.standard_part(), x.infinitesimal_part().is_zero()) {
                (Ok(s), true) if rat::is_integer(&s) => rat::to_i64(&s),
                _ => None,
            };
            let n = n.ok_or_else(|| dom(f, "power index must be an integer", false))?;
            if b.is_zero() && n < 0 {
                return Err(dom(f, "division by zero", false));
            }
            LcEval {
                value: LcInterval::point(LcNumber::from_rat_with(rat::powi(b, n), t.clone())),
                smooth: true,
            }
        }
        Expr::Neg(a) => {
            let v = eval_node(a, x, cfg)?;
            LcEval {
                value: -v.value,
                smooth: v.smooth,
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            let va = eval_node(a, x, cfg)?;
            let vb = eval_node(b, x, cfg)?;
            let value = match f {
                Expr::Add(..) => &va.value + &vb.value,
                Expr::Sub(..) => &va.value - &vb.value,
                _ => &va.value * &vb.value,
            };
            LcEval {
                value,
                smooth: va.smooth && vb.smooth,
            }
        }
        Expr::Div(a, b) => {
            let va = eval_node(a, x, cfg)?;
            let vb = eval_node(b, x, cfg)?;
            let value = va.value.div(&vb.value).map_err(|e| div_error(f, e))?;
            LcEval {
                value,
                smooth: va.smooth && vb.smooth && away_from_zero(&vb.value),
            }
        }
        Expr::PowInt(a, n) => {
            let va = eval_node(a, x, cfg)?;
            let value = va.value.powi(*n).map_err(|e| div_error(f, e))?;
            let smooth = va.smooth && (*n >= 0 || away_from_zero(&va.value));
            LcEval { value, smooth }
        }
        Expr::Unary(Func::Abs, a) => {
            let va = eval_node(a, x, cfg)?;
            LcEval {
                smooth: va.smooth && away_from_zero(&va.value),
                value: va.value.abs(),
            }
        }
        Expr::Unary(func, a) => {
            let va = eval_node(a, x, cfg)?;
            let (value, smooth) = transcendental(f, *func, &va.value, cfg)?;
            LcEval {
                value,
                smooth: smooth && va.smooth,
            }
        }
    })
}

/// Upper bound for `|g'|` over a standard neighbourhood.
fn derivative_bound(node: &Expr, func: Func, nb: &RatInterval, prec: u32) -> Result<Rat, LcEvalError> {
    let g = Expr::Var.apply(func);
    let j = jet_eval(&g, nb, 2, prec).map_err(|e| match e {
        EvalError::Domain(_) => dom(node, "argument leaves the domain", true),
        other => other.into(),
    })?;
    Ok(j.coeffs[1].mag())
}

fn transcendental(node: &Expr, func: Func, u: &LcInterval, cfg: &EvalConfig) -> Result<(LcInterval, bool), LcEvalError> {
    let t = &cfg.trunc_order;
    let c = u.center();
    let r = u.radius();
    if !c.is_limited() || !r.is_limited() {
        return match func {
            Func::Sin | Func::Cos => Ok((LcInterval::unit(t.clone()), false)),
            _ => Err(LcEvalError::UnlimitedTranscendental(node.to_string())),
        };
    }
    let s = c.standard_part()?;
    let r_std = r.standard_part()?;
    let h = c - &LcNumber::from_rat_with(s.clone(), c.trunc().clone());

    match func {
        Func::Ln | Func::Sqrt => {
            let margin = &s - &r_std;
            if !margin.is_positive() {
                if s.is_negative() && (&s + &r_std).is_negative() {
                    return Err(dom(node, "argument is negative", false));
                }
                if func == Func::Sqrt && s.is_zero() && r_std.is_zero() {
                    return sqrt_near_zero(node, u, cfg).map(|v| (v, false));
                }
                if func == Func::Ln && s.is_zero() && r_std.is_zero() && c.signum() >= 0 {
                    return Err(LcEvalError::UnlimitedTranscendental(node.to_string()));
                }
                return Err(dom(node, "argument may leave the domain", true));
            }
        }
        _ => {}
    }

    // standard neighbourhood containing every argument value
    let mut eta = rat::ratio(1, 256);
    if matches!(func, Func::Ln | Func::Sqrt) {
        let half_margin = (&s - &r_std) / rat::int(2);
        eta = rat::min(&eta, &half_margin);
    }
    let spread = &r_std + &eta;
    let nb = RatInterval::new(&s - &spread, &s + &spread);

    let prec = cfg.prec;
    let g = Expr::Var.apply(func);
    let mut center = LcNumber::zero_with(t.clone());
    let mut radius = LcNumber::zero_with(t.clone());

    if h.is_zero() {
        let v = jet_eval(&g, &RatInterval::point(s.clone()), 1, prec)?;
        let iv = lc_from_interval(&v.coeffs[0], t);
        center = iv.center().clone();
        radius = iv.radius().clone();
    } else {
        let lead = h.lead_exp().cloned().unwrap_or_else(Rat::one);
        let order = (t / &lead).ceil().to_integer();
        let k_max = rat::to_i64(&Rat::from_integer(order)).unwrap_or(64).clamp(1, 64) as usize;
        let at_s = jet_eval(&g, &RatInterval::point(s.clone()), k_max, prec)?;
        let around = jet_eval(&g, &nb, k_max + 1, prec).map_err(|e| match e {
            EvalError::Domain(_) => dom(node, "argument leaves the domain", true),
            other => other.into(),
        })?;
        let h_abs = h.abs();
        let mut hk = LcNumber::from_rat_with(Rat::one(), t.clone());
        let mut hk_abs = hk.clone();
        for k in 0..k_max {
            let term = scale_by_interval(&hk, &at_s.coeffs[k]);
            center = &center + term.center();
            radius = &radius + &hk_abs.scale(&at_s.coeffs[k].radius());
            hk = &hk * &h;
            hk_abs = &hk_abs * &h_abs;
        }
        radius = &radius + &hk_abs.scale(&around.coeffs[k_max].mag());
    }

    if !r.is_zero() {
        let lip = derivative_bound(node, func, &nb, prec)?;
        radius = &radius + &r.scale(&lip);
    }
    Ok((LcInterval::new(center, radius), true))
}

/// Square root of a value whose standard part is zero.
fn sqrt_near_zero(node: &Expr, u: &LcInterval, cfg: &EvalConfig) -> Result<LcInterval, LcEvalError> {
    let c = u.center();
    let r = u.radius();
    let t = &cfg.trunc_order;
    if c.signum() < 0 {
        if lc_lt(&(c + r), &LcNumber::zero_with(t.clone())) {
            return Err(dom(node, "argument is negative", false));
        }
        return Err(dom(node, "argument may be negative", true));
    }
    if c.is_zero() {
        if r.is_zero() {
            return Ok(LcInterval::point(LcNumber::zero_with(t.clone())));
        }
        // values lie in [0, r]
        let top = sqrt_positive(r, cfg)?.hi();
        let half = top.scale(&rat::ratio(1, 2));
        return Ok(LcInterval::new(half.clone(), half));
    }
    let root = sqrt_positive(c, cfg)?;
    if r.is_zero() {
        return Ok(root);
    }
    // |sqrt(v) - sqrt(c)| <= |v - c| / sqrt(c)
    let low = root.lo();
    if low.signum() <= 0 {
        return Err(LcEvalError::Precision);
    }
    let extra = r.div(&low)?;
    Ok(root.add_radius(&extra))
}

fn lc_lt(a: &LcNumber, b: &LcNumber) -> bool {
    crate::lc::lc_cmp(a, b) == crate::lc::LcOrdering::Lt
}

/// `sqrt(c)` for positive `c`, by factoring out the leading monomial and
/// summing the binomial series of `(1 + u)^(1/2)`.
pub(crate) fn sqrt_positive(c: &LcNumber, cfg: &EvalConfig) -> Result<LcInterval, LcEvalError> {
    let (q, c0) = match c.lead() {
        Some((q, c0)) => (q.clone(), c0.clone()),
        None => return Ok(LcInterval::point(c.clone())),
    };
    let half_q = &q / rat::int(2);
    if half_q.denom() > &num_bigint::BigInt::from(cfg.max_exp_denom) {
        return Err(LcEvalError::Lc(LcError::ExponentTooFine(half_q)));
    }
    let rel_trunc = c.trunc() - &q;
    let mut u = LcNumber::zero_with(rel_trunc.clone());
    for (e, coef) in c.terms().skip(1) {
        u = &u + &LcNumber::monomial(coef / &c0, e - &q, rel_trunc.clone());
    }
    let mut series = LcNumber::from_rat_with(Rat::one(), rel_trunc.clone());
    let mut rem = LcNumber::zero_with(rel_trunc.clone());
    if !u.is_zero() {
        let lead = u.lead_exp().cloned().unwrap_or_else(Rat::one);
        let k_max = rat::to_i64(&Rat::from_integer((&rel_trunc / &lead).ceil().to_integer()))
            .unwrap_or(64)
            .clamp(1, 64) as u64;
        let half = rat::ratio(1, 2);
        let mut uk = LcNumber::from_rat_with(Rat::one(), rel_trunc.clone());
        for k in 1..k_max {
            uk = &uk * &u;
            series = &series + &uk.scale(&rat::gen_binomial(&half, k));
        }
        uk = &uk * &u;
        let bound = rat::gen_binomial(&half, k_max).abs() * rat::pow2(k_max as i64);
        rem = uk.abs().scale(&bound);
    }
    let root_c0 = tr::sqrt_point(&c0, cfg.prec).ok_or(LcEvalError::Precision)?;
    let mono = LcNumber::monomial(Rat::one(), half_q, cfg.trunc_order.clone() + c.trunc().abs() + rat::int(1));
    let center = (&series * &mono).scale(&root_c0.mid());
    let radius = &(&series.abs() * &mono).scale(&root_c0.radius()) + &(&rem * &mono).scale(root_c0.hi());
    Ok(LcInterval::new(center, radius))
}

/// Evaluation with the smoothness flag.
pub fn eval_lc_traced(f: &Expr, x: &LcNumber, cfg: &EvalConfig) -> Result<LcEval, LcEvalError> {
    eval_node(f, x, cfg)
}

pub fn eval_lc(f: &Expr, x: &LcNumber, cfg: &EvalConfig) -> Result<LcInterval, LcEvalError> {
    eval_node(f, x, cfg).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::lc::{lc_cmp, LcOrdering};
    use crate::rat::{int, ratio};

    fn lc(s: &str) -> LcNumber {
        s.parse().unwrap()
    }

    fn ev(f: &str, x: &str) -> Result<LcEval, LcEvalError> {
        eval_lc_traced(&parse(f).unwrap(), &lc(x), &EvalConfig::default())
    }

    #[test]
    fn cube_at_two_plus_eps() {
        let v = ev("x^3", "2 + eps").unwrap();
        assert!(v.value.is_degenerate());
        assert_eq!(lc_cmp(v.value.center(), &lc("8 + 12*eps + 6*eps^2 + eps^3")), LcOrdering::EqWithinTrunc);
        assert!(v.smooth);
    }

    #[test]
    fn oscillating_factor_at_eps() {
        let v = ev("x^2 * sin(1/x)", "eps").unwrap();
        assert!(v.value.center().is_zero());
        assert_eq!(lc_cmp(v.value.radius(), &lc("eps^2")), LcOrdering::EqWithinTrunc);
        assert!(!v.smooth);
    }

    #[test]
    fn exp_of_unlimited_is_rejected() {
        assert!(matches!(ev("exp(x)", "eps^-1"), Err(LcEvalError::UnlimitedTranscendental(_))));
        assert!(matches!(ev("ln(x)", "eps"), Err(LcEvalError::UnlimitedTranscendental(_))));
        assert!(matches!(ev("ln(x)", "-1 + eps"), Err(LcEvalError::Domain(_))));
    }

    #[test]
    fn sin_near_zero_is_exact_series() {
        let v = ev("sin(x)", "eps").unwrap();
        let c = v.value.center();
        assert_eq!(c.coeff(&int(1)), int(1));
        assert_eq!(c.coeff(&int(3)), ratio(-1, 6));
        assert!(v.value.radius().is_infinitesimal());
        assert!(v.smooth);
    }

    #[test]
    fn sqrt_of_infinitesimal() {
        let v = ev("sqrt(x)", "eps").unwrap();
        assert_eq!(v.value.center(), &LcNumber::monomial(int(1), ratio(1, 2), v.value.center().trunc().clone()));
        assert!(v.value.radius().is_zero());
        let w = ev("sqrt(x)", "4*eps^2 + eps^3").unwrap();
        assert_eq!(w.value.center().coeff(&int(1)), int(2));
        assert_eq!(w.value.center().coeff(&int(2)), ratio(1, 4));
        assert!(ev("sqrt(x)", "-eps").is_err());
    }

    #[test]
    fn degenerate_input_matches_exact_value() {
        let v = ev("(x^2 - 1)/(x - 1)", "3").unwrap();
        assert!(v.value.is_degenerate());
        assert_eq!(v.value.center(), &LcNumber::from_rat(int(4)));
    }

    #[test]
    fn irrational_coefficients_have_standard_noise() {
        let v = ev("sin(x)", "1 + eps").unwrap();
        let enc = v.value.standard_enclosure().unwrap();
        assert!(enc.width() < rat::pow2(-50));
        assert!(v.smooth);
    }
}
