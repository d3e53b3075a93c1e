//! Exact and enclosure evaluation.

use alloc::string::{String, ToString};
use core::fmt;

use num_traits::{Signed, Zero};

use super::{Expr, Func};
use crate::interval::RatInterval;
use crate::rat::{self, Rat};
use crate::transcendental as tr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainError {
    /// Rendering of the offending subexpression.
    pub node: String,
    pub reason: &'static str,
    /// True when the function may be defined at some points of the input
    /// cell; false when it is certainly undefined on all of it.
    pub partial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    Domain(DomainError),
    /// Exact evaluation requested for a transcendental expression.
    NotExact,
    /// Requested width could not be reached.
    Precision,
    /// An intermediate value is too large to represent.
    Overflow,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain(d) => write!(f, "domain error in {}: {}", d.node, d.reason),
            EvalError::NotExact => write!(f, "expression has no exact rational value"),
            EvalError::Precision => write!(f, "requested precision not reached"),
            EvalError::Overflow => write!(f, "exponential overflow"),
        }
    }
}

impl core::error::Error for EvalError {}

pub(crate) fn domain(node: &Expr, reason: &'static str, partial: bool) -> EvalError {
    EvalError::Domain(DomainError {
        node: node.to_string(),
        reason,
        partial,
    })
}

fn powvar_exact(node: &Expr, b: &Rat, x: &Rat) -> Result<Rat, EvalError> {
    let n = match rat::to_i64(x) {
        Some(n) => n,
        None => return Err(domain(node, "power index must be an integer", false)),
    };
    if b.is_zero() && n < 0 {
        return Err(domain(node, "division by zero", false));
    }
    Ok(rat::powi(b, n))
}

/// Exact value for expressions without transcendental nodes.
pub fn eval_exact(f: &Expr, x: &Rat) -> Result<Rat, EvalError> {
    Ok(match f {
        Expr::Const(c) => c.clone(),
        Expr::Var => x.clone(),
        Expr::PowVar(b) => powvar_exact(f, b, x)?,
        Expr::Neg(a) => -eval_exact(a, x)?,
        Expr::Add(a, b) => eval_exact(a, x)? + eval_exact(b, x)?,
        Expr::Sub(a, b) => eval_exact(a, x)? - eval_exact(b, x)?,
        Expr::Mul(a, b) => eval_exact(a, x)? * eval_exact(b, x)?,
        Expr::Div(a, b) => {
            let d = eval_exact(b, x)?;
            if d.is_zero() {
                return Err(domain(f, "division by zero", false));
            }
            eval_exact(a, x)? / d
        }
        Expr::PowInt(a, n) => {
            let v = eval_exact(a, x)?;
            if v.is_zero() && *n < 0 {
                return Err(domain(f, "division by zero", false));
            }
            rat::powi(&v, *n)
        }
        Expr::Unary(Func::Abs, a) => eval_exact(a, x)?.abs(),
        Expr::Unary(..) => return Err(EvalError::NotExact),
    })
}

/// Enclosure of `f` over the cell `x`, valid at every point of `x` where `f`
/// is defined.
pub fn eval_interval(f: &Expr, x: &RatInterval, prec: u32) -> Result<RatInterval, EvalError> {
    Ok(match f {
        Expr::Const(c) => RatInterval::point(c.clone()),
        Expr::Var => x.clone(),
        Expr::PowVar(b) => {
            if !x.is_point() {
                return Err(domain(f, "power index must be an integer", true));
            }
            RatInterval::point(powvar_exact(f, b, x.lo())?)
        }
        Expr::Neg(a) => -eval_interval(a, x, prec)?,
        Expr::Add(a, b) => eval_interval(a, x, prec)? + eval_interval(b, x, prec)?,
        Expr::Sub(a, b) => eval_interval(a, x, prec)? - eval_interval(b, x, prec)?,
        Expr::Mul(a, b) => {
            if a == b {
                return eval_interval(a, x, prec)?.powi(2).ok_or(EvalError::Precision);
            }
            eval_interval(a, x, prec)? * eval_interval(b, x, prec)?
        }
        Expr::Div(a, b) => {
            let d = eval_interval(b, x, prec)?;
            if d.contains_zero() {
                return Err(domain(f, "division by zero", !(d.is_point())));
            }
            let n = eval_interval(a, x, prec)?;
            n.div(&d).ok_or(EvalError::Precision)?
        }
        Expr::PowInt(a, n) => {
            let v = eval_interval(a, x, prec)?;
            match v.powi(*n) {
                Some(r) => r,
                None => return Err(domain(f, "division by zero", !v.is_point())),
            }
        }
        Expr::Unary(func, a) => {
            let v = eval_interval(a, x, prec)?;
            unary_interval(f, *func, &v, prec)?
        }
    })
}

pub(crate) fn unary_interval(node: &Expr, func: Func, v: &RatInterval, prec: u32) -> Result<RatInterval, EvalError> {
    Ok(match func {
        Func::Sin => tr::sin_interval(v, prec),
        Func::Cos => tr::cos_interval(v, prec),
        Func::Exp => tr::exp_interval(v, prec).ok_or(EvalError::Overflow)?,
        Func::Abs => v.abs(),
        Func::Ln => match tr::ln_interval(v, prec) {
            Some(r) => r,
            None => {
                let partial = v.hi().is_positive();
                return Err(domain(node, "logarithm of a non-positive number", partial));
            }
        },
        Func::Sqrt => match tr::sqrt_interval(v, prec) {
            Some(r) => r,
            None => return Err(domain(node, "square root of a negative number", false)),
        },
    })
}

/// Enclosure of `f(x)` of width at most `2^-prec`; exact for expressions
/// without transcendental nodes.
pub fn eval_rat(f: &Expr, x: &Rat, prec: u32) -> Result<RatInterval, EvalError> {
    if f.is_rational_only() {
        return eval_exact(f, x).map(RatInterval::point);
    }
    let target = rat::pow2(-(prec as i64));
    let point = RatInterval::point(x.clone());
    let mut bits = prec + 16;
    for _ in 0..6 {
        let r = eval_interval(f, &point, bits)?;
        if r.width() <= target {
            let rounded = r.round_out(prec + 8);
            return Ok(if rounded.width() <= target { rounded } else { r });
        }
        bits = bits * 2 + 16;
    }
    Err(EvalError::Precision)
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
    fn exact_evaluation() {
        assert_eq!(eval_rat(&p("x^3 - x"), &int(2), 10).unwrap(), RatInterval::point(int(6)));
        assert!(matches!(eval_rat(&p("1/x"), &int(0), 10), Err(EvalError::Domain(_))));
        assert_eq!(eval_exact(&p("abs(x - 3)"), &int(1)).unwrap(), int(2));
    }

    #[test]
    fn sin_one_to_twenty_bits() {
        let r = eval_rat(&p("sin(x)"), &int(1), 20).unwrap();
        assert!(r.width() <= rat::pow2(-20));
        // sin(1) = 0.8414709848078965066525023216...
        let lo = Rat::new(8414709848078965i64.into(), 10_000_000_000_000_000i64.into());
        let hi = Rat::new(8414709848078966i64.into(), 10_000_000_000_000_000i64.into());
        assert!(r.lo() <= &hi && r.hi() >= &lo);
    }

    #[test]
    fn interval_examples() {
        let sq = eval_interval(&p("x^2"), &RatInterval::new(int(-1), int(2)), 10).unwrap();
        assert!(sq.encloses(&RatInterval::new(int(0), int(4))));
        assert!(sq.width() <= int(6));
        assert_eq!(eval_interval(&p("2*x"), &RatInterval::new(int(0), int(1)), 10).unwrap(), RatInterval::new(int(0), int(2)));
        let s = eval_interval(&p("sin(1/x)"), &RatInterval::new(ratio(1, 100), ratio(1, 99)), 30).unwrap();
        assert!(s.lo() >= &int(-1) && s.hi() <= &int(1));
    }

    #[test]
    fn domain_errors_distinguish_partial_cells() {
        let whole = eval_interval(&p("ln(x)"), &RatInterval::new(int(-2), int(-1)), 10);
        assert!(matches!(whole, Err(EvalError::Domain(DomainError { partial: false, .. }))));
        let part = eval_interval(&p("1/x"), &RatInterval::new(int(-1), int(1)), 10);
        assert!(matches!(part, Err(EvalError::Domain(DomainError { partial: true, .. }))));
        let clipped = eval_interval(&p("sqrt(x)"), &RatInterval::new(int(-1), int(4)), 10).unwrap();
        assert_eq!(clipped, RatInterval::new(int(0), int(2)));
    }
}
