//! Symbolic differentiation with light constant folding.

use alloc::boxed::Box;
use core::fmt;

use num_traits::{One, Zero};

use super::{is_one_const, is_zero_const, Expr, Func};
use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffError {
    NotDifferentiable(&'static str),
}

impl fmt::Display for DiffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffError::NotDifferentiable(what) => write!(f, "{} is not differentiable everywhere", what),
        }
    }
}

impl core::error::Error for DiffError {}

fn konst(e: &Expr) -> Option<&Rat> {
    match e {
        Expr::Const(c) => Some(c),
        _ => None,
    }
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    if is_zero_const(&a) {
        return b;
    }
    if is_zero_const(&b) {
        return a;
    }
    match (konst(&a), konst(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        _ => a.add(b),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero_const(&b) {
        return a;
    }
    if is_zero_const(&a) {
        return neg(b);
    }
    match (konst(&a), konst(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        _ => a.sub(b),
    }
}

pub(crate) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero_const(&a) || is_zero_const(&b) {
        return Expr::Const(Rat::zero());
    }
    if is_one_const(&a) {
        return b;
    }
    if is_one_const(&b) {
        return a;
    }
    match (konst(&a), konst(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), _) if *x == -Rat::one() => neg(b),
        (_, Some(y)) if *y == -Rat::one() => neg(a),
        _ => a.mul(b),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    if is_zero_const(&a) && !is_zero_const(&b) {
        return Expr::Const(Rat::zero());
    }
    if is_one_const(&b) {
        return a;
    }
    match (konst(&a), konst(&b)) {
        (Some(x), Some(y)) if !y.is_zero() => Expr::Const(x / y),
        _ => a.div(b),
    }
}

pub(crate) fn powi(a: Expr, n: i64) -> Expr {
    if n == 0 {
        return Expr::Const(Rat::one());
    }
    if n == 1 {
        return a;
    }
    match konst(&a) {
        Some(c) if !c.is_zero() || n > 0 => Expr::Const(rat::powi(c, n)),
        _ => a.powi(n),
    }
}

/// Derivative with respect to `x`.
pub fn symbolic_diff(f: &Expr) -> Result<Expr, DiffError> {
    Ok(match f {
        Expr::Const(_) => Expr::Const(Rat::zero()),
        Expr::Var => Expr::Const(Rat::one()),
        Expr::PowVar(_) => return Err(DiffError::NotDifferentiable("power with variable exponent")),
        Expr::Neg(a) => neg(symbolic_diff(a)?),
        Expr::Add(a, b) => add(symbolic_diff(a)?, symbolic_diff(b)?),
        Expr::Sub(a, b) => sub(symbolic_diff(a)?, symbolic_diff(b)?),
        Expr::Mul(a, b) => {
            let da = symbolic_diff(a)?;
            let db = symbolic_diff(b)?;
            add(mul(da, (**b).clone()), mul((**a).clone(), db))
        }
        Expr::Div(a, b) => {
            let da = symbolic_diff(a)?;
            let db = symbolic_diff(b)?;
            if is_zero_const(&db) {
                div(da, (**b).clone())
            } else {
                let num = sub(mul(da, (**b).clone()), mul((**a).clone(), db));
                div(num, powi((**b).clone(), 2))
            }
        }
        Expr::PowInt(a, n) => {
            let da = symbolic_diff(a)?;
            let outer = mul(Expr::Const(rat::int(*n)), powi((**a).clone(), n - 1));
            mul(outer, da)
        }
        Expr::Unary(func, a) => {
            let da = symbolic_diff(a)?;
            let a = (**a).clone();
            let outer = match func {
                Func::Sin => a.cos(),
                Func::Cos => neg(a.sin()),
                Func::Exp => a.exp(),
                Func::Ln => return Ok(div(da, a)),
                Func::Sqrt => {
                    return Ok(div(da, mul(Expr::int(2), a.sqrt())));
                }
                Func::Abs => return Err(DiffError::NotDifferentiable("abs")),
            };
            mul(outer, da)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval_exact, parse};
    use crate::rat::{int, ratio};
    use alloc::string::ToString;

    fn d(s: &str) -> Expr {
        symbolic_diff(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn power_rule() {
        let e = d("x^3");
        assert_eq!(e.to_string(), "3 * x^2");
        assert_eq!(eval_exact(&e, &int(2)).unwrap(), int(12));
    }

    #[test]
    fn product_and_chain() {
        let e = d("x^2 * sin(1/x)");
        let expected = parse("2*x*sin(1/x) + x^2*cos(1/x)*(-1/x^2)").unwrap();
        let pt = crate::interval::RatInterval::point(ratio(3, 7));
        let got = crate::expr::eval_interval(&e, &pt, 80).unwrap();
        let want = crate::expr::eval_interval(&expected, &pt, 80).unwrap();
        assert!(got.intersects(&want));
        assert!(got.width() < crate::rat::pow2(-60));
    }

    #[test]
    fn abs_rejected() {
        assert_eq!(
            symbolic_diff(&parse("abs(x)").unwrap()),
            Err(DiffError::NotDifferentiable("abs"))
        );
        assert!(symbolic_diff(&parse("x * abs(x)").unwrap()).is_err());
    }

    #[test]
    fn quotient_rule_and_constants() {
        assert_eq!(d("5"), Expr::int(0));
        assert_eq!(d("x"), Expr::int(1));
        let q = d("(x^2 - 1)/(x - 1)");
        assert_eq!(eval_exact(&q, &int(3)).unwrap(), int(1));
        let r = d("1/x");
        assert_eq!(eval_exact(&r, &int(2)).unwrap(), ratio(-1, 4));
    }
}
