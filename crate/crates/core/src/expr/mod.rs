//! One-variable expression language.

use alloc::boxed::Box;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::rat::{self, Rat};

mod diff;
mod eval;
mod jet;
mod lc_eval;
mod parse;

pub use diff::{symbolic_diff, DiffError};
pub use eval::{eval_exact, eval_interval, eval_rat, DomainError, EvalError};
pub use jet::{jet_eval, Jet};
pub use lc_eval::{eval_lc, eval_lc_traced, EvalConfig, LcEval, LcEvalError};
pub use parse::{parse, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rat),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i64),
    /// `base^x`, defined at integer `x` only; used for sequence terms.
    PowVar(Rat),
    Unary(Func, Box<Expr>),
}

impl Expr {
    pub fn c(r: Rat) -> Expr {
        Expr::Const(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(rat::int(n))
    }

    pub fn x() -> Expr {
        Expr::Var
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(o))
    }

    pub fn powi(self, n: i64) -> Expr {
        Expr::PowInt(Box::new(self), n)
    }

    pub fn apply(self, f: Func) -> Expr {
        Expr::Unary(f, Box::new(self))
    }

    pub fn sin(self) -> Expr {
        self.apply(Func::Sin)
    }

    pub fn cos(self) -> Expr {
        self.apply(Func::Cos)
    }

    pub fn exp(self) -> Expr {
        self.apply(Func::Exp)
    }

    pub fn ln(self) -> Expr {
        self.apply(Func::Ln)
    }

    pub fn sqrt(self) -> Expr {
        self.apply(Func::Sqrt)
    }

    pub fn abs(self) -> Expr {
        self.apply(Func::Abs)
    }

    /// Replaces every occurrence of the variable by `g`. `PowVar` nodes only
    /// admit `g` of the form `x + k` or `k` with `k` an integer; otherwise
    /// `None` is returned.
    pub fn subst(&self, g: &Expr) -> Option<Expr> {
        Some(match self {
            Expr::Const(_) => self.clone(),
            Expr::PowVar(b) => subst_powvar(b, g)?,
            Expr::Var => g.clone(),
            Expr::Neg(a) => a.subst(g)?.neg(),
            Expr::Add(a, b) => a.subst(g)?.add(b.subst(g)?),
            Expr::Sub(a, b) => a.subst(g)?.sub(b.subst(g)?),
            Expr::Mul(a, b) => a.subst(g)?.mul(b.subst(g)?),
            Expr::Div(a, b) => a.subst(g)?.div(b.subst(g)?),
            Expr::PowInt(a, n) => a.subst(g)?.powi(*n),
            Expr::Unary(f, a) => a.subst(g)?.apply(*f),
        })
    }

    /// True when built only from constants, the variable, field operations,
    /// integer powers and `abs`: such expressions evaluate exactly.
    pub fn is_rational_only(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var | Expr::PowVar(_) => true,
            Expr::Neg(a) | Expr::PowInt(a, _) => a.is_rational_only(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational_only() && b.is_rational_only()
            }
            Expr::Unary(Func::Abs, a) => a.is_rational_only(),
            Expr::Unary(..) => false,
        }
    }

    /// Rational function of `x`: no transcendental nodes, no `abs`, no `PowVar`.
    pub fn is_rational_function(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::PowVar(_) | Expr::Unary(..) => false,
            Expr::Neg(a) | Expr::PowInt(a, _) => a.is_rational_function(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational_function() && b.is_rational_function()
            }
        }
    }

    pub fn contains(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Const(_) | Expr::Var | Expr::PowVar(_) => false,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Unary(_, a) => a.contains(pred),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains(pred) || b.contains(pred)
            }
        }
    }

    pub fn has_var(&self) -> bool {
        self.contains(&|e| matches!(e, Expr::Var | Expr::PowVar(_)))
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var | Expr::PowVar(_) => 1,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Unary(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }
}

fn int_const(e: &Expr) -> Option<i64> {
    match e {
        Expr::Const(c) => rat::to_i64(c).filter(|_| rat::is_integer(c)),
        Expr::Neg(a) => int_const(a).map(|k| -k),
        _ => None,
    }
}

fn subst_powvar(b: &Rat, g: &Expr) -> Option<Expr> {
    if let Some(k) = int_const(g) {
        if b.is_zero() && k < 0 {
            return None;
        }
        return Some(Expr::Const(rat::powi(b, k)));
    }
    let shift = match g {
        Expr::Var => 0,
        Expr::Add(l, r) if **l == Expr::Var => int_const(r)?,
        Expr::Sub(l, r) if **l == Expr::Var => -int_const(r)?,
        _ => return None,
    };
    if shift == 0 {
        return Some(Expr::PowVar(b.clone()));
    }
    if b.is_zero() {
        return None;
    }
    Some(Expr::Const(rat::powi(b, shift)).mul(Expr::PowVar(b.clone())))
}

/// Binding strength used by the printer: sums 1, products 2, negation 3,
/// powers 4, atoms 5.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Const(c) if c.is_negative() => 3,
        Expr::PowInt(..) | Expr::PowVar(_) => 4,
        Expr::Const(_) | Expr::Var | Expr::Unary(..) => 5,
    }
}

fn operand(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

fn fmt_base(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(c) if !c.is_negative() && !c.denom().is_one() => write!(f, "({})", c),
        _ => operand(e, 5, f),
    }
}

/// Prints with the fewest parentheses that reparse to the same tree. Binary
/// operators are spaced so that `a / 2 / 3` never lexes as the literal `2/3`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, l: u8| {
            operand(a, l, f)?;
            write!(f, " {} ", op)?;
            operand(b, l + 1, f)
        };
        match self {
            Expr::Const(c) => write!(f, "{}", c),
            Expr::Var => write!(f, "x"),
            Expr::Neg(a) => match a.as_ref() {
                Expr::Const(c) if !c.is_negative() => write!(f, "-({})", c),
                _ => {
                    write!(f, "-")?;
                    operand(a, 3, f)
                }
            },
            Expr::Add(a, b) => bin(f, a, "+", b, 1),
            Expr::Sub(a, b) => bin(f, a, "-", b, 1),
            Expr::Mul(a, b) => bin(f, a, "*", b, 2),
            Expr::Div(a, b) => bin(f, a, "/", b, 2),
            Expr::PowInt(a, n) => {
                fmt_base(a, f)?;
                write!(f, "^{}", n)
            }
            Expr::PowVar(b) => {
                fmt_base(&Expr::Const(b.clone()), f)?;
                write!(f, "^x")
            }
            Expr::Unary(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}

impl core::str::FromStr for Expr {
    type Err = SyntaxError;
    fn from_str(s: &str) -> Result<Expr, SyntaxError> {
        parse(s)
    }
}

/// `Const` with value zero.
pub fn is_zero_const(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.is_zero())
}

pub fn is_one_const(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn printing_uses_minimal_parentheses() {
        let e = Expr::x().powi(2).mul(Expr::int(1).div(Expr::x()).sin());
        assert_eq!(e.to_string(), "x^2 * sin(1 / x)");
        assert_eq!(Expr::int(-3).to_string(), "-3");
        assert_eq!(Expr::int(3).neg().to_string(), "-(3)");
        assert_eq!(Expr::c(rat::ratio(1, 2)).powi(3).to_string(), "(1/2)^3");
        assert_eq!(Expr::PowVar(rat::ratio(1, 2)).to_string(), "(1/2)^x");
        assert_eq!(Expr::int(-2).powi(2).to_string(), "(-2)^2");
        assert_eq!(Expr::x().div(Expr::int(2)).div(Expr::int(3)).to_string(), "x / 2 / 3");
    }

    #[test]
    fn printing_round_trips() {
        let cases = [
            Expr::x().sub(Expr::x().sub(Expr::int(1))),
            Expr::x().div(Expr::x().mul(Expr::int(2))),
            Expr::x().add(Expr::int(1)).neg().powi(-2),
            Expr::x().neg().neg().mul(Expr::int(-3)),
            Expr::int(1).div(Expr::int(2)),
            Expr::x().sub(Expr::int(-1)),
            Expr::x().powi(2).neg(),
            Expr::PowVar(rat::int(-2)).mul(Expr::x().sqrt()),
        ];
        for e in cases {
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{}", e);
        }
    }

    #[test]
    fn substitution() {
        let e: Expr = "x^2 + 1".parse().unwrap();
        let s = e.subst(&Expr::x().sub(Expr::int(1))).unwrap();
        assert_eq!(s.to_string(), "(x - 1)^2 + 1");
        let p = Expr::PowVar(rat::ratio(1, 2));
        assert_eq!(p.subst(&Expr::x().sub(Expr::int(1))).unwrap().to_string(), "2 * (1/2)^x");
        assert_eq!(p.subst(&Expr::int(3)).unwrap(), Expr::c(rat::ratio(1, 8)));
        assert_eq!(p.subst(&Expr::c(rat::ratio(1, 2))), None);
    }
}
