//! Truncated Taylor expansions with interval coefficients.
//!
//! `jet_eval(f, X, n)` returns enclosures of `f^(k)(ξ)/k!` for `k < n`,
//! valid for every `ξ` in `X` where the recurrences are defined.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::eval::{domain, unary_interval, EvalError};
use super::{Expr, Func};
use crate::interval::RatInterval;
use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub coeffs: Vec<RatInterval>,
}

fn zero() -> RatInterval {
    RatInterval::point(Rat::zero())
}

impl Jet {
    fn constant(c: RatInterval, n: usize) -> Jet {
        let mut coeffs = vec![zero(); n];
        coeffs[0] = c;
        Jet { coeffs }
    }

    fn variable(x: &RatInterval, n: usize) -> Jet {
        let mut j = Jet::constant(x.clone(), n);
        if n > 1 {
            j.coeffs[1] = RatInterval::point(Rat::one());
        }
        j
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn value(&self) -> &RatInterval {
        &self.coeffs[0]
    }

    fn zip(&self, o: &Jet, f: impl Fn(&RatInterval, &RatInterval) -> RatInterval) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn mul(&self, o: &Jet) -> Jet {
        let n = self.len();
        let mut out = vec![zero(); n];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = zero();
            for j in 0..=k {
                acc = &acc + &(&self.coeffs[j] * &o.coeffs[k - j]);
            }
            *slot = acc;
        }
        Jet { coeffs: out }
    }

    fn div(&self, o: &Jet) -> Option<Jet> {
        let n = self.len();
        let b0 = &o.coeffs[0];
        if b0.contains_zero() {
            return None;
        }
        let mut w: Vec<RatInterval> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = &acc - &(&o.coeffs[j] * &w[k - j]);
            }
            w.push(acc.div(b0)?);
        }
        Some(Jet { coeffs: w })
    }

    fn powi(&self, n: i64) -> Option<Jet> {
        let len = self.len();
        if n < 0 {
            let p = self.powi(-n)?;
            return Jet::constant(RatInterval::point(Rat::one()), len).div(&p);
        }
        let mut acc = Jet::constant(RatInterval::point(Rat::one()), len);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Some(acc)
    }
}

fn kth(k: usize, j: usize) -> Rat {
    Rat::new((j as i64).into(), (k as i64).into())
}

fn unary_jet(node: &Expr, func: Func, u: &Jet, proper: bool, prec: u32) -> Result<Jet, EvalError> {
    let n = u.len();
    let u0 = u.value();
    let w0 = unary_interval(node, func, u0, prec)?;
    if n == 1 {
        return Ok(Jet::constant(w0, 1));
    }
    let mut w = vec![zero(); n];
    match func {
        Func::Exp => {
            w[0] = w0;
            for k in 1..n {
                let mut acc = zero();
                for j in 1..=k {
                    acc = &acc + &(&u.coeffs[j] * &w[k - j]).scale(&kth(k, j));
                }
                w[k] = acc;
            }
        }
        Func::Ln => {
            if !u0.lo().is_positive() {
                return Err(domain(node, "logarithm of a non-positive number", true));
            }
            w[0] = w0;
            for k in 1..n {
                let mut acc = u.coeffs[k].clone();
                for j in 1..k {
                    acc = &acc - &(&w[j] * &u.coeffs[k - j]).scale(&kth(k, j));
                }
                w[k] = acc.div(u0).ok_or(EvalError::Precision)?;
            }
        }
        Func::Sqrt => {
            if !u0.lo().is_positive() {
                return Err(domain(node, "square root is not smooth at zero", true));
            }
            let two_w0 = w0.scale(&rat::int(2));
            w[0] = w0;
            for k in 1..n {
                let mut acc = u.coeffs[k].clone();
                for j in 1..k {
                    acc = &acc - &(&w[j] * &w[k - j]);
                }
                w[k] = acc.div(&two_w0).ok_or(EvalError::Precision)?;
            }
        }
        Func::Sin | Func::Cos => {
            let mut s = vec![zero(); n];
            let mut c = vec![zero(); n];
            s[0] = unary_interval(node, Func::Sin, u0, prec)?;
            c[0] = unary_interval(node, Func::Cos, u0, prec)?;
            for k in 1..n {
                let mut sa = zero();
                let mut ca = zero();
                for j in 1..=k {
                    let f = kth(k, j);
                    sa = &sa + &(&u.coeffs[j] * &c[k - j]).scale(&f);
                    ca = &ca - &(&u.coeffs[j] * &s[k - j]).scale(&f);
                }
                s[k] = sa;
                c[k] = ca;
            }
            w = if func == Func::Sin { s } else { c };
        }
        Func::Abs => {
            // on a proper cell abs(u) = ±u as functions once u keeps a weak
            // sign; at a single point the sign has to be strict
            if u0.lo().is_positive() || (proper && !u0.lo().is_negative()) {
                return Ok(u.clone());
            }
            if u0.hi().is_negative() || (proper && !u0.hi().is_positive()) {
                return Ok(Jet {
                    coeffs: u.coeffs.iter().map(|c| -c.clone()).collect(),
                });
            }
            return Err(domain(node, "abs is not smooth at zero", true));
        }
    }
    Ok(Jet { coeffs: w })
}

fn jet_rec(f: &Expr, x: &RatInterval, n: usize, prec: u32) -> Result<Jet, EvalError> {
    Ok(match f {
        Expr::Const(c) => Jet::constant(RatInterval::point(c.clone()), n),
        Expr::Var => Jet::variable(x, n),
        Expr::PowVar(_) => {
            if n > 1 {
                return Err(domain(f, "power index must be an integer", true));
            }
            Jet::constant(super::eval::eval_interval(f, x, prec)?, 1)
        }
        Expr::Neg(a) => {
            let j = jet_rec(a, x, n, prec)?;
            Jet {
                coeffs: j.coeffs.into_iter().map(|c| -c).collect(),
            }
        }
        Expr::Add(a, b) => jet_rec(a, x, n, prec)?.zip(&jet_rec(b, x, n, prec)?, |p, q| p + q),
        Expr::Sub(a, b) => jet_rec(a, x, n, prec)?.zip(&jet_rec(b, x, n, prec)?, |p, q| p - q),
        Expr::Mul(a, b) => jet_rec(a, x, n, prec)?.mul(&jet_rec(b, x, n, prec)?),
        Expr::Div(a, b) => {
            let d = jet_rec(b, x, n, prec)?;
            let partial = !d.value().is_point();
            match jet_rec(a, x, n, prec)?.div(&d) {
                Some(j) => j,
                None => return Err(domain(f, "division by zero", partial)),
            }
        }
        Expr::PowInt(a, k) => {
            let j = jet_rec(a, x, n, prec)?;
            let partial = !j.value().is_point();
            match j.powi(*k) {
                Some(p) => p,
                None => return Err(domain(f, "division by zero", partial)),
            }
        }
        Expr::Unary(func, a) => {
            let j = jet_rec(a, x, n, prec)?;
            unary_jet(f, *func, &j, !x.is_point(), prec)?
        }
    })
}

/// Taylor coefficients of `f` at `x` (a point or a cell), `order` of them.
pub fn jet_eval(f: &Expr, x: &RatInterval, order: usize, prec: u32) -> Result<Jet, EvalError> {
    assert!(order >= 1, "jet order must be positive");
    jet_rec(f, x, order, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rat::{int, ratio};

    fn jet(s: &str, x: Rat, n: usize) -> Jet {
        jet_eval(&parse(s).unwrap(), &RatInterval::point(x), n, 80).unwrap()
    }

    #[test]
    fn polynomial_jets_are_exact() {
        let j = jet("x^3", int(2), 5);
        let want = [8, 12, 6, 1, 0];
        for (c, w) in j.coeffs.iter().zip(want) {
            assert_eq!(c, &RatInterval::point(int(w)));
        }
        let q = jet("1/(1 - x)", int(0), 6);
        for c in &q.coeffs {
            assert_eq!(c, &RatInterval::point(int(1)));
        }
    }

    #[test]
    fn transcendental_jets() {
        let e = jet("exp(x)", int(0), 6);
        assert_eq!(e.coeffs[4], RatInterval::point(ratio(1, 24)));
        let s = jet("sin(x)", int(0), 6);
        assert_eq!(s.coeffs[3], RatInterval::point(ratio(-1, 6)));
        let l = jet("ln(x)", int(1), 4);
        assert_eq!(l.coeffs[0], RatInterval::point(int(0)));
        assert_eq!(l.coeffs[3], RatInterval::point(ratio(1, 3)));
        let r = jet("sqrt(x)", int(4), 3);
        assert_eq!(r.coeffs[1], RatInterval::point(ratio(1, 4)));
        assert_eq!(r.coeffs[2], RatInterval::point(ratio(-1, 64)));
    }

    #[test]
    fn abs_jet_away_from_zero() {
        let j = jet("abs(x)", int(-2), 3);
        assert_eq!(j.coeffs[1], RatInterval::point(int(-1)));
        assert!(jet_eval(&parse("abs(x)").unwrap(), &RatInterval::point(int(0)), 2, 10).is_err());
    }
}
