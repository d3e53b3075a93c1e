//! Univariate polynomials and rational functions over the rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::expr::Expr;
use crate::interval::RatInterval;
use crate::rat::{self, Rat};

/// Coefficients in ascending order, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat::int(k as i64))
                .collect(),
        )
    }

    pub fn powi(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rat) -> Poly {
        let lin = Poly::new(vec![c.clone(), Rat::one()]);
        let mut acc = Poly::zero();
        for a in self.0.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(a.clone());
        }
        acc
    }

    /// Coefficients reversed: `x^d p(1/x)` for `d = degree`.
    pub fn reversed(&self) -> Poly {
        let mut c = self.0.clone();
        c.reverse();
        Poly::new(c)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        let lead = d.lead();
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] / &lead;
            if !coef.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &coef * dc;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Enclosure over a cell by expanding around its midpoint.
    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        if x.is_point() {
            return RatInterval::point(self.eval(x.lo()));
        }
        let m = x.mid();
        let r = x.radius();
        let q = self.shift(&m);
        let mut spread = Rat::zero();
        let mut rk = Rat::one();
        for c in q.0.iter().skip(1) {
            rk = &rk * &r;
            spread += c.abs() * &rk;
        }
        let c0 = q.coeff(0);
        RatInterval::new(&c0 - &spread, &c0 + &spread)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*x", c)?,
                _ => write!(f, "{}*x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

/// Reduced quotient `num / den` with monic `den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc {
                num,
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let lead = d.lead();
        Some(RatFunc {
            num: n.scale(&lead.recip()),
            den: d.scale(&lead.recip()),
        })
    }

    pub fn poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Converts an expression built from field operations and integer
    /// powers. Returns `None` for other nodes or an identically zero
    /// denominator.
    pub fn from_expr(e: &Expr) -> Option<RatFunc> {
        Some(match e {
            Expr::Const(c) => RatFunc::poly(Poly::constant(c.clone())),
            Expr::Var => RatFunc::poly(Poly::x()),
            Expr::Neg(a) => {
                let r = RatFunc::from_expr(a)?;
                RatFunc {
                    num: -&r.num,
                    den: r.den,
                }
            }
            Expr::Add(a, b) => RatFunc::from_expr(a)?.add(&RatFunc::from_expr(b)?),
            Expr::Sub(a, b) => RatFunc::from_expr(a)?.sub(&RatFunc::from_expr(b)?),
            Expr::Mul(a, b) => RatFunc::from_expr(a)?.mul(&RatFunc::from_expr(b)?),
            Expr::Div(a, b) => RatFunc::from_expr(a)?.div(&RatFunc::from_expr(b)?)?,
            Expr::PowInt(a, n) => {
                let r = RatFunc::from_expr(a)?;
                let k = u32::try_from(n.unsigned_abs()).ok()?;
                if k > 512 {
                    return None;
                }
                let p = RatFunc::new(r.num.powi(k), r.den.powi(k))?;
                if *n < 0 {
                    RatFunc::new(p.den, p.num)?
                } else {
                    p
                }
            }
            Expr::PowVar(_) | Expr::Unary(..) => return None,
        })
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        let num = &(&self.num * &o.den) - &(&o.num * &self.den);
        RatFunc::new(num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// `R(x + c)`.
    pub fn shift(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.shift(c), self.den.shift(c)).expect("nonzero denominator")
    }

    pub fn eval_interval(&self, x: &RatInterval) -> Option<RatInterval> {
        let d = self.den.eval_interval(x);
        if d.contains_zero() {
            return None;
        }
        self.num.eval_interval(x).div(&d)
    }

    /// Enclosure over a cell, bisecting up to `depth` levels where the
    /// centered form of the denominator touches zero.
    pub fn eval_interval_split(&self, x: &RatInterval, depth: u32) -> Option<RatInterval> {
        if let Some(r) = self.eval_interval(x) {
            return Some(r);
        }
        if depth == 0 || x.is_point() {
            return None;
        }
        let (l, r) = x.bisect();
        Some(self.eval_interval_split(&l, depth - 1)?.hull(&self.eval_interval_split(&r, depth - 1)?))
    }

    /// Enclosure of `{R(x) : x >= m}`, available when the degree of the
    /// numerator does not exceed that of the denominator and `m > 0`.
    pub fn range_beyond(&self, m: &Rat) -> Option<RatInterval> {
        if !m.is_positive() {
            return None;
        }
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree()?;
        if self.num.is_zero() {
            return Some(RatInterval::point(Rat::zero()));
        }
        if dn > dd {
            return None;
        }
        // R(1/t) = t^(dd - dn) * rev(num)(t) / rev(den)(t)
        let mut tpow = vec![Rat::zero(); dd - dn];
        tpow.push(Rat::one());
        let num_t = &Poly::new(tpow) * &self.num.reversed();
        let den_t = self.den.reversed();
        let g = RatFunc {
            num: num_t,
            den: den_t,
        };
        let cell = RatInterval::new(Rat::zero(), m.recip());
        g.eval_interval_split(&cell, 12)
    }

    pub fn to_expr(&self) -> Expr {
        fn poly_expr(p: &Poly) -> Expr {
            let mut acc: Option<Expr> = None;
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = match k {
                    0 => Expr::Const(c.clone()),
                    1 => Expr::Const(c.clone()).mul(Expr::Var),
                    _ => Expr::Const(c.clone()).mul(Expr::Var.powi(k as i64)),
                };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(term),
                });
            }
            acc.unwrap_or_else(|| Expr::int(0))
        }
        if self.is_polynomial() {
            poly_expr(&self.num.scale(&self.den.lead().recip()))
        } else {
            poly_expr(&self.num).div(poly_expr(&self.den))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
