//! Truncated Levi-Civita numbers: finite sums `Σ c_q ε^q` over rational
//! exponents `q`, trusted up to a tracked truncation order.
//!
//! `ε` is a fixed positive infinitesimal. A number whose leading exponent is
//! positive is infinitesimal, zero means appreciable, negative means
//! unlimited. Terms with exponent above `trunc` are unknown and never
//! stored.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::rat::{self, Rat};

pub const DEFAULT_TRUNC_ORDER: i64 = 12;
pub const DEFAULT_MAX_EXP_DENOM: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcConfig {
    pub trunc_order: Rat,
    /// Upper bound on exponent denominators created by roots.
    pub max_exp_denom: u64,
}

impl Default for LcConfig {
    fn default() -> Self {
        LcConfig {
            trunc_order: rat::int(DEFAULT_TRUNC_ORDER),
            max_exp_denom: DEFAULT_MAX_EXP_DENOM,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LcError {
    ZeroDivision,
    Unlimited,
    /// The requested quantity lies beyond the trusted truncation order.
    Truncated,
    ExponentTooFine(Rat),
    Parse { offset: usize, msg: &'static str },
}

impl fmt::Display for LcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcError::ZeroDivision => write!(f, "division by zero"),
            LcError::Unlimited => write!(f, "value is unlimited"),
            LcError::Truncated => write!(f, "value not determined within truncation order"),
            LcError::ExponentTooFine(q) => write!(f, "exponent {} exceeds denominator bound", q),
            LcError::Parse { offset, msg } => write!(f, "parse error at {}: {}", offset, msg),
        }
    }
}

impl core::error::Error for LcError {}

/// Result of comparing two truncated numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcOrdering {
    Lt,
    EqWithinTrunc,
    Gt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Zero,
    Infinitesimal,
    Appreciable,
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcNumber {
    terms: BTreeMap<Rat, Rat>,
    trunc: Rat,
}

impl LcNumber {
    pub fn zero_with(trunc: Rat) -> Self {
        LcNumber {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn zero() -> Self {
        Self::zero_with(rat::int(DEFAULT_TRUNC_ORDER))
    }

    /// `coeff * ε^exp`, or zero if `exp` is beyond `trunc`.
    pub fn monomial(coeff: Rat, exp: Rat, trunc: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() && exp <= trunc {
            terms.insert(exp, coeff);
        }
        LcNumber { terms, trunc }
    }

    pub fn from_rat_with(r: Rat, trunc: Rat) -> Self {
        Self::monomial(r, Rat::zero(), trunc)
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_rat_with(r, rat::int(DEFAULT_TRUNC_ORDER))
    }

    pub fn eps_with(trunc: Rat) -> Self {
        Self::monomial(Rat::one(), Rat::one(), trunc)
    }

    /// The canonical positive infinitesimal at the default truncation.
    pub fn eps() -> Self {
        Self::eps_with(rat::int(DEFAULT_TRUNC_ORDER))
    }

    pub fn from_terms<I: IntoIterator<Item = (Rat, Rat)>>(it: I, trunc: Rat) -> Self {
        let mut out = Self::zero_with(trunc);
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: Rat, coeff: Rat) {
        if coeff.is_zero() || exp > self.trunc {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rat::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn trunc(&self) -> &Rat {
        &self.trunc
    }

    /// Same terms, re-truncated at `min(self.trunc, t)`.
    pub fn truncated(&self, t: &Rat) -> Self {
        let trunc = rat::min(&self.trunc, t);
        LcNumber {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e <= trunc)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            trunc,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (smallest) exponent with its coefficient.
    pub fn lead(&self) -> Option<(&Rat, &Rat)> {
        self.terms.iter().next()
    }

    pub fn lead_exp(&self) -> Option<&Rat> {
        self.lead().map(|(e, _)| e)
    }

    /// Leading exponent, or the truncation order for zero: the first
    /// exponent at which the value may be nonzero.
    fn valuation(&self) -> Rat {
        self.lead_exp().cloned().unwrap_or_else(|| self.trunc.clone())
    }

    pub fn coeff(&self, exp: &Rat) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// -1, 0 or 1 from the leading coefficient.
    pub fn signum(&self) -> i32 {
        match self.lead() {
            None => 0,
            Some((_, c)) => rat::sign(c),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_infinitesimal(&self) -> bool {
        match self.lead_exp() {
            None => true,
            Some(e) => e.is_positive(),
        }
    }

    pub fn is_limited(&self) -> bool {
        match self.lead_exp() {
            None => true,
            Some(e) => !e.is_negative(),
        }
    }

    pub fn is_large(&self) -> bool {
        !self.is_limited()
    }

    /// True when the classification of this value cannot be affected by
    /// unknown terms past the truncation order.
    pub fn is_determined(&self) -> bool {
        !self.is_zero() || !self.trunc.is_negative()
    }

    pub fn magnitude(&self) -> Magnitude {
        match self.lead_exp() {
            None => Magnitude::Zero,
            Some(e) if e.is_positive() => Magnitude::Infinitesimal,
            Some(e) if e.is_zero() => Magnitude::Appreciable,
            Some(_) => Magnitude::Large,
        }
    }

    /// The exponent-0 coefficient of a limited number.
    pub fn standard_part(&self) -> Result<Rat, LcError> {
        if self.is_large() {
            return Err(LcError::Unlimited);
        }
        if self.trunc.is_negative() {
            return Err(LcError::Truncated);
        }
        Ok(self.coeff(&Rat::zero()))
    }

    /// Infinitesimal part `self - st(self)` of a limited number.
    pub fn infinitesimal_part(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Rat::zero());
        out.terms.retain(|e, _| e.is_positive());
        out
    }

    pub fn i_close(&self, other: &Self) -> bool {
        (self - other).is_infinitesimal()
    }

    pub fn cmp_trunc(&self, other: &Self) -> LcOrdering {
        lc_cmp(self, other)
    }

    /// Multiplicative inverse tracked to `trunc - 2 * lead`.
    pub fn inv(&self) -> Result<Self, LcError> {
        let (lead_e, lead_c) = match self.lead() {
            None => return Err(LcError::ZeroDivision),
            Some((e, c)) => (e.clone(), c.clone()),
        };
        // self = c ε^l (1 + u), u infinitesimal
        let rel_trunc = &self.trunc - &lead_e;
        let mut u = LcNumber::zero_with(rel_trunc.clone());
        for (e, c) in self.terms.iter().skip(1) {
            u.add_term(e - &lead_e, c / &lead_c);
        }
        let neg_u = -u;
        let mut sum = LcNumber::from_rat_with(Rat::one(), rel_trunc.clone());
        let mut power = sum.clone();
        loop {
            power = mul_limited(&power, &neg_u, &rel_trunc);
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        let out_trunc = &self.trunc - &lead_e - &lead_e;
        let scale = lead_c.recip();
        Ok(LcNumber::from_terms(
            sum.terms.iter().map(|(e, c)| (e - &lead_e, c * &scale)),
            out_trunc,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self, LcError> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, n: i64) -> Result<Self, LcError> {
        if n < 0 {
            return self.inv()?.powi(-n);
        }
        let mut base = self.clone();
        let mut acc = LcNumber::from_rat_with(Rat::one(), self.trunc.clone());
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return LcNumber::zero_with(self.trunc.clone());
        }
        LcNumber {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Parses the canonical rendering; the truncation order is supplied.
    pub fn parse_with(src: &str, trunc: Rat) -> Result<Self, LcError> {
        parse_lc(src, trunc)
    }
}

/// Truncated product that keeps only exponents `<= limit`.
fn mul_limited(a: &LcNumber, b: &LcNumber, limit: &Rat) -> LcNumber {
    let mut out = LcNumber::zero_with(limit.clone());
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e = ea + eb;
            if &e > limit {
                break;
            }
            out.add_term(e, ca * cb);
        }
    }
    out
}

pub fn lc_add(x: &LcNumber, y: &LcNumber) -> LcNumber {
    x + y
}

pub fn lc_mul(x: &LcNumber, y: &LcNumber) -> LcNumber {
    x * y
}

pub fn lc_inv(x: &LcNumber) -> Result<LcNumber, LcError> {
    x.inv()
}

/// Orders `x` against `y` by the sign of the leading coefficient of `y - x`.
pub fn lc_cmp(x: &LcNumber, y: &LcNumber) -> LcOrdering {
    match (y - x).signum() {
        0 => LcOrdering::EqWithinTrunc,
        s if s > 0 => LcOrdering::Lt,
        _ => LcOrdering::Gt,
    }
}

pub fn standard_part(x: &LcNumber) -> Result<Rat, LcError> {
    x.standard_part()
}

pub fn i_close(x: &LcNumber, y: &LcNumber) -> bool {
    x.i_close(y)
}

impl Add for &LcNumber {
    type Output = LcNumber;
    fn add(self, rhs: &LcNumber) -> LcNumber {
        let trunc = rat::min(&self.trunc, &rhs.trunc);
        let mut out = self.truncated(&trunc);
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LcNumber {
    type Output = LcNumber;
    fn sub(self, rhs: &LcNumber) -> LcNumber {
        self + &(-rhs.clone())
    }
}

impl Mul for &LcNumber {
    type Output = LcNumber;
    fn mul(self, rhs: &LcNumber) -> LcNumber {
        let t1 = &self.trunc + &rhs.valuation();
        let t2 = &rhs.trunc + &self.valuation();
        let trunc = rat::min(&t1, &t2);
        mul_limited(self, rhs, &trunc)
    }
}

impl Neg for LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        LcNumber {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LcNumber {
            type Output = LcNumber;
            fn $m(self, rhs: LcNumber) -> LcNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl PartialOrd for LcOrdering {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let rank = |o: &LcOrdering| match o {
            LcOrdering::Lt => 0,
            LcOrdering::EqWithinTrunc => 1,
            LcOrdering::Gt => 2,
        };
        rank(self).partial_cmp(&rank(other))
    }
}

impl fmt::Display for LcNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if e.is_zero() {
                write!(f, "{}", mag)?;
                continue;
            }
            if mag.is_one() {
                write!(f, "eps")?;
            } else {
                write!(f, "{}*eps", mag)?;
            }
            if !e.is_one() {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for LcNumber {
    type Err = LcError;
    fn from_str(s: &str) -> Result<Self, LcError> {
        parse_lc(s, rat::int(DEFAULT_TRUNC_ORDER))
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &'static str) -> LcError {
        LcError::Parse {
            offset: self.pos,
            msg,
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    /// `digits ("/" digits)?` with no interior whitespace.
    fn unsigned_rat(&mut self) -> Result<Rat, LcError> {
        self.skip_ws();
        let mut text = match self.digits() {
            Some(n) => n,
            None => return Err(self.err("expected digits")),
        };
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let d = match self.digits() {
                Some(d) => d,
                None => return Err(self.err("expected denominator")),
            };
            text.push('/');
            text.push_str(&d);
        }
        rat::parse_rat(&text).ok_or_else(|| self.err("invalid rational"))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }
}

fn parse_lc(src: &str, trunc: Rat) -> Result<LcNumber, LcError> {
    let mut cur = Cursor {
        src: src.as_bytes(),
        pos: 0,
    };
    let mut out = LcNumber::zero_with(trunc);
    let mut first = true;
    loop {
        let negative = if first {
            cur.eat(b'-')
        } else if cur.eat(b'+') {
            false
        } else if cur.eat(b'-') {
            true
        } else {
            break;
        };
        first = false;
        let (coeff, has_eps) = if cur.keyword("eps") {
            (Rat::one(), true)
        } else {
            let c = cur.unsigned_rat()?;
            if cur.eat(b'*') {
                if !cur.keyword("eps") {
                    return Err(cur.err("expected eps"));
                }
                (c, true)
            } else {
                (c, false)
            }
        };
        let exp = if has_eps {
            if cur.eat(b'^') {
                let neg = cur.eat(b'-');
                let e = cur.unsigned_rat()?;
                if neg {
                    -e
                } else {
                    e
                }
            } else {
                Rat::one()
            }
        } else {
            Rat::zero()
        };
        let coeff = if negative { -coeff } else { coeff };
        out.add_term(exp, coeff);
    }
    if cur.peek().is_some() || first {
        return Err(cur.err("unexpected input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    fn lc(s: &str) -> LcNumber {
        s.parse().unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(lc("1 + 2*eps") + lc("3 - eps"), lc("4 + eps"));
        assert_eq!(lc("3/2 + eps^2") + LcNumber::zero(), lc("3/2 + eps^2"));
        assert!((LcNumber::eps() + -LcNumber::eps()).is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let p = lc("1 + eps") * lc("1 - eps");
        assert_eq!(lc_cmp(&p, &lc("1 - eps^2")), LcOrdering::EqWithinTrunc);
        let sq = LcNumber::eps() * LcNumber::eps();
        assert_eq!(lc_cmp(&sq, &lc("eps^2")), LcOrdering::EqWithinTrunc);
        assert_eq!(sq.trunc(), &int(13));
        assert!((LcNumber::zero() * lc("5 + eps")).is_zero());
    }

    #[test]
    fn inverse_examples() {
        let inv = lc("1 + eps").inv().unwrap();
        for k in 0..=12 {
            let expected = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(inv.coeff(&int(k)), expected);
        }
        assert_eq!(LcNumber::eps().inv().unwrap().terms().collect::<alloc::vec::Vec<_>>(), [(&int(-1), &int(1))]);
        assert_eq!(LcNumber::from_rat(int(2)).inv().unwrap(), LcNumber::from_rat_with(ratio(1, 2), int(12)));
        assert_eq!(LcNumber::zero().inv(), Err(LcError::ZeroDivision));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(lc_cmp(&LcNumber::eps(), &LcNumber::from_rat(ratio(1, 1_000_000))), LcOrdering::Lt);
        let x = lc("3 - 2*eps^1/2");
        assert_eq!(lc_cmp(&x, &x), LcOrdering::EqWithinTrunc);
        assert_eq!(lc_cmp(&-LcNumber::eps(), &LcNumber::zero()), LcOrdering::Lt);
    }

    #[test]
    fn predicates() {
        assert!(lc("eps - 7*eps^3").is_infinitesimal());
        assert!(lc("3 + eps").is_limited());
        assert!(lc("eps^-1").is_large());
        assert!(LcNumber::zero().is_infinitesimal());
        assert_eq!(lc("3/2 + 5*eps^2").standard_part(), Ok(ratio(3, 2)));
        assert_eq!(LcNumber::eps().standard_part(), Ok(int(0)));
        assert_eq!(lc("eps^-1").standard_part(), Err(LcError::Unlimited));
        assert!(i_close(&lc("2 + eps"), &lc("2")));
        assert!(!i_close(&lc("2"), &lc("3")));
        assert!(!i_close(&lc("eps^-1"), &lc("eps^-1 + 5")));
    }

    #[test]
    fn render_and_parse() {
        let x = lc("3/2 + 5*eps^2");
        assert_eq!(alloc::format!("{}", x), "3/2 + 5*eps^2");
        let y = lc("-eps^-1 + 2 - 1/3*eps^1/2 + eps");
        assert_eq!(alloc::format!("{}", y), "-eps^-1 + 2 - 1/3*eps^1/2 + eps");
        assert!("3 +".parse::<LcNumber>().is_err());
        assert!("eps^".parse::<LcNumber>().is_err());
        assert!("".parse::<LcNumber>().is_err());
    }

    #[test]
    fn truncation_is_tracked_through_division() {
        let q = lc("2 + eps").div(&lc("eps^2")).unwrap();
        assert_eq!(q.lead_exp(), Some(&int(-2)));
        assert_eq!(q.trunc(), &int(8));
    }
}
