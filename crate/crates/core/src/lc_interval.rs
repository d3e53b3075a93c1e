//! Levi-Civita intervals `center ± radius`, used for values that are only
//! known up to a bounded uncertainty (sin of an unlimited argument, rational
//! enclosures of transcendental coefficients).

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::lc::{lc_cmp, LcError, LcNumber, LcOrdering};
use crate::rat::{self, Rat};
use crate::interval::RatInterval;
use crate::verdict::{Record, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcInterval {
    center: LcNumber,
    radius: LcNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalError {
    DivisorStraddlesZero,
    Lc(LcError),
}

impl fmt::Display for IntervalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalError::DivisorStraddlesZero => write!(f, "divisor interval may contain zero"),
            IntervalError::Lc(e) => write!(f, "{}", e),
        }
    }
}

impl From<LcError> for IntervalError {
    fn from(e: LcError) -> Self {
        IntervalError::Lc(e)
    }
}

fn is_positive(x: &LcNumber) -> bool {
    x.signum() > 0
}

impl LcInterval {
    /// Panics if `radius` is negative.
    pub fn new(center: LcNumber, radius: LcNumber) -> Self {
        assert!(radius.signum() >= 0, "negative radius");
        LcInterval { center, radius }
    }

    pub fn point(x: LcNumber) -> Self {
        let radius = LcNumber::zero_with(x.trunc().clone());
        LcInterval { center: x, radius }
    }

    /// Standard interval `[lo, hi]` lifted to the field.
    pub fn from_rat_interval(iv: &RatInterval, trunc: Rat) -> Self {
        LcInterval {
            center: LcNumber::from_rat_with(iv.mid(), trunc.clone()),
            radius: LcNumber::from_rat_with(iv.radius(), trunc),
        }
    }

    /// `0 ± 1`: the value of a bounded but otherwise unknown oscillation.
    pub fn unit(trunc: Rat) -> Self {
        LcInterval {
            center: LcNumber::zero_with(trunc.clone()),
            radius: LcNumber::from_rat_with(Rat::one(), trunc),
        }
    }

    pub fn center(&self) -> &LcNumber {
        &self.center
    }

    pub fn radius(&self) -> &LcNumber {
        &self.radius
    }

    pub fn lo(&self) -> LcNumber {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> LcNumber {
        &self.center + &self.radius
    }

    pub fn is_degenerate(&self) -> bool {
        self.radius.is_zero()
    }

    /// Center limited and radius infinitesimal.
    pub fn is_limited(&self) -> bool {
        self.center.is_limited() && self.radius.is_infinitesimal() && self.center.is_determined()
    }

    /// Every point of the interval is unlimited, with the same sign.
    pub fn is_provably_large(&self) -> bool {
        let m = self.mig();
        m.is_large()
    }

    /// Lower bound of `|u|` over the interval (zero if it may straddle 0).
    pub fn mig(&self) -> LcNumber {
        let gap = &self.center.abs() - &self.radius;
        if is_positive(&gap) {
            gap
        } else {
            LcNumber::zero_with(gap.trunc().clone())
        }
    }

    /// Upper bound of `|u|` over the interval.
    pub fn mag(&self) -> LcNumber {
        &self.center.abs() + &self.radius
    }

    pub fn contains(&self, x: &LcNumber) -> bool {
        let d = (x - &self.center).abs();
        lc_cmp(&d, &self.radius) != LcOrdering::Gt
    }

    /// Whether `other` lies inside `self` (up to truncation).
    pub fn encloses(&self, other: &LcInterval) -> bool {
        let d = &(&self.center - &other.center).abs() + &other.radius;
        lc_cmp(&d, &self.radius) != LcOrdering::Gt
    }

    pub fn scale(&self, k: &Rat) -> Self {
        LcInterval {
            center: self.center.scale(k),
            radius: self.radius.scale(&num_traits::Signed::abs(k)),
        }
    }

    pub fn add_radius(&self, extra: &LcNumber) -> Self {
        LcInterval {
            center: self.center.clone(),
            radius: &self.radius + extra,
        }
    }

    pub fn recip(&self) -> Result<Self, IntervalError> {
        let c_abs = self.center.abs();
        let gap = &c_abs - &self.radius;
        if !is_positive(&gap) {
            return Err(IntervalError::DivisorStraddlesZero);
        }
        let center = self.center.inv()?;
        let radius = if self.radius.is_zero() {
            LcNumber::zero_with(center.trunc().clone())
        } else {
            self.radius.div(&(&c_abs * &gap))?
        };
        Ok(LcInterval { center, radius })
    }

    pub fn div(&self, other: &Self) -> Result<Self, IntervalError> {
        Ok(self * &other.recip()?)
    }

    pub fn abs(&self) -> Self {
        let c_abs = self.center.abs();
        if is_positive(&(&c_abs - &self.radius)) || self.radius.is_zero() {
            return LcInterval {
                center: c_abs,
                radius: self.radius.clone(),
            };
        }
        // interval may contain 0: hull of [0, |c| + r]
        let half = rat::ratio(1, 2);
        let top = &c_abs + &self.radius;
        LcInterval {
            center: top.scale(&half),
            radius: top.scale(&half),
        }
    }

    pub fn powi(&self, n: i64) -> Result<Self, IntervalError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut acc = LcInterval::point(LcNumber::from_rat_with(Rat::one(), self.center.trunc().clone()));
        for _ in 0..n {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Self) -> Self {
        let lo = match lc_cmp(&self.lo(), &other.lo()) {
            LcOrdering::Gt => other.lo(),
            _ => self.lo(),
        };
        let hi = match lc_cmp(&self.hi(), &other.hi()) {
            LcOrdering::Lt => other.hi(),
            _ => self.hi(),
        };
        let half = rat::ratio(1, 2);
        LcInterval {
            center: (&lo + &hi).scale(&half),
            radius: (&hi - &lo).scale(&half),
        }
    }

    pub fn truncated(&self, t: &Rat) -> Self {
        LcInterval {
            center: self.center.truncated(t),
            radius: self.radius.truncated(t),
        }
    }

    /// `[st(c) - st(r), st(c) + st(r)]`: encloses the standard part of every
    /// point, for limited center and radius.
    pub fn standard_enclosure(&self) -> Option<RatInterval> {
        if !self.center.is_limited() || !self.radius.is_limited() {
            return None;
        }
        let c = self.center.standard_part().ok()?;
        let r = self.radius.standard_part().ok()?;
        Some(RatInterval::new(&c - &r, &c + &r))
    }
}

pub fn interval_add(a: &LcInterval, b: &LcInterval) -> LcInterval {
    a + b
}

pub fn interval_mul(a: &LcInterval, b: &LcInterval) -> LcInterval {
    a * b
}

pub fn interval_div(a: &LcInterval, b: &LcInterval) -> Result<LcInterval, IntervalError> {
    a.div(b)
}

pub fn interval_abs(a: &LcInterval) -> LcInterval {
    a.abs()
}

/// Three-valued lift of `≈` to intervals.
pub fn i_close_verdict(a: &LcInterval, b: &LcInterval) -> Verdict {
    let d = (&a.center - &b.center).abs();
    let spread = &a.radius + &b.radius;
    let upper = &d + &spread;
    if upper.is_infinitesimal() && upper.is_determined() {
        return Verdict::proved("infinitely close");
    }
    let gap = &d - &spread;
    if is_positive(&gap) && !gap.is_infinitesimal() {
        let w = Record::new()
            .with("left", alloc::format!("{}", a))
            .with("right", alloc::format!("{}", b))
            .with("gap", alloc::format!("{}", gap));
        return Verdict::refuted(w, "separated by a non-infinitesimal gap");
    }
    Verdict::undecided("closeness not determined")
}

impl Add for &LcInterval {
    type Output = LcInterval;
    fn add(self, rhs: &LcInterval) -> LcInterval {
        LcInterval {
            center: &self.center + &rhs.center,
            radius: &self.radius + &rhs.radius,
        }
    }
}

impl Sub for &LcInterval {
    type Output = LcInterval;
    fn sub(self, rhs: &LcInterval) -> LcInterval {
        LcInterval {
            center: &self.center - &rhs.center,
            radius: &self.radius + &rhs.radius,
        }
    }
}

impl Mul for &LcInterval {
    type Output = LcInterval;
    fn mul(self, rhs: &LcInterval) -> LcInterval {
        let center = &self.center * &rhs.center;
        let mut radius = LcNumber::zero_with(center.trunc().clone());
        if !rhs.radius.is_zero() {
            radius = &radius + &(&self.center.abs() * &rhs.radius);
        }
        if !self.radius.is_zero() {
            radius = &radius + &(&rhs.center.abs() * &self.radius);
            if !rhs.radius.is_zero() {
                radius = &radius + &(&self.radius * &rhs.radius);
            }
        }
        LcInterval { center, radius }
    }
}

impl Neg for LcInterval {
    type Output = LcInterval;
    fn neg(self) -> LcInterval {
        LcInterval {
            center: -self.center,
            radius: self.radius,
        }
    }
}

impl fmt::Display for LcInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radius.is_zero() {
            write!(f, "{}", self.center)
        } else {
            write!(f, "({}) +/- ({})", self.center, self.radius)
        }
    }
}

impl From<LcNumber> for LcInterval {
    fn from(x: LcNumber) -> Self {
        LcInterval::point(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;
    use crate::verdict::Status;

    fn lc(s: &str) -> LcNumber {
        s.parse().unwrap()
    }

    fn iv(c: &str, r: &str) -> LcInterval {
        LcInterval::new(lc(c), lc(r))
    }

    #[test]
    fn arithmetic_examples() {
        let p = &iv("0", "1") * &iv("eps", "0");
        assert_eq!(lc_cmp(p.center(), &lc("0")), LcOrdering::EqWithinTrunc);
        assert_eq!(lc_cmp(p.radius(), &lc("eps")), LcOrdering::EqWithinTrunc);
        assert_eq!(&iv("2", "0") + &iv("3", "0"), iv("5", "0"));
        let d = &iv("0", "eps^2") - &iv("0", "eps^2");
        assert!(d.center().is_zero());
        assert_eq!(d.radius(), &lc("2*eps^2"));
    }

    #[test]
    fn division_requires_separation_from_zero() {
        assert_eq!(iv("1", "2").recip(), Err(IntervalError::DivisorStraddlesZero));
        assert_eq!(iv("eps", "eps").recip(), Err(IntervalError::DivisorStraddlesZero));
        let q = iv("1", "0").div(&iv("2", "0")).unwrap();
        assert_eq!(q.center(), &LcNumber::from_rat(crate::rat::ratio(1, 2)));
        assert!(q.radius().is_zero());
        let r = iv("2", "1").recip().unwrap();
        assert!(r.contains(&LcNumber::from_rat(int(1))));
        assert!(r.contains(&LcNumber::from_rat(crate::rat::ratio(1, 3))));
    }

    #[test]
    fn abs_of_straddling_interval() {
        let a = iv("-1", "2").abs();
        assert!(a.contains(&lc("0")));
        assert!(a.contains(&lc("3")));
        assert_eq!(iv("-3", "1").abs(), iv("3", "1"));
    }

    #[test]
    fn closeness_verdicts() {
        assert_eq!(i_close_verdict(&iv("0", "eps"), &iv("0", "eps^2")).status, Status::Proved);
        assert_eq!(i_close_verdict(&iv("0", "1"), &iv("5", "1")).status, Status::Refuted);
        assert_eq!(i_close_verdict(&iv("0", "1"), &iv("0", "1")).status, Status::Undecided);
    }
}
