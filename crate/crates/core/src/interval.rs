//! Closed rational intervals with exact endpoint arithmetic.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rat::{self, Rat};

/// `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rat,
    hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(rat::le(&lo, &hi), "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    /// Builds the hull of two endpoints given in either order.
    pub fn spanning(a: Rat, b: Rat) -> Self {
        if rat::le(&a, &b) {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / rat::int(2)
    }

    pub fn radius(&self) -> Rat {
        self.width() / rat::int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        rat::le(&self.lo, x) && rat::le(x, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn encloses(&self, other: &RatInterval) -> bool {
        rat::le(&self.lo, &other.lo) && rat::le(&other.hi, &self.hi)
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        rat::le(&self.lo, &other.hi) && rat::le(&other.lo, &self.hi)
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = rat::max(&self.lo, &other.lo);
        let hi = rat::min(&self.hi, &other.hi);
        rat::le(&lo, &hi).then(|| RatInterval { lo, hi })
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: rat::min(&self.lo, &other.lo),
            hi: rat::max(&self.hi, &other.hi),
        }
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(&self) -> Rat {
        rat::max(&self.lo.abs(), &self.hi.abs())
    }

    /// Smallest absolute value attained on the interval.
    pub fn mig(&self) -> Rat {
        if self.contains_zero() {
            Rat::zero()
        } else {
            rat::min(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn abs(&self) -> RatInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            RatInterval {
                lo: Rat::zero(),
                hi: self.mag(),
            }
        }
    }

    pub fn scale(&self, k: &Rat) -> RatInterval {
        if k.is_integer() {
            let k = k.numer();
            return RatInterval::spanning(rat::mul_int(&self.lo, k), rat::mul_int(&self.hi, k));
        }
        RatInterval::spanning(&self.lo * k, &self.hi * k)
    }

    /// `1 / self`; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<RatInterval> {
        if self.contains_zero() {
            return None;
        }
        Some(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &RatInterval) -> Option<RatInterval> {
        other.recip().map(|r| self * &r)
    }

    /// Integer power with the even-power refinement around zero.
    pub fn powi(&self, n: i64) -> Option<RatInterval> {
        if n == 0 {
            return Some(RatInterval::point(Rat::one()));
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let lo_n = rat::powi(&self.lo, n);
        let hi_n = rat::powi(&self.hi, n);
        if n % 2 == 1 {
            return Some(RatInterval { lo: lo_n, hi: hi_n });
        }
        if self.contains_zero() {
            Some(RatInterval {
                lo: Rat::zero(),
                hi: rat::max(&lo_n, &hi_n),
            })
        } else {
            Some(RatInterval::spanning(lo_n, hi_n))
        }
    }

    /// Widens the endpoints outward onto the `2^-bits` grid.
    pub fn round_out(&self, bits: u32) -> RatInterval {
        RatInterval {
            lo: rat::floor_dyadic(&self.lo, bits),
            hi: rat::ceil_dyadic(&self.hi, bits),
        }
    }

    pub fn bisect(&self) -> (RatInterval, RatInterval) {
        let m = self.mid();
        (
            RatInterval::new(self.lo.clone(), m.clone()),
            RatInterval::new(m, self.hi.clone()),
        )
    }

    /// Splits into `n` equal cells.
    pub fn split(&self, n: usize) -> alloc::vec::Vec<RatInterval> {
        let w = self.width() / rat::int(n as i64);
        (0..n)
            .map(|i| {
                let a = &self.lo + &w * rat::int(i as i64);
                let b = if i + 1 == n {
                    self.hi.clone()
                } else {
                    &a + &w
                };
                RatInterval::new(a, b)
            })
            .collect()
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for RatInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&rat::fmt_rat(&self.lo))?;
        seq.serialize_element(&rat::fmt_rat(&self.hi))?;
        seq.end()
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Add for RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: RatInterval) -> RatInterval {
        &self + &rhs
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Sub for RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: RatInterval) -> RatInterval {
        &self - &rhs
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if rat::lt(v, &lo) {
                lo = v.clone();
            }
            if rat::lt(&hi, v) {
                hi = v.clone();
            }
        }
        RatInterval { lo, hi }
    }
}

impl Mul for RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: RatInterval) -> RatInterval {
        &self * &rhs
    }
}

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}
