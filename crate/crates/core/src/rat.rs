//! Exact rationals and the handful of helpers every other module leans on.

use alloc::string::String;
use core::cmp::Ordering;
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational in canonical form (gcd = 1, positive denominator).
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// `2^k` for any integer `k`.
pub fn pow2(k: i64) -> Rat {
    let p = BigInt::one() << (k.unsigned_abs() as usize);
    if k >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

pub fn powi(r: &Rat, n: i64) -> Rat {
    if n >= 0 {
        num_traits::pow(r.clone(), n as usize)
    } else {
        num_traits::pow(r.recip(), n.unsigned_abs() as usize)
    }
}

/// `n / 2^k` in canonical form.
pub fn dyadic(n: BigInt, k: u32) -> Rat {
    if n.is_zero() {
        return Rat::zero();
    }
    let tz = n.trailing_zeros().unwrap_or(0).min(k as u64);
    let n = n >> tz as usize;
    let k = k as u64 - tz;
    Rat::new_raw(n, BigInt::one() << k as usize)
}

/// `r * 2^k`, exact.
pub fn mul_pow2(r: &Rat, k: i64) -> Rat {
    if r.is_zero() || k == 0 {
        return r.clone();
    }
    if k > 0 {
        let d = r.denom();
        let tz = d.trailing_zeros().unwrap_or(0).min(k as u64);
        return Rat::new_raw(r.numer() << (k as u64 - tz) as usize, d >> tz as usize);
    }
    let k = k.unsigned_abs();
    let n = r.numer();
    let tz = n.trailing_zeros().unwrap_or(0).min(k);
    Rat::new_raw(n >> tz as usize, r.denom() << (k - tz) as usize)
}

/// `r * k` for an integer `k`, reducing only by `gcd(k, denom)`.
pub fn mul_int(r: &Rat, k: &BigInt) -> Rat {
    if k.is_zero() || r.is_zero() {
        return Rat::zero();
    }
    let d = r.denom();
    if d.is_one() {
        return Rat::from_integer(r.numer() * k);
    }
    let g = k.gcd(&(d % k));
    Rat::new_raw(r.numer() * (k / &g), d / &g)
}

/// `floor(r * 2^bits)`.
pub fn floor_scaled(r: &Rat, bits: u32) -> BigInt {
    (r.numer() << bits as usize).div_floor(r.denom())
}

/// Largest multiple of `2^-bits` that is `<= r`.
pub fn floor_dyadic(r: &Rat, bits: u32) -> Rat {
    dyadic(floor_scaled(r, bits), bits)
}

/// Smallest multiple of `2^-bits` that is `>= r`.
pub fn ceil_dyadic(r: &Rat, bits: u32) -> Rat {
    dyadic(-floor_scaled(&-r, bits), bits)
}

/// `floor(log2 |r|)` for nonzero `r`.
pub fn ilog2(r: &Rat) -> i64 {
    debug_assert!(!r.is_zero());
    let n = r.numer().abs();
    let d = r.denom();
    let k = n.bits() as i64 - d.bits() as i64;
    // 2^(k-1) < n/d < 2^(k+1)
    let above = if k >= 0 { n >= d << k as usize } else { n << (-k) as usize >= *d };
    if above {
        k
    } else {
        k - 1
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// `(lo, hi)` with `lo <= sqrt(r) <= hi` and `hi - lo <= 2^-bits`.
pub fn sqrt_bounds(r: &Rat, bits: u32) -> (Rat, Rat) {
    if let Some(s) = exact_sqrt(r) {
        return (s.clone(), s);
    }
    // sqrt(p/q) = sqrt(p*q)/q
    let pq = r.numer() * r.denom() << (2 * bits as usize);
    let s = pq.sqrt();
    let den = r.denom() << bits as usize;
    (
        Rat::new(s.clone(), den.clone()),
        Rat::new(s + BigInt::one(), den),
    )
}

/// Ordering by cross multiplication; much cheaper than the `Ord` impl on
/// values with large, unrelated denominators.
pub fn cmp(a: &Rat, b: &Rat) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    let (sa, sb) = (a.numer().sign(), b.numer().sign());
    if sa != sb {
        return sa.cmp(&sb);
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn le(a: &Rat, b: &Rat) -> bool {
    cmp(a, b) != Ordering::Greater
}

pub fn lt(a: &Rat, b: &Rat) -> bool {
    cmp(a, b) == Ordering::Less
}

pub fn min(a: &Rat, b: &Rat) -> Rat {
    if le(a, b) {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rat, b: &Rat) -> Rat {
    if le(b, a) {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn ceil_to_i64(r: &Rat) -> Option<i64> {
    r.ceil().to_integer().to_i64()
}

pub fn floor_to_i64(r: &Rat) -> Option<i64> {
    r.floor().to_integer().to_i64()
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn to_i64(r: &Rat) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Generalised binomial coefficient `binom(alpha, k)` for rational `alpha`.
pub fn gen_binomial(alpha: &Rat, k: u64) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * (alpha - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with decimal digits only.
pub fn parse_rat(src: &str) -> Option<Rat> {
    let s = src.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(n) || !d.map_or(true, digits) {
        return None;
    }
    let n = BigInt::from_str(n).ok()?;
    let d = match d {
        Some(d) => BigInt::from_str(d).ok()?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    let n = if neg { -n } else { n };
    Some(Rat::new(n, d))
}

pub fn fmt_rat(r: &Rat) -> String {
    alloc::format!("{}", r)
}

/// Nearest integer, ties away from zero.
pub fn round(r: &Rat) -> BigInt {
    r.round().to_integer()
}

pub fn is_even(n: &BigInt) -> bool {
    n.is_even()
}

pub fn sign(r: &Rat) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("3/2"), Some(ratio(3, 2)));
        assert_eq!(parse_rat("-6/4"), Some(ratio(-3, 2)));
        assert_eq!(parse_rat("7"), Some(int(7)));
        assert_eq!(parse_rat("0.5"), None);
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("1/-2"), None);
        assert_eq!(fmt_rat(&ratio(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&int(4)), "4");
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let r = ratio(1, 3);
        let lo = floor_dyadic(&r, 10);
        let hi = ceil_dyadic(&r, 10);
        assert!(lo <= r && r <= hi);
        assert_eq!(&hi - &lo, pow2(-10));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let (lo, hi) = sqrt_bounds(&int(2), 30);
        assert!(&lo * &lo <= int(2) && int(2) <= &hi * &hi);
        assert!(&hi - &lo <= pow2(-30));
        assert_eq!(sqrt_bounds(&ratio(9, 4), 5), (ratio(3, 2), ratio(3, 2)));
    }

    #[test]
    fn ilog2_matches_powers() {
        assert_eq!(ilog2(&int(1)), 0);
        assert_eq!(ilog2(&int(8)), 3);
        assert_eq!(ilog2(&int(9)), 3);
        assert_eq!(ilog2(&ratio(1, 3)), -2);
        assert_eq!(ilog2(&ratio(-1, 4)), -2);
        assert_eq!(ilog2(&ratio(7, 8)), -1);
        assert_eq!(ilog2(&ratio(8, 7)), 0);
        assert_eq!(ilog2(&ratio(3, 32)), -4);
        assert_eq!(mul_pow2(&ratio(3, 4), 3), int(6));
        assert_eq!(mul_pow2(&ratio(6, 5), -2), ratio(3, 10));
        assert_eq!(mul_int(&ratio(5, 6), &BigInt::from(-4)), ratio(-10, 3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(100, 2), BigInt::from(4950));
        assert_eq!(gen_binomial(&ratio(1, 2), 2), ratio(-1, 8));
    }
}
