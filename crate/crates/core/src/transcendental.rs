//! Outward-rounded enclosures of the elementary transcendental functions.
//!
//! Every function returns an interval that is guaranteed to contain the true
//! value. `bits` controls the absolute width of the result for arguments of
//! moderate magnitude; widths grow with the magnitude of the function value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::RatInterval;
use crate::rat::{self, Rat};

// floor(pi * 2^2048), little-endian 32-bit limbs.
const PI_LIMBS: [u32; 65] = [
    0x7c72e993, 0xa15486af, 0x1141e8ce, 0xb4cc5c34, 0x2aab10b6, 0x55ca396a, 0x63e81440, 0x57489862,
    0xaa55ab94, 0xe65525f3, 0x55605c60, 0x78af2fda, 0xbd314b27, 0xd71577c1, 0xb01e8a3e, 0x6c9e0e8b,
    0x603a180e, 0x8e79dcb0, 0xb8db38ef, 0xca417918, 0x286085f0, 0xc5d1b023, 0x2af26013, 0x9c30d539,
    0xc25a59b5, 0x7b54a41d, 0x82154aee, 0x718bcd58, 0x728eb658, 0x0d95748f, 0xf4933d7e, 0xa458fea3,
    0x71574e69, 0x636920d8, 0x858efc16, 0x0801f2e2, 0xb3916cf7, 0x24a19947, 0xf12c7f99, 0xba7c9045,
    0x6a267e96, 0xb8e1afed, 0xd01adfb7, 0x2ffd72db, 0x98dfb5ac, 0xd1310ba6, 0x8979fb1b, 0x9216d5d9,
    0xb5470917, 0x3f84d5b5, 0xc97c50dd, 0xc0ac29b7, 0x34e90c6c, 0xbe5466cf, 0x38d01377, 0x452821e6,
    0xec4e6c89, 0x082efa98, 0x299f31d0, 0xa4093822, 0x03707344, 0x13198a2e, 0x85a308d3, 0x243f6a88,
    0x00000003,
];
// floor(ln 2 * 2^2048), little-endian 32-bit limbs.
const LN2_LIMBS: [u32; 64] = [
    0x5064c18b, 0x5f50b518, 0x1b2db31b, 0x078f735d, 0x6c606cb1, 0xae313cdb, 0xb1e17b9d, 0x955d5179,
    0x17350d2c, 0x0c480a54, 0x5cfe7aa3, 0x074db601, 0x5e148e82, 0x6a9c7f8a, 0x3564a337, 0x25669b33,
    0xd1d6095d, 0x4c1a1e0b, 0x9393514c, 0xcccc4e65, 0xb479cd33, 0xc943e732, 0xdb8990e5, 0x17460775,
    0x1400b396, 0x7d2e23de, 0xfc1efa15, 0xee569d6d, 0x8fe551a2, 0x610d30f8, 0xfb5bfb90, 0x07f4ca11,
    0x0f3fd5c6, 0xda2d97c5, 0x2f20e3a2, 0x655fa187, 0x38303248, 0xf5dfa6bd, 0x9d6548ca, 0x72ce87b1,
    0x7657f74b, 0x256fa0ec, 0xb136603b, 0xb9ea9bc3, 0x317c387e, 0x1acbda11, 0x224ae8c5, 0x3e96ca16,
    0x1169b825, 0x27573b29, 0xc1382144, 0xed2eae35, 0x4afa1b10, 0x559552fb, 0x6debac98, 0xe7b87620,
    0x8baafa2b, 0x8a0d175b, 0x7298b62d, 0x40f34326, 0x03f2f6af, 0xc9e3b398, 0xd1cf79ab, 0xb17217f7,
];
const CONST_SCALE: u32 = 2048;

/// `floor(c * 2^wb)` from a stored constant, if it has enough bits.
fn stored_fixed(limbs: &[u32], wb: u32) -> Option<BigInt> {
    (wb + 8 <= CONST_SCALE).then(|| BigInt::from_slice(num_bigint::Sign::Plus, limbs) >> (CONST_SCALE - wb) as usize)
}

/// Encloses `floor(c * 2^CONST_SCALE) / 2^CONST_SCALE` rounded to `bits + 2` places.
fn stored_constant(limbs: &[u32], bits: u32) -> RatInterval {
    let num = BigInt::from_slice(num_bigint::Sign::Plus, limbs) >> (CONST_SCALE - bits - 2) as usize;
    let hi = &num + 1;
    RatInterval::new(rat::dyadic(num, bits + 2), rat::dyadic(hi, bits + 2))
}

/// Enclosure of pi with width at most `2^-bits`.
pub fn pi(bits: u32) -> RatInterval {
    if bits <= CONST_SCALE - 8 {
        return stored_constant(&PI_LIMBS, bits);
    }
    pi_machin(bits)
}

/// pi = 16 atan(1/5) - 4 atan(1/239), each arctangent bracketed by
/// consecutive partial sums of its alternating series.
pub fn pi_machin(bits: u32) -> RatInterval {
    let a = atan_inv(5, bits + 8);
    let b = atan_inv(239, bits + 8);
    let sixteen = rat::int(16);
    let four = rat::int(4);
    let lo = a.lo() * &sixteen - b.hi() * &four;
    let hi = a.hi() * &sixteen - b.lo() * &four;
    RatInterval::new(lo, hi).round_out(bits + 4)
}

fn atan_inv(k: i64, bits: u32) -> RatInterval {
    let eps = rat::pow2(-(bits as i64));
    let k = rat::int(k);
    let k2 = &k * &k;
    let mut pow = k.recip();
    let mut sum = Rat::zero();
    let mut j: i64 = 0;
    loop {
        let term = &pow / rat::int(2 * j + 1);
        let next = if j % 2 == 0 { &sum + &term } else { &sum - &term };
        if term < eps {
            return RatInterval::spanning(sum, next);
        }
        sum = next;
        pow = &pow / &k2;
        j += 1;
    }
}

fn to_fixed(r: &Rat, wb: u32) -> BigInt {
    rat::floor_scaled(r, wb)
}

/// `sum/2^wb ± ulps/2^wb`, rounded outward to `bits`.
fn from_fixed(sum: BigInt, ulps: BigInt, wb: u32, bits: u32) -> RatInterval {
    let shift = (wb - bits - 2) as usize;
    let lo = (&sum - &ulps) >> shift;
    let hi = -((-(sum + ulps)) >> shift);
    RatInterval::new(rat::dyadic(lo, bits + 2), rat::dyadic(hi, bits + 2))
}

/// Taylor sum of exp on |t| <= 1/2 in fixed point.
fn exp_small(t: &Rat, bits: u32) -> RatInterval {
    let wb = bits + 16;
    let stop = BigInt::one() << 12usize;
    let tf = to_fixed(t, wb);
    let mut term = BigInt::one() << wb as usize;
    let mut sum = BigInt::zero();
    let mut j: i64 = 0;
    loop {
        sum += &term;
        j += 1;
        term = ((&term * &tf) >> wb as usize) / j;
        if term.abs() < stop {
            // each term carries at most 6 ulps of error; the tail is at most
            // twice the first omitted term
            let ulps = BigInt::from(8 * (j + 1)) + (term.abs() + 6) * 2;
            return from_fixed(sum, ulps, wb, bits);
        }
    }
}

/// Largest argument accepted by [`exp_point`]; beyond it the result has more
/// than 1.5 million integer bits.
pub const EXP_ARG_LIMIT: i64 = 1 << 20;

/// Enclosure of `e^r`. Above 1 the width is relative, about `2^-bits` times the
/// value. `None` when `r` exceeds [`EXP_ARG_LIMIT`].
pub fn exp_point(r: &Rat, bits: u32) -> Option<RatInterval> {
    if r.is_zero() {
        return Some(RatInterval::point(Rat::one()));
    }
    let limit = rat::int(EXP_ARG_LIMIT);
    if r > &limit {
        return None;
    }
    if r < &-limit {
        return Some(RatInterval::new(Rat::zero(), rat::pow2(-(bits as i64) - 2)));
    }
    if r.abs() <= rat::int(8) {
        return Some(exp_moderate(r, bits));
    }
    // e^r = 2^n e^t with 0 <= t < ln 2, in fixed point as in reduce_quarter
    let wb = bits + 48;
    let x = rat::floor_scaled(r, wb);
    let l = stored_fixed(&LN2_LIMBS, wb).unwrap_or_else(|| rat::floor_scaled(ln2_series(wb + 2).lo(), wb));
    let nb = x.div_floor(&l);
    let (a, b) = (&nb * &l, &nb * (&l + 1));
    let (lo_nl, hi_nl) = if a <= b { (a, b) } else { (b, a) };
    let t = RatInterval::new(rat::dyadic(&x - hi_nl, wb), rat::dyadic(x + 1 - lo_nl, wb));
    let n = nb.to_i64().unwrap();
    let q = bits + 8;
    let e = RatInterval::new(exp_moderate(t.lo(), q).lo().clone(), exp_moderate(t.hi(), q).hi().clone());
    Some(e.scale(&rat::pow2(n)).round_out(bits + 2))
}

fn exp_moderate(r: &Rat, bits: u32) -> RatInterval {
    if r.is_zero() {
        return RatInterval::point(Rat::one());
    }
    // halve until |t| <= 1/2
    let k = (rat::ilog2(r) + 2).max(0) as u32;
    let t = rat::mul_pow2(r, -(k as i64));
    let wb = bits + 26 + 2 * k;
    let acc = exp_small(&t, wb);
    // exp_small is positive, so squaring the fixed-point endpoints keeps order
    let mut lo = rat::floor_scaled(acc.lo(), wb);
    let mut hi = -rat::floor_scaled(&-acc.hi(), wb);
    for _ in 0..k {
        lo = (&lo * &lo) >> wb as usize;
        hi = -((-(&hi * &hi)) >> wb as usize);
    }
    RatInterval::new(rat::dyadic(lo, wb), rat::dyadic(hi, wb)).round_out(bits + 2)
}

fn atanh_series(z: &Rat, bits: u32) -> RatInterval {
    // |z| <= 1/3 at every call site
    let wb = bits + 16;
    let stop = BigInt::one() << 12usize;
    let zf = to_fixed(z, wb);
    let z2 = (&zf * &zf) >> wb as usize;
    let mut pow = zf;
    let mut sum = BigInt::zero();
    let mut j: i64 = 0;
    loop {
        sum += &pow / (2 * j + 1);
        j += 1;
        pow = (&pow * &z2) >> wb as usize;
        if pow.abs() < stop {
            // geometric tail with ratio <= 1/9, plus 4 ulps per term
            let ulps = BigInt::from(8 * (j + 1)) + (pow.abs() + 4) * 2;
            return from_fixed(sum, ulps, wb, bits);
        }
    }
}

pub fn ln2(bits: u32) -> RatInterval {
    if bits <= CONST_SCALE - 8 {
        return stored_constant(&LN2_LIMBS, bits);
    }
    ln2_series(bits)
}

fn ln2_series(bits: u32) -> RatInterval {
    atanh_series(&rat::ratio(1, 3), bits + 2).scale(&rat::int(2))
}

/// Natural logarithm; `None` for non-positive arguments.
pub fn ln_point(r: &Rat, bits: u32) -> Option<RatInterval> {
    if !r.is_positive() {
        return None;
    }
    if r.is_one() {
        return Some(RatInterval::point(Rat::zero()));
    }
    let k = rat::ilog2(r);
    let m = r / rat::pow2(k);
    let wb = bits + 10 + (64 - k.unsigned_abs().leading_zeros());
    let z = (&m - Rat::one()) / (&m + Rat::one());
    let lnm = atanh_series(&z, wb).scale(&rat::int(2));
    let out = if k == 0 {
        lnm
    } else {
        &lnm + &ln2(wb).scale(&rat::int(k))
    };
    Some(out.round_out(bits + 2))
}

pub fn sqrt_point(r: &Rat, bits: u32) -> Option<RatInterval> {
    if r.is_negative() {
        return None;
    }
    let (lo, hi) = rat::sqrt_bounds(r, bits + 2);
    Some(RatInterval::new(lo, hi))
}

fn sin_taylor(t: &Rat, bits: u32) -> RatInterval {
    // |t| <= 1 at every call site
    let wb = bits + 16;
    let stop = BigInt::one() << 12usize;
    let tf = to_fixed(t, wb);
    let t2 = (&tf * &tf) >> wb as usize;
    let mut term = tf;
    let mut sum = BigInt::zero();
    let mut j: i64 = 1;
    loop {
        sum += &term;
        term = -((&term * &t2) >> wb as usize) / ((2 * j) * (2 * j + 1));
        j += 1;
        if term.abs() < stop {
            let ulps = BigInt::from(8 * (j + 1)) + term.abs() + 4;
            return from_fixed(sum, ulps, wb, bits);
        }
    }
}

fn cos_taylor(t: &Rat, bits: u32) -> RatInterval {
    let wb = bits + 16;
    let stop = BigInt::one() << 12usize;
    let tf = to_fixed(t, wb);
    let t2 = (&tf * &tf) >> wb as usize;
    let mut term = BigInt::one() << wb as usize;
    let mut sum = BigInt::zero();
    let mut j: i64 = 1;
    loop {
        sum += &term;
        term = -((&term * &t2) >> wb as usize) / ((2 * j - 1) * (2 * j));
        j += 1;
        if term.abs() < stop {
            let ulps = BigInt::from(8 * (j + 1)) + term.abs() + 4;
            return from_fixed(sum, ulps, wb, bits);
        }
    }
}

/// sin on an interval inside [-1, 1], where it is increasing.
fn sin_reduced(t: &RatInterval, bits: u32) -> RatInterval {
    let lo = sin_taylor(t.lo(), bits);
    let hi = sin_taylor(t.hi(), bits);
    RatInterval::new(lo.lo().clone(), hi.hi().clone())
}

/// cos on an interval inside [-1, 1].
fn cos_reduced(t: &RatInterval, bits: u32) -> RatInterval {
    let a = cos_taylor(t.lo(), bits);
    let b = cos_taylor(t.hi(), bits);
    let lo = rat::min(a.lo(), b.lo());
    if t.contains_zero() {
        RatInterval::new(lo, Rat::one())
    } else {
        RatInterval::new(lo, rat::max(a.hi(), b.hi()))
    }
}

/// Reduces `r` to `t + n*pi/2` with |t| <= pi/4 + tiny; returns (n mod 4, t).
fn reduce_quarter(r: &Rat, bits: u32) -> (u8, RatInterval) {
    // fixed point at wb bits: x <= r 2^wb < x + 1 and p <= pi 2^wb < p + 1
    let m = (rat::ilog2(r) + 2).max(0) as u32;
    let wb = bits + 16 + m;
    let x = rat::floor_scaled(r, wb);
    let p = stored_fixed(&PI_LIMBS, wb).unwrap_or_else(|| rat::floor_scaled(pi_machin(wb + 2).lo(), wb));
    let x2 = &x << 1usize;
    let n = (&x2 + (&p >> 1usize)).div_floor(&p);
    let (a, b) = (&n * &p, &n * (&p + 1));
    let (lo_np, hi_np) = if a <= b { (a, b) } else { (b, a) };
    let t = RatInterval::new(rat::dyadic(&x2 - hi_np, wb + 1), rat::dyadic(x2 + 2 - lo_np, wb + 1));
    let q = n.mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0);
    (q, t.round_out(bits + 8))
}

pub fn sin_point(r: &Rat, bits: u32) -> RatInterval {
    if r.is_zero() {
        return RatInterval::point(Rat::zero());
    }
    let (q, t) = reduce_quarter(r, bits);
    let wb = bits + 4;
    clamp_unit(match q {
        0 => sin_reduced(&t, wb),
        1 => cos_reduced(&t, wb),
        2 => -sin_reduced(&t, wb),
        _ => -cos_reduced(&t, wb),
    })
}

pub fn cos_point(r: &Rat, bits: u32) -> RatInterval {
    if r.is_zero() {
        return RatInterval::point(Rat::one());
    }
    let (q, t) = reduce_quarter(r, bits);
    let wb = bits + 4;
    clamp_unit(match q {
        0 => cos_reduced(&t, wb),
        1 => -sin_reduced(&t, wb),
        2 => -cos_reduced(&t, wb),
        _ => sin_reduced(&t, wb),
    })
}

fn clamp_unit(x: RatInterval) -> RatInterval {
    let one = Rat::one();
    let lo = rat::max(x.lo(), &-one.clone());
    let hi = rat::min(x.hi(), &one);
    RatInterval::new(lo, hi)
}

/// `None` when the upper end exceeds [`EXP_ARG_LIMIT`].
pub fn exp_interval(x: &RatInterval, bits: u32) -> Option<RatInterval> {
    let lo = exp_point(x.lo(), bits)?;
    if x.is_point() {
        return Some(lo);
    }
    let hi = exp_point(x.hi(), bits)?;
    Some(RatInterval::new(lo.lo().clone(), hi.hi().clone()))
}

/// `None` unless the whole interval is strictly positive.
pub fn ln_interval(x: &RatInterval, bits: u32) -> Option<RatInterval> {
    let lo = ln_point(x.lo(), bits)?;
    if x.is_point() {
        return Some(lo);
    }
    let hi = ln_point(x.hi(), bits)?;
    Some(RatInterval::new(lo.lo().clone(), hi.hi().clone()))
}

/// Encloses sqrt over the non-negative part of `x`; `None` if `x` lies
/// entirely below zero.
pub fn sqrt_interval(x: &RatInterval, bits: u32) -> Option<RatInterval> {
    if x.hi().is_negative() {
        return None;
    }
    let lo = if x.lo().is_negative() {
        Rat::zero()
    } else {
        sqrt_point(x.lo(), bits)?.lo().clone()
    };
    let hi = sqrt_point(x.hi(), bits)?.hi().clone();
    Some(RatInterval::new(lo, hi))
}

#[derive(Clone, Copy)]
enum Trig {
    Sin,
    Cos,
}

fn trig_interval(x: &RatInterval, bits: u32, which: Trig) -> RatInterval {
    let point = |r: &Rat| match which {
        Trig::Sin => sin_point(r, bits),
        Trig::Cos => cos_point(r, bits),
    };
    if x.is_point() {
        return point(x.lo());
    }
    let unit = RatInterval::new(-Rat::one(), Rat::one());
    if x.width() >= rat::int(7) {
        return unit;
    }
    let mut out = point(x.lo()).hull(&point(x.hi()));
    // extrema sit at (phi + m) * pi with value (-1)^m
    let phi = match which {
        Trig::Sin => rat::ratio(1, 2),
        Trig::Cos => Rat::zero(),
    };
    let p = pi(bits + 16);
    let pm = p.mid();
    let lo_turns: Rat = x.lo() / &pm - &phi;
    let hi_turns: Rat = x.hi() / &pm - &phi;
    let first: BigInt = lo_turns.floor().to_integer() - 1;
    let last: BigInt = hi_turns.ceil().to_integer() + 1;
    let mut m = first;
    while m <= last {
        let coef = &phi + Rat::from_integer(m.clone());
        let c = p.scale(&coef);
        if c.intersects(x) {
            let v = if m.is_even() { Rat::one() } else { -Rat::one() };
            out = out.hull(&RatInterval::point(v));
        }
        m += 1;
    }
    clamp_unit(out)
}

pub fn sin_interval(x: &RatInterval, bits: u32) -> RatInterval {
    trig_interval(x, bits, Trig::Sin)
}

pub fn cos_interval(x: &RatInterval, bits: u32) -> RatInterval {
    trig_interval(x, bits, Trig::Cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};
    use core::str::FromStr;

    // Independent high-precision decimal references (50 digits, truncated).
    fn dec(s: &str) -> Rat {
        let (i, f) = s.split_once('.').unwrap();
        let neg = i.starts_with('-');
        let digits = alloc::format!("{}{}", i.trim_start_matches('-'), f);
        let n = BigInt::from_str(&digits).unwrap();
        let d = num_traits::pow(BigInt::from(10), f.len());
        let v = Rat::new(n, d);
        if neg {
            -v
        } else {
            v
        }
    }

    fn near(enc: &RatInterval, reference: &str, bits: u32) {
        let r = dec(reference);
        let slack = ratio(1, 10i64.pow(15));
        let widened = RatInterval::new(enc.lo() - &slack, enc.hi() + &slack);
        assert!(widened.contains(&r), "{} does not contain {}", enc, reference);
        assert!(enc.width() <= rat::pow2(-(bits as i64)), "too wide: {}", enc);
    }

    #[test]
    fn machin_agrees_with_constant() {
        let m = pi_machin(2100);
        let c = pi(2000);
        assert!(m.intersects(&c));
        let l = ln2(2000);
        assert!(l.intersects(&ln2_series(2100)));
        assert!(l.width() <= rat::pow2(-2000));
        assert!(m.width() <= rat::pow2(-2100));
        assert!(c.width() <= rat::pow2(-2000));
    }

    #[test]
    fn exp_values() {
        near(&exp_point(&int(1), 40).unwrap(), "2.71828182845904523536028747135266249775724709369995", 40);
        near(&exp_point(&int(-3), 40).unwrap(), "0.04978706836786394297934241565006177663169959218842", 40);
        near(&exp_point(&ratio(1, 3), 40).unwrap(), "1.39561242508608952862812531960258683759790651519940", 40);
        near(&exp_point(&int(-20), 40).unwrap(), "0.000000002061153622438557827965940380155820976375807", 40);
        assert!(exp_point(&int(EXP_ARG_LIMIT + 1), 40).is_none());
        assert!(exp_point(&int(-EXP_ARG_LIMIT - 1), 40).unwrap().contains_zero());
    }

    #[test]
    fn exp_large_arguments_are_relative() {
        // e^100 = 2.688117141816135448...e43
        let e = exp_point(&int(100), 60).unwrap();
        let reference = dec("26881171418161354484126255515800135873611118.773741922415191608");
        assert!(e.contains(&reference), "{}", e);
        assert!(e.width() <= &reference * rat::pow2(-58));
        let big = exp_point(&int(50_000), 64).unwrap();
        assert!(rat::ilog2(big.lo()) == 72_134);
    }

    #[test]
    fn ln_values() {
        near(&ln_point(&int(2), 40).unwrap(), "0.69314718055994530941723212145817656807550013436025", 40);
        near(&ln_point(&int(10), 40).unwrap(), "2.30258509299404568401799145468436420760110148862877", 40);
        near(&ln_point(&ratio(1, 7), 40).unwrap(), "-1.94591014905531330510535274344317972963708472958186", 40);
        assert!(ln_point(&int(0), 40).is_none());
    }

    #[test]
    fn trig_values() {
        near(&sin_point(&int(1), 40), "0.84147098480789650665250232163029899962256306079837", 40);
        near(&cos_point(&int(1), 40), "0.54030230586813971740093660744297660373231042061792", 40);
        near(&sin_point(&int(100), 40), "-0.50636564110975879365655761045978543206503272129065", 40);
        near(&cos_point(&int(-7), 40), "0.75390225434330463814119752171918201221831339146012", 40);
        near(&sin_point(&int(1000000), 40), "-0.34999350217129295211765248678077146906140660532871", 40);
    }

    #[test]
    fn sin_interval_catches_extrema() {
        let x = RatInterval::new(int(1), int(2));
        let s = sin_interval(&x, 30);
        assert_eq!(s.hi(), &int(1));
        let c = cos_interval(&RatInterval::new(int(3), int(4)), 30);
        assert_eq!(c.lo(), &int(-1));
        let w = sin_interval(&RatInterval::new(int(0), int(10)), 30);
        assert_eq!(w, RatInterval::new(int(-1), int(1)));
    }
}
