//! Binary floating point with a per-value mantissa width and an `i64` exponent.
//!
//! Every arithmetic result is rounded once, to nearest with ties to even. A
//! nonzero value keeps exactly `prec` mantissa bits with the top bit set, so a
//! value at a given precision has exactly one representation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest mantissa width accepted by the constructors.
pub const MIN_PRECISION: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// `sign * mantissa * 2^exponent`, rounded to `prec` bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionReal {
    sign: Sign,
    mantissa: BigUint,
    exponent: i64,
    prec: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRealError(pub String);

impl fmt::Display for ParseRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid hexadecimal float: {}", self.0)
    }
}

impl std::error::Error for ParseRealError {}

fn check_prec(prec: u32) {
    assert!(
        prec >= MIN_PRECISION,
        "precision must be at least {MIN_PRECISION} bits, got {prec}"
    );
}

impl PrecisionReal {
    pub fn zero(prec: u32) -> Self {
        check_prec(prec);
        PrecisionReal {
            sign: Sign::Zero,
            mantissa: BigUint::zero(),
            exponent: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    /// Rounds `(-1)^negative * magnitude * 2^exponent` to `prec` bits.
    pub fn from_parts(negative: bool, magnitude: BigUint, exponent: i64, prec: u32) -> Self {
        check_prec(prec);
        if magnitude.is_zero() {
            return Self::zero(prec);
        }
        let bits = magnitude.bits();
        let p = prec as u64;
        let (mut mant, mut exp) = if bits <= p {
            let shift = p - bits;
            (magnitude << shift, exponent - shift as i64)
        } else {
            let shift = bits - p;
            let q = &magnitude >> shift;
            let rem = &magnitude - (&q << shift);
            let half = BigUint::one() << (shift - 1);
            let round_up = match rem.cmp(&half) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => q.is_odd(),
            };
            (if round_up { q + 1u32 } else { q }, exponent + shift as i64)
        };
        if mant.bits() > p {
            mant >>= 1u32;
            exp += 1;
        }
        PrecisionReal {
            sign: if negative { Sign::Neg } else { Sign::Pos },
            mantissa: mant,
            exponent: exp,
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0, prec)
    }

    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        Self::from_parts(false, v.clone(), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.sign() == BigSign::Minus, v.magnitude().clone(), 0, prec)
    }

    /// Exact conversion when `prec >= 53`; non-finite input maps to `None`.
    pub fn from_f64(v: f64, prec: u32) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero(prec));
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::from_parts(negative, BigUint::from(mant), exp, prec))
    }

    /// Reads an exact decimal string such as `-12.5` or `3e-4`, rounding once.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self, ParseRealError> {
        let err = || ParseRealError(s.to_string());
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (num, exp10) = match body.find(['e', 'E']) {
            Some(idx) => (&body[..idx], body[idx + 1..].parse::<i64>().map_err(|_| err())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match num.split_once('.') {
            Some((a, b)) => (a, b),
            None => (num, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let digits = BigUint::parse_bytes(digits.as_bytes(), 10).ok_or_else(err)?;
        let scale = exp10
            .checked_sub(frac_part.len() as i64)
            .filter(|e| e.unsigned_abs() <= 100_000)
            .ok_or_else(err)?;
        let ten = BigUint::from(10u32);
        let v = if scale >= 0 {
            Self::from_parts(negative, digits * ten.pow(scale as u32), 0, prec)
        } else {
            let num = Self::from_parts(negative, digits, 0, prec + 64);
            let den = Self::from_parts(false, ten.pow((-scale) as u32), 0, prec + 64);
            num.div_prec(&den, prec)
        };
        Ok(v)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::Neg
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Position one past the highest set bit: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    pub fn round_to(&self, prec: u32) -> Self {
        if prec == self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(prec);
        }
        Self::from_parts(self.is_negative(), self.mantissa.clone(), self.exponent, prec)
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.sign = r.sign.negate();
        r
    }

    pub fn abs(&self) -> Self {
        let mut r = self.clone();
        if r.sign == Sign::Neg {
            r.sign = Sign::Pos;
        }
        r
    }

    fn signed_add(&self, other: &Self, negate_other: bool, prec: u32) -> Self {
        let other_sign = if negate_other { other.sign.negate() } else { other.sign };
        if other.is_zero() {
            return self.round_to(prec);
        }
        if self.is_zero() {
            let mut r = other.round_to(prec);
            r.sign = other_sign;
            return r;
        }
        let (hi, hi_sign, lo, lo_sign) = if self.top() >= other.top() {
            (self, self.sign, other, other_sign)
        } else {
            (other, other_sign, self, self.sign)
        };
        // Collapse an operand lying wholly below both the rounding position and
        // hi's last bit into a sticky bit; the rounded sum is unchanged.
        let floor = hi.exponent.min(hi.top() - prec as i64 - 2) - 2;
        let (lo_mant, lo_exp) = if lo.top() <= floor {
            (BigUint::one(), floor - 1)
        } else {
            (lo.mantissa.clone(), lo.exponent)
        };
        let base = hi.exponent.min(lo_exp);
        let a = &hi.mantissa << (hi.exponent - base) as u64;
        let b = lo_mant << (lo_exp - base) as u64;
        if hi_sign == lo_sign {
            Self::from_parts(hi_sign == Sign::Neg, a + b, base, prec)
        } else {
            match a.cmp(&b) {
                Ordering::Equal => Self::zero(prec),
                Ordering::Greater => Self::from_parts(hi_sign == Sign::Neg, a - b, base, prec),
                Ordering::Less => Self::from_parts(lo_sign == Sign::Neg, b - a, base, prec),
            }
        }
    }

    pub fn add_prec(&self, other: &Self, prec: u32) -> Self {
        self.signed_add(other, false, prec)
    }

    pub fn sub_prec(&self, other: &Self, prec: u32) -> Self {
        self.signed_add(other, true, prec)
    }

    pub fn mul_prec(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        Self::from_parts(
            self.sign != other.sign,
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            prec,
        )
    }

    /// Multiplies by an exact integer with a single rounding.
    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Self {
        if self.is_zero() || k.is_zero() {
            return Self::zero(prec);
        }
        let neg = self.is_negative() != k.is_negative();
        Self::from_parts(neg, &self.mantissa * k.magnitude(), self.exponent, prec)
    }

    pub fn mul_uint(&self, k: &BigUint, prec: u32) -> Self {
        if self.is_zero() || k.is_zero() {
            return Self::zero(prec);
        }
        Self::from_parts(self.is_negative(), &self.mantissa * k, self.exponent, prec)
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        let mut r = self.clone();
        if !r.is_zero() {
            r.exponent += k;
        }
        r
    }

    pub fn checked_div_prec(&self, other: &Self, prec: u32) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(prec));
        }
        let a_bits = self.mantissa.bits() as i64;
        let b_bits = other.mantissa.bits() as i64;
        let shift = (prec as i64 + 2 + b_bits - a_bits).max(0);
        let (q, r) = (&self.mantissa << shift as u64).div_rem(&other.mantissa);
        let sticky = if r.is_zero() { 0u32 } else { 1u32 };
        let mant = (q << 1u32) | BigUint::from(sticky);
        Some(Self::from_parts(
            self.sign != other.sign,
            mant,
            self.exponent - other.exponent - shift - 1,
            prec,
        ))
    }

    /// Panics on division by zero; use [`checked_div_prec`](Self::checked_div_prec) otherwise.
    pub fn div_prec(&self, other: &Self, prec: u32) -> Self {
        self.checked_div_prec(other, prec)
            .expect("PrecisionReal division by zero")
    }

    /// Divides by a small exact integer.
    pub fn div_uint(&self, k: u64, prec: u32) -> Self {
        let d = Self::from_parts(false, BigUint::from(k), 0, 64.max(MIN_PRECISION));
        self.div_prec(&d, prec)
    }

    /// Square root of `|self|`.
    pub fn sqrt_abs(&self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::zero(prec);
        }
        let bits = self.mantissa.bits() as i64;
        let mut shift = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mantissa << shift as u64;
        let q = m.sqrt();
        let sticky = if &q * &q == m { 0u32 } else { 1u32 };
        let mant = (q << 1u32) | BigUint::from(sticky);
        Self::from_parts(false, mant, (self.exponent - shift) / 2 - 1, prec)
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let rank = |s: Sign| match s {
            Sign::Neg => 0,
            Sign::Zero => 1,
            Sign::Pos => 2,
        };
        match rank(self.sign).cmp(&rank(other.sign)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mag = self.cmp_abs(other);
        if self.is_negative() {
            mag.reverse()
        } else {
            mag
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let base = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - base) as u64;
        let b = &other.mantissa << (other.exponent - base) as u64;
        a.cmp(&b)
    }

    /// log2 of the magnitude, usable far outside the `f64` exponent range.
    /// Returns negative infinity for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mantissa.bits();
        let lead = if bits > 60 {
            (&self.mantissa >> (bits - 60)).to_u64().unwrap_or(u64::MAX)
        } else {
            self.mantissa.to_u64().unwrap_or(u64::MAX)
        };
        let lead_bits = bits.min(60) as f64;
        (lead as f64).log2() - lead_bits + self.top() as f64
    }

    /// Nearest `f64`; saturates to infinity and flushes to zero outside its range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round_to(53);
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let top = r.top();
        if top > 1024 {
            return sign * f64::INFINITY;
        }
        if top < -1080 {
            return sign * 0.0;
        }
        let m = r.mantissa.to_u64().expect("53-bit mantissa") as f64;
        // two-step scaling keeps intermediate powers inside the normal range
        let e = r.exponent;
        let half = e / 2;
        sign * m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// Nearest integer, ties to even.
    pub fn round_to_integer(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let mag = if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            let shift = (-self.exponent) as u64;
            if shift > self.mantissa.bits() + 1 {
                BigUint::zero()
            } else {
                let q = &self.mantissa >> shift;
                let rem = &self.mantissa - (&q << shift);
                let half = BigUint::one() << (shift - 1);
                match rem.cmp(&half) {
                    Ordering::Greater => q + 1u32,
                    Ordering::Equal if q.is_odd() => q + 1u32,
                    _ => q,
                }
            }
        };
        let sign = if self.is_negative() {
            BigSign::Minus
        } else {
            BigSign::Plus
        };
        BigInt::from_biguint(sign, mag)
    }

    /// Exact value when it is an integer.
    pub fn to_integer_exact(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.exponent < 0 {
            let tz = self.mantissa.trailing_zeros().unwrap_or(0);
            if (tz as i64) < -self.exponent {
                return None;
            }
        }
        Some(self.round_to_integer())
    }

    /// C99-style hexadecimal literal: `0x1.8p+1`, `-0x1p-3`, zero as `0x0p+0`.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0p+0".to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let p = self.prec as u64;
        let exp = self.exponent + p as i64 - 1;
        let frac_bits = p - 1;
        let frac = &self.mantissa - (BigUint::one() << frac_bits);
        let nibbles = frac_bits.div_ceil(4);
        let mut digits = String::new();
        if nibbles > 0 {
            let aligned = frac << (nibbles * 4 - frac_bits);
            let hex = aligned.to_str_radix(16);
            digits = "0".repeat(nibbles as usize - hex.len()) + &hex;
            while digits.ends_with('0') {
                digits.pop();
            }
        }
        let esign = if exp < 0 { '-' } else { '+' };
        if digits.is_empty() {
            format!("{sign}0x1p{esign}{}", exp.unsigned_abs())
        } else {
            format!("{sign}0x1.{digits}p{esign}{}", exp.unsigned_abs())
        }
    }

    /// Parses a hexadecimal float literal and rounds it to `prec` bits.
    pub fn parse_hex(s: &str, prec: u32) -> Result<Self, ParseRealError> {
        let err = || ParseRealError(s.chars().take(64).collect());
        let (negative, rest) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let rest = rest
            .strip_prefix("0x")
            .or_else(|| rest.strip_prefix("0X"))
            .ok_or_else(err)?;
        let (num, exp) = rest.split_once(['p', 'P']).ok_or_else(err)?;
        let (int_part, frac_part) = match num.split_once('.') {
            Some((a, b)) => (a, b),
            None => (num, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_hexdigit()) {
            return Err(err());
        }
        let exp_digits = exp.strip_prefix(['+', '-']).unwrap_or(exp);
        if exp_digits.is_empty() || !exp_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let exp: i64 = exp.parse().map_err(|_| err())?;
        let digits = format!("{int_part}{frac_part}");
        let mag = BigUint::parse_bytes(digits.as_bytes(), 16).ok_or_else(err)?;
        // keep exponents far from i64 overflow in later arithmetic
        let frac_shift = 4 * frac_part.len() as i64;
        let exponent = exp.checked_sub(frac_shift).ok_or_else(err)?;
        if exponent.unsigned_abs() > (1u64 << 60) {
            return Err(err());
        }
        Ok(Self::from_parts(negative, mag, exponent, prec))
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigUint::from(10u32);
        let lower = ten.pow(digits as u32 - 1);
        let upper = ten.pow(digits as u32);
        let scaled = |e10: i64| -> BigUint {
            let k = digits as i64 - 1 - e10;
            let mut num = self.mantissa.clone();
            let mut den = BigUint::one();
            if k >= 0 {
                num *= ten.pow(k as u32);
            } else {
                den *= ten.pow((-k) as u32);
            }
            if self.exponent >= 0 {
                num <<= self.exponent as u64;
            } else {
                den <<= (-self.exponent) as u64;
            }
            let (q, r) = num.div_rem(&den);
            if (r << 1u32) >= den {
                q + 1u32
            } else {
                q
            }
        };
        let mut n = scaled(e10);
        for _ in 0..3 {
            if n >= upper {
                e10 += 1;
                n = scaled(e10);
            } else if n < lower {
                e10 -= 1;
                n = scaled(e10);
            } else {
                break;
            }
        }
        let s = n.to_str_radix(10);
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

impl fmt::Display for PrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl std::ops::$trait<&PrecisionReal> for &PrecisionReal {
            type Output = PrecisionReal;
            fn $method(self, rhs: &PrecisionReal) -> PrecisionReal {
                self.$impl(rhs, self.prec.max(rhs.prec))
            }
        }
    };
}

binop!(Add, add, add_prec);
binop!(Sub, sub, sub_prec);
binop!(Mul, mul, mul_prec);
binop!(Div, div, div_prec);

impl std::ops::Neg for &PrecisionReal {
    type Output = PrecisionReal;
    fn neg(self) -> PrecisionReal {
        PrecisionReal::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> PrecisionReal {
        PrecisionReal::from_f64(v, 53).unwrap()
    }

    #[test]
    fn hex_format_examples() {
        assert_eq!(r(3.0).to_hex(), "0x1.8p+1");
        assert_eq!(r(1.0).to_hex(), "0x1p+0");
        assert_eq!(r(-0.125).to_hex(), "-0x1p-3");
        assert_eq!(PrecisionReal::zero(64).to_hex(), "0x0p+0");
        assert_eq!(r(0.1).to_hex(), "0x1.999999999999ap-4");
    }

    #[test]
    fn hex_parse_rounds_to_target() {
        let x = PrecisionReal::parse_hex("0x1.fffp+0", 4).unwrap();
        assert_eq!(x.to_hex(), "0x1p+1");
        // tie goes to even
        let y = PrecisionReal::parse_hex("0x1.18p+0", 4).unwrap();
        assert_eq!(y.to_hex(), "0x1.2p+0");
        let z = PrecisionReal::parse_hex("0x1.08p+0", 4).unwrap();
        assert_eq!(z.to_hex(), "0x1p+0");
        assert!(PrecisionReal::parse_hex("0x1.8", 8).is_err());
        assert!(PrecisionReal::parse_hex("1.8p+1", 8).is_err());
        assert!(PrecisionReal::parse_hex("0x.p+1", 8).is_err());
        assert!(PrecisionReal::parse_hex("0x1p+", 8).is_err());
        assert!(PrecisionReal::parse_hex("-0x0p+0", 8).unwrap().is_zero());
    }

    #[test]
    fn arithmetic_matches_f64_at_53_bits() {
        let vals = [1.5, -2.25, 1e-30, std::f64::consts::PI, -7e12, 0.1, 1.0 / 3.0];
        for &a in &vals {
            for &b in &vals {
                assert_eq!((&r(a) + &r(b)).to_f64(), a + b, "{a}+{b}");
                assert_eq!((&r(a) - &r(b)).to_f64(), a - b, "{a}-{b}");
                assert_eq!((&r(a) * &r(b)).to_f64(), a * b, "{a}*{b}");
                assert_eq!((&r(a) / &r(b)).to_f64(), a / b, "{a}/{b}");
            }
            assert_eq!(r(a).sqrt_abs(53).to_f64(), a.abs().sqrt());
        }
    }

    #[test]
    fn far_apart_addition_keeps_sticky_bit() {
        // 1 + 2^-200 at 53 bits rounds to 1; 1 + 2^-53 + 2^-200 must round up.
        let one = PrecisionReal::one(200);
        let tiny = PrecisionReal::one(53).mul_pow2(-200);
        assert_eq!(one.add_prec(&tiny, 53).to_f64(), 1.0);
        let half_ulp = PrecisionReal::one(53).mul_pow2(-53);
        let a = one.add_prec(&half_ulp, 200);
        assert_eq!(a.add_prec(&tiny, 53).to_hex(), "0x1.0000000000001p+0");
        assert_eq!(a.sub_prec(&tiny, 53).to_hex(), "0x1p+0");
    }

    #[test]
    fn round_to_integer_ties_even() {
        assert_eq!(r(2.5).round_to_integer(), BigInt::from(2));
        assert_eq!(r(3.5).round_to_integer(), BigInt::from(4));
        assert_eq!(r(-1.75).round_to_integer(), BigInt::from(-2));
        assert_eq!(r(0.25).round_to_integer(), BigInt::from(0));
        assert_eq!(r(1e-300).round_to_integer(), BigInt::from(0));
        assert_eq!(r(12.0).to_integer_exact(), Some(BigInt::from(12)));
        assert_eq!(r(12.5).to_integer_exact(), None);
    }

    #[test]
    fn sci_formatting() {
        assert_eq!(r(1234.5).to_sci(3), "1.23e3");
        assert_eq!(r(-0.000125).to_sci(2), "-1.3e-4");
        assert_eq!(r(1.0).to_sci(1), "1e0");
        assert_eq!(r(9.99).to_sci(2), "1.0e1");
        let huge = PrecisionReal::one(64).mul_pow2(4000);
        assert!(huge.to_sci(5).ends_with("e1204"));
    }

    #[test]
    fn decimal_parse() {
        let x = PrecisionReal::parse_decimal("0.1", 53).unwrap();
        assert_eq!(x.to_f64(), 0.1);
        assert_eq!(PrecisionReal::parse_decimal("-2.5e3", 53).unwrap().to_f64(), -2500.0);
        assert!(PrecisionReal::parse_decimal("abc", 53).is_err());
    }

    #[test]
    fn log2_of_huge_values() {
        let x = PrecisionReal::from_i64(3, 64).mul_pow2(1 << 40);
        let expected = (1u64 << 40) as f64 + 3f64.log2();
        assert!((x.log2_abs() - expected).abs() < 1e-6);
    }
}
