use std::fmt;

use num_bigint::{BigInt, BigUint};

use super::real::PrecisionReal;

/// Complex value with independently rounded components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionComplex {
    pub re: PrecisionReal,
    pub im: PrecisionReal,
}

impl PrecisionComplex {
    pub fn new(re: PrecisionReal, im: PrecisionReal) -> Self {
        PrecisionComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(PrecisionReal::zero(prec), PrecisionReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(PrecisionReal::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(PrecisionReal::zero(prec), PrecisionReal::one(prec))
    }

    pub fn from_real(re: PrecisionReal) -> Self {
        let prec = re.prec();
        Self::new(re, PrecisionReal::zero(prec))
    }

    pub fn from_i64(re: i64, im: i64, prec: u32) -> Self {
        Self::new(PrecisionReal::from_i64(re, prec), PrecisionReal::from_i64(im, prec))
    }

    pub fn from_bigints(re: &BigInt, im: &BigInt, prec: u32) -> Self {
        Self::new(
            PrecisionReal::from_bigint(re, prec),
            PrecisionReal::from_bigint(im, prec),
        )
    }

    /// Precision of the real part; both parts share it for values built here.
    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn round_to(&self, prec: u32) -> Self {
        Self::new(self.re.round_to(prec), self.im.round_to(prec))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn add_prec(&self, o: &Self, prec: u32) -> Self {
        Self::new(self.re.add_prec(&o.re, prec), self.im.add_prec(&o.im, prec))
    }

    pub fn sub_prec(&self, o: &Self, prec: u32) -> Self {
        Self::new(self.re.sub_prec(&o.re, prec), self.im.sub_prec(&o.im, prec))
    }

    /// `(ac - bd) + (ad + bc)i`; each product and each sum rounded to `prec`.
    pub fn mul_prec(&self, o: &Self, prec: u32) -> Self {
        let ac = self.re.mul_prec(&o.re, prec);
        let bd = self.im.mul_prec(&o.im, prec);
        let ad = self.re.mul_prec(&o.im, prec);
        let bc = self.im.mul_prec(&o.re, prec);
        Self::new(ac.sub_prec(&bd, prec), ad.add_prec(&bc, prec))
    }

    pub fn scale_prec(&self, k: &PrecisionReal, prec: u32) -> Self {
        Self::new(self.re.mul_prec(k, prec), self.im.mul_prec(k, prec))
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Self {
        Self::new(self.re.mul_int(k, prec), self.im.mul_int(k, prec))
    }

    pub fn mul_uint(&self, k: &BigUint, prec: u32) -> Self {
        Self::new(self.re.mul_uint(k, prec), self.im.mul_uint(k, prec))
    }

    pub fn norm_sqr(&self, prec: u32) -> PrecisionReal {
        let a = self.re.mul_prec(&self.re, prec);
        let b = self.im.mul_prec(&self.im, prec);
        a.add_prec(&b, prec)
    }

    pub fn abs(&self, prec: u32) -> PrecisionReal {
        self.norm_sqr(prec + 8).sqrt_abs(prec)
    }

    /// `None` when the divisor is zero.
    pub fn checked_div_prec(&self, o: &Self, prec: u32) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let w = prec + 16;
        let den = o.norm_sqr(w);
        let re = self.re.mul_prec(&o.re, w).add_prec(&self.im.mul_prec(&o.im, w), w);
        let im = self.im.mul_prec(&o.re, w).sub_prec(&self.re.mul_prec(&o.im, w), w);
        Some(Self::new(re.div_prec(&den, prec), im.div_prec(&den, prec)))
    }

    pub fn div_real(&self, k: &PrecisionReal, prec: u32) -> Option<Self> {
        Some(Self::new(
            self.re.checked_div_prec(k, prec)?,
            self.im.checked_div_prec(k, prec)?,
        ))
    }

    /// log2 of `max(|re|, |im|)`; within half a bit of log2 `|z|`.
    pub fn log2_abs_max(&self) -> f64 {
        self.re.log2_abs().max(self.im.log2_abs())
    }
}

impl fmt::Display for PrecisionComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.re, self.im)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl std::ops::$trait<&PrecisionComplex> for &PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: &PrecisionComplex) -> PrecisionComplex {
                self.$impl(rhs, self.prec().max(rhs.prec()))
            }
        }
    };
}

binop!(Add, add, add_prec);
binop!(Sub, sub, sub_prec);
binop!(Mul, mul, mul_prec);
