//! Truncated power series over normalized coefficients.
//!
//! A series of degree bound `m` stores `a_0..=a_m` and denotes
//! `sum_k a_k t^k / k!`. In this basis, `e^{λt}` has `a_k = λ^k`,
//! differentiation is a left shift and integration a right shift.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rayon::prelude::*;

use super::complex::PrecisionComplex;
use super::real::PrecisionReal;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedSeries {
    coeffs: Vec<PrecisionComplex>,
    prec: u32,
}

/// Rows `0..=m` of Pascal's triangle.
fn binomial_rows(m: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut row = vec![BigUint::one(); k + 1];
        for j in 1..k {
            row[j] = &rows[k - 1][j - 1] + &rows[k - 1][j];
        }
        rows.push(row);
    }
    rows
}

impl NormalizedSeries {
    pub fn zero(degree_bound: usize, prec: u32) -> Self {
        NormalizedSeries {
            coeffs: vec![PrecisionComplex::zero(prec); degree_bound + 1],
            prec,
        }
    }

    /// Rounds every coefficient to `prec`. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<PrecisionComplex>, prec: u32) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        let coeffs = coeffs.into_iter().map(|c| c.round_to(prec)).collect();
        NormalizedSeries { coeffs, prec }
    }

    pub fn constant(value: PrecisionComplex, degree_bound: usize, prec: u32) -> Self {
        let mut s = Self::zero(degree_bound, prec);
        s.coeffs[0] = value.round_to(prec);
        s
    }

    /// `e^{λt}`: `a_k = λ^k` by repeated multiplication, rounding at each step.
    pub fn exp(lambda: &PrecisionComplex, degree_bound: usize, prec: u32) -> Self {
        let lambda = lambda.round_to(prec);
        let mut coeffs = Vec::with_capacity(degree_bound + 1);
        let mut power = PrecisionComplex::one(prec);
        for _ in 0..=degree_bound {
            let next = power.mul_prec(&lambda, prec);
            coeffs.push(power);
            power = next;
        }
        NormalizedSeries { coeffs, prec }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[PrecisionComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &PrecisionComplex {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<PrecisionComplex> {
        self.coeffs
    }

    fn check_compatible(&self, other: &Self, op: &str) -> Result<()> {
        if self.prec != other.prec {
            return Err(Error::Config(format!(
                "{op}: precision mismatch ({} vs {})",
                self.prec, other.prec
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other, "series_add")?;
        if self.degree_bound() != other.degree_bound() {
            return Err(Error::Config(format!(
                "series_add: degree bound mismatch ({} vs {})",
                self.degree_bound(),
                other.degree_bound()
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add_prec(b, self.prec))
            .collect();
        Ok(NormalizedSeries {
            coeffs,
            prec: self.prec,
        })
    }

    /// Product truncated to degree `m`:
    /// `c_k = sum_j binom(k, j) a_j b_{k-j}`, summed in ascending `j`.
    /// Missing input coefficients count as zero.
    pub fn mul(&self, other: &Self, m: usize) -> Result<Self> {
        self.check_compatible(other, "series_mul")?;
        let p = self.prec;
        let rows = binomial_rows(m);
        let coeffs = (0..=m)
            .into_par_iter()
            .map(|k| {
                let mut acc = PrecisionComplex::zero(p);
                #[allow(clippy::needless_range_loop)]
                for j in 0..=k {
                    let (Some(a), Some(b)) = (self.coeffs.get(j), other.coeffs.get(k - j)) else {
                        continue;
                    };
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = a.mul_uint(&rows[k][j], p).mul_prec(b, p);
                    acc = acc.add_prec(&term, p);
                }
                acc
            })
            .collect();
        Ok(NormalizedSeries { coeffs, prec: p })
    }

    /// `sum_k a_k t0^k / k!`, ascending `k`, with `t0^k/k!` built incrementally.
    pub fn eval(&self, t0: &PrecisionReal) -> PrecisionComplex {
        let p = self.prec;
        let t0 = t0.round_to(p);
        let mut acc = PrecisionComplex::zero(p);
        let mut term = PrecisionReal::one(p);
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                term = term.mul_prec(&t0, p).div_uint(k as u64, p);
            }
            acc = acc.add_prec(&a.scale_prec(&term, p), p);
        }
        acc
    }

    /// `t -> c t`: `a_k <- a_k c^k`.
    pub fn scale_time(&self, c: &BigUint) -> Self {
        let p = self.prec;
        let mut power = BigUint::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k > 0 {
                    power *= c;
                }
                a.mul_uint(&power, p)
            })
            .collect();
        NormalizedSeries { coeffs, prec: p }
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: &PrecisionComplex) -> Self {
        let p = self.prec;
        NormalizedSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul_prec(k, p)).collect(),
            prec: p,
        }
    }

    /// Drops coefficients above `m` or pads with zeros, without rounding.
    pub fn truncated(&self, m: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(m + 1).cloned().collect();
        coeffs.resize(m + 1, PrecisionComplex::zero(self.prec));
        NormalizedSeries {
            coeffs,
            prec: self.prec,
        }
    }

    pub fn rounded(&self, prec: u32) -> Self {
        NormalizedSeries {
            coeffs: self.coeffs.iter().map(|c| c.round_to(prec)).collect(),
            prec,
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> PrecisionReal {
        let mut best = PrecisionReal::zero(self.prec);
        for c in &self.coeffs {
            let a = c.abs(self.prec);
            if a.cmp_abs(&best).is_gt() {
                best = a;
            }
        }
        best
    }

    /// Sum of coefficient magnitudes.
    pub fn sum_abs(&self) -> PrecisionReal {
        self.coeffs.iter().fold(PrecisionReal::zero(self.prec), |acc, c| {
            acc.add_prec(&c.abs(self.prec), self.prec)
        })
    }
}

/// `sum_{i=0..=degree} x^i / i!`, ascending, at precision `prec`.
pub fn truncated_exp(x: &PrecisionReal, degree: usize, prec: u32) -> PrecisionReal {
    let x = x.round_to(prec);
    let mut acc = PrecisionReal::zero(prec);
    let mut term = PrecisionReal::one(prec);
    for i in 0..=degree {
        if i > 0 {
            term = term.mul_prec(&x, prec).div_uint(i as u64, prec);
        }
        acc = acc.add_prec(&term, prec);
    }
    acc
}

/// `c^k` for an exact base, used where `t -> ct` must be applied to a single term.
pub fn int_pow(c: &BigUint, k: usize) -> BigUint {
    Pow::pow(c, k)
}
