//! Recovers `k0` from the pipeline output by solving
//!
//! ```text
//! k0 φ00 + z1 φ'01 = c0
//! k0 φ10 + z1 φ'11 = c1
//! ```
//!
//! with `c0 = o[0]`, `c1 = o[1]`, `φ00 = 1`,
//! `φ10 = -tr_{n_d}(e^{r_{μ+1}}) / r_{μ+1}`, and `φ'` from the pseudo-steps.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{truncated_exp, NormalizedSeries, PrecisionComplex, PrecisionReal};
use crate::schedule::StepSchedule;

/// Distance from an integer (or imaginary magnitude) above which a run is flagged.
pub const FLAG_THRESHOLD: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExtractionFlag {
    RoundDistance,
    Imaginary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    pub k0: PrecisionComplex,
    pub z1: PrecisionComplex,
    /// `Re(k0)` rounded to nearest, ties to even. May be negative.
    pub n_h_rounded: BigInt,
    pub imag_magnitude: PrecisionReal,
    pub round_distance: PrecisionReal,
    pub phi00: PrecisionComplex,
    pub phi10: PrecisionComplex,
    pub phi01: PrecisionComplex,
    pub phi11: PrecisionComplex,
    pub c0: PrecisionComplex,
    pub c1: PrecisionComplex,
    pub det: PrecisionComplex,
    /// `|k0 φ00 + z1 φ'01 - c0|` and `|k0 φ10 + z1 φ'11 - c1|`.
    pub residuals: [PrecisionReal; 2],
    pub flags: Vec<ExtractionFlag>,
}

impl ExtractionResult {
    /// Residuals within `2^{-p/2} max(|c0|, |c1|)`.
    pub fn residuals_ok(&self) -> bool {
        let p = self.k0.prec();
        let scale = {
            let (a, b) = (self.c0.abs(p), self.c1.abs(p));
            if a.cmp_abs(&b).is_ge() {
                a
            } else {
                b
            }
        };
        let bound = scale.mul_pow2(-(p as i64 / 2));
        self.residuals.iter().all(|r| r.cmp_abs(&bound).is_le())
    }
}

fn max_abs(values: &[&PrecisionComplex], p: u32) -> PrecisionReal {
    let mut best = PrecisionReal::zero(p);
    for v in values {
        let a = v.abs(p);
        if a.cmp_abs(&best).is_gt() {
            best = a;
        }
    }
    best
}

/// `φ10 = -tr_{n_d}(e^{r_{μ+1}}) / r_{μ+1}`.
pub fn phi10(schedule: &StepSchedule, p: u32) -> PrecisionComplex {
    let r = schedule.r(schedule.len()).round_to(p);
    let e = truncated_exp(&r, schedule.n_d(), p);
    PrecisionComplex::from_real(e.div_prec(&r, p).neg())
}

pub fn extract_nh(
    o: &NormalizedSeries,
    phi01: &PrecisionComplex,
    phi11: &PrecisionComplex,
    schedule: &StepSchedule,
    p: u32,
) -> Result<ExtractionResult> {
    if o.degree_bound() < 1 {
        return Err(Error::Config("pipeline output needs coefficients a_0 and a_1".into()));
    }
    let c0 = o.coeff(0).round_to(p);
    let c1 = o.coeff(1).round_to(p);
    let phi00 = PrecisionComplex::one(p);
    let phi10 = phi10(schedule, p);
    let phi01 = phi01.round_to(p);
    let phi11 = phi11.round_to(p);

    let det = phi00.mul_prec(&phi11, p).sub_prec(&phi10.mul_prec(&phi01, p), p);
    let threshold = max_abs(&[&phi00, &phi10, &phi01, &phi11], p).mul_pow2(-(p as i64 / 2));
    if det.abs(p).cmp_abs(&threshold).is_lt() {
        return Err(Error::Singular {
            det: det.abs(p).to_sci(6),
            threshold: threshold.to_sci(6),
        });
    }
    let k0_num = c0.mul_prec(&phi11, p).sub_prec(&phi01.mul_prec(&c1, p), p);
    let z1_num = phi00.mul_prec(&c1, p).sub_prec(&phi10.mul_prec(&c0, p), p);
    let k0 = k0_num.checked_div_prec(&det, p).expect("det above threshold");
    let z1 = z1_num.checked_div_prec(&det, p).expect("det above threshold");

    let r0 = k0
        .mul_prec(&phi00, p)
        .add_prec(&z1.mul_prec(&phi01, p), p)
        .sub_prec(&c0, p)
        .abs(p);
    let r1 = k0
        .mul_prec(&phi10, p)
        .add_prec(&z1.mul_prec(&phi11, p), p)
        .sub_prec(&c1, p)
        .abs(p);

    let n_h_rounded = k0.re.round_to_integer();
    let round_distance = k0.re.sub_prec(&PrecisionReal::from_bigint(&n_h_rounded, p), p).abs();
    let imag_magnitude = k0.im.abs();
    let limit = PrecisionReal::from_f64(FLAG_THRESHOLD, p).expect("finite");
    let mut flags = Vec::new();
    if round_distance.cmp_abs(&limit).is_gt() {
        flags.push(ExtractionFlag::RoundDistance);
    }
    if imag_magnitude.cmp_abs(&limit).is_gt() {
        flags.push(ExtractionFlag::Imaginary);
    }
    Ok(ExtractionResult {
        k0,
        z1,
        n_h_rounded,
        imag_magnitude,
        round_distance,
        phi00,
        phi10,
        phi01,
        phi11,
        c0,
        c1,
        det,
        residuals: [r0, r1],
        flags,
    })
}
