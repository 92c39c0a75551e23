//! Cascaded first-order steps `H(s) = 1/(s+1)` on normalized coefficients.
//!
//! Since `1/(s+1) = sum_k (-1)^k / s^(k+1)` and integration is a right shift
//! in the normalized basis, a step's output before adjustment is
//! `out_k = sum_{d<k} in_d (-1)^(k-1-d)`. The step then adds `μ e^{-t}`
//! (truncated) with `μ` chosen so the output vanishes at `t = r_sp`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::format::{parse_key_value, text_lines, MAX_FILE_PRECISION};
use crate::numerics::{truncated_exp, NormalizedSeries, PrecisionComplex, PrecisionReal, MIN_PRECISION};
use crate::schedule::{PipelineProfile, StepSchedule};

/// The integrator cascade over any additive group: `out_0 = 0` and
/// `out_k = sum_{d<k} in_d (-1)^(k-1-d)`, ascending `d`. Inputs above `m`
/// are ignored; missing inputs count as zero.
pub fn cascade<T, A, N>(input: &[T], m: usize, zero: &T, add: A, neg: N) -> Vec<T>
where
    T: Clone + Send + Sync,
    A: Fn(&T, &T) -> T + Sync,
    N: Fn(&T) -> T + Sync,
{
    (0..=m)
        .into_par_iter()
        .map(|k| {
            let mut acc = zero.clone();
            for (d, v) in input.iter().enumerate().take(k) {
                let term = if (k - 1 - d) % 2 == 0 { v.clone() } else { neg(v) };
                acc = add(&acc, &term);
            }
            acc
        })
        .collect()
}

/// One step's output plus the quantities that shaped it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub degree: usize,
    pub r: PrecisionReal,
    /// Output at `r` before the adjustment (the filter-H-initial value).
    pub initial_value: PrecisionComplex,
    /// `tr_m(e^{-r})`.
    pub q: PrecisionReal,
    /// Multiple of `e^{-t}` added: `-initial_value / q`.
    pub correction: PrecisionComplex,
    pub output: NormalizedSeries,
}

fn apply_step(input: &NormalizedSeries, r: &PrecisionReal, m: usize, p: u32, index: usize) -> Result<StepRecord> {
    if m == 0 {
        return Err(Error::Config("step degree bound must be positive".into()));
    }
    let r = r.round_to(p);
    let q = truncated_exp(&r.neg(), m, p);
    if q.is_zero() {
        return Err(Error::DegenerateSchedule { step: index });
    }
    let input: Vec<PrecisionComplex> = input.coeffs().iter().map(|c| c.round_to(p)).collect();
    let out = cascade(
        &input,
        m,
        &PrecisionComplex::zero(p),
        |a, b| a.add_prec(b, p),
        |a| a.neg(),
    );
    let out = NormalizedSeries::from_coeffs(out, p);
    let initial_value = out.eval(&r);
    let correction = initial_value.div_real(&q, p).expect("q checked nonzero").neg();
    let coeffs = out
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i % 2 == 0 {
                c.add_prec(&correction, p)
            } else {
                c.sub_prec(&correction, p)
            }
        })
        .collect();
    Ok(StepRecord {
        index,
        degree: m,
        r,
        initial_value,
        q,
        correction,
        output: NormalizedSeries::from_coeffs(coeffs, p),
    })
}

/// One step at degree `m` and precision `p`. A degenerate divisor is
/// reported as step 0; pipeline runs report the real step index.
pub fn filter_step(input: &NormalizedSeries, r_sp: &PrecisionReal, m: usize, p: u32) -> Result<NormalizedSeries> {
    apply_step(input, r_sp, m, p, 0).map(|s| s.output)
}

/// Same as [`filter_step`] but keeps the intermediate quantities.
pub fn filter_step_traced(
    input: &NormalizedSeries,
    r_sp: &PrecisionReal,
    m: usize,
    p: u32,
    index: usize,
) -> Result<StepRecord> {
    apply_step(input, r_sp, m, p, index)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOutput {
    /// `o(t)`, the last step's output.
    pub output: NormalizedSeries,
    pub steps: Vec<StepRecord>,
}

/// Runs steps `first..=last` of the schedule at degree `m`.
fn run_steps(
    input: NormalizedSeries,
    schedule: &StepSchedule,
    first: usize,
    m: usize,
    p: u32,
    steps: &mut Vec<StepRecord>,
) -> Result<NormalizedSeries> {
    let mut current = input;
    for sp in first..=schedule.len() {
        let rec = apply_step(&current, schedule.r(sp), m, p, sp)?;
        current = rec.output.clone();
        steps.push(rec);
    }
    Ok(current)
}

fn check_schedule(schedule: &StepSchedule, n_d: usize) -> Result<()> {
    if schedule.n_d() != n_d {
        return Err(Error::Config(format!(
            "schedule was built for n_d = {}, profile has n_d = {n_d}",
            schedule.n_d()
        )));
    }
    Ok(())
}

/// Step 1 at `n_d1`, truncation to `n_d`, then steps `2..=n_d+3` at `n_d`.
/// The input is re-rounded to `p_2` on entry.
pub fn run_pipeline(
    f: &NormalizedSeries,
    schedule: &StepSchedule,
    profile: &PipelineProfile,
) -> Result<PipelineOutput> {
    let d = profile.desk_params()?;
    check_schedule(schedule, d.n_d)?;
    let p = d.p_2;
    let f = f.rounded(p).truncated(d.n_d1);
    let mut steps = Vec::with_capacity(schedule.len());
    let first = apply_step(&f, schedule.r(1), d.n_d1, p, 1)?;
    let after_first = first.output.truncated(d.n_d);
    steps.push(first);
    let output = run_steps(after_first, schedule, 2, d.n_d, p, &mut steps)?;
    Ok(PipelineOutput { output, steps })
}

/// Runs `input` (degree `n_d`) through steps `2..=n_d+3`; returns the last
/// output's `a_0` and `a_1`.
pub fn run_pseudo_steps_from(
    input: &NormalizedSeries,
    schedule: &StepSchedule,
    n_d: usize,
    p: u32,
) -> Result<(PrecisionComplex, PrecisionComplex)> {
    check_schedule(schedule, n_d)?;
    let mut steps = Vec::new();
    let out = run_steps(input.rounded(p).truncated(n_d), schedule, 2, n_d, p, &mut steps)?;
    Ok((out.coeff(0).clone(), out.coeff(1).clone()))
}

/// `φ'_{0,1}` and `φ'_{1,1}`: the pipeline tail's response to `e^{-t}`.
pub fn run_pseudo_steps(
    schedule: &StepSchedule,
    profile: &PipelineProfile,
) -> Result<(PrecisionComplex, PrecisionComplex)> {
    let d = profile.desk_params()?;
    let input = NormalizedSeries::exp(&PrecisionComplex::from_i64(-1, 0, d.p_2), d.n_d, d.p_2);
    run_pseudo_steps_from(&input, schedule, d.n_d, d.p_2)
}

/// Compact per-step digest for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepDigest {
    pub index: usize,
    pub degree: usize,
    pub r: String,
    pub initial_value: String,
    pub correction: String,
    pub max_abs: String,
}

impl StepRecord {
    pub fn digest(&self, digits: usize) -> StepDigest {
        let cplx = |c: &PrecisionComplex| format!("{} {}", c.re.to_sci(digits), c.im.to_sci(digits));
        StepDigest {
            index: self.index,
            degree: self.degree,
            r: self.r.to_sci(digits),
            initial_value: cplx(&self.initial_value),
            correction: cplx(&self.correction),
            max_abs: self.output.max_abs().to_sci(digits),
        }
    }
}

/// Pseudo-step output pair as written to and read from files:
///
/// ```text
/// pseudo p=<p>
/// phi01 <re> <im>
/// phi11 <re> <im>
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoOutput {
    pub phi01: PrecisionComplex,
    pub phi11: PrecisionComplex,
    pub prec: u32,
}

pub fn write_pseudo(out: &PseudoOutput) -> String {
    let mut s = String::new();
    writeln!(s, "pseudo p={}", out.prec).unwrap();
    for (name, c) in [("phi01", &out.phi01), ("phi11", &out.phi11)] {
        writeln!(s, "{name} {} {}", c.re.to_hex(), c.im.to_hex()).unwrap();
    }
    s
}

pub fn parse_pseudo(bytes: &[u8]) -> Result<PseudoOutput> {
    let mut lines = text_lines(bytes).filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty pseudo-step file"))?;
    let tokens: Vec<&str> = header?.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "pseudo" {
        return Err(Error::parse(1, "header must be `pseudo p=<p>`"));
    }
    let p: u32 = parse_key_value(tokens[1], "p", 1)?
        .parse()
        .map_err(|_| Error::parse(1, "precision is not a positive integer"))?;
    if !(MIN_PRECISION..=MAX_FILE_PRECISION).contains(&p) {
        return Err(Error::parse(
            1,
            format!("precision must lie in {MIN_PRECISION}..={MAX_FILE_PRECISION}"),
        ));
    }
    let mut values = Vec::with_capacity(2);
    let mut last_line = 1;
    for (no, line) in lines {
        last_line = no;
        let tokens: Vec<&str> = line?.split_whitespace().collect();
        let expected = ["phi01", "phi11"].get(values.len()).copied();
        let Some(expected) = expected else {
            return Err(Error::parse(no, "unexpected line after phi11"));
        };
        if tokens.len() != 3 || tokens[0] != expected {
            return Err(Error::parse(no, format!("expected `{expected} <re> <im>`")));
        }
        let re = PrecisionReal::parse_hex(tokens[1], p).map_err(|e| Error::parse(no, e.to_string()))?;
        let im = PrecisionReal::parse_hex(tokens[2], p).map_err(|e| Error::parse(no, e.to_string()))?;
        values.push(PrecisionComplex::new(re, im));
    }
    if values.len() != 2 {
        return Err(Error::parse(last_line, "expected phi01 and phi11 lines"));
    }
    let phi11 = values.pop().unwrap();
    let phi01 = values.pop().unwrap();
    Ok(PseudoOutput { phi01, phi11, prec: p })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn series(vals: &[i64]) -> NormalizedSeries {
        NormalizedSeries::from_coeffs(vals.iter().map(|&v| PrecisionComplex::from_i64(v, 0, P)).collect(), P)
    }

    #[test]
    fn hand_executed_step() {
        let out = filter_step(&series(&[1, 0]), &PrecisionReal::from_f64(0.5, P).unwrap(), 1, P).unwrap();
        assert_eq!(out, series(&[-1, 2]));
    }

    #[test]
    fn zero_in_zero_out() {
        let out = filter_step(&series(&[0; 9]), &PrecisionReal::from_f64(0.25, P).unwrap(), 8, P).unwrap();
        assert_eq!(out, series(&[0; 9]));
    }

    #[test]
    fn degenerate_divisor() {
        let r = PrecisionReal::one(P);
        assert_eq!(
            filter_step(&series(&[1, 0]), &r, 1, P),
            Err(Error::DegenerateSchedule { step: 0 })
        );
    }

    #[test]
    fn cascade_of_integers() {
        let out = cascade(&[1i64, 2, 3, 4], 4, &0, |a, b| a + b, |a| -a);
        // out_{k+1} + out_k = in_k
        assert_eq!(out, vec![0, 1, 1, 2, 2]);
    }

    #[test]
    fn pseudo_file_round_trip() {
        let out = PseudoOutput {
            phi01: PrecisionComplex::from_i64(3, -1, 64),
            phi11: PrecisionComplex::from_i64(-7, 0, 64),
            prec: 64,
        };
        let text = write_pseudo(&out);
        assert_eq!(text, "pseudo p=64\nphi01 0x1.8p+1 -0x1p+0\nphi11 -0x1.cp+2 0x0p+0\n");
        assert_eq!(parse_pseudo(text.as_bytes()).unwrap(), out);
        assert!(matches!(
            parse_pseudo(b"pseudo p=64\nphi11 0x1p+0 0x0p+0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_pseudo(b"pseudo p=64\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
