//! Pipeline parameter profiles, their requirement checks, and the per-step
//! zero-crossing times `r_sp`.
//!
//! Step 1 forces its output to vanish at `r_1`, which fixes
//! `α = 1 / tr_{n_d1}(e^{-r_1})`. Steps `2..=n_d+1` then use the smallest
//! positive `r` with
//!
//! ```text
//! α r^(sp-1)/(sp-1)! · sum_{i=0}^{n_d-sp+1} (-1)^i r^i/i! = 1
//! ```
//!
//! so that a constant input leaves no `e^{-t}` term behind. Step `n_d+2`
//! uses the profile's `r_mu` and step `n_d+3` solves
//! `tr_{n_d}(e^r)/r = tr_{n_d}(e^{r_mu})`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::format::text_lines;
use crate::numerics::{truncated_exp, PrecisionReal, MIN_PRECISION};

/// Degree bounds above this are only ever checked symbolically.
pub const MAX_DESK_DEGREE: usize = 1 << 16;
/// Precisions above this are only ever checked symbolically.
pub const MAX_DESK_PRECISION: u32 = 1 << 24;
/// Largest `c` (in bits) that a run will materialize.
pub const MAX_DESK_SCALE_BITS: u64 = 1 << 20;
/// Largest integer (in bits) a profile file may spell out via `a^b`.
const MAX_LITERAL_BITS: u64 = 1 << 16;

/// Default margin, in bits, standing in for "much less than".
pub const DEFAULT_MARGIN_BITS: f64 = 1.0;

/// The time-scale factor `c` in `f(t) = y(ct)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TimeScale {
    Exact(BigUint),
    /// `base^exponent`, kept symbolic so full-scale values stay checkable.
    Power {
        base: BigUint,
        exponent: BigUint,
    },
}

impl TimeScale {
    pub fn log2(&self) -> f64 {
        match self {
            TimeScale::Exact(c) => log2_big(c),
            TimeScale::Power { base, exponent } => big_to_f64(exponent) * log2_big(base),
        }
    }

    /// The exact integer, if it is small enough to use in a run.
    pub fn materialize(&self) -> Result<BigUint> {
        match self {
            TimeScale::Exact(c) => Ok(c.clone()),
            TimeScale::Power { base, exponent } => {
                let bits = self.log2();
                if !bits.is_finite() || bits > MAX_DESK_SCALE_BITS as f64 {
                    return Err(Error::Config(format!(
                        "time scale c = {base}^{exponent} is too large to materialize"
                    )));
                }
                Ok(num_traits::Pow::pow(base, exponent.to_u32().unwrap_or(0)))
            }
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            TimeScale::Exact(c) => c.is_zero(),
            TimeScale::Power { base, exponent } => base.is_zero() && !exponent.is_zero(),
        }
    }

    fn render(&self) -> String {
        match self {
            TimeScale::Exact(c) => format!("c={c}"),
            TimeScale::Power { base, exponent } if *base == BigUint::from(2u32) => {
                format!("log2_c={exponent}")
            }
            TimeScale::Power { base, exponent } => format!("c={base}^{exponent}"),
        }
    }
}

fn log2_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().unwrap() as f64).log2();
    }
    let lead = (v >> (bits - 64)).to_u64().unwrap() as f64;
    lead.log2() + (bits - 64) as f64
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Parameters of one pipeline run (or of a symbolic requirement check).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineProfile {
    pub n: u64,
    pub n_d: BigUint,
    pub n_d1: BigUint,
    pub r_1: BigUint,
    pub r_mu: BigUint,
    pub c: TimeScale,
    pub p_1: BigUint,
    pub p_2: BigUint,
}

/// A profile whose values fit in machine integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeskParams {
    pub n_d: usize,
    pub n_d1: usize,
    pub r_1: u64,
    pub r_mu: u64,
    pub c: BigUint,
    pub p_1: u32,
    pub p_2: u32,
}

impl PipelineProfile {
    /// The default desk-scale fixture.
    pub fn desk() -> Self {
        PipelineProfile {
            n: 4,
            n_d: 8u32.into(),
            n_d1: 64u32.into(),
            r_1: 16u32.into(),
            r_mu: 2u32.into(),
            c: TimeScale::Power {
                base: 2u32.into(),
                exponent: 40u32.into(),
            },
            p_1: 4608u32.into(),
            p_2: 4096u32.into(),
        }
    }

    /// Full-scale values: `n_d1 = n^40`, `n_d = n^10`, `r_1 = n^30`,
    /// `r_mu = n^2`, `c = n^(n^11)`, `p_1 = n^60`, `p_2 = n^50`.
    pub fn full_scale(n: u64) -> Self {
        let b = BigUint::from(n);
        let pow = |k: u32| num_traits::Pow::pow(&b, k);
        PipelineProfile {
            n,
            n_d: pow(10),
            n_d1: pow(40),
            r_1: pow(30),
            r_mu: pow(2),
            c: TimeScale::Power {
                base: b.clone(),
                exponent: pow(11),
            },
            p_1: pow(60),
            p_2: pow(50),
        }
    }

    /// Positivity plus the strict orderings `n_d1 > n_d`, `n_d1 > r_1`, `r_1 > n_d`.
    pub fn check_structure(&self) -> Result<()> {
        let positive = [
            ("n", self.n == 0),
            ("n_d", self.n_d.is_zero()),
            ("n_d1", self.n_d1.is_zero()),
            ("r_1", self.r_1.is_zero()),
            ("r_mu", self.r_mu.is_zero()),
            ("c", self.c.is_zero()),
        ];
        for (name, bad) in positive {
            if bad {
                return Err(Error::Config(format!("profile value {name} must be positive")));
            }
        }
        for (name, p) in [("p_1", &self.p_1), ("p_2", &self.p_2)] {
            if *p < BigUint::from(MIN_PRECISION) {
                return Err(Error::Config(format!(
                    "profile value {name} must be at least {MIN_PRECISION}"
                )));
            }
        }
        if self.n_d1 <= self.n_d {
            return Err(Error::Config("profile requires n_d1 > n_d".into()));
        }
        if self.n_d1 <= self.r_1 {
            return Err(Error::Config("profile requires n_d1 > r_1".into()));
        }
        if self.r_1 <= self.n_d {
            return Err(Error::Config("profile requires r_1 > n_d".into()));
        }
        Ok(())
    }

    /// Machine-sized values for an actual run.
    pub fn desk_params(&self) -> Result<DeskParams> {
        self.check_structure()?;
        let small = |v: &BigUint, name: &str, max: u64| -> Result<u64> {
            v.to_u64()
                .filter(|&x| x <= max)
                .ok_or_else(|| Error::Config(format!("profile value {name} = {v} exceeds the run limit {max}")))
        };
        Ok(DeskParams {
            n_d: small(&self.n_d, "n_d", MAX_DESK_DEGREE as u64)? as usize,
            n_d1: small(&self.n_d1, "n_d1", MAX_DESK_DEGREE as u64)? as usize,
            r_1: small(&self.r_1, "r_1", MAX_DESK_DEGREE as u64)?,
            r_mu: small(&self.r_mu, "r_mu", MAX_DESK_DEGREE as u64)?,
            c: self.c.materialize()?,
            p_1: small(&self.p_1, "p_1", MAX_DESK_PRECISION as u64)? as u32,
            p_2: small(&self.p_2, "p_2", MAX_DESK_PRECISION as u64)? as u32,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n={}", self.n).unwrap();
        writeln!(s, "n_d={}", self.n_d).unwrap();
        writeln!(s, "n_d1={}", self.n_d1).unwrap();
        writeln!(s, "r_1={}", self.r_1).unwrap();
        writeln!(s, "r_mu={}", self.r_mu).unwrap();
        writeln!(s, "{}", self.c.render()).unwrap();
        writeln!(s, "p_1={}", self.p_1).unwrap();
        writeln!(s, "p_2={}", self.p_2).unwrap();
        s
    }
}

fn parse_uint(token: &str) -> Option<BigUint> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::parse_bytes(token.as_bytes(), 10)
}

/// `<int>` or `<int>^<int>`, the latter kept as (base, exponent).
fn parse_value(token: &str) -> Option<(BigUint, BigUint)> {
    match token.split_once('^') {
        Some((b, e)) => Some((parse_uint(b)?, parse_uint(e)?)),
        None => Some((parse_uint(token)?, BigUint::one())),
    }
}

fn materialize_literal(base: &BigUint, exponent: &BigUint, line: usize) -> Result<BigUint> {
    if exponent.is_one() {
        return Ok(base.clone());
    }
    let bits = big_to_f64(exponent) * log2_big(base).max(0.0);
    if bits > MAX_LITERAL_BITS as f64 {
        return Err(Error::parse(line, "power literal is too large"));
    }
    Ok(num_traits::Pow::pow(base, exponent.to_u32().unwrap_or(0)))
}

/// Reads a flat `key=value` profile. Keys: `n n_d n_d1 r_1 r_mu p_1 p_2` and
/// exactly one of `c` / `log2_c`. Values are decimal integers or `a^b`.
pub fn parse_profile(bytes: &[u8]) -> Result<PipelineProfile> {
    const KEYS: [&str; 9] = ["n", "n_d", "n_d1", "r_1", "r_mu", "c", "log2_c", "p_1", "p_2"];
    let mut values: [Option<(BigUint, BigUint)>; 9] = Default::default();
    let mut last_line = 1;
    for (no, line) in text_lines(bytes) {
        last_line = no;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::parse(no, "expected `key=value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let idx = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| Error::parse(no, format!("unknown key `{key}`")))?;
        if values[idx].is_some() {
            return Err(Error::parse(no, format!("duplicate key `{key}`")));
        }
        let parsed = parse_value(value).ok_or_else(|| Error::parse(no, format!("bad value `{value}`")))?;
        // everything except the time scale is materialized immediately
        if key != "c" && key != "log2_c" {
            let v = materialize_literal(&parsed.0, &parsed.1, no)?;
            values[idx] = Some((v, BigUint::one()));
        } else {
            values[idx] = Some(parsed);
        }
        if values[5].is_some() && values[6].is_some() {
            return Err(Error::parse(no, "give only one of `c` and `log2_c`"));
        }
    }
    let mut take = |idx: usize| -> Result<BigUint> {
        values[idx]
            .take()
            .map(|(v, _)| v)
            .ok_or_else(|| Error::parse(last_line, format!("missing key `{}`", KEYS[idx])))
    };
    let n = take(0)?
        .to_u64()
        .ok_or_else(|| Error::parse(last_line, "n is too large"))?;
    let n_d = take(1)?;
    let n_d1 = take(2)?;
    let r_1 = take(3)?;
    let r_mu = take(4)?;
    let p_1 = take(7)?;
    let p_2 = take(8)?;
    let c = match (values[5].take(), values[6].take()) {
        (Some((base, exponent)), None) if exponent.is_one() => TimeScale::Exact(base),
        (Some((base, exponent)), None) => TimeScale::Power { base, exponent },
        (None, Some((b, e))) => TimeScale::Power {
            base: 2u32.into(),
            exponent: materialize_literal(&b, &e, last_line)?,
        },
        _ => return Err(Error::parse(last_line, "missing key `c` or `log2_c`")),
    };
    Ok(PipelineProfile {
        n,
        n_d,
        n_d1,
        r_1,
        r_mu,
        c,
        p_1,
        p_2,
    })
}

/// One requirement, evaluated in log2 units where magnitudes are involved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for `<` requirements, `lhs - rhs` for `>`; positive means satisfied.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub margin_bits: f64,
    pub constraints: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.constraints.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConstraintCheck> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.constraints.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "margin_bits={}", self.margin_bits).unwrap();
        for c in &self.constraints {
            writeln!(
                s,
                "{} {} lhs={:.6e} rhs={:.6e} slack={:.6e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.lhs,
                c.rhs,
                c.slack
            )
            .unwrap();
        }
        writeln!(s, "all_passed={}", self.all_passed()).unwrap();
        s
    }
}

pub const C_ND1_GT_ND: &str = "n_d1 > n_d";
pub const C_ND1_GT_R1: &str = "n_d1 > r_1";
pub const C_R1_GT_ND: &str = "r_1 > n_d";
pub const C_TRANSIENT_SHRINK: &str = "2^n_d n^n r_{n_d+1} << 1";
pub const C_HIGH_FREQ: &str = "e^r_mu 2^n_d n^n / c^2 << n^-2n";
pub const C_RMU_LT_ND: &str = "r_mu < n_d";
pub const C_BETA_LARGE: &str = "beta >> 1";

fn log2_factorial(n: f64) -> f64 {
    if n <= 1_048_576.0 {
        (2..=n as u64).map(|i| (i as f64).log2()).sum()
    } else {
        let log2e = std::f64::consts::LOG2_E;
        n * n.log2() - n * log2e + 0.5 * (2.0 * std::f64::consts::PI * n).log2()
    }
}

/// log2 of `α = 1 / tr_{n_d1}(e^{-r_1})`; NaN when the truncation is not positive.
fn log2_alpha(profile: &PipelineProfile) -> f64 {
    let small = |v: &BigUint| v.to_u64().filter(|&x| x <= MAX_DESK_DEGREE as u64);
    match (small(&profile.n_d1), small(&profile.r_1)) {
        (Some(n_d1), Some(r_1)) => {
            // cancellation in the alternating sum costs about 2 r_1 log2(e) bits
            let prec = 128 + (3.0 * r_1 as f64 * std::f64::consts::LOG2_E) as u32;
            let r = PrecisionReal::from_i64(r_1 as i64, prec);
            let q = truncated_exp(&r.neg(), n_d1 as usize, prec);
            if q.is_zero() || q.is_negative() {
                f64::NAN
            } else {
                -q.log2_abs()
            }
        }
        _ => big_to_f64(&profile.r_1) * std::f64::consts::LOG2_E,
    }
}

fn log2_beta(profile: &PipelineProfile) -> f64 {
    let small = |v: &BigUint| v.to_u64().filter(|&x| x <= MAX_DESK_DEGREE as u64);
    match (small(&profile.n_d), small(&profile.r_mu)) {
        (Some(n_d), Some(r_mu)) => {
            let r = PrecisionReal::from_i64(r_mu as i64, 128);
            truncated_exp(&r, n_d as usize, 128).log2_abs()
        }
        _ => big_to_f64(&profile.r_mu) * std::f64::consts::LOG2_E,
    }
}

/// Evaluates every requirement in log2 form so full-scale profiles stay
/// checkable. Always produces a report.
pub fn validate_profile(profile: &PipelineProfile, margin_bits: f64) -> ConstraintReport {
    let n = profile.n as f64;
    let log2n = n.log2();
    let n_d = big_to_f64(&profile.n_d);
    let mut constraints = Vec::new();

    let mut greater = |name, a: &BigUint, b: &BigUint| {
        let (la, lb) = (log2_big(a), log2_big(b));
        constraints.push(ConstraintCheck {
            name,
            passed: a > b,
            lhs: la,
            rhs: lb,
            slack: la - lb,
        });
    };
    greater(C_ND1_GT_ND, &profile.n_d1, &profile.n_d);
    greater(C_ND1_GT_R1, &profile.n_d1, &profile.r_1);
    greater(C_R1_GT_ND, &profile.r_1, &profile.n_d);

    // r_{n_d+1} has the closed form (n_d! / α)^(1/n_d)
    let log2_r_last = (log2_factorial(n_d) - log2_alpha(profile)) / n_d;
    let lhs = n_d + n * log2n + log2_r_last;
    let rhs = -margin_bits;
    constraints.push(ConstraintCheck {
        name: C_TRANSIENT_SHRINK,
        passed: lhs < rhs,
        lhs,
        rhs,
        slack: rhs - lhs,
    });

    let r_mu_bits = big_to_f64(&profile.r_mu) * std::f64::consts::LOG2_E;
    let lhs = r_mu_bits + n_d + n * log2n - 2.0 * profile.c.log2();
    let rhs = -2.0 * n * log2n - margin_bits;
    constraints.push(ConstraintCheck {
        name: C_HIGH_FREQ,
        passed: lhs < rhs,
        lhs,
        rhs,
        slack: rhs - lhs,
    });

    let (lr, ln) = (log2_big(&profile.r_mu), log2_big(&profile.n_d));
    constraints.push(ConstraintCheck {
        name: C_RMU_LT_ND,
        passed: profile.r_mu < profile.n_d,
        lhs: lr,
        rhs: ln,
        slack: ln - lr,
    });

    let lb = log2_beta(profile);
    constraints.push(ConstraintCheck {
        name: C_BETA_LARGE,
        passed: lb > margin_bits,
        lhs: lb,
        rhs: margin_bits,
        slack: lb - margin_bits,
    });

    ConstraintReport {
        margin_bits,
        constraints,
    }
}

/// Solved step times and the constants they depend on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSchedule {
    r: Vec<PrecisionReal>,
    alpha: PrecisionReal,
    beta: PrecisionReal,
    n_d: usize,
}

impl StepSchedule {
    /// Assembles a schedule from already solved values (`r[0]` is step 1).
    pub fn from_parts(r: Vec<PrecisionReal>, alpha: PrecisionReal, beta: PrecisionReal) -> Result<Self> {
        if r.len() < 4 {
            return Err(Error::Config("a schedule needs n_d + 3 >= 4 steps".into()));
        }
        let n_d = r.len() - 3;
        Ok(StepSchedule { r, alpha, beta, n_d })
    }

    /// `r_sp` for 1-based step `sp`.
    pub fn r(&self, sp: usize) -> &PrecisionReal {
        &self.r[sp - 1]
    }

    pub fn all(&self) -> &[PrecisionReal] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn n_d(&self) -> usize {
        self.n_d
    }

    /// `μ = n_d + 2`.
    pub fn mu(&self) -> usize {
        self.n_d + 2
    }

    pub fn alpha(&self) -> &PrecisionReal {
        &self.alpha
    }

    pub fn beta(&self) -> &PrecisionReal {
        &self.beta
    }
}

/// Newton polish inside a bracket, falling back to bisection whenever a step
/// leaves it. `lhs` returns the left side and its derivative; the target is 1,
/// `lhs(lo) < 1 <= lhs(hi)`.
fn polish<F>(lhs: &F, mut lo: PrecisionReal, mut hi: PrecisionReal, p: u32, step: usize) -> Result<PrecisionReal>
where
    F: Fn(&PrecisionReal) -> (PrecisionReal, PrecisionReal),
{
    let one = PrecisionReal::one(p);
    let tol = PrecisionReal::one(p).mul_pow2(-(p as i64 / 2));
    let half = |a: &PrecisionReal, b: &PrecisionReal| a.add_prec(b, p + 1).mul_pow2(-1).round_to(p);

    // a few bisections make Newton's start point relatively accurate
    for _ in 0..64 {
        let width = hi.sub_prec(&lo, p);
        if width.log2_abs() < lo.log2_abs() - 60.0 {
            break;
        }
        let mid = half(&lo, &hi);
        if lhs(&mid).0.cmp_value(&one).is_lt() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = half(&lo, &hi);
    for _ in 0..(64 + 4 * p as usize) {
        let (v, dv) = lhs(&x);
        let resid = v.sub_prec(&one, p);
        if resid.cmp_abs(&tol).is_le() {
            return Ok(x);
        }
        if resid.is_negative() {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let newton = dv
            .checked_div_prec(&dv, p)
            .and_then(|_| resid.checked_div_prec(&dv, p))
            .map(|d| x.sub_prec(&d, p));
        let next = match newton {
            Some(nx) if nx.cmp_value(&lo).is_gt() && nx.cmp_value(&hi).is_lt() => nx,
            _ => half(&lo, &hi),
        };
        if next == x {
            // no representable progress left; accept if we are as close as rounding allows
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NoRoot {
        step,
        reason: "root polish did not converge".into(),
    })
}

/// Grid spacing of the coarse scan on (0, 1].
const SCAN_STEPS: i64 = 128;

/// Smallest root of `lhs(r) = 1` on (0, 1], given `lhs(0+) < 1` and `lhs`
/// increasing on (0, 1/128].
fn smallest_unit_root<F>(lhs: F, p: u32, step: usize) -> Result<PrecisionReal>
where
    F: Fn(&PrecisionReal) -> (PrecisionReal, PrecisionReal),
{
    let one = PrecisionReal::one(p);
    let below = |x: &PrecisionReal| -> Option<bool> {
        match lhs(x).0.cmp_value(&one) {
            std::cmp::Ordering::Less => Some(true),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(false),
        }
    };
    let first = PrecisionReal::from_i64(1, p).div_uint(SCAN_STEPS as u64, p);
    match below(&first) {
        None => return Ok(first),
        Some(false) => {
            // dyadic scan downward for the first point below the target
            let mut hi = first.clone();
            for k in 1..=(p as i64 + 64) {
                let x = first.mul_pow2(-k);
                match below(&x) {
                    None => return Ok(x),
                    Some(true) => return polish(&lhs, x, hi, p, step),
                    Some(false) => hi = x,
                }
            }
            return Err(Error::NoRoot {
                step,
                reason: "root lies below the precision floor".into(),
            });
        }
        Some(true) => {}
    }
    // coarse upward scan for the first point at or above the target
    let mut lo = first;
    for j in 2..=SCAN_STEPS {
        let x = PrecisionReal::from_i64(j, p).div_uint(SCAN_STEPS as u64, p);
        match below(&x) {
            None => return Ok(x),
            Some(false) => return polish(&lhs, lo, x, p, step),
            Some(true) => lo = x,
        }
    }
    Err(Error::NoRoot {
        step,
        reason: "left side stays below 1 on (0, 1]".into(),
    })
}

/// `sum_{i=0}^{degree} (-1)^i r^i / i!` and `r^s / s!` helpers share one term walk.
fn alternating_partial_sums(r: &PrecisionReal, degree: usize, p: u32) -> Vec<PrecisionReal> {
    let mut sums = Vec::with_capacity(degree + 1);
    let mut acc = PrecisionReal::zero(p);
    let mut term = PrecisionReal::one(p);
    for i in 0..=degree {
        if i > 0 {
            term = term.mul_prec(r, p).div_uint(i as u64, p).neg();
        }
        acc = acc.add_prec(&term, p);
        sums.push(acc.clone());
    }
    sums
}

fn power_over_factorial(r: &PrecisionReal, s: usize, p: u32) -> PrecisionReal {
    (1..=s).fold(PrecisionReal::one(p), |acc, i| acc.mul_prec(r, p).div_uint(i as u64, p))
}

/// Left side of the step-time rule at `r` and its derivative.
pub fn step_rule_lhs(
    alpha: &PrecisionReal,
    sp: usize,
    n_d: usize,
    r: &PrecisionReal,
    p: u32,
) -> (PrecisionReal, PrecisionReal) {
    let s = sp - 1;
    let terms = n_d - s;
    let sums = alternating_partial_sums(r, terms, p);
    let t = &sums[terms];
    let dt = if terms == 0 {
        PrecisionReal::zero(p)
    } else {
        sums[terms - 1].neg()
    };
    let pw = power_over_factorial(r, s, p);
    let dpw = power_over_factorial(r, s - 1, p);
    let value = alpha.mul_prec(&pw.mul_prec(t, p), p);
    let deriv = dpw.mul_prec(t, p).add_prec(&pw.mul_prec(&dt, p), p);
    (value, alpha.mul_prec(&deriv, p))
}

/// Smallest positive `r` with `α r^(sp-1)/(sp-1)! tr_{n_d-sp+1}(e^{-r}) = 1`.
pub fn solve_r_sp(alpha: &PrecisionReal, sp: usize, n_d: usize, p: u32) -> Result<PrecisionReal> {
    if sp < 2 || sp > n_d + 1 {
        return Err(Error::Config(format!(
            "step rule applies to 2 <= sp <= n_d + 1, got sp = {sp}"
        )));
    }
    let alpha = alpha.round_to(p);
    smallest_unit_root(|r| step_rule_lhs(&alpha, sp, n_d, r, p), p, sp)
}

/// `r β / tr_{n_d}(e^r)` and its derivative; equals 1 at `r_{μ+1}`.
pub fn final_rule_lhs(beta: &PrecisionReal, n_d: usize, r: &PrecisionReal, p: u32) -> (PrecisionReal, PrecisionReal) {
    let e = truncated_exp(r, n_d, p);
    let de = truncated_exp(r, n_d - 1, p);
    let value = r.mul_prec(beta, p).div_prec(&e, p);
    let num = e.sub_prec(&r.mul_prec(&de, p), p).mul_prec(beta, p);
    let deriv = num.div_prec(&e.mul_prec(&e, p), p);
    (value, deriv)
}

/// Smallest positive `r` with `tr_{n_d}(e^r)/r = tr_{n_d}(e^{r_mu})`.
pub fn solve_r_mu_plus_1(r_mu: &PrecisionReal, n_d: usize, p: u32) -> Result<PrecisionReal> {
    if n_d == 0 {
        return Err(Error::Config("n_d must be positive".into()));
    }
    if r_mu.cmp_value(&PrecisionReal::one(p)).is_lt() {
        return Err(Error::Config("r_mu must be at least 1".into()));
    }
    let beta = truncated_exp(r_mu, n_d, p);
    smallest_unit_root(|r| final_rule_lhs(&beta, n_d, r, p), p, n_d + 3)
}

/// Solves the whole schedule at the filter precision `p_2`.
pub fn build_schedule(profile: &PipelineProfile) -> Result<StepSchedule> {
    let d = profile.desk_params()?;
    let p = d.p_2;
    let r_1 = PrecisionReal::from_i64(d.r_1 as i64, p);
    let q1 = truncated_exp(&r_1.neg(), d.n_d1, p);
    if q1.is_zero() {
        return Err(Error::DegenerateSchedule { step: 1 });
    }
    if q1.is_negative() {
        return Err(Error::Config(
            "tr_{n_d1}(e^{-r_1}) is negative; n_d1 is too small for r_1".into(),
        ));
    }
    let alpha = PrecisionReal::one(p).div_prec(&q1, p);
    let middle: Vec<PrecisionReal> = (2..=d.n_d + 1)
        .into_par_iter()
        .map(|sp| solve_r_sp(&alpha, sp, d.n_d, p))
        .collect::<Result<_>>()?;
    let r_mu = PrecisionReal::from_i64(d.r_mu as i64, p);
    let last = solve_r_mu_plus_1(&r_mu, d.n_d, p)?;
    let beta = truncated_exp(&r_mu, d.n_d, p);

    let mut r = Vec::with_capacity(d.n_d + 3);
    r.push(r_1);
    r.extend(middle);
    r.push(r_mu);
    r.push(last);
    StepSchedule::from_parts(r, alpha, beta)
}
