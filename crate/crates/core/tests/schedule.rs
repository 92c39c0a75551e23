mod common;

use common::real;
use num_bigint::BigUint;
use walkfilter::numerics::{truncated_exp, PrecisionReal};
use walkfilter::schedule::{
    build_schedule, final_rule_lhs, parse_profile, solve_r_mu_plus_1, solve_r_sp, step_rule_lhs, validate_profile,
    PipelineProfile, TimeScale, C_BETA_LARGE, C_HIGH_FREQ, C_ND1_GT_ND, C_ND1_GT_R1, C_RMU_LT_ND, C_TRANSIENT_SHRINK,
    DEFAULT_MARGIN_BITS,
};
use walkfilter::Error;

fn read_profile(name: &str) -> PipelineProfile {
    let path = format!("{}/../../data/profiles/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_profile(&std::fs::read(path).unwrap()).unwrap()
}

fn within(v: &PrecisionReal, bits: i64) -> bool {
    let p = v.prec();
    v.sub_prec(&PrecisionReal::one(p), p)
        .cmp_abs(&PrecisionReal::one(p).mul_pow2(-bits))
        .is_le()
}

#[test]
fn desk_schedule_residuals() {
    let profile = PipelineProfile::desk();
    let s = build_schedule(&profile).unwrap();
    let p = 4096;
    assert_eq!(s.len(), 11);
    assert_eq!(s.r(1), &PrecisionReal::from_i64(16, p));
    assert_eq!(s.r(10), &PrecisionReal::from_i64(2, p));
    for sp in 2..=9 {
        let (v, _) = step_rule_lhs(s.alpha(), sp, 8, s.r(sp), p);
        assert!(within(&v, p as i64 / 2), "r_{sp}");
    }
    let (v, _) = final_rule_lhs(s.beta(), 8, s.r(11), p);
    assert!(within(&v, p as i64 / 2));
    assert_eq!(s.beta(), &truncated_exp(&PrecisionReal::from_i64(2, p), 8, p));
}

#[test]
fn desk_schedule_golden_values() {
    // mpmath, 400 digits
    let golden = [
        1.125_353_680_798_195_3e-7,
        4.745_287_543_444_713e-4,
        8.798_740_187_133_407e-3,
        4.095_640_626_902_977e-2,
        0.108_522_742_361_392_1,
        0.215_558_014_702_537_1,
        0.366_954_377_913_550_6,
        0.509_449_556_837_690_7,
    ];
    let s = build_schedule(&PipelineProfile::desk()).unwrap();
    for (sp, g) in (2..=9).zip(golden) {
        assert!((s.r(sp).to_f64() / g - 1.0).abs() < 1e-14, "r_{sp}");
    }
    assert!((s.alpha().to_f64() / 8_886_096.252_211_93 - 1.0).abs() < 1e-14);
    assert!((s.r(11).to_f64() / 0.158_639_108_208_035_5 - 1.0).abs() < 1e-14);
    // the solved times increase with sp
    for sp in 2..9 {
        assert!(s.r(sp).cmp_value(s.r(sp + 1)).is_lt());
    }
}

#[test]
fn second_step_lies_between_one_and_two_over_alpha() {
    for a in [8.0, 10.0, 100.0, 1.0e6, 3.0e9] {
        let r = solve_r_sp(&real(a, 256), 2, 40, 256).unwrap().to_f64();
        assert!(r > 1.0 / a && r < 2.0 / a, "alpha = {a}");
    }
}

#[test]
fn final_step_shrinks_with_beta() {
    let mut last = f64::INFINITY;
    for r_mu in [1, 2, 4, 8, 16] {
        let r = solve_r_mu_plus_1(&PrecisionReal::from_i64(r_mu, 256), 40, 256)
            .unwrap()
            .to_f64();
        assert!(r < last && r > 0.0);
        last = r;
    }
    assert!(last < 2e-6);
    assert!(matches!(
        solve_r_mu_plus_1(&real(0.5, 64), 8, 64),
        Err(Error::Config(_))
    ));
}

#[test]
fn profile_files_match_builtins() {
    assert_eq!(read_profile("desk.profile"), PipelineProfile::desk());
    for n in [4, 8, 16] {
        assert_eq!(read_profile(&format!("full_n{n}.profile")), PipelineProfile::full_scale(n));
    }
}

#[test]
fn full_scale_profiles_pass_in_log_domain() {
    for n in [4, 8, 16] {
        let report = validate_profile(&PipelineProfile::full_scale(n), DEFAULT_MARGIN_BITS);
        assert!(report.all_passed(), "n = {n}: {:?}", report.failed());
        assert_eq!(report.constraints.len(), 7);
    }
}

#[test]
fn desk_profile_misses_only_the_transient_bound() {
    let report = validate_profile(&PipelineProfile::desk(), DEFAULT_MARGIN_BITS);
    assert_eq!(report.failed(), vec![C_TRANSIENT_SHRINK]);
    let c = report.get(C_TRANSIENT_SHRINK).unwrap();
    assert!((c.lhs - 15.027).abs() < 0.01);
}

type Mutation = fn(&mut PipelineProfile);

#[test]
fn broken_profiles_fail_the_named_constraint() {
    let base = PipelineProfile::full_scale(4);
    let cases: [(&str, Mutation); 5] = [
        (C_ND1_GT_ND, |p| p.n_d1 = p.n_d.clone()),
        (C_ND1_GT_R1, |p| p.n_d1 = p.r_1.clone() - 1u32),
        (C_RMU_LT_ND, |p| p.r_mu = p.n_d.clone()),
        (C_HIGH_FREQ, |p| p.c = TimeScale::Exact(BigUint::from(2u32))),
        (C_BETA_LARGE, |p| p.r_mu = BigUint::from(0u32)),
    ];
    for (name, mutate) in cases {
        let mut p = base.clone();
        mutate(&mut p);
        let report = validate_profile(&p, DEFAULT_MARGIN_BITS);
        assert!(!report.get(name).unwrap().passed, "{name}");
    }
    let mut p = base.clone();
    p.r_1 = p.n_d.clone();
    assert!(report_fails(&p, "r_1 > n_d"));
}

fn report_fails(p: &PipelineProfile, name: &str) -> bool {
    !validate_profile(p, DEFAULT_MARGIN_BITS).get(name).unwrap().passed
}

#[test]
fn full_scale_profile_is_not_runnable() {
    assert!(matches!(
        build_schedule(&PipelineProfile::full_scale(4)),
        Err(Error::Config(_))
    ));
}
