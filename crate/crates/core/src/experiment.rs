//! End-to-end runs: encode, schedule, filter, pseudo-steps, extraction and
//! the oracle comparison, collected into a report.

use std::fmt::{self, Write as _};
use std::time::Instant;

use serde::Serialize;

use crate::error::Error;
use crate::extraction::{extract_nh, ExtractionResult};
use crate::filter_pipeline::{run_pipeline, run_pseudo_steps, StepDigest};
use crate::graph::{parse_graph, Graph};
use crate::grid::grid_series;
use crate::schedule::{build_schedule, parse_profile, validate_profile, PipelineProfile, DEFAULT_MARGIN_BITS};
use crate::walk_oracle::{oracle_summary, OracleSummary, DEFAULT_ORACLE_LIMIT};

/// Digits used for the schedule and step digests.
const DIGEST_DIGITS: usize = 16;
/// Digits used for the extraction block.
const RESULT_DIGITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "MATCH")]
    Match,
    #[serde(rename = "MISMATCH")]
    Mismatch,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "UNVERIFIED")]
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Unverified => "UNVERIFIED",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Graph,
    Profile,
    Encode,
    Schedule,
    Filter,
    Pseudo,
    Extract,
    Oracle,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Graph => "graph",
            Stage::Profile => "profile",
            Stage::Encode => "encode",
            Stage::Schedule => "schedule",
            Stage::Filter => "filter",
            Stage::Pseudo => "pseudo",
            Stage::Extract => "extract",
            Stage::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("stage {stage}: {error}")]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

trait Tag<T> {
    fn tag(self, stage: Stage) -> Result<T, StageError>;
}

impl<T> Tag<T> for crate::error::Result<T> {
    fn tag(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub oracle_limit: usize,
    pub margin_bits: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            margin_bits: DEFAULT_MARGIN_BITS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphBlock {
    pub n: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileBlock {
    /// The profile as run, in file syntax (one `key=value` per entry).
    pub entries: Vec<String>,
    pub constraints_failed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleBlock {
    pub alpha: String,
    pub beta: String,
    pub r: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionBlock {
    /// Set when the 2x2 system was singular; the other fields are then empty.
    pub singular: Option<String>,
    pub k0_re: Option<String>,
    pub k0_im: Option<String>,
    pub z1_re: Option<String>,
    pub z1_im: Option<String>,
    pub n_h_rounded: Option<String>,
    pub round_distance: Option<String>,
    pub imag_magnitude: Option<String>,
    pub det: Option<String>,
    pub residual_0: Option<String>,
    pub residual_1: Option<String>,
    pub residuals_ok: Option<bool>,
    pub flags: Vec<String>,
    /// Bit-exact `Re(k0)`.
    pub k0_re_hex: Option<String>,
}

impl ExtractionBlock {
    fn from_result(r: &ExtractionResult) -> Self {
        let sci = |v: &crate::numerics::PrecisionReal| Some(v.to_sci(RESULT_DIGITS));
        ExtractionBlock {
            singular: None,
            k0_re: sci(&r.k0.re),
            k0_im: sci(&r.k0.im),
            z1_re: sci(&r.z1.re),
            z1_im: sci(&r.z1.im),
            n_h_rounded: Some(r.n_h_rounded.to_string()),
            round_distance: sci(&r.round_distance),
            imag_magnitude: sci(&r.imag_magnitude),
            det: Some(format!(
                "{} {}",
                r.det.re.to_sci(RESULT_DIGITS),
                r.det.im.to_sci(RESULT_DIGITS)
            )),
            residual_0: sci(&r.residuals[0]),
            residual_1: sci(&r.residuals[1]),
            residuals_ok: Some(r.residuals_ok()),
            flags: r.flags.iter().map(|f| format!("{f:?}")).collect(),
            k0_re_hex: Some(r.k0.re.to_hex()),
        }
    }

    fn singular(message: String) -> Self {
        ExtractionBlock {
            singular: Some(message),
            k0_re: None,
            k0_im: None,
            z1_re: None,
            z1_im: None,
            n_h_rounded: None,
            round_distance: None,
            imag_magnitude: None,
            det: None,
            residual_0: None,
            residual_1: None,
            residuals_ok: None,
            flags: vec!["Singular".into()],
            k0_re_hex: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub encode: f64,
    pub schedule: f64,
    pub filter: f64,
    pub pseudo: f64,
    pub extract: f64,
    pub oracle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub graph: GraphBlock,
    pub profile: ProfileBlock,
    pub schedule: ScheduleBlock,
    pub steps: Vec<StepDigest>,
    /// Absent above the oracle limit.
    pub oracle: Option<OracleSummary>,
    pub extraction: ExtractionBlock,
    pub verdict: Verdict,
    pub timings_ms: Timings,
}

fn opt(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("-")
}

impl RunReport {
    /// `key=value` blocks. Everything except `[timings_ms]` is deterministic.
    pub fn to_text(&self, include_timings: bool) -> String {
        let mut s = String::new();
        writeln!(s, "[graph]\nn={}\nedges={}", self.graph.n, self.graph.edges).unwrap();
        writeln!(s, "[profile]").unwrap();
        for e in &self.profile.entries {
            writeln!(s, "{e}").unwrap();
        }
        writeln!(s, "constraints_failed={}", self.profile.constraints_failed.join("; ")).unwrap();
        writeln!(
            s,
            "[schedule]\nalpha={}\nbeta={}",
            self.schedule.alpha, self.schedule.beta
        )
        .unwrap();
        for (i, r) in self.schedule.r.iter().enumerate() {
            writeln!(s, "r_{}={r}", i + 1).unwrap();
        }
        writeln!(s, "[steps]").unwrap();
        for st in &self.steps {
            writeln!(
                s,
                "step_{}=degree {} r {} initial {} correction {} max_abs {}",
                st.index, st.degree, st.r, st.initial_value, st.correction, st.max_abs
            )
            .unwrap();
        }
        writeln!(s, "[oracle]").unwrap();
        match &self.oracle {
            Some(o) => writeln!(
                s,
                "n_p={}\nn_h_directed={}\nn_h_undirected={}",
                o.n_p, o.n_h_directed, o.n_h_undirected
            )
            .unwrap(),
            None => writeln!(s, "omitted=above oracle limit").unwrap(),
        }
        let x = &self.extraction;
        writeln!(s, "[extraction]").unwrap();
        if let Some(msg) = &x.singular {
            writeln!(s, "singular={msg}").unwrap();
        }
        for (k, v) in [
            ("k0_re", &x.k0_re),
            ("k0_im", &x.k0_im),
            ("z1_re", &x.z1_re),
            ("z1_im", &x.z1_im),
            ("n_h_rounded", &x.n_h_rounded),
            ("round_distance", &x.round_distance),
            ("imag_magnitude", &x.imag_magnitude),
            ("det", &x.det),
            ("residual_0", &x.residual_0),
            ("residual_1", &x.residual_1),
        ] {
            writeln!(s, "{k}={}", opt(v)).unwrap();
        }
        writeln!(
            s,
            "residuals_ok={}",
            x.residuals_ok.map_or("-".to_string(), |b| b.to_string())
        )
        .unwrap();
        writeln!(s, "flags={}", x.flags.join(",")).unwrap();
        writeln!(s, "k0_re_hex={}", opt(&x.k0_re_hex)).unwrap();
        writeln!(s, "[verdict]\nverdict={}", self.verdict).unwrap();
        if include_timings {
            let t = &self.timings_ms;
            writeln!(
                s,
                "[timings_ms]\nencode={:.3}\nschedule={:.3}\nfilter={:.3}\npseudo={:.3}\nextract={:.3}",
                t.encode, t.schedule, t.filter, t.pseudo, t.extract
            )
            .unwrap();
            match t.oracle {
                Some(o) => writeln!(s, "oracle={o:.3}").unwrap(),
                None => writeln!(s, "oracle=-").unwrap(),
            }
        }
        s
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// MATCH iff the rounded count equals the directed oracle count and no flag fired.
pub fn verdict_for(extraction: Option<&ExtractionResult>, oracle: Option<&OracleSummary>) -> Verdict {
    let Some(oracle) = oracle else {
        return Verdict::Unverified;
    };
    match extraction {
        None => Verdict::Inconclusive,
        Some(x) if !x.flags.is_empty() => Verdict::Inconclusive,
        Some(x) if x.n_h_rounded == oracle.n_h_directed.into() => Verdict::Match,
        Some(_) => Verdict::Mismatch,
    }
}

/// Runs the whole pipeline on an already parsed graph. The profile's `n`
/// is replaced by the graph's vertex count.
pub fn run_graph(g: &Graph, profile: &PipelineProfile, opts: &RunOptions) -> Result<RunReport, StageError> {
    let mut profile = profile.clone();
    profile.n = g.n() as u64;
    let d = profile.desk_params().tag(Stage::Profile)?;
    let constraints_failed = validate_profile(&profile, opts.margin_bits)
        .failed()
        .into_iter()
        .map(String::from)
        .collect();
    let mut timings = Timings::default();

    let t = Instant::now();
    let f = grid_series(g, &profile).tag(Stage::Encode)?;
    timings.encode = elapsed_ms(t);

    let t = Instant::now();
    let schedule = build_schedule(&profile).tag(Stage::Schedule)?;
    timings.schedule = elapsed_ms(t);

    let t = Instant::now();
    let pipeline = run_pipeline(&f, &schedule, &profile).tag(Stage::Filter)?;
    timings.filter = elapsed_ms(t);

    let t = Instant::now();
    let (phi01, phi11) = run_pseudo_steps(&schedule, &profile).tag(Stage::Pseudo)?;
    timings.pseudo = elapsed_ms(t);

    let t = Instant::now();
    let (extraction, extraction_block) = match extract_nh(&pipeline.output, &phi01, &phi11, &schedule, d.p_2) {
        Ok(x) => {
            let block = ExtractionBlock::from_result(&x);
            (Some(x), block)
        }
        Err(e @ Error::Singular { .. }) => (None, ExtractionBlock::singular(e.to_string())),
        Err(e) => {
            return Err(StageError {
                stage: Stage::Extract,
                error: e,
            })
        }
    };
    timings.extract = elapsed_ms(t);

    let oracle = if g.n() <= opts.oracle_limit {
        let t = Instant::now();
        let o = oracle_summary(g, opts.oracle_limit).tag(Stage::Oracle)?;
        timings.oracle = Some(elapsed_ms(t));
        Some(o)
    } else {
        None
    };

    Ok(RunReport {
        graph: GraphBlock {
            n: g.n(),
            edges: g.edge_count(),
        },
        profile: ProfileBlock {
            entries: profile.to_text().lines().map(String::from).collect(),
            constraints_failed,
        },
        schedule: ScheduleBlock {
            alpha: schedule.alpha().to_sci(DIGEST_DIGITS),
            beta: schedule.beta().to_sci(DIGEST_DIGITS),
            r: schedule.all().iter().map(|r| r.to_sci(DIGEST_DIGITS)).collect(),
        },
        steps: pipeline.steps.iter().map(|s| s.digest(DIGEST_DIGITS)).collect(),
        verdict: verdict_for(extraction.as_ref(), oracle.as_ref()),
        oracle,
        extraction: extraction_block,
        timings_ms: timings,
    })
}

/// Parses both inputs, tagging failures with the stage that read them.
pub fn run_experiment(graph_text: &[u8], profile_text: &[u8], opts: &RunOptions) -> Result<RunReport, StageError> {
    let g = parse_graph(graph_text).tag(Stage::Graph)?;
    let profile = parse_profile(profile_text).tag(Stage::Profile)?;
    run_graph(&g, &profile, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub timings_ms: Timings,
}

/// Per-stage wall clock on complete graphs `K_n`, `n` from `ns`, using
/// `profile` with `n` replaced. Nothing is asserted about growth.
pub fn scaling_benchmark(
    ns: &[usize],
    profile: &PipelineProfile,
    opts: &RunOptions,
) -> Result<Vec<BenchRow>, StageError> {
    ns.iter()
        .map(|&n| {
            let g = Graph::complete(n).tag(Stage::Graph)?;
            let report = run_graph(&g, profile, opts)?;
            Ok(BenchRow {
                n,
                timings_ms: report.timings_ms,
            })
        })
        .collect()
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = String::from("n encode_ms schedule_ms filter_ms pseudo_ms extract_ms oracle_ms\n");
    for r in rows {
        let t = &r.timings_ms;
        writeln!(
            s,
            "{} {:.3} {:.3} {:.3} {:.3} {:.3} {}",
            r.n,
            t.encode,
            t.schedule,
            t.filter,
            t.pseudo,
            t.extract,
            t.oracle.map_or("-".to_string(), |o| format!("{o:.3}"))
        )
        .unwrap();
    }
    s
}
