use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use walkfilter::experiment::{bench_table, run_experiment, scaling_benchmark, RunOptions};
use walkfilter::extraction::extract_nh;
use walkfilter::filter_pipeline::{parse_pseudo, run_pipeline, run_pseudo_steps, write_pseudo, PseudoOutput};
use walkfilter::graph::parse_graph;
use walkfilter::grid::grid_series;
use walkfilter::numerics::format::{parse_series, write_series};
use walkfilter::schedule::{build_schedule, parse_profile, validate_profile, PipelineProfile, DEFAULT_MARGIN_BITS};
use walkfilter::walk_oracle::{oracle_summary, walk_spectrum, DEFAULT_ORACLE_LIMIT};

#[derive(Parser)]
#[command(
    name = "walkfilter",
    version,
    about = "Walk-number encoding and filter-cascade extraction of Hamiltonian path counts"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Profile file (flat key=value); defaults to the built-in desk profile.
    #[arg(long, global = true)]
    profile: Option<PathBuf>,
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON where a structured report exists.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Graph file to the polynomial form of f(t).
    Encode { graph: PathBuf },
    /// Series file through the filter cascade.
    Filter {
        series: PathBuf,
        /// Write every step output as step_<k>.series.
        #[arg(long)]
        dump_steps: Option<PathBuf>,
    },
    /// Pseudo-step run on e^{-t}.
    Pseudo,
    /// Solve for k0 from a pipeline output and a pseudo-step file.
    Extract { series: PathBuf, pseudo: PathBuf },
    /// Brute-force walk counts.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        spectrum: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
    },
    /// Evaluate the profile requirements.
    CheckProfile {
        #[arg(long, default_value_t = DEFAULT_MARGIN_BITS)]
        margin_bits: f64,
    },
    /// Full pipeline with oracle comparison.
    Run {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
        /// Include the timings block in the text report.
        #[arg(long)]
        timings: bool,
    },
    /// Per-stage timings on complete graphs.
    Bench {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
    },
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn load_profile(common: &Common) -> Result<PipelineProfile> {
    match &common.profile {
        Some(path) => parse_profile(&read(path)?).with_context(|| format!("profile {}", path.display())),
        None => Ok(PipelineProfile::desk()),
    }
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn execute(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    match &cli.command {
        Command::Encode { graph } => {
            let g = parse_graph(&read(graph)?).with_context(|| format!("graph {}", graph.display()))?;
            let mut profile = load_profile(common)?;
            profile.n = g.n() as u64;
            emit(common, &write_series(&grid_series(&g, &profile)?))
        }
        Command::Filter { series, dump_steps } => {
            let f = parse_series(&read(series)?).with_context(|| format!("series {}", series.display()))?;
            let profile = load_profile(common)?;
            let schedule = build_schedule(&profile)?;
            let out = run_pipeline(&f, &schedule, &profile)?;
            if let Some(dir) = dump_steps {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for step in &out.steps {
                    let path = dir.join(format!("step_{}.series", step.index));
                    fs::write(&path, write_series(&step.output))
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
            emit(common, &write_series(&out.output))
        }
        Command::Pseudo => {
            let profile = load_profile(common)?;
            let schedule = build_schedule(&profile)?;
            let (phi01, phi11) = run_pseudo_steps(&schedule, &profile)?;
            let prec = profile.desk_params()?.p_2;
            emit(common, &write_pseudo(&PseudoOutput { phi01, phi11, prec }))
        }
        Command::Extract { series, pseudo } => {
            let o = parse_series(&read(series)?).with_context(|| format!("series {}", series.display()))?;
            let ps = parse_pseudo(&read(pseudo)?).with_context(|| format!("pseudo {}", pseudo.display()))?;
            let profile = load_profile(common)?;
            let schedule = build_schedule(&profile)?;
            let p = profile.desk_params()?.p_2;
            let x = extract_nh(&o, &ps.phi01, &ps.phi11, &schedule, p)?;
            let block = ExtractText::from(&x);
            if common.json {
                emit(common, &to_json(&block)?)
            } else {
                emit(common, &block.to_text())
            }
        }
        Command::Oracle {
            graph,
            spectrum,
            oracle_limit,
        } => {
            let g = parse_graph(&read(graph)?).with_context(|| format!("graph {}", graph.display()))?;
            let summary = oracle_summary(&g, *oracle_limit)?;
            let spec = if *spectrum {
                Some(walk_spectrum(&g, *oracle_limit)?)
            } else {
                None
            };
            if common.json {
                #[derive(Serialize)]
                struct OracleJson {
                    #[serde(flatten)]
                    summary: walkfilter::walk_oracle::OracleSummary,
                    spectrum: Option<Vec<(String, u64)>>,
                }
                let spectrum = spec.map(|s| s.iter().map(|(w, c)| (w.to_string(), c)).collect());
                return emit(common, &to_json(&OracleJson { summary, spectrum })?);
            }
            let mut text = format!(
                "n_p={}\nn_h_directed={}\nn_h_undirected={}\n",
                summary.n_p, summary.n_h_directed, summary.n_h_undirected
            );
            if let Some(s) = spec {
                for (w, c) in s.iter() {
                    text.push_str(&format!("{w} {c}\n"));
                }
            }
            emit(common, &text)
        }
        Command::CheckProfile { margin_bits } => {
            let profile = load_profile(common)?;
            let report = validate_profile(&profile, *margin_bits);
            if common.json {
                emit(common, &to_json(&report)?)
            } else {
                emit(common, &report.to_text())
            }
        }
        Command::Run {
            graph,
            oracle_limit,
            timings,
        } => {
            let profile_text = match &common.profile {
                Some(p) => read(p)?,
                None => PipelineProfile::desk().to_text().into_bytes(),
            };
            let opts = RunOptions {
                oracle_limit: *oracle_limit,
                ..RunOptions::default()
            };
            let report = run_experiment(&read(graph)?, &profile_text, &opts)?;
            if common.json {
                emit(common, &to_json(&report)?)
            } else {
                emit(common, &report.to_text(*timings))
            }
        }
        Command::Bench {
            n_min,
            n_max,
            oracle_limit,
        } => {
            let profile = load_profile(common)?;
            let ns: Vec<usize> = (*n_min..=*n_max).collect();
            let opts = RunOptions {
                oracle_limit: *oracle_limit,
                ..RunOptions::default()
            };
            let rows = scaling_benchmark(&ns, &profile, &opts)?;
            if common.json {
                emit(common, &to_json(&rows)?)
            } else {
                emit(common, &bench_table(&rows))
            }
        }
    }
}

#[derive(Serialize)]
struct ExtractText {
    k0_re: String,
    k0_im: String,
    z1_re: String,
    z1_im: String,
    n_h_rounded: String,
    round_distance: String,
    imag_magnitude: String,
    residual_0: String,
    residual_1: String,
    residuals_ok: bool,
    flags: Vec<String>,
    k0_re_hex: String,
}

impl From<&walkfilter::extraction::ExtractionResult> for ExtractText {
    fn from(x: &walkfilter::extraction::ExtractionResult) -> Self {
        let d = 24;
        ExtractText {
            k0_re: x.k0.re.to_sci(d),
            k0_im: x.k0.im.to_sci(d),
            z1_re: x.z1.re.to_sci(d),
            z1_im: x.z1.im.to_sci(d),
            n_h_rounded: x.n_h_rounded.to_string(),
            round_distance: x.round_distance.to_sci(d),
            imag_magnitude: x.imag_magnitude.to_sci(d),
            residual_0: x.residuals[0].to_sci(d),
            residual_1: x.residuals[1].to_sci(d),
            residuals_ok: x.residuals_ok(),
            flags: x.flags.iter().map(|f| format!("{f:?}")).collect(),
            k0_re_hex: x.k0.re.to_hex(),
        }
    }
}

impl ExtractText {
    fn to_text(&self) -> String {
        format!(
            "[extraction]\nk0_re={}\nk0_im={}\nz1_re={}\nz1_im={}\nn_h_rounded={}\nround_distance={}\nimag_magnitude={}\nresidual_0={}\nresidual_1={}\nresiduals_ok={}\nflags={}\nk0_re_hex={}\n",
            self.k0_re,
            self.k0_im,
            self.z1_re,
            self.z1_im,
            self.n_h_rounded,
            self.round_distance,
            self.imag_magnitude,
            self.residual_0,
            self.residual_1,
            self.residuals_ok,
            self.flags.join(","),
            self.k0_re_hex
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.common.threads {
        Some(0) => Err(anyhow::anyhow!("--threads must be at least 1")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .context("building thread pool")
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
