// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! `actopt`: simulate, optimize, report power and check equivalence of BLIF
//! netlists.
//!
//! Exit codes: 0 success, 1 parse or read error, 2 simulation error,
//! 3 profile/netlist mismatch, 4 zero baseline power, 5 equivalence failure,
//! 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use actopt_core::blif::{emit_blif, parse_blif};
use actopt_core::equiv::{check_equiv, Verdict};
use actopt_core::manifest::{parse_manifest, RunManifest};
use actopt_core::netlist::Netlist;
use actopt_core::opt::run_pass;
use actopt_core::pipeline::{compare_power, run_pipeline, stimulus_for, PipelineError};
use actopt_core::power::{write_power_table, PowerError};
use actopt_core::profile::{read_profile, write_profile};
use actopt_core::sim::simulate;

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

const PARSE: u8 = 1;
const SIM: u8 = 2;
const MISMATCH: u8 = 3;
const ZERO_BASELINE: u8 = 4;
const NOT_EQUIVALENT: u8 = 5;
const USAGE: u8 = 64;

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Stimulus(_) | PipelineError::Sim(_) => SIM,
            PipelineError::Opt(actopt_core::opt::OptError::Profile(_)) => MISMATCH,
            PipelineError::Opt(_) => SIM,
            PipelineError::Power(PowerError::ZeroBaseline(_)) => ZERO_BASELINE,
            PipelineError::Power(PowerError::BadConfig(_)) => USAGE,
            PipelineError::Power(_) => MISMATCH,
            PipelineError::Equiv(_) => MISMATCH,
            PipelineError::NotEquivalent(_) => NOT_EQUIVALENT,
        };
        fail(code, e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "actopt", version, about = "Activity-driven LUT netlist optimization")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a netlist and write its activity profile.
    Sim {
        #[command(flatten)]
        common: Common,
        /// Profile path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Rewrite high-activity nets using a profile.
    Opt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Optimized BLIF.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Pass report; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Fail on a profile whose stimulus digest does not match.
        #[arg(long)]
        strict: bool,
        /// Skip the equivalence check of the result.
        #[arg(long)]
        no_verify: bool,
    },
    /// Compare modeled dynamic power of a baseline and an optimized netlist.
    Power {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        power: PowerArgs,
        /// Optimized netlist; only the baseline is reported when omitted.
        #[arg(long)]
        optimized: Option<PathBuf>,
        /// Report path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check two netlists for equivalence (exhaustive or lockstep).
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        optimized: PathBuf,
    },
    /// Run sim, opt, power and check on one or more netlists.
    All {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opt: OptArgs,
        #[command(flatten)]
        power: PowerArgs,
        /// Extra netlists processed alongside `--blif`.
        #[arg(long = "also", num_args = 1..)]
        more: Vec<PathBuf>,
        /// Output directory.
        #[arg(short, long)]
        out: PathBuf,
        /// Netlists processed concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    blif: Option<PathBuf>,
    /// Manifest of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    cycles: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct OptArgs {
    /// `median`, `percentile:<q>` or `absolute:<n>`.
    #[arg(long)]
    threshold: Option<String>,
    /// `all`, `none`, or a comma list of `shannon_split`, `driver_duplicate`.
    #[arg(long)]
    transforms: Option<String>,
    /// Maximum LUT growth in percent.
    #[arg(long)]
    max_area_growth: Option<String>,
    #[arg(long)]
    min_fanout: Option<String>,
}

#[derive(Args)]
struct PowerArgs {
    #[arg(long)]
    supply_voltage: Option<String>,
    #[arg(long)]
    clock_freq: Option<String>,
    #[arg(long)]
    fanout_exponent: Option<String>,
}

fn manifest(common: &Common, opt: Option<&OptArgs>, power: Option<&PowerArgs>) -> Result<RunManifest, Failure> {
    let mut m = match &common.config {
        Some(p) => parse_manifest(&read(p)?).map_err(|e| fail(PARSE, format!("{}: {e}", p.display())))?,
        None => RunManifest::default(),
    };
    let mut sets: Vec<(&str, String)> = Vec::new();
    if let Some(b) = &common.blif {
        m.blif = Some(b.clone());
    }
    if let Some(c) = common.cycles {
        sets.push(("cycles", c.to_string()));
    }
    if let Some(s) = common.seed {
        sets.push(("seed", s.to_string()));
    }
    if let Some(o) = opt {
        for (k, v) in [
            ("threshold", &o.threshold),
            ("transforms", &o.transforms),
            ("max_area_growth_pct", &o.max_area_growth),
            ("min_fanout", &o.min_fanout),
        ] {
            if let Some(v) = v {
                sets.push((k, v.clone()));
            }
        }
    }
    if let Some(p) = power {
        for (k, v) in [
            ("supply_voltage", &p.supply_voltage),
            ("clock_freq", &p.clock_freq),
            ("fanout_exponent", &p.fanout_exponent),
        ] {
            if let Some(v) = v {
                sets.push((k, v.clone()));
            }
        }
    }
    for (k, v) in sets {
        m.set(k, &v).map_err(|e| fail(USAGE, e.to_string()))?;
    }
    m.validate().map_err(|e| fail(USAGE, e.to_string()))?;
    Ok(m)
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| fail(PARSE, format!("{}: {e}", p.display())))
}

fn write(p: &Path, text: &str) -> Result<(), Failure> {
    fs::write(p, text).map_err(|e| fail(PARSE, format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(p: &Path) -> Result<Netlist, Failure> {
    parse_blif(&read(p)?).map_err(|e| fail(PARSE, format!("{}: {e}", p.display())))
}

fn input_path(m: &RunManifest) -> Result<PathBuf, Failure> {
    m.blif.clone().ok_or_else(|| fail(USAGE, "no input netlist (use --blif or `blif =` in --config)"))
}

fn same_file(a: &Path, b: &Path) -> bool {
    a == b || matches!((fs::canonicalize(a), fs::canonicalize(b)), (Ok(x), Ok(y)) if x == y)
}

fn warn(msgs: &[String]) {
    for w in msgs {
        eprintln!("actopt: warning: {w}");
    }
}

fn cmd_sim(common: &Common, out: Option<&Path>) -> Result<(), Failure> {
    let m = manifest(common, None, None)?;
    let nl = load(&input_path(&m)?)?;
    let stim = stimulus_for(&nl, &m).map_err(|e| fail(SIM, e.to_string()))?;
    let p = simulate(&nl, &stim).map_err(|e| fail(SIM, e.to_string()))?;
    if common.verbose {
        warn(p.warnings());
    }
    emit(out, &write_profile(&p))
}

#[allow(clippy::too_many_arguments)]
fn cmd_opt(
    common: &Common,
    args: &OptArgs,
    profile: Option<&Path>,
    out: Option<&Path>,
    report: Option<&Path>,
    strict: bool,
    no_verify: bool,
) -> Result<(), Failure> {
    let mut m = manifest(common, Some(args), None)?;
    let input = input_path(&m)?;
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| m.out.clone())
        .ok_or_else(|| fail(USAGE, "opt needs --out"))?;
    if same_file(&input, &out) {
        return Err(fail(USAGE, format!("refusing to overwrite input {}", input.display())));
    }
    let nl = load(&input)?;
    let prof_path = profile
        .map(Path::to_path_buf)
        .or_else(|| m.profile.clone())
        .ok_or_else(|| fail(USAGE, "opt needs --profile"))?;
    let prof = read_profile(&read(&prof_path)?).map_err(|e| fail(PARSE, format!("{}: {e}", prof_path.display())))?;
    prof.check_matches(&nl).map_err(|e| fail(MISMATCH, e.to_string()))?;
    if !m.has_explicit_cycles() {
        m.cycles = prof.num_cycles().max(2);
    }
    let stim = stimulus_for(&nl, &m).map_err(|e| fail(SIM, e.to_string()))?;
    if stim.digest() != prof.digest() {
        let msg = format!(
            "profile digest {:016x} does not match the stimulus digest {:016x}; the profile may be stale",
            prof.digest(),
            stim.digest()
        );
        if strict {
            return Err(fail(MISMATCH, msg));
        }
        warn(&[msg]);
    }
    let (optimized, pass) = run_pass(&nl, &prof, &m.opt).map_err(|e| fail(MISMATCH, e.to_string()))?;
    if !no_verify {
        let (mode, r) = check_equiv(&nl, &optimized, &stim).map_err(|e| fail(MISMATCH, e.to_string()))?;
        if r.verdict == Verdict::Mismatch {
            return Err(fail(NOT_EQUIVALENT, format!("{mode} check failed: {r}")));
        }
        if common.verbose {
            eprintln!("actopt: {mode} check: {r}");
        }
    }
    write(&out, &emit_blif(&optimized))?;
    emit(report, &pass.to_text())
}

fn cmd_power(common: &Common, args: &PowerArgs, optimized: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let m = manifest(common, None, Some(args))?;
    let base = load(&input_path(&m)?)?;
    let stim = stimulus_for(&base, &m).map_err(|e| fail(SIM, e.to_string()))?;
    let reports = match optimized {
        Some(p) => {
            let opt = load(p)?;
            let (_, _, rb, ro) = compare_power(&base, &opt, &stim, &m.power)?;
            vec![rb, ro]
        }
        None => {
            let prof = simulate(&base, &stim).map_err(|e| fail(SIM, e.to_string()))?;
            let r = actopt_core::power::estimate_dynamic_power(&base, &prof, &m.power)
                .map_err(PipelineError::from)?;
            vec![r]
        }
    };
    emit(out, &write_power_table(&reports, common.verbose))
}

fn cmd_check(common: &Common, optimized: &Path) -> Result<(), Failure> {
    let mut m = manifest(common, None, None)?;
    if !m.has_explicit_cycles() {
        m.cycles = 10_000;
    }
    let a = load(&input_path(&m)?)?;
    let b = load(optimized)?;
    let stim = stimulus_for(&a, &m).map_err(|e| fail(SIM, e.to_string()))?;
    let (mode, r) = check_equiv(&a, &b, &stim).map_err(|e| fail(MISMATCH, e.to_string()))?;
    println!("{mode} {r}");
    if r.verdict == Verdict::Mismatch {
        return Err(fail(NOT_EQUIVALENT, "netlists differ"));
    }
    Ok(())
}

fn stem(p: &Path) -> String {
    p.file_stem().map_or("netlist".into(), |s| s.to_string_lossy().into_owned())
}

fn cmd_all(common: &Common, opt: &OptArgs, power: &PowerArgs, more: &[PathBuf], out: &Path, jobs: usize) -> Result<(), Failure> {
    let m = manifest(common, Some(opt), Some(power))?;
    let mut inputs = vec![input_path(&m)?];
    inputs.extend(more.iter().cloned());
    let stems: Vec<String> = inputs.iter().map(|p| stem(p)).collect();
    for (i, s) in stems.iter().enumerate() {
        if stems[..i].contains(s) {
            return Err(fail(USAGE, format!("two inputs share the name `{s}`")));
        }
    }
    fs::create_dir_all(out).map_err(|e| fail(PARSE, format!("{}: {e}", out.display())))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| fail(USAGE, e.to_string()))?;
    let results: Vec<Result<_, Failure>> = pool.install(|| {
        inputs
            .par_iter()
            .zip(&stems)
            .map(|(path, stem)| {
                let nl = load(path)?;
                let r = run_pipeline(&nl, &m)?;
                write(&out.join(format!("{stem}.prof")), &write_profile(&r.profile))?;
                write(&out.join(format!("{stem}.opt.blif")), &emit_blif(&r.optimized))?;
                write(&out.join(format!("{stem}.pass.txt")), &r.pass.to_text())?;
                write(&out.join(format!("{stem}.check.txt")), &format!("{} {}\n", r.check_mode, r.check))?;
                if common.verbose {
                    warn(r.profile.warnings());
                }
                Ok(r)
            })
            .collect()
    });
    let mut reports = Vec::new();
    for r in results {
        let r = r?;
        reports.push(r.baseline_power);
        reports.push(r.optimized_power);
    }
    let table = write_power_table(&reports, common.verbose);
    write(&out.join("power.txt"), &table)?;
    print!("{table}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Sim { common, out } => cmd_sim(common, out.as_deref()),
        Cmd::Opt {
            common,
            opt,
            profile,
            out,
            report,
            strict,
            no_verify,
        } => cmd_opt(
            common,
            opt,
            profile.as_deref(),
            out.as_deref(),
            report.as_deref(),
            *strict,
            *no_verify,
        ),
        Cmd::Power {
            common,
            power,
            optimized,
            out,
        } => cmd_power(common, power, optimized.as_deref(), out.as_deref()),
        Cmd::Check { common, optimized } => cmd_check(common, optimized),
        Cmd::All {
            common,
            opt,
            power,
            more,
            out,
            jobs,
        } => cmd_all(common, opt, power, more, out, *jobs),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("actopt: error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
