//! Command-line front end. JSON reports go to standard output, a one-line
//! human summary to standard error.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::census::{census, prop31_certificate, randomized_witness_from_z, sylow_cover_bound};
use crate::classify::{
    classify_moderation, constructor_candidates, is_p_concealed, stab_p_part, SearchOptions, Stage, Status, Strategy,
};
use crate::error::{Error, Result};
use crate::group::Limits;
use crate::pointset::PointSet;
use crate::report::{CandidateCheck, CertificatePayload, GroupSummary, Payload, Report, SylowSummary, WitnessPayload};
use crate::sylow::p_part;
use crate::verify::{run_criterion, verify_paper, VerificationReport};
use crate::zoo::{GroupInstance, GroupSpec};

pub const EXIT_MODERATE: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_EXTREME: i32 = 10;
pub const EXIT_INAPPLICABLE: i32 = 11;

#[derive(Debug, Parser)]
#[command(name = "pmoderate", version, about = "Setwise stabilizers and p-moderation of finite permutation groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Largest permitted domain size.
    #[arg(long, global = true, default_value_t = Limits::default().max_degree)]
    pub max_degree: usize,
    /// Largest group order that may be enumerated element by element.
    #[arg(long, global = true, default_value_t = Limits::default().enumeration_bound)]
    pub max_order: u128,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Constructive,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// JSON group specification file, or `-` for standard input.
    #[arg(required_unless_present = "named", conflicts_with = "named")]
    pub spec: Option<PathBuf>,
    /// Built-in group name instead of a specification file, e.g. `Product(D6,D6)`.
    #[arg(long)]
    pub named: Option<String>,
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide p-moderation, reporting a verified witness when moderate.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "constructive")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random subsets tried before falling back to the exhaustive scan.
        #[arg(long, default_value_t = 1000)]
        trials: u32,
    },
    /// Test whether every subset is stabilized by some Sylow p-subgroup.
    Concealed {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Histogram of stabilizer p-parts over all subsets.
    Census {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// A Sylow p-subgroup, the number of conjugates and its orbit sizes.
    Sylow {
        #[command(flatten)]
        group: GroupArgs,
        /// List every conjugate.
        #[arg(long)]
        all: bool,
    },
    /// The counting certificate, with a random witness when it applies.
    Prop31 {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a given subset, or every constructed candidate of an affine group.
    Witness {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated points, e.g. `0,4`.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// Run the reproduction suite.
    VerifyPaper {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
        criterion: Option<u8>,
    },
}

/// What a command produced: the report and the process exit code.
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
    pub summary: String,
}

fn load(args: &GroupArgs, limits: Limits) -> Result<(serde_json::Value, GroupInstance)> {
    let (input, spec) = match (&args.named, &args.spec) {
        (Some(name), _) => (json!({ "named": name }), GroupSpec::named(name)),
        (None, Some(path)) => {
            let mut text = String::new();
            let read = if path.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut text).map(|_| ())
            } else {
                std::fs::read_to_string(path).map(|t| text = t)
            };
            read.map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            (value, GroupSpec::from_json(&text)?)
        }
        (None, None) => return Err(Error::InvalidSpec("no group given".into())),
    };
    Ok((input, spec.build(limits)?))
}

pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::ElementaryAbelian(_) => EXIT_INAPPLICABLE,
        _ => EXIT_ERROR,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let limits = Limits { max_degree: cli.max_degree, enumeration_bound: cli.max_order, ..Limits::default() };
    let (name, input, group, payload, exit_code, summary) = match &cli.command {
        Command::VerifyPaper { seed, criterion } => {
            let report = match criterion {
                Some(id) => {
                    let r = run_criterion(*id, *seed);
                    VerificationReport { seed: *seed, passed: r.passed, criteria: vec![r] }
                }
                None => verify_paper(*seed),
            };
            let lines: Vec<String> = report.criteria.iter().map(|c| c.summary_line()).collect();
            let code = if report.passed { EXIT_MODERATE } else { EXIT_FAILURE };
            let summary = format!("{}\n{} of {} criteria passed", lines.join("\n"),
                report.criteria.iter().filter(|c| c.passed).count(), report.criteria.len());
            ("verify-paper", serde_json::Value::Null, None, Payload::Verification(report), code, summary)
        }
        command => {
            let args = match command {
                Command::Classify { group, .. }
                | Command::Concealed { group }
                | Command::Census { group }
                | Command::Sylow { group, .. }
                | Command::Prop31 { group, .. }
                | Command::Witness { group, .. } => group,
                Command::VerifyPaper { .. } => unreachable!(),
            };
            let (input, inst) = load(args, limits)?;
            let summary_group = GroupSummary::of(&inst)?;
            let (name, payload, code, summary) = run_group_command(command, &inst, args.p)?;
            (name, input, Some(summary_group), payload, code, summary)
        }
    };
    Ok(Outcome { report: Report::new(name, input, group, payload, start.elapsed()), exit_code, summary })
}

fn run_group_command(command: &Command, inst: &GroupInstance, p: u64) -> Result<(&'static str, Payload, i32, String)> {
    let g = &inst.group;
    let label = &inst.label;
    Ok(match command {
        Command::Classify { strategy, seed, trials, .. } => {
            let strategy = match strategy {
                StrategyArg::Exhaustive => Strategy::Exhaustive,
                StrategyArg::Constructive => Strategy::Constructive,
            };
            let r = classify_moderation(inst, p, strategy, SearchOptions { seed: *seed, samples: *trials })?;
            let (code, text) = match &r.status {
                Status::Moderate { witness, stab_p_part } => (
                    EXIT_MODERATE,
                    format!("{label} is {p}-moderate: witness {:?} has stabilizer {p}-part {stab_p_part} < {}", witness.points(), r.group_p_part),
                ),
                Status::Extreme { concealed } => (EXIT_EXTREME, format!("{label} is {p}-extreme (concealed: {concealed:?})")),
            };
            ("classify", Payload::Classification(r), code, text)
        }
        Command::Concealed { .. } => {
            let c = is_p_concealed(g, p)?;
            let text = match &c.uncovered {
                None => format!("{label} is {p}-concealed"),
                Some(u) => format!("{label} is not {p}-concealed: {:?} is stabilized by no Sylow {p}-subgroup", u.points()),
            };
            ("concealed", Payload::Concealment(c), EXIT_MODERATE, text)
        }
        Command::Census { .. } => {
            let c = census(g, p)?;
            let text = format!("{label}: stabilizer {p}-parts over all subsets {:?}", c.histogram);
            ("census", Payload::Census(c), EXIT_MODERATE, text)
        }
        Command::Sylow { all, .. } => {
            let s = SylowSummary::compute(g, p, *all)?;
            let text = format!("{label}: {} Sylow {p}-subgroups of order {}, orbit sizes {:?}", s.count, s.sylow_order, s.orbit_sizes);
            ("sylow", Payload::Sylow(s), EXIT_MODERATE, text)
        }
        Command::Prop31 { trials, seed, .. } => {
            let certificate = prop31_certificate(g, p)?;
            let cover_bound = sylow_cover_bound(g, p)?;
            let random_witness = if certificate.verdict {
                randomized_witness_from_z(g, p, &certificate.z, *trials, *seed)?
            } else {
                None
            };
            let text = format!(
                "{label}: {}^{} {} 2^{} so the certificate is {}",
                certificate.lhs,
                p * p,
                if certificate.verdict { "<" } else { ">=" },
                certificate.rhs_exponent_numerator,
                if certificate.verdict { "conclusive" } else { "silent" }
            );
            let payload = CertificatePayload { certificate, cover_bound, random_witness };
            ("prop31", Payload::Certificate(payload), EXIT_MODERATE, text)
        }
        Command::Witness { subset, .. } => {
            let full = p_part(g.order()?, p)?;
            let candidates: Vec<(Stage, PointSet)> = match (subset, &inst.affine) {
                (Some(points), _) => vec![(Stage::Supplied, PointSet::from_points(g.degree(), points.iter().copied())?)],
                (None, Some(space)) => constructor_candidates(g, space, p),
                (None, None) => {
                    return Err(Error::Precondition("witness constructors need an affine group; pass --subset".into()))
                }
            };
            let checks = candidates
                .into_iter()
                .map(|(stage, subset)| {
                    let part = stab_p_part(g, &subset, p)?;
                    Ok(CandidateCheck { stage, subset, stab_p_part: part, is_witness: 1 < part && part < full })
                })
                .collect::<Result<Vec<_>>>()?;
            let found = checks.iter().filter(|c| c.is_witness).count();
            let text = format!("{label}: {found} of {} candidates are {p}-moderation witnesses", checks.len());
            let code = if found > 0 { EXIT_MODERATE } else { EXIT_FAILURE };
            ("witness", Payload::Witness(WitnessPayload { p, group_p_part: full, candidates: checks }), code, text)
        }
        Command::VerifyPaper { .. } => unreachable!(),
    })
}

/// Parses arguments, runs the command, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_MODERATE };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serializes"));
            eprintln!("{}", outcome.summary);
            outcome.exit_code
        }
        Err(error) => {
            let code = exit_code_for(&error);
            let body = json!({ "tool": crate::report::TOOL_NAME, "error": error.to_string(), "exit_code": code });
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            eprintln!("error: {error}");
            code
        }
    }
}
