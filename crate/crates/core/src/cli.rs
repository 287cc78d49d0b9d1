//! The `verlinde` command line.
//!
//! Exit codes: 0 on success, 1 when a check fails or a value cannot be
//! certified as an integer, 2 on argument or domain errors.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Family, GroupType, RootSystem};
use crate::suite::{self, format_residual, SuiteConfig, SuiteReport};
use crate::verlinde::{Evaluator, Level, VerlindeResult};
use crate::weights::{self, CenterSubgroupSpec, LevelWeight};
use crate::DEFAULT_PRECISION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "verlinde", version, about = "Certified Verlinde numbers for classical groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one Verlinde number.
    Compute(ComputeArgs),
    /// List the level-ℓ weights, or their Γ-orbits with --quotient.
    Weights(WeightsArgs),
    /// Run the identity checks.
    Suite(SuiteArgs),
    /// Compare the engine with the u-set oracle for SO(r).
    CompareOracle(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    So,
    Sp,
    Sc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quotient {
    So,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Md,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum)]
    pub group: GroupKind,
    /// SO(r) or Sp(2r).
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long = "type", value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub genus: u32,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Only with --group sc: divide by the subgroup giving SO.
    #[arg(long, value_enum)]
    pub quotient: Option<Quotient>,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long = "type", value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub rank: usize,
    #[arg(long)]
    pub level: u32,
    #[arg(long, value_enum)]
    pub quotient: Option<Quotient>,
    #[arg(long, value_enum, default_value = "md")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 12)]
    pub r_max: u32,
    #[arg(long, default_value_t = 5)]
    pub genus_max: u32,
    #[arg(long, default_value_t = 4)]
    pub sp_max: u32,
    #[arg(long, default_value_t = 4)]
    pub sp_genus_max: u32,
    #[arg(long, value_delimiter = ',', value_parser = parse_family, default_value = "A,B,C,D")]
    pub types: Vec<Family>,
    #[arg(long, default_value_t = 6)]
    pub rank_max: usize,
    #[arg(long, default_value_t = 4)]
    pub level_max: u32,
    #[arg(long, value_enum, default_value = "md")]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub genus: u32,
    #[arg(long, value_enum, default_value = "md")]
    pub format: ReportFormat,
}

/// One computed value, in the stable output schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub group_label: String,
    pub level: Level,
    pub genus: u32,
    pub value: String,
    pub residual: String,
    pub precision_bits: usize,
    pub term_count: usize,
}

impl From<&VerlindeResult> for OutputRecord {
    fn from(r: &VerlindeResult) -> Self {
        Self {
            group_label: r.group_label.clone(),
            level: r.level.clone(),
            genus: r.genus,
            value: r.value.to_string(),
            residual: format_residual(r.residual),
            precision_bits: r.precision_bits,
            term_count: r.term_count,
        }
    }
}

const RECORD_COLUMNS: [&str; 7] = [
    "group_label",
    "level",
    "genus",
    "value",
    "residual",
    "precision_bits",
    "term_count",
];

impl OutputRecord {
    fn fields(&self) -> [String; 7] {
        [
            self.group_label.clone(),
            self.level.to_string(),
            self.genus.to_string(),
            self.value.clone(),
            self.residual.clone(),
            self.precision_bits.to_string(),
            self.term_count.to_string(),
        ]
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("record serializes") + "\n",
            Format::Csv => csv_table(&RECORD_COLUMNS, [self.fields().to_vec()]),
            Format::Md => md_table(&RECORD_COLUMNS, [self.fields().to_vec()]),
        }
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn md_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for row in rows {
        s.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    s
}

/// A row of the `weights` listing: a weight, or an orbit with --quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightRow {
    pub coefficients: Vec<u32>,
    pub theta_level: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<u32>>>,
}

fn bracket<T: ToString>(items: &[T]) -> String {
    format!("[{}]", items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn weight_row(rs: &RootSystem, w: &LevelWeight) -> Result<WeightRow> {
    let u = if matches!(rs.family(), Family::B | Family::D) {
        Some(weights::u_coords(rs, w.vector())?.u.iter().map(|q| q.to_string()).collect())
    } else {
        None
    };
    Ok(WeightRow {
        coefficients: w.coefficients().to_vec(),
        theta_level: w.theta_level(rs),
        u,
        orbit_size: None,
        members: None,
    })
}

pub fn weight_rows(family: Family, rank: usize, level: u32, quotient: Option<Quotient>) -> Result<Vec<WeightRow>> {
    let rs = RootSystem::build(GroupType::new(family, rank)?);
    let set = weights::enumerate_level_weights(&rs, level);
    match quotient {
        None => set.weights().iter().map(|w| weight_row(&rs, w)).collect(),
        Some(Quotient::So) => {
            let spec = CenterSubgroupSpec::special_orthogonal(&rs)?;
            let pprime = weights::restrict_to_quotient(&set, spec)?;
            let orbits = weights::orbit_decompose(&pprime, spec)?;
            orbits
                .orbits
                .iter()
                .map(|o| {
                    let mut row = weight_row(&rs, &o.representative)?;
                    row.orbit_size = Some(o.size);
                    row.members = Some(o.members.iter().map(|m| m.coefficients().to_vec()).collect());
                    Ok(row)
                })
                .collect()
        }
    }
}

fn render_weight_rows(rows: &[WeightRow], format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(rows).expect("rows serialize") + "\n";
    }
    let with_u = rows.iter().any(|r| r.u.is_some());
    let with_orbits = rows.iter().any(|r| r.orbit_size.is_some());
    let mut header = vec!["coefficients", "theta_level"];
    if with_u {
        header.push("u");
    }
    if with_orbits {
        header.extend(["orbit_size", "members"]);
    }
    let table = rows.iter().map(|r| {
        let mut row = vec![bracket(&r.coefficients), r.theta_level.to_string()];
        if let Some(u) = &r.u {
            row.push(format!("({})", u.join(", ")));
        }
        if let (Some(size), Some(members)) = (r.orbit_size, &r.members) {
            row.push(size.to_string());
            row.push(members.iter().map(|m| bracket(m)).collect::<Vec<_>>().join(" "));
        }
        row
    });
    match format {
        Format::Csv => csv_table(&header, table),
        _ => md_table(&header, table),
    }
}

fn render_report(report: &SuiteReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Md => report.to_markdown(),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(ErrorKind::MissingRequiredArgument, msg)
}

enum Failure {
    Usage(clap::Error),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn require<T>(v: Option<T>, flag: &str, group: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(usage_error(format!("--group {group} requires {flag}"))))
}

fn reject<T>(v: &Option<T>, flag: &str, group: &str) -> std::result::Result<(), Failure> {
    match v {
        Some(_) => Err(Failure::Usage(
            Cli::command().error(ErrorKind::ArgumentConflict, format!("{flag} cannot be used with --group {group}")),
        )),
        None => Ok(()),
    }
}

fn compute(args: &ComputeArgs) -> std::result::Result<VerlindeResult, Failure> {
    let ev = Evaluator::with_precision(args.precision)?;
    match args.group {
        GroupKind::So => {
            reject(&args.level, "--level", "so")?;
            reject(&args.family, "--type", "so")?;
            reject(&args.rank, "--rank", "so")?;
            reject(&args.quotient, "--quotient", "so")?;
            Ok(ev.n_so(require(args.r, "--r", "so")?, args.genus)?)
        }
        GroupKind::Sp => {
            reject(&args.family, "--type", "sp")?;
            reject(&args.rank, "--rank", "sp")?;
            reject(&args.quotient, "--quotient", "sp")?;
            let r = require(args.r, "--r", "sp")?;
            let level = require(args.level, "--level", "sp")?;
            Ok(ev.n_sp(r, level, args.genus)?)
        }
        GroupKind::Sc => {
            reject(&args.r, "--r", "sc")?;
            let family = require(args.family, "--type", "sc")?;
            let rank = require(args.rank, "--rank", "sc")?;
            let level = require(args.level, "--level", "sc")?;
            let rs = RootSystem::build(GroupType::new(family, rank)?);
            match args.quotient {
                None => Ok(ev.sc(&rs, level, args.genus)?),
                Some(Quotient::So) => {
                    let spec = CenterSubgroupSpec::special_orthogonal(&rs)?;
                    Ok(ev.quotient(&rs, level, spec, args.genus)?)
                }
            }
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let code = match cli.command {
        Command::Compute(args) => match compute(&args) {
            Ok(r) => {
                write_out(out, &OutputRecord::from(&r).render(args.format));
                EXIT_OK
            }
            Err(Failure::Domain(Error::Uncertified(r))) => {
                write_out(out, &OutputRecord::from(r.as_ref()).render(args.format));
                return Err(Failure::Domain(Error::Uncertified(r)));
            }
            Err(e) => return Err(e),
        },
        Command::Weights(args) => {
            let rows = weight_rows(args.family, args.rank, args.level, args.quotient)?;
            write_out(out, &render_weight_rows(&rows, args.format));
            EXIT_OK
        }
        Command::Suite(args) => {
            let config = SuiteConfig {
                r_max: args.r_max,
                genus_max: args.genus_max,
                sp_max: args.sp_max,
                sp_genus_max: args.sp_genus_max,
                types: args.types,
                rank_max: args.rank_max,
                level_max: args.level_max,
            };
            report_exit(&config.run()?, args.format, out)
        }
        Command::CompareOracle(args) => report_exit(&suite::compare_oracle(args.r, args.genus)?, args.format, out),
    };
    Ok(code)
}

fn report_exit(report: &SuiteReport, format: ReportFormat, out: &mut dyn Write) -> i32 {
    write_out(out, &render_report(report, format));
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn write_out(out: &mut dyn Write, s: &str) {
    // a closed pipe is not worth a panic
    let _ = out.write_all(s.as_bytes());
    let _ = out.flush();
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write_out(out, &text);
                    EXIT_OK
                }
                _ => {
                    write_out(err, &text);
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            write_out(err, &e.render().to_string());
            EXIT_USAGE
        }
        Err(Failure::Domain(e @ Error::Uncertified(_))) => {
            write_out(err, &format!("error: {e}\n"));
            EXIT_CHECK_FAILED
        }
        Err(Failure::Domain(e)) => {
            write_out(err, &format!("error: {e}\n"));
            EXIT_USAGE
        }
    }
}
