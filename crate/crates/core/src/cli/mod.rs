//! Command-line front end.
//!
//! Exit codes: 0 success, 1 mismatch against expected values, 2 invalid
//! input, 64 usage error.

mod variety_file;
mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alphabet::{builtin_model, VarietyModel, MODEL_NAMES};
use crate::count::{count_range, table2_csv, table2_markdown, table2_rows, Convention, PointCountRecord};
use crate::modular::{
    builtin_form, congruence_match, esnault_guess, eta_quotient, exact_cy3_fit, format_coefficients, CoefficientTable,
    EtaQuotientSpec, FormSource, GroupLabel, NewformSpec,
};
use crate::sing::{table1, table1_markdown};

pub use variety_file::{FileKind, VarietyFile, VarietyFileError};
pub use verify::{verify_paper, CheckItem, ExpectationTable, Section, SectionReport, VerifyReport, TABLE2};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Relative `--out` paths are resolved against this directory when set.
pub const REPORT_DIR_ENV: &str = "OCTIC_REPORT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "octic",
    version,
    about = "Point counts, singular loci and modular congruences for double octics and K3 double covers"
)]
pub struct Cli {
    /// Worker threads for point counting; 0 uses every available core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
    Markdown,
}

/// Keeps primes congruent to one of `residues` modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFilter {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl PrimeFilter {
    pub fn parse(text: &str) -> Result<PrimeFilter, String> {
        let (m, rs) = text
            .split_once(':')
            .ok_or_else(|| format!("expected MODULUS:R1,R2,..., got {text:?}"))?;
        let modulus: u64 = m.trim().parse().map_err(|_| format!("bad modulus {m:?}"))?;
        if modulus == 0 {
            return Err("modulus must be positive".into());
        }
        let residues = rs
            .split(',')
            .map(|r| r.trim().parse::<u64>().map_err(|_| format!("bad residue {r:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PrimeFilter { modulus, residues })
    }

    pub fn keeps(&self, p: u64) -> bool {
        self.residues.contains(&(p % self.modulus))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute the published tables and identities and compare.
    VerifyPaper {
        /// Comma-separated subset of sections; all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        sections: Vec<Section>,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count points over every odd prime up to a bound.
    Count {
        /// Builtin model name or path to a variety file.
        model: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unirationality guess and congruence test against a newform.
    Guess {
        model: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Builtin form name, `eta:M:E,...`, or a coefficient file.
        #[arg(long)]
        form: String,
        #[arg(long, value_enum)]
        convention: Convention,
        /// Restrict to primes in given classes, e.g. `8:5,7`.
        #[arg(long, value_parser = PrimeFilter::parse)]
        primes: Option<PrimeFilter>,
        /// Coefficients b_1, b_2, ... a non-builtin form must reproduce.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        anchor: Vec<i64>,
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long, default_value_t = 0)]
        level: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print an eta quotient's coefficients in the coefficient file format.
    Eta {
        /// Factors as `m:e,m:e,...`.
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
        #[arg(long, default_value_t = 20)]
        truncation: usize,
    },
    /// Write a builtin model as a variety file.
    Export {
        model: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Incidence table of the special points of the branch octic.
    Table1 {
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point counts of the double octic with residues.
    Table2 {
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
struct Output {
    text: String,
    out: Option<PathBuf>,
    code: i32,
    diagnostics: String,
}

impl Output {
    fn ok(text: String, out: Option<PathBuf>) -> Output {
        Output {
            text,
            out,
            code: EXIT_OK,
            diagnostics: String::new(),
        }
    }
}

/// Error mapped to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Loads a builtin model by name, or a variety file by path.
pub fn load_model(spec: &str) -> Result<VarietyModel, String> {
    if let Some(m) = builtin_model(spec) {
        return Ok(m);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(format!(
            "{spec:?} is neither a builtin model ({}) nor an existing file",
            MODEL_NAMES.join(", ")
        ));
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("{spec}: {e}"))?;
    VarietyFile::parse(&text)
        .and_then(|f| f.to_model())
        .map_err(|e| format!("{spec}: {e}"))
}

fn load_form(
    arg: &str,
    convention: Convention,
    weight: Option<u32>,
    level: u64,
    anchor: Vec<i64>,
) -> Result<NewformSpec, InputError> {
    if let Some(mut f) = builtin_form(arg) {
        // a user anchor adds to the builtin gate rather than replacing it
        if !anchor.is_empty() {
            f.validate()?;
            f.anchor = anchor;
        }
        return Ok(f);
    }
    let source = if let Some(spec) = arg.strip_prefix("eta:") {
        FormSource::Eta(EtaQuotientSpec::parse(spec)?)
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| format!("form {arg:?}: {e}"))?;
        FormSource::Table(CoefficientTable::parse(&text)?)
    };
    let weight = weight.unwrap_or(match convention {
        Convention::Weight3 => 3,
        Convention::Weight4 => 4,
    });
    Ok(NewformSpec {
        name: arg.to_string(),
        weight,
        level,
        group: if weight.is_multiple_of(2) {
            GroupLabel::Gamma0
        } else {
            GroupLabel::Gamma1
        },
        source,
        anchor,
    })
}

fn records_markdown(records: &[PointCountRecord]) -> String {
    let mut out =
        String::from("| p | count | zeros | squares | nonsquares | good reduction |\n|---|---|---|---|---|---|\n");
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    for r in records {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.p,
            r.count,
            r.zeros,
            opt(r.squares),
            opt(r.nonsquares),
            if r.good_reduction { "yes" } else { "no" }
        );
    }
    out
}

fn records_csv(records: &[PointCountRecord]) -> Result<String, InputError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| InputError(e.to_string()))?;
    Ok(String::from_utf8(bytes)?)
}

#[derive(Serialize)]
struct GuessReport {
    model: String,
    bound: u64,
    form: String,
    primes: Vec<u64>,
    esnault: crate::modular::Verdict,
    congruence: crate::modular::Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<crate::modular::CyFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_error: Option<String>,
}

fn dispatch(cmd: Command, exp: &ExpectationTable) -> Result<Output, InputError> {
    match cmd {
        Command::VerifyPaper { sections, format, out } => {
            let sections = if sections.is_empty() {
                Section::ALL.to_vec()
            } else {
                sections
            };
            let report = verify_paper(&sections, exp);
            let text = match format {
                ReportFormat::Json => json(&report),
                ReportFormat::Markdown => report.markdown(),
            };
            let mut diagnostics = String::new();
            for (section, i) in report.mismatches() {
                let _ = writeln!(
                    diagnostics,
                    "mismatch [{section}] {}: expected {}, got {}",
                    i.item, i.expected, i.actual
                );
            }
            Ok(Output {
                text,
                out,
                code: if report.ok { EXIT_OK } else { EXIT_MISMATCH },
                diagnostics,
            })
        }
        Command::Count {
            model,
            bound,
            format,
            out,
        } => {
            let m = load_model(&model)?;
            let records = count_range(&m, bound)?;
            let text = match format {
                TableFormat::Json => json(&records),
                TableFormat::Csv => records_csv(&records)?,
                TableFormat::Markdown => records_markdown(&records),
            };
            Ok(Output::ok(text, out))
        }
        Command::Guess {
            model,
            bound,
            form,
            convention,
            primes,
            anchor,
            weight,
            level,
            out,
        } => {
            let m = load_model(&model)?;
            let f = load_form(&form, convention, weight, level, anchor)?;
            let mut records = count_range(&m, bound)?;
            if let Some(filter) = &primes {
                records.retain(|r| filter.keeps(r.p));
            }
            if records.is_empty() {
                return Err(InputError("no primes left to test".into()));
            }
            let esnault = esnault_guess(&records, m.bad_primes());
            let congruence = congruence_match(&records, &f, convention)?;
            let (fit, fit_error) = match convention {
                Convention::Weight4 => match exact_cy3_fit(&records, &f) {
                    Ok(fit) => (Some(fit), None),
                    Err(e) => (None, Some(e.to_string())),
                },
                Convention::Weight3 => (None, None),
            };
            let report = GuessReport {
                model: m.name().to_string(),
                bound,
                form: f.name.clone(),
                primes: records.iter().map(|r| r.p).collect(),
                esnault,
                congruence,
                fit,
                fit_error,
            };
            Ok(Output::ok(json(&report), out))
        }
        Command::Eta { spec, truncation } => {
            let spec = EtaQuotientSpec::parse(&spec)?;
            Ok(Output::ok(format_coefficients(&eta_quotient(&spec, truncation)), None))
        }
        Command::Export { model, out } => {
            let m = builtin_model(&model).ok_or_else(|| {
                InputError(format!(
                    "unknown builtin model {model:?}; expected one of {}",
                    MODEL_NAMES.join(", ")
                ))
            })?;
            let mut text = VarietyFile::from_model(&m).to_json();
            text.push('\n');
            Ok(Output::ok(text, out))
        }
        Command::Table1 { format, out } => {
            let rows = table1()?;
            let text = match format {
                ReportFormat::Json => json(&rows),
                ReportFormat::Markdown => table1_markdown(&rows),
            };
            Ok(Output::ok(text, out))
        }
        Command::Table2 { bound, format, out } => {
            let x = builtin_model("X").expect("builtin");
            let rows = table2_rows(&count_range(&x, bound)?);
            let text = match format {
                TableFormat::Json => json(&rows),
                TableFormat::Csv => table2_csv(&rows)?,
                TableFormat::Markdown => table2_markdown(&rows),
            };
            Ok(Output::ok(text, out))
        }
    }
}

/// Resolves `--out` against the report directory override.
pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(REPORT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_output(o: &Output, stdout: &mut dyn Write) -> Result<(), InputError> {
    match &o.out {
        Some(path) => {
            let path = resolve_out(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, &o.text).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        None => stdout.write_all(o.text.as_bytes())?,
    }
    Ok(())
}

/// Runs the command line `args` (program name first) against `exp` and
/// returns the exit code.
pub fn run<I, T>(args: I, exp: &ExpectationTable, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let result = pool.install(|| dispatch(cli.command, exp));
    let output = match result {
        Ok(o) => o,
        Err(InputError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    if let Err(InputError(msg)) = write_output(&output, stdout) {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    let _ = stderr.write_all(output.diagnostics.as_bytes());
    output.code
}
