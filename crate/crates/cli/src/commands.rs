use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use glsnormal::constructor::{verify_schedule, CutoffSchedule, CutoffSearch, DigitStream};
use glsnormal::digits_io::{read_digits, DigitFormat, DigitWriter};
use glsnormal::normality::{check_digits, normality_report};
use glsnormal::rat::{fmt_rat, parse_rat, to_decimal};
use glsnormal::rational::survey_family_with_cap;
use glsnormal::{prefix_discrepancies, Error, GlsSpec, PointSeq, Rat};

use crate::{Command, DigitFormatArg, ReportFormat};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_cap() { 3 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

/// Unknown or malformed identifiers on the command line are usage errors;
/// problems inside referenced files are domain failures.
fn load_spec(id: &str) -> Result<GlsSpec, Failure> {
    GlsSpec::parse_id(id).map_err(|e| match e {
        Error::Parse(_) | Error::UnknownFamily(_) | Error::InvalidParameter(_)
            if !id.starts_with("custom:") =>
        {
            Failure::usage(format!("--spec {id}: {e}"))
        }
        e => e.into(),
    })
}

fn load_seq(id: &str) -> Result<PointSeq, Failure> {
    PointSeq::parse_id(id).map_err(|e| match e {
        Error::Parse(_) | Error::InvalidParameter(_) | Error::RationalConstant
            if !id.contains("list:") =>
        {
            Failure::usage(format!("--seq {id}: {e}"))
        }
        e => e.into(),
    })
}

fn digit_format(f: DigitFormatArg) -> DigitFormat {
    match f {
        DigitFormatArg::Text => DigitFormat::Text,
        DigitFormatArg::Varint => DigitFormat::Varint,
    }
}

/// Stdout when `path` is `None`.
fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { spec } => validate(&spec),
        Command::Generate {
            spec,
            seq,
            count,
            levels,
            horizon,
            n_cap,
            schedule,
            format,
            output,
            schedule_out,
        } => {
            let horizon =
                parse_rat(&horizon).map_err(|e| Failure::usage(format!("--horizon: {e}")))?;
            if horizon < Rat::from_integer(1.into()) {
                return Err(Failure::usage("--horizon must be at least 1"));
            }
            let schedule_out = schedule_out.unwrap_or_else(|| {
                let mut p = output.clone().into_os_string();
                p.push(".schedule");
                PathBuf::from(p)
            });
            generate(GenerateArgs {
                spec_id: &spec,
                seq_id: &seq,
                count,
                levels: levels as usize,
                horizon,
                n_cap,
                schedule: schedule.as_deref(),
                format: digit_format(format),
                output: &output,
                schedule_out: &schedule_out,
            })
        }
        Command::Analyze {
            spec,
            digits,
            format,
            max_r,
            digit_cap,
            report,
            decimals,
            output,
        } => analyze(
            &spec,
            &digits,
            digit_format(format),
            max_r as usize,
            digit_cap,
            report,
            decimals,
            &output,
        ),
        Command::Discrepancy {
            seq,
            n_max,
            stride,
            decimals,
            output,
        } => discrepancy(&seq, n_max, stride, decimals, &output),
        Command::Survey {
            spec,
            base,
            kmax,
            all,
            cap,
            output,
            summary,
        } => survey(&spec, base, kmax, all, cap, &output, &summary),
    }
}

fn validate(id: &str) -> Outcome {
    let spec = load_spec(id)?;
    let report = spec.validate()?;
    print!("{report}");
    println!("valid");
    Ok(ExitCode::SUCCESS)
}

struct GenerateArgs<'a> {
    spec_id: &'a str,
    seq_id: &'a str,
    count: u64,
    levels: usize,
    horizon: Rat,
    n_cap: u64,
    schedule: Option<&'a Path>,
    format: DigitFormat,
    output: &'a Path,
    schedule_out: &'a Path,
}

fn generate(args: GenerateArgs<'_>) -> Outcome {
    let spec = load_spec(args.spec_id)?;
    let seq = load_seq(args.seq_id)?;
    let schedule = match args.schedule {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let (schedule, header) = CutoffSchedule::parse_text(&text)?;
            if header.spec != args.spec_id || header.seq != args.seq_id {
                return Err(Error::InvalidParameter(format!(
                    "schedule was built for spec={} seq={}",
                    header.spec, header.seq
                ))
                .into());
            }
            verify_schedule(&spec, &seq, &schedule)?;
            schedule
        }
        None => {
            let mut search = CutoffSearch::new(&spec, &seq, args.horizon, args.n_cap)?;
            search.run(args.levels)?;
            search.extend_to_digits(args.count)?
        }
    };

    // Digits go to a temporary file next to the target and are moved into
    // place only when complete, so failures leave no partial output.
    let dir = match args.output.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(&dir)?;
    let mut writer = DigitWriter::new(BufWriter::new(tmp.as_file()), args.format, args.count)?;
    let mut stream = DigitStream::new(&spec, &seq, &schedule);
    for _ in 0..args.count {
        writer.push(stream.next_digit()?)?;
    }
    writer.finish()?;
    std::fs::write(
        args.schedule_out,
        schedule.to_text(args.spec_id, args.seq_id),
    )?;
    tmp.persist(args.output)
        .map_err(|e| Failure::from(e.error))?;
    eprintln!(
        "wrote {} digits ({} levels, cutoffs {}, {} skipped columns)",
        args.count,
        schedule.levels(),
        schedule,
        stream.skipped().len()
    );
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    spec_id: &str,
    path: &Path,
    format: DigitFormat,
    max_r: usize,
    digit_cap: Option<usize>,
    report: ReportFormat,
    decimals: usize,
    output: &Option<PathBuf>,
) -> Outcome {
    let spec = load_spec(spec_id)?;
    let digits = read_digits(BufReader::new(File::open(path)?), format)?;
    check_digits(&spec, &digits)?;
    let rep = normality_report(&digits, &spec, max_r, digit_cap)?;
    let mut out = sink(output)?;
    match report {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &rep)?;
            writeln!(out)?;
        }
        ReportFormat::Csv => {
            writeln!(
                out,
                "block,occurrences,n,empirical,expected,deviation,deviation_decimal"
            )?;
            for b in &rep.blocks {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    b.block,
                    b.occurrences,
                    b.n,
                    fmt_rat(&b.empirical),
                    fmt_rat(&b.expected),
                    fmt_rat(&b.deviation),
                    to_decimal(&b.deviation, decimals)
                )?;
            }
        }
    }
    out.flush()?;
    if !spec.is_finite() || digit_cap.is_some() {
        eprintln!(
            "alphabet {:?} covers mass {}",
            rep.alphabet,
            to_decimal(&rep.covered_mass, decimals)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn discrepancy(
    seq_id: &str,
    n_max: u64,
    stride: u64,
    decimals: Option<usize>,
    output: &Option<PathBuf>,
) -> Outcome {
    let seq = load_seq(seq_id)?;
    let rows = prefix_discrepancies(&seq, n_max, stride)?;
    let mut out = sink(output)?;
    writeln!(out, "n,D_n")?;
    for (n, d) in rows {
        let d = match decimals {
            Some(p) => to_decimal(&d, p),
            None => fmt_rat(&d),
        };
        writeln!(out, "{n},{d}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn survey(
    spec_id: &str,
    base: u64,
    kmax: u32,
    all: bool,
    cap: u64,
    output: &Option<PathBuf>,
    summary: &Option<PathBuf>,
) -> Outcome {
    let spec = load_spec(spec_id)?;
    let s = survey_family_with_cap(&spec, base, kmax, all, cap)?;
    let mut out = sink(output)?;
    out.write_all(s.to_csv().as_bytes())?;
    out.flush()?;
    let json = serde_json::to_string_pretty(&s.summary)?;
    match summary {
        Some(p) => std::fs::write(p, json + "\n")?,
        None => eprintln!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}
