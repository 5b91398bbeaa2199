//! `toricmld` — exact minimal log-discrepancies from the command line.
//!
//! Every payload goes to standard output as JSON (or CSV for survey tables);
//! rationals are printed exactly as `"p/q"`, or as an integer when `q = 1`.
//! Exit status: 0 on success, 1 on a domain error, 2 on a usage or parse
//! error. Nothing is printed to standard output when a command fails.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::Ratio;
use num::BigInt;
use serde_json::{json, Value};

use toricmld::constructions::{
    construct_limit_sequence, lift_times, verify_from_above, SequenceSpec,
};
use toricmld::cyclic::{MldResult, NormalizationTrace, SingularityClass, Witness};
use toricmld::scalar::{parse_int, parse_rational, Int};
use toricmld::survey::{
    accumulation_report, default_delta, load_csv, load_json, persist_csv, persist_json,
    spectrum_of, survey, DimensionSpectrum, Parallelism, SpectrumEntry, SurveyRecord,
};
use toricmld::toric::parse_cone;
use toricmld::{Cone, Error, Quotient, Rational};

#[derive(Parser)]
#[command(
    name = "toricmld",
    version,
    about = "Exact minimal log-discrepancies of toric singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal log-discrepancy of a cyclic quotient or a simplicial cone.
    Mld {
        /// Quotient type `N:a1,...,an`; normalized before evaluation.
        #[arg(long, conflicts_with = "cone", required_unless_present = "cone")]
        quotient: Option<String>,
        /// Cone description file.
        #[arg(long)]
        cone: Option<PathBuf>,
    },
    /// Reduce a simplicial cone to a cyclic quotient with the same mld.
    Reduce {
        #[arg(long)]
        cone: PathBuf,
    },
    /// Append `(1, N-1)` to the weights `times` times, raising the mld by `times`.
    Lift {
        #[arg(long)]
        quotient: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        times: u32,
    },
    /// Build a sequence of quotients whose mld decreases to `eps + l`.
    Sequence {
        /// Base quotient type; normalized first.
        #[arg(long)]
        base: String,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        /// Comma-separated orders, each congruent to 1 modulo the base order.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<String>,
    },
    /// Enumerate every canonical-form type of a dimension up to an order bound.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_order: u64,
        /// Write the table here and print a spectrum summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Evaluate on a single thread.
        #[arg(long)]
        serial: bool,
    },
    /// Accumulation diagnostics for one dimension against lower-dimensional surveys.
    Report {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_order: u64,
        /// Comma-separated survey files (`.json`/`.jsonl` for JSON lines, CSV otherwise); `""` for none.
        #[arg(long)]
        lower: String,
        /// Neighborhood radius `p/q`.
        #[arg(long)]
        delta: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A failed command: the message and the exit status.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_)
            | Error::ParseLine { .. }
            | Error::DimensionBound { .. }
            | Error::Congruence { .. }
            | Error::OrderTooSmall(_) => 2,
            _ => 1,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Vec<u8>, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(payload) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(&payload)
                .and_then(|()| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Mld {
            quotient: Some(q), ..
        } => mld_quotient(&q),
        Command::Mld {
            cone: Some(path), ..
        } => mld_cone(&path),
        Command::Mld { .. } => unreachable!("clap requires one input"),
        Command::Reduce { cone } => reduce(&cone),
        Command::Lift { quotient, times } => lift(&quotient, times as usize),
        Command::Sequence { base, l, n, orders } => sequence(&base, l, n, &orders),
        Command::Enumerate {
            dim,
            max_order,
            out,
            format,
            serial,
        } => enumerate(dim, max_order, out.as_deref(), format, serial),
        Command::Report {
            dim,
            max_order,
            lower,
            delta,
        } => report(dim, max_order, &lower, delta.as_deref()),
    }
}

fn int_json<T: Int>(x: &T) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn rat<T: Int>(x: &Ratio<T>) -> Value {
    json!(x.to_string())
}

fn point_json(coords: &[Rational]) -> Value {
    Value::Array(coords.iter().map(rat).collect())
}

fn json_line(v: &Value) -> Vec<u8> {
    let mut s = v.to_string();
    s.push('\n');
    s.into_bytes()
}

fn parse_quotient(text: &str) -> Result<Quotient, Failure> {
    Ok(text.parse::<Quotient>()?)
}

fn read_cone(path: &Path) -> Result<Cone, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        status: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(parse_cone(&text)?)
}

fn trace_json(t: &NormalizationTrace<BigInt>) -> Value {
    json!({
        "dropped": t.dropped,
        "axes": t.axes,
        "scale": t.scale.iter().map(int_json).collect::<Vec<_>>(),
    })
}

/// The fields shared by both `mld` inputs.
fn mld_fields(
    result: &MldResult<BigInt>,
    witness: Value,
    index: &BigInt,
) -> Result<Value, Failure> {
    let (mld_log, mld_disc, class) = match result.mld_log() {
        Some(m) => (
            rat(m),
            rat(&(m - Rational::from_integer(1.into()))),
            json!(SingularityClass::of(m).as_str()),
        ),
        None => (Value::Null, Value::Null, Value::Null),
    };
    Ok(json!({
        "smooth": result.is_smooth(),
        "mld_log": mld_log,
        "mld_disc": mld_disc,
        "witness": witness,
        "class": class,
        "index": int_json(index),
    }))
}

fn mld_quotient(text: &str) -> Outcome {
    let input = parse_quotient(text)?;
    let (normalized, trace) = input.normalize()?;
    let result = normalized.mld()?;
    let witness = match result.witness() {
        Some(Witness::Element(k)) => json!({
            "element": int_json(k),
            "point": point_json(normalized.element(k).coords()),
        }),
        Some(Witness::Point(p)) => json!({ "point": point_json(p) }),
        None => Value::Null,
    };
    let mut out = mld_fields(&result, witness, &normalized.gorenstein_index()?)?;
    out["input"] = json!(input.to_string());
    out["normalized"] = json!(normalized.to_string());
    out["trace"] = trace_json(&trace);
    Ok(json_line(&out))
}

fn mld_cone(path: &Path) -> Outcome {
    let cone = read_cone(path)?;
    let result = cone.mld_toric()?;
    let witness = match result.witness() {
        Some(Witness::Point(p)) => json!({ "point": point_json(p) }),
        Some(Witness::Element(k)) => json!({ "element": int_json(k) }),
        None => Value::Null,
    };
    let mut out = mld_fields(&result, witness, &cone.gorenstein_index())?;
    out["input"] = json!(path.display().to_string());
    out["dim"] = json!(cone.dim());
    Ok(json_line(&out))
}

fn reduce(path: &Path) -> Outcome {
    let cone = read_cone(path)?;
    let (quotient, trace) = cone.reduce_to_cyclic()?;
    let out = json!({
        "input": path.display().to_string(),
        "quotient": quotient.to_string(),
        "dim": quotient.dim(),
        "mld_log": rat(&trace.reduced_mld),
        "cone_mld_log": rat(&trace.cone_mld),
        "witness": point_json(&trace.witness),
        "generator": point_json(&trace.generator),
        "support": trace.support.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "verified": trace.verified(),
    });
    Ok(json_line(&out))
}

fn lift(text: &str, times: usize) -> Outcome {
    let input = parse_quotient(text)?;
    let (normalized, trace) = input.normalize()?;
    let before = normalized.mld()?.mld_log().cloned().ok_or(Error::Smooth)?;
    let lifted = lift_times(&normalized, times)?;
    let after = lifted.mld()?.mld_log().cloned().ok_or(Error::Smooth)?;
    let added = Rational::from_integer(BigInt::from(times));
    let out = json!({
        "input": input.to_string(),
        "normalized": normalized.to_string(),
        "trace": trace_json(&trace),
        "times": times,
        "lifted": lifted.to_string(),
        "dim": lifted.dim(),
        "mld_before": rat(&before),
        "mld_after": rat(&after),
        "verified": after == before + added,
    });
    Ok(json_line(&out))
}

fn sequence(base: &str, l: usize, n: usize, orders: &[String]) -> Outcome {
    let input = parse_quotient(base)?;
    let (base, _) = input.normalize()?;
    let orders = orders
        .iter()
        .map(|o| parse_int::<BigInt>(o))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SequenceSpec { base, l, n, orders };
    let data = spec.base_data()?;
    let limit = spec.limit()?;
    let terms = construct_limit_sequence(&spec)?;
    let values: Vec<Rational> = terms.iter().map(|t| t.verified_mld.clone()).collect();
    let verdict = verify_from_above(&values, &limit);

    let mut payload = Vec::new();
    for t in &terms {
        payload.extend(json_line(&json!({
            "order": int_json(&t.order),
            "quotient": t.quotient.to_string(),
            "weights": t.quotient.weights().iter().map(int_json).collect::<Vec<_>>(),
            "point": point_json(t.point.coords()),
            "expected_mld": rat(&t.expected_mld),
            "verified_mld": rat(&t.verified_mld),
        })));
    }
    payload.extend(json_line(&json!({
        "summary": true,
        "base": spec.base.to_string(),
        "eps": rat(&data.eps),
        "l": l,
        "n": n,
        "limit": rat(&limit),
        "terms": terms.len(),
        "from_above": verdict.from_above(),
        "all_above": verdict.all_above,
        "constant": verdict.all_equal,
        "monotone_non_increasing": verdict.monotone_non_increasing,
        "strictly_decreasing": verdict.strictly_decreasing,
        "last_gap": verdict.last_gap.as_ref().map(rat),
    })));
    Ok(payload)
}

fn spectrum_json<T: Int>(entries: &[SpectrumEntry<T>]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| {
                json!({
                    "mld_log": rat(&e.mld_log),
                    "multiplicity": e.multiplicity,
                    "witness": e.witness.to_string(),
                })
            })
            .collect(),
    )
}

fn write_records<T: Int, W: Write>(
    records: &[SurveyRecord<T>],
    format: Format,
    out: W,
) -> Result<(), Failure> {
    match format {
        Format::Csv => persist_csv(records, out)?,
        Format::Json => persist_json(records, out)?,
    }
    Ok(())
}

/// Largest order bound surveyed with machine-word arithmetic; products of two
/// residues and sums of `dim` ages stay far below `i64::MAX`.
const WORD_ORDER_LIMIT: u64 = 1 << 24;

fn enumerate(
    dim: usize,
    max_order: u64,
    out: Option<&Path>,
    format: Format,
    serial: bool,
) -> Outcome {
    if max_order <= WORD_ORDER_LIMIT {
        enumerate_with::<i64>(dim, max_order, out, format, serial)
    } else {
        enumerate_with::<BigInt>(dim, max_order, out, format, serial)
    }
}

fn enumerate_with<T: Int>(
    dim: usize,
    max_order: u64,
    out: Option<&Path>,
    format: Format,
    serial: bool,
) -> Outcome {
    let parallelism = if serial {
        Parallelism::Serial
    } else {
        Parallelism::Parallel
    };
    let records = survey(dim, order_bound::<T>(max_order), parallelism);
    match out {
        None => {
            let mut payload = Vec::new();
            write_records(&records, format, &mut payload)?;
            Ok(payload)
        }
        Some(path) => {
            let file = File::create(path).map_err(Error::from)?;
            write_records(&records, format, BufWriter::new(file))?;
            Ok(json_line(&json!({
                "dim": dim,
                "max_order": max_order,
                "out": path.display().to_string(),
                "types": records.len(),
                "spectrum": spectrum_json(&spectrum_of(&records)),
            })))
        }
    }
}

fn order_bound<T: Int>(max_order: u64) -> T {
    T::from_u64(max_order).expect("order bound fits the scalar")
}

fn load_survey<T: Int>(path: &Path) -> Result<Vec<SurveyRecord<T>>, Failure> {
    let file = File::open(path).map_err(|e| Failure {
        status: 1,
        message: format!("{}: {e}", path.display()),
    })?;
    let json = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("json" | "jsonl")
    );
    let loaded = if json {
        load_json(BufReader::new(file))
    } else {
        load_csv(file)
    };
    loaded.map_err(|e| {
        let f = Failure::from(e);
        Failure {
            status: f.status,
            message: format!("{}: {}", path.display(), f.message),
        }
    })
}

fn report(dim: usize, max_order: u64, lower: &str, delta: Option<&str>) -> Outcome {
    if max_order <= WORD_ORDER_LIMIT {
        report_with::<i64>(dim, max_order, lower, delta)
    } else {
        report_with::<BigInt>(dim, max_order, lower, delta)
    }
}

fn report_with<T: Int>(dim: usize, max_order: u64, lower: &str, delta: Option<&str>) -> Outcome {
    let delta: Ratio<T> = match delta {
        Some(d) => parse_rational(d)?,
        None => default_delta(),
    };
    let mut spectra = Vec::new();
    for path in lower.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let records = load_survey::<T>(Path::new(path))?;
        let Some(first) = records.first() else {
            continue;
        };
        let lower_dim = first.quotient.dim();
        if let Some(r) = records.iter().find(|r| r.quotient.dim() != lower_dim) {
            return Err(Failure {
                status: 1,
                message: format!(
                    "{path}: mixed dimensions {lower_dim} and {}",
                    r.quotient.dim()
                ),
            });
        }
        spectra.push(DimensionSpectrum {
            dim: lower_dim,
            entries: spectrum_of(&records),
        });
    }
    let records = survey(dim, order_bound::<T>(max_order), Parallelism::Parallel);
    let spectrum = spectrum_of(&records);
    let rep = accumulation_report(dim, order_bound::<T>(max_order), &spectrum, &spectra, delta)?;
    let candidates: Vec<Value> = rep
        .candidates
        .iter()
        .map(|c| {
            json!({
                "value": rat(&c.value),
                "sources": c.sources,
                "below": c.below,
                "above": c.above,
                "flagged": c.flagged(),
            })
        })
        .collect();
    let out = json!({
        "dim": rep.dim,
        "max_order": int_json(&rep.max_order),
        "delta": rat(&rep.delta),
        "types": records.len(),
        "distinct_values": spectrum.len(),
        "lower_dims": spectra.iter().map(|s| s.dim).collect::<Vec<_>>(),
        "candidates": candidates,
        "max_value": rep.max_value.as_ref().map(rat),
        "max_witness": rep.max_witness.as_ref().map(|q| q.to_string()),
        "half_dim_bound_holds": rep.half_dim_bound_holds,
        "a_series_constant": rep.a_series_constant,
    });
    Ok(json_line(&out))
}
