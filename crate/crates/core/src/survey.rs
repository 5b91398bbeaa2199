//! Exhaustive enumeration of cyclic quotient singularities up to an order
//! bound, their mld spectra, and accumulation diagnostics.
//!
//! Survey files hold one row per enumerated type in enumeration order, so a
//! spectrum (values with multiplicities and first witnesses) is recomputable
//! from the file alone.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

use num::rational::Ratio;
use num::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclic::{QuotientType, SingularityClass};
use crate::error::{Error, Result};
use crate::scalar::{int, parse_int, range, Int};

/// Default neighborhood radius for accumulation counts.
pub fn default_delta<T: Int>() -> Ratio<T> {
    Ratio::new(T::one(), int(20))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    Parallel,
}

/// Nondecreasing weight vectors with entries in `1..order`, in lexicographic order.
struct SortedWeights<T: Int> {
    order: T,
    next: Option<Vec<T>>,
}

impl<T: Int> SortedWeights<T> {
    fn new(dim: usize, order: T) -> Self {
        let next = (dim > 0 && order > T::one()).then(|| vec![T::one(); dim]);
        SortedWeights { order, next }
    }
}

impl<T: Int> Iterator for SortedWeights<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        let current = self.next.take()?;
        let top = self.order.clone() - T::one();
        let mut succ = current.clone();
        if let Some(i) = succ.iter().rposition(|a| *a < top) {
            let v = succ[i].clone() + T::one();
            for a in &mut succ[i..] {
                *a = v.clone();
            }
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Well-formed canonical types of dimension `dim` and order exactly `order`.
pub fn quotients_of_order<T: Int>(dim: usize, order: T) -> impl Iterator<Item = QuotientType<T>> {
    SortedWeights::new(dim, order.clone()).filter_map(move |w| {
        let q = QuotientType::new(order.clone(), w).expect("weights are in range");
        (q.is_well_formed() && q.is_canonical()).then_some(q)
    })
}

/// Every well-formed canonical-form type of dimension `dim` with order at
/// most `max_order`, each once, ordered by `(N, weights)`.
pub fn enumerate_quotients<T: Int>(
    dim: usize,
    max_order: T,
) -> impl Iterator<Item = QuotientType<T>> {
    range(int(2), max_order + T::one()).flat_map(move |order| quotients_of_order(dim, order))
}

/// One enumerated type with its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRecord<T: Int> {
    pub quotient: QuotientType<T>,
    pub mld_log: Ratio<T>,
    pub class: SingularityClass,
    pub index: T,
}

impl<T: Int> SurveyRecord<T> {
    pub fn of(quotient: QuotientType<T>) -> Result<Self> {
        let mld = quotient.mld()?;
        let class = mld.classify()?;
        let mld_log = mld.mld_log().cloned().ok_or(Error::Smooth)?;
        let index = quotient.gorenstein_index()?;
        Ok(SurveyRecord {
            quotient,
            mld_log,
            class,
            index,
        })
    }
}

/// Enumerates and evaluates every type; output order does not depend on
/// `parallelism`.
pub fn survey<T: Int>(dim: usize, max_order: T, parallelism: Parallelism) -> Vec<SurveyRecord<T>> {
    let evaluate = |order: T| -> Vec<SurveyRecord<T>> {
        quotients_of_order(dim, order)
            .map(|q| SurveyRecord::of(q).expect("enumerated types are well-formed and singular"))
            .collect()
    };
    let orders: Vec<T> = range(int(2), max_order + T::one()).collect();
    match parallelism {
        Parallelism::Serial => orders.into_iter().flat_map(evaluate).collect(),
        Parallelism::Parallel => {
            let chunks: Vec<Vec<SurveyRecord<T>>> = orders.into_par_iter().map(evaluate).collect();
            chunks.into_iter().flatten().collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry<T: Int> {
    pub mld_log: Ratio<T>,
    /// Number of canonical-form types attaining the value.
    pub multiplicity: usize,
    /// The first type in enumeration order attaining the value.
    pub witness: QuotientType<T>,
}

/// Groups records by value, ascending.
pub fn spectrum_of<T: Int>(records: &[SurveyRecord<T>]) -> Vec<SpectrumEntry<T>> {
    let mut by_value: BTreeMap<Ratio<T>, SpectrumEntry<T>> = BTreeMap::new();
    for r in records {
        by_value
            .entry(r.mld_log.clone())
            .and_modify(|e| e.multiplicity += 1)
            .or_insert_with(|| SpectrumEntry {
                mld_log: r.mld_log.clone(),
                multiplicity: 1,
                witness: r.quotient.clone(),
            });
    }
    by_value.into_values().collect()
}

pub fn spectrum<T: Int>(dim: usize, max_order: T) -> Vec<SpectrumEntry<T>> {
    spectrum_of(&survey(dim, max_order, Parallelism::Parallel))
}

/// A spectrum tagged with its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionSpectrum<T: Int> {
    pub dim: usize,
    pub entries: Vec<SpectrumEntry<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateCounts<T: Int> {
    pub value: Ratio<T>,
    /// Lower dimensions whose spectrum contains the value; empty for 0.
    pub sources: Vec<usize>,
    /// Distinct spectrum values in `(value - delta, value)`.
    pub below: usize,
    /// Distinct spectrum values in `(value, value + delta]`.
    pub above: usize,
}

impl<T: Int> CandidateCounts<T> {
    /// Values approaching from below are worth inspecting.
    pub fn flagged(&self) -> bool {
        self.below > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccumulationReport<T: Int> {
    pub dim: usize,
    pub max_order: T,
    pub delta: Ratio<T>,
    pub candidates: Vec<CandidateCounts<T>>,
    pub max_value: Option<Ratio<T>>,
    pub max_witness: Option<QuotientType<T>>,
    /// Every spectrum value is at most `dim / 2`.
    pub half_dim_bound_holds: bool,
    /// For `dim == 2`: every `1/N(1, N-1)` with `N <= max_order` has mld 1.
    pub a_series_constant: Option<bool>,
}

/// Counts spectrum values in punctured neighborhoods of each candidate
/// limit: 0 and every value of a lower-dimensional spectrum.
pub fn accumulation_report<T: Int>(
    dim: usize,
    max_order: T,
    spectrum: &[SpectrumEntry<T>],
    lower: &[DimensionSpectrum<T>],
    delta: Ratio<T>,
) -> Result<AccumulationReport<T>> {
    if delta <= Ratio::zero() {
        return Err(Error::Parse(format!("delta must be positive, got {delta}")));
    }
    let mut candidates: BTreeMap<Ratio<T>, Vec<usize>> = BTreeMap::new();
    candidates.insert(Ratio::zero(), Vec::new());
    for s in lower {
        if s.dim >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim - 1,
                got: s.dim,
            });
        }
        for e in &s.entries {
            let dims = candidates.entry(e.mld_log.clone()).or_default();
            if !dims.contains(&s.dim) {
                dims.push(s.dim);
            }
        }
    }
    let values: Vec<&Ratio<T>> = spectrum.iter().map(|e| &e.mld_log).collect();
    let candidates = candidates
        .into_iter()
        .map(|(value, mut sources)| {
            sources.sort_unstable();
            let lo = value.clone() - delta.clone();
            let hi = value.clone() + delta.clone();
            let below = values.iter().filter(|v| ***v > lo && ***v < value).count();
            let above = values.iter().filter(|v| ***v > value && ***v <= hi).count();
            CandidateCounts {
                value,
                sources,
                below,
                above,
            }
        })
        .collect();

    let max = spectrum.iter().max_by(|a, b| a.mld_log.cmp(&b.mld_log));
    let bound = Ratio::new(T::from_usize(dim).expect("fits"), int(2));
    let half_dim_bound_holds = spectrum.iter().all(|e| e.mld_log <= bound);
    let a_series_constant = (dim == 2).then(|| a_series_constant(max_order.clone()));
    Ok(AccumulationReport {
        dim,
        max_order,
        delta,
        candidates,
        max_value: max.map(|e| e.mld_log.clone()),
        max_witness: max.map(|e| e.witness.clone()),
        half_dim_bound_holds,
        a_series_constant,
    })
}

/// Whether `1/N(1, N-1)` has mld exactly 1 for every `2 <= N <= max_order`.
pub fn a_series_constant<T: Int>(max_order: T) -> bool {
    range(int(2), max_order + T::one()).all(|n| {
        QuotientType::new(n.clone(), vec![T::one(), n - T::one()])
            .and_then(|q| q.mld())
            .map(|m| m.mld_log() == Some(&Ratio::from_integer(T::one())))
            .unwrap_or(false)
    })
}

pub const CSV_HEADER: [&str; 7] = [
    "dim", "N", "weights", "mld_num", "mld_den", "class", "index",
];

fn join<T: Int>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::ParseLine {
            line: p.line() as usize,
            message: e.to_string(),
        },
        None => Error::Io(e.to_string()),
    }
}

/// Writes records as CSV with columns [`CSV_HEADER`].
pub fn persist_csv<T: Int, W: Write>(records: &[SurveyRecord<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.quotient.dim().to_string(),
            r.quotient.order().to_string(),
            join(r.quotient.weights()),
            r.mld_log.numer().to_string(),
            r.mld_log.denom().to_string(),
            r.class.to_string(),
            r.index.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV survey file, re-verifying every row.
pub fn load_csv<T: Int, R: Read>(input: R) -> Result<Vec<SurveyRecord<T>>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::ParseLine {
            line: 1,
            message: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<&str> = row.iter().collect();
        let weights: Vec<&str> = if fields[2].is_empty() {
            Vec::new()
        } else {
            fields[2].split(',').collect()
        };
        let raw = RawRecord {
            dim: fields[0],
            order: fields[1],
            weights,
            mld_num: fields[3],
            mld_den: fields[4],
            class: fields[5],
            index: fields[6],
        };
        out.push(
            raw.check()
                .map_err(|message| Error::ParseLine { line, message })?,
        );
    }
    Ok(out)
}

struct RawRecord<'a> {
    dim: &'a str,
    order: &'a str,
    weights: Vec<&'a str>,
    mld_num: &'a str,
    mld_den: &'a str,
    class: &'a str,
    index: &'a str,
}

impl RawRecord<'_> {
    /// Parses every field and checks it against a recomputation.
    fn check<T: Int>(&self) -> std::result::Result<SurveyRecord<T>, String> {
        let s = |e: Error| e.to_string();
        let dim: usize = self
            .dim
            .parse()
            .map_err(|_| format!("bad dim {:?}", self.dim))?;
        let order: T = parse_int(self.order).map_err(s)?;
        let weights = self
            .weights
            .iter()
            .map(|w| parse_int(w))
            .collect::<Result<Vec<T>>>()
            .map_err(s)?;
        if weights.len() != dim {
            return Err(format!("dim {dim} but {} weights", weights.len()));
        }
        let num: T = parse_int(self.mld_num).map_err(s)?;
        let den: T = parse_int(self.mld_den).map_err(s)?;
        if den <= T::zero() {
            return Err(format!("mld denominator must be positive, got {den}"));
        }
        let class: SingularityClass = self.class.parse().map_err(s)?;
        let index: T = parse_int(self.index).map_err(s)?;
        let quotient = QuotientType::new(order, weights).map_err(s)?;
        let record = SurveyRecord::of(quotient).map_err(s)?;
        let stored = SurveyRecord {
            quotient: record.quotient.clone(),
            mld_log: Ratio::new(num, den),
            class,
            index,
        };
        if stored != record {
            return Err(format!(
                "row disagrees with recomputation for {}: mld {}, class {}, index {}",
                record.quotient, record.mld_log, record.class, record.index
            ));
        }
        Ok(record)
    }
}

fn json_int<T: Int>(x: &T) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// Writes records as JSON lines; rationals are `"p/q"` strings.
pub fn persist_json<T: Int, W: Write>(records: &[SurveyRecord<T>], mut out: W) -> Result<()> {
    for r in records {
        let obj = json!({
            "dim": r.quotient.dim(),
            "N": json_int(r.quotient.order()),
            "weights": r.quotient.weights().iter().map(json_int).collect::<Vec<_>>(),
            "mld_log": r.mld_log.to_string(),
            "class": r.class.as_str(),
            "index": json_int(&r.index),
        });
        writeln!(out, "{obj}")?;
    }
    out.flush()?;
    Ok(())
}

fn json_field<'a>(obj: &'a Value, key: &str) -> std::result::Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

/// An integer field: a JSON integer or a decimal string. Floats are refused.
fn json_to_int(v: &Value) -> std::result::Result<String, String> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(format!("expected an integer, got {other}")),
    }
}

/// Reads a JSON-lines survey file, re-verifying every row.
pub fn load_json<T: Int, R: BufRead>(input: R) -> Result<Vec<SurveyRecord<T>>> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse = || -> std::result::Result<SurveyRecord<T>, String> {
            let obj: Value = serde_json::from_str(&line).map_err(|e| e.to_string())?;
            let dim = json_to_int(json_field(&obj, "dim")?)?;
            let order = json_to_int(json_field(&obj, "N")?)?;
            let weights = json_field(&obj, "weights")?
                .as_array()
                .ok_or("weights must be an array")?
                .iter()
                .map(json_to_int)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let mld = json_field(&obj, "mld_log")?
                .as_str()
                .ok_or("mld_log must be a \"p/q\" string")?;
            let (num, den) = mld.split_once('/').unwrap_or((mld, "1"));
            let class = json_field(&obj, "class")?
                .as_str()
                .ok_or("class must be a string")?;
            let index = json_to_int(json_field(&obj, "index")?)?;
            RawRecord {
                dim: &dim,
                order: &order,
                weights: weights.iter().map(String::as_str).collect(),
                mld_num: num,
                mld_den: den,
                class,
                index: &index,
            }
            .check()
        };
        out.push(parse().map_err(|message| Error::ParseLine {
            line: line_no,
            message,
        })?);
    }
    Ok(out)
}
