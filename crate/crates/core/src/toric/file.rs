//! Plain-text cone files.
//!
//! ```text
//! # comments run to the end of the line
//! dim 3
//! lattice
//! 1 0 0
//! 0 1 0
//! 0 0 1
//! 1/2 1/2 0
//! rays
//! 1 0 0
//! 0 1 0
//! 0 0 1
//! ```
//!
//! Entries are integers or fractions `p/q` separated by whitespace. The
//! `lattice` section lists at least `dim` vectors spanning the lattice; with
//! exactly `dim` rows they are taken as a basis. The `rays` section lists
//! exactly `dim` ray vectors. Floating-point literals are rejected.

use num::rational::Ratio;

use super::SimplicialConeData;
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::scalar::{parse_rational, Int};

#[derive(PartialEq)]
enum Section {
    Header,
    Lattice,
    Rays,
}

fn line_err(line: usize, e: impl ToString) -> Error {
    Error::ParseLine {
        line,
        message: e.to_string(),
    }
}

pub fn parse_cone<T: Int>(text: &str) -> Result<SimplicialConeData<T>> {
    let mut dim: Option<usize> = None;
    let mut section = Section::Header;
    let mut lattice: Vec<Vec<Ratio<T>>> = Vec::new();
    let mut rays: Vec<Vec<Ratio<T>>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["dim", n] => {
                if dim.is_some() {
                    return Err(line_err(line, "duplicate dim"));
                }
                let n: usize = n
                    .parse()
                    .map_err(|_| line_err(line, format!("bad dimension {n:?}")))?;
                if n == 0 {
                    return Err(line_err(line, "dimension must be positive"));
                }
                dim = Some(n);
            }
            ["lattice"] if section == Section::Header => section = Section::Lattice,
            ["rays"] if section == Section::Lattice => section = Section::Rays,
            ["lattice"] | ["rays"] => {
                return Err(line_err(line, format!("unexpected section {content:?}")))
            }
            _ => {
                let n = dim.ok_or_else(|| line_err(line, "dim must come first"))?;
                let row = tokens
                    .iter()
                    .map(|t| parse_rational(t).map_err(|e| line_err(line, e)))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return Err(line_err(
                        line,
                        format!("expected {n} entries, got {}", row.len()),
                    ));
                }
                match section {
                    Section::Header => return Err(line_err(line, "vector outside a section")),
                    Section::Lattice => lattice.push(row),
                    Section::Rays => rays.push(row),
                }
            }
        }
    }

    let n = dim.ok_or_else(|| line_err(last_line, "missing dim"))?;
    if section != Section::Rays {
        return Err(line_err(last_line, "missing rays section"));
    }
    if lattice.len() < n {
        return Err(line_err(
            last_line,
            format!("lattice needs at least {n} vectors"),
        ));
    }
    if rays.len() != n {
        return Err(line_err(
            last_line,
            format!("expected {n} rays, got {}", rays.len()),
        ));
    }
    let basis = if lattice.len() == n {
        LatticeBasis::new(&lattice)?
    } else {
        LatticeBasis::from_generators(n, &lattice)?
    };
    SimplicialConeData::new(basis, rays)
}

/// Serializes a cone in the format accepted by [`parse_cone`].
pub fn write_cone<T: Int>(cone: &SimplicialConeData<T>) -> String {
    let row = |v: &Vec<Ratio<T>>| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = format!("dim {}\nlattice\n", cone.dim());
    for b in cone.lattice().basis_vectors() {
        out.push_str(&row(&b));
        out.push('\n');
    }
    out.push_str("rays\n");
    for r in cone.rays() {
        out.push_str(&row(r));
        out.push('\n');
    }
    out
}
