//! CSV formats for grids (`x`), samples (`x,f`), evaluations (`x,y`) and
//! convergence tables (`d,k,h_max,e_k,p_k,E_k,P_k`).
//!
//! Floats are written in their shortest round-trip form; empty cells stand
//! for undefined values.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::harness::ConvergenceRow;
use crate::polynomial::Samples;

pub const CONVERGENCE_HEADER: [&str; 7] = ["d", "k", "h_max", "e_k", "p_k", "E_k", "P_k"];

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn format_opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn read_columns<R: Read>(reader: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if found != header {
        return Err(Error::Csv(format!("expected header {:?}, found {:?}", header.join(","), found.join(","))));
    }
    let mut columns = vec![Vec::new(); header.len()];
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::Csv(format!("row {}: expected {} fields", line + 1, header.len())));
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Csv(format!("row {}: cannot parse {field:?} as a number", line + 1)))?;
            col.push(v);
        }
    }
    Ok(columns)
}

pub fn read_grid<R: Read>(reader: R) -> Result<Grid> {
    let mut cols = read_columns(reader, &["x"])?;
    Grid::new(cols.remove(0))
}

/// Evaluation points under the header `x`, in any order.
pub fn read_points<R: Read>(reader: R) -> Result<Vec<f64>> {
    let points = read_columns(reader, &["x"])?.remove(0);
    if let Some((index, &value)) = points.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(points)
}

pub fn write_grid<W: Write>(writer: W, grid: &Grid) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x"])?;
    for &x in grid.nodes() {
        w.write_record([format_float(x)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples<R: Read>(reader: R) -> Result<Samples> {
    let mut cols = read_columns(reader, &["x", "f"])?;
    let values = cols.pop().unwrap();
    let grid = Grid::new(cols.pop().unwrap())?;
    Samples::new(grid, values)
}

pub fn write_samples<W: Write>(writer: W, samples: &Samples) -> Result<()> {
    write_pairs(writer, ["x", "f"], samples.nodes().iter().copied().zip(samples.values().iter().copied()))
}

/// Writes `(x, y)` pairs under the header `x,y`.
pub fn write_xy<W: Write>(writer: W, points: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    write_pairs(writer, ["x", "y"], points)
}

fn write_pairs<W: Write>(writer: W, header: [&str; 2], points: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header)?;
    for (x, y) in points {
        w.write_record([format_float(x), format_float(y)])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the header followed by the rows of each `(d, rows)` study.
pub fn write_convergence<W: Write>(writer: W, studies: &[(f64, Vec<ConvergenceRow>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CONVERGENCE_HEADER)?;
    for (d, rows) in studies {
        for row in rows {
            w.write_record([
                format_float(*d),
                row.level.to_string(),
                format_float(row.h_max),
                format_opt(row.detection_error),
                format_opt(row.detection_order),
                format_float(row.interpolation_error),
                format_opt(row.interpolation_order),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
