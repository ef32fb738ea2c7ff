//! Serialization of grids, tables and run manifests.
//!
//! CSV grids carry the header `re_alpha,im_alpha,value[,value_im]` and list
//! nodes with the imaginary axis outer. JSON documents hold a manifest, the
//! axis metadata and flat value arrays in the same order. Numbers are written
//! in shortest round-trip form, so reading a file reproduces the grid bit for bit.

use std::io::{Read, Write};
use std::time::Duration;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::entanglement::{EntQuasiTable, PauliEigenstate};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid2D, GridAxes};

/// Run record written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// SHA-256 of the value payload, see [`payload_checksum`].
    pub checksum: String,
    pub version: String,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        parameters: serde_json::Value,
        payload: &[f64],
        elapsed: Duration,
    ) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            parameters,
            grid: None,
            seed: None,
            checksum: payload_checksum(payload),
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: elapsed.as_secs_f64(),
        }
    }
}

/// Hex SHA-256 of the little-endian bytes of `values`.
pub fn payload_checksum(values: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.to_le_bytes());
    }
    format!("{:x}", hasher.finalize())
}

/// Parses `min:max:count,min:max:count` (real axis first).
pub fn parse_grid_spec(text: &str) -> Result<GridAxes> {
    let err = |why: &'static str| Error::GridSpec(text.to_string(), why);
    let parts: Vec<&str> = text.split(',').collect();
    let [re, im] = parts.as_slice() else {
        return Err(err("expected two comma-separated axes"));
    };
    let axis = |s: &str| -> Result<Axis> {
        let fields: Vec<&str> = s.trim().split(':').collect();
        let [lo, hi, n] = fields.as_slice() else {
            return Err(err("expected min:max:count"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| err("bad minimum"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| err("bad maximum"))?;
        let n: usize = n.trim().parse().map_err(|_| err("bad count"))?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(err("bounds must be finite"));
        }
        if lo >= hi {
            return Err(err("inverted bounds"));
        }
        if n < 2 {
            return Err(err("count must be at least 2"));
        }
        Axis::new(lo, hi, n)
    };
    Ok(GridAxes::new(axis(re)?, axis(im)?))
}

/// Parses a single axis `min:max:count`.
pub fn parse_axis_spec(text: &str) -> Result<Axis> {
    parse_grid_spec(&format!("{text},0:1:2")).map(|axes| axes.re)
}

/// A grid read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub enum GridData {
    Real(Grid2D<f64>),
    Complex(Grid2D<C64>),
}

pub fn write_grid_csv<W: Write>(writer: W, grid: &Grid2D<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["re_alpha", "im_alpha", "value"])?;
    for (a, v) in grid.iter() {
        w.write_record([a.re.to_string(), a.im.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_complex_grid_csv<W: Write>(writer: W, grid: &Grid2D<C64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["re_alpha", "im_alpha", "value", "value_im"])?;
    for (a, v) in grid.iter() {
        w.write_record([
            a.re.to_string(),
            a.im.to_string(),
            v.re.to_string(),
            v.im.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV grid, real or complex depending on the header.
pub fn read_grid_csv<R: Read>(reader: R) -> Result<GridData> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let complex = match header.as_slice() {
        [a, b, c] if a == "re_alpha" && b == "im_alpha" && c == "value" => false,
        [a, b, c, d] if a == "re_alpha" && b == "im_alpha" && c == "value" && d == "value_im" => {
            true
        }
        _ => return Err(Error::Format(format!("unexpected header {header:?}"))),
    };
    let mut points = Vec::new();
    let mut values = Vec::new();
    for record in r.records() {
        let record = record?;
        let num = |k: usize| -> Result<f64> {
            record
                .get(k)
                .ok_or_else(|| Error::Format("short row".into()))?
                .parse()
                .map_err(|_| Error::Format(format!("bad number in column {k}")))
        };
        points.push(C64::new(num(0)?, num(1)?));
        values.push(C64::new(num(2)?, if complex { num(3)? } else { 0.0 }));
    }
    let first = points
        .first()
        .ok_or_else(|| Error::Format("no rows".into()))?;
    let re_nodes: Vec<f64> = points
        .iter()
        .take_while(|p| p.im == first.im)
        .map(|p| p.re)
        .collect();
    let im_nodes: Vec<f64> = points
        .iter()
        .step_by(re_nodes.len())
        .map(|p| p.im)
        .collect();
    let axes = GridAxes::new(Axis::from_nodes(&re_nodes)?, Axis::from_nodes(&im_nodes)?);
    if axes.len() != points.len() {
        return Err(Error::Format("rows do not form a rectangular grid".into()));
    }
    for (k, p) in points.iter().enumerate() {
        let q = axes.point(k % re_nodes.len(), k / re_nodes.len());
        if *p != q {
            return Err(Error::Format(format!("row {k} is at {p}, expected {q}")));
        }
    }
    Ok(if complex {
        GridData::Complex(Grid2D::from_values(axes, values)?)
    } else {
        GridData::Real(Grid2D::from_values(
            axes,
            values.into_iter().map(|v| v.re).collect(),
        )?)
    })
}

/// JSON grid document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub manifest: RunManifest,
    pub re_axis: Axis,
    pub im_axis: Axis,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values_im: Option<Vec<f64>>,
}

impl GridDocument {
    pub fn real(manifest: RunManifest, grid: &Grid2D<f64>) -> Self {
        Self {
            manifest,
            re_axis: grid.axes().re,
            im_axis: grid.axes().im,
            values: grid.values().to_vec(),
            values_im: None,
        }
    }

    pub fn complex(manifest: RunManifest, grid: &Grid2D<C64>) -> Self {
        Self {
            manifest,
            re_axis: grid.axes().re,
            im_axis: grid.axes().im,
            values: grid.values().iter().map(|v| v.re).collect(),
            values_im: Some(grid.values().iter().map(|v| v.im).collect()),
        }
    }

    pub fn to_grid(&self) -> Result<GridData> {
        let axes = GridAxes::new(self.re_axis, self.im_axis);
        match &self.values_im {
            None => Ok(GridData::Real(Grid2D::from_values(
                axes,
                self.values.clone(),
            )?)),
            Some(im) => {
                if im.len() != self.values.len() {
                    return Err(Error::Format(
                        "values and values_im differ in length".into(),
                    ));
                }
                let vals = self
                    .values
                    .iter()
                    .zip(im)
                    .map(|(&r, &i)| C64::new(r, i))
                    .collect();
                Ok(GridData::Complex(Grid2D::from_values(axes, vals)?))
            }
        }
    }
}

pub fn write_json<W: Write, T: Serialize>(mut writer: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)?;
    Ok(())
}

pub fn read_grid_json<R: Read>(reader: R) -> Result<GridData> {
    let doc: GridDocument = serde_json::from_reader(reader)?;
    doc.to_grid()
}

/// Points along a one-dimensional cut, with optional extra named columns.
pub fn write_points_csv<W: Write>(
    writer: W,
    extra: &[&str],
    rows: &[(C64, Vec<f64>)],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["re_alpha", "im_alpha", "value"];
    header.extend_from_slice(extra);
    w.write_record(&header)?;
    for (a, vals) in rows {
        let mut rec = vec![a.re.to_string(), a.im.to_string()];
        rec.extend(vals.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Entanglement table as rows `a,b,value`, `a` outer.
pub fn write_table_csv<W: Write>(writer: W, table: &EntQuasiTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["a", "b", "value"])?;
    for a in PauliEigenstate::ALL {
        for b in PauliEigenstate::ALL {
            w.write_record([a.label(), b.label(), &table.get(a, b).to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// JSON form of an entanglement table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub manifest: RunManifest,
    pub labels: Vec<String>,
    pub table: EntQuasiTable,
    pub total_negativity: Option<f64>,
}

pub fn table_payload(table: &EntQuasiTable) -> Vec<f64> {
    table.values.iter().flatten().copied().collect()
}
