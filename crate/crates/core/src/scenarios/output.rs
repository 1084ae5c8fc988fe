//! File writers: VTK legacy point clouds, CSV tables and TOML summaries.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::Simulation;

use super::config::Field;

pub fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes the current configuration of `sim` with every field.
pub fn write_vtk(path: &Path, sim: &Simulation, title: &str) -> Result<()> {
    write_vtk_fields(path, sim, title, &Field::ALL)
}

/// Legacy ASCII VTK polydata with one vertex per material point at its
/// current position.
pub fn write_vtk_fields(path: &Path, sim: &Simulation, title: &str, fields: &[Field]) -> Result<()> {
    let mut w = create(path)?;
    encode_vtk(&mut w, sim, title, fields)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

fn encode_vtk(w: &mut impl Write, sim: &Simulation, title: &str, fields: &[Field]) -> std::io::Result<()> {
    let n = sim.len();
    let title: String = title.chars().filter(|c| *c != '\n').take(255).collect();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{title}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET POLYDATA")?;
    writeln!(w, "POINTS {n} double")?;
    for x in &sim.position {
        writeln!(w, "{:?} {:?} {:?}", x[0], x[1], x[2])?;
    }
    writeln!(w, "VERTICES {n} {}", 2 * n)?;
    for i in 0..n {
        writeln!(w, "1 {i}")?;
    }
    if fields.is_empty() {
        return Ok(());
    }
    writeln!(w, "POINT_DATA {n}")?;
    for field in fields {
        match field {
            Field::Displacement => {
                writeln!(w, "VECTORS displacement double")?;
                for i in 0..n {
                    let u = sim.displacement(i);
                    writeln!(w, "{:?} {:?} {:?}", u[0], u[1], u[2])?;
                }
            }
            Field::Velocity => {
                writeln!(w, "VECTORS velocity double")?;
                for v in &sim.velocity {
                    writeln!(w, "{:?} {:?} {:?}", v[0], v[1], v[2])?;
                }
            }
            Field::Damage => {
                writeln!(w, "SCALARS damage double 1")?;
                writeln!(w, "LOOKUP_TABLE default")?;
                for d in sim.damage() {
                    writeln!(w, "{d:?}")?;
                }
                writeln!(w, "SCALARS relative_damage double 1")?;
                writeln!(w, "LOOKUP_TABLE default")?;
                for d in sim.relative_damage() {
                    writeln!(w, "{d:?}")?;
                }
            }
            Field::Phase => {
                writeln!(w, "SCALARS phase int 1")?;
                writeln!(w, "LOOKUP_TABLE default")?;
                for p in &sim.body.phases {
                    writeln!(w, "{}", *p as u8)?;
                }
            }
            Field::Pressure => {
                writeln!(w, "SCALARS pressure double 1")?;
                writeln!(w, "LOOKUP_TABLE default")?;
                for p in &sim.pressure {
                    writeln!(w, "{p:?}")?;
                }
            }
        }
    }
    Ok(())
}

/// CSV writer with a fixed header; numbers use the shortest exact decimal
/// form, so identical values always produce identical bytes.
#[derive(Debug)]
pub struct CsvTable {
    writer: csv::Writer<BufWriter<File>>,
    path: std::path::PathBuf,
}

impl CsvTable {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self> {
        let file = create(path)?;
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(file);
        writer
            .write_record(header)
            .map_err(|e| csv_error(path, e))?;
        Ok(Self {
            writer,
            path: path.to_path_buf(),
        })
    }

    pub fn row(&mut self, values: &[f64]) -> Result<()> {
        let fields: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
        self.writer
            .write_record(&fields)
            .map_err(|e| csv_error(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// Serialises `report` as TOML.
pub fn write_summary<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let text = toml::to_string(report).map_err(|e| Error::Diagnostic(e.to_string()))?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
