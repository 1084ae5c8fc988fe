//! Binary restart files: little-endian, fixed layout.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::Simulation;
use crate::error::{Error, Result};
use crate::vector::Vec3;

const MAGIC: &[u8; 8] = b"PERIKCP\0";
const VERSION: u32 = 2;

fn write_vec3(w: &mut impl Write, v: Vec3) -> std::io::Result<()> {
    for c in v {
        w.write_f64::<LE>(c)?;
    }
    Ok(())
}

fn read_vec3(r: &mut impl Read) -> std::io::Result<Vec3> {
    Ok([r.read_f64::<LE>()?, r.read_f64::<LE>()?, r.read_f64::<LE>()?])
}

fn encode(sim: &Simulation, w: &mut impl Write) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(VERSION)?;
    w.write_u64::<LE>(sim.step)?;
    w.write_f64::<LE>(sim.time)?;
    w.write_u64::<LE>(sim.len() as u64)?;
    for i in 0..sim.len() {
        write_vec3(w, sim.position[i])?;
        write_vec3(w, sim.velocity[i])?;
        write_vec3(w, sim.force[i])?;
    }
    w.write_u64::<LE>(sim.body.bonds.len() as u64)?;
    w.write_all(&sim.body.bonds.state)?;
    match &sim.projectile {
        Some(p) => {
            w.write_u8(1)?;
            write_vec3(w, p.body.origin)?;
            write_vec3(w, p.body.velocity)?;
            write_vec3(w, p.body.force)?;
        }
        None => w.write_u8(0)?,
    }
    w.write_f64::<LE>(sim.energy.external_work)?;
    w.write_f64::<LE>(sim.energy.dissipated)?;
    w.write_u64::<LE>(sim.eos_clamps)?;
    Ok(())
}

pub fn write(sim: &Simulation, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode(sim, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Loads a restart file into a simulation built from the same configuration.
pub fn restore(sim: &mut Simulation, path: &Path) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let io = |e| Error::io(path, e);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(Error::Config(format!("{} is not a checkpoint file", path.display())));
    }
    let version = r.read_u32::<LE>().map_err(io)?;
    if version != VERSION {
        return Err(Error::Config(format!("unsupported checkpoint version {version}")));
    }
    let step = r.read_u64::<LE>().map_err(io)?;
    let time = r.read_f64::<LE>().map_err(io)?;
    let n = r.read_u64::<LE>().map_err(io)? as usize;
    if n != sim.len() {
        return Err(Error::Config(format!(
            "checkpoint has {n} points, configuration has {}",
            sim.len()
        )));
    }
    let mut force = vec![[0.0; 3]; n];
    for (i, f) in force.iter_mut().enumerate() {
        sim.position[i] = read_vec3(&mut r).map_err(io)?;
        sim.velocity[i] = read_vec3(&mut r).map_err(io)?;
        *f = read_vec3(&mut r).map_err(io)?;
    }
    let nb = r.read_u64::<LE>().map_err(io)? as usize;
    if nb != sim.body.bonds.len() {
        return Err(Error::Config(format!(
            "checkpoint has {nb} bond records, configuration has {}",
            sim.body.bonds.len()
        )));
    }
    r.read_exact(&mut sim.body.bonds.state).map_err(io)?;
    let has_projectile = r.read_u8().map_err(io)? == 1;
    let mut reaction = [0.0; 3];
    match (&mut sim.projectile, has_projectile) {
        (Some(p), true) => {
            p.body.origin = read_vec3(&mut r).map_err(io)?;
            p.body.velocity = read_vec3(&mut r).map_err(io)?;
            reaction = read_vec3(&mut r).map_err(io)?;
        }
        (None, false) => {}
        _ => return Err(Error::Config("checkpoint and configuration disagree on the projectile".into())),
    }
    sim.energy.external_work = r.read_f64::<LE>().map_err(io)?;
    sim.energy.dissipated = r.read_f64::<LE>().map_err(io)?;
    sim.eos_clamps = r.read_u64::<LE>().map_err(io)?;
    sim.step = step;
    sim.time = time;
    sim.reevaluate();
    // forces of the interrupted run predate its last break commit
    sim.force = force;
    if let Some(p) = &mut sim.projectile {
        p.body.force = reaction;
    }
    Ok(())
}
