//! Nuclide table: CSV with header
//! `label,spin_I,quadrupole_moment_barn,gyromagnetic_2pi_MHz_per_T`.

use std::io::{Read, Write};

use crate::error::csv_err;
use crate::{OnqError, Result};

use super::NuclearSpecies;

const HEADER: [&str; 4] = [
    "label",
    "spin_I",
    "quadrupole_moment_barn",
    "gyromagnetic_2pi_MHz_per_T",
];

pub fn read_nuclide_file<R: Read>(reader: R) -> Result<Vec<NuclearSpecies>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(OnqError::parse(1, format!("expected header `{}`", HEADER.join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse::<f64>()
                .map_err(|_| OnqError::parse(line, format!("`{}` is not a number in column {}", &rec[k], HEADER[k])))
        };
        let sp = NuclearSpecies::new(&rec[0], num(1)?, num(2)?, num(3)?)
            .map_err(|e| OnqError::parse(line, e.to_string()))?;
        out.push(sp);
    }
    Ok(out)
}

pub fn write_nuclide_file<W: Write>(writer: W, species: &[NuclearSpecies]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER).map_err(csv_err)?;
    for s in species {
        w.write_record([
            s.label.clone(),
            s.spin_i.to_string(),
            s.quadrupole_moment_barn.to_string(),
            s.gyromagnetic_mhz_2pi_per_t.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
