//! File formats for EFG-vs-field series and electronic level models.

use std::fmt::Write as _;
use std::io::{Read, Write};

use nalgebra::Vector3;

use crate::error::csv_err;
use crate::spin::{EfgTensor, NuclearSpecies};
use crate::{CMatrix, Complex64, OnqError, Result};

use super::{ElectronicLevelModel, DEFAULT_ETA_EV, EFG_COMPONENTS, EFG_COMPONENT_NAMES};

const SERIES_HEADER: [&str; 9] = ["Ex", "Ey", "Ez", "Vxx", "Vyy", "Vzz", "Vxy", "Vxz", "Vyz"];

/// One point of an EFG-vs-field calculation. Field in V/Å, EFG in V/Å².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfgSample {
    pub field: Vector3<f64>,
    pub efg: EfgTensor,
}

/// EFG computed at a set of applied static fields for one nuclear site.
#[derive(Debug, Clone, PartialEq)]
pub struct EfgFieldSeries {
    species: NuclearSpecies,
    samples: Vec<EfgSample>,
}

impl EfgFieldSeries {
    /// Samples are stored sorted by (Ex, Ey, Ez).
    pub fn new(species: NuclearSpecies, mut samples: Vec<EfgSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(OnqError::invalid("EFG series has no samples"));
        }
        if samples.iter().any(|s| s.field.iter().any(|x| !x.is_finite())) {
            return Err(OnqError::invalid("non-finite field in EFG series"));
        }
        samples.sort_by(|a, b| {
            a.field[0]
                .total_cmp(&b.field[0])
                .then(a.field[1].total_cmp(&b.field[1]))
                .then(a.field[2].total_cmp(&b.field[2]))
        });
        Ok(Self { species, samples })
    }

    pub fn species(&self) -> &NuclearSpecies {
        &self.species
    }

    pub fn samples(&self) -> &[EfgSample] {
        &self.samples
    }

    /// Builds a series by sampling `efg_at(field)` at each given field.
    pub fn from_fn(
        species: NuclearSpecies,
        fields: impl IntoIterator<Item = Vector3<f64>>,
        mut efg_at: impl FnMut(&Vector3<f64>) -> Result<EfgTensor>,
    ) -> Result<Self> {
        let samples = fields
            .into_iter()
            .map(|f| Ok(EfgSample { field: f, efg: efg_at(&f)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(species, samples)
    }
}

/// Reads an EFG series CSV. The `# species=<label>` comment selects the
/// nuclide from `nuclides`.
pub fn read_efg_series<R: Read>(mut reader: R, nuclides: &[NuclearSpecies]) -> Result<EfgFieldSeries> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;

    let mut label = None;
    for (k, line) in text.lines().enumerate() {
        if let Some(rest) = line.trim().strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("species=") {
                if label.is_some() {
                    return Err(OnqError::parse(k + 1, "species declared twice"));
                }
                label = Some(v.trim().to_string());
            }
        }
    }
    let label = label.ok_or_else(|| OnqError::parse(1, "missing `# species=<label>` line"))?;
    let species = nuclides
        .iter()
        .find(|s| s.label == label)
        .cloned()
        .ok_or_else(|| OnqError::invalid(format!("species `{label}` not in the nuclide table")))?;

    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != SERIES_HEADER {
        return Err(OnqError::parse(1, format!("expected header `{}`", SERIES_HEADER.join(","))));
    }
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut x = [0.0; 9];
        for (k, slot) in x.iter_mut().enumerate() {
            *slot = rec[k].parse().map_err(|_| {
                OnqError::parse(line, format!("`{}` is not a number in column {}", &rec[k], SERIES_HEADER[k]))
            })?;
        }
        let efg = EfgTensor::from_components(x[3], x[4], x[5], x[6], x[7], x[8])
            .map_err(|e| OnqError::parse(line, e.to_string()))?;
        samples.push(EfgSample { field: Vector3::new(x[0], x[1], x[2]), efg });
    }
    EfgFieldSeries::new(species, samples)
}

pub fn write_efg_series<W: Write>(mut writer: W, series: &EfgFieldSeries) -> Result<()> {
    writeln!(writer, "# species={}", series.species.label)?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SERIES_HEADER).map_err(csv_err)?;
    for s in &series.samples {
        let v = s.efg.matrix();
        let mut row: Vec<String> = s.field.iter().map(|x| x.to_string()).collect();
        row.extend(EFG_COMPONENTS.iter().map(|&(i, j)| v[(i, j)].to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse().map_err(|_| OnqError::parse(line, format!("`{tok}` is not a number")))
}

fn parse_complex(tok: &str, line: usize) -> Result<Complex64> {
    match tok.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re, line)?, parse_f64(im, line)?)),
        None => Ok(Complex64::new(parse_f64(tok, line)?, 0.0)),
    }
}

/// Reads a level model.
///
/// ```text
/// n_levels 2
/// eta 0.001          # optional, eV
/// energies
/// 0.0 1.5
/// occupations
/// 1 0
/// dipole x           # n rows of `re,im` tokens (bare `re` allowed)
/// 0,0 1,0
/// 1,0 0,0
/// efg zz
/// 0 2.5
/// 2.5 0
/// ```
///
/// Matrix blocks that are absent are zero.
pub fn read_level_model<R: Read>(mut reader: R) -> Result<ElectronicLevelModel> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut n: Option<usize> = None;
    let mut eta = DEFAULT_ETA_EV;
    let mut energies = None;
    let mut occupations = None;
    let mut dipole: [Option<CMatrix>; 3] = Default::default();
    let mut efg: [Option<CMatrix>; 6] = Default::default();

    let need_n = |n: Option<usize>, line: usize| n.ok_or_else(|| OnqError::parse(line, "`n_levels` must come first"));

    while let Some((ln, line)) = lines.next() {
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or("");
        let arg = words.next();
        if words.next().is_some() {
            return Err(OnqError::parse(ln, format!("unexpected tokens after `{key}`")));
        }
        match key {
            "n_levels" => {
                let v: usize = arg
                    .and_then(|a| a.parse().ok())
                    .filter(|&v| v > 0)
                    .ok_or_else(|| OnqError::parse(ln, "n_levels needs a positive integer"))?;
                n = Some(v);
            }
            "eta" => eta = parse_f64(arg.ok_or_else(|| OnqError::parse(ln, "eta needs a value"))?, ln)?,
            "energies" | "occupations" => {
                let nl = need_n(n, ln)?;
                let (vl, row) = lines.next().ok_or_else(|| OnqError::parse(ln, format!("`{key}` has no data")))?;
                let v = row.split_whitespace().map(|t| parse_f64(t, vl)).collect::<Result<Vec<_>>>()?;
                if v.len() != nl {
                    return Err(OnqError::parse(vl, format!("expected {nl} values, found {}", v.len())));
                }
                if key == "energies" { energies = Some(v) } else { occupations = Some(v) }
            }
            "dipole" | "efg" => {
                let nl = need_n(n, ln)?;
                let which = arg.ok_or_else(|| OnqError::parse(ln, format!("`{key}` needs a component")))?;
                let slot = if key == "dipole" {
                    let p = ["x", "y", "z"].iter().position(|&c| c == which);
                    p.map(|p| &mut dipole[p])
                } else {
                    let k = EFG_COMPONENT_NAMES.iter().position(|&c| c == which);
                    k.map(|k| &mut efg[k])
                }
                .ok_or_else(|| OnqError::parse(ln, format!("unknown component `{which}`")))?;
                if slot.is_some() {
                    return Err(OnqError::parse(ln, format!("`{key} {which}` given twice")));
                }
                let mut m = CMatrix::zeros(nl, nl);
                for r in 0..nl {
                    let (rl, row) = lines
                        .next()
                        .ok_or_else(|| OnqError::parse(ln, format!("`{key} {which}` needs {nl} rows")))?;
                    let toks: Vec<&str> = row.split_whitespace().collect();
                    if toks.len() != nl {
                        return Err(OnqError::parse(rl, format!("expected {nl} entries, found {}", toks.len())));
                    }
                    for (c, t) in toks.iter().enumerate() {
                        m[(r, c)] = parse_complex(t, rl)?;
                    }
                }
                *slot = Some(m);
            }
            other => return Err(OnqError::parse(ln, format!("unknown keyword `{other}`"))),
        }
    }

    let nl = need_n(n, 1)?;
    let energies = energies.ok_or_else(|| OnqError::parse(1, "missing `energies` block"))?;
    let occupations = occupations.ok_or_else(|| OnqError::parse(1, "missing `occupations` block"))?;
    let fill = |m: Option<CMatrix>| m.unwrap_or_else(|| CMatrix::zeros(nl, nl));
    let [dx, dy, dz] = dipole;
    let [e0, e1, e2, e3, e4, e5] = efg;
    ElectronicLevelModel::new(
        energies,
        occupations,
        [fill(dx), fill(dy), fill(dz)],
        [fill(e0), fill(e1), fill(e2), fill(e3), fill(e4), fill(e5)],
        eta,
    )
}

/// Writes a model in the format read by [`read_level_model`]. Zero matrix
/// blocks are omitted.
pub fn write_level_model<W: Write>(mut writer: W, model: &ElectronicLevelModel) -> Result<()> {
    let n = model.n_levels();
    let mut s = String::new();
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "n_levels {n}");
    let _ = writeln!(s, "eta {}", model.eta());
    let _ = writeln!(s, "energies\n{}", join(model.energies()));
    let _ = writeln!(s, "occupations\n{}", join(model.occupations()));
    let block = |s: &mut String, head: String, m: &CMatrix| {
        if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return;
        }
        let _ = writeln!(s, "{head}");
        for r in 0..n {
            let row: Vec<String> = (0..n).map(|c| format!("{},{}", m[(r, c)].re, m[(r, c)].im)).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    };
    for (p, name) in ["x", "y", "z"].iter().enumerate() {
        block(&mut s, format!("dipole {name}"), model.dipole(p));
    }
    for (k, &(i, j)) in EFG_COMPONENTS.iter().enumerate() {
        block(&mut s, format!("efg {}", EFG_COMPONENT_NAMES[k]), model.efg(i, j));
    }
    writer.write_all(s.as_bytes())?;
    Ok(())
}
