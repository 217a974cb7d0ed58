//! CSV import and export for signals and symbols.
//!
//! Signals use rows `index,re,im`; symbols use `x_index,xi_index,re,im`.
//! Indices refer to the lexicographic enumeration of the group. Every index
//! must appear exactly once; row order is free.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, Side};
use crate::psido::Symbol;
use crate::transforms::{PhaseDomain, PhaseFunction, Signal};

#[derive(Serialize, Deserialize)]
struct SignalRow {
    index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SymbolRow {
    x_index: usize,
    xi_index: usize,
    re: f64,
    im: f64,
}

fn place(slots: &mut [Option<Complex64>], at: usize, value: Complex64) -> Result<()> {
    let len = slots.len();
    let slot = slots
        .get_mut(at)
        .ok_or_else(|| Error::Csv(format!("index {at} out of range for {len} entries")))?;
    if slot.is_some() {
        return Err(Error::Csv(format!("index {at} appears twice")));
    }
    *slot = Some(value);
    Ok(())
}

fn collect(slots: Vec<Option<Complex64>>) -> Result<Vec<Complex64>> {
    slots
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Csv(format!("index {i} is missing"))))
        .collect()
}

fn check_finite(re: f64, im: f64) -> Result<Complex64> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(Error::Csv(format!("non-finite value ({re}, {im})")))
    }
}

/// Writes `f` as `index,re,im` rows.
pub fn write_signal<W: Write>(f: &Signal, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for (index, z) in f.data().iter().enumerate() {
        out.serialize(SignalRow { index, re: z.re, im: z.im })?;
    }
    out.flush().map_err(|e| Error::Csv(e.to_string()))
}

/// Reads a time-side signal on `group` from `index,re,im` rows.
pub fn read_signal<R: Read>(group: &Group, reader: R) -> Result<Signal> {
    let mut slots = vec![None; group.order()];
    for row in csv::Reader::from_reader(reader).deserialize::<SignalRow>() {
        let row = row?;
        place(&mut slots, row.index, check_finite(row.re, row.im)?)?;
    }
    Signal::new(group.clone(), Side::Time, collect(slots)?)
}

/// Writes `sigma` as `x_index,xi_index,re,im` rows.
pub fn write_symbol<W: Write>(sigma: &Symbol, writer: W) -> Result<()> {
    let n = sigma.group().order();
    let mut out = csv::Writer::from_writer(writer);
    for x_index in 0..n {
        for xi_index in 0..n {
            let z = sigma.get(x_index, xi_index);
            out.serialize(SymbolRow { x_index, xi_index, re: z.re, im: z.im })?;
        }
    }
    out.flush().map_err(|e| Error::Csv(e.to_string()))
}

/// Reads a symbol on `group × Ĝ` from `x_index,xi_index,re,im` rows.
pub fn read_symbol<R: Read>(group: &Group, reader: R) -> Result<Symbol> {
    let n = group.order();
    let mut slots = vec![None; n * n];
    for row in csv::Reader::from_reader(reader).deserialize::<SymbolRow>() {
        let row = row?;
        if row.x_index >= n || row.xi_index >= n {
            return Err(Error::Csv(format!(
                "phase point ({}, {}) out of range for group of order {n}",
                row.x_index, row.xi_index
            )));
        }
        place(&mut slots, row.x_index * n + row.xi_index, check_finite(row.re, row.im)?)?;
    }
    Symbol::new(PhaseFunction::new(group.clone(), PhaseDomain::TimeFrequency, collect(slots)?)?)
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| Error::Csv(format!("{}: {e}", path.display())))
}

pub fn load_signal(group: &Group, path: impl AsRef<Path>) -> Result<Signal> {
    read_signal(group, open(path.as_ref())?)
}

pub fn save_signal(f: &Signal, path: impl AsRef<Path>) -> Result<()> {
    write_signal(f, create(path.as_ref())?)
}

pub fn load_symbol(group: &Group, path: impl AsRef<Path>) -> Result<Symbol> {
    read_symbol(group, open(path.as_ref())?)
}

pub fn save_symbol(sigma: &Symbol, path: impl AsRef<Path>) -> Result<()> {
    write_symbol(sigma, create(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z46() -> Group {
        Group::new(vec![4, 6]).unwrap()
    }

    #[test]
    fn signal_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Signal::random(z46(), &mut rng);
        let mut buf = Vec::new();
        write_signal(&f, &mut buf).unwrap();
        let g = read_signal(&z46(), buf.as_slice()).unwrap();
        assert_eq!(f.data(), g.data());
    }

    #[test]
    fn symbol_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Group::cyclic(6).unwrap();
        let sigma = Symbol::random_decaying(g.clone(), 0.5, &mut rng);
        let mut buf = Vec::new();
        write_symbol(&sigma, &mut buf).unwrap();
        let back = read_symbol(&g, buf.as_slice()).unwrap();
        assert_eq!(sigma.data().data(), back.data().data());
    }

    #[test]
    fn rows_may_come_in_any_order() {
        let text = "index,re,im\n2,3.0,0\n0,1.0,0.5\n1,2.0,-1\n";
        let f = read_signal(&Group::cyclic(3).unwrap(), text.as_bytes()).unwrap();
        assert_eq!(f.data(), &[Complex64::new(1.0, 0.5), Complex64::new(2.0, -1.0), Complex64::new(3.0, 0.0)]);
    }

    #[test]
    fn rejects_missing_duplicate_and_out_of_range_rows() {
        let g = Group::cyclic(3).unwrap();
        for text in [
            "index,re,im\n0,1,0\n1,1,0\n",
            "index,re,im\n0,1,0\n1,1,0\n1,1,0\n",
            "index,re,im\n0,1,0\n1,1,0\n3,1,0\n",
            "index,re,im\n0,1,0\n1,NaN,0\n2,1,0\n",
            "index,re\n0,1\n",
        ] {
            assert!(matches!(read_signal(&g, text.as_bytes()), Err(Error::Csv(_))), "{text}");
        }
        let sym = "x_index,xi_index,re,im\n0,3,1,0\n";
        assert!(matches!(read_symbol(&g, sym.as_bytes()), Err(Error::Csv(_))));
    }
}
