use std::io::{Read, Write};

use super::window::{Boundary, Occupancies, Window};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"TSNP";
const VERSION: u8 = 1;

/// A configuration at a time, as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub occ: Occupancies,
    pub time: f64,
    pub seed: u64,
}

/// Layout: `TSNP`, version byte, boundary byte (0 closed, 1 periodic),
/// half-width u64, time f64, seed u64 (all little-endian), then the sites
/// `−L..=L` packed eight per byte, least significant bit first.
pub fn write_snapshot<W: Write>(mut out: W, snap: &Snapshot) -> Result<()> {
    let w = snap.occ.window();
    out.write_all(MAGIC)?;
    out.write_all(&[VERSION, matches!(w.boundary, Boundary::Periodic) as u8])?;
    out.write_all(&(w.half_width as u64).to_le_bytes())?;
    out.write_all(&snap.time.to_le_bytes())?;
    out.write_all(&snap.seed.to_le_bytes())?;
    let mut packed = vec![0u8; w.len().div_ceil(8)];
    for (k, &b) in snap.occ.bits().iter().enumerate() {
        packed[k / 8] |= (b as u8) << (k % 8);
    }
    out.write_all(&packed)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<Snapshot> {
    let mut head = [0u8; 30];
    input.read_exact(&mut head)?;
    if &head[..4] != MAGIC || head[4] != VERSION {
        return Err(Error::InvalidInput("not a version-1 snapshot".into()));
    }
    let boundary = match head[5] {
        0 => Boundary::Closed,
        1 => Boundary::Periodic,
        b => return Err(Error::InvalidInput(format!("unknown boundary byte {b}"))),
    };
    let u64_at = |k: usize| u64::from_le_bytes(head[k..k + 8].try_into().expect("8 bytes"));
    let half_width = i64::try_from(u64_at(6)).map_err(|_| Error::InvalidInput("half-width too large".into()))?;
    let time = f64::from_bits(u64_at(14));
    let seed = u64_at(22);
    let window = Window::new(half_width, boundary)?;
    let mut packed = vec![0u8; window.len().div_ceil(8)];
    input.read_exact(&mut packed)?;
    let bits = (0..window.len()).map(|k| packed[k / 8] >> (k % 8) & 1 == 1).collect();
    Ok(Snapshot {
        occ: Occupancies::from_bits(window, bits)?,
        time,
        seed,
    })
}
