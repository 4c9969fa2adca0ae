use std::io::{Read, Write};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FQST";
const VERSION: u32 = 1;

/// Measurement outcomes, one packed row per shot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotTable {
    shots: usize,
    num_records: usize,
    words: usize,
    bits: Vec<u64>,
    pub seed: u64,
    pub circuit: String,
}

impl ShotTable {
    pub(crate) fn from_words(
        shots: usize,
        num_records: usize,
        bits: Vec<u64>,
        seed: u64,
        circuit: String,
    ) -> ShotTable {
        let words = num_records.div_ceil(64).max(1);
        debug_assert_eq!(bits.len(), words * shots);
        ShotTable { shots, num_records, words, bits, seed, circuit }
    }

    /// Builds a table from explicit rows; every row must hold `num_records` bits.
    pub fn from_rows(num_records: usize, rows: &[Vec<bool>]) -> Result<ShotTable> {
        let words = num_records.div_ceil(64).max(1);
        let mut bits = vec![0u64; words * rows.len()];
        for (s, row) in rows.iter().enumerate() {
            if row.len() != num_records {
                return Err(Error::ShotFormat(format!("row {s} has {} bits", row.len())));
            }
            for (r, &b) in row.iter().enumerate() {
                if b {
                    bits[s * words + r / 64] |= 1 << (r % 64);
                }
            }
        }
        Ok(ShotTable::from_words(rows.len(), num_records, bits, 0, String::new()))
    }

    pub fn shots(&self) -> usize {
        self.shots
    }

    pub fn num_records(&self) -> usize {
        self.num_records
    }

    #[inline]
    pub fn row(&self, shot: usize) -> &[u64] {
        &self.bits[shot * self.words..(shot + 1) * self.words]
    }

    #[inline]
    pub fn get(&self, shot: usize, record: usize) -> bool {
        super::bit(self.row(shot), record)
    }

    pub fn row_bits(&self, shot: usize) -> Vec<bool> {
        (0..self.num_records).map(|r| self.get(shot, r)).collect()
    }

    /// Header (magic, u32 version, u64 shots, u64 records, little endian)
    /// followed by each shot's records packed LSB-first into whole bytes.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.shots as u64).to_le_bytes())?;
        w.write_all(&(self.num_records as u64).to_le_bytes())?;
        let row_bytes = self.num_records.div_ceil(8);
        for s in 0..self.shots {
            let bytes: Vec<u8> = self.row(s).iter().flat_map(|w| w.to_le_bytes()).take(row_bytes).collect();
            w.write_all(&bytes)?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<ShotTable> {
        let mut head = [0u8; 24];
        r.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(Error::ShotFormat("bad magic".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::ShotFormat(format!("unsupported version {version}")));
        }
        let shots = u64::from_le_bytes(head[8..16].try_into().unwrap()) as usize;
        let num_records = u64::from_le_bytes(head[16..24].try_into().unwrap()) as usize;
        let words = num_records.div_ceil(64).max(1);
        let row_bytes = num_records.div_ceil(8);
        let mut bits = vec![0u64; words * shots];
        let mut buf = vec![0u8; row_bytes];
        for s in 0..shots {
            r.read_exact(&mut buf)?;
            for (k, &byte) in buf.iter().enumerate() {
                bits[s * words + k / 8] |= (byte as u64) << (8 * (k % 8));
            }
        }
        Ok(ShotTable::from_words(shots, num_records, bits, 0, String::new()))
    }

    /// One line per shot of `0`/`1` characters.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut line = String::with_capacity(self.num_records + 1);
        for s in 0..self.shots {
            line.clear();
            line.extend((0..self.num_records).map(|r| if self.get(s, r) { '1' } else { '0' }));
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}
