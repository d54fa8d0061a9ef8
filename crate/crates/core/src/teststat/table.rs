//! On-disk format for calibration tables.
//!
//! Binary, little-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic  b"SPTNULL1"
//! 8       4     format version, u32 (currently 1)
//! 12      1     estimator method: 1 = first differences, 2 = second
//! 13      3     zero padding
//! 16      8     n   (increment count, u64)
//! 24      8     N   (sample size, u64)
//! 32      8     base seed (u64)
//! 40      8     base stream id (u64)
//! 48      8*N   sorted sample, f64 bits
//! 48+8N   32    SHA-256 over every preceding byte
//! ```
//!
//! The trailing digest guards against truncation and bit rot; a write/read
//! round trip reproduces the table bit-exactly.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimators::SigmaMethod;
use crate::rng::RngSeed;

use super::NullTable;

const MAGIC: &[u8; 8] = b"SPTNULL1";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 48;

fn method_tag(method: SigmaMethod) -> u8 {
    match method {
        SigmaMethod::FirstDiff => 1,
        SigmaMethod::SecondDiff => 2,
    }
}

impl NullTable {
    /// Canonical cache file name for a table with these parameters.
    pub fn cache_file_name(
        n: usize,
        replicates: usize,
        seed: RngSeed,
        method: SigmaMethod,
    ) -> String {
        let m = match method {
            SigmaMethod::FirstDiff => "d1",
            SigmaMethod::SecondDiff => "d2",
        };
        format!(
            "null_n{}_N{}_s{}_{}_{}.sptnull",
            n, replicates, seed.seed, seed.stream_id, m
        )
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut header = Vec::with_capacity(HEADER_LEN);
        header.extend_from_slice(MAGIC);
        header.extend_from_slice(&VERSION.to_le_bytes());
        header.push(method_tag(self.method));
        header.extend_from_slice(&[0u8; 3]);
        header.extend_from_slice(&(self.n as u64).to_le_bytes());
        header.extend_from_slice(&(self.sorted.len() as u64).to_le_bytes());
        header.extend_from_slice(&self.seed.seed.to_le_bytes());
        header.extend_from_slice(&self.seed.stream_id.to_le_bytes());

        let mut hasher = Sha256::new();
        hasher.update(&header);
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(&header)?;
        let mut buf = [0u8; 8 * 1024];
        for chunk in self.sorted.chunks(1024) {
            let bytes = &mut buf[..8 * chunk.len()];
            for (i, v) in chunk.iter().enumerate() {
                bytes[8 * i..8 * (i + 1)].copy_from_slice(&v.to_le_bytes());
            }
            hasher.update(&*bytes);
            out.write_all(bytes)?;
        }
        out.write_all(&hasher.finalize())?;
        out.flush()?;
        Ok(())
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut raw = Vec::new();
        File::open(path)?.read_to_end(&mut raw)?;
        let fail = |msg: &str| Error::Format(format!("{}: {msg}", path.display()));

        if raw.len() < HEADER_LEN + 32 {
            return Err(fail("file too short"));
        }
        let (body, digest) = raw.split_at(raw.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(fail("checksum mismatch (truncated or corrupted)"));
        }
        if &body[..8] != MAGIC {
            return Err(fail("bad magic"));
        }
        let version = u32::from_le_bytes(body[8..12].try_into().unwrap());
        if version != VERSION {
            return Err(fail(&format!("unsupported format version {version}")));
        }
        let method = match body[12] {
            1 => SigmaMethod::FirstDiff,
            2 => SigmaMethod::SecondDiff,
            other => return Err(fail(&format!("unknown estimator tag {other}"))),
        };
        let n = u64::from_le_bytes(body[16..24].try_into().unwrap()) as usize;
        let len = u64::from_le_bytes(body[24..32].try_into().unwrap()) as usize;
        let seed = RngSeed::with_stream(
            u64::from_le_bytes(body[32..40].try_into().unwrap()),
            u64::from_le_bytes(body[40..48].try_into().unwrap()),
        );
        let payload = &body[HEADER_LEN..];
        if payload.len() != 8 * len {
            return Err(fail(&format!(
                "sample length mismatch: header says {len}, payload holds {}",
                payload.len() / 8
            )));
        }
        let mut sorted = Vec::with_capacity(len);
        for chunk in payload.chunks_exact(8) {
            sorted.push(f64::from_le_bytes(chunk.try_into().unwrap()));
        }
        if sorted.windows(2).any(|w| w[0] > w[1] || w[0].is_nan() || w[1].is_nan()) {
            return Err(fail("sample is not sorted ascending"));
        }
        Ok(NullTable {
            n,
            seed,
            method,
            sorted,
        })
    }
}
