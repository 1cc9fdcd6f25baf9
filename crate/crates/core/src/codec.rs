//! Encoded triple files: three LEB128 varints per triple.
//!
//! ```text
//! magic   4 bytes "KGE3"
//! count   u64 little-endian, number of triples
//! body    count x (subject, predicate, object) varints, no padding
//! ```

use std::io::{Read, Write};

use integer_encoding::VarInt;

use crate::error::{Error, Result};

pub type EncodedTriple = [u64; 3];

const MAGIC: &[u8; 4] = b"KGE3";
const HEADER_LEN: u64 = 12;

/// Bytes needed for `id` as a varint.
pub fn varint_len(id: u64) -> usize {
    id.required_space()
}

/// Size of the varint body, header excluded.
pub fn body_size(triples: &[EncodedTriple]) -> u64 {
    triples
        .iter()
        .flat_map(|t| t.iter())
        .map(|&id| varint_len(id) as u64)
        .sum()
}

pub fn write_encoded<W: Write>(triples: &[EncodedTriple], mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&(triples.len() as u64).to_le_bytes())?;
    let mut buf = [0u8; 10];
    for t in triples {
        for &id in t {
            let n = id.encode_var(&mut buf);
            out.write_all(&buf[..n])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_encoded<R: Read>(mut input: R) -> Result<Vec<EncodedTriple>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    decode_encoded(&bytes)
}

pub fn decode_encoded(bytes: &[u8]) -> Result<Vec<EncodedTriple>> {
    const WHAT: &str = "encoded triple file";
    if bytes.len() < HEADER_LEN as usize {
        return Err(Error::format(WHAT, bytes.len() as u64, "truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::format(WHAT, 0, "bad magic bytes"));
    }
    let count = u64::from_le_bytes(bytes[4..12].try_into().expect("8 bytes"));
    let mut pos = HEADER_LEN as usize;
    // Every ID takes at least one byte.
    let mut out = Vec::with_capacity(count.min((bytes.len() / 3) as u64) as usize);
    for _ in 0..count {
        let mut t = [0u64; 3];
        for slot in &mut t {
            let Some((id, used)) = u64::decode_var(&bytes[pos..]) else {
                let reason = if pos == bytes.len() {
                    "unexpected end of file"
                } else {
                    "corrupted or truncated varint"
                };
                return Err(Error::format(WHAT, pos as u64, reason));
            };
            *slot = id;
            pos += used;
        }
        out.push(t);
    }
    if pos != bytes.len() {
        return Err(Error::format(WHAT, pos as u64, "trailing bytes after last triple"));
    }
    Ok(out)
}
