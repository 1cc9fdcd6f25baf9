//! Versioned binary file for merged CM+MG state.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "KGESKTCH"
//! version  u32      1
//! n        u32      hash functions / rows
//! w        u64      counters per row
//! k        u64
//! seeds    n x u64
//! counters n x w x u64, row-major
//! entries  u64      number of summary entries
//! entry    u8 kind tag, u32 byte length, lexical bytes, u64 count
//! ```

use std::io::{Read, Write};

use super::count_min::CountMinSketch;
use super::hash::HashFamily;
use super::hybrid::MergedSketch;
use super::misra_gries::MisraGries;
use crate::binio::{Reader, Writer};
use crate::error::Result;

const MAGIC: &[u8; 8] = b"KGESKTCH";
const VERSION: u32 = 1;

pub fn write_sketch<W: Write>(sketch: &MergedSketch, out: W) -> Result<()> {
    let mut w = Writer::new(out);
    let cm = &sketch.count_min;
    w.bytes(MAGIC)?;
    w.u32(VERSION)?;
    w.u32(cm.depth() as u32)?;
    w.u64(cm.width() as u64)?;
    w.u64(sketch.k as u64)?;
    for &s in cm.family().seeds() {
        w.u64(s)?;
    }
    for j in 0..cm.depth() {
        for &c in cm.row(j) {
            w.u64(c)?;
        }
    }
    let entries = sketch.summary.entries();
    w.u64(entries.len() as u64)?;
    for (term, count) in &entries {
        w.term(term)?;
        w.u64(*count)?;
    }
    w.into_inner().flush()?;
    Ok(())
}

pub fn read_sketch<R: Read>(input: R) -> Result<MergedSketch> {
    let mut r = Reader::new(input, "sketch file");
    r.magic(MAGIC)?;
    let at = r.offset();
    let version = r.u32()?;
    if version != VERSION {
        return Err(r.fail(at, format!("unsupported version {version}")));
    }
    let at = r.offset();
    let n = r.u32()? as usize;
    let width = r.u64()? as usize;
    let k = r.u64()? as usize;
    if n == 0 || width == 0 || k > width {
        return Err(r.fail(at, "invalid sketch shape"));
    }
    let at = r.offset();
    let seeds = (0..n).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
    let family = HashFamily::from_seeds(seeds).map_err(|e| r.fail(at, e.to_string()))?;
    let mut counters = Vec::with_capacity(n * width);
    for _ in 0..n * width {
        counters.push(r.u64()?);
    }
    let count_min = CountMinSketch::from_raw(family, width, counters)?;
    let entries = r.u64()?;
    let mut summary = MisraGries::new(k.max(1))?;
    for _ in 0..entries {
        let at = r.offset();
        let term = r.term()?;
        let count = r.u64()?;
        summary
            .insert_raw(term, count)
            .map_err(|e| r.fail(at, e.to_string()))?;
    }
    r.end()?;
    Ok(MergedSketch {
        k,
        count_min,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ingest::Term;
    use crate::sketch::{count_hybrid, SketchConfig};

    fn sample() -> MergedSketch {
        let stream: Vec<Term> = (0..500u64)
            .map(|i| match i % 4 {
                0 => Term::literal(format!("\"{}\"@en", i % 9)),
                1 => Term::blank(format!("_:b{}", i % 5)),
                _ => Term::iri(format!("http://x/{}", i % 11)),
            })
            .collect();
        let config = SketchConfig {
            k: 6,
            width: 64,
            ..SketchConfig::default()
        };
        count_hybrid(&config, 2, 1, |p| stream.iter().skip(p).step_by(2)).unwrap()
    }

    #[test]
    fn round_trip() {
        let sketch = sample();
        let mut buf = Vec::new();
        write_sketch(&sketch, &mut buf).unwrap();
        let back = read_sketch(&buf[..]).unwrap();
        assert_eq!(back, sketch);
        assert_eq!(back.top_k().unwrap(), sketch.top_k().unwrap());
    }

    #[test]
    fn truncation_reports_offset() {
        let mut buf = Vec::new();
        write_sketch(&sample(), &mut buf).unwrap();
        let cut = buf.len() - 3;
        match read_sketch(&buf[..cut]) {
            Err(Error::Format { offset, .. }) => assert!(offset < cut as u64),
            other => panic!("expected format error, got {other:?}"),
        }
        buf[0] = b'X';
        assert!(matches!(read_sketch(&buf[..]), Err(Error::Format { offset: 0, .. })));
    }
}
