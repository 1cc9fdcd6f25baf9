//! Little-endian primitives shared by the binary file formats.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};
use crate::ingest::{Term, TermKind};

pub(crate) struct Writer<W> {
    inner: W,
}

impl<W: Write> Writer<W> {
    pub fn new(inner: W) -> Self {
        Writer { inner }
    }

    pub fn bytes(&mut self, b: &[u8]) -> io::Result<()> {
        self.inner.write_all(b)
    }

    pub fn u8(&mut self, v: u8) -> io::Result<()> {
        self.bytes(&[v])
    }

    pub fn u32(&mut self, v: u32) -> io::Result<()> {
        self.bytes(&v.to_le_bytes())
    }

    pub fn u64(&mut self, v: u64) -> io::Result<()> {
        self.bytes(&v.to_le_bytes())
    }

    pub fn term(&mut self, term: &Term) -> io::Result<()> {
        let lex = term.lexical().as_bytes();
        self.u8(term.kind().tag())?;
        self.u32(lex.len() as u32)?;
        self.bytes(lex)
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

/// Reader that tracks its byte offset for error reporting.
pub(crate) struct Reader<R> {
    inner: R,
    offset: u64,
    what: &'static str,
}

impl<R: Read> Reader<R> {
    pub fn new(inner: R, what: &'static str) -> Self {
        Reader {
            inner,
            offset: 0,
            what,
        }
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn fail(&self, offset: u64, reason: impl Into<String>) -> Error {
        Error::format(self.what, offset, reason)
    }

    pub fn exact(&mut self, buf: &mut [u8]) -> Result<()> {
        let at = self.offset;
        match self.inner.read_exact(buf) {
            Ok(()) => {
                self.offset += buf.len() as u64;
                Ok(())
            }
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => {
                Err(self.fail(at, "unexpected end of file"))
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn magic(&mut self, expected: &[u8]) -> Result<()> {
        let mut buf = vec![0; expected.len()];
        self.exact(&mut buf)?;
        if buf != expected {
            return Err(self.fail(0, "bad magic bytes"));
        }
        Ok(())
    }

    pub fn u8(&mut self) -> Result<u8> {
        let mut b = [0; 1];
        self.exact(&mut b)?;
        Ok(b[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        let mut b = [0; 4];
        self.exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    pub fn u64(&mut self) -> Result<u64> {
        let mut b = [0; 8];
        self.exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    pub fn term(&mut self) -> Result<Term> {
        let at = self.offset;
        let tag = self.u8()?;
        let kind = TermKind::from_tag(tag).ok_or_else(|| self.fail(at, format!("unknown term kind {tag}")))?;
        let len = self.u32()? as usize;
        let mut buf = vec![0; len];
        self.exact(&mut buf)?;
        let lexical = String::from_utf8(buf).map_err(|_| self.fail(at, "term is not UTF-8"))?;
        Term::new(kind, lexical).map_err(|_| self.fail(at, "empty term"))
    }

    /// Succeeds only if the stream is exhausted.
    pub fn end(&mut self) -> Result<()> {
        let mut b = [0; 1];
        match self.inner.read(&mut b)? {
            0 => Ok(()),
            _ => Err(self.fail(self.offset, "trailing bytes")),
        }
    }
}
