//! Line-oriented N-Triples reader.
//!
//! Terms keep their exact source spelling: escapes inside IRIs and literals
//! are not decoded, and blank node labels are not renamed. Writing a parsed
//! triple back with `Display` therefore reproduces an equal triple on
//! re-parse. Identical lexical forms share one allocation.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;
use std::sync::Arc;

use flate2::read::MultiGzDecoder;

use super::term::{Term, TermKind, Triple};
use crate::error::{Error, Result};

/// A malformed input line.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// 1-based line number.
    pub line: u64,
    /// Byte offset of the start of the line within the (decompressed) stream.
    pub offset: u64,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {} (byte {}): {}",
            self.line, self.offset, self.message
        )
    }
}

/// What to do with a malformed line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorPolicy {
    #[default]
    Abort,
    SkipAndCount,
}

/// Streaming reader yielding one triple per statement line.
pub struct NTriplesReader<R> {
    reader: R,
    buf: Vec<u8>,
    line: u64,
    offset: u64,
    interner: HashSet<Arc<str>>,
}

impl<R: BufRead> NTriplesReader<R> {
    pub fn new(reader: R) -> Self {
        NTriplesReader {
            reader,
            buf: Vec::with_capacity(256),
            line: 0,
            offset: 0,
            interner: HashSet::new(),
        }
    }

    fn intern(&mut self, s: &str) -> Arc<str> {
        if let Some(shared) = self.interner.get(s) {
            return shared.clone();
        }
        let shared: Arc<str> = Arc::from(s);
        self.interner.insert(shared.clone());
        shared
    }

    fn term(&mut self, kind: TermKind, lexical: &str) -> Term {
        Term::from_shared(kind, self.intern(lexical))
    }
}

impl<R: BufRead> Iterator for NTriplesReader<R> {
    type Item = Result<Triple>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            let start = self.offset;
            let read = match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(n) => n,
                Err(e) => return Some(Err(e.into())),
            };
            self.offset += read as u64;
            self.line += 1;
            let line_no = self.line;
            let fail = |message: String| {
                Some(Err(Error::Parse(ParseError {
                    line: line_no,
                    offset: start,
                    message,
                })))
            };

            let buf = std::mem::take(&mut self.buf);
            let text = match std::str::from_utf8(&buf) {
                Ok(text) => text,
                Err(e) => {
                    self.buf = buf;
                    return fail(format!("invalid UTF-8: {e}"));
                }
            };
            let body = text.trim_end_matches(['\n', '\r']).trim_start_matches([' ', '\t']);
            if body.is_empty() || body.starts_with('#') {
                self.buf = buf;
                continue;
            }
            let parsed = parse_statement(body);
            let result = match parsed {
                Ok([(sk, s), (pk, p), (ok, o)]) => {
                    let subject = self.term(sk, s);
                    let predicate = self.term(pk, p);
                    let object = self.term(ok, o);
                    Ok(Triple::new(subject, predicate, object).expect("kinds checked by parser"))
                }
                Err(message) => Err(message),
            };
            self.buf = buf;
            return match result {
                Ok(triple) => Some(Ok(triple)),
                Err(message) => fail(message),
            };
        }
    }
}

/// Outcome of reading a whole stream.
#[derive(Debug, Default)]
pub struct Parsed {
    pub triples: Vec<Triple>,
    /// Lines skipped under [`ErrorPolicy::SkipAndCount`].
    pub errors: Vec<ParseError>,
}

/// Reads every statement from `reader`. Under [`ErrorPolicy::Abort`] the
/// first malformed line is returned as `Error::Parse`.
pub fn parse_ntriples<R: BufRead>(reader: R, policy: ErrorPolicy) -> Result<Parsed> {
    let mut parsed = Parsed::default();
    for item in NTriplesReader::new(reader) {
        match item {
            Ok(triple) => parsed.triples.push(triple),
            Err(Error::Parse(e)) if policy == ErrorPolicy::SkipAndCount => parsed.errors.push(e),
            Err(e) => return Err(e),
        }
    }
    Ok(parsed)
}

/// Opens a file for reading, transparently decompressing gzip input
/// (detected by its magic bytes, not the file name).
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let file = File::open(path)?;
    sniff_gzip(BufReader::with_capacity(1 << 16, file))
}

pub fn sniff_gzip<R: BufRead + Send + 'static>(mut reader: R) -> io::Result<Box<dyn BufRead + Send>> {
    let head = reader.fill_buf()?;
    if head.len() >= 2 && head[0] == 0x1f && head[1] == 0x8b {
        let decoder: Box<dyn Read + Send> = Box::new(MultiGzDecoder::new(reader));
        Ok(Box::new(BufReader::with_capacity(1 << 16, decoder)))
    } else {
        Ok(Box::new(reader))
    }
}

/// Writes triples as N-Triples, one statement per line.
pub fn write_ntriples<'a, W: io::Write + ?Sized>(
    out: &mut W,
    triples: impl IntoIterator<Item = &'a Triple>,
) -> io::Result<()> {
    for t in triples {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

type Lexeme<'a> = (TermKind, &'a str);

fn parse_statement(line: &str) -> std::result::Result<[Lexeme<'_>; 3], String> {
    let mut cur = Cursor { s: line, pos: 0 };
    let subject = cur.term()?;
    if subject.0 == TermKind::Literal {
        return Err("literal in subject position".into());
    }
    cur.require_ws("subject")?;
    let predicate = cur.term()?;
    if predicate.0 != TermKind::Iri {
        return Err("predicate must be an IRI".into());
    }
    cur.require_ws("predicate")?;
    let object = cur.term()?;
    cur.skip_ws();
    if !cur.eat('.') {
        return Err(format!("expected '.' at column {}", cur.pos + 1));
    }
    cur.skip_ws();
    let rest = cur.rest();
    if !rest.is_empty() && !rest.starts_with('#') {
        return Err(format!("unexpected trailing text at column {}", cur.pos + 1));
    }
    Ok([subject, predicate, object])
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<u8> {
        self.s.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn require_ws(&mut self, after: &str) -> std::result::Result<(), String> {
        let before = self.pos;
        self.skip_ws();
        if self.pos == before {
            return Err(format!("expected whitespace after {after}"));
        }
        Ok(())
    }

    fn term(&mut self) -> std::result::Result<Lexeme<'a>, String> {
        match self.peek() {
            Some(b'<') => self.iri().map(|iri| (TermKind::Iri, iri)),
            Some(b'_') => self.blank().map(|b| (TermKind::BlankNode, b)),
            Some(b'"') => self.literal().map(|l| (TermKind::Literal, l)),
            Some(_) => Err(format!("unexpected character at column {}", self.pos + 1)),
            None => Err("unexpected end of line".into()),
        }
    }

    /// Returns the IRI without brackets.
    fn iri(&mut self) -> std::result::Result<&'a str, String> {
        let open = self.pos;
        self.pos += 1;
        let body = self.rest();
        let Some(end) = body.find('>') else {
            return Err(format!("unterminated IRI at column {}", open + 1));
        };
        let iri = &body[..end];
        if iri.is_empty() {
            return Err(format!("empty IRI at column {}", open + 1));
        }
        if let Some(bad) = iri
            .chars()
            .find(|&c| c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`'))
        {
            return Err(format!("illegal character {bad:?} in IRI at column {}", open + 1));
        }
        self.pos += end + 1;
        Ok(iri)
    }

    /// Returns the label with its `_:` prefix.
    fn blank(&mut self) -> std::result::Result<&'a str, String> {
        let start = self.pos;
        if !self.rest().starts_with("_:") {
            return Err(format!("malformed blank node at column {}", start + 1));
        }
        let token_len = self
            .rest()
            .find([' ', '\t'])
            .unwrap_or(self.rest().len());
        // A label never ends with '.', so a glued-on terminator is given back.
        let token = self.rest()[..token_len].trim_end_matches('.');
        if token.len() <= 2 {
            return Err(format!("empty blank node label at column {}", start + 1));
        }
        if token[2..].contains(['<', '>', '"', '#']) {
            return Err(format!("illegal character in blank node label at column {}", start + 1));
        }
        self.pos += token.len();
        Ok(token)
    }

    /// Returns the literal including quotes and any `@lang` / `^^<dt>` suffix.
    fn literal(&mut self) -> std::result::Result<&'a str, String> {
        let start = self.pos;
        let bytes = self.s.as_bytes();
        let mut i = start + 1;
        loop {
            match bytes.get(i) {
                None => return Err(format!("unterminated literal at column {}", start + 1)),
                Some(b'\\') => {
                    if i + 1 >= bytes.len() {
                        return Err(format!("dangling escape at column {}", i + 1));
                    }
                    i += 2;
                }
                Some(b'"') => break,
                Some(_) => i += 1,
            }
        }
        self.pos = i + 1;
        if self.eat('@') {
            let tag_start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'-') {
                self.pos += 1;
            }
            let tag = &self.s[tag_start..self.pos];
            if tag.is_empty()
                || !tag.as_bytes()[0].is_ascii_alphabetic()
                || tag.ends_with('-')
                || tag.contains("--")
            {
                return Err(format!("malformed language tag at column {}", tag_start + 1));
            }
        } else if self.rest().starts_with("^^") {
            self.pos += 2;
            if self.peek() != Some(b'<') {
                return Err(format!("expected datatype IRI at column {}", self.pos + 1));
            }
            self.iri()?;
        }
        Ok(&self.s[start..self.pos])
    }
}
