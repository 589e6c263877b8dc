//! Text waveform documents and VCD export.
//!
//! ```text
//! horizon 10
//! x 0 : 2 5
//! y 1 :
//! ```
//!
//! The first line fixes the horizon. Each further line is a signal name, its
//! initial bit, a `:` separator and the strictly increasing toggle ticks.
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::signal::{Signal, SignalError, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("invalid signal name {0:?}")]
    InvalidName(String),
    #[error("duplicate signal name {0:?}")]
    Duplicate(String),
    #[error("signal {name:?} has horizon {found}, document has {expected}")]
    Horizon { name: String, expected: Time, found: Time },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VcdError {
    #[error("too many signals for single-character identifiers: {0} > 94")]
    TooManySignals(usize),
}

/// Identifier codes run from `!` to `~`.
pub const MAX_VCD_SIGNALS: usize = 94;

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered set of uniquely named signals sharing one horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveformDoc {
    horizon: Time,
    entries: Vec<(String, Signal)>,
}

impl WaveformDoc {
    pub fn new(horizon: Time) -> Self {
        WaveformDoc { horizon, entries: Vec::new() }
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn entries(&self) -> &[(String, Signal)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Signal> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    fn check(&self, name: &str, signal: &Signal) -> Result<(), DocError> {
        if !is_valid_name(name) {
            return Err(DocError::InvalidName(name.to_owned()));
        }
        if signal.horizon() != self.horizon {
            return Err(DocError::Horizon { name: name.to_owned(), expected: self.horizon, found: signal.horizon() });
        }
        Ok(())
    }

    /// Appends a new entry.
    pub fn push(&mut self, name: &str, signal: Signal) -> Result<(), DocError> {
        self.check(name, &signal)?;
        if self.get(name).is_some() {
            return Err(DocError::Duplicate(name.to_owned()));
        }
        self.entries.push((name.to_owned(), signal));
        Ok(())
    }

    /// Replaces the entry in place, or appends it when absent.
    pub fn set(&mut self, name: &str, signal: Signal) -> Result<(), DocError> {
        self.check(name, &signal)?;
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(entry) => entry.1 = signal,
            None => self.entries.push((name.to_owned(), signal)),
        }
        Ok(())
    }
}

struct Tokens<'a> {
    line: usize,
    rest: &'a str,
    offset: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Tokens { line, rest: text, offset: 0 }
    }

    /// Next whitespace-separated token with its 1-based column.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let trimmed = self.rest.trim_start();
        self.offset += self.rest.len() - trimmed.len();
        if trimmed.is_empty() {
            return None;
        }
        let len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let column = self.offset + 1;
        self.rest = &trimmed[len..];
        self.offset += len;
        Some((column, &trimmed[..len]))
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, message: message.into() }
    }

    fn end_column(&self) -> usize {
        self.offset + 1
    }
}

fn parse_ticks(tokens: &Tokens<'_>, column: usize, token: &str) -> Result<Time, ParseError> {
    if !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(tokens.error(column, format!("expected a tick count, found {token:?}")));
    }
    token.parse::<u64>().map(Time).map_err(|_| tokens.error(column, format!("tick count out of range: {token}")))
}

pub fn parse_waveforms(text: &str) -> Result<WaveformDoc, ParseError> {
    let mut doc: Option<WaveformDoc> = None;
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let mut tokens = Tokens::new(line, raw);
        let (column, first) = tokens.next().expect("line is not blank");

        let Some(doc) = doc.as_mut() else {
            if first != "horizon" {
                return Err(tokens.error(column, "expected `horizon N` header"));
            }
            let (column, value) =
                tokens.next().ok_or_else(|| tokens.error(tokens.end_column(), "missing horizon value"))?;
            let horizon = parse_ticks(&tokens, column, value)?;
            if let Some((column, extra)) = tokens.next() {
                return Err(tokens.error(column, format!("unexpected token {extra:?}")));
            }
            doc = Some(WaveformDoc::new(horizon));
            continue;
        };

        let name = first;
        if !is_valid_name(name) {
            return Err(tokens.error(column, format!("invalid signal name {name:?}")));
        }
        if doc.get(name).is_some() {
            return Err(tokens.error(column, format!("duplicate signal name {name:?}")));
        }
        let (column, init) = tokens.next().ok_or_else(|| tokens.error(tokens.end_column(), "missing initial bit"))?;
        let initial = match init {
            "0" => false,
            "1" => true,
            _ => return Err(tokens.error(column, format!("initial bit must be 0 or 1, found {init:?}"))),
        };
        match tokens.next() {
            Some((_, ":")) => {}
            Some((column, other)) => return Err(tokens.error(column, format!("expected `:`, found {other:?}"))),
            None => return Err(tokens.error(tokens.end_column(), "expected `:`")),
        }
        let mut toggles = Vec::new();
        let mut columns = Vec::new();
        while let Some((column, token)) = tokens.next() {
            toggles.push(parse_ticks(&tokens, column, token)?);
            columns.push(column);
        }
        let signal = Signal::from_intervals(initial, toggles, doc.horizon).map_err(|e| match e {
            SignalError::NotIncreasing { index } => tokens.error(columns[index], "toggles not increasing"),
            SignalError::BeyondHorizon { index, .. } => tokens.error(columns[index], "toggle not below horizon"),
            other => tokens.error(1, other.to_string()),
        })?;
        doc.entries.push((name.to_owned(), signal));
    }
    doc.ok_or_else(|| ParseError { line: 1, column: 1, message: "expected `horizon N` header".into() })
}

pub fn format_waveforms(doc: &WaveformDoc) -> String {
    let mut out = format!("horizon {}\n", doc.horizon);
    for (name, signal) in &doc.entries {
        let _ = write!(out, "{name} {} :", u8::from(signal.initial()));
        for t in signal.toggles() {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for WaveformDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_waveforms(self))
    }
}

impl FromStr for WaveformDoc {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_waveforms(s)
    }
}

/// Minimal single-bit VCD: one wire per entry, identifiers from `!` upward,
/// values at `#0` in a `$dumpvars` block, then one `#t` section per instant
/// with at least one change.
pub fn emit_vcd(doc: &WaveformDoc) -> Result<String, VcdError> {
    if doc.entries.len() > MAX_VCD_SIGNALS {
        return Err(VcdError::TooManySignals(doc.entries.len()));
    }
    let ids: Vec<char> = (0..doc.entries.len()).map(|i| char::from(b'!' + i as u8)).collect();
    let mut out = String::from("$timescale 1ns $end\n");
    for ((name, _), id) in doc.entries.iter().zip(&ids) {
        let _ = writeln!(out, "$var wire 1 {id} {name} $end");
    }
    out.push_str("$enddefinitions $end\n#0\n$dumpvars\n");
    for ((_, signal), id) in doc.entries.iter().zip(&ids) {
        let _ = writeln!(out, "{}{id}", u8::from(signal.eval(Time::ZERO)));
    }
    out.push_str("$end\n");

    let mut changes: Vec<(Time, usize, bool)> = doc
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, (_, signal))| {
            signal.toggles().iter().filter(|&&t| t > Time::ZERO).map(move |&t| (t, i, signal.eval(t)))
        })
        .collect();
    changes.sort_by_key(|&(t, i, _)| (t, i));
    let mut current = None;
    for (t, i, value) in changes {
        if current != Some(t) {
            let _ = writeln!(out, "#{t}");
            current = Some(t);
        }
        let _ = writeln!(out, "{}{}", u8::from(value), ids[i]);
    }
    Ok(out)
}
