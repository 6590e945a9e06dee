use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CorpusError;

/// EUR-Lex document identifier such as `32019L0944`.
///
/// Layout: sector digit, 4-digit year, instrument letter, 4-digit serial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CelexId {
    raw: String,
}

/// Legal instrument named by the Celex type letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Instrument {
    Directive,
    Regulation,
    Decision,
}

impl Instrument {
    pub fn letter(self) -> char {
        match self {
            Instrument::Directive => 'L',
            Instrument::Regulation => 'R',
            Instrument::Decision => 'D',
        }
    }

    pub fn from_letter(letter: char) -> Option<Self> {
        match letter {
            'L' => Some(Instrument::Directive),
            'R' => Some(Instrument::Regulation),
            'D' => Some(Instrument::Decision),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Instrument::Directive => "Directive",
            Instrument::Regulation => "Regulation",
            Instrument::Decision => "Decision",
        }
    }
}

impl fmt::Display for Instrument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl CelexId {
    pub fn parse(raw: &str) -> Result<Self, CorpusError> {
        let invalid = |reason: &str| CorpusError::InvalidCelex {
            raw: raw.to_string(),
            reason: reason.to_string(),
        };
        let bytes = raw.as_bytes();
        if bytes.len() != 10 || !raw.is_ascii() {
            return Err(invalid("expected 10 ASCII characters"));
        }
        if !bytes[0].is_ascii_digit() {
            return Err(invalid("sector must be a digit"));
        }
        if !bytes[1..5].iter().all(u8::is_ascii_digit) {
            return Err(invalid("year must be 4 digits"));
        }
        let year: u16 = raw[1..5].parse().expect("digits");
        if !(1900..=2100).contains(&year) {
            return Err(invalid("year outside 1900..=2100"));
        }
        if !bytes[5].is_ascii_uppercase() {
            return Err(invalid("instrument letter must be uppercase"));
        }
        if !bytes[6..].iter().all(u8::is_ascii_digit) {
            return Err(invalid("serial must be 4 digits"));
        }
        Ok(CelexId {
            raw: raw.to_string(),
        })
    }

    /// Assembles an identifier from its parts; the serial is zero-padded.
    pub fn from_parts(
        sector: u8,
        year: u16,
        instrument_letter: char,
        serial: u32,
    ) -> Result<Self, CorpusError> {
        if sector > 9 || serial > 9999 {
            return Err(CorpusError::InvalidCelex {
                raw: format!("{sector}{year}{instrument_letter}{serial}"),
                reason: "sector or serial out of range".into(),
            });
        }
        CelexId::parse(&format!("{sector}{year:04}{instrument_letter}{serial:04}"))
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn sector(&self) -> u8 {
        self.raw.as_bytes()[0] - b'0'
    }

    pub fn year(&self) -> u16 {
        self.raw[1..5].parse().expect("validated")
    }

    pub fn instrument_letter(&self) -> char {
        self.raw.as_bytes()[5] as char
    }

    pub fn instrument(&self) -> Option<Instrument> {
        Instrument::from_letter(self.instrument_letter())
    }

    /// Zero-padded serial as it appears in the identifier.
    pub fn serial(&self) -> &str {
        &self.raw[6..]
    }

    pub fn serial_number(&self) -> u32 {
        self.serial().parse().expect("validated")
    }
}

impl fmt::Display for CelexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl FromStr for CelexId {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CelexId::parse(s)
    }
}

impl Serialize for CelexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for CelexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        CelexId::parse(&raw).map_err(serde::de::Error::custom)
    }
}
