//! Input file formats: raw flat binary, or text with one `0x`-prefixed
//! 32-bit word per line, laid out little-endian at consecutive addresses.

use std::str::FromStr;

use super::HarnessError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InputFormat {
    /// Hex text if every non-blank line is a `0x` word, raw otherwise.
    #[default]
    Auto,
    Raw,
    Hex,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(InputFormat::Auto),
            "raw" => Ok(InputFormat::Raw),
            "hex" => Ok(InputFormat::Hex),
            other => Err(format!("unknown format {other:?} (expected auto, raw or hex)")),
        }
    }
}

fn parse_word(line: &str) -> Option<u32> {
    let digits = line.strip_prefix("0x").or_else(|| line.strip_prefix("0X"))?;
    if digits.is_empty() || digits.len() > 8 {
        return None;
    }
    u32::from_str_radix(digits, 16).ok()
}

/// Parses hex-word text into image bytes. Blank lines are skipped.
pub fn parse_hex_words(text: &str) -> Result<Vec<u8>, HarnessError> {
    let mut bytes = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let word =
            parse_word(line).ok_or_else(|| HarnessError::HexParse { line: k + 1, text: line.to_string() })?;
        bytes.extend_from_slice(&word.to_le_bytes());
    }
    Ok(bytes)
}

fn looks_like_hex(data: &[u8]) -> bool {
    match std::str::from_utf8(data) {
        Ok(text) => {
            let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
            lines.peek().is_some() && lines.all(|l| parse_word(l).is_some())
        }
        Err(_) => false,
    }
}

/// Turns file contents into image bytes according to `format`.
pub fn read_image_bytes(data: &[u8], format: InputFormat) -> Result<Vec<u8>, HarnessError> {
    let hex = match format {
        InputFormat::Raw => false,
        InputFormat::Hex => true,
        InputFormat::Auto => looks_like_hex(data),
    };
    if hex {
        let text = std::str::from_utf8(data)
            .map_err(|_| HarnessError::HexParse { line: 0, text: "<not utf-8>".into() })?;
        parse_hex_words(text)
    } else {
        Ok(data.to_vec())
    }
}
