//! Canonical 16-bit mono PCM WAV encoding.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::AudioBuffer;

pub const HEADER_LEN: usize = 44;

/// Float sample to 16-bit PCM: `round(x * 32767)` clamped to the i16 range.
pub fn quantize(x: f64) -> i16 {
    (x * 32767.0).round().clamp(-32768.0, 32767.0) as i16
}

/// Encodes a buffer as RIFF/WAVE with a 16-byte PCM fmt chunk followed by the
/// data chunk. No other chunks are emitted.
pub fn encode_wav(buffer: &AudioBuffer) -> Result<Vec<u8>> {
    let data_len = buffer
        .samples()
        .len()
        .checked_mul(2)
        .and_then(|n| u32::try_from(n).ok())
        .filter(|n| n.checked_add(36).is_some())
        .ok_or_else(|| Error::Format("buffer too long for a WAV file".into()))?;
    let rate = buffer.sample_rate();

    let mut out = Vec::with_capacity(HEADER_LEN + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in buffer.samples() {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    Ok(out)
}

/// Writes the buffer to `destination` and returns the number of bytes written.
pub fn write_wav(buffer: &AudioBuffer, destination: impl AsRef<Path>) -> Result<u64> {
    let path = destination.as_ref();
    let bytes = encode_wav(buffer)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(bytes.len() as u64)
}

/// Decoded contents of a file produced by [`encode_wav`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmWav {
    pub sample_rate: u32,
    pub samples: Vec<i16>,
}

/// Parses the exact layout [`encode_wav`] produces.
pub fn decode_wav(bytes: &[u8]) -> Result<PcmWav> {
    let bad = |m: &str| Error::Format(format!("not a canonical PCM WAV: {m}"));
    if bytes.len() < HEADER_LEN {
        return Err(bad("shorter than header"));
    }
    let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
    let u32_at =
        |i: usize| u32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(bad("missing RIFF/WAVE tags"));
    }
    if &bytes[12..16] != b"fmt " || u32_at(16) != 16 {
        return Err(bad("unexpected fmt chunk"));
    }
    if u16_at(20) != 1 || u16_at(22) != 1 || u16_at(34) != 16 {
        return Err(bad("expected PCM, mono, 16-bit"));
    }
    if &bytes[36..40] != b"data" {
        return Err(bad("missing data chunk"));
    }
    let data_len = u32_at(40) as usize;
    if bytes.len() != HEADER_LEN + data_len
        || !data_len.is_multiple_of(2)
        || u32_at(4) as usize != bytes.len() - 8
    {
        return Err(bad("chunk sizes disagree with file length"));
    }
    let samples = bytes[HEADER_LEN..]
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]))
        .collect();
    Ok(PcmWav {
        sample_rate: u32_at(24),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_buffer_is_header_only() {
        let buf = AudioBuffer::new(44100, vec![]).unwrap();
        let bytes = encode_wav(&buf).unwrap();
        assert_eq!(bytes.len(), 44);
        assert_eq!(&bytes[40..44], &[0, 0, 0, 0]);
        assert_eq!(&bytes[4..8], &36u32.to_le_bytes());
    }

    #[test]
    fn single_sample_encoding() {
        let one = encode_wav(&AudioBuffer::new(8000, vec![1.0]).unwrap()).unwrap();
        assert_eq!(&one[44..], &[0xFF, 0x7F]);
        let zero = encode_wav(&AudioBuffer::new(8000, vec![0.0]).unwrap()).unwrap();
        assert_eq!(&zero[44..], &[0x00, 0x00]);
        let neg = encode_wav(&AudioBuffer::new(8000, vec![-1.0]).unwrap()).unwrap();
        assert_eq!(&neg[44..], &(-32767i16).to_le_bytes());
    }

    #[test]
    fn header_fields() {
        let bytes = encode_wav(&AudioBuffer::new(44100, vec![0.25; 10]).unwrap()).unwrap();
        assert_eq!(&bytes[..4], b"RIFF");
        assert_eq!(&bytes[8..16], b"WAVEfmt ");
        assert_eq!(u32::from_le_bytes(bytes[24..28].try_into().unwrap()), 44100);
        assert_eq!(u32::from_le_bytes(bytes[28..32].try_into().unwrap()), 88200);
        assert_eq!(u16::from_le_bytes(bytes[32..34].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[40..44].try_into().unwrap()), 20);
    }

    #[test]
    fn quantize_rounds_and_clamps() {
        assert_eq!(quantize(0.5), 16384); // 16383.5 rounds away from zero
        assert_eq!(quantize(-0.5), -16384);
        assert_eq!(quantize(2.0), 32767);
        assert_eq!(quantize(-2.0), -32768);
    }

    #[test]
    fn decode_rejects_garbage() {
        assert!(decode_wav(b"RIFF").is_err());
        let mut bytes = encode_wav(&AudioBuffer::new(100, vec![0.1, 0.2]).unwrap()).unwrap();
        bytes.push(0);
        assert!(decode_wav(&bytes).is_err());
    }

    #[test]
    fn write_reports_destination_on_failure() {
        let buf = AudioBuffer::new(100, vec![0.0]).unwrap();
        let err = write_wav(&buf, "/nonexistent-dir/x.wav").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.wav"));
    }
}
