//! 16-bit mono PCM RIFF/WAVE reading and writing.
//!
//! Integer samples map to reals by division by 32768, so decoding lands in
//! `[-1, 1)`; encoding rounds, saturates to the `i16` range and counts the
//! samples it had to clip.

const PCM: u16 = 1;
const EXTENSIBLE: u16 = 0xFFFE;
const SCALE: f64 = 32768.0;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WavError {
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed WAV file: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wav {
    pub sample_rate: u32,
    pub samples: Vec<i16>,
}

impl Wav {
    /// Samples as reals, `s / 32768`.
    pub fn to_real(&self) -> Vec<f64> {
        self.samples.iter().map(|&s| f64::from(s) / SCALE).collect()
    }

    /// Quantizes reals to 16 bits; returns the file and the number of clipped samples.
    pub fn from_real(sample_rate: u32, values: &[f64]) -> (Self, usize) {
        let mut clipped = 0;
        let samples = values
            .iter()
            .map(|&v| {
                let q = (v * SCALE).round();
                if q > f64::from(i16::MAX) {
                    clipped += 1;
                    i16::MAX
                } else if q < f64::from(i16::MIN) {
                    clipped += 1;
                    i16::MIN
                } else if q.is_nan() {
                    clipped += 1;
                    0
                } else {
                    q as i16
                }
            })
            .collect();
        (
            Self {
                sample_rate,
                samples,
            },
            clipped,
        )
    }

    pub fn encode(&self) -> Vec<u8> {
        let data_len = self.samples.len() * 2;
        let mut out = Vec::with_capacity(44 + data_len);
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&PCM.to_le_bytes());
        out.extend_from_slice(&1u16.to_le_bytes());
        out.extend_from_slice(&self.sample_rate.to_le_bytes());
        out.extend_from_slice(&self.sample_rate.wrapping_mul(2).to_le_bytes());
        out.extend_from_slice(&2u16.to_le_bytes());
        out.extend_from_slice(&16u16.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data_len as u32).to_le_bytes());
        for s in &self.samples {
            out.extend_from_slice(&s.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, WavError> {
        let malformed = |m: &str| WavError::Malformed(m.to_string());
        if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
            return Err(malformed("missing RIFF/WAVE header"));
        }
        let mut pos = 12;
        let mut format = None;
        while pos + 8 <= bytes.len() {
            let id = &bytes[pos..pos + 4];
            let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
            let body_start = pos + 8;
            let body = bytes
                .get(body_start..body_start.saturating_add(size))
                .ok_or_else(|| malformed("chunk runs past end of file"))?;
            match id {
                b"fmt " => format = Some(parse_format(body)?),
                b"data" => {
                    let sample_rate =
                        format.ok_or_else(|| malformed("data chunk before fmt chunk"))?;
                    if !size.is_multiple_of(2) {
                        return Err(malformed("data chunk holds a partial sample"));
                    }
                    let samples = body
                        .chunks_exact(2)
                        .map(|b| i16::from_le_bytes([b[0], b[1]]))
                        .collect();
                    return Ok(Self {
                        sample_rate,
                        samples,
                    });
                }
                _ => {}
            }
            // Chunks are word aligned.
            pos = body_start + size + (size & 1);
        }
        Err(malformed(if format.is_some() {
            "no data chunk"
        } else {
            "no fmt chunk"
        }))
    }
}

/// Validates the `fmt ` chunk and returns the sample rate.
fn parse_format(body: &[u8]) -> Result<u32, WavError> {
    if body.len() < 16 {
        return Err(WavError::Malformed(
            "fmt chunk shorter than 16 bytes".into(),
        ));
    }
    let u16_at = |i: usize| u16::from_le_bytes([body[i], body[i + 1]]);
    let tag = u16_at(0);
    let channels = u16_at(2);
    let sample_rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
    let bits = u16_at(14);
    match tag {
        PCM => {}
        3 => {
            return Err(WavError::UnsupportedFormat(
                "IEEE float samples; need 16-bit integer PCM".into(),
            ))
        }
        EXTENSIBLE => {
            return Err(WavError::UnsupportedFormat(
                "WAVE_FORMAT_EXTENSIBLE header; need plain 16-bit integer PCM".into(),
            ))
        }
        other => {
            return Err(WavError::UnsupportedFormat(format!(
                "compressed or unknown encoding (format tag {other:#06x}); need 16-bit integer PCM"
            )))
        }
    }
    if channels != 1 {
        return Err(WavError::UnsupportedFormat(format!(
            "{channels} channels; need mono"
        )));
    }
    if bits != 16 {
        return Err(WavError::UnsupportedFormat(format!(
            "{bits}-bit samples; need 16-bit"
        )));
    }
    if sample_rate == 0 {
        return Err(WavError::Malformed("sample rate of zero".into()));
    }
    Ok(sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(tag: u16, channels: u16, bits: u16) -> Vec<u8> {
        let mut w = Wav {
            sample_rate: 8000,
            samples: vec![1, -2],
        }
        .encode();
        w[20..22].copy_from_slice(&tag.to_le_bytes());
        w[22..24].copy_from_slice(&channels.to_le_bytes());
        w[34..36].copy_from_slice(&bits.to_le_bytes());
        w
    }

    #[test]
    fn half_scale_maps_to_one_half() {
        let w = Wav {
            sample_rate: 8000,
            samples: vec![16384, -32768, 0],
        };
        assert_eq!(w.to_real(), vec![0.5, -1.0, 0.0]);
    }

    #[test]
    fn saturates_and_counts() {
        let (w, clipped) = Wav::from_real(8000, &[1.5, -2.0, 0.25, 32767.0 / 32768.0]);
        assert_eq!(w.samples, vec![32767, -32768, 8192, 32767]);
        assert_eq!(clipped, 2);
    }

    #[test]
    fn canonical_header_layout() {
        let bytes = Wav {
            sample_rate: 16000,
            samples: vec![0; 3],
        }
        .encode();
        assert_eq!(bytes.len(), 50);
        assert_eq!(&bytes[0..4], b"RIFF");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 42);
        assert_eq!(u32::from_le_bytes(bytes[28..32].try_into().unwrap()), 32000);
        assert_eq!(&bytes[36..40], b"data");
    }

    #[test]
    fn rejects_other_formats() {
        assert!(
            matches!(Wav::decode(&header(3, 1, 32)), Err(WavError::UnsupportedFormat(m)) if m.contains("float"))
        );
        assert!(
            matches!(Wav::decode(&header(1, 2, 16)), Err(WavError::UnsupportedFormat(m)) if m.contains("mono"))
        );
        assert!(matches!(
            Wav::decode(&header(1, 1, 8)),
            Err(WavError::UnsupportedFormat(_))
        ));
        assert!(matches!(
            Wav::decode(&header(2, 1, 16)),
            Err(WavError::UnsupportedFormat(_))
        ));
        assert!(matches!(Wav::decode(b"RIFX"), Err(WavError::Malformed(_))));
    }

    #[test]
    fn skips_unknown_and_odd_chunks() {
        let plain = Wav {
            sample_rate: 22050,
            samples: vec![7, -7, 300],
        };
        let bytes = plain.encode();
        let mut with_list = bytes[..36].to_vec();
        with_list.extend_from_slice(b"LIST");
        with_list.extend_from_slice(&3u32.to_le_bytes());
        with_list.extend_from_slice(&[1, 2, 3, 0]);
        with_list.extend_from_slice(&bytes[36..]);
        assert_eq!(Wav::decode(&with_list).unwrap(), plain);
    }

    #[test]
    fn truncated_data_is_malformed() {
        let bytes = Wav {
            sample_rate: 8000,
            samples: vec![1, 2, 3],
        }
        .encode();
        assert!(matches!(
            Wav::decode(&bytes[..bytes.len() - 1]),
            Err(WavError::Malformed(_))
        ));
    }
}
