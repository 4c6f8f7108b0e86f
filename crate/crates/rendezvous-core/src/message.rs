//! Bit-exact encoding for the single pre-departure message exchange.
//!
//! Messages are sequences of unsigned integer fields, each encoded either in
//! Elias gamma (self-delimiting, for values with no useful public bound) or
//! with a fixed width derived from a publicly known bound. Gamma operates on
//! `value + 1` so that zero is encodable; a value `v` costs
//! `2·⌊log₂(v+1)⌋ + 1` bits. There is no message header: field counts and
//! fixed widths are derivable by the receiver from public instance data, so
//! reported bit counts are exactly the sum of the field costs.

use thiserror::Error;

/// How one field is written on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldEncoding {
    /// Self-delimiting Elias gamma of `value + 1`.
    Gamma,
    /// Exactly this many bits, most significant first.
    Fixed(u32),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MessageError {
    #[error("bit stream ended inside a field")]
    Truncated,
    #[error("{0} unread bits after the last field")]
    TrailingBits(usize),
    #[error("gamma field exceeds 64 bits of payload")]
    GammaTooWide,
}

/// Number of bits needed to write any value in `0..=bound` at fixed width.
pub fn fixed_width(bound: u64) -> u32 {
    64 - bound.leading_zeros()
}

/// Bit cost of one value under gamma.
pub fn gamma_cost(value: u64) -> u64 {
    let x = value + 1;
    2 * u64::from(63 - x.leading_zeros()) + 1
}

/// An ordered sequence of encoded fields. The in-memory form keeps the
/// decoded values next to their encodings so protocol logic never re-parses
/// bits, while [`Message::to_bits`] / [`Message::from_bits`] define the exact
/// wire image that the bit accounting is measured on.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Message {
    fields: Vec<(u64, FieldEncoding)>,
}

impl Message {
    pub fn new() -> Self {
        Message::default()
    }

    pub fn push_gamma(&mut self, value: u64) {
        assert!(value < u64::MAX, "gamma operates on value + 1");
        self.fields.push((value, FieldEncoding::Gamma));
    }

    pub fn push_fixed(&mut self, value: u64, width: u32) {
        assert!(
            width >= fixed_width(value),
            "value {value} does not fit in {width} bits"
        );
        self.fields.push((value, FieldEncoding::Fixed(width)));
    }

    pub fn values(&self) -> Vec<u64> {
        self.fields.iter().map(|&(v, _)| v).collect()
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    /// Total wire length in bits.
    pub fn bit_count(&self) -> u64 {
        self.fields
            .iter()
            .map(|&(v, enc)| match enc {
                FieldEncoding::Gamma => gamma_cost(v),
                FieldEncoding::Fixed(w) => u64::from(w),
            })
            .sum()
    }

    /// Concatenate another message's fields after this one's (used to treat a
    /// two-round exchange as one received field sequence).
    pub fn extend(&mut self, tail: &Message) {
        self.fields.extend_from_slice(&tail.fields);
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let mut bits = Vec::new();
        for &(v, enc) in &self.fields {
            match enc {
                FieldEncoding::Gamma => {
                    let x = v + 1;
                    let top = 63 - x.leading_zeros();
                    for _ in 0..top {
                        bits.push(false);
                    }
                    for i in (0..=top).rev() {
                        bits.push(x >> i & 1 == 1);
                    }
                }
                FieldEncoding::Fixed(w) => {
                    for i in (0..w).rev() {
                        bits.push(v >> i & 1 == 1);
                    }
                }
            }
        }
        bits
    }

    /// Parse a wire image against the schema the receiver derives from public
    /// data. Consuming anything but exactly the whole stream is an error.
    pub fn from_bits(bits: &[bool], schema: &[FieldEncoding]) -> Result<Self, MessageError> {
        fn take(bits: &[bool], pos: &mut usize, count: u32) -> Result<u64, MessageError> {
            if count > 64 {
                return Err(MessageError::GammaTooWide);
            }
            let mut v = 0u64;
            for _ in 0..count {
                let b = *bits.get(*pos).ok_or(MessageError::Truncated)?;
                v = v << 1 | u64::from(b);
                *pos += 1;
            }
            Ok(v)
        }
        let mut pos = 0usize;
        let mut message = Message::new();
        for &enc in schema {
            match enc {
                FieldEncoding::Gamma => {
                    let mut zeros = 0u32;
                    loop {
                        let b = *bits.get(pos).ok_or(MessageError::Truncated)?;
                        pos += 1;
                        if b {
                            break;
                        }
                        zeros += 1;
                        if zeros > 63 {
                            return Err(MessageError::GammaTooWide);
                        }
                    }
                    let rest = take(bits, &mut pos, zeros)?;
                    let x = 1u64 << zeros | rest;
                    message.fields.push((x - 1, FieldEncoding::Gamma));
                }
                FieldEncoding::Fixed(w) => {
                    let v = take(bits, &mut pos, w)?;
                    message.fields.push((v, FieldEncoding::Fixed(w)));
                }
            }
        }
        if pos != bits.len() {
            return Err(MessageError::TrailingBits(bits.len() - pos));
        }
        Ok(message)
    }
}
