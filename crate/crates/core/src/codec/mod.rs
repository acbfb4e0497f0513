//! Encoder, two-phase decoder, and wire formats.
//!
//! Encoding XORs randomly chosen source symbols per output column
//! ([`encode`]). Decoding runs a peeling pass over a sparse incidence
//! matrix; when it stalls it either requests a repair symbol on the spot
//! (sequential doping) or marks the chosen symbol as a free variable and
//! keeps going (postponed, via dynamic inactivation), then finishes with a
//! small dense elimination over all inactive variables ([`decode`]).

mod decoder;
mod encoder;
pub mod wire;

pub use decoder::{
    decode, BlockDopingSource, Decoded, DecodeOutcome, Decoder, DopingSource, OpCounters,
    RankReport, TraceData,
};
pub use encoder::{column_rows, encode, encode_with_headers, ColumnHeader, EncodedSymbol, HeaderKind};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Whether the reserved dense rows take part in peeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeMode {
    /// Peel only the first `k − p` rows; reserved rows are handled entirely
    /// by the final dense elimination.
    Conditional,
    /// All `k` rows peel alike; reserving rows then only shapes the degree
    /// distribution.
    Unconditional,
}

impl DecodeMode {
    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            DecodeMode::Conditional => "cond",
            DecodeMode::Unconditional => "uncond",
        }
    }
}

/// What to do when the ripple empties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Request the chosen symbol immediately and keep peeling once it
    /// arrives. One repair round-trip per stall.
    Sequential,
    /// Mark the chosen symbol as a free variable (dynamic inactivation) and
    /// keep peeling; all repairs are requested in one batch at the end.
    Postponed,
}

impl Policy {
    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            Policy::Sequential => "seq",
            Policy::Postponed => "post",
        }
    }
}

/// How many of the inactive variables to repair versus solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DopingMode {
    /// Solve everything the final elimination can; repair only uncovered
    /// symbols and rank-deficiency leftovers.
    Minimal,
    /// Repair every dynamically inactivated symbol outright (d = u + i);
    /// the elimination then only covers the reserved rows.
    DopeAll,
}

impl DopingMode {
    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            DopingMode::Minimal => "min",
            DopingMode::DopeAll => "all",
        }
    }
}

/// Block-level code parameters.
///
/// The field size is fixed at 2: payloads are XOR combinations, symbol cost
/// arithmetic uses log2(q) = 1 bit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeParams {
    /// Source symbols per block.
    pub k: usize,
    /// Symbol size in bits.
    pub s_bits: usize,
    /// Upfront-collected symbol budget; may be below `k` (lossy channel) or
    /// above it (reception overhead `delta = k_s/k − 1`).
    pub k_s: usize,
    /// Reserved dense rows (permanent inactivations); on the order of √k
    /// when enabled.
    pub p: usize,
    pub mode: DecodeMode,
    /// Exponent for the dense-elimination cost term, in [2.5, 3].
    pub ge_exponent: f64,
}

/// Field size: payloads live over GF(2).
pub const FIELD_SIZE_Q: usize = 2;

/// Largest symbol size representable in a packet's u16 byte-length field.
pub const MAX_SYMBOL_BITS: usize = u16::MAX as usize * 8;

impl CodeParams {
    /// Defaults: `k_s = k`, no reserved rows, conditional mode, g = 2.5.
    #[must_use]
    pub fn new(k: usize, s_bits: usize) -> Self {
        CodeParams {
            k,
            s_bits,
            k_s: k,
            p: 0,
            mode: DecodeMode::Conditional,
            ge_exponent: 2.5,
        }
    }

    /// Reception overhead fraction: `k_s/k − 1` (negative when short).
    #[must_use]
    pub fn delta(&self) -> f64 {
        self.k_s as f64 / self.k as f64 - 1.0
    }

    /// Payload size in whole bytes.
    #[must_use]
    pub fn symbol_bytes(&self) -> usize {
        self.s_bits.div_ceil(8)
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        if self.k < 2 || self.k > u32::MAX as usize {
            return Err(CodecError::BadParams(format!("k = {} out of range", self.k)));
        }
        if self.p > u16::MAX as usize || self.p + 2 > self.k {
            return Err(CodecError::BadParams(format!(
                "p = {} must leave at least two peelable rows of k = {}",
                self.p, self.k
            )));
        }
        if self.s_bits == 0 || self.s_bits > MAX_SYMBOL_BITS {
            return Err(CodecError::BadParams(format!(
                "symbol size {} bits out of range",
                self.s_bits
            )));
        }
        if self.k_s == 0 {
            return Err(CodecError::BadParams("k_s must be positive".into()));
        }
        if !(2.5..=3.0).contains(&self.ge_exponent) {
            return Err(CodecError::BadParams(format!(
                "ge exponent {} outside [2.5, 3]",
                self.ge_exponent
            )));
        }
        Ok(())
    }
}

/// Cost split of one decode: linear peeling work, polynomial elimination
/// work, normalized per non-repaired symbol.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ComplexityReport {
    /// Peeling term: `k − p + d`.
    pub c_l: f64,
    /// Elimination term: `(p + i + u − d)^g`.
    pub c_g: f64,
    /// `(c_l + c_g) / (k − d)`.
    pub c: f64,
    pub g: f64,
}

/// Decoding cost `C = (k − p + d + (p + i + u − d)^g) / (k − d)`.
///
/// `d` is the number of repaired symbols; everything the repair did not
/// cover (`p + i + u − d` variables) goes through the dense elimination.
///
/// # Panics
/// If `d` is outside `[u, u + i + p]` or `d ≥ k`: requesting fewer symbols
/// than the uncovered set or more than the inactive set is a usage bug.
#[must_use]
pub fn complexity_report(k: usize, p: usize, i: usize, u: usize, d: usize, g: f64) -> ComplexityReport {
    assert!(
        d >= u && d <= u + i + p,
        "doping count {d} outside [{u}, {}]",
        u + i + p
    );
    assert!(d < k, "doping count {d} must stay below k = {k}");
    let c_l = (k - p + d) as f64;
    let c_g = ((p + i + u - d) as f64).powf(g);
    ComplexityReport {
        c_l,
        c_g,
        c: (c_l + c_g) / (k - d) as f64,
        g,
    }
}

/// Codec-level errors. Wire parsing has its own error type in [`wire`].
#[derive(Debug, Error)]
pub enum CodecError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("no encoded symbols supplied")]
    EmptySymbols,
    #[error("symbol {column_id}: {reason}")]
    BadSymbol { column_id: u32, reason: String },
    #[error("decoding needs repair data for {} symbol(s) and no source is available", .rows.len())]
    DopingNeeded { rows: Vec<u32> },
    #[error("repair source failed: {0}")]
    DopingSourceFailed(String),
    #[error("equations are mutually inconsistent (corrupted payloads?)")]
    Integrity,
}
