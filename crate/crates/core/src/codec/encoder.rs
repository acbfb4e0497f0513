//! Column sampling and payload construction.

#[cfg(test)]
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CodecError, CodeParams};
use crate::bitlinalg::BitVector;
use crate::degree::{sample_column, DegreeDistribution, Family};
use crate::seeding;

/// How a packet tells the receiver which rows a column covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeaderKind {
    /// Ship the 8-byte column seed; the receiver replays the sampler.
    Seed,
    /// Ship the row list itself. Larger, but the receiver needs no sampler
    /// state; only valid while row indices fit the u16 degree field.
    Explicit,
}

/// Column membership as carried on the wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnHeader {
    Seed(u64),
    /// Strictly increasing row indices, each below `k`.
    Explicit(Vec<u32>),
}

/// One encoded symbol: an XOR of the source rows the header names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedSymbol {
    pub column_id: u32,
    pub header: ColumnHeader,
    pub payload: BitVector,
}

/// Expands a header to the sorted row list it denotes. `dist` must be the
/// same distribution the encoder used, or seed headers will disagree.
pub(crate) fn expand_rows(
    dist: &DegreeDistribution,
    k: usize,
    p: usize,
    header: &ColumnHeader,
) -> Result<Vec<u32>, String> {
    match header {
        ColumnHeader::Seed(seed) => {
            let mut rng = seeding::stream_from(*seed);
            Ok(sample_column(dist, k, p, &mut rng).all_rows())
        }
        ColumnHeader::Explicit(rows) => {
            if rows.is_empty() {
                return Err("explicit header names no rows".into());
            }
            let mut prev: Option<u32> = None;
            for &row in rows {
                if row as usize >= k {
                    return Err(format!("row {row} out of range for k = {k}"));
                }
                if prev.is_some_and(|q| q >= row) {
                    return Err("explicit rows must be strictly increasing".into());
                }
                prev = Some(row);
            }
            Ok(rows.clone())
        }
    }
}

/// The rows one header covers, for header inspection and tests.
pub fn column_rows(
    header: &ColumnHeader,
    params: &CodeParams,
    family: Family,
) -> Result<Vec<u32>, CodecError> {
    params.validate()?;
    let dist = family.distribution(params.k, params.p);
    expand_rows(&dist, params.k, params.p, header).map_err(|reason| CodecError::BadSymbol {
        column_id: u32::MAX,
        reason,
    })
}

/// Encodes `count` columns with seed headers. Column ids start at
/// `first_column`, and each column's sampler seed is derived from
/// `(session_seed, column_id)`, so any subrange can be regenerated
/// independently.
pub fn encode(
    block: &[BitVector],
    params: &CodeParams,
    family: Family,
    first_column: u32,
    count: usize,
    session_seed: u64,
) -> Result<Vec<EncodedSymbol>, CodecError> {
    encode_with_headers(
        block,
        params,
        family,
        first_column,
        count,
        session_seed,
        HeaderKind::Seed,
    )
}

pub fn encode_with_headers(
    block: &[BitVector],
    params: &CodeParams,
    family: Family,
    first_column: u32,
    count: usize,
    session_seed: u64,
    kind: HeaderKind,
) -> Result<Vec<EncodedSymbol>, CodecError> {
    params.validate()?;
    if block.len() != params.k {
        return Err(CodecError::BadParams(format!(
            "block has {} symbols, params say k = {}",
            block.len(),
            params.k
        )));
    }
    for (row, sym) in block.iter().enumerate() {
        if sym.len() != params.s_bits {
            return Err(CodecError::BadParams(format!(
                "source symbol {row} is {} bits, params say {}",
                sym.len(),
                params.s_bits
            )));
        }
    }
    if count > u32::MAX as usize || first_column.checked_add(count as u32).is_none() {
        return Err(CodecError::BadParams(format!(
            "column ids {first_column}..+{count} overflow u32"
        )));
    }
    let dist = family.distribution(params.k, params.p);
    let mut out = Vec::with_capacity(count);
    for c in 0..count as u32 {
        let column_id = first_column + c;
        let seed = seeding::derive(session_seed, u64::from(column_id));
        let rows = expand_rows(&dist, params.k, params.p, &ColumnHeader::Seed(seed))
            .expect("seed expansion cannot fail");
        let mut payload = BitVector::zeros(params.s_bits);
        for &row in &rows {
            payload.xor_assign(&block[row as usize]);
        }
        let header = match kind {
            HeaderKind::Seed => ColumnHeader::Seed(seed),
            HeaderKind::Explicit => ColumnHeader::Explicit(rows),
        };
        out.push(EncodedSymbol {
            column_id,
            header,
            payload,
        });
    }
    Ok(out)
}

/// Random source block for tests.
#[cfg(test)]
pub(crate) fn random_block<R: Rng + ?Sized>(k: usize, s_bits: usize, rng: &mut R) -> Vec<BitVector> {
    (0..k).map(|_| BitVector::random(rng, s_bits)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding;

    fn setup(k: usize, p: usize) -> (CodeParams, Vec<BitVector>) {
        let mut params = CodeParams::new(k, 24);
        params.p = p;
        let mut rng = seeding::stream(9, 1);
        let block = random_block(k, 24, &mut rng);
        (params, block)
    }

    #[test]
    fn encoding_is_deterministic_in_the_session_seed() {
        let (params, block) = setup(60, 0);
        let a = encode(&block, &params, Family::IdealSoliton, 0, 80, 42).unwrap();
        let b = encode(&block, &params, Family::IdealSoliton, 0, 80, 42).unwrap();
        assert_eq!(a, b);
        let c = encode(&block, &params, Family::IdealSoliton, 0, 80, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn column_ranges_can_be_regenerated_independently() {
        let (params, block) = setup(60, 0);
        let all = encode(&block, &params, Family::IdealSoliton, 0, 80, 42).unwrap();
        let tail = encode(&block, &params, Family::IdealSoliton, 50, 30, 42).unwrap();
        assert_eq!(&all[50..], &tail[..]);
    }

    #[test]
    fn seed_and_explicit_headers_name_the_same_rows() {
        let (params, block) = setup(80, 8);
        let seeded = encode(&block, &params, Family::RaptorLt, 0, 40, 7).unwrap();
        let explicit =
            encode_with_headers(&block, &params, Family::RaptorLt, 0, 40, 7, HeaderKind::Explicit)
                .unwrap();
        for (a, b) in seeded.iter().zip(&explicit) {
            assert_eq!(a.payload, b.payload);
            let rows_a = column_rows(&a.header, &params, Family::RaptorLt).unwrap();
            let ColumnHeader::Explicit(rows_b) = &b.header else {
                panic!("expected explicit header")
            };
            assert_eq!(&rows_a, rows_b);
        }
    }

    #[test]
    fn payload_is_the_xor_of_named_rows() {
        let (params, block) = setup(60, 8);
        let symbols = encode(&block, &params, Family::IdealSoliton, 0, 100, 3).unwrap();
        for sym in &symbols {
            let rows = column_rows(&sym.header, &params, Family::IdealSoliton).unwrap();
            assert!(!rows.is_empty());
            // every column touches the peelable range and, with p > 0, the
            // reserved range as well
            assert!(rows.iter().any(|&r| (r as usize) < params.k - params.p));
            assert!(rows.iter().any(|&r| (r as usize) >= params.k - params.p));
            let mut acc = sym.payload.clone();
            for &row in &rows {
                acc.xor_assign(&block[row as usize]);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn rejects_mismatched_block() {
        let (params, block) = setup(60, 0);
        assert!(matches!(
            encode(&block[..59], &params, Family::IdealSoliton, 0, 10, 1),
            Err(CodecError::BadParams(_))
        ));
    }

    #[test]
    fn explicit_header_validation() {
        let (params, _) = setup(60, 0);
        let bad = [
            ColumnHeader::Explicit(vec![]),
            ColumnHeader::Explicit(vec![3, 3]),
            ColumnHeader::Explicit(vec![5, 2]),
            ColumnHeader::Explicit(vec![60]),
        ];
        for header in &bad {
            assert!(column_rows(header, &params, Family::IdealSoliton).is_err());
        }
        let good = ColumnHeader::Explicit(vec![0, 2, 59]);
        assert_eq!(
            column_rows(&good, &params, Family::IdealSoliton).unwrap(),
            vec![0, 2, 59]
        );
    }
}
