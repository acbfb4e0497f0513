//! Byte-exact wire formats for encoded-symbol packets and repair traffic.
//!
//! All multi-byte integers are big-endian. Packet layout:
//!
//! ```text
//! magic 0xD0FE (u16) | version u8 = 1 | block_id u32 | k u32 | p u16 |
//! column_id u32 | header_kind u8 | header | payload_len u16 | payload
//! ```
//!
//! where `header` is a u64 column seed (kind 0) or a u16 degree followed by
//! that many u32 row indices (kind 1).
//!
//! Repair request: `magic 0xD0FD (u16) | block_id u32 | count u16 | count ×
//! u32 row indices`. The response echoes the request and appends `count`
//! fixed-size payloads; the payload size is session state, not wire state.

use thiserror::Error;

use super::encoder::{ColumnHeader, EncodedSymbol};
use crate::bitlinalg::BitVector;

pub const PACKET_MAGIC: u16 = 0xD0FE;
pub const DOPING_MAGIC: u16 = 0xD0FD;
pub const WIRE_VERSION: u8 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("truncated message: needed {needed} more byte(s) at offset {offset}")]
    Truncated { offset: usize, needed: usize },
    #[error("bad magic {found:#06x}, expected {expected:#06x}")]
    BadMagic { found: u16, expected: u16 },
    #[error("unsupported version {0}")]
    BadVersion(u8),
    #[error("unknown column header kind {0}")]
    BadHeaderKind(u8),
    #[error("field does not fit the wire format: {0}")]
    TooLarge(String),
}

/// One encoded symbol plus the block routing fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub block_id: u32,
    pub k: u32,
    pub p: u16,
    pub symbol: EncodedSymbol,
}

/// Rows a receiver asks to have repaired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DopingRequest {
    pub block_id: u32,
    pub rows: Vec<u32>,
}

/// Repaired row values, echoing the request they answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DopingResponse {
    pub block_id: u32,
    pub rows: Vec<u32>,
    pub values: Vec<BitVector>,
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.buf.len() - self.pos < n {
            return Err(WireError::Truncated {
                offset: self.pos,
                needed: n - (self.buf.len() - self.pos),
            });
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, WireError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn write_packet(buf: &mut Vec<u8>, packet: &Packet) -> Result<(), WireError> {
    buf.extend_from_slice(&PACKET_MAGIC.to_be_bytes());
    buf.push(WIRE_VERSION);
    buf.extend_from_slice(&packet.block_id.to_be_bytes());
    buf.extend_from_slice(&packet.k.to_be_bytes());
    buf.extend_from_slice(&packet.p.to_be_bytes());
    buf.extend_from_slice(&packet.symbol.column_id.to_be_bytes());
    match &packet.symbol.header {
        ColumnHeader::Seed(seed) => {
            buf.push(0);
            buf.extend_from_slice(&seed.to_be_bytes());
        }
        ColumnHeader::Explicit(rows) => {
            buf.push(1);
            let degree: u16 = rows
                .len()
                .try_into()
                .map_err(|_| WireError::TooLarge(format!("explicit degree {}", rows.len())))?;
            buf.extend_from_slice(&degree.to_be_bytes());
            for row in rows {
                buf.extend_from_slice(&row.to_be_bytes());
            }
        }
    }
    let payload = packet.symbol.payload.to_bytes();
    let payload_len: u16 = payload
        .len()
        .try_into()
        .map_err(|_| WireError::TooLarge(format!("payload of {} bytes", payload.len())))?;
    buf.extend_from_slice(&payload_len.to_be_bytes());
    buf.extend_from_slice(&payload);
    Ok(())
}

/// Parses one packet from the front of `buf`; returns it with the number of
/// bytes consumed so streams of packets can be walked.
///
/// `s_bits` is the session symbol size; the payload length field is in whole
/// bytes, so the bit width must come from context.
pub fn read_packet(buf: &[u8], s_bits: usize) -> Result<(Packet, usize), WireError> {
    let mut r = Reader::new(buf);
    let magic = r.u16()?;
    if magic != PACKET_MAGIC {
        return Err(WireError::BadMagic {
            found: magic,
            expected: PACKET_MAGIC,
        });
    }
    let version = r.u8()?;
    if version != WIRE_VERSION {
        return Err(WireError::BadVersion(version));
    }
    let block_id = r.u32()?;
    let k = r.u32()?;
    let p = r.u16()?;
    let column_id = r.u32()?;
    let header = match r.u8()? {
        0 => ColumnHeader::Seed(r.u64()?),
        1 => {
            let degree = r.u16()? as usize;
            let mut rows = Vec::with_capacity(degree);
            for _ in 0..degree {
                rows.push(r.u32()?);
            }
            ColumnHeader::Explicit(rows)
        }
        kind => return Err(WireError::BadHeaderKind(kind)),
    };
    let payload_len = r.u16()? as usize;
    let payload_bytes = r.take(payload_len)?;
    if payload_len != s_bits.div_ceil(8) {
        return Err(WireError::TooLarge(format!(
            "payload of {payload_len} bytes for {s_bits}-bit symbols"
        )));
    }
    let payload = BitVector::from_bytes(payload_bytes, s_bits);
    Ok((
        Packet {
            block_id,
            k,
            p,
            symbol: EncodedSymbol {
                column_id,
                header,
                payload,
            },
        },
        r.pos,
    ))
}

fn write_doping_header(buf: &mut Vec<u8>, block_id: u32, rows: &[u32]) -> Result<(), WireError> {
    buf.extend_from_slice(&DOPING_MAGIC.to_be_bytes());
    buf.extend_from_slice(&block_id.to_be_bytes());
    let count: u16 = rows
        .len()
        .try_into()
        .map_err(|_| WireError::TooLarge(format!("doping count {}", rows.len())))?;
    buf.extend_from_slice(&count.to_be_bytes());
    for row in rows {
        buf.extend_from_slice(&row.to_be_bytes());
    }
    Ok(())
}

fn read_doping_header(r: &mut Reader) -> Result<(u32, Vec<u32>), WireError> {
    let magic = r.u16()?;
    if magic != DOPING_MAGIC {
        return Err(WireError::BadMagic {
            found: magic,
            expected: DOPING_MAGIC,
        });
    }
    let block_id = r.u32()?;
    let count = r.u16()? as usize;
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        rows.push(r.u32()?);
    }
    Ok((block_id, rows))
}

pub fn write_doping_request(buf: &mut Vec<u8>, req: &DopingRequest) -> Result<(), WireError> {
    write_doping_header(buf, req.block_id, &req.rows)
}

pub fn read_doping_request(buf: &[u8]) -> Result<(DopingRequest, usize), WireError> {
    let mut r = Reader::new(buf);
    let (block_id, rows) = read_doping_header(&mut r)?;
    Ok((DopingRequest { block_id, rows }, r.pos))
}

pub fn write_doping_response(buf: &mut Vec<u8>, resp: &DopingResponse) -> Result<(), WireError> {
    assert_eq!(resp.rows.len(), resp.values.len(), "row/value count mismatch");
    write_doping_header(buf, resp.block_id, &resp.rows)?;
    for value in &resp.values {
        buf.extend_from_slice(&value.to_bytes());
    }
    Ok(())
}

pub fn read_doping_response(buf: &[u8], s_bits: usize) -> Result<(DopingResponse, usize), WireError> {
    let mut r = Reader::new(buf);
    let (block_id, rows) = read_doping_header(&mut r)?;
    let bytes = s_bits.div_ceil(8);
    let mut values = Vec::with_capacity(rows.len());
    for _ in 0..rows.len() {
        values.push(BitVector::from_bytes(r.take(bytes)?, s_bits));
    }
    Ok((
        DopingResponse {
            block_id,
            rows,
            values,
        },
        r.pos,
    ))
}
