//! File-level framing: a fixed header in front of the packet stream that
//! records everything a decoder needs to rebuild the original file.
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! magic        u16   0xD0FC
//! version      u8    1
//! original_len u64   payload bytes before zero padding
//! k            u32   source symbols per block
//! s_bits       u32   symbol size in bits
//! family       u8    0 = ideal soliton, 1 = raptor table
//! p            u16   reserved dense rows per block
//! ```
//!
//! The number of source blocks is not stored: it is a function of
//! `original_len`, `k`, and `s_bits`, and every packet carries its own
//! block id.

use fountain_core::degree::Family;

pub const CONTAINER_MAGIC: u16 = 0xD0FC;
pub const CONTAINER_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerHeader {
    pub original_len: u64,
    pub k: u32,
    pub s_bits: u32,
    pub family: Family,
    pub p: u16,
}

pub fn write_header(buf: &mut Vec<u8>, h: &ContainerHeader) {
    buf.extend_from_slice(&CONTAINER_MAGIC.to_be_bytes());
    buf.push(CONTAINER_VERSION);
    buf.extend_from_slice(&h.original_len.to_be_bytes());
    buf.extend_from_slice(&h.k.to_be_bytes());
    buf.extend_from_slice(&h.s_bits.to_be_bytes());
    buf.push(match h.family {
        Family::IdealSoliton => 0,
        Family::RaptorLt => 1,
    });
    buf.extend_from_slice(&h.p.to_be_bytes());
}

/// Parses the header, returning it and the number of bytes consumed.
pub fn read_header(buf: &[u8]) -> Result<(ContainerHeader, usize), String> {
    if buf.len() < HEADER_LEN {
        return Err(format!(
            "file too short for a container header: {} bytes",
            buf.len()
        ));
    }
    let magic = u16::from_be_bytes([buf[0], buf[1]]);
    if magic != CONTAINER_MAGIC {
        return Err(format!(
            "bad container magic {magic:#06x}, expected {CONTAINER_MAGIC:#06x}"
        ));
    }
    if buf[2] != CONTAINER_VERSION {
        return Err(format!("unsupported container version {}", buf[2]));
    }
    let original_len = u64::from_be_bytes(buf[3..11].try_into().expect("length checked"));
    let k = u32::from_be_bytes(buf[11..15].try_into().expect("length checked"));
    let s_bits = u32::from_be_bytes(buf[15..19].try_into().expect("length checked"));
    let family = match buf[19] {
        0 => Family::IdealSoliton,
        1 => Family::RaptorLt,
        other => return Err(format!("unknown distribution tag {other}")),
    };
    let p = u16::from_be_bytes([buf[20], buf[21]]);
    Ok((
        ContainerHeader {
            original_len,
            k,
            s_bits,
            family,
            p,
        },
        HEADER_LEN,
    ))
}
