//! Splitting a file into fixed-size source blocks and putting it back
//! together. The packet format caps payloads at `u16::MAX` bytes, so
//! large files become several blocks of `k` symbols each; the final
//! symbol of the final block is zero-padded.

use fountain_core::bitlinalg::BitVector;

/// Largest symbol the packet payload length field can carry.
pub const MAX_SYMBOL_BYTES: u64 = u16::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockPlan {
    pub s_bytes: usize,
    pub s_bits: usize,
    pub blocks: usize,
}

/// Picks the smallest symbol size that covers `len` bytes with whole
/// blocks of `k` symbols, growing the block count only when a single
/// block would overflow the payload field.
pub fn plan(len: u64, k: usize) -> Result<BlockPlan, String> {
    if len == 0 {
        return Err("input file is empty".to_string());
    }
    if k < 2 {
        return Err(format!("k must be at least 2, got {k}"));
    }
    let per_block_cap = k as u64 * MAX_SYMBOL_BYTES;
    let blocks = len.div_ceil(per_block_cap);
    let s_bytes = len.div_ceil(blocks * k as u64);
    debug_assert!(s_bytes <= MAX_SYMBOL_BYTES);
    Ok(BlockPlan {
        s_bytes: s_bytes as usize,
        s_bits: s_bytes as usize * 8,
        blocks: blocks as usize,
    })
}

/// Cuts `data` into `plan.blocks` blocks of `k` symbols, zero-padding
/// the tail.
#[must_use]
pub fn split(data: &[u8], k: usize, plan: &BlockPlan) -> Vec<Vec<BitVector>> {
    let mut blocks = Vec::with_capacity(plan.blocks);
    let mut chunk = vec![0u8; plan.s_bytes];
    for b in 0..plan.blocks {
        let mut block = Vec::with_capacity(k);
        for r in 0..k {
            let start = (b * k + r) * plan.s_bytes;
            let end = (start + plan.s_bytes).min(data.len());
            chunk.fill(0);
            if start < data.len() {
                chunk[..end - start].copy_from_slice(&data[start..end]);
            }
            block.push(BitVector::from_bytes(&chunk, plan.s_bits));
        }
        blocks.push(block);
    }
    blocks
}

/// Concatenates decoded blocks and strips the padding.
#[must_use]
pub fn reassemble(blocks: &[Vec<BitVector>], original_len: u64) -> Vec<u8> {
    let mut out = Vec::with_capacity(original_len as usize);
    for block in blocks {
        for row in block {
            out.extend_from_slice(&row.to_bytes());
        }
    }
    out.truncate(original_len as usize);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_files_use_one_block() {
        let p = plan(1000, 16).unwrap();
        assert_eq!(p.blocks, 1);
        assert_eq!(p.s_bytes, 63); // ceil(1000 / 16)
        assert_eq!(p.s_bits, 504);
    }

    #[test]
    fn oversized_files_grow_the_block_count() {
        // 2 symbols of u16::MAX bytes hold exactly 131070 bytes
        let p = plan(2 * MAX_SYMBOL_BYTES, 2).unwrap();
        assert_eq!(p.blocks, 1);
        assert_eq!(p.s_bytes, MAX_SYMBOL_BYTES as usize);
        let p = plan(2 * MAX_SYMBOL_BYTES + 1, 2).unwrap();
        assert_eq!(p.blocks, 2);
        assert_eq!(p.s_bytes, 32768); // ceil(131071 / 4)
    }

    #[test]
    fn empty_and_degenerate_inputs_fail() {
        assert!(plan(0, 16).is_err());
        assert!(plan(100, 1).is_err());
    }

    #[test]
    fn split_and_reassemble_round_trip() {
        let data: Vec<u8> = (0..5000u32).map(|i| (i * 7 + 3) as u8).collect();
        for k in [4usize, 16, 100] {
            let p = plan(data.len() as u64, k).unwrap();
            let blocks = split(&data, k, &p);
            assert_eq!(blocks.len(), p.blocks);
            assert!(blocks.iter().all(|b| b.len() == k));
            assert_eq!(reassemble(&blocks, data.len() as u64), data);
        }
    }

    #[test]
    fn multi_block_round_trip() {
        let len = 2 * MAX_SYMBOL_BYTES + 5;
        let data: Vec<u8> = (0..len).map(|i| (i % 251) as u8).collect();
        let p = plan(len, 2).unwrap();
        assert!(p.blocks > 1);
        let blocks = split(&data, 2, &p);
        assert_eq!(reassemble(&blocks, len), data);
    }
}
