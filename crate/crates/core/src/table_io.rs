//! Binary codec for cached partition tables.
//!
//! Layout, all integers little-endian:
//!   magic  "KIDV" (4 bytes)
//!   version u32 (currently 1)
//!   k       u32
//!   n_max   u64
//!   entries (n_max + 1) of: byte_len u32, then byte_len magnitude bytes
//!           (little-endian), one per count.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::{BigNat, PartitionTable};

const MAGIC: &[u8; 4] = b"KIDV";
const VERSION: u32 = 1;

pub fn encode(table: &PartitionTable) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.k().to_le_bytes());
    out.extend_from_slice(&(table.n_max() as u64).to_le_bytes());
    for count in table.counts() {
        let bytes = count.to_bytes_le();
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&bytes);
    }
    out
}

pub fn decode(data: &[u8]) -> Result<PartitionTable> {
    let mut pos = 0usize;
    let take = |pos: &mut usize, len: usize| -> Result<&[u8]> {
        let end = pos
            .checked_add(len)
            .filter(|e| *e <= data.len())
            .ok_or_else(|| Error::Codec("truncated input".into()))?;
        let slice = &data[*pos..end];
        *pos = end;
        Ok(slice)
    };
    if take(&mut pos, 4)? != MAGIC {
        return Err(Error::Codec("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
    if version != VERSION {
        return Err(Error::Codec(format!("unsupported version {version}")));
    }
    let k = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
    let n_max = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap());
    let n_max = usize::try_from(n_max).map_err(|_| Error::Codec("n_max too large".into()))?;
    let mut counts: Vec<BigNat> = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        let len = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
        counts.push(BigUint::from_bytes_le(take(&mut pos, len)?));
    }
    if pos != data.len() {
        return Err(Error::Codec("trailing bytes".into()));
    }
    PartitionTable::from_raw(k, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::build_pkx_table;
    use proptest::prelude::*;

    #[test]
    fn roundtrip_small() {
        let table = build_pkx_table(3, 50).unwrap();
        let bytes = encode(&table);
        assert_eq!(&bytes[0..4], MAGIC);
        let back = decode(&bytes).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn rejects_corruption() {
        let table = build_pkx_table(2, 5).unwrap();
        let mut bytes = encode(&table);
        bytes[0] = b'X';
        assert!(decode(&bytes).is_err());
        let bytes = encode(&table);
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        let mut longer = encode(&table);
        longer.push(0);
        assert!(decode(&longer).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_any_small_table(k in 2u32..7, n_max in 0usize..60) {
            let table = build_pkx_table(k, n_max).unwrap();
            prop_assert_eq!(decode(&encode(&table)).unwrap(), table);
        }
    }
}
