//! Binary group files: `QMG1`, then little-endian `u32` order, `n^2` table
//! entries row-major, and `n` inverse entries.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::group::{GroupTable, DENSE_LIMIT};

pub const MAGIC: &[u8; 4] = b"QMG1";

pub fn write_group<W: Write>(group: &GroupTable, mut out: W) -> Result<()> {
    let mul = group.require_dense()?;
    let mut buf = Vec::with_capacity(8 + 4 * (mul.len() + group.order()));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(group.order() as u32).to_le_bytes());
    for &v in mul.iter().chain(group.inverses()) {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_group<R: Read>(mut input: R) -> Result<GroupTable> {
    let mut head = [0u8; 8];
    input
        .read_exact(&mut head)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if &head[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(head[4..8].try_into().unwrap()) as usize;
    if n > DENSE_LIMIT {
        return Err(Error::NotDense(n));
    }
    let mut words = |count: usize| -> Result<Vec<u32>> {
        let mut bytes = vec![0u8; count * 4];
        input
            .read_exact(&mut bytes)
            .map_err(|_| Error::Format("truncated body".into()))?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    let mul = words(n * n)?;
    let inv = words(n)?;
    GroupTable::from_tables(n, mul, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{construct_group, parse_spec};

    #[test]
    fn round_trip() {
        let g = construct_group(&parse_spec("sym:4").unwrap()).unwrap();
        let mut bytes = Vec::new();
        write_group(&g, &mut bytes).unwrap();
        assert_eq!(&bytes[..4], b"QMG1");
        assert_eq!(bytes.len(), 8 + 4 * (24 * 24 + 24));
        let back = read_group(&bytes[..]).unwrap();
        assert_eq!(back.table(), g.table());
        assert_eq!(back.inverses(), g.inverses());
        assert!(!back.is_abelian());
    }

    #[test]
    fn rejects_corrupt_files() {
        let g = construct_group(&parse_spec("cyclic:5").unwrap()).unwrap();
        let mut bytes = Vec::new();
        write_group(&g, &mut bytes).unwrap();
        assert!(read_group(&bytes[..10]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_group(&bad[..]).is_err());
        // Break the Latin square: row 1 entry 0 duplicated.
        let mut bad = bytes;
        bad[8 + 4 * 5..8 + 4 * 6].copy_from_slice(&2u32.to_le_bytes());
        assert!(read_group(&bad[..]).is_err());
    }
}
