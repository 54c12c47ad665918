//! Per-level checkpoint files.
//!
//! Layout, version 1, all integers little-endian:
//!
//! ```text
//! magic        8 bytes   "LXCKPT\0\0"
//! version      u32       1
//! tag          u32 length + UTF-8 bytes (algebra name and parameters)
//! fingerprint  32 bytes  SHA-256 of the poset's cover-list text
//! n            u32       poset size
//! level        u32       cardinality k of the stored ideals
//! count        u64       number of entries
//! entries      count x { key: ceil(n/64) u64 words, payload }
//! ```
//!
//! Key words hold element 0 in the most significant bit of word 0. Payloads
//! use the [`Codec`] encoding of the pass algebra. Files live in
//! `<dir>/<tag>-<fingerprint prefix>/level-<kkkk>.ckpt`; only the newest
//! level is kept.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::poset::Poset;

const MAGIC: &[u8; 8] = b"LXCKPT\0\0";
const VERSION: u32 = 1;

/// Compact binary encoding of payloads.
pub trait Codec: Sized {
    fn encode(&self, out: &mut Vec<u8>);
    fn decode(input: &mut &[u8]) -> Result<Self>;
}

fn truncated() -> Error {
    Error::Checkpoint("truncated file".into())
}

fn take<'a>(input: &mut &'a [u8], len: usize) -> Result<&'a [u8]> {
    if input.len() < len {
        return Err(truncated());
    }
    let (head, tail) = input.split_at(len);
    *input = tail;
    Ok(head)
}

fn read_u32(input: &mut &[u8]) -> Result<u32> {
    Ok(u32::from_le_bytes(take(input, 4)?.try_into().unwrap()))
}

fn read_u64(input: &mut &[u8]) -> Result<u64> {
    Ok(u64::from_le_bytes(take(input, 8)?.try_into().unwrap()))
}

impl Codec for u64 {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        read_u64(input)
    }
}

impl Codec for usize {
    fn encode(&self, out: &mut Vec<u8>) {
        (*self as u64).encode(out)
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(read_u64(input)? as usize)
    }
}

impl Codec for BigUint {
    fn encode(&self, out: &mut Vec<u8>) {
        let bytes = self.to_bytes_le();
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&bytes);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        let len = read_u32(input)? as usize;
        Ok(BigUint::from_bytes_le(take(input, len)?))
    }
}

impl Codec for BigInt {
    fn encode(&self, out: &mut Vec<u8>) {
        out.push(match self.sign() {
            Sign::Minus => 1,
            _ => 0,
        });
        self.magnitude().encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        let sign = take(input, 1)?[0];
        let mag = BigUint::decode(input)?;
        Ok(if sign == 1 {
            -BigInt::from(mag)
        } else {
            BigInt::from(mag)
        })
    }
}

impl Codec for BigRational {
    fn encode(&self, out: &mut Vec<u8>) {
        self.numer().encode(out);
        self.denom().encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        let num = BigInt::decode(input)?;
        let den = BigInt::decode(input)?;
        if den == BigInt::from(0) {
            return Err(Error::Checkpoint("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

impl<T: Codec> Codec for Vec<T> {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.len() as u32).to_le_bytes());
        for x in self {
            x.encode(out);
        }
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        let len = read_u32(input)? as usize;
        (0..len).map(|_| T::decode(input)).collect()
    }
}

impl<T: Codec> Codec for Option<T> {
    fn encode(&self, out: &mut Vec<u8>) {
        match self {
            None => out.push(0),
            Some(x) => {
                out.push(1);
                x.encode(out);
            }
        }
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        match take(input, 1)?[0] {
            0 => Ok(None),
            1 => Ok(Some(T::decode(input)?)),
            t => Err(Error::Checkpoint(format!("bad option tag {t}"))),
        }
    }
}

impl<A: Codec, B: Codec> Codec for (A, B) {
    fn encode(&self, out: &mut Vec<u8>) {
        self.0.encode(out);
        self.1.encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok((A::decode(input)?, B::decode(input)?))
    }
}

/// SHA-256 of the cover-list text.
pub fn fingerprint(poset: &Poset) -> [u8; 32] {
    let digest = Sha256::digest(poset.to_text().as_bytes());
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    out
}

/// Hex SHA-256 of arbitrary bytes.
pub fn fingerprint_bytes(data: &[u8]) -> String {
    hex(&Sha256::digest(data))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A stored level: its cardinality, keys and payloads.
pub type StoredLevel<P> = (usize, Vec<BitSet>, Vec<P>);

/// A checkpoint directory bound to one (poset, algebra) pair.
pub struct CheckpointStore {
    dir: PathBuf,
    tag: String,
    fingerprint: [u8; 32],
    n: usize,
}

impl CheckpointStore {
    pub fn new(root: &Path, poset: &Poset, tag: &str) -> Result<Self> {
        let fp = fingerprint(poset);
        let safe: String = tag
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        let dir = root.join(format!("{safe}-{}", &hex(&fp)[..16]));
        fs::create_dir_all(&dir)?;
        Ok(CheckpointStore {
            dir,
            tag: tag.to_string(),
            fingerprint: fp,
            n: poset.len(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, level: usize) -> PathBuf {
        self.dir.join(format!("level-{level:04}.ckpt"))
    }

    fn levels_present(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let name = entry?.file_name();
            let name = name.to_string_lossy();
            if let Some(k) = name
                .strip_prefix("level-")
                .and_then(|s| s.strip_suffix(".ckpt"))
                .and_then(|s| s.parse().ok())
            {
                out.push(k);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn save<P: Codec>(&self, level: usize, keys: &[BitSet], payloads: &[P]) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.tag.len() as u32).to_le_bytes());
        buf.extend_from_slice(self.tag.as_bytes());
        buf.extend_from_slice(&self.fingerprint);
        buf.extend_from_slice(&(self.n as u32).to_le_bytes());
        buf.extend_from_slice(&(level as u32).to_le_bytes());
        buf.extend_from_slice(&(keys.len() as u64).to_le_bytes());
        for (k, p) in keys.iter().zip(payloads) {
            for w in k.words() {
                buf.extend_from_slice(&w.to_le_bytes());
            }
            p.encode(&mut buf);
        }
        let tmp = self.dir.join(format!("level-{level:04}.tmp"));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&buf)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(level))?;
        for old in self.levels_present()? {
            if old != level {
                fs::remove_file(self.path(old))?;
            }
        }
        Ok(())
    }

    /// Loads the newest stored level, if any.
    pub fn load_latest<P: Codec>(&self) -> Result<Option<StoredLevel<P>>> {
        let Some(&level) = self.levels_present()?.last() else {
            return Ok(None);
        };
        let bytes = fs::read(self.path(level))?;
        let mut input = bytes.as_slice();
        if take(&mut input, 8)? != MAGIC {
            return Err(Error::Checkpoint("bad magic".into()));
        }
        let version = read_u32(&mut input)?;
        if version != VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let tag_len = read_u32(&mut input)? as usize;
        if take(&mut input, tag_len)? != self.tag.as_bytes() {
            return Err(Error::Checkpoint("algebra tag mismatch".into()));
        }
        if take(&mut input, 32)? != self.fingerprint {
            return Err(Error::Checkpoint("poset fingerprint mismatch".into()));
        }
        if read_u32(&mut input)? as usize != self.n {
            return Err(Error::Checkpoint("poset size mismatch".into()));
        }
        let stored = read_u32(&mut input)? as usize;
        if stored != level {
            return Err(Error::Checkpoint(format!("file for level {level} claims {stored}")));
        }
        let count = read_u64(&mut input)? as usize;
        let words = self.n.div_ceil(64);
        let mut keys = Vec::with_capacity(count);
        let mut payloads = Vec::with_capacity(count);
        for _ in 0..count {
            let ws: Vec<u64> = (0..words).map(|_| read_u64(&mut input)).collect::<Result<_>>()?;
            let key = BitSet::from_words(self.n, &ws)
                .ok_or_else(|| Error::Checkpoint("key has padding bits set".into()))?;
            keys.push(key);
            payloads.push(P::decode(&mut input)?);
        }
        if !input.is_empty() {
            return Err(Error::Checkpoint("trailing bytes".into()));
        }
        Ok(Some((level, keys, payloads)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn codec_round_trip(xs in proptest::collection::vec((any::<u64>(), any::<i64>(), 1i64..1000, any::<bool>()), 0..20)) {
            let payload: Vec<(BigUint, Option<BigRational>)> = xs
                .iter()
                .map(|&(u, num, den, some)| {
                    let big = BigUint::from(u) * BigUint::from(u) + 7u32;
                    let r = some.then(|| BigRational::new(BigInt::from(num), BigInt::from(den)));
                    (big, r)
                })
                .collect();
            let mut buf = Vec::new();
            payload.encode(&mut buf);
            let mut input = buf.as_slice();
            let back = Vec::<(BigUint, Option<BigRational>)>::decode(&mut input).unwrap();
            prop_assert!(input.is_empty());
            prop_assert_eq!(back, payload);
        }
    }

    #[test]
    fn truncated_input_is_an_error() {
        let mut buf = Vec::new();
        BigUint::from(1u64 << 40).encode(&mut buf);
        let mut input = &buf[..buf.len() - 1];
        assert!(matches!(BigUint::decode(&mut input), Err(Error::Checkpoint(_))));
    }
}
