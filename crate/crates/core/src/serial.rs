//! The `SSLCE1` index file envelope.
//!
//! Layout, little-endian: magic `SSLCE1`, `u32` version, `u8` section tag,
//! `u8` mode code, `u64` n, the text bytes, then the section payload. The
//! text travels with the index so a query needs nothing else.

use std::collections::BTreeMap;

use crate::{Error, Mode, PartitioningSet, Result, Text};

pub const MAGIC: &[u8; 6] = b"SSLCE1";
pub const VERSION: u32 = 1;
pub const TAG_LCE: u8 = 1;
pub const TAG_DCOVER: u8 = 2;

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Writer {
        Writer::default()
    }

    pub fn header(tag: u8, mode: Mode, text: &Text) -> Writer {
        let mut w = Writer::new();
        w.buf.extend_from_slice(MAGIC);
        w.u32(VERSION);
        w.u8(tag);
        w.u8(mode.code());
        w.u64(text.len() as u64);
        w.buf.extend_from_slice(text.as_bytes());
        w
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn usize(&mut self, v: usize) {
        self.u64(v as u64);
    }

    pub fn u32s(&mut self, v: &[u32]) {
        self.usize(v.len());
        for &x in v {
            self.u32(x);
        }
    }

    pub fn usizes(&mut self, v: &[usize]) {
        self.usize(v.len());
        for &x in v {
            self.usize(x);
        }
    }

    pub fn pset(&mut self, p: &PartitioningSet) {
        self.usize(p.n);
        self.usize(p.tau);
        self.usize(p.span);
        self.usize(p.delta);
        self.u8(p.forward_sync as u8);
        self.u8(p.mode.code());
        self.usizes(&p.positions);
        self.usize(p.block_periods.len());
        for (&s, &r) in &p.block_periods {
            self.usize(s);
            self.usize(r);
        }
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

/// Parsed envelope header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub tag: u8,
    pub mode: Mode,
    pub text: Text,
}

fn corrupt<T>(what: &str) -> Result<T> {
    Err(Error::Corrupt(what.to_string()))
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Reader<'a> {
        Reader { buf, at: 0 }
    }

    /// Read and validate the envelope up to the payload.
    pub fn header(&mut self) -> Result<Header> {
        if self.take(MAGIC.len())? != MAGIC {
            return corrupt("bad magic");
        }
        let version = self.u32()?;
        if version != VERSION {
            return Err(Error::Corrupt(format!("unsupported version {version}")));
        }
        let tag = self.u8()?;
        let mode =
            Mode::from_code(self.u8()?).ok_or_else(|| Error::Corrupt("unknown mode".into()))?;
        let n = self.usize()?;
        let text = Text::new(self.take(n)?.to_vec());
        Ok(Header { tag, mode, text })
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(k).filter(|&e| e <= self.buf.len());
        match end {
            Some(e) => {
                let s = &self.buf[self.at..e];
                self.at = e;
                Ok(s)
            }
            None => corrupt("truncated"),
        }
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).or_else(|_| corrupt("length overflow"))
    }

    fn len_of(&mut self, width: usize) -> Result<usize> {
        let k = self.usize()?;
        if k.checked_mul(width)
            .map_or(true, |b| b > self.buf.len() - self.at)
        {
            return corrupt("array longer than file");
        }
        Ok(k)
    }

    pub fn u32s(&mut self) -> Result<Vec<u32>> {
        let k = self.len_of(4)?;
        (0..k).map(|_| self.u32()).collect()
    }

    pub fn usizes(&mut self) -> Result<Vec<usize>> {
        let k = self.len_of(8)?;
        (0..k).map(|_| self.usize()).collect()
    }

    /// A partitioning set; positions and periods are validated against the
    /// text but periods are not recomputed.
    pub fn pset(&mut self, text: &Text) -> Result<PartitioningSet> {
        let n = self.usize()?;
        let tau = self.usize()?;
        let span = self.usize()?;
        let delta = self.usize()?;
        let forward_sync = self.u8()? != 0;
        let mode =
            Mode::from_code(self.u8()?).ok_or_else(|| Error::Corrupt("unknown mode".into()))?;
        let positions = self.usizes()?;
        let k = self.len_of(16)?;
        let mut block_periods = BTreeMap::new();
        for _ in 0..k {
            let s = self.usize()?;
            let r = self.usize()?;
            block_periods.insert(s, r);
        }
        if n != text.len()
            || positions.windows(2).any(|w| w[0] >= w[1])
            || positions.first() == Some(&0)
            || positions.last().is_some_and(|&p| p > n)
        {
            return corrupt("partitioning set does not fit the text");
        }
        let cap = 64 * (n + 1);
        if tau == 0 || tau > n || span == 0 || span > cap || delta > cap {
            return corrupt("parameters out of range");
        }
        if block_periods
            .iter()
            .any(|(&s, &r)| r == 0 || r > span || s > n)
        {
            return corrupt("bad block periods");
        }
        Ok(PartitioningSet {
            n,
            positions,
            tau,
            span,
            delta,
            block_periods,
            forward_sync,
            mode,
        })
    }

    pub fn finish(&self) -> Result<()> {
        if self.at == self.buf.len() {
            Ok(())
        } else {
            corrupt("trailing bytes")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip_and_rejections() {
        let t = Text::from("banana");
        let mut w = Writer::header(TAG_LCE, Mode::Det, &t);
        w.u32s(&[1, 2, 3]);
        let bytes = w.finish();
        let mut r = Reader::new(&bytes);
        let h = r.header().unwrap();
        assert_eq!(
            (h.tag, h.mode, h.text.as_bytes()),
            (TAG_LCE, Mode::Det, &b"banana"[..])
        );
        assert_eq!(r.u32s().unwrap(), vec![1, 2, 3]);
        r.finish().unwrap();

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Reader::new(&bad).header(), Err(Error::Corrupt(_))));
        let mut bad = bytes.clone();
        bad[6] = 9;
        assert!(matches!(Reader::new(&bad).header(), Err(Error::Corrupt(_))));
        for cut in 0..bytes.len() {
            let mut r = Reader::new(&bytes[..cut]);
            assert!(r.header().and_then(|_| r.u32s()).is_err());
        }
    }
}
