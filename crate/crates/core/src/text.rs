use std::fmt;

/// A read-only byte string with 1-based positions.
///
/// [`Text::sym`] maps byte `b` to `b + 1` and every position outside `1..=n`
/// to `0`, so the text behaves as if padded with a sentinel on both sides.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    pub fn new(bytes: Vec<u8>) -> Text {
        Text { bytes }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    #[inline]
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Symbol at 1-based `pos`, or `0` outside the text.
    #[inline]
    pub fn sym(&self, pos: usize) -> u32 {
        match pos.checked_sub(1).and_then(|k| self.bytes.get(k)) {
            Some(&b) => b as u32 + 1,
            None => 0,
        }
    }

    /// Like [`Text::sym`] but accepts positions left of the text.
    #[inline]
    pub fn sym_signed(&self, pos: i64) -> u32 {
        if pos < 1 {
            0
        } else {
            self.sym(pos as usize)
        }
    }

    /// `S[i..i+len)` clipped to the text.
    pub fn window(&self, i: usize, len: usize) -> &[u8] {
        let n = self.bytes.len();
        let lo = i.saturating_sub(1).min(n);
        let hi = (i.saturating_sub(1) + len).min(n);
        &self.bytes[lo..hi]
    }

    pub(crate) fn check_pos(&self, pos: usize) -> crate::Result<()> {
        if pos == 0 || pos > self.bytes.len() {
            Err(crate::Error::OutOfRange {
                pos,
                n: self.bytes.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Text {
        Text::new(s.as_bytes().to_vec())
    }
}

impl From<&[u8]> for Text {
    fn from(s: &[u8]) -> Text {
        Text::new(s.to_vec())
    }
}

impl From<Vec<u8>> for Text {
    fn from(v: Vec<u8>) -> Text {
        Text::new(v)
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Text({:?})", String::from_utf8_lossy(&self.bytes))
    }
}
