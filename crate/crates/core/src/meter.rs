//! Coarse accounting of auxiliary machine words held during construction.

/// Tracks live and peak word counts. Builders charge the buffers they
/// allocate beyond the text and the final output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WordMeter {
    live: usize,
    peak: usize,
}

impl WordMeter {
    pub fn new() -> WordMeter {
        WordMeter::default()
    }

    pub fn alloc(&mut self, words: usize) {
        self.live += words;
        self.peak = self.peak.max(self.live);
    }

    pub fn free(&mut self, words: usize) {
        self.live = self.live.saturating_sub(words);
    }

    /// Record a transient buffer that is released right away.
    pub fn touch(&mut self, words: usize) {
        self.alloc(words);
        self.free(words);
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn peak(&self) -> usize {
        self.peak
    }
}
