//! Short bit strings.
//!
//! A [`Bits`] value is written the way inputs are written on the command line,
//! e.g. `0110`. Character `i` (0-based, left to right) is stored in bit `i` of
//! the backing word, so the first character is the least significant bit. This
//! makes the field embedding `x_1 + x_2 a + ... + x_m a^(m-1)` the identity on
//! the backing word.

use core::fmt;

/// Maximum supported length.
pub const MAX_BITS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Bits {
    len: u8,
    word: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BitsError {
    #[error("invalid character {0:?} in bit string (expected '0' or '1')")]
    InvalidChar(char),
    #[error("bit string of length {0} exceeds the 64-bit limit")]
    TooLong(usize),
}

impl Bits {
    /// Bit string of length `len` whose character `i` is bit `i` of `word`.
    pub fn new(len: usize, word: u64) -> Self {
        assert!(len <= MAX_BITS, "bit string longer than {MAX_BITS}");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Bits { len: len as u8, word: word & mask }
    }

    pub fn zeros(len: usize) -> Self {
        Bits::new(len, 0)
    }

    /// Interprets `value` as a big-endian integer of `len` bits, i.e. the
    /// first character is the most significant bit. This is how basis-state
    /// indices of a register are read.
    pub fn from_big_endian(len: usize, value: u64) -> Self {
        let mut word = 0;
        for i in 0..len {
            if (value >> (len - 1 - i)) & 1 == 1 {
                word |= 1 << i;
            }
        }
        Bits::new(len, word)
    }

    /// Inverse of [`Bits::from_big_endian`].
    pub fn to_big_endian(self) -> u64 {
        let len = self.len();
        (0..len).fold(0, |acc, i| acc | ((self.get(i) as u64) << (len - 1 - i)))
    }

    pub fn parse(s: &str) -> Result<Self, BitsError> {
        let s = s.trim();
        if s.len() > MAX_BITS {
            return Err(BitsError::TooLong(s.len()));
        }
        let mut word = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => word |= 1 << i,
                other => return Err(BitsError::InvalidChar(other)),
            }
        }
        Ok(Bits::new(s.len(), word))
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn word(self) -> u64 {
        self.word
    }

    /// Character `i` (0-based).
    pub fn get(self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.word >> i) & 1 == 1
    }

    pub fn xor(self, other: Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits::new(self.len(), self.word ^ other.word)
    }

    pub fn weight(self) -> u32 {
        self.word.count_ones()
    }

    pub fn parity(self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn hamming(self, other: Bits) -> u32 {
        (self.word ^ other.word).count_ones()
    }

    /// All strings of length `len`, in increasing order of the backing word.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len < 64);
        (0..1u64 << len).map(move |w| Bits::new(len, w))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl core::str::FromStr for Bits {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Bits::parse(s)
    }
}
