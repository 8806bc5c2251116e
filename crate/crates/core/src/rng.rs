//! Replayable pseudo-random sequence read from a byte file.
//!
//! Each draw consumes two bytes `(b0, b1)` and yields
//! `xi = (b0 + 256 * b1) / 65535`, so any platform reading the same file
//! produces the same sequence.

use std::path::Path;

use crate::error::{Error, Result};

/// The first five byte pairs of the published random file.
pub const PUBLISHED_PREFIX: [u8; 10] = [34, 178, 52, 184, 220, 178, 237, 13, 19, 247];

/// Length of the fixture file shipped in `data/random-fixture.bin`.
pub const FIXTURE_LEN: usize = 65_536;

/// Seed of the filler generator used after [`PUBLISHED_PREFIX`].
pub const FIXTURE_SEED: u64 = 0x0005_eed0_2010_0425;

const LCG_MUL: u64 = 6_364_136_223_846_793_005;
const LCG_INC: u64 = 1_442_695_040_888_963_407;

/// Fixture byte content: [`PUBLISHED_PREFIX`] followed by the top byte of
/// successive states of the 64-bit LCG
/// `s <- 6364136223846793005 * s + 1442695040888963407 (mod 2^64)`
/// started from [`FIXTURE_SEED`] (the state is advanced before each byte).
pub fn fixture_bytes(len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    out.extend(PUBLISHED_PREFIX.iter().copied().take(len));
    let mut state = FIXTURE_SEED;
    while out.len() < len {
        state = state.wrapping_mul(LCG_MUL).wrapping_add(LCG_INC);
        out.push((state >> 56) as u8);
    }
    out
}

#[derive(Debug, Clone)]
pub struct ByteStreamRng {
    bytes: Vec<u8>,
    cursor: usize,
}

impl ByteStreamRng {
    pub fn new(bytes: Vec<u8>) -> Self {
        Self { bytes, cursor: 0 }
    }

    /// Stream over the built-in fixture content.
    pub fn fixture() -> Self {
        Self::new(fixture_bytes(FIXTURE_LEN))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(bytes))
    }

    /// Draws ξ in [0, 1] from the next two bytes (low byte first).
    pub fn next_xi(&mut self) -> Result<f64> {
        let remaining = self.bytes.len() - self.cursor;
        if remaining < 2 {
            return Err(Error::ExhaustedStream {
                offset: self.cursor,
                needed: 2 - remaining,
            });
        }
        let b0 = self.bytes[self.cursor] as u32;
        let b1 = self.bytes[self.cursor + 1] as u32;
        self.cursor += 2;
        Ok((b0 + (b1 << 8)) as f64 / 65535.0)
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn remaining_draws(&self) -> usize {
        (self.bytes.len() - self.cursor) / 2
    }

    /// Fails up front when fewer than `draws` draws are left.
    pub fn require_draws(&self, draws: usize) -> Result<()> {
        let have = self.bytes.len() - self.cursor;
        if have < 2 * draws {
            return Err(Error::ExhaustedStream {
                offset: self.cursor,
                needed: 2 * draws - have,
            });
        }
        Ok(())
    }

    /// A fresh stream over the same bytes, positioned at offset 0.
    pub fn rewound(&self) -> Self {
        Self::new(self.bytes.clone())
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_pairs() {
        let mut rng = ByteStreamRng::new(PUBLISHED_PREFIX.to_vec());
        let expected = [45602u32, 47156, 45788, 3565, 63251];
        for e in expected {
            let xi = rng.next_xi().unwrap();
            assert_eq!(xi, e as f64 / 65535.0);
            assert_eq!((xi * 65535.0).round() as u32, e);
        }
        assert!(matches!(rng.next_xi(), Err(Error::ExhaustedStream { offset: 10, needed: 2 })));
    }

    #[test]
    fn first_values() {
        let mut rng = ByteStreamRng::fixture();
        assert!((rng.next_xi().unwrap() - 0.695_841_916_5).abs() < 1e-10);
        assert!((rng.next_xi().unwrap() - 0.719_554_436_6).abs() < 1e-10);
    }

    #[test]
    fn endpoints() {
        let mut rng = ByteStreamRng::new(vec![0, 0, 255, 255, 7]);
        assert_eq!(rng.next_xi().unwrap(), 0.0);
        assert_eq!(rng.next_xi().unwrap(), 1.0);
        assert_eq!(rng.remaining_draws(), 0);
        assert!(rng.next_xi().is_err());
    }

    #[test]
    fn require_draws_checks_budget() {
        let rng = ByteStreamRng::new(vec![1; 9]);
        assert!(rng.require_draws(4).is_ok());
        assert!(rng.require_draws(5).is_err());
    }

    #[test]
    fn shipped_fixture_matches_generator() {
        let shipped = include_bytes!("../data/random-fixture.bin");
        assert_eq!(shipped.len(), FIXTURE_LEN);
        assert_eq!(&shipped[..], &fixture_bytes(FIXTURE_LEN)[..]);
    }

    proptest::proptest! {
        #[test]
        fn draws_are_unit_interval_integer_ratios(bytes in proptest::collection::vec(proptest::num::u8::ANY, 0..256)) {
            let mut a = ByteStreamRng::new(bytes.clone());
            let mut b = ByteStreamRng::new(bytes);
            while let Ok(x) = a.next_xi() {
                proptest::prop_assert!((0.0..=1.0).contains(&x));
                proptest::prop_assert_eq!((x * 65535.0).fract(), 0.0);
                proptest::prop_assert_eq!(x.to_bits(), b.next_xi().unwrap().to_bits());
            }
            proptest::prop_assert!(b.next_xi().is_err());
        }
    }
}
