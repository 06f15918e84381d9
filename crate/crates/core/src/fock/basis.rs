//! Bit-encoded fermionic occupation bases.
//!
//! A basis state is a machine word whose bit `k` records the occupation of
//! mode `k`; mode 0 is the rightmost bit. State lists are kept strictly
//! increasing in the integer encoding so indices are reproducible.

use crate::error::{Error, Result};

/// Hard cap on mode count for a full (all-sector) basis.
pub const MAX_FULL_MODES: usize = 20;
/// Hard cap on mode count for sector-restricted bases.
pub const MAX_SECTOR_MODES: usize = 32;

/// An ordered list of bit-encoded occupation words, either over the whole
/// Fock space of `mode_count` modes or restricted to a fixed particle number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    mode_count: usize,
    sector: Option<u32>,
    states: Vec<u64>,
}

impl FockBasis {
    /// All `2^M` occupation words in increasing order.
    pub fn full(mode_count: usize) -> Result<Self> {
        if mode_count > MAX_FULL_MODES {
            return Err(Error::DimensionOverflow {
                dim: mode_count,
                cap: MAX_FULL_MODES,
            });
        }
        let dim = 1usize << mode_count;
        Ok(Self {
            mode_count,
            sector: None,
            states: (0..dim as u64).collect(),
        })
    }

    /// All words of `mode_count` modes with exactly `particles` bits set,
    /// in increasing integer order.
    pub fn sector(mode_count: usize, particles: u32) -> Result<Self> {
        if mode_count > MAX_SECTOR_MODES {
            return Err(Error::DimensionOverflow {
                dim: mode_count,
                cap: MAX_SECTOR_MODES,
            });
        }
        if particles as usize > mode_count {
            return Err(Error::InvalidParameter(format!(
                "cannot place {particles} particles in {mode_count} modes"
            )));
        }
        let mut states = Vec::new();
        if particles == 0 {
            states.push(0);
        } else {
            // Gosper's hack: iterate words of fixed population count in
            // increasing order.
            let limit = if mode_count == 64 {
                u64::MAX
            } else {
                (1u64 << mode_count) - 1
            };
            let mut w: u64 = (1u64 << particles) - 1;
            loop {
                states.push(w);
                let c = w & w.wrapping_neg();
                let r = w + c;
                if r > limit || c == 0 {
                    break;
                }
                w = (((r ^ w) >> 2) / c) | r;
                if w > limit {
                    break;
                }
            }
        }
        Ok(Self {
            mode_count,
            sector: Some(particles),
            states,
        })
    }

    /// Restriction of the full space to words of a fixed fermion parity
    /// (0 = even population count, 1 = odd).
    pub fn parity_sector(mode_count: usize, parity: u32) -> Result<Self> {
        if mode_count > MAX_FULL_MODES {
            return Err(Error::DimensionOverflow {
                dim: mode_count,
                cap: MAX_FULL_MODES,
            });
        }
        let dim = 1u64 << mode_count;
        let states: Vec<u64> = (0..dim)
            .filter(|w| w.count_ones() % 2 == parity % 2)
            .collect();
        Ok(Self {
            mode_count,
            sector: None,
            states,
        })
    }

    /// Basis holding an explicit, strictly increasing word list.
    pub fn from_words(mode_count: usize, states: Vec<u64>) -> Result<Self> {
        if !states.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::InvalidParameter(
                "basis words must be strictly increasing".into(),
            ));
        }
        if let Some(&max) = states.last() {
            if mode_count < 64 && max >> mode_count != 0 {
                return Err(Error::ModeOutOfRange {
                    mode: 63 - max.leading_zeros() as usize,
                    modes: mode_count,
                });
            }
        }
        Ok(Self {
            mode_count,
            sector: None,
            states,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Fixed particle number, if this basis is sector-restricted.
    pub fn sector_particles(&self) -> Option<u32> {
        self.sector
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.states
    }

    pub fn word(&self, index: usize) -> u64 {
        self.states[index]
    }

    /// Index of `word` in the canonical order, if it belongs to the basis.
    pub fn index_of(&self, word: u64) -> Option<usize> {
        // Full bases are the identity map; everything else binary-searches.
        if self.sector.is_none() && self.states.len() == 1usize << self.mode_count {
            let idx = word as usize;
            return (idx < self.states.len()).then_some(idx);
        }
        self.states.binary_search(&word).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_basis_is_canonical() {
        let b = FockBasis::full(3).unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(b.words(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(b.index_of(0b101), Some(5));
    }

    #[test]
    fn sector_basis_has_fixed_population() {
        let b = FockBasis::sector(4, 2).unwrap();
        assert_eq!(b.len(), 6);
        for &w in b.words() {
            assert_eq!(w.count_ones(), 2);
        }
        assert!(b.words().windows(2).all(|p| p[0] < p[1]));
        assert_eq!(b.words(), &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn sector_lookup_round_trips() {
        let b = FockBasis::sector(6, 3).unwrap();
        for (i, &w) in b.words().iter().enumerate() {
            assert_eq!(b.index_of(w), Some(i));
        }
        assert_eq!(b.index_of(0b1110001), None);
        assert_eq!(b.index_of(0), None);
    }

    #[test]
    fn parity_sectors_partition_the_space() {
        let even = FockBasis::parity_sector(4, 0).unwrap();
        let odd = FockBasis::parity_sector(4, 1).unwrap();
        assert_eq!(even.len() + odd.len(), 16);
        assert!(even.words().iter().all(|w| w.count_ones() % 2 == 0));
        assert!(odd.words().iter().all(|w| w.count_ones() % 2 == 1));
    }

    #[test]
    fn full_basis_cap_enforced() {
        assert!(FockBasis::full(MAX_FULL_MODES).is_ok());
        assert!(matches!(
            FockBasis::full(MAX_FULL_MODES + 1),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn empty_and_full_sectors() {
        let vac = FockBasis::sector(5, 0).unwrap();
        assert_eq!(vac.words(), &[0]);
        let full = FockBasis::sector(5, 5).unwrap();
        assert_eq!(full.words(), &[0b11111]);
    }
}
