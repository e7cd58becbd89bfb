//! Index subsets `S ⊆ {1, ..., K}` as bitmasks.
//!
//! Bit `i` stands for message `i + 1`. Display and parsing use the 1-based
//! message numbers, e.g. `{1,3}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of messages supported by the bitmask representation.
pub const MAX_MESSAGES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Builds a subset from 0-based message indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(idx: I) -> Self {
        Subset(idx.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    /// Builds a subset from 1-based message numbers.
    pub fn from_messages<I: IntoIterator<Item = usize>>(msgs: I) -> Result<Self> {
        let mut mask = 0u32;
        for k in msgs {
            if k == 0 || k > MAX_MESSAGES {
                return Err(Error::InvalidSubset(format!("message index {k} out of range")));
            }
            mask |= 1 << (k - 1);
        }
        Ok(Subset(mask))
    }

    pub fn full(k: usize) -> Self {
        if k >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << k) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn complement(self, k: usize) -> Self {
        Subset(!self.0 & Subset::full(k).0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Checks that the subset lives in `{1..K}`; with `proper`, also that it
    /// is not the whole set.
    pub fn validate(self, k: usize, proper: bool) -> Result<()> {
        if !self.is_subset_of(Subset::full(k)) {
            return Err(Error::InvalidSubset(format!("{self} is not a subset of {{1..{k}}}")));
        }
        if proper && self == Subset::full(k) {
            return Err(Error::InvalidSubset(format!("{self} must be a proper subset")));
        }
        Ok(())
    }

    /// Cyclic shift of message indices by one position (`i -> i + 1 mod K`).
    pub fn rotate(self, k: usize) -> Self {
        Subset::from_indices(self.indices().map(|i| (i + 1) % k))
    }

    /// Smallest mask among all cyclic shifts.
    pub fn cyclic_representative(self, k: usize) -> Self {
        let mut best = self;
        let mut s = self;
        for _ in 1..k {
            s = s.rotate(k);
            best = best.min(s);
        }
        best
    }

    /// All `S` with `∅ ⊊ S ⊊ {1..K}`, in increasing mask order.
    pub fn proper_nonempty(k: usize) -> impl Iterator<Item = Subset> {
        (1..Subset::full(k).0).map(Subset)
    }

    /// All proper subsets including `∅`.
    pub fn proper(k: usize) -> impl Iterator<Item = Subset> {
        (0..Subset::full(k).0).map(Subset)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Subset {
    type Err = Error;

    /// Accepts `""`, `"{}"`, `"∅"`, `"1,3"` or `"{1,3}"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if t.is_empty() || t == "∅" {
            return Ok(Subset::EMPTY);
        }
        let msgs = t
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::InvalidSubset(format!("cannot parse {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Subset::from_messages(msgs)
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.indices().map(|i| i + 1))
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let msgs = Vec::<usize>::deserialize(de)?;
        Subset::from_messages(msgs).map_err(serde::de::Error::custom)
    }
}
