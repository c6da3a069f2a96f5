use std::fmt;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite word over `1..=k`; the empty word acts as the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fails on the first letter outside `1..=k`.
    pub fn validate(&self, k: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a == 0 || a as usize > k) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, k }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

/// An unbounded, reproducible letter source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WordStream {
    /// `preperiod` once, then `period` forever.
    Periodic { preperiod: Vec<u32>, period: Vec<u32> },
    /// Letters from a ChaCha8 stream keyed by `seed`, starting at position `offset`.
    Seeded {
        seed: u64,
        k: u32,
        #[serde(default)]
        offset: u64,
    },
}

impl WordStream {
    pub fn periodic(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::OutOfRange("a periodic stream needs a nonempty period".into()));
        }
        if let Some(&letter) = preperiod.iter().chain(&period).find(|&&a| a == 0) {
            return Err(Error::LetterOutOfRange { letter, k: 0 });
        }
        Ok(WordStream::Periodic { preperiod, period })
    }

    /// Checks the invariants `periodic` and `seeded` enforce, for deserialized values.
    pub fn validate(&self) -> Result<()> {
        match self {
            WordStream::Periodic { preperiod, period } => {
                Self::periodic(preperiod.clone(), period.clone()).map(drop)
            }
            WordStream::Seeded { seed, k, .. } => Self::seeded(*seed, *k).map(drop),
        }
    }

    pub fn constant(letter: u32) -> Result<Self> {
        Self::periodic(Vec::new(), vec![letter])
    }

    pub fn seeded(seed: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange("a seeded stream needs k >= 1".into()));
        }
        Ok(WordStream::Seeded { seed, k, offset: 0 })
    }

    /// Largest letter the stream can emit.
    pub fn max_letter(&self) -> u32 {
        match self {
            WordStream::Periodic { preperiod, period } => {
                preperiod.iter().chain(period).copied().max().unwrap_or(0)
            }
            WordStream::Seeded { k, .. } => *k,
        }
    }

    /// The letter at 0-based position `i`.
    pub fn letter(&self, i: u64) -> u32 {
        self.prefix_from(i, 1).letters()[0]
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        self.prefix_from(0, n)
    }

    fn prefix_from(&self, start: u64, n: usize) -> Word {
        match self {
            WordStream::Periodic { preperiod, period } => {
                let pre = preperiod.len() as u64;
                let letters = (start..start + n as u64)
                    .map(|i| {
                        if i < pre {
                            preperiod[i as usize]
                        } else {
                            period[((i - pre) % period.len() as u64) as usize]
                        }
                    })
                    .collect();
                Word(letters)
            }
            WordStream::Seeded { seed, k, offset } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                // Each letter consumes one 64-bit output, i.e. two 32-bit words.
                rng.set_word_pos(2 * u128::from(offset + start));
                Word((0..n).map(|_| (rng.next_u64() % u64::from(*k)) as u32 + 1).collect())
            }
        }
    }

    /// `S^n`: the stream with its first `n` letters dropped.
    pub fn shift(&self, n: u64) -> WordStream {
        match self {
            WordStream::Periodic { preperiod, period } => {
                let pre = preperiod.len() as u64;
                if n <= pre {
                    WordStream::Periodic {
                        preperiod: preperiod[n as usize..].to_vec(),
                        period: period.clone(),
                    }
                } else {
                    let r = ((n - pre) % period.len() as u64) as usize;
                    let mut rotated = period[r..].to_vec();
                    rotated.extend_from_slice(&period[..r]);
                    WordStream::Periodic {
                        preperiod: Vec::new(),
                        period: rotated,
                    }
                }
            }
            WordStream::Seeded { seed, k, offset } => WordStream::Seeded {
                seed: *seed,
                k: *k,
                offset: offset + n,
            },
        }
    }
}
