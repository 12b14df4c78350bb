//! Exact fermionic Fock space over a finite set of named modes.
//!
//! The stored mode order of a [`ModeSystem`] is the canonical order: the basis
//! ket for an occupation bitstring is the product of creation operators of the
//! occupied modes written left to right in that order, acting on the vacuum,
//! with phase `+1`. Every sign elsewhere in the crate is measured against this
//! convention.
//!
//! Bitstrings are packed into a `usize` with bit `k` holding the occupation of
//! the `k`-th canonical mode. Serialized bitstrings read left to right in
//! canonical order, so `"10"` is the first mode occupied.

mod operator;
mod state;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use operator::{act_sequence, LadderKind, LadderOp, OperatorString};
pub use state::{random_state, DensityOperator, FockVector};

/// Largest number of modes a system may carry (dense 2^N storage).
pub const MAX_MODES: usize = 14;

/// An ordered list of distinct fermionic modes, split into a leading block of
/// `a` modes and a trailing block of `c` modes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeSystem {
    labels: Vec<String>,
    a_count: usize,
}

impl ModeSystem {
    /// `labels` is the canonical order; the first `a_count` are the `a` block.
    pub fn new<S: AsRef<str>>(labels: &[S], a_count: usize) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySystem);
        }
        if labels.len() > MAX_MODES {
            return Err(Error::SystemTooLarge {
                modes: labels.len(),
                limit: MAX_MODES,
            });
        }
        if a_count > labels.len() {
            return Err(Error::InvalidBipartition(format!(
                "a-block size {a_count} exceeds {} modes",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut owned = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidLabel(l.to_string()));
            }
            if !seen.insert(l) {
                return Err(Error::DuplicateMode(l.to_string()));
            }
            owned.push(l.to_string());
        }
        Ok(Self {
            labels: owned,
            a_count,
        })
    }

    /// Modes `a1..an, c1..cm`.
    pub fn standard(n: usize, m: usize) -> Result<Self> {
        let labels: Vec<String> = (1..=n)
            .map(|i| format!("a{i}"))
            .chain((1..=m).map(|j| format!("c{j}")))
            .collect();
        Self::new(&labels, n)
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    /// Hilbert space dimension `2^N`.
    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn c_count(&self) -> usize {
        self.labels.len() - self.a_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    /// Bit mask of the given canonical positions.
    pub fn mask_of(&self, positions: &[usize]) -> usize {
        positions.iter().fold(0, |m, &k| m | (1 << k))
    }

    /// The sub-system on the given canonical positions, in canonical order.
    ///
    /// Positions from the original `a` block stay in the `a` block.
    pub fn subsystem(&self, positions: &[usize]) -> Result<Self> {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != positions.len() {
            return Err(Error::InvalidSubset("repeated mode".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&k| k >= self.n_modes()) {
            return Err(Error::InvalidSubset(format!("position {bad} out of range")));
        }
        let labels: Vec<&str> = sorted.iter().map(|&k| self.label(k)).collect();
        let a_count = sorted.iter().filter(|&&k| k < self.a_count).count();
        Self::new(&labels, a_count)
    }
}

impl Serialize for ModeSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels.serialize(s)
    }
}

/// Total particle-number parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_count(count: u32) -> Self {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Which parity sector a random state is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Even,
    Odd,
    Any,
}

impl Sector {
    pub fn contains(self, bits: usize) -> bool {
        match self {
            Sector::Any => true,
            Sector::Even => bits.count_ones().is_multiple_of(2),
            Sector::Odd => bits.count_ones() % 2 == 1,
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Sector::Even),
            "odd" => Ok(Sector::Odd),
            "any" => Ok(Sector::Any),
            other => Err(Error::Parse(format!("unknown sector `{other}`"))),
        }
    }
}

/// One occupation-number basis ket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationBasisState {
    bits: usize,
    n_modes: usize,
}

impl OccupationBasisState {
    pub fn new(bits: usize, n_modes: usize) -> Self {
        debug_assert!(n_modes >= usize::BITS as usize || bits >> n_modes == 0);
        Self { bits, n_modes }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self { bits: 0, n_modes }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn is_occupied(&self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    pub fn count(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn parity(&self) -> Parity {
        parity_of(*self)
    }

    /// Occupied canonical positions in increasing order.
    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_modes).filter(|&k| self.is_occupied(k))
    }

    /// Parses a left-to-right `0`/`1` string.
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > MAX_MODES {
            return Err(Error::Parse(format!("invalid bitstring length in `{s}`")));
        }
        let mut bits = 0;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << k,
                _ => return Err(Error::Parse(format!("invalid bitstring `{s}`"))),
            }
        }
        Ok(Self {
            bits,
            n_modes: s.len(),
        })
    }
}

impl fmt::Display for OccupationBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n_modes {
            f.write_str(if self.is_occupied(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parity of the total occupation.
pub fn parity_of(state: OccupationBasisState) -> Parity {
    Parity::of_count(state.count())
}
