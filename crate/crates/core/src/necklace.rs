//! Bit strings under cyclic translation.
//!
//! A [`BitConfig`] is an `n`-site computational basis string. Site 1 is the
//! most significant of the `n` bits, so `"100"` is the integer 4 for three
//! sites. Translation moves the value at site `i` to site `i + 1` with site
//! `n` wrapping to site 1, which on the integer is a right rotation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest supported chain length.
pub const MIN_SITES: u32 = 2;
/// Largest chain length the combinatorics accept.
pub const MAX_SITES: u32 = 24;

pub(crate) fn check_sites(n: u32) -> Result<()> {
    if (MIN_SITES..=MAX_SITES).contains(&n) {
        Ok(())
    } else {
        Err(Error::Size {
            n,
            min: MIN_SITES,
            max: MAX_SITES,
        })
    }
}

#[inline]
fn mask(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
fn rotate_right(bits: u32, n: u32, r: u32) -> u32 {
    if r == 0 {
        bits
    } else {
        ((bits >> r) | (bits << (n - r))) & mask(n)
    }
}

/// An `n`-site computational basis string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitConfig {
    n_sites: u32,
    bits: u32,
}

impl BitConfig {
    pub fn new(n_sites: u32, bits: u32) -> Result<Self> {
        check_sites(n_sites)?;
        if bits > mask(n_sites) {
            return Err(Error::InvalidBits { n: n_sites, bits });
        }
        Ok(Self { n_sites, bits })
    }

    /// Callers guarantee `bits < 2^n_sites` and a valid `n_sites`.
    #[inline]
    pub(crate) fn new_unchecked(n_sites: u32, bits: u32) -> Self {
        debug_assert!(bits <= mask(n_sites));
        Self { n_sites, bits }
    }

    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Basis index of this string in a dense state vector.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Value at `site` (1-based, site 1 is the leftmost character).
    pub fn site(&self, site: u32) -> bool {
        assert!(site >= 1 && site <= self.n_sites, "site {site} out of range");
        (self.bits >> (self.n_sites - site)) & 1 == 1
    }

    /// Number of sites holding `1`.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Global bit flip.
    pub fn complement(&self) -> Self {
        Self::new_unchecked(self.n_sites, !self.bits & mask(self.n_sites))
    }

    /// Cyclic translation by `steps` sites; negative values translate
    /// backwards.
    pub fn translate(&self, steps: i64) -> Self {
        let r = steps.rem_euclid(self.n_sites as i64) as u32;
        Self::new_unchecked(self.n_sites, rotate_right(self.bits, self.n_sites, r))
    }

    /// Smallest `j >= 1` with `translate(j) == self`.
    pub fn period(&self) -> u32 {
        let n = self.n_sites;
        // the period divides n, so only divisors need checking
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| rotate_right(self.bits, n, d) == self.bits)
            .unwrap_or(n)
    }

    /// Smallest integer among all rotations.
    pub fn canonical(&self) -> Self {
        let n = self.n_sites;
        let min = (0..n).map(|r| rotate_right(self.bits, n, r)).min().unwrap_or(self.bits);
        Self::new_unchecked(n, min)
    }

    /// Largest integer among all rotations; the rotation whose string reads
    /// with the longest leading run of ones.
    pub fn leading(&self) -> Self {
        let n = self.n_sites;
        let max = (0..n).map(|r| rotate_right(self.bits, n, r)).max().unwrap_or(self.bits);
        Self::new_unchecked(n, max)
    }

    fn is_canonical(&self) -> bool {
        let n = self.n_sites;
        (1..n).all(|r| rotate_right(self.bits, n, r) >= self.bits)
    }
}

impl fmt::Display for BitConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 1..=self.n_sites {
            f.write_str(if self.site(site) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitConfig {
    type Err = Error;

    /// Parses an MSB-first string of `0`/`1`; its length is the site count.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.len() as u32;
        check_sites(n)?;
        let mut bits = 0u32;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                other => return Err(Error::Parse(format!("invalid bit character {other:?} in {s:?}"))),
            }
        }
        Ok(Self::new_unchecked(n, bits))
    }
}

impl Serialize for BitConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Translate `s` by `steps` sites.
pub fn translate(s: BitConfig, steps: i64) -> BitConfig {
    s.translate(steps)
}

/// Minimal number of translations returning `s` to itself.
pub fn period_of_string(s: BitConfig) -> u32 {
    s.period()
}

/// The set of strings reachable from a representative by translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicOrbit {
    #[serde(rename = "repr")]
    representative: BitConfig,
    period: u32,
    /// `members[j]` is the representative translated `j` times.
    members: Vec<BitConfig>,
}

impl CyclicOrbit {
    pub fn n_sites(&self) -> u32 {
        self.representative.n_sites()
    }

    /// The canonical cyclic unit: the smallest member.
    pub fn representative(&self) -> BitConfig {
        self.representative
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn members(&self) -> &[BitConfig] {
        &self.members
    }

    pub fn contains(&self, s: BitConfig) -> bool {
        s.n_sites() == self.n_sites() && s.canonical() == self.representative
    }

    /// Position of `s` in translation order, if it belongs to the orbit.
    pub fn position(&self, s: BitConfig) -> Option<usize> {
        self.members.iter().position(|&m| m == s)
    }

    fn from_canonical(rep: BitConfig) -> Self {
        let period = rep.period();
        let members = (0..period as i64).map(|j| rep.translate(j)).collect();
        Self {
            representative: rep,
            period,
            members,
        }
    }
}

/// The orbit containing `s`, listed from its canonical representative.
pub fn orbit_of(s: BitConfig) -> CyclicOrbit {
    CyclicOrbit::from_canonical(s.canonical())
}

/// Every orbit of `n`-site strings in ascending order of representative.
pub fn enumerate_orbits(n_sites: u32) -> Result<Vec<CyclicOrbit>> {
    Ok(canonical_units(n_sites)?
        .into_iter()
        .map(CyclicOrbit::from_canonical)
        .collect())
}

/// Canonical representatives only, ascending.
pub fn canonical_units(n_sites: u32) -> Result<Vec<BitConfig>> {
    check_sites(n_sites)?;
    Ok((0..=mask(n_sites))
        .map(|b| BitConfig::new_unchecked(n_sites, b))
        .filter(BitConfig::is_canonical)
        .collect())
}

/// A class of orbits related by translation and global bit flip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SloccClass {
    pub n_sites: u32,
    /// Canonical representatives, ascending.
    pub orbit_reps: Vec<BitConfig>,
    /// Ordinal position, starting at 1.
    pub label: usize,
}

impl SloccClass {
    pub fn contains_unit(&self, s: BitConfig) -> bool {
        self.orbit_reps.contains(&s.canonical())
    }
}

/// Partition all orbits into classes under rotation and global complement.
/// Labels follow the smallest representative of each class.
pub fn partition_classes(n_sites: u32) -> Result<Vec<SloccClass>> {
    let reps = canonical_units(n_sites)?;
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for rep in reps {
        if !seen.insert(rep) {
            continue;
        }
        let partner = rep.complement().canonical();
        seen.insert(partner);
        let mut orbit_reps = vec![rep];
        if partner != rep {
            orbit_reps.push(partner);
        }
        orbit_reps.sort();
        classes.push(SloccClass {
            n_sites,
            orbit_reps,
            label: classes.len() + 1,
        });
    }
    Ok(classes)
}

/// Class of the orbit containing `s`.
pub fn class_of(s: BitConfig) -> Vec<BitConfig> {
    let a = s.canonical();
    let b = s.complement().canonical();
    let mut v = vec![a];
    if b != a {
        v.push(b);
    }
    v.sort();
    v
}
