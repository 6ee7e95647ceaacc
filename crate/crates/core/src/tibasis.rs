//! The complete basis of translation eigenstates.
//!
//! Each orbit of period `k` yields `k` basis states. The state with phase
//! index `m` puts amplitude `e^{i2πmj/k}/√k` on the `j`-th translate of the
//! cyclic unit, which makes it an eigenvector of one-site translation with
//! eigenvalue `c = e^{-i2πm/k}`. Since `k` divides `n`, every `c` is an
//! `n`-th root of unity.
//!
//! The global phase of a basis state is fixed by making the amplitude on the
//! orbit's *leading* member (its largest rotation, the string that starts
//! with the longest run of ones) real and positive. The orbit itself is still
//! identified by its smallest rotation.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config;
use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::necklace::{enumerate_orbits, orbit_of, BitConfig, CyclicOrbit};

/// Coefficients at or below this magnitude count as zero in [`is_ti`].
pub const COEFF_CUTOFF: f64 = 1e-10;

/// Stable identifier of a basis state: canonical unit and phase index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId {
    pub unit: BitConfig,
    pub m: u32,
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.unit, self.m)
    }
}

impl FromStr for StateId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (unit, m) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("state id {s:?} is not of the form <bits>:<m>")))?;
        let unit: BitConfig = unit.parse()?;
        let m = m
            .parse()
            .map_err(|_| Error::Parse(format!("bad phase index in {s:?}")))?;
        Ok(Self {
            unit: unit.canonical(),
            m,
        })
    }
}

impl Serialize for StateId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StateId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `e^{-i2π·num/den}`, exact for the quarter turns.
fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * num == den {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * num == den {
        return Complex64::new(0.0, -1.0);
    }
    if 4 * num == 3 * den {
        return Complex64::new(0.0, 1.0);
    }
    Complex64::from_polar(1.0, -2.0 * PI * num as f64 / den as f64)
}

/// One member of the translation-invariant basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TIBasisState {
    orbit: CyclicOrbit,
    phase_index: u32,
    eigenvalue: Complex64,
    /// Nonzero amplitudes in orbit order.
    support: Vec<(BitConfig, Complex64)>,
}

impl TIBasisState {
    fn new(orbit: CyclicOrbit, m: u32) -> Self {
        let k = orbit.period() as u64;
        let lead = orbit.representative().leading();
        let lead_pos = orbit.position(lead).expect("leading rotation lies in the orbit") as u64;
        let norm = 1.0 / (k as f64).sqrt();
        let support = orbit
            .members()
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                // e^{i2πm(j - lead)/k} = e^{-i2πm(k + lead - j)/k}
                let phase = root_of_unity(m as u64 * (k + lead_pos - j as u64), k);
                (s, phase * norm)
            })
            .collect();
        let eigenvalue = root_of_unity(m as u64, k);
        Self {
            orbit,
            phase_index: m,
            eigenvalue,
            support,
        }
    }

    pub fn id(&self) -> StateId {
        StateId {
            unit: self.orbit.representative(),
            m: self.phase_index,
        }
    }

    pub fn orbit(&self) -> &CyclicOrbit {
        &self.orbit
    }

    pub fn unit(&self) -> BitConfig {
        self.orbit.representative()
    }

    pub fn n_sites(&self) -> u32 {
        self.orbit.n_sites()
    }

    pub fn period(&self) -> u32 {
        self.orbit.period()
    }

    pub fn phase_index(&self) -> u32 {
        self.phase_index
    }

    /// Translation eigenvalue `e^{-i2πm/k}`.
    pub fn eigenvalue(&self) -> Complex64 {
        self.eigenvalue
    }

    /// The eigenvalue written as `e^{-i2πq/n}`; returns `q`.
    pub fn momentum(&self) -> u32 {
        self.phase_index * (self.n_sites() / self.period())
    }

    /// Nonzero amplitudes, listed in translation order from the canonical unit.
    pub fn support(&self) -> &[(BitConfig, Complex64)] {
        &self.support
    }

    /// Dense amplitude vector.
    pub fn vector(&self) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_sites()];
        for &(s, a) in &self.support {
            amps[s.index()] = a;
        }
        StateVector::from_amplitudes(self.n_sites(), amps).expect("basis states respect the dense cap")
    }

    /// `<self|psi>` using only the support of `self`.
    pub fn overlap(&self, psi: &StateVector) -> Result<Complex64> {
        if psi.n_sites() != self.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_sites(),
                found: psi.dim(),
            });
        }
        let amps = psi.amplitudes();
        Ok(self.support.iter().map(|&(s, a)| a.conj() * amps[s.index()]).sum())
    }
}

/// `(period, 1/period, m)`: the fractional spin carried by a basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopologyLabel {
    pub period: u32,
    /// Numerator and denominator of the fractional spin.
    pub fractional_spin: (u32, u32),
    pub phase_index: u32,
}

impl fmt::Display for TopologyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.fractional_spin;
        if b == 1 {
            write!(f, "period {}, spin {a}", self.period)
        } else {
            write!(f, "period {}, spin {a}/{b}", self.period)
        }
    }
}

pub fn topology_label(state: &TIBasisState) -> TopologyLabel {
    TopologyLabel {
        period: state.period(),
        fractional_spin: (1, state.period()),
        phase_index: state.phase_index(),
    }
}

/// All `2^n` basis states ordered by canonical unit, then phase index.
pub fn build_basis(n_sites: u32) -> Result<Vec<TIBasisState>> {
    config::check_dense(n_sites)?;
    let orbits = enumerate_orbits(n_sites)?;
    let mut out = Vec::with_capacity(1 << n_sites);
    for orbit in orbits {
        for m in 0..orbit.period() {
            out.push(TIBasisState::new(orbit.clone(), m));
        }
    }
    Ok(out)
}

/// The basis state generated by the orbit of `unit` with phase index `m`.
pub fn state_from_unit(unit: BitConfig, m: u32) -> Result<TIBasisState> {
    config::check_dense(unit.n_sites())?;
    let orbit = orbit_of(unit);
    if m >= orbit.period() {
        return Err(Error::PhaseIndexOutOfRange {
            m,
            period: orbit.period(),
        });
    }
    Ok(TIBasisState::new(orbit, m))
}

pub fn state_by_id(id: StateId) -> Result<TIBasisState> {
    state_from_unit(id.unit, id.m)
}

/// Coefficients of a vector on the basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    /// One entry per basis state, in [`build_basis`] order.
    pub coefficients: Vec<(StateId, Complex64)>,
    pub residual_norm: f64,
}

impl Decomposition {
    pub fn coefficient(&self, id: StateId) -> Option<Complex64> {
        self.coefficients.iter().find(|(i, _)| *i == id).map(|&(_, c)| c)
    }

    /// Entries with magnitude above `tol`.
    pub fn nonzero(&self, tol: f64) -> impl Iterator<Item = &(StateId, Complex64)> {
        self.coefficients.iter().filter(move |(_, c)| c.norm() > tol)
    }

    pub fn coefficient_norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|(_, c)| c.norm_sqr()).sum()
    }
}

/// Expand `psi` on the basis. Accepts unnormalized vectors; the coefficient
/// norm then equals the input norm.
pub fn decompose(psi: &StateVector) -> Result<Decomposition> {
    let basis = build_basis(psi.n_sites())?;
    decompose_with(&basis, psi)
}

/// [`decompose`] against an already built basis.
pub fn decompose_with(basis: &[TIBasisState], psi: &StateVector) -> Result<Decomposition> {
    if basis.len() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: psi.dim(),
        });
    }
    let coefficients = basis
        .iter()
        .map(|b| Ok((b.id(), b.overlap(psi)?)))
        .collect::<Result<Vec<_>>>()?;
    let rebuilt = synthesize_with(basis, &coefficients)?;
    let residual_norm = (psi - &rebuilt).norm();
    Ok(Decomposition {
        coefficients,
        residual_norm,
    })
}

/// `Σ c_id |id>` over the given basis.
pub fn synthesize_with(basis: &[TIBasisState], coefficients: &[(StateId, Complex64)]) -> Result<StateVector> {
    let n = basis
        .first()
        .map(TIBasisState::n_sites)
        .ok_or(Error::EmptyInput("basis"))?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for &(id, c) in coefficients {
        let state = match basis.iter().find(|b| b.id() == id) {
            Some(b) => std::borrow::Cow::Borrowed(b),
            None => std::borrow::Cow::Owned(state_by_id(id)?),
        };
        if state.n_sites() != n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: 1 << state.n_sites(),
            });
        }
        for &(s, a) in state.support() {
            amps[s.index()] += c * a;
        }
    }
    StateVector::from_amplitudes(n, amps)
}

/// Decide whether `psi` is translation invariant by reading its basis
/// expansion: it is iff every nonzero coefficient sits on states with one
/// common eigenvalue, which is returned.
pub fn is_ti(psi: &StateVector) -> Result<(bool, Option<Complex64>)> {
    psi.require_normalized()?;
    let basis = build_basis(psi.n_sites())?;
    is_ti_with(&basis, psi)
}

pub fn is_ti_with(basis: &[TIBasisState], psi: &StateVector) -> Result<(bool, Option<Complex64>)> {
    if psi.norm_sqr() == 0.0 {
        return Err(Error::DegenerateInput("zero vector"));
    }
    let mut shared: Option<&TIBasisState> = None;
    for b in basis {
        if b.overlap(psi)?.norm() <= COEFF_CUTOFF {
            continue;
        }
        match shared {
            None => shared = Some(b),
            Some(first) if first.momentum() != b.momentum() => return Ok((false, None)),
            Some(_) => {}
        }
    }
    Ok(match shared {
        Some(b) => (true, Some(b.eigenvalue())),
        // everything below the cutoff
        None => (false, None),
    })
}
