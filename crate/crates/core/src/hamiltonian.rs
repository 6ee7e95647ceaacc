//! Periodic spin-chain Hamiltonians built from three kinds of term:
//!
//! * `ZZ(r)`: `-Σ_n σ^z_n σ^z_{n+r}` for `r ∈ {1, 2, 3}` (`h0`, `h1`, `h2`),
//! * `HOP(φ)`: `-½ Σ_n (e^{iφ} σ^+_n σ^-_{n+1} + e^{-iφ} σ^-_n σ^+_{n+1})`,
//! * `GLOBALFLIP`: `+⊗_n σ^x_n`.
//!
//! Site indices wrap modulo `n`. `σ^z|1> = +|1>`, `σ^z|0> = -|0>` and
//! `σ^+ = |1><0|`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::config;
use crate::error::{Error, Result};
use crate::hilbert::{inner, StateVector};
use crate::necklace::BitConfig;
use crate::tibasis::{build_basis, StateId, TIBasisState};

/// Largest site count accepted by [`diagonalize`].
pub const MAX_DIAG_SITES: u32 = 12;
/// Eigenvalues closer than this are reported as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Off-diagonal magnitude above which [`mixing_report`] flags mixing.
pub const MIXING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    /// Ising coupling between sites `r` apart, coefficient −1.
    Zz { range: u32 },
    /// Phase-detuned hopping, coefficient −1/2.
    Hop { phi: f64 },
    /// Product of `σ^x` over all sites, coefficient +1.
    GlobalFlip,
}

impl Term {
    fn conserves_weight(&self) -> bool {
        !matches!(self, Term::GlobalFlip)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zz { range } => write!(f, "h{}", range - 1),
            Term::Hop { phi } => write!(f, "hprime:{phi}"),
            Term::GlobalFlip => f.write_str("hnl"),
        }
    }
}

/// A sum of [`Term`]s on an `n`-site ring.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    n_sites: u32,
    terms: Vec<Term>,
}

impl HamiltonianSpec {
    pub fn new(n_sites: u32, terms: Vec<Term>) -> Result<Self> {
        config::check_dense(n_sites)?;
        if terms.is_empty() {
            return Err(Error::EmptyInput("hamiltonian terms"));
        }
        for t in &terms {
            match *t {
                Term::Zz { range } if !(1..=3).contains(&range) => {
                    return Err(Error::UnsupportedHamiltonian(format!(
                        "ZZ range {range} (expected 1..=3)"
                    )))
                }
                Term::Hop { phi } if !phi.is_finite() => {
                    return Err(Error::UnsupportedHamiltonian(format!("hopping phase {phi}")))
                }
                _ => {}
            }
        }
        Ok(Self { n_sites, terms })
    }

    /// `-Σ σ^z_n σ^z_{n+1}`.
    pub fn h0(n: u32) -> Result<Self> {
        Self::zz(n, 1)
    }

    /// `-Σ σ^z_n σ^z_{n+2}`.
    pub fn h1(n: u32) -> Result<Self> {
        Self::zz(n, 2)
    }

    /// `-Σ σ^z_n σ^z_{n+3}`.
    pub fn h2(n: u32) -> Result<Self> {
        Self::zz(n, 3)
    }

    pub fn zz(n: u32, range: u32) -> Result<Self> {
        Self::new(n, vec![Term::Zz { range }])
    }

    pub fn hprime(n: u32, phi: f64) -> Result<Self> {
        Self::new(n, vec![Term::Hop { phi }])
    }

    pub fn hnl(n: u32) -> Result<Self> {
        Self::new(n, vec![Term::GlobalFlip])
    }

    /// Parses `h0`, `h1`, `h2`, `hprime:<angle>`, `hnl` and `+`-joined
    /// sums such as `h0+h1`. Angles accept forms like `0.5`, `-2pi/3`.
    pub fn parse(n_sites: u32, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for part in text.split('+') {
            let part = part.trim();
            let term = match part.to_ascii_lowercase().as_str() {
                "h0" => Term::Zz { range: 1 },
                "h1" => Term::Zz { range: 2 },
                "h2" => Term::Zz { range: 3 },
                "hnl" => Term::GlobalFlip,
                p if p.starts_with("hprime:") => Term::Hop {
                    phi: parse_angle(&part["hprime:".len()..])?,
                },
                "" => return Err(Error::Parse(format!("empty term in {text:?}"))),
                _ => return Err(Error::Parse(format!("unknown hamiltonian term {part:?}"))),
            };
            terms.push(term);
        }
        Self::new(n_sites, terms)
    }

    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Total number of ones is conserved by every term.
    pub fn conserves_weight(&self) -> bool {
        self.terms.iter().all(Term::conserves_weight)
    }

    /// The single ZZ range if the spec is exactly one Ising term.
    pub fn single_zz_range(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [Term::Zz { range }] => Some(*range),
            _ => None,
        }
    }

    /// Diagonal ZZ energy of a basis string.
    pub fn zz_energy(&self, s: BitConfig) -> f64 {
        self.terms
            .iter()
            .map(|t| match *t {
                Term::Zz { range } => zz_value(s, range),
                _ => 0.0,
            })
            .sum()
    }

    /// Calls `f(j, h_ji)` for each nonzero `<j|H|i>`. Entries for the same
    /// `j` may be reported more than once and must be summed.
    pub fn for_each_element<F: FnMut(u32, Complex64)>(&self, i: u32, mut f: F) {
        let n = self.n_sites;
        let s = BitConfig::new_unchecked(n, i);
        let mut diag = 0.0;
        for t in &self.terms {
            match *t {
                Term::Zz { range } => diag += zz_value(s, range),
                Term::Hop { phi } => {
                    let fwd = Complex64::from_polar(-0.5, phi);
                    let bwd = fwd.conj();
                    for site in 1..=n {
                        let next = site % n + 1;
                        let a = 1u32 << (n - site);
                        let b = 1u32 << (n - next);
                        let on_a = i & a != 0;
                        let on_b = i & b != 0;
                        if on_a == on_b {
                            continue;
                        }
                        let j = i ^ a ^ b;
                        if on_b {
                            // σ^+_site σ^-_next moves the excitation back a site
                            f(j, fwd);
                        } else {
                            f(j, bwd);
                        }
                    }
                }
                Term::GlobalFlip => f(!i & ((1u32 << n) - 1), Complex64::new(1.0, 0.0)),
            }
        }
        if diag != 0.0 {
            f(i, Complex64::new(diag, 0.0));
        }
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn dense_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_sites;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            self.for_each_element(i as u32, |j, v| m[(j as usize, i)] += v);
        }
        m
    }

    fn check_state(&self, psi: &StateVector) -> Result<()> {
        if psi.n_sites() != self.n_sites {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_sites,
                found: psi.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for HamiltonianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn zz_value(s: BitConfig, range: u32) -> f64 {
    let n = s.n_sites();
    let anti = (s.bits() ^ s.translate(range as i64).bits()).count_ones();
    // aligned bonds give -1, anti-aligned +1
    -(n as f64 - 2.0 * anti as f64)
}

/// Parse an angle in radians: plain decimals, or multiples and fractions of
/// `pi` such as `pi`, `-pi/2`, `2pi/3`, `2*pi/3`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("invalid angle {text:?}"));
    let t = text.trim().to_ascii_lowercase();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim().parse::<f64>().map_err(|_| bad())?)),
        None => (t.as_str(), None),
    };
    let value = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        c * PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let value = match den {
        Some(0.0) => return Err(bad()),
        Some(d) => value / d,
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// `H|psi>` without materializing the matrix.
pub fn apply(spec: &HamiltonianSpec, psi: &StateVector) -> Result<StateVector> {
    spec.check_state(psi)?;
    let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for (i, &a) in psi.amplitudes().iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        spec.for_each_element(i as u32, |j, v| out[j as usize] += v * a);
    }
    StateVector::from_amplitudes(psi.n_sites(), out)
}

/// `<psi|H|psi>` for a normalized `psi`.
pub fn expectation(spec: &HamiltonianSpec, psi: &StateVector) -> Result<f64> {
    spec.check_state(psi)?;
    psi.require_normalized()?;
    let e = inner(psi, &apply(spec, psi)?)?;
    Ok(e.re)
}

/// `<phi|H|psi>`.
pub fn matrix_element(spec: &HamiltonianSpec, phi: &StateVector, psi: &StateVector) -> Result<Complex64> {
    spec.check_state(phi)?;
    inner(phi, &apply(spec, psi)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    /// All `2^n` eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `(value, multiplicity)` per level, ascending.
    pub degeneracies: Vec<(f64, usize)>,
    /// Sub-spectrum per number of ones, present when the spec conserves it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub magnetization_blocks: Option<BTreeMap<u32, Vec<f64>>>,
}

/// Group sorted values into levels no wider than [`DEGENERACY_TOL`] between
/// neighbours.
pub fn group_levels(sorted: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((sum, count, last)) if (v - *last).abs() <= DEGENERACY_TOL => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter()
        .map(|(sum, count, _)| {
            let mean = sum / count as f64;
            // avoid printing -0
            (if mean == 0.0 { 0.0 } else { mean }, count)
        })
        .collect()
}

fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

/// Full spectrum.
///
/// Every term commutes with translation, so the matrix is block diagonal in
/// the translation-invariant basis with one block per eigenvalue of
/// translation; weight-conserving specs are further split by number of ones.
/// Each block is diagonalized densely.
pub fn diagonalize(spec: &HamiltonianSpec) -> Result<SpectrumReport> {
    config::check_range(spec.n_sites, MAX_DIAG_SITES)?;
    let n = spec.n_sites;
    let by_weight = spec.conserves_weight();
    let basis = build_basis(n)?;

    // sector key: (momentum, weight or 0)
    let mut sectors: BTreeMap<(u32, u32), Vec<&TIBasisState>> = BTreeMap::new();
    for b in &basis {
        let w = if by_weight { b.unit().weight() } else { 0 };
        sectors.entry((b.momentum(), w)).or_default().push(b);
    }

    let mut all = Vec::with_capacity(basis.len());
    let mut blocks: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for ((_, w), states) in &sectors {
        let evs = hermitian_eigenvalues(sector_matrix(spec, states));
        if by_weight {
            blocks.entry(*w).or_default().extend_from_slice(&evs);
        }
        all.extend(evs);
    }
    all.sort_by(f64::total_cmp);
    for v in blocks.values_mut() {
        v.sort_by(f64::total_cmp);
    }
    Ok(SpectrumReport {
        degeneracies: group_levels(&all),
        eigenvalues: all,
        magnetization_blocks: by_weight.then_some(blocks),
    })
}

/// `<a|H|b>` over states sharing one translation eigenvalue. Within such a
/// sector each string belongs to at most one state.
fn sector_matrix(spec: &HamiltonianSpec, states: &[&TIBasisState]) -> DMatrix<Complex64> {
    let dim = states.len();
    let mut lookup: HashMap<u32, (usize, Complex64)> = HashMap::new();
    for (a, st) in states.iter().enumerate() {
        for &(s, amp) in st.support() {
            lookup.insert(s.bits(), (a, amp));
        }
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (b, st) in states.iter().enumerate() {
        for &(s, amp_b) in st.support() {
            spec.for_each_element(s.bits(), |j, v| {
                if let Some(&(a, amp_a)) = lookup.get(&j) {
                    m[(a, b)] += amp_a.conj() * v * amp_b;
                }
            });
        }
    }
    m
}

/// Spectrum of the full dense matrix, without any block structure.
pub fn diagonalize_dense(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    config::check_range(spec.n_sites, MAX_DIAG_SITES)?;
    let mut evs = hermitian_eigenvalues(spec.dense_matrix());
    evs.sort_by(f64::total_cmp);
    Ok(evs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub phi: f64,
    pub energies: Vec<(StateId, f64)>,
    /// Every state within [`DEGENERACY_TOL`] of the minimum; more than one
    /// entry means a tie.
    pub argmin: Vec<StateId>,
    /// Gap between the minimum and the next distinct energy, if any.
    pub margin: Option<f64>,
}

/// `H'(φ)` energies of each state at each `φ`.
pub fn chirality_scan(states: &[TIBasisState], phis: &[f64]) -> Result<Vec<ScanRow>> {
    let first = states.first().ok_or(Error::EmptyInput("states"))?;
    if phis.is_empty() {
        return Err(Error::EmptyInput("phis"));
    }
    let n = first.n_sites();
    let vectors = states
        .iter()
        .map(|s| {
            if s.n_sites() != n {
                Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    found: 1 << s.n_sites(),
                })
            } else {
                Ok(s.vector())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    phis.iter()
        .map(|&phi| {
            let h = HamiltonianSpec::hprime(n, phi)?;
            let energies = states
                .iter()
                .zip(&vectors)
                .map(|(s, v)| Ok((s.id(), expectation(&h, v)?)))
                .collect::<Result<Vec<_>>>()?;
            let min = energies.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
            let argmin = energies
                .iter()
                .filter(|e| e.1 - min <= DEGENERACY_TOL)
                .map(|e| e.0)
                .collect();
            let margin = energies
                .iter()
                .map(|e| e.1 - min)
                .filter(|&d| d > DEGENERACY_TOL)
                .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))));
            Ok(ScanRow {
                phi,
                energies,
                argmin,
                margin,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub states: Vec<StateId>,
    /// `matrix[i][j] = <ψ_i|H|ψ_j>`.
    pub matrix: Vec<Vec<Complex64>>,
    pub max_off_diagonal: f64,
}

impl MixingReport {
    pub fn mixes(&self) -> bool {
        self.max_off_diagonal > MIXING_TOL
    }
}

/// Matrix of `H` restricted to the given basis states.
pub fn mixing_report(spec: &HamiltonianSpec, states: &[TIBasisState]) -> Result<MixingReport> {
    if states.is_empty() {
        return Err(Error::EmptyInput("states"));
    }
    let vectors: Vec<StateVector> = states.iter().map(TIBasisState::vector).collect();
    let images = vectors.iter().map(|v| apply(spec, v)).collect::<Result<Vec<_>>>()?;
    let matrix = vectors
        .iter()
        .map(|v| images.iter().map(|hv| inner(v, hv)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut max_off_diagonal: f64 = 0.0;
    for (i, row) in matrix.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                max_off_diagonal = max_off_diagonal.max(x.norm());
            }
        }
    }
    Ok(MixingReport {
        states: states.iter().map(TIBasisState::id).collect(),
        matrix,
        max_off_diagonal,
    })
}
