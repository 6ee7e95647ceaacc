//! Dense state vectors over the `2^n` computational basis.
//!
//! Amplitude index `i` belongs to the [`BitConfig`] whose integer value is
//! `i`, i.e. the MSB-first reading of the site string.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};
use crate::necklace::{check_sites, BitConfig};

/// Relative tolerance for the eigenstate test.
pub const EIGEN_TOL: f64 = 1e-9;
/// Tolerance on `<psi|psi> = 1` for states treated as normalized.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: u32,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wrap a dense amplitude array. The length must be `2^n_sites` and
    /// `n_sites` must not exceed the dense cap.
    pub fn from_amplitudes(n_sites: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        config::check_dense(n_sites)?;
        let expected = 1usize << n_sites;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(Self { n_sites, amplitudes })
    }

    pub fn zeros(n_sites: u32) -> Result<Self> {
        config::check_dense(n_sites)?;
        Ok(Self {
            n_sites,
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << n_sites],
        })
    }

    /// The computational basis state `|s>`.
    pub fn basis(s: BitConfig) -> Result<Self> {
        let mut v = Self::zeros(s.n_sites())?;
        v.amplitudes[s.index()] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Parse an MSB-first bit string into a basis state.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        Self::basis(s.parse()?)
    }

    /// Normalized equal superposition over all strings.
    pub fn uniform(n_sites: u32) -> Result<Self> {
        config::check_dense(n_sites)?;
        let a = Complex64::new(1.0 / ((1u64 << n_sites) as f64).sqrt(), 0.0);
        Ok(Self {
            n_sites,
            amplitudes: vec![a; 1 << n_sites],
        })
    }

    /// `(a1 |1> + a0 |0>)^{⊗n}`.
    pub fn product(n_sites: u32, a1: Complex64, a0: Complex64) -> Result<Self> {
        let mut v = Self::zeros(n_sites)?;
        for (i, amp) in v.amplitudes.iter_mut().enumerate() {
            let ones = i.count_ones() as i32;
            *amp = a1.powi(ones) * a0.powi(n_sites as i32 - ones);
        }
        Ok(v)
    }

    /// `(|0...0> + sign |1...1>) / sqrt(2)` with `sign = ±1`.
    pub fn ghz(n_sites: u32, sign: f64) -> Result<Self> {
        let mut v = Self::zeros(n_sites)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let last = v.amplitudes.len() - 1;
        v.amplitudes[0] = Complex64::new(h, 0.0);
        v.amplitudes[last] = Complex64::new(sign * h, 0.0);
        Ok(v)
    }

    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, s: BitConfig) -> Complex64 {
        self.amplitudes[s.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn require_normalized(&self) -> Result<()> {
        let ns = self.norm_sqr();
        if ns == 0.0 {
            return Err(Error::DegenerateInput("zero vector"));
        }
        if (ns - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(ns));
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::DegenerateInput("zero vector"));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n_sites: self.n_sites,
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    /// Element-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            amplitudes: self.amplitudes.iter().map(Complex64::conj).collect(),
        }
    }

    pub(crate) fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(())
    }

    /// `Σ_i c_i |v_i>`; every vector must share the site count of the first.
    pub fn linear_combination<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, &'a StateVector)>,
    {
        let mut it = terms.into_iter();
        let (c0, v0) = it.next().ok_or(Error::EmptyInput("linear combination"))?;
        let mut acc = v0.scale(c0);
        for (c, v) in it {
            acc.check_same_space(v)?;
            for (a, b) in acc.amplitudes.iter_mut().zip(&v.amplitudes) {
                *a += c * b;
            }
        }
        Ok(acc)
    }

    /// Reads the state file format `{"n": .., "amplitudes": [[re, im], ..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("state serialization")
    }
}

impl Add for &StateVector {
    type Output = StateVector;
    fn add(self, rhs: Self) -> StateVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        StateVector {
            n_sites: self.n_sites,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&rhs.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &StateVector {
    type Output = StateVector;
    fn sub(self, rhs: Self) -> StateVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        StateVector {
            n_sites: self.n_sites,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&rhs.amplitudes)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&StateVector> for Complex64 {
    type Output = StateVector;
    fn mul(self, rhs: &StateVector) -> StateVector {
        rhs.scale(self)
    }
}

/// On-disk form of a [`StateVector`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n: u32,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&StateVector> for StateFile {
    fn from(v: &StateVector) -> Self {
        Self {
            n: v.n_sites,
            amplitudes: v.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<StateFile> for StateVector {
    type Error = Error;
    fn try_from(f: StateFile) -> Result<Self> {
        check_sites(f.n)?;
        let amps = f
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::from_amplitudes(f.n, amps)
    }
}

/// Outcome of testing `S|psi> = c|psi>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryVerdict {
    pub is_eigenstate: bool,
    pub eigenvalue: Complex64,
    pub residual: f64,
}

/// Translate every basis component by `steps` sites.
pub fn apply_translation(psi: &StateVector, steps: i64) -> StateVector {
    let n = psi.n_sites;
    let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for (i, &a) in psi.amplitudes.iter().enumerate() {
        let t = BitConfig::new_unchecked(n, i as u32).translate(steps);
        out[t.index()] = a;
    }
    StateVector {
        n_sites: n,
        amplitudes: out,
    }
}

/// `<psi|phi>`, conjugate-linear in `psi`.
pub fn inner(psi: &StateVector, phi: &StateVector) -> Result<Complex64> {
    psi.check_same_space(phi)?;
    Ok(psi
        .amplitudes
        .iter()
        .zip(&phi.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Apply `σ^x` on every site.
pub fn global_flip(psi: &StateVector) -> StateVector {
    let last = psi.dim() - 1;
    let amplitudes = (0..psi.dim()).map(|i| psi.amplitudes[last ^ i]).collect();
    StateVector {
        n_sites: psi.n_sites,
        amplitudes,
    }
}

/// Test whether `psi` is an eigenvector of translation by `steps` sites.
pub fn check_symmetry(psi: &StateVector, steps: i64) -> Result<SymmetryVerdict> {
    let norm_sqr = psi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::DegenerateInput("zero vector"));
    }
    let phi = apply_translation(psi, steps);
    let c = inner(psi, &phi)? / norm_sqr;
    let residual = (&phi - &psi.scale(c)).norm();
    let is_eigenstate = residual <= EIGEN_TOL * norm_sqr.sqrt() && (c.norm() - 1.0).abs() <= EIGEN_TOL;
    Ok(SymmetryVerdict {
        is_eigenstate,
        eigenvalue: c,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w1_3() -> StateVector {
        let s = 1.0 / 3f64.sqrt();
        let mut v = StateVector::zeros(3).unwrap();
        for i in [4, 2, 1] {
            v.amplitudes[i] = c(s, 0.0);
        }
        v
    }

    // written out from the printed amplitudes (1, e^{i2π/3}, e^{i4π/3}) on 100, 010, 001
    fn t1_3() -> StateVector {
        let s = 1.0 / 3f64.sqrt();
        let mut v = StateVector::zeros(3).unwrap();
        v.amplitudes[4] = c(s, 0.0);
        v.amplitudes[2] = Complex64::from_polar(s, 2.0 * PI / 3.0);
        v.amplitudes[1] = Complex64::from_polar(s, 4.0 * PI / 3.0);
        v
    }

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn translation_examples() {
        let t = apply_translation(&StateVector::from_bitstring("100").unwrap(), 1);
        assert_eq!(t, StateVector::from_bitstring("010").unwrap());

        let u = StateVector::uniform(4).unwrap();
        assert_eq!(apply_translation(&u, 3), u);

        let t1 = t1_3();
        let expected = t1.scale(Complex64::from_polar(1.0, -2.0 * PI / 3.0));
        assert!(close(&apply_translation(&t1, 1), &expected, 1e-14));
    }

    #[test]
    fn symmetry_examples() {
        let v = check_symmetry(&w1_3(), 1).unwrap();
        assert!(v.is_eigenstate);
        assert!((v.eigenvalue - c(1.0, 0.0)).norm() < 1e-12);

        let v = check_symmetry(&t1_3(), 1).unwrap();
        assert!(v.is_eigenstate);
        assert!((v.eigenvalue - Complex64::from_polar(1.0, -2.0 * PI / 3.0)).norm() < 1e-12);

        // |100> -> |010>: c = 0 and the residual is the full norm
        let v = check_symmetry(&StateVector::from_bitstring("100").unwrap(), 1).unwrap();
        assert!(!v.is_eigenstate);
        assert!(v.residual > 0.5);
        assert!((v.residual - 1.0).abs() < 1e-14);

        assert!(matches!(
            check_symmetry(&StateVector::zeros(3).unwrap(), 1),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn inner_examples() {
        let z = StateVector::from_bitstring("000").unwrap();
        assert_eq!(inner(&z, &z).unwrap(), c(1.0, 0.0));
        assert!(inner(&w1_3(), &t1_3()).unwrap().norm() < 1e-15);
        let e = StateVector::from_bitstring("100").unwrap();
        assert!((inner(&e, &w1_3()).unwrap() - c(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-15);
        let four = StateVector::zeros(4).unwrap();
        assert!(matches!(inner(&z, &four), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn flip_examples() {
        let w2 = global_flip(&w1_3());
        for s in ["011", "101", "110"] {
            assert!((w2.amplitude(s.parse().unwrap()).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(
            global_flip(&StateVector::from_bitstring("000").unwrap()),
            StateVector::from_bitstring("111").unwrap()
        );
        let t = t1_3();
        assert_eq!(global_flip(&global_flip(&t)), t);
    }

    #[test]
    fn state_file_round_trip_and_rejects_bad_length() {
        let t = t1_3();
        let back = StateVector::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let bad = r#"{"n": 3, "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#;
        assert!(matches!(
            StateVector::from_json(bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn product_and_ghz() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = StateVector::product(2, c(h, 0.0), c(h, 0.0)).unwrap();
        assert!(p.is_normalized());
        assert!((p.amplitudes[0].re - 0.5).abs() < 1e-15);
        let g = StateVector::ghz(3, -1.0).unwrap();
        assert!(g.is_normalized());
        assert!((g.amplitudes[7].re + h).abs() < 1e-15);
    }
}
