//! Translationally invariant states of qubit rings.
//!
//! The crate builds the complete orthonormal basis of eigenstates of cyclic
//! translation on `n` qubits, labels each state by its cyclic unit, period
//! and quantized translation eigenvalue, and evaluates the periodic Ising,
//! phase-detuned hopping and global-flip Hamiltonians on it.
//!
//! ```
//! use tistates::{build_basis, HamiltonianSpec, expectation};
//!
//! let basis = build_basis(3)?;
//! assert_eq!(basis.len(), 8);
//!
//! let h0 = HamiltonianSpec::h0(3)?;
//! let energies: Vec<f64> = basis
//!     .iter()
//!     .map(|s| expectation(&h0, &s.vector()))
//!     .collect::<Result<_, _>>()?;
//! assert_eq!(energies.iter().filter(|&&e| (e + 3.0).abs() < 1e-12).count(), 2);
//! # Ok::<(), tistates::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod config;
mod error;
pub mod hamiltonian;
pub mod hilbert;
pub mod necklace;
pub mod tables;
pub mod tibasis;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use hamiltonian::{
    apply, chirality_scan, diagonalize, expectation, mixing_report, HamiltonianSpec, SpectrumReport, Term,
};
pub use hilbert::{apply_translation, check_symmetry, global_flip, inner, StateVector, SymmetryVerdict};
pub use necklace::{
    enumerate_orbits, orbit_of, partition_classes, period_of_string, translate, BitConfig, CyclicOrbit, SloccClass,
};
pub use tibasis::{
    build_basis, decompose, is_ti, state_from_unit, topology_label, Decomposition, StateId, TIBasisState, TopologyLabel,
};
pub use witness::{
    counterexample_report, e_sep_baseline, separable_expectation, witness_value, SeparableTIState, Verdict,
    WernerState, WitnessInput, WitnessResult,
};

pub use num_complex::Complex64;

// Each chapter of the guide becomes an empty module whose docs are the
// chapter text, so `cargo test --doc` runs every listing in the book.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cyclic-units.md")]
    mod cyclic_units {}
    #[doc = include_str!("../../../book/src/translation.md")]
    mod translation {}
    #[doc = include_str!("../../../book/src/ti-basis.md")]
    mod ti_basis {}
    #[doc = include_str!("../../../book/src/hamiltonians.md")]
    mod hamiltonians {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
