//! Self-test harness: runs the library's invariants for one chain length and
//! reports a pass/fail line per check.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::Result;
use crate::hamiltonian::{apply, diagonalize, expectation, matrix_element, HamiltonianSpec};
use crate::hilbert::{apply_translation, check_symmetry, global_flip, inner, StateVector};
use crate::necklace::{enumerate_orbits, orbit_of, partition_classes, BitConfig};
use crate::tibasis::{build_basis, decompose_with, is_ti_with, state_from_unit, TIBasisState};
use crate::witness::{separable_expectation, separable_expectation_explicit, witness_value, SeparableTIState};
use crate::witness::{WernerState, WitnessInput, MAX_DENSITY_SITES};

const SEED: u64 = 0x005e_ed71;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: u32,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn random_state(n: u32, rng: &mut impl Rng) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(n, amps)
        .and_then(|v| v.normalized())
        .expect("random state within cap")
}

/// Random normalized combination of basis states sharing one eigenvalue.
pub fn random_ti_state(basis: &[TIBasisState], rng: &mut impl Rng) -> StateVector {
    let n = basis[0].n_sites();
    let q = rng.gen_range(0..n);
    let sector: Vec<&TIBasisState> = basis.iter().filter(|b| b.momentum() == q).collect();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for b in sector {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for &(s, a) in b.support() {
            amps[s.index()] += c * a;
        }
    }
    StateVector::from_amplitudes(n, amps)
        .and_then(|v| v.normalized())
        .expect("sector is never empty")
}

/// Translation residual test with `c = <ψ|T|ψ>`.
pub fn direct_ti_test(psi: &StateVector, tol: f64) -> bool {
    let t = apply_translation(psi, 1);
    let c = inner(psi, &t).expect("same space");
    (&t - &psi.scale(c)).norm() <= tol
}

fn naive_orbit(s: BitConfig) -> (String, u32) {
    let text = s.to_string();
    let n = text.len();
    let mut rotations: Vec<String> = (0..n)
        .map(|j| format!("{}{}", &text[n - j..], &text[..n - j]))
        .collect();
    let period = (1..=n).find(|&j| rotations[j % n] == text).unwrap() as u32;
    rotations.sort();
    (rotations[0].clone(), period)
}

struct Suite {
    checks: Vec<CheckOutcome>,
}

impl Suite {
    fn record(&mut self, name: &'static str, outcome: std::result::Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckOutcome { name, passed, detail });
    }
}

fn ensure(cond: bool, ok: String, fail: String) -> std::result::Result<String, String> {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

/// Run every invariant that is affordable at `n` sites.
pub fn run_invariants(n: u32) -> Result<VerifyReport> {
    let mut rng = StdRng::seed_from_u64(SEED ^ n as u64);
    let mut suite = Suite { checks: Vec::new() };
    let orbits = enumerate_orbits(n)?;
    let basis = build_basis(n)?;

    // necklace
    let total: u64 = orbits.iter().map(|o| o.period() as u64).sum();
    suite.record(
        "period-sum",
        ensure(total == 1 << n, format!("{total}"), format!("{total} != 2^{n}")),
    );

    let bad = orbits.iter().filter(|o| !n.is_multiple_of(o.period())).count();
    suite.record(
        "period-divides-n",
        ensure(bad == 0, "ok".into(), format!("{bad} orbits")),
    );

    let inverse_ok = (0..(1u32 << n).min(4096)).all(|b| {
        let s = BitConfig::new_unchecked(n, b);
        (0..n as i64).all(|j| s.translate(j).translate(n as i64 - j) == s)
    });
    suite.record(
        "translate-inverse",
        ensure(inverse_ok, "ok".into(), "round trip failed".into()),
    );

    if n <= 12 {
        let mismatch = (0..1u32 << n)
            .map(|b| BitConfig::new_unchecked(n, b))
            .filter(|&s| {
                let o = orbit_of(s);
                let (rep, period) = naive_orbit(s);
                o.representative().to_string() != rep || o.period() != period
            })
            .count();
        suite.record(
            "orbit-oracle",
            ensure(
                mismatch == 0,
                format!("{} strings", 1u32 << n),
                format!("{mismatch} mismatches"),
            ),
        );
    }

    let classes = partition_classes(n)?;
    let closed = classes.iter().all(|c| {
        c.orbit_reps
            .iter()
            .all(|r| c.orbit_reps.contains(&r.complement().canonical()))
    });
    suite.record(
        "classes-closed-under-flip",
        ensure(closed, format!("{} classes", classes.len()), "open class".into()),
    );

    // hilbert
    let psi = random_state(n, &mut rng);
    let phi = random_state(n, &mut rng);
    let full_turn = apply_translation(&psi, n as i64);
    suite.record(
        "translation-order-n",
        ensure(full_turn == psi, "ok".into(), "T^n != 1".into()),
    );
    let before = inner(&psi, &phi)?;
    let after = inner(&apply_translation(&psi, 1), &apply_translation(&phi, 1))?;
    suite.record(
        "translation-unitary",
        ensure(
            (before - after).norm() <= 1e-12,
            "ok".into(),
            format!("{}", (before - after).norm()),
        ),
    );
    let a = global_flip(&apply_translation(&psi, 1));
    let b = apply_translation(&global_flip(&psi), 1);
    suite.record(
        "flip-commutes",
        ensure(a == b, "ok".into(), "flip and translation differ".into()),
    );

    // tibasis
    let mut gram_dev: f64 = 0.0;
    let vectors: Vec<StateVector> = if n <= 10 {
        basis.iter().map(TIBasisState::vector).collect()
    } else {
        Vec::new()
    };
    for (i, bi) in basis.iter().enumerate() {
        if n <= 10 {
            for (j, vj) in vectors.iter().enumerate() {
                let g = bi.overlap(vj)?;
                let e = if i == j { 1.0 } else { 0.0 };
                gram_dev = gram_dev.max((g - Complex64::new(e, 0.0)).norm());
            }
        } else {
            let g = bi.overlap(&bi.vector())?;
            gram_dev = gram_dev.max((g - Complex64::new(1.0, 0.0)).norm());
        }
    }
    suite.record(
        "basis-orthonormal",
        ensure(
            basis.len() == 1 << n && gram_dev <= 1e-12,
            format!("{} states, deviation {gram_dev:.1e}", basis.len()),
            format!("{} states, deviation {gram_dev:.1e}", basis.len()),
        ),
    );

    let mut worst_eig: f64 = 0.0;
    let mut quantized = true;
    for b in basis.iter().take(512) {
        let v = check_symmetry(&b.vector(), 1)?;
        worst_eig = worst_eig.max((v.eigenvalue - b.eigenvalue()).norm());
        quantized &= v.is_eigenstate && (b.eigenvalue().powu(n) - Complex64::new(1.0, 0.0)).norm() <= 1e-9;
    }
    suite.record(
        "eigenvalues-quantized",
        ensure(
            quantized && worst_eig <= 1e-10,
            format!("max deviation {worst_eig:.1e}"),
            format!("max deviation {worst_eig:.1e}"),
        ),
    );

    let mut conj_ok = true;
    for b in basis.iter().take(256) {
        let v = b.vector();
        let fwd = check_symmetry(&v, 1)?.eigenvalue;
        let back = check_symmetry(&v, -1)?.eigenvalue;
        conj_ok &= (fwd.conj() - back).norm() <= 1e-10;
        let flipped = global_flip(&v);
        let partner = state_from_unit(b.unit().complement(), b.phase_index())?;
        conj_ok &= (partner.overlap(&flipped)?.norm() - 1.0).abs() <= 1e-10;
    }
    suite.record(
        "chirality-and-flip-covariance",
        ensure(conj_ok, "ok".into(), "eigenvalue pairing broken".into()),
    );

    let d = decompose_with(&basis, &psi)?;
    let parseval = (d.coefficient_norm_sqr() + d.residual_norm.powi(2) - psi.norm_sqr()).abs();
    suite.record(
        "decomposition-round-trip",
        ensure(
            d.residual_norm <= 1e-10 && parseval <= 1e-10,
            format!("residual {:.1e}", d.residual_norm),
            format!("residual {:.1e}, parseval {parseval:.1e}", d.residual_norm),
        ),
    );

    let samples = if n <= 8 { 50 } else { 5 };
    let mut disagreements = 0;
    for k in 0..samples {
        let v = if k % 2 == 0 {
            random_ti_state(&basis, &mut rng)
        } else {
            random_state(n, &mut rng)
        };
        let (ti, _) = is_ti_with(&basis, &v)?;
        if ti != direct_ti_test(&v, 1e-9) {
            disagreements += 1;
        }
    }
    suite.record(
        "is-ti-oracle",
        ensure(
            disagreements == 0,
            format!("{samples} states"),
            format!("{disagreements} disagreements"),
        ),
    );

    // hamiltonian
    let specs = ["h0", "h1", "h2", "hprime:0.7", "hnl", "h0+h1+hprime:-2pi/3"];
    let mut cov_err: f64 = 0.0;
    let mut herm_err: f64 = 0.0;
    for text in specs {
        let h = HamiltonianSpec::parse(n, text)?;
        let lhs = apply(&h, &apply_translation(&psi, 1))?;
        let rhs = apply_translation(&apply(&h, &psi)?, 1);
        cov_err = cov_err.max((&lhs - &rhs).norm());
        let x = matrix_element(&h, &phi, &psi)?;
        let y = matrix_element(&h, &psi, &phi)?;
        herm_err = herm_err.max((x - y.conj()).norm());
    }
    suite.record(
        "translation-covariance",
        ensure(cov_err <= 1e-10, format!("{cov_err:.1e}"), format!("{cov_err:.1e}")),
    );
    suite.record(
        "hermiticity",
        ensure(herm_err <= 1e-10, format!("{herm_err:.1e}"), format!("{herm_err:.1e}")),
    );

    let mut orbit_err: f64 = 0.0;
    for r in 1..=3 {
        let h = HamiltonianSpec::zz(n, r)?;
        for b in basis.iter().take(256) {
            let e = expectation(&h, &b.vector())?;
            for &s in b.orbit().members() {
                orbit_err = orbit_err.max((e - h.zz_energy(s)).abs());
            }
        }
    }
    suite.record(
        "orbit-constancy",
        ensure(
            orbit_err <= 1e-10,
            format!("{orbit_err:.1e}"),
            format!("{orbit_err:.1e}"),
        ),
    );

    let mut chiral_err: f64 = 0.0;
    for phi_v in [0.3, 2.0 * PI / 3.0, 1.9] {
        let plus = HamiltonianSpec::hprime(n, phi_v)?;
        let minus = HamiltonianSpec::hprime(n, -phi_v)?;
        for b in basis.iter().filter(|b| b.period() > 2).take(64) {
            let v = b.vector();
            chiral_err = chiral_err.max((expectation(&minus, &v)? - expectation(&plus, &v.conj())?).abs());
        }
    }
    suite.record(
        "chirality-conjugation",
        ensure(
            chiral_err <= 1e-10,
            format!("{chiral_err:.1e}"),
            format!("{chiral_err:.1e}"),
        ),
    );

    if n <= 8 {
        let h = HamiltonianSpec::parse(n, "h0+hprime:0.4")?;
        let r = diagonalize(&h)?;
        let blocks = r.magnetization_blocks.as_ref().expect("weight conserved");
        let mut joined: Vec<f64> = blocks.values().flatten().copied().collect();
        joined.sort_by(f64::total_cmp);
        let err = joined
            .iter()
            .zip(&r.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let count: usize = r.degeneracies.iter().map(|d| d.1).sum();
        suite.record(
            "weight-blocks-reassemble",
            ensure(
                err <= 1e-10 && count == 1 << n,
                format!("{} levels", r.degeneracies.len()),
                format!("error {err:.1e}, count {count}"),
            ),
        );
    }

    // witness
    let mut sep_err: f64 = 0.0;
    for _ in 0..20 {
        let a: f64 = rng.gen_range(0.0..1.0);
        let z1 = Complex64::from_polar(a, rng.gen_range(-PI..PI));
        let z0 = Complex64::from_polar(1.0 - a, rng.gen_range(-PI..PI));
        let s = SeparableTIState::new(n, z1, z0)?;
        for r in (1..=3).filter(|r| r % n != 0) {
            let h = HamiltonianSpec::zz(n, r)?;
            sep_err = sep_err.max((separable_expectation(&s, &h)? - separable_expectation_explicit(&s, &h)?).abs());
        }
    }
    suite.record(
        "separable-closed-form",
        ensure(sep_err <= 1e-10, format!("{sep_err:.1e}"), format!("{sep_err:.1e}")),
    );

    if n <= MAX_DENSITY_SITES {
        let h = HamiltonianSpec::h0(n)?;
        let mut err: f64 = 0.0;
        for b in basis.iter().take(16) {
            let v = b.vector();
            let pure = -expectation(&h, &v)?;
            for p in [0.0, 0.25, 0.7, 1.0] {
                let r = witness_value(WitnessInput::Werner(&WernerState::new(p, v.clone())?), &h)?;
                err = err.max((r.expectation_neg_h - p * pure).abs());
                err = err.max((r.explicit_trace.unwrap_or(f64::NAN) - r.expectation_neg_h).abs());
            }
        }
        suite.record(
            "werner-identity",
            ensure(err <= 1e-10, format!("{err:.1e}"), format!("{err:.1e}")),
        );
    }

    let failed = suite.checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport {
        n,
        passed: suite.checks.len() - failed,
        failed,
        checks: suite.checks,
    })
}
