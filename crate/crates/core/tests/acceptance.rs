//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tistates::hamiltonian::MixingReport;
use tistates::tables::{check_table1, emit_table1, emit_table2};
use tistates::tibasis::state_by_id;
use tistates::verify::{direct_ti_test, random_state, random_ti_state};
use tistates::witness::separable_expectation_explicit;
use tistates::{
    build_basis, check_symmetry, counterexample_report, decompose, e_sep_baseline, enumerate_orbits, expectation,
    global_flip, is_ti, mixing_report, partition_classes, separable_expectation, BitConfig, Complex64, HamiltonianSpec,
    SeparableTIState, StateId, StateVector,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn id(text: &str) -> StateId {
    text.parse().unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

fn state(n: u32, terms: &[(&str, Complex64)]) -> StateVector {
    let mut amps = vec![c(0.0, 0.0); 1 << n];
    for (s, a) in terms {
        amps[s.parse::<BitConfig>().unwrap().index()] = *a;
    }
    StateVector::from_amplitudes(n, amps).unwrap().normalized().unwrap()
}

fn table1() -> Outcome {
    let start = Instant::now();
    let blocks = emit_table1(&[3, 4, 5, 6], &[1, 2, 3], false).map_err(|e| e.to_string())?;
    let printed = blocks
        .iter()
        .flat_map(|b| &b.rows)
        .flat_map(|r| &r.cells)
        .filter(|c| c.printed.is_some())
        .count();
    let mismatches = check_table1(&blocks);
    let elapsed = start.elapsed().as_secs_f64();
    ensure(
        mismatches.is_empty() && printed > 0 && elapsed < 1.0,
        format!(
            "{printed} printed cells, {} mismatches, {elapsed:.3}s",
            mismatches.len()
        ),
    )
}

fn table2() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 3..=6 {
        let t = emit_table2(n).map_err(|e| e.to_string())?;
        ok &= t.check();
        let hnl: Vec<String> = t.rows.iter().map(|r| format!("{}={:+}", r.state, r.hnl)).collect();
        lines.push(format!("n={n} [{}]", hnl.join(" ")));
    }
    ensure(ok, format!("{}; |<h0>| = n on all rows", lines.join("; ")))
}

fn eigen_fixtures() -> Outcome {
    let third = 2.0 * PI / 3.0;
    let t1_3 = state(
        3,
        &[("100", c(1.0, 0.0)), ("010", cis(third)), ("001", cis(2.0 * third))],
    );
    // The flipped state with the opposite orientation to T_1.
    let t2_3 = global_flip(&t1_3.conj());
    let flip_t1 = global_flip(&t1_3);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let ghz1 = state(4, &[("1010", c(r2, 0.0)), ("0101", c(r2, 0.0))]);
    let ghz2 = state(4, &[("1010", c(r2, 0.0)), ("0101", c(-r2, 0.0))]);
    let quarter = |a: &str, b: &str, cc: &str, d: &str| {
        state(
            4,
            &[(a, c(1.0, 0.0)), (b, cis(PI / 2.0)), (cc, cis(PI)), (d, cis(1.5 * PI))],
        )
    };
    let t1_4 = quarter("1000", "0100", "0010", "0001");
    let t2_4 = global_flip(&t1_4);
    let t3_4 = quarter("1100", "0110", "0011", "1001");
    let minus_i = c(0.0, -1.0);
    let cases = [
        ("T_1(3)", t1_3, cis(-third)),
        ("T_2(3)", t2_3, cis(third)),
        ("T_R T_1(3)", flip_t1, cis(-third)),
        ("GHZ'_1(4)", ghz1, c(1.0, 0.0)),
        ("GHZ'_2(4)", ghz2, c(-1.0, 0.0)),
        ("T_1(4)", t1_4, minus_i),
        ("T_2(4)", t2_4, minus_i),
        ("T_3(4)", t3_4, minus_i),
    ];
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for (name, psi, expected) in cases {
        let v = check_symmetry(&psi, 1).map_err(|e| e.to_string())?;
        let residual = (&tistates::apply_translation(&psi, 1) - &psi.scale(expected)).norm();
        worst = worst.max(residual);
        if !v.is_eigenstate || residual > 1e-12 {
            failed.push(name);
        }
    }
    ensure(
        failed.is_empty(),
        format!(
            "max residual {worst:.1e}; T_2(3) taken as the flip of T*_1, flip of T_1 carries e^(-i2pi/3){}",
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failing: {failed:?}")
            }
        ),
    )
}

/// Largest `|G - I|` entry, accumulating only pairs that share support.
fn sparse_gram_deviation(n: u32) -> tistates::Result<(usize, f64)> {
    let basis = build_basis(n)?;
    let mut by_config: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); 1 << n];
    for (i, b) in basis.iter().enumerate() {
        for &(s, a) in b.support() {
            by_config[s.index()].push((i, a));
        }
    }
    let mut gram: HashMap<(usize, usize), Complex64> = HashMap::new();
    for entries in &by_config {
        for &(i, a) in entries {
            for &(j, b) in entries {
                *gram.entry((i, j)).or_default() += a.conj() * b;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        let d = gram.get(&(i, i)).copied().unwrap_or_default();
        worst = worst.max((d - 1.0).norm());
    }
    for (&(i, j), v) in &gram {
        if i != j {
            worst = worst.max(v.norm());
        }
    }
    Ok((basis.len(), worst))
}

fn completeness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut t12 = 0.0;
    for n in 2..=12 {
        let start = Instant::now();
        let (len, dev) = sparse_gram_deviation(n).map_err(|e| e.to_string())?;
        if n == 12 {
            t12 = start.elapsed().as_secs_f64();
        }
        ok &= len == 1 << n && dev <= 1e-12;
        worst = worst.max(dev);
    }
    ensure(
        ok && t12 <= 30.0,
        format!("2^n states for n=2..12, max |G-I| {worst:.1e}, n=12 in {t12:.2}s"),
    )
}

fn classes() -> Outcome {
    let expected: &[(u32, &[&[&str]])] = &[
        (3, &[&["000", "111"], &["001", "011"]]),
        (4, &[&["0000", "1111"], &["0101"], &["0001", "0111"], &["0011"]]),
        (
            5,
            &[
                &["00000", "11111"],
                &["00001", "01111"],
                &["00011", "00111"],
                &["00101", "01011"],
            ],
        ),
        (
            6,
            &[
                &["000000", "111111"],
                &["010101"],
                &["001001", "011011"],
                &["000001", "011111"],
                &["000011", "001111"],
                &["000101", "010111"],
                &["000111"],
                &["001011", "001101"],
            ],
        ),
    ];
    let mut counts = Vec::new();
    let mut ok = true;
    for &(n, lists) in expected {
        let got: BTreeSet<BTreeSet<String>> = partition_classes(n)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|cl| cl.orbit_reps.iter().map(|r| r.to_string()).collect())
            .collect();
        let want: BTreeSet<BTreeSet<String>> = lists
            .iter()
            .map(|l| l.iter().map(|s| s.to_string()).collect())
            .collect();
        ok &= got == want;
        counts.push(got.len());
    }
    ensure(ok, format!("class counts {counts:?}, unit lists match"))
}

fn decomposition() -> Outcome {
    let d = decompose(&StateVector::from_bitstring("100").unwrap()).map_err(|e| e.to_string())?;
    let target = c(1.0 / 3f64.sqrt(), 0.0);
    let mut worst: f64 = 0.0;
    for (sid, coeff) in &d.coefficients {
        let want = if sid.unit.to_string() == "001" {
            target
        } else {
            c(0.0, 0.0)
        };
        worst = worst.max((coeff - want).norm());
    }
    let shown: Vec<String> = ["001:0", "001:1", "001:2"]
        .iter()
        .map(|s| format!("{s}={:.6}", d.coefficient(id(s)).unwrap_or_default().re))
        .collect();
    ensure(
        worst <= 1e-12 && d.coefficients.len() == 8,
        format!("{} (W_1, T_1, T*_1), max deviation {worst:.1e}", shown.join(" ")),
    )
}

fn chirality() -> Outcome {
    let states: Vec<_> = ["001:0", "001:1", "001:2"]
        .iter()
        .map(|s| state_by_id(id(s)).unwrap())
        .collect();
    let phis = [-2.0 * PI / 3.0, 0.0, 2.0 * PI / 3.0];
    let expected = ["001:1", "001:0", "001:2"];
    let rows = tistates::chirality_scan(&states, &phis).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (row, want) in rows.iter().zip(expected) {
        let margin = row.margin.unwrap_or(0.0);
        ok &= row.argmin == vec![id(want)] && margin > 0.1;
        parts.push(format!("phi={:+.4}: {} (margin {margin:.3})", row.phi, row.argmin[0]));
    }
    ensure(ok, parts.join(", "))
}

fn mixing() -> Outcome {
    let n = 4;
    let h0 = HamiltonianSpec::h0(n).unwrap();
    let basis = build_basis(n).map_err(|e| e.to_string())?;
    let energies: Vec<f64> = basis.iter().map(|b| expectation(&h0, &b.vector()).unwrap()).collect();
    let mut levels: Vec<f64> = energies.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let first_excited = levels[1];
    let ghz1 = state_by_id(id("0101:0")).unwrap();
    let mut states = vec![ghz1];
    states.extend(
        basis
            .into_iter()
            .zip(&energies)
            .filter(|(_, &e)| (e - first_excited).abs() < 1e-9)
            .map(|(b, _)| b),
    );
    let hp = HamiltonianSpec::hprime(n, 0.0).unwrap();
    let report: MixingReport = mixing_report(&hp, &states).map_err(|e| e.to_string())?;
    let (best, mag) = report.matrix[0]
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, x)| (report.states[j], x.norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    ensure(
        mag > 0.1,
        format!(
            "|<GHZ'_1|H'(0)|{best}>| = {mag:.6} over {} first-excited states",
            states.len() - 1
        ),
    )
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

fn oracles() -> Outcome {
    let mut checked = 0usize;
    for n in 2..=10 {
        for bits in 0..1u32 << n {
            let s = BitConfig::new(n, bits).unwrap();
            let (repr, period) = naive_orbit(s);
            let orbit = tistates::orbit_of(s);
            if orbit.representative().to_string() != repr || orbit.period() != period || s.period() != period {
                return Err(format!("orbit mismatch at {s}"));
            }
            checked += 1;
        }
        let orbit_total: usize = enumerate_orbits(n).unwrap().iter().map(|o| o.period() as usize).sum();
        if orbit_total != 1 << n {
            return Err(format!("orbits at n={n} cover {orbit_total} strings"));
        }
    }
    let mut rng = StdRng::seed_from_u64(0xacce);
    let mut samples = 0usize;
    let mut ti_count = 0usize;
    for n in 2..=8 {
        let basis = build_basis(n).unwrap();
        for i in 0..500 {
            let psi = if i % 2 == 0 {
                random_ti_state(&basis, &mut rng)
            } else {
                random_state(n, &mut rng)
            };
            let (fast, _) = is_ti(&psi).map_err(|e| e.to_string())?;
            if fast != direct_ti_test(&psi, 1e-9) {
                return Err(format!("is_ti disagrees with residual test at n={n}, sample {i}"));
            }
            ti_count += fast as usize;
            samples += 1;
        }
    }
    Ok(format!(
        "{checked} strings match the rotation oracle; {samples} is_ti samples agree ({ti_count} TI)"
    ))
}

fn witness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5e9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let range = rng.gen_range(1..=3u32);
        let n = rng.gen_range(range + 1..=8);
        let a = rng.gen_range(0.0..=1.0);
        let z1 = Complex64::from_polar(a, rng.gen_range(0.0..2.0 * PI));
        let z0 = Complex64::from_polar(1.0 - a, rng.gen_range(0.0..2.0 * PI));
        let st = SeparableTIState::new(n, z1, z0).map_err(|e| e.to_string())?;
        let spec = HamiltonianSpec::zz(n, range).unwrap();
        let closed = separable_expectation(&st, &spec).map_err(|e| e.to_string())?;
        let explicit = separable_expectation_explicit(&st, &spec).map_err(|e| e.to_string())?;
        worst = worst.max((closed - explicit).abs());
    }
    let h0 = HamiltonianSpec::h0(3).unwrap();
    let base = e_sep_baseline(3, &h0).map_err(|e| e.to_string())?;
    let report = counterexample_report(3, &h0).map_err(|e| e.to_string())?;
    let ghz = report.iter().find(|e| e.state == "GHZ_1");
    let ghz_ok = ghz.is_some_and(|e| (e.w_ent - 3.0).abs() <= 1e-10);
    let w_absent = report.iter().all(|e| e.state != "001:0");
    ensure(
        worst <= 1e-10
            && base.e_sep == 0.0
            && base.grid_min.abs() <= 1e-10
            && (base.grid_argmin - 0.5).abs() <= 1e-3
            && ghz_ok
            && w_absent,
        format!(
            "closed vs explicit max diff {worst:.1e}; E_sep grid min {:.1e} at |z1|={:.3}; GHZ_1 w_ent={}; W_1 {}",
            base.grid_min,
            base.grid_argmin,
            ghz.map_or("missing".into(), |e| format!("{:+}", e.w_ent)),
            if w_absent { "excluded" } else { "present" },
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table 1 energies", table1),
        ("table 2 energies", table2),
        ("eigenvalue fixtures", eigen_fixtures),
        ("basis completeness", completeness),
        ("class counts", classes),
        ("decomposition of |100>", decomposition),
        ("chirality scan", chirality),
        ("GHZ' mixing", mixing),
        ("oracle equivalence", oracles),
        ("witness suite", witness),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
