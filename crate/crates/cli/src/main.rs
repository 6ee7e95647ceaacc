use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tistates::hamiltonian::{diagonalize, parse_angle};
use tistates::necklace::class_of;
use tistates::tables::{check_table1, emit_table1, emit_table2, TABLE1_SITES};
use tistates::tibasis::{state_from_unit, COEFF_CUTOFF};
use tistates::verify::run_invariants;
use tistates::witness::{two_qubit_werner_comparison, witness_scan};
use tistates::{
    build_basis, chirality_scan, counterexample_report, decompose, enumerate_orbits, expectation, is_ti, orbit_of,
    partition_classes, topology_label, witness_value, BitConfig, HamiltonianSpec, StateVector, WernerState,
    WitnessInput,
};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(name = "tistates", version, about = "Translationally invariant qubit-ring states")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "verb", rename_all = "lowercase")]
enum Command {
    /// List the translation-eigenstate basis.
    Gen {
        #[arg(long)]
        n: u32,
        /// Include the dense amplitude vector of every state.
        #[arg(long)]
        full: bool,
    },
    /// Cyclic orbits and their classes, or the orbit of one bitstring.
    Classify {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        bits: Option<String>,
    },
    /// Energy tables: the grouped ZZ table, the separable-state table, or
    /// per-state energies.
    Energies {
        #[arg(long)]
        n: u32,
        /// Comma separated Hamiltonians.
        #[arg(long, value_delimiter = ',', default_value = "h0,h1,h2")]
        h: Vec<String>,
        /// Compare against the printed table values.
        #[arg(long)]
        check: bool,
        /// Compute cells the printed table leaves blank.
        #[arg(long)]
        fill: bool,
        /// Fully polarized and GHZ states under h0 and hnl.
        #[arg(long, conflicts_with_all = ["check", "fill", "per_state"])]
        table2: bool,
        /// Energy of every basis state instead of the grouped table.
        #[arg(long)]
        per_state: bool,
    },
    /// Full spectrum with degeneracies.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "h0")]
        h: String,
    },
    /// Phase-detuned hopping energies of the states of one orbit.
    Scan {
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Cyclic unit; defaults to a single excitation.
        #[arg(long)]
        unit: Option<String>,
        /// Comma separated angles in radians; `pi` forms such as `-2pi/3` accepted.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-2pi/3,0,2pi/3"
        )]
        phis: Vec<String>,
    },
    /// Expand a state in the basis.
    Decompose {
        /// State file `{"n": .., "amplitudes": [[re, im], ..]}`.
        #[arg(long, conflicts_with = "bits", required_unless_present = "bits")]
        state: Option<String>,
        /// Computational basis state, most significant site first.
        #[arg(long)]
        bits: Option<String>,
    },
    /// Entanglement indicator `tr[-ρH] - E_sep` over the basis.
    Witness {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "h0")]
        h: String,
        /// Only entangled states the indicator fails to flag.
        #[arg(long)]
        counterexamples: bool,
        /// Werner mixture weight of the pure part.
        #[arg(long, conflicts_with = "counterexamples")]
        werner: Option<f64>,
        /// Cyclic unit of the Werner pure part; defaults to a single excitation.
        #[arg(long, requires = "werner")]
        unit: Option<String>,
        #[arg(long, requires = "werner", default_value_t = 0)]
        m: u32,
        /// Two-qubit singlet as the pure part, compared with the known threshold.
        #[arg(long, requires = "werner", conflicts_with = "unit")]
        singlet: bool,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    schema_version: &'static str,
    command: &'a Command,
    payload: Value,
    elapsed_ms: u64,
}

/// Tabular view used by the csv and table formats.
struct Rows {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Rows {
    fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let quote = |s: &String| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        };
        let mut out = String::new();
        for line in std::iter::once(&self.headers).chain(&self.rows) {
            out.push_str(&line.iter().map(quote).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    fn table(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (cell, w) in cells.iter().zip(&widths) {
                let _ = write!(s, "{cell:<w$}  ");
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

struct Report {
    payload: Value,
    rows: Rows,
    /// Set when the command ran but its result is a failure (table
    /// mismatch, failed invariant).
    failure: Option<(&'static str, String)>,
}

impl Report {
    fn ok(payload: Value, rows: Rows) -> Self {
        Self {
            payload,
            rows,
            failure: None,
        }
    }
}

enum CliError {
    Domain(tistates::Error),
    Cli(&'static str, String),
}

impl From<tistates::Error> for CliError {
    fn from(e: tistates::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types serialize")
}

fn num(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        format!("{}", r as i64)
    } else {
        format!("{x:.6}")
    }
}

fn complex(c: tistates::Complex64) -> String {
    if c.im.abs() < 1e-12 {
        num(c.re)
    } else {
        format!(
            "{}{}{}i",
            num(c.re),
            if c.im < 0.0 { "-" } else { "+" },
            num(c.im.abs())
        )
    }
}

fn single_excitation(n: u32) -> CliResult<BitConfig> {
    Ok(BitConfig::new(n, 1)?)
}

fn parse_unit(text: Option<&str>, n: u32) -> CliResult<BitConfig> {
    match text {
        None => single_excitation(n),
        Some(t) => {
            let unit: BitConfig = t.parse()?;
            if unit.n_sites() != n {
                return Err(CliError::Cli(
                    "length_mismatch",
                    format!("unit {t} has {} sites but --n is {n}", unit.n_sites()),
                ));
            }
            Ok(unit)
        }
    }
}

fn gen(n: u32, full: bool) -> CliResult<Report> {
    let basis = build_basis(n)?;
    let mut rows = Rows::new(&["unit", "m", "period", "momentum", "eigenvalue", "spin"]);
    let states: Vec<Value> = basis
        .iter()
        .map(|b| {
            let label = topology_label(b);
            rows.push(vec![
                b.unit().to_string(),
                b.phase_index().to_string(),
                b.period().to_string(),
                b.momentum().to_string(),
                complex(b.eigenvalue()),
                format!("{}/{}", label.fractional_spin.0, label.fractional_spin.1),
            ]);
            let mut entry = json!({
                "unit": b.unit().to_string(),
                "m": b.phase_index(),
                "eigenvalue": b.eigenvalue(),
                "period": b.period(),
                "momentum": b.momentum(),
            });
            if full {
                entry["amplitudes"] = to_value(&b.vector().amplitudes());
            }
            entry
        })
        .collect();
    Ok(Report::ok(json!({ "n": n, "states": states }), rows))
}

fn classify(n: Option<u32>, bits: Option<&str>) -> CliResult<Report> {
    if let Some(text) = bits {
        let s: BitConfig = text.parse()?;
        if let Some(n) = n.filter(|&n| n != s.n_sites()) {
            return Err(CliError::Cli(
                "length_mismatch",
                format!("bits {text} have {} sites but --n is {n}", s.n_sites()),
            ));
        }
        let orbit = orbit_of(s);
        let class: Vec<String> = class_of(s).iter().map(ToString::to_string).collect();
        let mut rows = Rows::new(&["input", "repr", "period", "position", "class_units"]);
        rows.push(vec![
            s.to_string(),
            orbit.representative().to_string(),
            orbit.period().to_string(),
            orbit.position(s).unwrap_or(0).to_string(),
            class.join(" "),
        ]);
        let payload = json!({
            "n": s.n_sites(),
            "input": s.to_string(),
            "orbit": orbit,
            "class_units": class,
        });
        return Ok(Report::ok(payload, rows));
    }
    let n = n.ok_or_else(|| CliError::Cli("missing_argument", "classify needs --n or --bits".into()))?;
    let orbits = enumerate_orbits(n)?;
    let classes = partition_classes(n)?;
    let mut rows = Rows::new(&["repr", "period", "class", "members"]);
    for o in &orbits {
        let label = classes
            .iter()
            .find(|c| c.contains_unit(o.representative()))
            .map_or(0, |c| c.label);
        rows.push(vec![
            o.representative().to_string(),
            o.period().to_string(),
            label.to_string(),
            o.members()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        ]);
    }
    Ok(Report::ok(
        json!({ "n": n, "orbits": orbits, "classes": classes }),
        rows,
    ))
}

fn table1_range(h: &str) -> Option<u32> {
    match h {
        "h0" => Some(1),
        "h1" => Some(2),
        "h2" => Some(3),
        _ => None,
    }
}

fn energies(n: u32, hs: &[String], check: bool, fill: bool, table2: bool, per_state: bool) -> CliResult<Report> {
    if table2 {
        let t = emit_table2(n)?;
        let mut rows = Rows::new(&["state", "h0", "|h0|", "hnl", "printed_hnl"]);
        for r in &t.rows {
            rows.push(vec![
                r.state.clone(),
                num(r.h0),
                num(r.h0_abs),
                num(r.hnl),
                num(r.printed_hnl),
            ]);
        }
        let passed = t.check();
        let mut report = Report::ok(json!({ "table2": t, "check": { "passed": passed } }), rows);
        if !passed {
            report.failure = Some(("table_mismatch", "table 2 values not reproduced".into()));
        }
        return Ok(report);
    }
    if per_state {
        let specs = hs
            .iter()
            .map(|h| HamiltonianSpec::parse(n, h))
            .collect::<Result<Vec<_>, _>>()?;
        let mut headers = vec!["state".to_string()];
        headers.extend(specs.iter().map(ToString::to_string));
        let mut rows = Rows {
            headers,
            rows: Vec::new(),
        };
        let mut entries = Vec::new();
        for b in build_basis(n)? {
            let v = b.vector();
            let values = specs
                .iter()
                .map(|s| expectation(s, &v))
                .collect::<Result<Vec<_>, _>>()?;
            let mut row = vec![b.id().to_string()];
            row.extend(values.iter().map(|&e| num(e)));
            rows.push(row);
            entries.push(json!({ "state": b.id(), "energies": values }));
        }
        let names: Vec<String> = specs.iter().map(ToString::to_string).collect();
        return Ok(Report::ok(
            json!({ "n": n, "hamiltonians": names, "states": entries }),
            rows,
        ));
    }
    let ranges = hs
        .iter()
        .map(|h| {
            table1_range(h.trim()).ok_or_else(|| {
                CliError::Cli(
                    "unsupported_column",
                    format!("grouped table columns are h0, h1, h2; got {h:?} (use --per-state)"),
                )
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    if !TABLE1_SITES.contains(&n) {
        return Err(tistates::Error::TableRange {
            n,
            min: *TABLE1_SITES.start(),
            max: *TABLE1_SITES.end(),
        }
        .into());
    }
    let blocks = emit_table1(&[n], &ranges, fill)?;
    let mut headers = vec!["states".to_string(), "units".to_string(), "count".to_string()];
    headers.extend(blocks[0].hamiltonians.iter().cloned());
    let mut rows = Rows {
        headers,
        rows: Vec::new(),
    };
    for r in &blocks[0].rows {
        let mut row = vec![r.label.clone(), r.units.join(" "), r.states.to_string()];
        row.extend(r.cells.iter().map(|c| c.shown.map_or("-".to_string(), num)));
        rows.push(row);
    }
    let mut payload = json!({ "table1": blocks[0] });
    let mut failure = None;
    if check {
        let mismatches = check_table1(&blocks);
        if !mismatches.is_empty() {
            failure = Some((
                "table_mismatch",
                format!("{} printed cells not reproduced", mismatches.len()),
            ));
        }
        payload["check"] = json!({ "passed": mismatches.is_empty(), "mismatches": mismatches });
    }
    Ok(Report { payload, rows, failure })
}

fn spectrum(n: u32, h: &str) -> CliResult<Report> {
    let spec = HamiltonianSpec::parse(n, h)?;
    let report = diagonalize(&spec)?;
    let mut rows = Rows::new(&["energy", "multiplicity"]);
    for &(e, k) in &report.degeneracies {
        rows.push(vec![num(e), k.to_string()]);
    }
    let mut payload = to_value(&report);
    payload["hamiltonian"] = json!(spec.to_string());
    payload["n"] = json!(n);
    Ok(Report::ok(payload, rows))
}

fn scan(n: u32, unit: Option<&str>, phis: &[String]) -> CliResult<Report> {
    let unit = parse_unit(unit, n)?;
    let phis = phis
        .iter()
        .map(|p| parse_angle(p.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let states = (0..unit.period())
        .map(|m| state_from_unit(unit, m))
        .collect::<Result<Vec<_>, _>>()?;
    let scan_rows = chirality_scan(&states, &phis)?;
    let mut rows = Rows::new(&["phi", "state", "energy", "argmin"]);
    for r in &scan_rows {
        for (id, e) in &r.energies {
            rows.push(vec![
                format!("{:.6}", r.phi),
                id.to_string(),
                num(*e),
                r.argmin.contains(id).to_string(),
            ]);
        }
    }
    Ok(Report::ok(
        json!({ "n": n, "unit": unit.canonical().to_string(), "rows": scan_rows }),
        rows,
    ))
}

fn read_state(path: &str) -> CliResult<StateVector> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Cli("io_error", format!("{path}: {e}")))?;
    Ok(StateVector::from_json(&text)?)
}

fn decompose_cmd(state: Option<&str>, bits: Option<&str>) -> CliResult<Report> {
    let psi = match (state, bits) {
        (Some(path), _) => read_state(path)?,
        (None, Some(b)) => StateVector::from_bitstring(b)?,
        (None, None) => unreachable!("clap requires one of --state, --bits"),
    };
    let d = decompose(&psi)?;
    let (ti, eigenvalue) = is_ti(&psi)?;
    let mut rows = Rows::new(&["state", "coefficient", "weight"]);
    let coefficients: Vec<Value> = d
        .nonzero(COEFF_CUTOFF)
        .map(|(id, c)| {
            rows.push(vec![id.to_string(), complex(*c), num(c.norm_sqr())]);
            json!({ "state": id, "coefficient": c })
        })
        .collect();
    Ok(Report::ok(
        json!({
            "n": psi.n_sites(),
            "coefficients": coefficients,
            "residual_norm": d.residual_norm,
            "is_ti": ti,
            "eigenvalue": eigenvalue,
        }),
        rows,
    ))
}

fn witness(
    n: u32,
    h: &str,
    counterexamples: bool,
    werner: Option<f64>,
    unit: Option<&str>,
    m: u32,
    singlet: bool,
) -> CliResult<Report> {
    if singlet {
        if n != 2 {
            return Err(CliError::Cli("singlet_sites", "--singlet needs --n 2".into()));
        }
        let cmp = two_qubit_werner_comparison(werner.expect("clap requires --werner"))?;
        let mut rows = Rows::new(&["p", "known_entangled", "w_ent", "verdict", "agrees"]);
        rows.push(vec![
            num(cmp.p),
            cmp.known_entangled.to_string(),
            num(cmp.w_ent),
            cmp.verdict.as_str().to_string(),
            cmp.agrees.to_string(),
        ]);
        return Ok(Report::ok(json!({ "hamiltonian": "h0", "n": 2, "werner": cmp }), rows));
    }
    let spec = HamiltonianSpec::parse(n, h)?;
    if let Some(p) = werner {
        let unit = parse_unit(unit, n)?;
        let pure = state_from_unit(unit, m)?;
        let w = WernerState::new(p, pure.vector())?;
        let r = witness_value(WitnessInput::Werner(&w), &spec)?;
        let mut rows = Rows::new(&["state", "p", "tr[-rho H]", "e_sep", "w_ent", "verdict"]);
        rows.push(vec![
            pure.id().to_string(),
            num(p),
            num(r.expectation_neg_h),
            num(r.e_sep),
            num(r.w_ent),
            r.verdict.as_str().to_string(),
        ]);
        return Ok(Report::ok(
            json!({ "hamiltonian": spec.to_string(), "n": n, "state": pure.id(), "p": p, "result": r }),
            rows,
        ));
    }
    let entries = if counterexamples {
        counterexample_report(n, &spec)?
    } else {
        witness_scan(n, &spec)?
    };
    let mut rows = Rows::new(&["state", "w_ent", "verdict"]);
    for e in &entries {
        rows.push(vec![e.state.clone(), num(e.w_ent), e.verdict.as_str().to_string()]);
    }
    Ok(Report::ok(
        json!({ "hamiltonian": spec.to_string(), "n": n, "entries": entries }),
        rows,
    ))
}

fn verify(n: u32) -> CliResult<Report> {
    let report = run_invariants(n)?;
    let mut rows = Rows::new(&["check", "passed", "detail"]);
    for c in &report.checks {
        rows.push(vec![c.name.to_string(), c.passed.to_string(), c.detail.clone()]);
    }
    let failure = (!report.all_passed()).then(|| ("invariant_failed", format!("{} checks failed", report.failed)));
    eprintln!("{} passed, {} failed", report.passed, report.failed);
    Ok(Report {
        payload: to_value(&report),
        rows,
        failure,
    })
}

fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::Gen { n, full } => gen(*n, *full),
        Command::Classify { n, bits } => classify(*n, bits.as_deref()),
        Command::Energies {
            n,
            h,
            check,
            fill,
            table2,
            per_state,
        } => energies(*n, h, *check, *fill, *table2, *per_state),
        Command::Spectrum { n, h } => spectrum(*n, h),
        Command::Scan { n, unit, phis } => scan(*n, unit.as_deref(), phis),
        Command::Decompose { state, bits } => decompose_cmd(state.as_deref(), bits.as_deref()),
        Command::Witness {
            n,
            h,
            counterexamples,
            werner,
            unit,
            m,
            singlet,
        } => witness(*n, h, *counterexamples, *werner, unit.as_deref(), *m, *singlet),
        Command::Verify { n } => verify(*n),
    }
}

fn print_error(name: &str, module: &str, message: &str) {
    eprintln!("{}", json!({ "error": name, "module": module, "message": message }));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(CliError::Domain(e)) => {
            print_error(e.name(), e.module(), &e.to_string());
            return ExitCode::from(1);
        }
        Err(CliError::Cli(name, message)) => {
            print_error(name, "cli", &message);
            return ExitCode::from(1);
        }
    };
    match cli.format {
        Format::Json => {
            let envelope = ReportEnvelope {
                schema_version: SCHEMA_VERSION,
                command: &cli.command,
                payload: report.payload,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&envelope).expect("envelope serializes")
            );
        }
        Format::Csv => print!("{}", report.rows.csv()),
        Format::Table => print!("{}", report.rows.table()),
    }
    if let Some((name, message)) = report.failure {
        print_error(name, "cli", &message);
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
