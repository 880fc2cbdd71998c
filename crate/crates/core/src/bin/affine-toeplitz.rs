//! Command-line front end: exact products and joins, state evaluation,
//! residual sweeps, representation checks, and the example value tables.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input.

use affine_toeplitz::affine::{AffinePoint, ConePoint, SearchWindow};
use affine_toeplitz::measure::Measure;
use affine_toeplitz::monomial::{AnyMonomial, Monomial};
use affine_toeplitz::rep::{relation_residuals, TruncatedRep};
use affine_toeplitz::spatial::spatial_kms;
use affine_toeplitz::state::{
    ground_state, kms_state, kms1_limit, Kms1Label, KmsParams, StateOracle, StateValue,
    ToeplitzStateSpec,
};
use affine_toeplitz::verify::{broken_scaling_oracle, sweep, SweepKind};
use affine_toeplitz::{wire, Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "affine-toeplitz",
    about = "Exact computer algebra for the Toeplitz algebra of N^x ⋉ N and its equilibrium states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// KMS state (finite-prime variant when --prime-set is given).
    Kms,
    /// Ground state built from the measure's Toeplitz state.
    Ground,
    /// Spatial truncation of the KMS state on ℓ²(ℕ^×) ⊗ L²(μ).
    Spatial,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateChoice {
    Kms,
    Ground,
    /// KMS with the a^{−β} factor dropped; a deliberate negative control.
    Broken,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepKind {
    /// Left regular representation on ℓ²(ℕ^× ⋉ ℕ).
    Regular,
    /// Multiplicative boundary representation on ℓ²(ℚ₊ ∩ grid).
    Qplus,
    /// Additive boundary representation on ℓ²(ℕ^× × ℤ).
    Nxz,
}

#[derive(Subcommand)]
enum Command {
    /// Join (least common upper bound) of two cone points, as JSON.
    Join { x: String, y: String },
    /// Least cone point above an affine group element, as JSON.
    Lub { x: String },
    /// Product of two monomials; presentation inferred from the operands
    /// unless forced with --quotient.
    Product {
        /// Require both operands in this presentation: full, add, mult, cl.
        #[arg(long)]
        quotient: Option<String>,
        x: String,
        y: String,
    },
    /// Push a monomial along a quotient map to the named presentation.
    Reduce {
        /// Target presentation: full, add, mult, cl.
        #[arg(long)]
        quotient: String,
        x: String,
    },
    /// Evaluate an equilibrium state on a full monomial.
    #[command(name = "eval-state")]
    EvalState {
        #[arg(long)]
        beta: f64,
        /// Series error budget per evaluation.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Named measure (delta1, delta-1, lebesgue), inline JSON, or @file.
        #[arg(long, default_value = "delta1")]
        measure: String,
        /// Restrict to E-smooth legs (finite-prime state), e.g. 2,3.
        #[arg(long, value_delimiter = ',')]
        prime_set: Option<Vec<u64>>,
        /// Which oracle evaluates the monomial (--beta is ignored by ground).
        #[arg(long, value_enum, default_value_t = OracleKind::Kms)]
        oracle: OracleKind,
        /// Truncation depth for --oracle spatial.
        #[arg(long, default_value_t = 2000)]
        depth: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
        x: String,
    },
    /// Seeded residual sweep of an equilibrium identity; exit 1 on failures.
    Verify {
        /// Identity to check: char, kms, or ground.
        #[arg(long)]
        kind: String,
        /// Oracle under test; defaults to the oracle the kind characterizes.
        #[arg(long, value_enum)]
        state: Option<StateChoice>,
        /// Inverse temperature; ignored by the ground oracle.
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value = "delta1")]
        measure: String,
        #[arg(long, value_delimiter = ',')]
        prime_set: Option<Vec<u64>>,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leg and exponent bounds as LEG,EXP.
        #[arg(long, default_value = "30,20")]
        bounds: String,
        /// Residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check the presentation relations on a truncated representation.
    #[command(name = "repr-check")]
    ReprCheck {
        #[arg(long, value_enum, default_value_t = RepKind::Regular)]
        rep: RepKind,
        /// Representation size as A,B (regular: legs, exponents; qplus:
        /// denominator lcm, height; nxz: legs, exponent radius).
        #[arg(long, default_value = "24,40")]
        bounds: String,
        /// Check relations with generator indices up to this bound.
        #[arg(long, default_value_t = 4)]
        max_index: u64,
    },
    /// Emit the example value tables: the three tabulated measures on a β
    /// grid approaching 1, the β → 1⁺ limits, and the finite-prime rows.
    Table {
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        output: OutputFormat,
    },
}

fn parse_measure(text: &str) -> Result<Measure> {
    if let Some(path) = text.strip_prefix('@') {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidMeasure(format!("cannot read {path}: {e}")))?;
        return serde_json::from_str(&body).map_err(|e| Error::InvalidMeasure(e.to_string()));
    }
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()));
    }
    Measure::named(text)
}

fn parse_bounds(text: &str) -> Result<SearchWindow> {
    let mut parts = text.split(',');
    let bad = || Error::InvalidParameter(format!("bounds must be LEG,EXP; got {text:?}"));
    let max_leg = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let max_exponent = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(SearchWindow {
        max_leg,
        max_exponent,
    })
}

fn parse_monomial(text: &str) -> Result<Monomial> {
    serde_json::from_str(text).map_err(wire::invalid_json)
}

/// One value record; the CSV column order is fixed:
/// a,m,n,b,beta,measure,value_re,value_im,error_bound.
struct Row {
    a: BigUint,
    m: BigUint,
    n: BigUint,
    b: BigUint,
    beta: f64,
    measure: String,
    value: StateValue,
}

impl Row {
    fn new(x: &Monomial, beta: f64, measure: String, value: StateValue) -> Self {
        Row {
            a: x.a().clone(),
            m: x.m().clone(),
            n: x.n().clone(),
            b: x.b().clone(),
            beta,
            measure,
            value,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let nat = |x: &BigUint| {
            serde_json::Number::from_str(&x.to_string()).expect("digits parse as a JSON number")
        };
        json!({
            "a": nat(&self.a),
            "m": nat(&self.m),
            "n": nat(&self.n),
            "b": nat(&self.b),
            "beta": self.beta,
            "measure": self.measure,
            "value_re": self.value.value.re,
            "value_im": self.value.value.im,
            "error_bound": self.value.error_bound,
        })
    }

    const CSV_HEADER: &'static str = "a,m,n,b,beta,measure,value_re,value_im,error_bound";

    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.a,
            self.m,
            self.n,
            self.b,
            self.beta,
            self.measure,
            self.value.value.re,
            self.value.value.im,
            self.value.error_bound
        )
    }
}

fn emit_rows(rows: &[Row], output: OutputFormat) {
    match output {
        OutputFormat::Json => {
            let values: Vec<_> = rows.iter().map(Row::to_json).collect();
            println!("{}", serde_json::Value::Array(values));
        }
        OutputFormat::Csv => {
            println!("{}", Row::CSV_HEADER);
            for row in rows {
                println!("{}", row.to_csv());
            }
        }
    }
}

fn measure_label(mu: &Measure, prime_set: &Option<Vec<u64>>) -> String {
    match prime_set {
        None => mu.label(),
        Some(primes) => {
            let list = primes
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            format!("{}[E={list}]", mu.label())
        }
    }
}

fn build_oracle(
    choice: StateChoice,
    params: &KmsParams,
    mu: &Measure,
) -> Result<StateOracle> {
    match choice {
        StateChoice::Kms => kms_state(params, mu),
        StateChoice::Ground => Ok(ground_state(ToeplitzStateSpec::from_measure(mu))),
        StateChoice::Broken => broken_scaling_oracle(params, mu),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Join { x, y } => {
            let x: ConePoint =
                serde_json::from_str(&x).map_err(wire::invalid_json)?;
            let y: ConePoint =
                serde_json::from_str(&y).map_err(wire::invalid_json)?;
            println!("{}", serde_json::to_string(&x.join(&y)).expect("serializable"));
            Ok(0)
        }
        Command::Lub { x } => {
            let x: AffinePoint =
                serde_json::from_str(&x).map_err(wire::invalid_json)?;
            println!(
                "{}",
                serde_json::to_string(&x.least_upper_bound()).expect("serializable")
            );
            Ok(0)
        }
        Command::Product { quotient, x, y } => {
            let x = AnyMonomial::from_json(&x)?;
            let y = AnyMonomial::from_json(&y)?;
            if let Some(target) = &quotient {
                for operand in [&x, &y] {
                    if operand.presentation() != target {
                        return Err(Error::InvalidParameter(format!(
                            "expected a {target} monomial, got {}",
                            operand.presentation()
                        )));
                    }
                }
            }
            println!("{}", serde_json::to_string(&x.mul(&y)?).expect("serializable"));
            Ok(0)
        }
        Command::Reduce { quotient, x } => {
            let x = AnyMonomial::from_json(&x)?;
            println!(
                "{}",
                serde_json::to_string(&x.reduce(&quotient)?).expect("serializable")
            );
            Ok(0)
        }
        Command::EvalState {
            beta,
            tol,
            measure,
            prime_set,
            oracle,
            depth,
            output,
            x,
        } => {
            let x = parse_monomial(&x)?;
            let mu = parse_measure(&measure)?;
            let mut params = KmsParams::new(beta).with_tol(tol);
            params.prime_set = prime_set.clone();
            let oracle = match oracle {
                OracleKind::Kms => kms_state(&params, &mu)?,
                OracleKind::Ground => ground_state(ToeplitzStateSpec::from_measure(&mu)),
                OracleKind::Spatial => spatial_kms(beta, &mu, depth)?,
            };
            let value = oracle.evaluate(&x)?;
            let row = Row::new(&x, beta, measure_label(&mu, &prime_set), value);
            match output {
                OutputFormat::Json => println!("{}", row.to_json()),
                OutputFormat::Csv => {
                    println!("{}", Row::CSV_HEADER);
                    println!("{}", row.to_csv());
                }
            }
            Ok(0)
        }
        Command::Verify {
            kind,
            state,
            beta,
            measure,
            prime_set,
            count,
            seed,
            bounds,
            tol,
        } => {
            let kind = SweepKind::parse(&kind)?;
            let bounds = parse_bounds(&bounds)?;
            let mu = parse_measure(&measure)?;
            let mut params = KmsParams::new(beta);
            params.prime_set = prime_set;
            let choice = state.unwrap_or(match kind {
                SweepKind::Ground => StateChoice::Ground,
                _ => StateChoice::Kms,
            });
            let oracle = build_oracle(choice, &params, &mu)?;
            let report = sweep(kind, &oracle, beta, &bounds, count, seed, tol)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::ReprCheck {
            rep,
            bounds,
            max_index,
        } => {
            let bounds = parse_bounds(&bounds)?;
            let rep = match rep {
                RepKind::Regular => TruncatedRep::build_regular(bounds.max_leg, bounds.max_exponent)?,
                RepKind::Qplus => TruncatedRep::build_qplus(bounds.max_leg, bounds.max_exponent)?,
                RepKind::Nxz => TruncatedRep::build_nxz(bounds.max_leg, bounds.max_exponent)?,
            };
            let reports = relation_residuals(&rep, max_index)?;
            let all_pass = reports.iter().all(|r| r.passed());
            let rows: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "relation": r.relation,
                        "interior_columns": r.interior_columns,
                        "mismatches": r.mismatches,
                        "passed": r.passed(),
                    })
                })
                .collect();
            let report = json!({
                "representation": rep.label(),
                "relations": rows,
                "passed": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Table { output } => {
            let rows = example_table()?;
            emit_rows(&rows, output);
            Ok(0)
        }
    }
}

/// The example grid: the three tabulated measures across β, the closed-form
/// β → 1⁺ limit rows (at beta = 1), and the finite-prime rows for E = {2,3}.
fn example_table() -> Result<Vec<Row>> {
    let mono = |a: u64, m: u64, n: u64| Monomial::new(a, m, n, a).expect("legs positive");
    let measures = [
        ("delta1", Measure::delta_one()),
        ("delta-1", Measure::delta_minus_one()),
        ("lebesgue", Measure::Lebesgue),
    ];
    let mut rows = Vec::new();

    let grid = [
        mono(1, 0, 0),
        mono(2, 1, 1),
        mono(2, 1, 0),
        mono(2, 2, 0),
        mono(3, 1, 0),
        mono(5, 2, 2),
        mono(5, 2, 1),
    ];
    for beta in [1.5, 2.0, 3.0, 1.25, 1.125, 1.0625] {
        for (name, mu) in &measures {
            let phi = kms_state(&KmsParams::new(beta), mu)?;
            for x in &grid {
                rows.push(Row::new(x, beta, name.to_string(), phi.evaluate(x)?));
            }
        }
    }

    for (name, label) in [
        ("delta1", Kms1Label::DeltaPlusOne),
        ("delta-1", Kms1Label::DeltaMinusOne),
        ("lebesgue", Kms1Label::Lebesgue),
    ] {
        for x in [mono(5, 2, 2), mono(5, 2, 1), mono(4, 7, 0), mono(3, 2, 0), mono(2, 1, 0)] {
            let value = StateValue::exact(kms1_limit(label, &x));
            rows.push(Row::new(&x, 1.0, name.to_string(), value));
        }
    }

    let prime_set = Some(vec![2u64, 3]);
    for beta in [0.5, 1.0, 2.0] {
        let params = KmsParams::new(beta).with_prime_set(vec![2, 3]);
        let psi = kms_state(&params, &Measure::delta_one())?;
        for x in [mono(1, 0, 0), mono(2, 1, 0), mono(6, 1, 0)] {
            rows.push(Row::new(
                &x,
                beta,
                measure_label(&Measure::delta_one(), &prime_set),
                psi.evaluate(&x)?,
            ));
        }
    }
    Ok(rows)
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, turning `table | head` into a panic on
    // the closed pipe. Restore the default so truncated pipes exit quietly.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
