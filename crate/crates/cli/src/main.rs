//! Command-line front end: structure checks, simulations, benchmarks.
//!
//! Exit codes: 0 on success, 2 when a structure check fails (the witness is
//! printed to stderr), 1 on usage, parse, or I/O errors. Data goes to
//! `--out` or stdout; diagnostics go to stderr.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qmech::dirac::{parse_dirac_file, AlmostDiracVerdict, IntegrabilityVerdict, Obstruction,
    SampleConfig};
use qmech::graded::{parse_polynomial, GradedContext, GradedVectorField, QVerdict};
use qmech::mech::{parse_system_file, simulate, Method, NewtonCfg, State};
use qmech::{Rat, Scalar};

#[derive(Parser)]
#[command(
    name = "qmech",
    about = "Graded-structure checks and structure-preserving integrators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that a graded vector field is a Q-structure (degree 1, `[Q,Q] = 0`)
    CheckQ(CheckQArgs),
    /// Certify an almost-Dirac / Dirac structure from a spec file
    CheckDirac(CheckDiracArgs),
    /// Integrate a mechanical system from a system file, emitting CSV
    Simulate(SimulateArgs),
    /// Run the Chaplygin-sleigh method comparison, emitting the error table
    BenchSleigh(BenchSleighArgs),
    /// Run the oscillator energy-drift study, emitting the error table
    BenchOscillator(BenchOscillatorArgs),
}

#[derive(Args)]
struct CheckQArgs {
    /// Context file: one `name degree` line per coordinate
    context: PathBuf,
    /// Field file: `coordinate = <expression>` lines; missing components are zero
    field: PathBuf,
}

#[derive(Args)]
struct CheckDiracArgs {
    /// Structure spec file (`[base]`/`[form]`/`[bivector]`/`[distribution]`)
    spec: PathBuf,
    /// Seed for the rank check's sample points
    #[arg(long, default_value_t = SampleConfig::default().seed)]
    seed: u64,
    /// Number of rational sample points for the rank check
    #[arg(long, default_value_t = SampleConfig::default().points)]
    samples: usize,
}

#[derive(Args)]
struct SimulateArgs {
    /// System file (`[hamiltonian]`/`[lagrangian]`/`[port]`)
    system: PathBuf,
    /// Stepping method: explicit-euler | symplectic-euler | verlet | dirac1 | midpoint
    #[arg(long)]
    method: String,
    /// Step size
    #[arg(long)]
    h: Scalar,
    /// Integration horizon
    #[arg(long = "T")]
    t_end: Scalar,
    /// Record every STRIDE-th step
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Initial positions (comma-separated; zeros when omitted)
    #[arg(long)]
    q0: Option<String>,
    /// Initial momenta/velocities (comma-separated; zeros when omitted)
    #[arg(long)]
    pv0: Option<String>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchSleighArgs {
    /// Sleigh mass
    #[arg(long, default_value_t = 1.0)]
    m: Scalar,
    /// Contact-to-center distance
    #[arg(long, default_value_t = 0.1)]
    a: Scalar,
    /// Moment of inertia
    #[arg(long, default_value_t = 1.0)]
    i: Scalar,
    /// Step size
    #[arg(long, default_value_t = 1e-3)]
    h: Scalar,
    /// Integration horizon
    #[arg(long = "T", default_value_t = 10.0)]
    t_end: Scalar,
    /// Initial configuration x,y,theta
    #[arg(long, default_value = "0,0,0")]
    q0: String,
    /// Initial velocities vx,vy,omega (must satisfy the constraint)
    #[arg(long, default_value = "1,0,1")]
    v0: String,
    /// Error-table CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-step diagnostics to `<PREFIX>-<method>.csv`
    #[arg(long)]
    diag: Option<String>,
}

#[derive(Args)]
struct BenchOscillatorArgs {
    /// Step size
    #[arg(long, default_value_t = 0.01)]
    h: Scalar,
    /// Integration horizon
    #[arg(long = "T", default_value_t = 100.0)]
    t_end: Scalar,
    /// Error-table CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, String> {
    match command {
        Command::CheckQ(args) => check_q(args),
        Command::CheckDirac(args) => check_dirac(args),
        Command::Simulate(args) => run_simulate(args),
        Command::BenchSleigh(args) => bench_sleigh(args),
        Command::BenchOscillator(args) => bench_oscillator(args),
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, data: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, data).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{data}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
    }
}

fn check_q(args: CheckQArgs) -> Result<u8, String> {
    let ctx = GradedContext::parse(&read(&args.context)?).map_err(|e| e.to_string())?;
    let field_text = read(&args.field)?;
    let mut parts = Vec::new();
    for (lineno, line) in field_text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, expr) = line
            .split_once('=')
            .ok_or(format!("line {}: expected `coordinate = expression`", lineno + 1))?;
        let poly =
            parse_polynomial::<Rat>(&ctx, expr.trim()).map_err(|e| format!("line {}: {e}", lineno + 1))?;
        parts.push((name.trim().to_string(), poly));
    }
    // infer the declared degree from the first nonzero component
    let mut degree = None;
    for (name, poly) in &parts {
        if poly.is_zero() {
            continue;
        }
        let idx = ctx
            .index_of(name)
            .ok_or(format!("unknown coordinate `{name}` in field file"))?;
        if !poly.is_homogeneous() {
            return Err(format!("component of `{name}` is not homogeneous"));
        }
        let d = poly.degree().expect("nonzero") - ctx.degree(idx) as i64;
        match degree {
            None => degree = Some(d),
            Some(prev) if prev == d => {}
            Some(prev) => {
                return Err(format!(
                    "components declare inconsistent field degrees {prev} and {d}"
                ))
            }
        }
    }
    let field = GradedVectorField::from_named(&ctx, degree.unwrap_or(1), parts)
        .map_err(|e| e.to_string())?;
    match field.check_q_structure().map_err(|e| e.to_string())? {
        QVerdict::Yes => {
            println!("Q-structure: yes");
            Ok(0)
        }
        QVerdict::WrongDegree { degree } => {
            println!("Q-structure: no (degree {degree}, expected 1)");
            Ok(2)
        }
        QVerdict::NotNilpotent { coordinate, witness } => {
            println!("Q-structure: no (not nilpotent)");
            eprintln!("witness: [Q,Q]/2 component on {coordinate}: {witness}");
            Ok(2)
        }
    }
}

fn check_dirac(args: CheckDiracArgs) -> Result<u8, String> {
    let parsed = parse_dirac_file::<Rat>(&read(&args.spec)?).map_err(|e| e.to_string())?;
    let cfg = SampleConfig { seed: args.seed, points: args.samples };
    match parsed.spec.check_almost_dirac(&cfg).map_err(|e| e.to_string())? {
        AlmostDiracVerdict::AlmostDirac => {}
        AlmostDiracVerdict::NotIsotropic { pair, witness } => {
            println!("almost-Dirac: no");
            eprintln!("witness: <e{}, e{}> = {witness}", pair.0 + 1, pair.1 + 1);
            return Ok(2);
        }
        AlmostDiracVerdict::RankDeficient { point, rank, expected } => {
            println!("almost-Dirac: no");
            eprintln!("witness: rank {rank} < {expected} at sample point {point}");
            return Ok(2);
        }
    }
    match parsed.spec.check_integrability().map_err(|e| e.to_string())? {
        IntegrabilityVerdict::Dirac => {
            println!("Dirac: yes");
            Ok(0)
        }
        IntegrabilityVerdict::AlmostOnly(obstruction) => {
            println!("Dirac: almost only");
            match obstruction {
                Obstruction::NonClosed(w) => eprintln!("witness: d(omega) = {w}"),
                Obstruction::Jacobi { triple, residual } => eprintln!(
                    "witness: Jacobi residual ({},{},{}) = {residual}",
                    triple.0 + 1,
                    triple.1 + 1,
                    triple.2 + 1
                ),
                Obstruction::NonInvolutive { fields, annihilator, witness } => eprintln!(
                    "witness: omega^{}([e{}, e{}]) = {witness}",
                    annihilator + 1,
                    fields.0 + 1,
                    fields.1 + 1
                ),
            }
            Ok(2)
        }
    }
}

fn parse_vec(text: &str, n: usize, what: &str) -> Result<Vec<Scalar>, String> {
    let vals: Result<Vec<Scalar>, _> =
        text.split(',').map(|s| s.trim().parse::<Scalar>()).collect();
    let vals = vals.map_err(|e| format!("{what}: {e}"))?;
    if vals.len() != n {
        return Err(format!("{what}: expected {n} entries, got {}", vals.len()));
    }
    Ok(vals)
}

fn run_simulate(args: SimulateArgs) -> Result<u8, String> {
    let sys = parse_system_file::<Scalar>(&read(&args.system)?).map_err(|e| e.to_string())?;
    let method = Method::from_name(&args.method)
        .ok_or(format!("unknown method `{}`", args.method))?;
    let n = sys.dim();
    let q0 = match &args.q0 {
        Some(text) => parse_vec(text, n, "--q0")?,
        None => vec![0.0; n],
    };
    let has_second_slot = !matches!(sys, qmech::mech::MechSystem::Port(_));
    let pv0 = match &args.pv0 {
        Some(text) if has_second_slot => parse_vec(text, n, "--pv0")?,
        Some(_) => return Err("--pv0 does not apply to port-Hamiltonian systems".into()),
        None if has_second_slot => vec![0.0; n],
        None => Vec::new(),
    };
    let s0 = State { t: 0.0, q: q0, pv: pv0, lambda: Vec::new() };
    let rec = simulate(&sys, method, &s0, args.h, args.t_end, args.stride, &NewtonCfg::default())
        .map_err(|e| e.to_string())?;
    emit(&args.out, &rec.to_csv_string())?;
    Ok(0)
}

fn bench_sleigh(args: BenchSleighArgs) -> Result<u8, String> {
    let params = qmech::bench::SleighParams::new(args.m, args.a, args.i)
        .map_err(|_| "invalid sleigh parameters (need m > 0, I > 0, a >= 0)".to_string())?;
    let q0 = parse_vec(&args.q0, 3, "--q0")?;
    let v0 = parse_vec(&args.v0, 3, "--v0")?;
    let s0 = State { t: 0.0, q: q0, pv: v0, lambda: Vec::new() };
    let table = qmech::bench::run_sleigh_benchmark(&params, &s0, args.h, args.t_end)
        .map_err(|e| e.to_string())?;
    if let Some(prefix) = &args.diag {
        write_sleigh_diagnostics(prefix, &params, &s0, args.h, args.t_end)?;
    }
    emit(&args.out, &table.to_csv_string())?;
    Ok(0)
}

fn write_sleigh_diagnostics(
    prefix: &str,
    params: &qmech::bench::SleighParams<Scalar>,
    s0: &State<Scalar>,
    h: Scalar,
    t_end: Scalar,
) -> Result<(), String> {
    use qmech::bench::MultiplierDynamics;
    use qmech::mech::{step_count, MechSystem, RecordKind, Sample, TrajectoryRecord};
    let sys = qmech::bench::sleigh_system(params);
    let steps = step_count(t_end, h);
    let horizon = (steps as Scalar + 0.5) * h;
    let dynamics = MultiplierDynamics::new(&sys);
    let write_rec = |name: &str, rec: &TrajectoryRecord<Scalar>| -> Result<(), String> {
        let path = format!("{prefix}-{name}.csv");
        fs::write(&path, rec.to_csv_string()).map_err(|e| format!("{path}: {e}"))
    };
    for (name, semi) in [("explicit-euler", false), ("symplectic-euler", true)] {
        let mut rec = TrajectoryRecord::new(RecordKind::Lagrangian, 3);
        let mut state = s0.clone();
        let push = |rec: &mut TrajectoryRecord<Scalar>, s: &State<Scalar>| {
            rec.push(Sample {
                state: s.clone(),
                energy: sys.energy(s),
                constraint_residual: Some(sys.constraint_residual(s)),
                power_residual: None,
            });
        };
        push(&mut rec, &state);
        for k in 1..=steps {
            state = if semi {
                dynamics.step_semi_implicit(&state, h).map_err(|e| e.to_string())?
            } else {
                dynamics.step_explicit(&state, h).map_err(|e| e.to_string())?
            };
            state.t = s0.t + k as Scalar * h;
            push(&mut rec, &state);
        }
        write_rec(name, &rec)?;
    }
    let dirac = simulate(
        &MechSystem::Lagrangian(sys.clone()),
        Method::Dirac1,
        s0,
        h,
        horizon,
        1,
        &NewtonCfg::default(),
    )
    .map_err(|e| e.to_string())?;
    write_rec("dirac1", &dirac)?;
    let reference = qmech::bench::sleigh_reference(params, s0, h / 100.0, horizon, 100)
        .map_err(|e| e.to_string())?;
    write_rec("reference", &reference)
}

fn bench_oscillator(args: BenchOscillatorArgs) -> Result<u8, String> {
    let table = qmech::bench::oscillator_drift_study::<Scalar>(args.h, args.t_end)
        .map_err(|e| e.to_string())?;
    emit(&args.out, &table.to_csv_string())?;
    Ok(0)
}
