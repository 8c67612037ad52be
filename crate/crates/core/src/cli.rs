//! The `qutrit` command-line tool.
//!
//! Exit codes: 0 success (valid / orthogonal), 1 negative verdict
//! (invalid state, not orthogonal, failed self-test), 2 usage or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::basis::{commutator_table, format_table, reference_table, Generator, TABLE_ORDER};
use crate::bloch::{
    bloch_triple_unchecked, decompose_with, derived_geometry, purity, QutritCoefficients,
};
use crate::dynamics::trajectory;
use crate::error::Error;
use crate::io::{self, fmt_f64, parse_state, state_json, to_json_string, StateInput};
use crate::linalg::determinant;
use crate::qudit::{
    decompose_qudit_with, necessary_conditions, reconstruct_qudit, sample_gram,
    subspace_bloch_vectors, QuditCoefficients,
};
use crate::selftest::{self, Config};
use crate::tolerance::{self, Tolerances};
use crate::validity::{
    check_constraints, derive_seed, orthogonal_pure_mixed, orthogonal_pure_pure, sample_batch,
};

#[derive(Debug, Parser)]
#[command(name = "qutrit", version, about = "Bloch-vector toolkit for qutrit density matrices")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Validity tolerance (default: $QUTRIT_TOL or 1e-10).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether a state file describes a valid density matrix.
    Check {
        /// JSON state file with "rho" or "coefficients".
        file: PathBuf,
    },
    /// Coefficients, Bloch vectors and derived geometry of a matrix.
    Decompose(DecomposeArgs),
    /// Density matrix from a coefficient file.
    Reconstruct {
        /// JSON state file with "coefficients".
        file: PathBuf,
    },
    /// Draw random valid states.
    Sample(SampleArgs),
    /// Evolve a state under exp(iθG) and export the trajectory.
    Evolve(EvolveArgs),
    /// Test two states for orthogonality (at least one must be pure).
    Ortho {
        /// First state file.
        first: PathBuf,
        /// Second state file.
        second: PathBuf,
    },
    /// Print the commutator table of the qutrit basis.
    Table,
    /// Run the acceptance checks.
    Selftest {
        /// Smaller sample sizes.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    /// State file holding "rho".
    #[arg(long = "rho", value_name = "FILE", conflicts_with = "file")]
    rho: Option<PathBuf>,
    /// State file holding "rho" or "coefficients".
    #[arg(value_name = "FILE", required_unless_present = "rho")]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Master seed; sample k uses a seed derived from (seed, k).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of states.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Dimension; 3 uses the Bloch-vector sampler, others the Gram construction.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Write all samples to one JSON file.
    #[arg(long, conflicts_with = "out_dir")]
    out: Option<PathBuf>,
    /// Write one state file per sample.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    /// Initial state file.
    file: PathBuf,
    /// Generator name: A12, B13, C23, ...
    #[arg(long)]
    generator: Generator,
    /// Final angle; samples are equispaced on [0, theta_max].
    #[arg(long, allow_negative_numbers = true)]
    theta_max: f64,
    /// Number of samples, endpoints included.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// CSV output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verdict,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the CLI with the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut PipeSafe(stdout.lock()), &mut stderr.lock())
}

/// Treats a closed reader (`qutrit ... | head`) as a sink so the exit code
/// still reflects the verdict.
struct PipeSafe<W>(W);

impl<W: Write> Write for PipeSafe<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        match self.0.write(buf) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(buf.len()),
            r => r,
        }
    }

    fn flush(&mut self) -> std::io::Result<()> {
        match self.0.flush() {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        }
    }
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let tol = match resolve_tol(cli.tol) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let ctx = Ctx { format: cli.format, tol };
    let result = match cli.command {
        Command::Check { file } => ctx.check(&file, out),
        Command::Decompose(a) => ctx.decompose(a.rho.or(a.file).as_deref().expect("clap enforces one"), out),
        Command::Reconstruct { file } => ctx.reconstruct(&file, out),
        Command::Sample(a) => ctx.sample(&a, out),
        Command::Evolve(a) => ctx.evolve(&a, out),
        Command::Ortho { first, second } => ctx.ortho(&first, &second, out),
        Command::Table => ctx.table(out),
        Command::Selftest { quick } => ctx.selftest(quick, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Verdict) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> std::result::Result<f64, String> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(tolerance::ENV_TOLERANCE) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("{}={s:?} is not a number", tolerance::ENV_TOLERANCE))?,
            Err(_) => tolerance::VALIDITY,
        },
    };
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(format!("tolerance must be a finite nonnegative number, got {tol}"))
    }
}

struct Ctx {
    format: Format,
    tol: f64,
}

fn read_state(path: &Path) -> std::result::Result<StateInput, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn fmt_vec(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" ")
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}

fn fmt_opt_vec(xs: &[Option<f64>]) -> String {
    xs.iter()
        .map(|x| x.map_or_else(|| "undefined".to_string(), fmt_f64))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Ctx {
    fn tolerances(&self) -> Tolerances {
        Tolerances::default()
    }

    fn emit_json<T: Serialize + ?Sized>(&self, out: &mut dyn Write, v: &T) -> Outcome {
        out.write_all(to_json_string(v)?.as_bytes())?;
        Ok(())
    }

    fn load_qudit(&self, path: &Path) -> std::result::Result<QuditCoefficients, Failure> {
        let input = read_state(path)?;
        Ok(decompose_qudit_with(&input.to_matrix(), input.dim(), &self.tolerances())?)
    }

    fn load_qutrit(&self, path: &Path) -> std::result::Result<QutritCoefficients, Failure> {
        let input = read_state(path)?;
        if input.dim() != 3 {
            return Err(Failure::Usage(format!(
                "{}: this command needs a qutrit (d = 3), got d = {}",
                path.display(),
                input.dim()
            )));
        }
        Ok(decompose_with(&input.to_matrix(), &self.tolerances())?)
    }

    fn check(&self, path: &Path, out: &mut dyn Write) -> Outcome {
        let input = read_state(path)?;
        let d = input.dim();
        let coeffs = match decompose_qudit_with(&input.to_matrix(), d, &self.tolerances()) {
            Ok(c) => c,
            Err(e @ (Error::NotHermitian { .. } | Error::BadTrace { .. })) => {
                match self.format {
                    Format::Json => self.emit_json(out, &json!({"d": d, "valid": false, "reason": e.to_string()}))?,
                    Format::Text => writeln!(out, "invalid: {e}")?,
                }
                return Err(Failure::Verdict);
            }
            Err(e) => return Err(e.into()),
        };
        let valid = if d == 3 {
            let report = check_constraints(&coeffs.to_qutrit()?, self.tol);
            match self.format {
                Format::Json => self.emit_json(
                    out,
                    &json!({"d": 3, "verdict": "necessary and sufficient", "valid": report.overall,
                            "tolerance": report.tolerance, "entries": report.entries}),
                )?,
                Format::Text => writeln!(out, "{report}")?,
            }
            report.overall
        } else {
            let report = necessary_conditions(&coeffs, self.tol);
            let label = if d > 3 { "necessary conditions only" } else { "necessary and sufficient" };
            match self.format {
                Format::Json => self.emit_json(
                    out,
                    &json!({"d": d, "verdict": label, "valid": report.overall,
                            "tolerance": report.tolerance, "entries": report.entries}),
                )?,
                Format::Text => {
                    let width = report.entries.iter().map(|e| e.label.len()).max().unwrap_or(0);
                    for e in &report.entries {
                        writeln!(
                            out,
                            "{:<width$}  {:>25}  {}",
                            e.label,
                            fmt_f64(e.value),
                            if e.pass { "pass" } else { "FAIL" }
                        )?;
                    }
                    writeln!(
                        out,
                        "overall: {} ({label}, tol {:e})",
                        if report.overall { "valid" } else { "invalid" },
                        report.tolerance
                    )?;
                }
            }
            report.overall
        };
        if valid {
            Ok(())
        } else {
            Err(Failure::Verdict)
        }
    }

    fn decompose(&self, path: &Path, out: &mut dyn Write) -> Outcome {
        let q = self.load_qudit(path)?;
        if q.d != 3 {
            let vectors = subspace_bloch_vectors(&q).ok();
            let p: f64 = q.omega.iter().map(|w| w * w).sum::<f64>()
                + 0.5 * q.alpha.iter().chain(&q.beta).map(|x| x * x).sum::<f64>();
            return match self.format {
                Format::Json => self.emit_json(
                    out,
                    &json!({"d": q.d,
                            "coefficients": {"omega": q.omega, "alpha": q.alpha, "beta": q.beta},
                            "subspaces": vectors, "purity": p}),
                ),
                Format::Text => {
                    writeln!(out, "d       {}", q.d)?;
                    writeln!(out, "omega   {}", fmt_vec(&q.omega))?;
                    writeln!(out, "alpha   {}", fmt_vec(&q.alpha))?;
                    writeln!(out, "beta    {}", fmt_vec(&q.beta))?;
                    writeln!(out, "purity  {}", fmt_f64(p))?;
                    match vectors {
                        Some(vs) => {
                            for v in vs {
                                writeln!(
                                    out,
                                    "u{}{}     {}  bound {}",
                                    v.pair.0,
                                    v.pair.1,
                                    fmt_vec(&v.u),
                                    fmt_f64(v.radius)
                                )?;
                            }
                        }
                        None => writeln!(out, "subspace vectors omitted: state fails the minor conditions")?,
                    }
                    Ok(())
                }
            };
        }
        let c = q.to_qutrit()?;
        let t = bloch_triple_unchecked(&c);
        let g = derived_geometry(&c);
        let p = purity(&c);
        let det = determinant(&reconstruct_qudit(&q)).re;
        match self.format {
            Format::Json => self.emit_json(
                out,
                &json!({
                    "d": 3,
                    "coefficients": c,
                    "bloch": {"u": t.u, "radii": t.radii, "gamma": t.gamma(), "lengths": t.lengths()},
                    "geometry": {"d": g.d, "phi": g.phi, "total_phase": g.total_phase},
                    "purity": p,
                    "determinant": det,
                }),
            ),
            Format::Text => {
                writeln!(out, "omega        {}", fmt_vec(&c.omega))?;
                writeln!(out, "alpha        {}", fmt_vec(&c.alpha))?;
                writeln!(out, "beta         {}", fmt_vec(&c.beta))?;
                for (n, name) in ["u12", "u13", "u23"].iter().enumerate() {
                    writeln!(out, "{name}          {}", fmt_vec(&t.u[n]))?;
                }
                writeln!(out, "radii        {}", fmt_vec(&t.radii))?;
                writeln!(out, "d            {}", fmt_opt_vec(&g.d))?;
                writeln!(out, "phi          {}", fmt_vec(&g.phi))?;
                writeln!(out, "total_phase  {}", fmt_f64(g.total_phase))?;
                writeln!(out, "purity       {}", fmt_f64(p))?;
                writeln!(out, "determinant  {}", fmt_f64(det))?;
                Ok(())
            }
        }
    }

    fn reconstruct(&self, path: &Path, out: &mut dyn Write) -> Outcome {
        let input = read_state(path)?;
        let rho = input.to_matrix();
        match self.format {
            Format::Json => self.emit_json(out, &json!({"d": rho.dim(), "rho": io::matrix_json(&rho)})),
            Format::Text => {
                for row in rho.rows() {
                    let cells: Vec<String> = row.iter().map(|z| fmt_complex(*z)).collect();
                    writeln!(out, "{}", cells.join("  "))?;
                }
                Ok(())
            }
        }
    }

    fn sample(&self, a: &SampleArgs, out: &mut dyn Write) -> Outcome {
        let states: Vec<QuditCoefficients> = if a.d == 3 {
            sample_batch(a.seed, a.count).into_iter().map(QuditCoefficients::from).collect()
        } else {
            (0..a.count as u64)
                .map(|n| sample_gram(derive_seed(a.seed, n), a.d))
                .collect::<crate::error::Result<_>>()?
        };
        let docs: Vec<Value> = states.iter().map(state_json).collect();
        if let Some(dir) = &a.out_dir {
            fs::create_dir_all(dir)?;
            let width = a.count.saturating_sub(1).to_string().len().max(4);
            for (n, doc) in docs.iter().enumerate() {
                fs::write(dir.join(format!("state_{n:0width$}.json")), to_json_string(doc)?)?;
            }
            return match self.format {
                Format::Json => self.emit_json(out, &json!({"written": docs.len(), "dir": dir})),
                Format::Text => Ok(writeln!(out, "wrote {} states to {}", docs.len(), dir.display())?),
            };
        }
        if let Some(path) = &a.out {
            fs::write(path, to_json_string(&docs)?)?;
            return match self.format {
                Format::Json => self.emit_json(out, &json!({"written": docs.len(), "file": path})),
                Format::Text => Ok(writeln!(out, "wrote {} states to {}", docs.len(), path.display())?),
            };
        }
        match self.format {
            Format::Json => self.emit_json(out, &docs),
            Format::Text => {
                for s in &states {
                    writeln!(
                        out,
                        "omega {} | alpha {} | beta {}",
                        fmt_vec(&s.omega),
                        fmt_vec(&s.alpha),
                        fmt_vec(&s.beta)
                    )?;
                }
                Ok(())
            }
        }
    }

    fn evolve(&self, a: &EvolveArgs, out: &mut dyn Write) -> Outcome {
        let c = self.load_qutrit(&a.file)?;
        let points = trajectory(&c, a.generator, a.theta_max, a.steps)?;
        if let Some(path) = &a.out {
            let mut buf = Vec::new();
            io::write_trajectory_csv(&mut buf, &points)?;
            fs::write(path, buf)?;
            return match self.format {
                Format::Json => self.emit_json(out, &json!({"rows": points.len(), "file": path})),
                Format::Text => Ok(writeln!(out, "wrote {} rows to {}", points.len(), path.display())?),
            };
        }
        match self.format {
            Format::Json => self.emit_json(out, &points),
            Format::Text => Ok(io::write_trajectory_csv(out, &points)?),
        }
    }

    fn ortho(&self, first: &Path, second: &Path, out: &mut dyn Write) -> Outcome {
        let p = self.load_qutrit(first)?;
        let q = self.load_qutrit(second)?;
        let is_pure = |c: &QutritCoefficients| (purity(c) - 1.0).abs() <= tolerance::PURITY;
        let (report, mode) = match (is_pure(&p), is_pure(&q)) {
            (true, true) => (orthogonal_pure_pure(&p, &q)?, "pure-pure"),
            (true, false) => (orthogonal_pure_mixed(&p, &q)?, "pure-mixed"),
            (false, true) => (orthogonal_pure_mixed(&q, &p)?, "pure-mixed"),
            (false, false) => {
                return Err(Failure::Usage(
                    "orthogonality test needs at least one pure state".into(),
                ))
            }
        };
        match self.format {
            Format::Json => self.emit_json(out, &json!({"mode": mode, "report": report}))?,
            Format::Text => {
                writeln!(out, "mode             {mode}")?;
                writeln!(out, "population form  {}", fmt_f64(report.population_form))?;
                writeln!(out, "radius form      {}", fmt_f64(report.radius_form))?;
                if let Some(a) = report.angle_form {
                    writeln!(out, "angle form       {}", fmt_f64(a))?;
                }
                writeln!(out, "orthogonal       {}", report.orthogonal)?;
            }
        }
        if report.orthogonal {
            Ok(())
        } else {
            Err(Failure::Verdict)
        }
    }

    fn table(&self, out: &mut dyn Write) -> Outcome {
        let table = commutator_table();
        let matches = table == reference_table();
        match self.format {
            Format::Json => {
                let labels: Vec<String> = TABLE_ORDER.iter().map(|g| g.to_string()).collect();
                let rows: Vec<Vec<String>> = table
                    .iter()
                    .map(|r| r.iter().map(|e| e.to_string()).collect())
                    .collect();
                self.emit_json(
                    out,
                    &json!({"order": labels, "commutators": rows, "matches_reference": matches}),
                )?;
            }
            Format::Text => {
                writeln!(out, "[row, column]")?;
                write!(out, "{}", format_table(&table))?;
            }
        }
        if matches {
            Ok(())
        } else {
            Err(Failure::Verdict)
        }
    }

    fn selftest(&self, quick: bool, out: &mut dyn Write) -> Outcome {
        let cfg = if quick { Config::quick() } else { Config::full() };
        let mut results = Vec::new();
        for r in selftest::run_all_iter(&cfg) {
            if self.format == Format::Text {
                writeln!(out, "{r}")?;
                out.flush()?;
            }
            results.push(r);
        }
        let passed = results.iter().filter(|r| r.pass).count();
        match self.format {
            Format::Json => self.emit_json(
                out,
                &json!({"passed": passed, "total": results.len(), "criteria": results}),
            )?,
            Format::Text => writeln!(out, "{passed}/{} criteria passed", results.len())?,
        }
        if passed == results.len() {
            Ok(())
        } else {
            Err(Failure::Verdict)
        }
    }
}
