//! Command-line front end: spectrum tables, eigenfunction evaluation, heat
//! kernels, coadjoint-orbit classification, and the verification suites.
//!
//! All JSON output is deterministic: map keys are sorted and floats are
//! printed with 17 significant digits.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hosc::eigensystem::{self, ModeIndex};
use hosc::grid::{Axis, GridFunction};
use hosc::group::{self, LinearForm, OrbitKind};
use hosc::kernels;
use hosc::quadform::Lambda;
use hosc::report::RunReport;
use hosc::verify;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

#[derive(Parser)]
#[command(name = "hosc", about = "Oscillator spectra on two-step nilpotent groups")]
struct Cli {
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelModel {
    /// Product kernel in the flat model, real-valued
    Kappa,
    /// Kernel of the Schrödinger realization, complex-valued
    Schroedinger,
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda1: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda2: f64,
}

impl LambdaArgs {
    fn parse(&self) -> Result<Lambda, CliError> {
        if self.lambda2 == 0.0 {
            return Err(CliError::DegenerateLambda);
        }
        Lambda::new(self.lambda1, self.lambda2).map_err(CliError::from)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues with their mode indices
    Spectrum {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = SpectrumFormat::Json)]
        format: SpectrumFormat,
    },
    /// Oscillator eigenfunction, at a point or sampled on a grid
    Eigenfunction {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long, default_value_t = 0)]
        m_plus: usize,
        #[arg(long, default_value_t = 0)]
        m_minus: usize,
        /// Evaluate at "u1,u2" instead of dumping a grid
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Heat kernel value at a pair of points "u1,u2,v1,v2"
    HeatKernel {
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value_t = KernelModel::Kappa)]
        model: KernelModel,
    },
    /// Stratum and canonical representative of a coadjoint orbit
    ClassifyOrbit {
        /// Component on the non-central basis directions, "a,b,c,d"
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        /// Central component, "z1,z2"
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Run verification suites; nonzero exit if any check fails
    Verify {
        /// Suite name; all suites when omitted
        #[arg(long)]
        suite: Option<String>,
    },
}

enum CliError {
    DegenerateLambda,
    Usage(String),
    Failed(String),
}

impl From<hosc::Error> for CliError {
    fn from(e: hosc::Error) -> CliError {
        CliError::Failed(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink: Vec<u8> = Vec::new();
    let status = run(&cli.command, &mut sink);
    let write_result = match &cli.out {
        Some(path) => std::fs::write(path, &sink).map_err(|e| e.to_string()),
        None => io::stdout().write_all(&sink).map_err(|e| e.to_string()),
    };
    if let Err(e) = write_result {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match status {
        Ok(code) => code,
        Err(CliError::DegenerateLambda) => {
            eprintln!("error: λ₂ = 0 is outside the generic stratum; no oscillator spectrum");
            ExitCode::from(2)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command, out: &mut Vec<u8>) -> Result<ExitCode, CliError> {
    match command {
        Command::Spectrum {
            lambda,
            count,
            format,
        } => {
            let lamv = lambda.parse()?;
            let pairs = eigensystem::enumerate_spectrum(lamv, *count)?;
            match format {
                SpectrumFormat::Csv => {
                    writeln!(out, "m_plus,m_minus,nu").unwrap();
                    for p in &pairs {
                        writeln!(
                            out,
                            "{},{},{}",
                            p.mode.m_plus,
                            p.mode.m_minus,
                            format_float(p.eigenvalue)
                        )
                        .unwrap();
                    }
                }
                SpectrumFormat::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        m_plus: usize,
                        m_minus: usize,
                        nu: f64,
                    }
                    #[derive(Serialize)]
                    struct Out {
                        command: &'static str,
                        lambda: [f64; 2],
                        modes: Vec<Row>,
                    }
                    let doc = Out {
                        command: "spectrum",
                        lambda: [lamv.lambda1(), lamv.lambda2()],
                        modes: pairs
                            .iter()
                            .map(|p| Row {
                                m_plus: p.mode.m_plus,
                                m_minus: p.mode.m_minus,
                                nu: p.eigenvalue,
                            })
                            .collect(),
                    };
                    emit_json(out, &doc);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eigenfunction {
            lambda,
            m_plus,
            m_minus,
            at,
            half_width,
            points,
        } => {
            let lamv = lambda.parse()?;
            let mode = ModeIndex::new(*m_plus, *m_minus)?;
            if let Some(spec) = at {
                let u = parse_floats::<2>(spec, "--at expects \"u1,u2\"")?;
                let value = eigensystem::eigenfunction(lamv, mode, u)?;
                #[derive(Serialize)]
                struct Out {
                    command: &'static str,
                    lambda: [f64; 2],
                    m_plus: usize,
                    m_minus: usize,
                    at: [f64; 2],
                    value: f64,
                    nu: f64,
                }
                emit_json(
                    out,
                    &Out {
                        command: "eigenfunction",
                        lambda: [lamv.lambda1(), lamv.lambda2()],
                        m_plus: *m_plus,
                        m_minus: *m_minus,
                        at: u,
                        value,
                        nu: eigensystem::eigenvalue(lamv, mode),
                    },
                );
            } else {
                let ax = Axis::new(*points, *half_width)?;
                let g = GridFunction::from_fn(vec![ax, ax], |c| {
                    Complex64::new(
                        eigensystem::eigenfunction(lamv, mode, [c[0], c[1]]).unwrap_or(f64::NAN),
                        0.0,
                    )
                })?;
                emit_json(out, &grid_document("eigenfunction", lamv, &g));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::HeatKernel {
            lambda,
            t,
            at,
            model,
        } => {
            let lamv = lambda.parse()?;
            let p = parse_floats::<4>(at, "--at expects \"u1,u2,v1,v2\"")?;
            let (u, v) = ([p[0], p[1]], [p[2], p[3]]);
            #[derive(Serialize)]
            struct Out {
                command: &'static str,
                lambda: [f64; 2],
                t: f64,
                at: [f64; 4],
                model: &'static str,
                value_real: f64,
                value_imag: f64,
            }
            let (name, value) = match model {
                KernelModel::Kappa => (
                    "kappa",
                    Complex64::new(kernels::kernel_kappa(lamv, *t, u, v)?, 0.0),
                ),
                KernelModel::Schroedinger => {
                    ("schroedinger", kernels::kernel_q_rho(lamv, *t, u, v)?)
                }
            };
            emit_json(
                out,
                &Out {
                    command: "heat-kernel",
                    lambda: [lamv.lambda1(), lamv.lambda2()],
                    t: *t,
                    at: p,
                    model: name,
                    value_real: value.re,
                    value_imag: value.im,
                },
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::ClassifyOrbit { omega, lambda } => {
            let w = parse_floats::<4>(omega, "--omega expects \"a,b,c,d\"")?;
            let z = parse_floats::<2>(lambda, "--lambda expects \"z1,z2\"")?;
            let rep = group::classify_orbit(LinearForm { omega: w, lambda: z });
            #[derive(Serialize)]
            struct Out {
                command: &'static str,
                stratum: &'static str,
                omega: [f64; 4],
                lambda: [f64; 2],
            }
            emit_json(
                out,
                &Out {
                    command: "classify-orbit",
                    stratum: match rep.kind {
                        OrbitKind::Generic => "generic",
                        OrbitKind::Intermediate => "intermediate",
                        OrbitKind::Character => "character",
                    },
                    omega: rep.form.omega,
                    lambda: rep.form.lambda,
                },
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = match suite {
                Some(name) => vec![name.as_str()],
                None => verify::SUITE_NAMES.to_vec(),
            };
            let mut reports: Vec<RunReport> = Vec::new();
            let mut all_passed = true;
            for name in names {
                let report = verify::run_suite(name)?;
                for check in &report.checks {
                    eprintln!(
                        "[{}] {} / {}: measured {:.3e}, tolerance {:.3e}",
                        if check.pass { "PASS" } else { "FAIL" },
                        name,
                        check.name,
                        check.measured,
                        check.tolerance
                    );
                }
                all_passed &= report.all_passed();
                reports.push(report);
            }
            emit_json(out, &reports);
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

#[derive(Serialize)]
struct GridDocument {
    command: &'static str,
    lambda: [f64; 2],
    extents: Vec<f64>,
    spacing: Vec<f64>,
    values_real: Vec<f64>,
    values_imag: Vec<f64>,
}

fn grid_document(command: &'static str, lambda: Lambda, g: &GridFunction) -> GridDocument {
    GridDocument {
        command,
        lambda: [lambda.lambda1(), lambda.lambda2()],
        extents: g.axes().iter().map(|a| a.half_width()).collect(),
        spacing: g.axes().iter().map(|a| a.spacing()).collect(),
        values_real: g.values().iter().map(|v| v.re).collect(),
        values_imag: g.values().iter().map(|v| v.im).collect(),
    }
}

fn parse_floats<const N: usize>(spec: &str, usage: &str) -> Result<[f64; N], CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != N {
        return Err(CliError::Usage(usage.to_string()));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(usage.to_string()))?;
    }
    Ok(out)
}

/// 17 significant digits: enough to round-trip any f64, and deterministic.
fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

struct DeterministicFloats;

impl Formatter for DeterministicFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        CompactFormatter.begin_array_value(writer, first)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        CompactFormatter.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.begin_object_value(writer)
    }
}

fn emit_json<T: Serialize>(out: &mut Vec<u8>, doc: &T) {
    let mut ser = Serializer::with_formatter(&mut *out, DeterministicFloats);
    doc.serialize(&mut ser).expect("serialization cannot fail");
    out.push(b'\n');
}
