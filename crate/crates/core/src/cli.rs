//! Command-line driver: evaluates an example on a time grid, writes the
//! series as CSV or JSON and optionally runs the oracle cross-checks.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::calculus::InvariantVectorField;
use crate::error::{Error, Result};
use crate::expmap::{state_density, z_diffusion, z_state_weights};
use crate::group::IntWindow;
use crate::qsu2::{self, evolve_generator, real_delta, Generator, QSU2Element};
use crate::sweedler::{self, Basis, SweedlerElement};
use crate::verify::{self, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const MAX_STEPS: usize = 1_000_000;

/// Integers shown in the ℤ output columns.
const Z_SHOWN: std::ops::RangeInclusive<i64> = -4..=4;

/// At most this many grid points feed the `--verify` checks.
const VERIFY_SAMPLES: usize = 11;

/// A real number written as a decimal or as a `p/q` fraction.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad_number(s))?;
            let d: f64 = d.trim().parse().map_err(|_| bad_number(s))?;
            if d == 0.0 {
                return Err(Error::input(format!("zero denominator in '{s}'")));
            }
            n / d
        }
        None => s.parse().map_err(|_| bad_number(s))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad_number(s))
    }
}

/// A complex number such as `0.3+0.7i`, `i` or a real fraction.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    if let Ok(v) = parse_real(s) {
        return Ok(v.into());
    }
    let z = Complex64::from_str(s.trim()).map_err(|_| bad_number(s))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad_number(s))
    }
}

fn bad_number(s: &str) -> Error {
    Error::input(format!("cannot parse '{s}' as a number"))
}

/// `start:stop:steps`, giving `steps + 1` equally spaced samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::input("time grid bounds must be finite"));
        }
        if steps > MAX_STEPS {
            return Err(Error::input(format!(
                "at most {MAX_STEPS} steps, got {steps}"
            )));
        }
        if steps == 0 && start != stop {
            return Err(Error::input("a single-sample grid needs start = stop"));
        }
        Ok(TimeGrid { start, stop, steps })
    }

    pub fn samples(&self) -> Vec<f64> {
        if self.steps == 0 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / self.steps as f64;
        (0..=self.steps)
            .map(|k| self.start + h * k as f64)
            .collect()
    }

    /// Up to `n` samples spread over the grid, endpoints included.
    fn thinned(&self, n: usize) -> Vec<f64> {
        let all = self.samples();
        if all.len() <= n {
            return all;
        }
        (0..n).map(|k| all[k * (all.len() - 1) / (n - 1)]).collect()
    }
}

impl FromStr for TimeGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(Error::input(format!(
                "time grid '{s}' is not start:stop:steps"
            )));
        };
        let steps = n
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad step count '{n}'")))?;
        TimeGrid::new(parse_real(a)?, parse_real(b)?, steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
pub enum IntMode {
    /// State weights of the exponential walk.
    #[default]
    Exponential,
    /// The diffusion solution `X⁺ = X⁻ = −λ`.
    Diffusion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Example {
    S3 {
        p: f64,
        q: f64,
        r: f64,
    },
    Integers {
        plus: Complex64,
        minus: Complex64,
        mode: IntMode,
        lambda: f64,
        window: usize,
    },
    Qsu2 {
        q: f64,
        gamma: Complex64,
        delta: Complex64,
        generator: Generator,
    },
    Sweedler {
        a: Complex64,
        b: Complex64,
        lambda: Complex64,
        m0: [Complex64; 4],
    },
}

impl Example {
    pub fn name(&self) -> &'static str {
        match self {
            Example::S3 { .. } => "s3",
            Example::Integers { .. } => "integers",
            Example::Qsu2 { .. } => "qsu2",
            Example::Sweedler { .. } => "sweedler",
        }
    }

    fn params(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        match self {
            Example::S3 { p, q, r } => {
                m.insert("p", p.to_string());
                m.insert("q", q.to_string());
                m.insert("r", r.to_string());
            }
            Example::Integers {
                plus,
                minus,
                mode,
                lambda,
                window,
            } => {
                match mode {
                    IntMode::Exponential => {
                        m.insert("x_plus", plus.to_string());
                        m.insert("x_minus", minus.to_string());
                    }
                    IntMode::Diffusion => {
                        m.insert("lambda", lambda.to_string());
                    }
                }
                m.insert("mode", format!("{mode:?}").to_lowercase());
                m.insert("window", window.to_string());
            }
            Example::Qsu2 {
                q,
                gamma,
                delta,
                generator,
            } => {
                m.insert("q", q.to_string());
                m.insert("gamma", gamma.to_string());
                m.insert("delta", delta.to_string());
                m.insert("generator", generator.name().to_string());
            }
            Example::Sweedler { a, b, lambda, m0 } => {
                m.insert("a", a.to_string());
                m.insert("b", b.to_string());
                m.insert("lambda", lambda.to_string());
                let m0: Vec<String> = m0.iter().map(|z| z.to_string()).collect();
                m.insert("m0", m0.join(","));
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub example: Example,
    pub t_grid: TimeGrid,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub verify: bool,
}

/// A time series: one row per sample, `columns` naming the values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub example: String,
    pub params: BTreeMap<&'static str, String>,
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write<W: Write>(&self, format: Format, mut w: W) -> Result<()> {
        match format {
            Format::Csv => {
                let mut wr = csv::Writer::from_writer(w);
                let header = std::iter::once("t".to_string()).chain(self.columns.iter().cloned());
                wr.write_record(header)?;
                for (t, row) in self.times.iter().zip(&self.rows) {
                    let record: Vec<f64> = std::iter::once(*t).chain(row.iter().copied()).collect();
                    wr.serialize(record)?;
                }
                wr.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, self)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub report: Option<Report>,
}

fn re_im(name: &str) -> [String; 2] {
    [format!("{name}_re"), format!("{name}_im")]
}

/// Evaluates the example on the grid and, with `verify`, the checks.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let times = config.t_grid.samples();
    let (columns, rows): (Vec<String>, Vec<Vec<f64>>) = match &config.example {
        Example::S3 { p, q, r } => {
            let x = InvariantVectorField::s3_imaginary(*p, *q, *r);
            let columns = x.calculus().group().labels().to_vec();
            let rows = times
                .iter()
                .map(|&t| state_density(&x, t).map(|d| d.weights))
                .collect::<Result<_>>()?;
            (columns, rows)
        }
        Example::Integers {
            plus,
            minus,
            mode,
            lambda,
            window,
        } => {
            let w = IntWindow::new(*window)?;
            match mode {
                IntMode::Exponential => {
                    let columns = Z_SHOWN.map(|n| format!("w_{n}")).collect();
                    let rows = times
                        .iter()
                        .map(|&t| {
                            let d = z_state_weights(*plus, *minus, t, w)?;
                            Ok(Z_SHOWN.map(|n| d.weight_at_integer(n)).collect())
                        })
                        .collect::<Result<_>>()?;
                    (columns, rows)
                }
                IntMode::Diffusion => {
                    let columns = Z_SHOWN
                        .map(|n| format!("f_{n}"))
                        .chain(["mass".to_string()])
                        .collect();
                    let rows = times
                        .iter()
                        .map(|&t| {
                            let f = z_diffusion(*lambda, t, w)?;
                            let mass = f.coeffs().iter().map(|z| z.re).sum::<f64>();
                            Ok(Z_SHOWN.map(|n| f.at_integer(n).re).chain([mass]).collect())
                        })
                        .collect::<Result<_>>()?;
                    (columns, rows)
                }
            }
        }
        Example::Qsu2 {
            q,
            gamma,
            delta,
            generator,
        } => {
            let one = QSU2Element::one(*q)?;
            let m0 = evolve_generator(*generator, *gamma, *delta, 0.0, *q)?;
            let monos: Vec<_> = {
                let mut v: Vec<_> = evolve_generator(*generator, *gamma, *delta, 1.0, *q)?
                    .terms()
                    .map(|(m, _)| *m)
                    .chain(m0.terms().map(|(m, _)| *m))
                    .collect();
                v.sort();
                v.dedup();
                v
            };
            let columns = monos
                .iter()
                .flat_map(|m| re_im(&m.to_string()))
                .chain(re_im("psi1"))
                .collect();
            let rows = times
                .iter()
                .map(|&t| {
                    let m = evolve_generator(*generator, *gamma, *delta, t, *q)?;
                    let psi = qsu2::state_value(&m, &one)?;
                    Ok(monos
                        .iter()
                        .flat_map(|mono| {
                            let c = m.coeff(mono);
                            [c.re, c.im]
                        })
                        .chain([psi.re, psi.im])
                        .collect())
                })
                .collect::<Result<_>>()?;
            (columns, rows)
        }
        Example::Sweedler { a, b, lambda, m0 } => {
            let m0 = SweedlerElement::new(*m0);
            let columns = Basis::ALL
                .iter()
                .flat_map(|b| re_im(&format!("m_{}", b.label())))
                .chain(
                    Basis::ALL
                        .iter()
                        .flat_map(|b| re_im(&format!("psi_{}", b.label()))),
                )
                .collect();
            let rows = times
                .iter()
                .map(|&s| {
                    let m = sweedler::evolve(&m0, *a, *b, s);
                    let psi = sweedler::state_functional(&m, *lambda);
                    m.coeffs
                        .iter()
                        .chain(&psi.coeffs)
                        .flat_map(|z| [z.re, z.im])
                        .collect()
                })
                .collect();
            (columns, rows)
        }
    };
    for row in &rows {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric("non-finite value in the output series"));
        }
    }
    let table = Table {
        example: config.example.name().to_string(),
        params: config.example.params(),
        columns,
        times,
        rows,
    };
    let report = if config.verify {
        Some(verify_example(
            &config.example,
            &config.t_grid.thinned(VERIFY_SAMPLES),
        )?)
    } else {
        None
    };
    Ok(Outcome { table, report })
}

fn verify_example(example: &Example, times: &[f64]) -> Result<Report> {
    match example {
        Example::S3 { p, q, r } => verify::check_s3(*p, *q, *r, times),
        Example::Integers {
            plus,
            minus,
            mode,
            lambda,
            window,
        } => {
            let w = IntWindow::new(*window)?;
            let mut rep = match mode {
                IntMode::Exponential => verify::check_integers(*plus, *minus, w, times)?,
                IntMode::Diffusion => {
                    let x = Complex64::new(-lambda, 0.0);
                    verify::check_integers(x, x, w, times)?
                }
            };
            if *mode == IntMode::Diffusion {
                let mass = times
                    .iter()
                    .map(|&t| {
                        Ok((z_diffusion(*lambda, t, w)?
                            .coeffs()
                            .iter()
                            .sum::<Complex64>()
                            - 1.0)
                            .norm())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                rep.push(
                    "integers diffusion mass",
                    mass.into_iter().fold(0.0, f64::max),
                    1e-10,
                );
            }
            Ok(rep)
        }
        Example::Qsu2 {
            q, gamma, delta, ..
        } => verify::check_qsu2(*q, *gamma, *delta, times),
        Example::Sweedler { a, b, m0, .. } => {
            verify::check_sweedler(*a, *b, &SweedlerElement::new(*m0), times)
        }
    }
}

/// Maps an error to its process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numeric(_) | Error::RewriteFuel(_) => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hopf-exp",
    version,
    about = "Exponential map on Hopf *-algebras: example series and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Time grid start:stop:steps (steps + 1 samples); fractions allowed.
    #[arg(long = "t", allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for the randomized checks of verify-all.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also run the oracle cross-checks and write their report.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// S₃ with X = i(p e_u + q e_v + r e_w); writes the six state weights.
    S3 {
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        p: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1/3")]
        q: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1/2")]
        r: String,
        #[command(flatten)]
        common: Common,
    },
    /// ℤ: state weights for |n| ≤ 4, or the diffusion solution.
    Integers {
        /// `real` for X⁺ = 1, X⁻ = −1, or `X⁺,X⁻` as complex numbers.
        #[arg(long, allow_hyphen_values = true, default_value = "real")]
        field: String,
        #[arg(long, value_enum, default_value_t = IntMode::Exponential)]
        mode: IntMode,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lambda: String,
        /// Window radius.
        #[arg(long, default_value_t = 64)]
        window: usize,
        #[command(flatten)]
        common: Common,
    },
    /// ℂ_q[SU₂]: evolution of a generator under X = γe₊ + δe₋.
    Qsu2 {
        #[arg(long, allow_hyphen_values = true, default_value = "0.9")]
        q: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        gamma: String,
        /// Defaults to −q·conj(γ), the real field.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "a")]
        generator: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sweedler–Taft: m(s) and its state from m(0).
    Sweedler {
        #[arg(long, allow_hyphen_values = true, default_value = "0.3+0.7i")]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-0.4+0.25i")]
        b: String,
        /// Haar normalisation φ(tx); imaginary for a Hermitian integral.
        #[arg(long, allow_hyphen_values = true, default_value = "i")]
        lambda: String,
        /// Coefficients of m(0) on 1,t,x,tx.
        #[arg(long, allow_hyphen_values = true, default_value = "0,1,1,0")]
        m0: String,
        #[command(flatten)]
        common: Common,
    },
    /// Every cross-check at seeded random parameters.
    VerifyAll {
        #[command(flatten)]
        common: Common,
    },
}

fn build_config(example: Example, common: &Common, default_t: &str) -> Result<RunConfig> {
    Ok(RunConfig {
        example,
        t_grid: common.t.as_deref().unwrap_or(default_t).parse()?,
        out: common.out.clone(),
        format: common.format,
        verify: common.verify,
    })
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::S3 { common, .. }
            | Command::Integers { common, .. }
            | Command::Qsu2 { common, .. }
            | Command::Sweedler { common, .. }
            | Command::VerifyAll { common } => common,
        }
    }

    /// The run configuration, or `None` for verify-all.
    pub fn to_config(&self) -> Result<Option<RunConfig>> {
        let common = self.common();
        let cfg = match self {
            Command::S3 { p, q, r, .. } => build_config(
                Example::S3 {
                    p: parse_real(p)?,
                    q: parse_real(q)?,
                    r: parse_real(r)?,
                },
                common,
                "0:7:700",
            )?,
            Command::Integers {
                field,
                mode,
                lambda,
                window,
                ..
            } => {
                let (plus, minus) = if field.trim().eq_ignore_ascii_case("real") {
                    (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
                } else {
                    let (p, m) = field
                        .split_once(',')
                        .ok_or_else(|| Error::input("--field is `real` or `X⁺,X⁻`"))?;
                    (parse_complex(p)?, parse_complex(m)?)
                };
                let lambda = parse_real(lambda)?;
                if *mode == IntMode::Diffusion && lambda <= 0.0 {
                    return Err(Error::input("--lambda must be positive"));
                }
                build_config(
                    Example::Integers {
                        plus,
                        minus,
                        mode: *mode,
                        lambda,
                        window: *window,
                    },
                    common,
                    "0:5:500",
                )?
            }
            Command::Qsu2 {
                q,
                gamma,
                delta,
                generator,
                ..
            } => {
                let q = parse_real(q)?;
                if q <= 0.0 {
                    return Err(Error::input("--q must be positive"));
                }
                let gamma = parse_complex(gamma)?;
                let delta = match delta {
                    Some(d) => parse_complex(d)?,
                    None => real_delta(gamma, q),
                };
                let generator = Generator::from_name(generator)
                    .ok_or_else(|| Error::input(format!("unknown generator '{generator}'")))?;
                build_config(
                    Example::Qsu2 {
                        q,
                        gamma,
                        delta,
                        generator,
                    },
                    common,
                    "0:3:300",
                )?
            }
            Command::Sweedler {
                a, b, lambda, m0, ..
            } => {
                let coeffs: Vec<Complex64> =
                    m0.split(',').map(parse_complex).collect::<Result<_>>()?;
                let m0: [Complex64; 4] = coeffs
                    .try_into()
                    .map_err(|_| Error::input("--m0 takes four comma-separated coefficients"))?;
                build_config(
                    Example::Sweedler {
                        a: parse_complex(a)?,
                        b: parse_complex(b)?,
                        lambda: parse_complex(lambda)?,
                        m0,
                    },
                    common,
                    "0:2:200",
                )?
            }
            Command::VerifyAll { .. } => return Ok(None),
        };
        Ok(Some(cfg))
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_report(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = open_out(Some(p))?;
            match format {
                Format::Csv => report.write_csv(&mut w)?,
                Format::Json => writeln!(w, "{}", report.to_json()?)?,
            }
            w.flush()?;
        }
        None => eprint!("{report}"),
    }
    Ok(())
}

/// `<out>.verify.<csv|json>` next to the data file.
fn report_path(out: &Path, format: Format) -> PathBuf {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut name = out.file_name().map(OsString::from).unwrap_or_default();
    name.push(format!(".verify.{ext}"));
    out.with_file_name(name)
}

fn execute(cli: &Cli) -> Result<i32> {
    let common = cli.command.common();
    let Some(config) = cli.command.to_config()? else {
        let report = verify::verify_all(common.seed)?;
        match &common.out {
            Some(p) => write_report(&report, common.format, Some(p))?,
            None => print!("{report}"),
        }
        return Ok(if report.passed() {
            EXIT_OK
        } else {
            EXIT_VERIFY
        });
    };
    let outcome = run(&config)?;
    let mut w = open_out(config.out.as_deref())?;
    outcome.table.write(config.format, &mut w)?;
    w.flush()?;
    let Some(report) = outcome.report else {
        return Ok(EXIT_OK);
    };
    let rpath = config.out.as_deref().map(|o| report_path(o, config.format));
    write_report(&report, config.format, rpath.as_deref())?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

/// Parses `args` (program name first), runs and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        // a closed downstream pipe (`| head`) is not a failure
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Error::Csv(e)) if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe) => {
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
