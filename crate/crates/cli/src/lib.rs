//! Command-line front end for the spectral library: data tables,
//! verification campaigns with rate fits, and envelope audits.
//!
//! Exit codes are a stable contract: 0 success (and verification passed),
//! 1 verification failed (report still written), 2 usage error, 3
//! computational failure.

// `!(x > 0.0)` guards reject NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod envelope;
pub mod potfile;
pub mod report;
pub mod tables;
pub mod verify;

use clap::{Parser, Subcommand};
use stark_core::airy::ZeroKind;
use stark_core::potential::Potential;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Inclusive index range, written `A..B` (or a single index `N`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: u64,
    pub hi: u64,
}

impl NRange {
    pub fn ns(&self) -> Vec<u64> {
        (self.lo..=self.hi).collect()
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (
                    a.parse::<u64>().map_err(|_| format!("bad range start {a:?}"))?,
                    b.parse::<u64>().map_err(|_| format!("bad range end {b:?}"))?,
                )
            }
            None => {
                let n = s.parse::<u64>().map_err(|_| format!("bad index {s:?}"))?;
                (n, n)
            }
        };
        if lo == 0 {
            return Err("indices start at 1".to_string());
        }
        if hi < lo {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { lo, hi })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// A command failure with its exit-code class.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "stark-spectra",
    version,
    about = "Spectra of half-line Stark operators -y'' + (x + q) y with y'(0) = b y(0)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Worker threads for per-index parallelism (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Zeros of Ai or Ai' with McMahon seeds and residuals.
    Zeros {
        /// Which function's zeros: ai or ai-prime.
        #[arg(long, default_value = "ai-prime")]
        kind: String,
        /// How many zeros, starting from the first.
        #[arg(long)]
        count: u64,
        /// Write to FILE.csv or FILE.json instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact q = 0 spectral data (lambda_n, kappa_n) by Airy root-finding.
    #[command(allow_negative_numbers = true)]
    Unperturbed {
        /// Boundary parameter in y'(0) = b y(0).
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        /// Index range A..B (inclusive) or a single index.
        #[arg(long)]
        n: NRange,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues and norming exponents through the shooting pipeline.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        /// TOML potential spec; omitted means q = 0.
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long)]
        n: NRange,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification campaign and report pass/fail.
    #[command(allow_negative_numbers = true)]
    Verify {
        /// Campaign to run.
        campaign: verify::Campaign,
        /// TOML potential spec (required by eig, kappa, denominator).
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        /// Weight exponent echoed in the report; slope targets assume 2.
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        /// Index range; default depends on the campaign.
        #[arg(long)]
        n: Option<NRange>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refreeze baselines (envelope, denominator) instead of comparing.
        #[arg(long)]
        freeze: bool,
    },
    /// Envelope-inequality audits against frozen baselines.
    EnvelopeAudit {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the measured constants as the new baselines.
        #[arg(long)]
        freeze: bool,
    },
    /// Directional-derivative audit: d lambda_n = int psi_n^2 v / |psi_n|^2.
    #[command(allow_negative_numbers = true)]
    GradientAudit {
        /// TOML potential spec; omitted means q = 0.
        #[arg(long)]
        potential: Option<PathBuf>,
        /// TOML spec of the perturbation direction v.
        #[arg(long)]
        direction: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        /// Comma-separated eigenvalue indices.
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 3, 10])]
        n: Vec<u64>,
        /// Central-difference step scale.
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Run a parsed command line; the result is the process exit code.
pub fn run(cli: Cli) -> u8 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot build thread pool: {e}");
            return 3;
        }
    };
    match pool.install(|| dispatch(cli.cmd)) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<bool, Failure> {
    match cmd {
        Cmd::Zeros { kind, count, out } => {
            let kind = match kind.as_str() {
                "ai" => ZeroKind::Ai,
                "ai-prime" => ZeroKind::AiPrime,
                other => return Err(Failure::usage(format!("unknown zero kind {other:?}"))),
            };
            if count == 0 {
                return Err(Failure::usage("--count must be at least 1"));
            }
            let t = tables::zeros(kind, count).map_err(Failure::numeric)?;
            report::emit(out.as_deref(), || t.to_csv(), || t.to_json(), || t.to_csv())
                .map_err(Failure::numeric)?;
            Ok(true)
        }
        Cmd::Unperturbed { b, n, out } => {
            let t = tables::unperturbed(b, n).map_err(Failure::numeric)?;
            report::emit(out.as_deref(), || t.to_csv(), || t.to_json(), || t.to_csv())
                .map_err(Failure::numeric)?;
            Ok(true)
        }
        Cmd::Spectrum { potential, b, n, out } => {
            let spec = load_or_zero(potential.as_deref())?;
            let t = tables::spectrum(&spec, b, n).map_err(Failure::numeric)?;
            report::emit(out.as_deref(), || t.to_csv(), || t.to_json(), || t.to_csv())
                .map_err(Failure::numeric)?;
            Ok(true)
        }
        Cmd::Verify { campaign, potential, b, r, n, out, freeze } => {
            let spec = match potential {
                Some(p) => Some(potfile::load(&p).map_err(Failure::usage)?),
                None => None,
            };
            let rep = verify::run(verify::VerifyInputs {
                campaign,
                potential: spec,
                b,
                r,
                range: n,
                freeze,
            })?;
            report::emit(out.as_deref(), || rep.to_csv(), || rep.to_json(), || rep.to_csv())
                .map_err(Failure::numeric)?;
            println!("{}", rep.summary_line());
            Ok(rep.passed)
        }
        Cmd::EnvelopeAudit { out, freeze } => {
            let outcome = envelope::run(freeze).map_err(Failure::numeric)?;
            let mut body = String::from("audit,measured,baseline,ok\n");
            for (name, measured, frozen, ok) in &outcome.rows {
                let frozen = frozen.map(|f| f.to_string()).unwrap_or_default();
                body.push_str(&format!("{name},{measured},{frozen},{ok}\n"));
            }
            if let Some(p) = &outcome.frozen_to {
                eprintln!("froze {} baselines to {}", outcome.rows.len(), p.display());
            }
            match out {
                Some(path) => std::fs::write(&path, &body)
                    .map_err(|e| Failure::numeric(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{body}"),
            }
            Ok(outcome.passed)
        }
        Cmd::GradientAudit { potential, direction, b, n, eps, out } => {
            if n.is_empty() {
                return Err(Failure::usage("--n needs at least one index"));
            }
            if !(eps > 0.0) {
                return Err(Failure::usage("--eps must be positive"));
            }
            let q = build(load_or_zero(potential.as_deref())?)?;
            let v = build(potfile::load(&direction).map_err(Failure::usage)?)?;
            let rows = verify::gradient_rows(&q, b, &n, &v, eps).map_err(Failure::numeric)?;
            let passed = rows.iter().all(|(_, ok)| *ok);
            let mut body = String::from("n,finite_difference,analytic,residual,ok\n");
            for (row, ok) in &rows {
                body.push_str(&format!(
                    "{},{},{},{},{ok}\n",
                    row.n, row.numeric, row.predicted, row.residual
                ));
            }
            match out {
                Some(path) => std::fs::write(&path, &body)
                    .map_err(|e| Failure::numeric(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{body}"),
            }
            Ok(passed)
        }
    }
}

fn load_or_zero(path: Option<&std::path::Path>) -> Result<potfile::PotentialSpec, Failure> {
    match path {
        Some(p) => potfile::load(p).map_err(Failure::usage),
        None => Ok(potfile::PotentialSpec::Zero),
    }
}

fn build(spec: potfile::PotentialSpec) -> Result<Potential, Failure> {
    spec.build().map_err(|e| Failure::usage(format!("potential: {e}")))
}
