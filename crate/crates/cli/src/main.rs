//! `tpsi`: runs the verification suites and writes weight tensors to disk.
//!
//! Exit status: 0 when every identity holds, 1 when a residual exceeds its
//! tolerance, 2 for usage errors, 3 when the geometry is degenerate.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use tpsi_core::bbm::BbmWeights;
use tpsi_core::geometry::{sample_planar_quadrilateral, sample_tetrahedron, TetrahedronAngles};
use tpsi_core::planar::PlanarWeights;
use tpsi_core::suite::{self, IdentityKind, Suite, SuiteConfig, DEFAULT_SAMPLES};
use tpsi_core::verify::WeightTensor;
use tpsi_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tpsi", version, about = "Numerical checks of the tetrahedron equation and its ψ-intertwiners")]
struct Cli {
    #[command(flatten)]
    common: Common,

    /// Verification suite to run.
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    suite: Suite,

    /// Per-identity tolerance; each identity has its own default.
    #[arg(long)]
    tolerance: Option<f64>,

    /// Outer assignments drawn in sampled sweeps.
    #[arg(long, default_value_t = DEFAULT_SAMPLES as u64, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Modulus N of the spins.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=7))]
    n: u32,

    /// Seed for sampled geometry and sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Six interior dihedral angles (edges AB,AC,AD,BC,BD,CD), comma separated;
    /// a tetrahedron is sampled from the seed if omitted.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    angles: Option<Vec<f64>>,

    /// Read --angles in degrees.
    #[arg(long, global = true)]
    degrees: bool,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "TPSI_THREADS")]
    threads: Option<usize>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write one weight tensor in the binary dump format.
    Dump {
        #[arg(long, value_enum)]
        tensor: TensorSel,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TensorSel {
    #[value(name = "R")]
    R,
    #[value(name = "R'")]
    R1,
    #[value(name = "R''")]
    R2,
    #[value(name = "R'''")]
    R3,
    #[value(name = "planar-R")]
    PlanarR,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn angles(common: &Common) -> Result<Option<[f64; 6]>, String> {
    let Some(raw) = &common.angles else {
        return Ok(None);
    };
    let values: [f64; 6] = raw
        .as_slice()
        .try_into()
        .map_err(|_| format!("--angles takes six values, got {}", raw.len()))?;
    Ok(Some(if common.degrees {
        values.map(f64::to_radians)
    } else {
        values
    }))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DegenerateTrihedron(_) | Error::DegenerateAngles(_) | Error::SamplingFailure(_)) => EXIT_DEGENERATE,
        Some(Error::InvalidModulus(_)) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run_suite(cli: &Cli, angles: Option<[f64; 6]>) -> anyhow::Result<bool> {
    let cfg = SuiteConfig {
        suite: cli.suite,
        n: cli.common.n,
        seed: cli.common.seed,
        angles,
        tolerance: cli.tolerance,
        samples: cli.samples as usize,
    };
    let report = suite::run(&cfg)?;
    for id in &report.identities {
        let verdict = match (id.kind, id.passed) {
            (IdentityKind::Info, _) => "INFO",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        eprintln!("{verdict} {:<32} residual {:.3e} (tolerance {:.0e})", id.name, id.residual(), id.tolerance);
    }
    let mut w = sink(&cli.common.out)?;
    writeln!(w, "{}", report.to_json())?;
    w.flush()?;
    Ok(report.passed)
}

fn build_tensor(sel: TensorSel, n: u32, seed: u64, angles: Option<[f64; 6]>) -> anyhow::Result<WeightTensor> {
    if sel == TensorSel::PlanarR {
        let quad = sample_planar_quadrilateral(seed)?;
        return Ok(PlanarWeights::new(&quad.trihedra[0], n)?.r_vertex());
    }
    let tet = match angles {
        Some(interior) => TetrahedronAngles::from_interior(interior)?,
        None => sample_tetrahedron(seed)?,
    };
    let tris = tet.nondegenerate_trihedra()?;
    let slot = match sel {
        TensorSel::R => 0,
        TensorSel::R1 => 1,
        TensorSel::R2 => 2,
        _ => 3,
    };
    Ok(BbmWeights::new(&tris[slot], n)?.r_vertex())
}

fn dump(cli: &Cli, sel: TensorSel, angles: Option<[f64; 6]>) -> anyhow::Result<()> {
    let t = build_tensor(sel, cli.common.n, cli.common.seed, angles)?;
    let mut w = sink(&cli.common.out)?;
    t.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let angles = match angles(&cli.common) {
        Ok(a) => a,
        Err(msg) => return usage(&msg),
    };
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return usage("--tolerance must be positive");
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.common.threads {
        if t == 0 {
            return usage("--threads must be at least 1");
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let result = pool.install(|| match cli.command {
        Some(Command::Dump { tensor }) => dump(&cli, tensor, angles).map(|_| true),
        None => run_suite(&cli, angles),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
