//! Named verification suites and their JSON reports.
//!
//! A suite turns a [`SuiteConfig`] into a [`Report`]: a list of identities,
//! each with a residual and a tolerance. Everything except the wall-time
//! field is a pure function of the config.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bbm::{BbmWeights, VERTEX_LABELS};
use crate::error::{Error, Result};
use crate::fermat::{check_modulus, phi_tilde, sample_region_point, CyclicSpin};
use crate::geometry::{
    dihedral_from_planar, interior_dihedral_angles, planar_from_dihedral, sample_planar_quadrilateral,
    sample_tetrahedron, PlanarQuad, TetrahedronAngles, Trihedron,
};
use crate::planar::{decompose_check, self_duality_check, PhaseChoice};
use crate::verify::{
    compare, irc_te_residual_with, psi_eq_residual, psi_eq_residual_ordered, psibar_eq_residual,
    psibar_eq_residual_ordered, random_tensor, vertex_te_residual_for, IrcWiring, Model, ResidualReport, SweepMode,
    WeightTensor, ROTATED_PSI_ORDER,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Points drawn per modulus by the Fermat suite.
pub const FERMAT_POINTS: usize = 200;
/// A negative control passes when its residual exceeds this.
pub const CONTROL_THRESHOLD: f64 = 1e-2;
pub const MAX_MODULUS: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fermat,
    Geometry,
    VertexTe,
    IrcTe,
    Psi,
    Psibar,
    PlanarDual,
    PlanarDecompose,
    All,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Fermat,
        Suite::Geometry,
        Suite::VertexTe,
        Suite::IrcTe,
        Suite::Psi,
        Suite::Psibar,
        Suite::PlanarDual,
        Suite::PlanarDecompose,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fermat => "fermat",
            Suite::Geometry => "geometry",
            Suite::VertexTe => "vertex-te",
            Suite::IrcTe => "irc-te",
            Suite::Psi => "psi",
            Suite::Psibar => "psibar",
            Suite::PlanarDual => "planar-dual",
            Suite::PlanarDecompose => "planar-decompose",
            Suite::All => "all",
        }
    }

    fn uses_tetrahedron(self) -> bool {
        matches!(self, Suite::VertexTe | Suite::IrcTe | Suite::Psi | Suite::Psibar | Suite::All)
    }

    fn uses_quad(self) -> bool {
        matches!(self, Suite::Psi | Suite::Psibar | Suite::PlanarDual | Suite::PlanarDecompose | Suite::All)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite '{s}'; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: u32,
    pub seed: u64,
    /// Interior dihedral angles of a tetrahedron in radians, in edge order
    /// AB, AC, AD, BC, BD, CD; sampled from `seed` when absent.
    pub angles: Option<[f64; 6]>,
    /// Overrides every identity's default tolerance.
    pub tolerance: Option<f64>,
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(suite: Suite, n: u32, seed: u64) -> Self {
        Self {
            suite,
            n,
            seed,
            angles: None,
            tolerance: None,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_modulus(self.n)?;
        if self.n > MAX_MODULUS {
            return Err(Error::InvalidModulus(self.n));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Plan(format!("tolerance must be positive, got {t}")));
            }
        }
        if self.samples == 0 {
            return Err(Error::Plan("samples must be at least 1".into()));
        }
        Ok(())
    }

    fn sampled_unless(&self, full: bool) -> SweepMode {
        if full {
            SweepMode::Full
        } else {
            SweepMode::Sampled {
                samples: self.samples,
                seed: self.seed,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// Must hold within tolerance.
    Identity,
    /// Must fail by more than [`CONTROL_THRESHOLD`].
    Control,
    /// Reported only; does not affect the verdict.
    Info,
}

/// Which residual field the tolerance applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Absolute,
    Relative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub kind: IdentityKind,
    pub metric: Metric,
    pub tolerance: f64,
    pub passed: bool,
    pub report: ResidualReport,
}

impl IdentityResult {
    pub fn residual(&self) -> f64 {
        match self.metric {
            Metric::Absolute => self.report.max_abs_diff,
            Metric::Relative => self.report.rel_diff,
        }
    }
}

/// Angle data the suites ran on.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AngleData {
    /// Spectral angles fed to the weights.
    pub theta: Option<[f64; 6]>,
    pub interior: Option<[f64; 6]>,
    pub trihedra: Option<[Trihedron; 4]>,
    pub vertices: Option<[[f64; 3]; 4]>,
    pub planar_quad: Option<PlanarQuad>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: Suite,
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub angles: AngleData,
    pub identities: Vec<IdentityResult>,
    pub passed: bool,
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite-or-null numbers")
    }

    pub fn identity(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|i| i.name == name)
    }
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    out: Vec<IdentityResult>,
}

impl Runner<'_> {
    fn push(&mut self, name: &str, kind: IdentityKind, metric: Metric, default_tol: f64, report: ResidualReport) {
        let tolerance = match kind {
            IdentityKind::Identity => self.cfg.tolerance.unwrap_or(default_tol),
            _ => default_tol,
        };
        let mut result = IdentityResult {
            name: name.to_string(),
            kind,
            metric,
            tolerance,
            passed: true,
            report,
        };
        let r = result.residual();
        result.passed = match kind {
            IdentityKind::Identity => r <= tolerance,
            IdentityKind::Control => r > tolerance,
            IdentityKind::Info => true,
        };
        self.out.push(result);
    }

    fn identity(&mut self, name: &str, tol: f64, report: ResidualReport) {
        self.push(name, IdentityKind::Identity, Metric::Relative, tol, report);
    }

    fn absolute(&mut self, name: &str, tol: f64, report: ResidualReport) {
        self.push(name, IdentityKind::Identity, Metric::Absolute, tol, report);
    }

    fn control(&mut self, name: &str, report: ResidualReport) {
        self.push(name, IdentityKind::Control, Metric::Relative, CONTROL_THRESHOLD, report);
    }
}

fn real_pairs(values: impl IntoIterator<Item = (f64, f64)>) -> Vec<(Complex64, Complex64)> {
    values
        .into_iter()
        .map(|(a, b)| (Complex64::new(a, 0.0), Complex64::new(b, 0.0)))
        .collect()
}

fn fermat_suite(r: &mut Runner) -> Result<()> {
    let n = r.cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(r.cfg.seed);
    let one = Complex64::new(1.0, 0.0);
    let (mut product, mut inversion, mut forms) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..FERMAT_POINTS {
        let p = sample_region_point(n, &mut rng)?;
        let table = p.w_table()?;
        let op = p.apply_o().w_table()?;
        product.push((table.values().iter().product(), one));
        for a in 0..n as i64 {
            inversion.push((table.get(a) * op.get(-a) * phi_tilde(CyclicSpin::new(a, n), n), one));
        }
        // per-point relative agreement of the two closed forms
        forms.push((p.w_zero()? / p.w_zero_alt()?, one));
    }
    let phi: Complex64 = (0..n as i64).map(|a| phi_tilde(CyclicSpin::new(a, n), n)).product();
    let full = SweepMode::Full;
    r.absolute("w_product", 1e-10, compare(&product, full));
    r.absolute("w_inversion", 1e-10, compare(&inversion, full));
    r.absolute("w_closed_forms", 1e-10, compare(&forms, full));
    r.absolute("phi_tilde_product", 1e-12, compare(&[(phi, one)], full));
    Ok(())
}

fn regular_tetrahedron() -> [[f64; 3]; 4] {
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
}

fn geometry_suite(r: &mut Runner, tet: Option<&TetrahedronAngles>) -> Result<()> {
    let full = SweepMode::Full;
    let mut trihedra: Vec<Trihedron> = Vec::new();
    if let Some(t) = tet {
        trihedra.extend(t.te_weight_angles()?);
    }
    for seed in 0..16 {
        trihedra.extend(sample_tetrahedron(r.cfg.seed.wrapping_add(seed))?.te_weight_angles()?);
    }
    let sums = real_pairs(trihedra.iter().map(|t| (t.beta.iter().sum::<f64>(), PI)));
    let mut trips = Vec::new();
    for t in &trihedra {
        let back = dihedral_from_planar(planar_from_dihedral(t.theta)?)?;
        trips.extend(t.theta.iter().zip(back).map(|(a, b)| (*a, b)));
    }
    let regular = interior_dihedral_angles(&regular_tetrahedron());
    let target = (1.0f64 / 3.0).acos();
    r.absolute("excess_sum", 1e-12, compare(&real_pairs(sums.iter().map(|(a, b)| (a.re, b.re))), full));
    r.absolute("dihedral_planar_round_trip", 1e-10, compare(&real_pairs(trips), full));
    r.absolute("regular_tetrahedron", 1e-10, compare(&real_pairs(regular.map(|x| (x, target))), full));
    Ok(())
}

fn vertex_suite(r: &mut Runner, tris: &[Trihedron; 4]) -> Result<()> {
    let n = r.cfg.n;
    let mode = r.cfg.sampled_unless(n == 2);
    let mut rs: Vec<WeightTensor> = Vec::with_capacity(4);
    for t in tris {
        rs.push(BbmWeights::new(t, n)?.r_vertex());
    }
    let mut rs: [WeightTensor; 4] = rs.try_into().expect("four weights");
    r.identity("vertex_te", 1e-8, vertex_te_residual_for(&rs, mode)?);
    rs[1] = random_tensor(n, &VERTEX_LABELS, r.cfg.seed);
    r.control("vertex_te_random_control", vertex_te_residual_for(&rs, mode)?);
    Ok(())
}

fn irc_suite(r: &mut Runner, tris: &[Trihedron; 4]) -> Result<()> {
    let n = r.cfg.n;
    let mode = r.cfg.sampled_unless(n == 2);
    let ws = [
        BbmWeights::new(&tris[0], n)?,
        BbmWeights::new(&tris[1], n)?,
        BbmWeights::new(&tris[2], n)?,
        BbmWeights::new(&tris[3], n)?,
    ];
    r.identity("irc_te", 1e-8, irc_te_residual_with(&ws, mode, IrcWiring::Standard)?);
    r.control("irc_te_shuffled_control", irc_te_residual_with(&ws, mode, IrcWiring::Shuffled)?);
    Ok(())
}

fn psi_suite(r: &mut Runner, tris: &[Trihedron; 4], quad: &PlanarQuad, bar: bool) -> Result<()> {
    let n = r.cfg.n;
    let mode = r.cfg.sampled_unless(n == 2);
    let planar_mode = r.cfg.sampled_unless(n <= 3);
    let (name, eq, ordered): (&str, EqFn, OrderedEqFn) = if bar {
        ("psibar", psibar_eq_residual, psibar_eq_residual_ordered)
    } else {
        ("psi", psi_eq_residual, psi_eq_residual_ordered)
    };
    r.identity(&format!("{name}_bbm"), 1e-8, eq(tris, n, Model::Bbm, mode)?);
    r.identity(&format!("{name}_planar"), 1e-8, eq(&quad.trihedra, n, Model::Planar, planar_mode)?);
    r.control(
        &format!("{name}_bbm_rotated_control"),
        ordered(tris, n, Model::Bbm, mode, ROTATED_PSI_ORDER)?,
    );
    Ok(())
}

type EqFn = fn(&[Trihedron; 4], u32, Model, SweepMode) -> Result<ResidualReport>;
type OrderedEqFn = fn(&[Trihedron; 4], u32, Model, SweepMode, [usize; 3]) -> Result<ResidualReport>;

const QUAD_VERTICES: [&str; 4] = ["A", "B", "C", "D"];

fn planar_dual_suite(r: &mut Runner, quad: &PlanarQuad) -> Result<()> {
    for (t, v) in quad.trihedra.iter().zip(QUAD_VERTICES) {
        r.identity(&format!("self_duality_{v}"), 1e-12, self_duality_check(t, r.cfg.n)?);
    }
    Ok(())
}

fn planar_decompose_suite(r: &mut Runner, quad: &PlanarQuad) -> Result<()> {
    let mode = r.cfg.sampled_unless(r.cfg.n <= 3);
    for (t, v) in quad.trihedra.iter().zip(QUAD_VERTICES) {
        r.identity(&format!("decompose_{v}"), 1e-9, decompose_check(t, r.cfg.n, PhaseChoice::Second, mode)?);
    }
    let first = decompose_check(&quad.trihedra[0], r.cfg.n, PhaseChoice::First, mode)?;
    r.push("decompose_first_phase_A", IdentityKind::Info, Metric::Relative, 1e-9, first);
    Ok(())
}

/// Runs `cfg.suite` and assembles its report.
pub fn run(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let mut angles = AngleData::default();
    let tet = if cfg.suite.uses_tetrahedron() || cfg.suite == Suite::Geometry {
        let t = match cfg.angles {
            Some(interior) => TetrahedronAngles::from_interior(interior)?,
            None => sample_tetrahedron(cfg.seed)?,
        };
        let tris = t.nondegenerate_trihedra()?;
        angles.theta = Some(t.theta);
        angles.interior = Some(t.interior_angles());
        angles.trihedra = Some(tris);
        angles.vertices = t.vertices;
        Some(t)
    } else {
        None
    };
    let quad = if cfg.suite.uses_quad() {
        let q = sample_planar_quadrilateral(cfg.seed)?;
        angles.planar_quad = Some(q.clone());
        Some(q)
    } else {
        None
    };

    let mut runner = Runner { cfg, out: Vec::new() };
    let tris = angles.trihedra;
    let each = |s: Suite| cfg.suite == s || cfg.suite == Suite::All;
    if each(Suite::Fermat) {
        fermat_suite(&mut runner)?;
    }
    if each(Suite::Geometry) {
        geometry_suite(&mut runner, tet.as_ref())?;
    }
    if let Some(tris) = &tris {
        if each(Suite::VertexTe) {
            vertex_suite(&mut runner, tris)?;
        }
        if each(Suite::IrcTe) {
            irc_suite(&mut runner, tris)?;
        }
    }
    if let (Some(tris), Some(quad)) = (&tris, &quad) {
        if each(Suite::Psi) {
            psi_suite(&mut runner, tris, quad, false)?;
        }
        if each(Suite::Psibar) {
            psi_suite(&mut runner, tris, quad, true)?;
        }
    }
    if let Some(quad) = &quad {
        if each(Suite::PlanarDual) {
            planar_dual_suite(&mut runner, quad)?;
        }
        if each(Suite::PlanarDecompose) {
            planar_decompose_suite(&mut runner, quad)?;
        }
    }
    let identities = runner.out;
    Ok(Report {
        schema: SCHEMA_VERSION,
        suite: cfg.suite,
        n: cfg.n,
        seed: cfg.seed,
        samples: cfg.samples,
        angles,
        passed: identities.iter().all(|i| i.passed),
        identities,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
