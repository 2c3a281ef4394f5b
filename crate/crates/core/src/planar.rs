//! The self-dual planar model: weights in the limit `a2 = a1 + a3`, where
//! the vertex and IRC weights coincide and W factorizes into ψ-vectors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bbm::{IrcWeight, PsiPair, VERTEX_LABELS};
use crate::error::{Error, Result};
use crate::fermat::{check_modulus, FermatPoint, OmegaTable, WTable};
use crate::geometry::Trihedron;
use crate::verify::{compare, ResidualReport, Sweep, SweepMode, WeightTensor};

/// Largest accepted `|a2 - a1 - a3|`.
pub const PLANAR_TOLERANCE: f64 = 1e-12;

/// Which of the two admissible phase factors the ψ-vectors carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseChoice {
    /// `φ = ω^{(a-b)(a-c)}`, `φ̄ = ω^{(a-b)(b-d)}`.
    First,
    /// `φ = ω^{(a-b)(d-b)}`, `φ̄ = ω^{(a-b)(c-a)}`.
    #[default]
    Second,
}

fn require_planar(tri: &Trihedron) -> Result<()> {
    let gap = (tri.a[1] - tri.a[0] - tri.a[2]).abs();
    if gap > PLANAR_TOLERANCE {
        return Err(Error::DegenerateAngles(format!(
            "a2 - a1 - a3 = {gap:e}; not a planar-limit trihedron"
        )));
    }
    Ok(())
}

/// `r_i = (e^{-iβ_i/N}, ω^{1/4} (2 sin β_i)^{1/N}, e^{iβ_i/N})` for the four
/// excesses. With `β2 = 0` the point `r2` is `(1, 0, 1)`; it is not used.
pub fn r_points(tri: &Trihedron, n: u32) -> Result<[FermatPoint; 4]> {
    check_modulus(n)?;
    let nf = n as f64;
    let quarter = Complex64::from_polar(1.0, PI / (2.0 * nf));
    let mut out = Vec::with_capacity(4);
    for &b in &tri.beta {
        let s = (2.0 * b.sin()).max(0.0);
        out.push(FermatPoint::new(
            Complex64::from_polar(1.0, -b / nf),
            quarter * s.powf(1.0 / nf),
            Complex64::from_polar(1.0, b / nf),
            n,
        )?);
    }
    Ok(out.try_into().expect("four excesses"))
}

/// The points `v(a1, a3)` and `u(a1, a3)` with `a2 = a1 + a3`.
pub fn vu_points(a1: f64, a3: f64, n: u32) -> Result<(FermatPoint, FermatPoint)> {
    check_modulus(n)?;
    let a2 = a1 + a3;
    let (s1, s2, s3) = (a1.sin(), a2.sin(), a3.sin());
    if !(s1 > 0.0 && s2 > 0.0 && s3 > 0.0) || a2 >= PI {
        return Err(Error::DegenerateAngles(format!(
            "a1 = {a1}, a3 = {a3} need a1, a3, a1 + a3 in (0, π)"
        )));
    }
    let nf = n as f64;
    let rx = (s3 / s2).powf(1.0 / nf);
    let ry = (s1 / s2).powf(1.0 / nf);
    let one = Complex64::new(1.0, 0.0);
    let v = FermatPoint::new(
        Complex64::from_polar(rx, -a1 / nf),
        Complex64::from_polar(ry, a3 / nf),
        one,
        n,
    )?;
    let u = FermatPoint::new(
        Complex64::from_polar(rx, (a1 - 2.0 * PI) / nf),
        Complex64::from_polar(ry, -a3 / nf),
        one,
        n,
    )?;
    Ok((v, u))
}

/// `n_k = 1 / (√N e^{iπ(N²-1)/12N} (2 sin a_i sin a_j / sin a_k)^{(N-1)/2N})`
/// with `{i, j}` the complement of `k`.
pub fn n_factor(k: usize, a: [f64; 3], n: u32) -> Result<Complex64> {
    check_modulus(n)?;
    if !(1..=3).contains(&k) {
        return Err(Error::DegenerateAngles(format!("no factor n_{k}")));
    }
    let mut rest = (0..3).filter(|&m| m != k - 1);
    let (i, j) = (rest.next().unwrap(), rest.next().unwrap());
    let ratio = 2.0 * a[i].sin() * a[j].sin() / a[k - 1].sin();
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::DegenerateAngles(format!("sines of {a:?} must be positive")));
    }
    let nf = n as f64;
    let phase = PI * (nf * nf - 1.0) / (12.0 * nf);
    let modulus = nf.sqrt() * ratio.powf((nf - 1.0) / (2.0 * nf));
    Ok(Complex64::from_polar(1.0 / modulus, -phase))
}

/// Planar-model weights and ψ-vectors of one planar-limit trihedron.
#[derive(Clone, Debug)]
pub struct PlanarWeights {
    n: u32,
    tri: Trihedron,
    phase: PhaseChoice,
    r: [FermatPoint; 4],
    v: FermatPoint,
    u: FermatPoint,
    r1: WTable,
    r3: WTable,
    or0: WTable,
    vt: WTable,
    ut: WTable,
    omega: OmegaTable,
    n1: Complex64,
}

impl PlanarWeights {
    pub fn new(tri: &Trihedron, n: u32) -> Result<Self> {
        Self::with_phase(tri, n, PhaseChoice::default())
    }

    pub fn with_phase(tri: &Trihedron, n: u32, phase: PhaseChoice) -> Result<Self> {
        require_planar(tri)?;
        let r = r_points(tri, n)?;
        let (v, u) = vu_points(tri.a[0], tri.a[2], n)?;
        Ok(Self {
            n,
            tri: *tri,
            phase,
            r1: r[1].w_table()?,
            r3: r[3].w_table()?,
            or0: r[0].apply_o().w_table()?,
            vt: v.w_table()?,
            ut: u.w_table()?,
            r,
            v,
            u,
            omega: OmegaTable::new(n),
            n1: n_factor(1, tri.a, n)?,
        })
    }

    pub fn r_points(&self) -> &[FermatPoint; 4] {
        &self.r
    }

    pub fn vu(&self) -> (FermatPoint, FermatPoint) {
        (self.v, self.u)
    }

    pub fn n1(&self) -> Complex64 {
        self.n1
    }

    pub fn phase(&self) -> PhaseChoice {
        self.phase
    }

    /// `R^{j1,j2,j3}_{i1,i2,i3} = δ_{j2,i1+i3} δ_{i2,j1+j3} ω^{j1(i3-j3)}
    /// w(r1|i3-j3) w(r3|i1-j1) / w(O r0|j2-i2)`.
    pub fn r_entry(&self, j: [i64; 3], i: [i64; 3]) -> Complex64 {
        let n = self.n as i64;
        let [j1, j2, j3] = j;
        let [i1, i2, i3] = i;
        if (j2 - i1 - i3).rem_euclid(n) != 0 || (i2 - j1 - j3).rem_euclid(n) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.r_entry_unchecked(j, i)
    }

    fn r_entry_unchecked(&self, j: [i64; 3], i: [i64; 3]) -> Complex64 {
        let [j1, j2, j3] = j;
        let [i1, i2, i3] = i;
        self.omega.pow(j1 * (i3 - j3)) * self.r1.get(i3 - j3) * self.r3.get(i1 - j1) / self.or0.get(j2 - i2)
    }

    /// The rank-6 vertex weight, filled only where both deltas hold.
    pub fn r_vertex(&self) -> WeightTensor {
        let n = self.n as i64;
        let mut t = WeightTensor::zeros(self.n, &VERTEX_LABELS);
        for j1 in 0..n {
            for j3 in 0..n {
                for i1 in 0..n {
                    for i3 in 0..n {
                        let j2 = (i1 + i3).rem_euclid(n);
                        let i2 = (j1 + j3).rem_euclid(n);
                        let v = self.r_entry_unchecked([j1, j2, j3], [i1, i2, i3]);
                        t.set(&[j1, j2, j3, i1, i2, i3].map(|k| k as usize), v);
                    }
                }
            }
        }
        t
    }

    /// `ψ(σ|a,b,c,d) = w(v|σ+a-b) ω^{σ(d-b)} φ(a,b,c,d)`.
    pub fn psi_eval(&self, sigma: i64, a: i64, b: i64, c: i64, d: i64) -> Complex64 {
        let phi = match self.phase {
            PhaseChoice::First => self.omega.pow((a - b) * (a - c)),
            PhaseChoice::Second => self.omega.pow((a - b) * (d - b)),
        };
        self.vt.get(sigma + a - b) * self.omega.pow(sigma * (d - b)) * phi
    }

    /// `ψ̄(σ|a,b,c,d) = ω^{σ(c-a)} / w(u|σ+a-b) φ̄(a,b,c,d)`.
    pub fn psibar_eval(&self, sigma: i64, a: i64, b: i64, c: i64, d: i64) -> Complex64 {
        let phi = match self.phase {
            PhaseChoice::First => self.omega.pow((a - b) * (b - d)),
            PhaseChoice::Second => self.omega.pow((a - b) * (c - a)),
        };
        self.omega.pow(sigma * (c - a)) / self.ut.get(sigma + a - b) * phi
    }

    /// `L = δ_{j1,j3-i2} δ_{j1,i3-j2} w(v|i1-j1) ω^{j2(i1-j1)}`.
    pub fn l_planar(&self, i: [i64; 3], j: [i64; 3]) -> Complex64 {
        let n = self.n as i64;
        let [i1, i2, i3] = i;
        let [j1, j2, j3] = j;
        if (j1 - j3 + i2).rem_euclid(n) != 0 || (j1 - i3 + j2).rem_euclid(n) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.vt.get(i1 - j1) * self.omega.pow(j2 * (i1 - j1))
    }

    fn gauge_phase(&self, s: [i64; 8]) -> Complex64 {
        let [a, e, _, g, b, _, d, h] = s;
        self.omega.pow(-(a - b) * (d - h) - (a - g) * (h - e))
    }

    /// `n1 Σ_σ ψ(σ|e,h,c,d) ψ̄(σ|a,b,g,f)` for spins `[a,e,f,g,b,c,d,h]`.
    pub fn decomposed(&self, s: [i64; 8]) -> Complex64 {
        let [a, e, f, g, b, c, d, h] = s;
        let sum: Complex64 = (0..self.n as i64)
            .map(|sigma| self.psi_eval(sigma, e, h, c, d) * self.psibar_eval(sigma, a, b, g, f))
            .sum();
        sum * self.n1
    }
}

impl IrcWeight for PlanarWeights {
    fn modulus(&self) -> u32 {
        self.n
    }

    fn trihedron(&self) -> &Trihedron {
        &self.tri
    }

    /// `ω^{(h-e)(a-d-g+h)} w(r1|a-d-g+h) w(r3|b-a-h+e) / w(O r0|b-d-g+e)`.
    fn eval(&self, s: [i64; 8]) -> Complex64 {
        let [a, e, _f, g, b, _c, d, h] = s;
        let x = a - d - g + h;
        self.omega.pow((h - e) * x) * self.r1.get(x) * self.r3.get(b - a - h + e) / self.or0.get(b - d - g + e)
    }
}

impl PsiPair for PlanarWeights {
    fn psi(&self, sigma: i64, x: [i64; 4]) -> Complex64 {
        self.psi_eval(sigma, x[0], x[1], x[2], x[3])
    }

    fn psibar(&self, sigma: i64, x: [i64; 4]) -> Complex64 {
        self.psibar_eval(sigma, x[0], x[1], x[2], x[3])
    }
}

/// Spin slots `[a,e,f,g,b,c,d,h]`; `a` is held at zero.
const IRC_GAUGE: usize = 0;

/// Compares `R^{h-e,b-d,g-h}_{b-a,g-e,a-d}` with `W(a|e,f,g|b,c,d|h)` over
/// every spin assignment with `a = 0`.
pub fn self_duality_check(tri: &Trihedron, n: u32) -> Result<ResidualReport> {
    let w = PlanarWeights::new(tri, n)?;
    let mode = SweepMode::Full;
    let pairs = Sweep::new(n, 8, Some(IRC_GAUGE), mode).map(|s| {
        let s: [i64; 8] = s.try_into().unwrap();
        let [a, e, _, g, b, _, d, h] = s;
        (w.r_entry([h - e, b - d, g - h], [b - a, g - e, a - d]), w.eval(s))
    });
    Ok(compare(&pairs, mode))
}

/// Compares `n1 Σ_σ ψ ψ̄` with `W` times the gauge phase
/// `ω^{-(a-b)(d-h)-(a-g)(h-e)}`.
pub fn decompose_check(tri: &Trihedron, n: u32, phase: PhaseChoice, mode: SweepMode) -> Result<ResidualReport> {
    let w = PlanarWeights::with_phase(tri, n, phase)?;
    let pairs = Sweep::new(n, 8, Some(IRC_GAUGE), mode).map(|s| {
        let s: [i64; 8] = s.try_into().unwrap();
        (w.decomposed(s), w.eval(s) * w.gauge_phase(s))
    });
    Ok(compare(&pairs, mode))
}
