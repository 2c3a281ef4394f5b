//! The Bazhanov-Baxter model: spectral points, the vertex weight `R`, the
//! IRC weight `W`, the ψ and ψ̄ vectors and the L-operators built from them.
//!
//! All spins are plain integers reduced mod `N` on use.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermat::{check_modulus, FermatPoint, OmegaTable, PhaseConstants, WTable};
use crate::geometry::{psi_arg_swap, Trihedron};
use crate::verify::WeightTensor;

/// Labels of a materialized vertex weight: upper indices, then lower.
pub const VERTEX_LABELS: [&str; 6] = ["j1", "j2", "j3", "i1", "i2", "i3"];

/// A weight of Interaction-Round-a-Cube type, `W(a|e,f,g|b,c,d|h)`.
///
/// Spins are passed in the order `[a, e, f, g, b, c, d, h]`.
pub trait IrcWeight: Sync {
    fn modulus(&self) -> u32;
    fn trihedron(&self) -> &Trihedron;
    fn eval(&self, s: [i64; 8]) -> Complex64;
}

impl<W: IrcWeight + ?Sized> IrcWeight for &W {
    fn modulus(&self) -> u32 {
        (**self).modulus()
    }
    fn trihedron(&self) -> &Trihedron {
        (**self).trihedron()
    }
    fn eval(&self, s: [i64; 8]) -> Complex64 {
        (**self).eval(s)
    }
}

/// A pair of intertwining vectors `ψ(σ|x1,x2,x3,x4)`, `ψ̄(σ|x1,x2,x3,x4)`.
///
/// Arguments are positional; the BBM formulas name them `(e,h,c,d)` for ψ
/// and `(a,b,g,f)` for ψ̄.
pub trait PsiPair: Sync {
    fn psi(&self, sigma: i64, x: [i64; 4]) -> Complex64;
    fn psibar(&self, sigma: i64, x: [i64; 4]) -> Complex64;
}

fn require_positive_sines(tri: &Trihedron) -> Result<()> {
    if tri.beta.iter().any(|b| b.sin() <= 0.0 || b.is_nan()) || !(tri.a[2] > 0.0 && tri.a[2] < PI) {
        return Err(Error::DegenerateTrihedron(format!(
            "excesses {:?} must lie in (0, π)",
            tri.beta
        )));
    }
    Ok(())
}

/// The four points `p1..p4` of the vertex weight, all with `z = 1`.
pub fn p_points(tri: &Trihedron, n: u32) -> Result<[FermatPoint; 4]> {
    check_modulus(n)?;
    require_positive_sines(tri)?;
    let pc = PhaseConstants::new(n)?;
    let nf = n as f64;
    let a3 = tri.a[2];
    let [b0, b1, b2, b3] = tri.beta;
    let phase = |t: f64| Complex64::from_polar(1.0, t / nf);
    let root = |r: f64| r.powf(1.0 / nf);
    let s = f64::sin;
    let one = Complex64::new(1.0, 0.0);
    let oh_inv = pc.omega_half.inv();
    let o_inv = pc.omega.inv();
    let pts = [
        (oh_inv * phase(a3) * root(s(b1) / s(b2)), phase(b1) * root(s(a3) / s(b2))),
        (oh_inv * phase(a3) * root(s(b2) / s(b1)), phase(b2) * root(s(a3) / s(b1))),
        (o_inv * phase(a3) * root(s(b3) / s(b0)), phase(-b3) * root(s(a3) / s(b0))),
        (o_inv * phase(a3) * root(s(b0) / s(b3)), phase(-b0) * root(s(a3) / s(b3))),
    ];
    let mut out = [FermatPoint::new_unchecked(one, one, one, n); 4];
    for (slot, (x, y)) in out.iter_mut().zip(pts) {
        *slot = FermatPoint::new(x, y, one, n)?;
    }
    Ok(out)
}

/// `q_i(a1, a2, a3) = O p_i(a1, a3, a2)`.
pub fn q_points(tri: &Trihedron, n: u32) -> Result<[FermatPoint; 4]> {
    let swapped = tri.swap_23()?;
    Ok(p_points(&swapped, n)?.map(|p| p.apply_o()))
}

/// `(s, t, s', t') = (q4, q1, q3, q2)` evaluated at `(a2, π - a3, π - a1)`.
pub fn psi_points(tri: &Trihedron, n: u32) -> Result<[FermatPoint; 4]> {
    let arg = Trihedron::from_planar(psi_arg_swap(tri.a))?;
    let q = q_points(&arg, n)?;
    Ok([q[3], q[0], q[2], q[1]])
}

fn normalization_power(base: f64, n: u32) -> f64 {
    let nf = n as f64;
    base.powf((nf - 1.0) / nf) / nf
}

/// `ρ_k = (1/N) (sin a_k / (2 cos(β0/2) cos(β1/2) cos(β2/2) cos(β3/2)))^{(N-1)/N}`.
pub fn rho(k: usize, tri: &Trihedron, n: u32) -> Result<f64> {
    check_modulus(n)?;
    if !(1..=3).contains(&k) {
        return Err(Error::DegenerateTrihedron(format!("no normalization ρ_{k}")));
    }
    let cos_product: f64 = tri.beta.iter().map(|b| (b / 2.0).cos()).product();
    let sin_ak = tri.a[k - 1].sin();
    if !(cos_product > 0.0 && sin_ak > 0.0) {
        return Err(Error::DegenerateTrihedron(format!(
            "normalization ρ_{k} undefined for {:?}",
            tri.a
        )));
    }
    Ok(normalization_power(sin_ak / (2.0 * cos_product), n))
}

/// All spectral points of one trihedron.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPoints {
    pub p: [FermatPoint; 4],
    pub q: [FermatPoint; 4],
    pub s: FermatPoint,
    pub t: FermatPoint,
    pub sp: FermatPoint,
    pub tp: FermatPoint,
    pub source: Trihedron,
}

impl SpectralPoints {
    pub fn new(tri: &Trihedron, n: u32) -> Result<Self> {
        let [s, t, sp, tp] = psi_points(tri, n)?;
        Ok(Self {
            p: p_points(tri, n)?,
            q: q_points(tri, n)?,
            s,
            t,
            sp,
            tp,
            source: *tri,
        })
    }

    pub fn all(&self) -> impl Iterator<Item = &FermatPoint> {
        self.p
            .iter()
            .chain(self.q.iter())
            .chain([&self.s, &self.t, &self.sp, &self.tp])
    }
}

/// BBM weights for one trihedron, with every w-table precomputed.
#[derive(Clone, Debug)]
pub struct BbmWeights {
    n: u32,
    points: SpectralPoints,
    rho: [f64; 3],
    p: [WTable; 4],
    q: [WTable; 4],
    psi_tables: [WTable; 4],
    omega: OmegaTable,
}

impl BbmWeights {
    pub fn new(tri: &Trihedron, n: u32) -> Result<Self> {
        let points = SpectralPoints::new(tri, n)?;
        let table = |p: &FermatPoint| p.w_table();
        let p = [
            table(&points.p[0])?,
            table(&points.p[1])?,
            table(&points.p[2])?,
            table(&points.p[3])?,
        ];
        let q = [
            table(&points.q[0])?,
            table(&points.q[1])?,
            table(&points.q[2])?,
            table(&points.q[3])?,
        ];
        let psi_tables = [
            table(&points.s)?,
            table(&points.t)?,
            table(&points.sp)?,
            table(&points.tp)?,
        ];
        Ok(Self {
            n,
            rho: [rho(1, tri, n)?, rho(2, tri, n)?, rho(3, tri, n)?],
            points,
            p,
            q,
            psi_tables,
            omega: OmegaTable::new(n),
        })
    }

    pub fn points(&self) -> &SpectralPoints {
        &self.points
    }

    pub fn rho(&self, k: usize) -> f64 {
        self.rho[k - 1]
    }

    /// `R^{j1,j2,j3}_{i1,i2,i3}`.
    pub fn r_entry(&self, j: [i64; 3], i: [i64; 3]) -> Complex64 {
        let n = self.n as i64;
        if (j[1] + j[2] - i[1] - i[2]).rem_euclid(n) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.r_entry_unchecked(j, i)
    }

    fn r_entry_unchecked(&self, j: [i64; 3], i: [i64; 3]) -> Complex64 {
        let [j1, j2, j3] = j;
        let [i1, i2, _] = i;
        self.omega.pow(j3 * (j1 - i1)) * self.rho[2] * self.p[0].get(i1 - i2) * self.p[1].get(j1 - j2)
            / (self.p[2].get(i1 - j2) * self.p[3].get(j1 - i2))
    }

    /// The rank-6 vertex weight with labels [`VERTEX_LABELS`], filled only on
    /// the delta-consistent tuples `j3 = i2 + i3 - j2`.
    pub fn r_vertex(&self) -> WeightTensor {
        let n = self.n as i64;
        let mut t = WeightTensor::zeros(self.n, &VERTEX_LABELS);
        for j1 in 0..n {
            for j2 in 0..n {
                for i1 in 0..n {
                    for i2 in 0..n {
                        for i3 in 0..n {
                            let j3 = (i2 + i3 - j2).rem_euclid(n);
                            let v = self.r_entry_unchecked([j1, j2, j3], [i1, i2, i3]);
                            t.set(&[j1 as usize, j2 as usize, j3 as usize, i1 as usize, i2 as usize, i3 as usize], v);
                        }
                    }
                }
            }
        }
        t
    }

    /// `ψ(σ|e,h,c,d) = w(s|σ+e-c) / w(t|σ+d-h) ω^{σ(h-c)}`.
    pub fn psi_eval(&self, sigma: i64, e: i64, h: i64, c: i64, d: i64) -> Complex64 {
        let [s, t, _, _] = &self.psi_tables;
        s.get(sigma + e - c) / t.get(sigma + d - h) * self.omega.pow(sigma * (h - c))
    }

    /// `ψ̄(σ|a,b,g,f) = w(s'|σ+f-b) / w(t'|σ+a-g) ω^{σ(g-b)}`.
    pub fn psibar_eval(&self, sigma: i64, a: i64, b: i64, g: i64, f: i64) -> Complex64 {
        let [_, _, sp, tp] = &self.psi_tables;
        sp.get(sigma + f - b) / tp.get(sigma + a - g) * self.omega.pow(sigma * (g - b))
    }

    /// IRF-type L-operator `ρ1 Σ_σ ψ(σ|e,h,c,d) ψ̄(σ|a,b,g,f)`.
    pub fn l_irc(&self, s: [i64; 8]) -> Complex64 {
        let [a, e, f, g, b, c, d, h] = s;
        let sum: Complex64 = (0..self.n as i64)
            .map(|sigma| self.psi_eval(sigma, e, h, c, d) * self.psibar_eval(sigma, a, b, g, f))
            .sum();
        sum * self.rho[0]
    }

    /// Vertex-type L-operator `L_{i,c-e,e-d}^{j,h-d,c-h} = ρ1 ψ(i|e,h,c,d) ψ̄(j|e,h,c,d)`.
    pub fn l_vertex(&self, i: i64, j: i64, e: i64, h: i64, c: i64, d: i64) -> Complex64 {
        self.psi_eval(i, e, h, c, d) * self.psibar_eval(j, e, h, c, d) * self.rho[0]
    }

    /// The vertex L-operator as a rank-6 tensor with labels
    /// `[j, u, v, i, x, y]`, nonzero only where `x + y = u + v`.
    pub fn l_vertex_tensor(&self) -> WeightTensor {
        let n = self.n as i64;
        let mut t = WeightTensor::zeros(self.n, &VERTEX_LABELS);
        for i in 0..n {
            for j in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for u in 0..n {
                            // representative e = 0: c = x, d = -y, h = u - y
                            let (e, c, d, h) = (0, x, -y, u - y);
                            let v = (c - h).rem_euclid(n);
                            let idx = [j, u, v, i, x, y].map(|k| k as usize);
                            t.set(&idx, self.l_vertex(i, j, e, h, c, d));
                        }
                    }
                }
            }
        }
        t
    }
}

impl IrcWeight for BbmWeights {
    fn modulus(&self) -> u32 {
        self.n
    }

    fn trihedron(&self) -> &Trihedron {
        &self.points.source
    }

    /// `ρ2 Σ_σ w(q4|f-a+σ) w(q3|h-c+σ) / (w(q1|d-e+σ) w(q2|b-g+σ)) ω^{σ(e+g-a-c)}`.
    fn eval(&self, s: [i64; 8]) -> Complex64 {
        let [a, e, f, g, b, c, d, h] = s;
        let [q1, q2, q3, q4] = &self.q;
        let mut sum = Complex64::new(0.0, 0.0);
        for sigma in 0..self.n as i64 {
            sum += q4.get(f - a + sigma) * q3.get(h - c + sigma) / (q1.get(d - e + sigma) * q2.get(b - g + sigma))
                * self.omega.pow(sigma * (e + g - a - c));
        }
        sum * self.rho[1]
    }
}

impl PsiPair for BbmWeights {
    fn psi(&self, sigma: i64, x: [i64; 4]) -> Complex64 {
        self.psi_eval(sigma, x[0], x[1], x[2], x[3])
    }

    fn psibar(&self, sigma: i64, x: [i64; 4]) -> Complex64 {
        self.psibar_eval(sigma, x[0], x[1], x[2], x[3])
    }
}

/// The vertex weight of a trihedron.
pub fn r_vertex(tri: &Trihedron, n: u32) -> Result<WeightTensor> {
    Ok(BbmWeights::new(tri, n)?.r_vertex())
}

/// The IRC weight of a trihedron, evaluated on demand.
pub fn w_irc(tri: &Trihedron, n: u32) -> Result<BbmWeights> {
    BbmWeights::new(tri, n)
}

/// An IRC weight with its spin arguments permuted and its trihedron relabeled.
#[derive(Clone, Debug)]
pub struct Relabeled<W> {
    inner: W,
    spin_map: [usize; 8],
    tri: Trihedron,
}

impl<W> Relabeled<W> {
    pub fn into_inner(self) -> W {
        self.inner
    }
}

impl<W: IrcWeight> IrcWeight for Relabeled<W> {
    fn modulus(&self) -> u32 {
        self.inner.modulus()
    }

    fn trihedron(&self) -> &Trihedron {
        &self.tri
    }

    fn eval(&self, s: [i64; 8]) -> Complex64 {
        self.inner.eval(self.spin_map.map(|k| s[k]))
    }
}

fn rotate_trihedron(tri: &Trihedron, order: [usize; 3]) -> Trihedron {
    let [x, y, z] = order;
    Trihedron {
        theta: [tri.theta[x], tri.theta[y], tri.theta[z]],
        a: [tri.a[x], tri.a[y], tri.a[z]],
        beta: [tri.beta[0], tri.beta[x + 1], tri.beta[y + 1], tri.beta[z + 1]],
    }
}

/// Bazhanov-Baxter labeling: `W_B(a|e,f,g|b,c,d|h) = W(a|f,g,e|c,d,b|h)`
/// with `θ^B = (θ3, θ1, θ2)`.
pub fn to_bb_convention<W: IrcWeight>(w: W) -> Relabeled<W> {
    let tri = rotate_trihedron(w.trihedron(), [2, 0, 1]);
    Relabeled {
        inner: w,
        spin_map: [0, 2, 3, 1, 5, 6, 4, 7],
        tri,
    }
}

/// Inverse of [`to_bb_convention`]: `W(a|e,f,g|b,c,d|h) = W_B(a|g,e,f|d,b,c|h)`.
pub fn from_bb_convention<W: IrcWeight>(w: W) -> Relabeled<W> {
    let tri = rotate_trihedron(w.trihedron(), [1, 2, 0]);
    Relabeled {
        inner: w,
        spin_map: [0, 3, 1, 2, 6, 4, 5, 7],
        tri,
    }
}
