//! Trihedra, tetrahedra, and the spectral angles assigned to each weight.
//!
//! A trihedron is described by its three dihedral angles `θ` or, dually, by
//! its three planar (face) angles `a`, with `a_i` opposite `θ_i`. They are the
//! angles and sides of the same spherical triangle:
//!
//! ```text
//! cos a_i = (cos θ_i + cos θ_j cos θ_k) / (sin θ_j sin θ_k)
//! cos θ_i = (cos a_i - cos a_j cos a_k) / (sin a_j sin a_k)
//! ```

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest linear excess accepted for sampled geometry.
pub const MIN_EXCESS: f64 = 1e-3;
/// Smallest tetrahedron volume accepted, relative to `diameter³`.
pub const MIN_RELATIVE_VOLUME: f64 = 1e-3;
pub const MAX_SAMPLING_ATTEMPTS: usize = 100;

/// Vertex pairs of the six edges, in `θ1..θ6` order: AB, AC, AD, BC, BD, CD.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Edges whose spectral angle is the exterior dihedral angle `π - θ`.
///
/// With these two supplements, the four trihedra of [`te_triples`] are the
/// octants at A and D plus the octants across faces BCD (at B) and ABC (at C).
pub const EXTERIOR_EDGES: [usize; 2] = [3, 4];

fn cyclic<T: Copy>(v: &[T; 3], i: usize) -> (T, T, T) {
    (v[i], v[(i + 1) % 3], v[(i + 2) % 3])
}

/// Planar angles of the trihedron with dihedral angles `theta`.
pub fn planar_from_dihedral(theta: [f64; 3]) -> Result<[f64; 3]> {
    if theta.iter().any(|t| !(*t > 0.0 && *t < PI)) {
        return Err(Error::DegenerateTrihedron(format!(
            "dihedral angles {theta:?} outside (0, π)"
        )));
    }
    let mut a = [0.0; 3];
    for (i, ai) in a.iter_mut().enumerate() {
        let (ti, tj, tk) = cyclic(&theta, i);
        let c = (ti.cos() + tj.cos() * tk.cos()) / (tj.sin() * tk.sin());
        if c.abs() >= 1.0 {
            return Err(Error::DegenerateTrihedron(format!(
                "dihedral angles {theta:?} are not realizable (cos a = {c})"
            )));
        }
        *ai = c.acos();
    }
    Ok(a)
}

/// Dihedral angles of the trihedron with planar angles `a`.
///
/// Degenerate (coplanar) trihedra give dihedral angles 0 or π; cosines are
/// clamped within 1e-12 of ±1 for that case.
pub fn dihedral_from_planar(a: [f64; 3]) -> Result<[f64; 3]> {
    let mut theta = [0.0; 3];
    for (i, ti) in theta.iter_mut().enumerate() {
        let (ai, aj, ak) = cyclic(&a, i);
        let den = aj.sin() * ak.sin();
        if den <= 0.0 {
            return Err(Error::DegenerateTrihedron(format!(
                "planar angles {a:?} have a vanishing sine"
            )));
        }
        let c = (ai.cos() - aj.cos() * ak.cos()) / den;
        if c.abs() > 1.0 + 1e-12 {
            return Err(Error::DegenerateTrihedron(format!(
                "planar angles {a:?} violate the triangle inequality"
            )));
        }
        *ti = c.clamp(-1.0, 1.0).acos();
    }
    Ok(theta)
}

/// Linear excesses `β₀ = π - (a1+a2+a3)/2`, `β_i = (a_j + a_k - a_i)/2`.
pub fn excesses(a: [f64; 3]) -> [f64; 4] {
    let [a1, a2, a3] = a;
    [
        PI - (a1 + a2 + a3) / 2.0,
        (a2 + a3 - a1) / 2.0,
        (a1 + a3 - a2) / 2.0,
        (a1 + a2 - a3) / 2.0,
    ]
}

/// `(a1, a2, a3) -> (a2, π - a3, π - a1)`, the argument of the ψ points.
pub fn psi_arg_swap(a: [f64; 3]) -> [f64; 3] {
    [a[1], PI - a[2], PI - a[0]]
}

/// An oriented trihedron: the spectral argument of a single weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Trihedron {
    pub theta: [f64; 3],
    pub a: [f64; 3],
    pub beta: [f64; 4],
}

impl Trihedron {
    pub fn from_dihedral(theta: [f64; 3]) -> Result<Self> {
        let a = planar_from_dihedral(theta)?;
        Ok(Self {
            theta,
            a,
            beta: excesses(a),
        })
    }

    pub fn from_planar(a: [f64; 3]) -> Result<Self> {
        if a.iter().any(|x| !(*x > 0.0 && *x < PI)) {
            return Err(Error::DegenerateTrihedron(format!(
                "planar angles {a:?} outside (0, π)"
            )));
        }
        Ok(Self {
            theta: dihedral_from_planar(a)?,
            a,
            beta: excesses(a),
        })
    }

    /// Planar-limit trihedron `(a1, a1 + a3, a3)`; here `β₂ = 0` exactly.
    pub fn planar_limit(a1: f64, a3: f64) -> Result<Self> {
        if !(a1 > 0.0 && a3 > 0.0 && a1 + a3 < PI) {
            return Err(Error::DegenerateAngles(format!(
                "planar limit needs a1, a3, a1 + a3 in (0, π); got a1={a1}, a3={a3}"
            )));
        }
        let mut t = Self::from_planar([a1, a1 + a3, a3])?;
        t.beta[2] = 0.0;
        Ok(t)
    }

    pub fn min_excess(&self) -> f64 {
        self.beta.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rejects trihedra with an excess below `min_beta`.
    pub fn require_excess(&self, min_beta: f64) -> Result<()> {
        if self.min_excess() < min_beta {
            return Err(Error::DegenerateTrihedron(format!(
                "linear excesses {:?} below {min_beta}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn is_static_limit(&self, tol: f64) -> bool {
        (self.theta.iter().sum::<f64>() - PI).abs() < tol
    }

    pub fn is_planar_limit(&self, tol: f64) -> bool {
        (self.a[1] - self.a[0] - self.a[2]).abs() < tol
    }

    /// The trihedron with planar angles permuted to `(a1, a3, a2)`.
    pub fn swap_23(&self) -> Result<Self> {
        Self::from_planar([self.a[0], self.a[2], self.a[1]])
    }
}

/// Spectral data of one tetrahedron-equation instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TetrahedronAngles {
    /// Spectral angles `θ1..θ6` fed into the weight assignment.
    pub theta: [f64; 6],
    /// Generating vertices, when the angles come from coordinates.
    pub vertices: Option<[[f64; 3]; 4]>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Interior dihedral angles along the edges in [`EDGES`] order.
pub fn interior_dihedral_angles(v: &[[f64; 3]; 4]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (slot, &(i, j)) in EDGES.iter().enumerate() {
        let mut rest = (0..4).filter(|m| *m != i && *m != j);
        let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
        let e = sub(v[j], v[i]);
        let e_len = norm(e);
        let unit = [e[0] / e_len, e[1] / e_len, e[2] / e_len];
        let project = |p: [f64; 3]| {
            let w = sub(p, v[i]);
            let t = dot(w, unit);
            [w[0] - t * unit[0], w[1] - t * unit[1], w[2] - t * unit[2]]
        };
        let (u, w) = (project(v[k]), project(v[l]));
        out[slot] = (dot(u, w) / (norm(u) * norm(w))).clamp(-1.0, 1.0).acos();
    }
    out
}

/// Signed volume scale check: returns `|volume| / diameter³`.
pub fn relative_volume(v: &[[f64; 3]; 4]) -> f64 {
    let vol = dot(sub(v[1], v[0]), cross(sub(v[2], v[0]), sub(v[3], v[0]))).abs() / 6.0;
    let diam = EDGES
        .iter()
        .map(|&(i, j)| norm(sub(v[j], v[i])))
        .fold(0.0, f64::max);
    if diam == 0.0 {
        return 0.0;
    }
    vol / diam.powi(3)
}

/// Largest accepted `|det G|` for the face-normal Gram matrix.
pub const GRAM_TOLERANCE: f64 = 1e-9;

/// Gram matrix of unit face normals: `G[k][l] = -cos θ` for the edge shared
/// by the faces opposite vertices `k` and `l`.
pub fn face_gram(interior: &[f64; 6]) -> [[f64; 4]; 4] {
    let mut g = [[1.0; 4]; 4];
    for (slot, &(i, j)) in EDGES.iter().enumerate() {
        let mut rest = (0..4).filter(|m| *m != i && *m != j);
        let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
        g[k][l] = -interior[slot].cos();
        g[l][k] = g[k][l];
    }
    g
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    (0..4)
        .map(|c| {
            let minor: [[f64; 3]; 3] =
                std::array::from_fn(|r| std::array::from_fn(|k| m[r + 1][if k < c { k } else { k + 1 }]));
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][c] * det3(&minor)
        })
        .sum()
}

/// The four ordered dihedral triples of the tetrahedron equation:
/// `(θ1,θ2,θ3)`, `(θ1,θ4,θ5)`, `(π-θ2,θ4,θ6)`, `(θ3,π-θ5,θ6)`.
pub fn te_triples(theta: &[f64; 6]) -> [[f64; 3]; 4] {
    let [t1, t2, t3, t4, t5, t6] = *theta;
    [
        [t1, t2, t3],
        [t1, t4, t5],
        [PI - t2, t4, t6],
        [t3, PI - t5, t6],
    ]
}

impl TetrahedronAngles {
    /// Spectral angles given directly.
    pub fn from_theta(theta: [f64; 6]) -> Result<Self> {
        if theta.iter().any(|t| !(*t > 0.0 && *t < PI)) {
            return Err(Error::DegenerateTrihedron(format!(
                "spectral angles {theta:?} outside (0, π)"
            )));
        }
        Ok(Self {
            theta,
            vertices: None,
        })
    }

    /// Spectral angles of a Euclidean tetrahedron: interior dihedral angles
    /// with the [`EXTERIOR_EDGES`] replaced by their supplements.
    pub fn from_vertices(vertices: [[f64; 3]; 4]) -> Result<Self> {
        let rel = relative_volume(&vertices);
        if rel < MIN_RELATIVE_VOLUME {
            return Err(Error::DegenerateTrihedron(format!(
                "tetrahedron volume {rel:e} x diameter³ is too small"
            )));
        }
        let mut theta = interior_dihedral_angles(&vertices);
        for &k in &EXTERIOR_EDGES {
            theta[k] = PI - theta[k];
        }
        Ok(Self {
            theta,
            vertices: Some(vertices),
        })
    }

    /// Interior dihedral angles of a Euclidean tetrahedron, with the
    /// [`EXTERIOR_EDGES`] flipped to give the spectral angles.
    ///
    /// The six angles must be consistent: the Gram matrix of the face normals
    /// must be singular with positive principal 3×3 minors.
    pub fn from_interior(interior: [f64; 6]) -> Result<Self> {
        if interior.iter().any(|t| !(*t > 0.0 && *t < PI)) {
            return Err(Error::DegenerateTrihedron(format!(
                "dihedral angles {interior:?} outside (0, π)"
            )));
        }
        let g = face_gram(&interior);
        let det = det4(&g);
        if det.abs() > GRAM_TOLERANCE {
            return Err(Error::DegenerateTrihedron(format!(
                "angles are not those of a Euclidean tetrahedron (Gram determinant {det:e})"
            )));
        }
        for skip in 0..4 {
            let idx: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
            let m: [[f64; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|c| g[idx[r]][idx[c]]));
            if det3(&m) <= 0.0 {
                return Err(Error::DegenerateTrihedron(format!(
                    "angles at vertex {skip} do not form a trihedron"
                )));
            }
        }
        let mut theta = interior;
        for &k in &EXTERIOR_EDGES {
            theta[k] = PI - theta[k];
        }
        Ok(Self {
            theta,
            vertices: None,
        })
    }

    /// Interior dihedral angles: the spectral angles with the exterior edges
    /// flipped back.
    pub fn interior_angles(&self) -> [f64; 6] {
        let mut out = self.theta;
        for &k in &EXTERIOR_EDGES {
            out[k] = PI - out[k];
        }
        out
    }

    /// Trihedra of `R, R', R'', R'''` (equivalently `W, W', W'', W'''`).
    pub fn te_weight_angles(&self) -> Result<[Trihedron; 4]> {
        let triples = te_triples(&self.theta);
        let mut out = [Trihedron::from_dihedral([PI / 2.0; 3])?; 4];
        for (slot, triple) in out.iter_mut().zip(triples) {
            *slot = Trihedron::from_dihedral(triple)?;
        }
        Ok(out)
    }

    /// Trihedra of `ψ1, ψ2, ψ3`: the last three weight triples.
    pub fn psi_weight_angles(&self) -> Result<[Trihedron; 3]> {
        let t = self.te_weight_angles()?;
        Ok([t[1], t[2], t[3]])
    }

    /// All four trihedra, rejecting any with an excess below [`MIN_EXCESS`].
    pub fn nondegenerate_trihedra(&self) -> Result<[Trihedron; 4]> {
        let t = self.te_weight_angles()?;
        for tri in &t {
            tri.require_excess(MIN_EXCESS)?;
        }
        Ok(t)
    }
}

/// Draws four points uniformly in `[-1, 1]³` until their tetrahedron is
/// nondegenerate, deterministically from `seed`.
pub fn sample_tetrahedron(seed: u64) -> Result<TetrahedronAngles> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let mut v = [[0.0; 3]; 4];
        for p in v.iter_mut() {
            for c in p.iter_mut() {
                *c = rng.gen_range(-1.0..1.0);
            }
        }
        if let Ok(t) = TetrahedronAngles::from_vertices(v) {
            if t.nondegenerate_trihedra().is_ok() {
                return Ok(t);
            }
        }
    }
    Err(Error::SamplingFailure(MAX_SAMPLING_ATTEMPTS))
}

/// A convex planar quadrilateral ABCD: the planar limit of a tetrahedron.
///
/// Its four trihedra are planar-limit trihedra (`a2 = a1 + a3`) in the same
/// slots as [`TetrahedronAngles::te_weight_angles`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanarQuad {
    pub points: [[f64; 2]; 4],
    pub trihedra: [Trihedron; 4],
}

fn angle_at(p: &[[f64; 2]; 4], o: usize, q: usize, r: usize) -> f64 {
    let u = [p[q][0] - p[o][0], p[q][1] - p[o][1]];
    let w = [p[r][0] - p[o][0], p[r][1] - p[o][1]];
    let c = (u[0] * w[0] + u[1] * w[1]) / ((u[0] * u[0] + u[1] * u[1]).sqrt() * (w[0] * w[0] + w[1] * w[1]).sqrt());
    c.clamp(-1.0, 1.0).acos()
}

impl PlanarQuad {
    pub fn from_points(points: [[f64; 2]; 4]) -> Result<Self> {
        let turn = |i: usize| {
            let (a, b, c) = (points[i], points[(i + 1) % 4], points[(i + 2) % 4]);
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        };
        let turns: Vec<f64> = (0..4).map(turn).collect();
        let convex = turns.iter().all(|t| *t > 0.0) || turns.iter().all(|t| *t < 0.0);
        if !convex {
            return Err(Error::DegenerateAngles(
                "quadrilateral ABCD is not strictly convex".into(),
            ));
        }
        let (a, b, c, d) = (0, 1, 2, 3);
        let pa = [angle_at(&points, a, c, d), angle_at(&points, a, b, c)];
        let pb = [angle_at(&points, b, c, d), PI - angle_at(&points, b, a, c)];
        let pc = [PI - angle_at(&points, c, b, d), angle_at(&points, c, a, b)];
        let pd = [angle_at(&points, d, b, c), angle_at(&points, d, a, b)];
        let mut trihedra = [Trihedron::from_dihedral([PI / 2.0; 3])?; 4];
        for (slot, [a1, a3]) in trihedra.iter_mut().zip([pa, pb, pc, pd]) {
            *slot = Trihedron::planar_limit(a1, a3)?;
            let t = slot;
            if t.a.iter().any(|x| *x < MIN_EXCESS || *x > PI - MIN_EXCESS) {
                return Err(Error::DegenerateAngles(format!(
                    "planar angles {:?} too close to 0 or π",
                    t.a
                )));
            }
        }
        Ok(Self { points, trihedra })
    }
}

/// Draws a convex quadrilateral deterministically from `seed`.
pub fn sample_planar_quadrilateral(seed: u64) -> Result<PlanarQuad> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..MAX_SAMPLING_ATTEMPTS * 10 {
        let mut p = [[0.0; 2]; 4];
        for q in p.iter_mut() {
            *q = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        }
        if let Ok(quad) = PlanarQuad::from_points(p) {
            return Ok(quad);
        }
    }
    Err(Error::SamplingFailure(MAX_SAMPLING_ATTEMPTS * 10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn regular() -> [[f64; 3]; 4] {
        [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
    }

    #[test]
    fn orthant_corner() {
        let a = planar_from_dihedral([PI / 2.0; 3]).unwrap();
        for x in a {
            assert_abs_diff_eq!(x, PI / 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn regular_vertex_face_angles() {
        let t = (1.0f64 / 3.0).acos();
        let a = planar_from_dihedral([t; 3]).unwrap();
        // face angles at a regular-tetrahedron vertex, from coordinates
        let v = regular();
        let e1 = sub(v[1], v[0]);
        let e2 = sub(v[2], v[0]);
        let face = (dot(e1, e2) / (norm(e1) * norm(e2))).acos();
        for x in a {
            assert_abs_diff_eq!(x, face, epsilon = 1e-12);
            assert_abs_diff_eq!(x, PI / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn regular_dihedral_angles() {
        let theta = interior_dihedral_angles(&regular());
        for t in theta {
            assert_abs_diff_eq!(t, (1.0f64 / 3.0).acos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn excesses_examples() {
        let b = excesses([PI / 2.0; 3]);
        for x in b {
            assert_abs_diff_eq!(x, PI / 4.0, epsilon = 1e-15);
        }
        let b = excesses([PI / 3.0; 3]);
        assert_abs_diff_eq!(b[0], PI / 2.0, epsilon = 1e-15);
        for x in &b[1..] {
            assert_abs_diff_eq!(*x, PI / 6.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn non_realizable_triples_are_rejected() {
        // angle sum below π has no spherical triangle
        assert!(matches!(
            planar_from_dihedral([0.3, 0.3, 0.3]),
            Err(Error::DegenerateTrihedron(_))
        ));
        assert!(planar_from_dihedral([0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn psi_arg_swap_examples() {
        let s = psi_arg_swap([PI / 2.0; 3]);
        for x in s {
            assert_abs_diff_eq!(x, PI / 2.0, epsilon = 1e-15);
        }
        let s = psi_arg_swap([PI / 3.0, PI / 2.0, PI / 4.0]);
        assert_abs_diff_eq!(s[0], PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 3.0 * PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[2], 2.0 * PI / 3.0, epsilon = 1e-15);
        let a = [0.4, 1.1, 0.9];
        let twice = psi_arg_swap(psi_arg_swap(a));
        assert_abs_diff_eq!(twice[0], PI - a[2], epsilon = 1e-15);
        assert_abs_diff_eq!(twice[1], a[0], epsilon = 1e-15);
        assert_abs_diff_eq!(twice[2], PI - a[1], epsilon = 1e-15);
    }

    #[test]
    fn right_angles_map_to_four_orthants() {
        let t = TetrahedronAngles::from_theta([PI / 2.0; 6]).unwrap();
        for tri in t.te_weight_angles().unwrap() {
            assert_eq!(tri.theta, [PI / 2.0; 3]);
        }
        assert_eq!(t.psi_weight_angles().unwrap().len(), 3);
    }

    #[test]
    fn every_angle_used_twice() {
        // mark θ_k by k-th prime and count appearances (π - θ counts as θ)
        let theta = [0.11, 0.22, 0.33, 0.44, 0.55, 0.66];
        let triples = te_triples(&theta);
        for t in theta {
            let hits = triples
                .iter()
                .flatten()
                .filter(|x| (**x - t).abs() < 1e-15 || (**x - (PI - t)).abs() < 1e-15)
                .count();
            assert_eq!(hits, 2);
        }
    }

    #[test]
    fn psi_angles_are_last_three_weight_angles() {
        let t = sample_tetrahedron(4).unwrap();
        let w = t.te_weight_angles().unwrap();
        let p = t.psi_weight_angles().unwrap();
        assert_eq!(&w[1..], &p[..]);
    }

    #[test]
    fn interior_angles_round_trip_through_gram_check() {
        for seed in 0..50 {
            let t = sample_tetrahedron(seed).unwrap();
            let interior = t.interior_angles();
            let direct = interior_dihedral_angles(&t.vertices.unwrap());
            for (a, b) in interior.iter().zip(direct) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
            }
            assert!(det4(&face_gram(&interior)).abs() < 1e-12);
            let again = TetrahedronAngles::from_interior(interior).unwrap();
            assert_eq!(again.theta, t.theta);
        }
        let regular = [(1.0f64 / 3.0).acos(); 6];
        assert!(TetrahedronAngles::from_interior(regular).is_ok());
        // right angles everywhere: no Euclidean tetrahedron
        assert!(TetrahedronAngles::from_interior([PI / 2.0; 6]).is_err());
        assert!(TetrahedronAngles::from_interior([0.5; 6]).is_err());
    }

    #[test]
    fn coplanar_points_rejected() {
        let v = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
        ];
        assert!(TetrahedronAngles::from_vertices(v).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_tetrahedron(42).unwrap(), sample_tetrahedron(42).unwrap());
        assert_ne!(sample_tetrahedron(42).unwrap(), sample_tetrahedron(43).unwrap());
        assert_eq!(
            sample_planar_quadrilateral(7).unwrap(),
            sample_planar_quadrilateral(7).unwrap()
        );
    }

    #[test]
    fn sampled_trihedra_are_realizable_with_positive_excess() {
        for seed in 0..200 {
            let t = sample_tetrahedron(seed).unwrap();
            for tri in t.te_weight_angles().unwrap() {
                assert!(tri.min_excess() >= MIN_EXCESS);
                assert_abs_diff_eq!(tri.beta.iter().sum::<f64>(), PI, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sampled_trihedra_match_vertex_octants() {
        // planar angles of the A-trihedron are the face angles at A
        let t = sample_tetrahedron(11).unwrap();
        let v = t.vertices.unwrap();
        let ang = |o: usize, p: usize, q: usize| {
            let (u, w) = (sub(v[p], v[o]), sub(v[q], v[o]));
            (dot(u, w) / (norm(u) * norm(w))).acos()
        };
        let tri = t.te_weight_angles().unwrap();
        assert_abs_diff_eq!(tri[0].a[0], ang(0, 2, 3), epsilon = 1e-10);
        assert_abs_diff_eq!(tri[0].a[1], ang(0, 1, 3), epsilon = 1e-10);
        assert_abs_diff_eq!(tri[0].a[2], ang(0, 1, 2), epsilon = 1e-10);
        // the D-trihedron is interior as well
        assert_abs_diff_eq!(tri[3].a[0], ang(3, 1, 2), epsilon = 1e-10);
        assert_abs_diff_eq!(tri[3].a[1], ang(3, 0, 2), epsilon = 1e-10);
        assert_abs_diff_eq!(tri[3].a[2], ang(3, 0, 1), epsilon = 1e-10);
        // B sits across face BCD: the side on BCD is kept, the others supplemented
        assert_abs_diff_eq!(tri[1].a[0], ang(1, 2, 3), epsilon = 1e-10);
        assert_abs_diff_eq!(tri[1].a[1], PI - ang(1, 0, 3), epsilon = 1e-10);
        assert_abs_diff_eq!(tri[1].a[2], PI - ang(1, 0, 2), epsilon = 1e-10);
    }

    #[test]
    fn limits_are_detected() {
        let t = Trihedron::planar_limit(0.5, 0.9).unwrap();
        assert!(t.is_planar_limit(1e-12));
        assert_eq!(t.beta[2], 0.0);
        assert!(!Trihedron::from_dihedral([1.2, 1.3, 1.4]).unwrap().is_planar_limit(1e-6));
        // θ sum → π is the static limit
        let s = Trihedron {
            theta: [1.0, 1.0, PI - 2.0],
            a: [0.0; 3],
            beta: [0.0; 4],
        };
        assert!(s.is_static_limit(1e-12));
        assert!(!Trihedron::from_dihedral([PI / 2.0; 3]).unwrap().is_static_limit(1e-6));
    }

    #[test]
    fn quadrilateral_vertices_are_planar_limits() {
        for seed in 0..50 {
            let q = sample_planar_quadrilateral(seed).unwrap();
            for t in &q.trihedra {
                assert!(t.is_planar_limit(1e-12));
                assert!(t.a.iter().all(|x| *x > 0.0 && *x < PI));
            }
        }
        let square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let q = PlanarQuad::from_points(square).unwrap();
        assert_abs_diff_eq!(q.trihedra[0].a[0], PI / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.trihedra[0].a[2], PI / 4.0, epsilon = 1e-12);
        let bowtie = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(PlanarQuad::from_points(bowtie).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn excess_sum_is_pi(a1 in 0.01..3.1f64, a2 in 0.01..3.1f64, a3 in 0.01..3.1f64) {
                let s: f64 = excesses([a1, a2, a3]).iter().sum();
                prop_assert!((s - PI).abs() < 1e-12);
            }

            #[test]
            fn dihedral_planar_round_trip(t1 in 0.2..2.9f64, t2 in 0.2..2.9f64, t3 in 0.2..2.9f64) {
                if let Ok(a) = planar_from_dihedral([t1, t2, t3]) {
                    let back = dihedral_from_planar(a).unwrap();
                    for (x, y) in back.iter().zip([t1, t2, t3]) {
                        prop_assert!((x - y).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
