use num_complex::Complex64;
use serde::Serialize;

use super::residual::{compare, ResidualReport};
use super::sweep::{Sweep, SweepMode};
use super::tensor::WeightTensor;
use crate::bbm::{BbmWeights, IrcWeight, PsiPair};
use crate::error::{Error, Result};
use crate::geometry::Trihedron;
use crate::planar::PlanarWeights;

/// Which weight family feeds the ψ-equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Bbm,
    Planar,
}

/// `R` and `W` of the first trihedron with the ψ-vectors of the other three.
pub struct PsiEquationParts<'a> {
    pub r: &'a WeightTensor,
    pub w: &'a dyn IrcWeight,
    pub psi: [&'a dyn PsiPair; 3],
}

fn check_parts(parts: &PsiEquationParts) -> Result<u32> {
    let n = parts.r.modulus();
    if parts.r.rank() != 6 || parts.w.modulus() != n {
        return Err(Error::Plan("ψ-equation needs a rank-6 R and W over one modulus".into()));
    }
    Ok(n)
}

/// Sweep slots `[i1,i2,i3,b,c,d,e,f,g,h]`, gauge `h = 0`.
fn psi_entry(p: &PsiEquationParts, s: &[i64]) -> (Complex64, Complex64) {
    let [i1, i2, i3, b, c, d, e, f, g, h] = <[i64; 10]>::try_from(s).unwrap();
    let n = p.r.modulus() as i64;
    let [p1, p2, p3] = p.psi;
    let mut lhs = Complex64::new(0.0, 0.0);
    for k1 in 0..n {
        let x1 = p1.psi(k1, [e, h, c, d]);
        for k2 in 0..n {
            let x2 = x1 * p2.psi(k2, [d, b, h, f]);
            for k3 in 0..n {
                let r = p.r.get(&[k1, k2, k3, i1, i2, i3].map(|x| x as usize));
                if r.re == 0.0 && r.im == 0.0 {
                    continue;
                }
                lhs += r * x2 * p3.psi(k3, [h, g, c, b]);
            }
        }
    }
    let rhs = (0..n)
        .map(|a| {
            p1.psi(i1, [a, b, g, f]) * p2.psi(i2, [e, g, c, a]) * p3.psi(i3, [d, a, e, f])
                * p.w.eval([a, e, f, g, b, c, d, h])
        })
        .sum();
    (lhs, rhs)
}

/// Sweep slots `[j1,j2,j3,a,b,c,d,e,f,g]`, gauge `a = 0`.
fn psibar_entry(p: &PsiEquationParts, s: &[i64]) -> (Complex64, Complex64) {
    let [j1, j2, j3, a, b, c, d, e, f, g] = <[i64; 10]>::try_from(s).unwrap();
    let n = p.r.modulus() as i64;
    let [p1, p2, p3] = p.psi;
    let lhs = (0..n)
        .map(|h| {
            p.w.eval([a, e, f, g, b, c, d, h])
                * p1.psibar(j1, [e, h, c, d])
                * p2.psibar(j2, [d, b, h, f])
                * p3.psibar(j3, [h, g, c, b])
        })
        .sum();
    let mut rhs = Complex64::new(0.0, 0.0);
    for k1 in 0..n {
        let x1 = p1.psibar(k1, [a, b, g, f]);
        for k2 in 0..n {
            let x2 = x1 * p2.psibar(k2, [e, g, c, a]);
            for k3 in 0..n {
                let r = p.r.get(&[j1, j2, j3, k1, k2, k3].map(|x| x as usize));
                if r.re == 0.0 && r.im == 0.0 {
                    continue;
                }
                rhs += x2 * p3.psibar(k3, [d, a, e, f]) * r;
            }
        }
    }
    (lhs, rhs)
}

pub fn psi_eq_residual_with(parts: &PsiEquationParts, mode: SweepMode) -> Result<ResidualReport> {
    let n = check_parts(parts)?;
    let pairs = Sweep::new(n, 10, Some(9), mode).map(|s| psi_entry(parts, s));
    Ok(compare(&pairs, mode))
}

pub fn psibar_eq_residual_with(parts: &PsiEquationParts, mode: SweepMode) -> Result<ResidualReport> {
    let n = check_parts(parts)?;
    let pairs = Sweep::new(n, 10, Some(3), mode).map(|s| psibar_entry(parts, s));
    Ok(compare(&pairs, mode))
}

enum Built {
    Bbm(Vec<BbmWeights>),
    Planar(Vec<PlanarWeights>),
}

impl Built {
    fn new(trihedra: &[Trihedron; 4], n: u32, model: Model) -> Result<(Self, WeightTensor)> {
        Ok(match model {
            Model::Bbm => {
                let ws = trihedra.iter().map(|t| BbmWeights::new(t, n)).collect::<Result<Vec<_>>>()?;
                let r = ws[0].r_vertex();
                (Built::Bbm(ws), r)
            }
            Model::Planar => {
                let ws = trihedra.iter().map(|t| PlanarWeights::new(t, n)).collect::<Result<Vec<_>>>()?;
                let r = ws[0].r_vertex();
                (Built::Planar(ws), r)
            }
        })
    }

    /// Weight `W` plus ψ-vectors of slots `order`.
    fn parts<'a>(&'a self, r: &'a WeightTensor, order: [usize; 3]) -> PsiEquationParts<'a> {
        match self {
            Built::Bbm(ws) => PsiEquationParts {
                r,
                w: &ws[0],
                psi: order.map(|k| &ws[k] as &dyn PsiPair),
            },
            Built::Planar(ws) => PsiEquationParts {
                r,
                w: &ws[0],
                psi: order.map(|k| &ws[k] as &dyn PsiPair),
            },
        }
    }
}

/// Standard ψ order, and the rotated one used as a negative control.
pub const PSI_ORDER: [usize; 3] = [1, 2, 3];
pub const ROTATED_PSI_ORDER: [usize; 3] = [2, 3, 1];

/// Residual of `Σ_k R ψ1 ψ2 ψ3 = Σ_a ψ1 ψ2 ψ3 W` with `R`, `W` from
/// `trihedra[0]` and `ψ_k` from `trihedra[k]`.
pub fn psi_eq_residual(trihedra: &[Trihedron; 4], n: u32, model: Model, mode: SweepMode) -> Result<ResidualReport> {
    psi_eq_residual_ordered(trihedra, n, model, mode, PSI_ORDER)
}

pub fn psi_eq_residual_ordered(
    trihedra: &[Trihedron; 4],
    n: u32,
    model: Model,
    mode: SweepMode,
    order: [usize; 3],
) -> Result<ResidualReport> {
    let (built, r) = Built::new(trihedra, n, model)?;
    psi_eq_residual_with(&built.parts(&r, order), mode)
}

/// Residual of `Σ_h W ψ̄1 ψ̄2 ψ̄3 = Σ_k ψ̄1 ψ̄2 ψ̄3 R`.
pub fn psibar_eq_residual(trihedra: &[Trihedron; 4], n: u32, model: Model, mode: SweepMode) -> Result<ResidualReport> {
    psibar_eq_residual_ordered(trihedra, n, model, mode, PSI_ORDER)
}

pub fn psibar_eq_residual_ordered(
    trihedra: &[Trihedron; 4],
    n: u32,
    model: Model,
    mode: SweepMode,
    order: [usize; 3],
) -> Result<ResidualReport> {
    let (built, r) = Built::new(trihedra, n, model)?;
    psibar_eq_residual_with(&built.parts(&r, order), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_planar_quadrilateral, sample_tetrahedron};

    fn bbm(seed: u64) -> [Trihedron; 4] {
        sample_tetrahedron(seed).unwrap().te_weight_angles().unwrap()
    }

    #[test]
    fn bbm_psi_equations_n2() {
        let t = bbm(2);
        let r = psi_eq_residual(&t, 2, Model::Bbm, SweepMode::Full).unwrap();
        assert_eq!(r.entries_checked, 512);
        assert!(r.rel_diff < 1e-8, "{r:?}");
        let r = psibar_eq_residual(&t, 2, Model::Bbm, SweepMode::Full).unwrap();
        assert!(r.rel_diff < 1e-8, "{r:?}");
    }

    #[test]
    fn planar_psi_equations_n2() {
        let q = sample_planar_quadrilateral(1).unwrap();
        let r = psi_eq_residual(&q.trihedra, 2, Model::Planar, SweepMode::Full).unwrap();
        assert!(r.rel_diff < 1e-8, "{r:?}");
        let r = psibar_eq_residual(&q.trihedra, 2, Model::Planar, SweepMode::Full).unwrap();
        assert!(r.rel_diff < 1e-8, "{r:?}");
    }

    #[test]
    fn rotated_psi_triples_fail() {
        let t = bbm(3);
        let bad = psi_eq_residual_ordered(&t, 2, Model::Bbm, SweepMode::Full, ROTATED_PSI_ORDER).unwrap();
        assert!(bad.rel_diff > 1e-2);
        let bad = psibar_eq_residual_ordered(&t, 2, Model::Bbm, SweepMode::Full, ROTATED_PSI_ORDER).unwrap();
        assert!(bad.rel_diff > 1e-2);
    }

    #[test]
    fn entries_are_shift_invariant() {
        let t = bbm(4);
        let (built, r) = Built::new(&t, 3, Model::Bbm).unwrap();
        let parts = built.parts(&r, PSI_ORDER);
        // shifting face spins by 1 while keeping the vertex spins fixed
        let s = [0, 2, 1, 1, 2, 0, 0, 1, 2, 0];
        let mut shifted = s;
        for v in &mut shifted[3..] {
            *v += 1;
        }
        let (l0, r0) = psi_entry(&parts, &s);
        let (l1, r1) = psi_entry(&parts, &shifted);
        assert!((l0 - l1).norm() < 1e-10 * l0.norm().max(1.0));
        assert!((r0 - r1).norm() < 1e-10 * r0.norm().max(1.0));
        let (l0, r0) = psibar_entry(&parts, &s);
        let (l1, r1) = psibar_entry(&parts, &shifted);
        assert!((l0 - l1).norm() < 1e-10 * l0.norm().max(1.0));
        assert!((r0 - r1).norm() < 1e-10 * r0.norm().max(1.0));
    }
}
