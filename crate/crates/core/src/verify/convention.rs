use std::f64::consts::PI;

use serde::Serialize;

use super::sweep::SweepMode;
use super::te::vertex_te_residual;
use crate::geometry::{interior_dihedral_angles, TetrahedronAngles};

/// One orientation candidate: bit `k` of `flips` replaces the interior
/// angle of edge `k` by its supplement before the weights are built.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionCandidate {
    pub flips: u8,
    pub theta: [f64; 6],
    /// Relative vertex-equation residual, or `None` if some trihedron of the
    /// pattern is not realizable.
    pub residual: Option<f64>,
}

/// Runs the vertex equation for all 64 flip patterns of the interior
/// dihedral angles of `vertices`, full sweep at modulus `n`.
///
/// Candidate 0 (no flips) is always first in the input order; the result is
/// sorted by residual with unrealizable patterns last, ties keeping pattern
/// order.
pub fn convention_search(vertices: &[[f64; 3]; 4], n: u32) -> Vec<ConventionCandidate> {
    let interior = interior_dihedral_angles(vertices);
    let mut out: Vec<ConventionCandidate> = (0..64u8)
        .map(|flips| {
            let theta: [f64; 6] = std::array::from_fn(|k| {
                if flips >> k & 1 == 1 {
                    PI - interior[k]
                } else {
                    interior[k]
                }
            });
            let residual = TetrahedronAngles::from_theta(theta)
                .and_then(|t| {
                    t.nondegenerate_trihedra()?;
                    vertex_te_residual(&t, n, SweepMode::Full)
                })
                .ok()
                .map(|r| r.rel_diff);
            ConventionCandidate { flips, theta, residual }
        })
        .collect();
    out.sort_by(|a, b| match (a.residual, b.residual) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    out
}
