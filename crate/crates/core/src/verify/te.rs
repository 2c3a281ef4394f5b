use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::contract::{contract, ContractionPlan};
use super::residual::{compare, ResidualReport};
use super::sweep::{Sweep, SweepMode};
use super::tensor::WeightTensor;
use crate::bbm::{BbmWeights, IrcWeight};
use crate::error::{Error, Result};
use crate::geometry::TetrahedronAngles;

/// External labels of the vertex equation, in sweep order.
pub const VERTEX_OUTER: [&str; 12] = [
    "i1", "i2", "i3", "i4", "i5", "i6", "j1", "j2", "j3", "j4", "j5", "j6",
];

const LHS_WIRING: [[&str; 6]; 4] = [
    ["k1", "k2", "k3", "i1", "i2", "i3"],
    ["j1", "k4", "k5", "k1", "i4", "i5"],
    ["j2", "j4", "k6", "k2", "k4", "i6"],
    ["j3", "j5", "j6", "k3", "k5", "k6"],
];

// Indexed by weight (R, R', R'', R'''); contracted in reverse order.
const RHS_WIRING: [[&str; 6]; 4] = [
    ["j1", "j2", "j3", "k1", "k2", "k3"],
    ["k1", "j4", "j5", "i1", "k4", "k5"],
    ["k2", "k4", "j6", "i2", "i4", "k6"],
    ["k3", "k5", "k6", "i3", "i5", "i6"],
];

fn slot(label: &str) -> usize {
    // i1..i6 -> 0..5, j1..j6 -> 6..11, k1..k6 -> 12..17
    let base = match label.as_bytes()[0] {
        b'i' => 0,
        b'j' => 6,
        _ => 12,
    };
    base + (label.as_bytes()[1] - b'1') as usize
}

fn check_vertex_tensors(rs: &[WeightTensor; 4]) -> Result<u32> {
    let n = rs[0].modulus();
    for r in rs {
        if r.modulus() != n || r.rank() != 6 {
            return Err(Error::Plan(format!(
                "vertex weights must be rank 6 over one modulus, got rank {} N={}",
                r.rank(),
                r.modulus()
            )));
        }
    }
    Ok(n)
}

/// Both sides of the vertex equation as rank-12 tensors over [`VERTEX_OUTER`],
/// each folded pairwise in wiring order.
pub fn vertex_te_sides(rs: &[WeightTensor; 4]) -> Result<(WeightTensor, WeightTensor)> {
    check_vertex_tensors(rs)?;
    let side = |wiring: &[[&str; 6]; 4], order: [usize; 4]| -> Result<WeightTensor> {
        let ts = order
            .iter()
            .map(|&k| rs[k].clone().relabel(&wiring[k]))
            .collect::<Result<Vec<_>>>()?;
        contract(ts, &ContractionPlan::sequential(4))?.permuted(&VERTEX_OUTER)
    };
    Ok((side(&LHS_WIRING, [0, 1, 2, 3])?, side(&RHS_WIRING, [3, 2, 1, 0])?))
}

fn vertex_entry(rs: &[WeightTensor; 4], outer: &[i64]) -> (Complex64, Complex64) {
    let n = rs[0].modulus() as usize;
    let lhs_slots = LHS_WIRING.map(|w| w.map(slot));
    let rhs_slots = RHS_WIRING.map(|w| w.map(slot));
    let mut spins = [0usize; 18];
    for (s, &v) in spins.iter_mut().zip(outer) {
        *s = v as usize;
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    for code in 0..n.pow(6) {
        let mut c = code;
        for k in (12..18).rev() {
            spins[k] = c % n;
            c /= n;
        }
        let term = |slots: &[[usize; 6]; 4]| -> Complex64 {
            let mut p = Complex64::new(1.0, 0.0);
            for (r, s) in rs.iter().zip(slots) {
                p *= r.get(&s.map(|k| spins[k]));
                if p.re == 0.0 && p.im == 0.0 {
                    break;
                }
            }
            p
        };
        lhs += term(&lhs_slots);
        rhs += term(&rhs_slots);
    }
    (lhs, rhs)
}

/// Residual of the vertex equation for four given vertex tensors.
///
/// Full mode contracts both sides completely; sampled mode sums the six
/// internal spins directly for each drawn outer assignment.
pub fn vertex_te_residual_for(rs: &[WeightTensor; 4], mode: SweepMode) -> Result<ResidualReport> {
    let n = check_vertex_tensors(rs)?;
    let pairs: Vec<(Complex64, Complex64)> = match mode {
        SweepMode::Full => {
            let (l, r) = vertex_te_sides(rs)?;
            l.data().iter().copied().zip(r.data().iter().copied()).collect()
        }
        SweepMode::Sampled { .. } => Sweep::new(n, 12, None, mode).map(|s| vertex_entry(rs, s)),
    };
    Ok(compare(&pairs, mode))
}

/// Builds the four BBM vertex weights of `t` and checks the vertex equation.
pub fn vertex_te_residual(t: &TetrahedronAngles, n: u32, mode: SweepMode) -> Result<ResidualReport> {
    let tris = t.te_weight_angles()?;
    let rs = tris
        .iter()
        .map(|tri| Ok(BbmWeights::new(tri, n)?.r_vertex()))
        .collect::<Result<Vec<_>>>()?;
    let rs: [WeightTensor; 4] = rs.try_into().expect("four weights");
    vertex_te_residual_for(&rs, mode)
}

/// A tensor of uniform random entries in the unit square, for negative controls.
pub fn random_tensor<S: AsRef<str>>(n: u32, labels: &[S], seed: u64) -> WeightTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WeightTensor::from_fn(n, labels, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Spin wiring of the IRC equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrcWiring {
    Standard,
    /// `b3` and `b4` exchanged in the second LHS factor; a negative control.
    Shuffled,
}

/// Outer spins of the IRC equation in sweep order; `c34` is gauge-fixed.
pub const IRC_OUTER: [&str; 14] = [
    "a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c12", "c13", "c14", "c23", "c24", "c34",
];
pub const IRC_GAUGE: usize = 13;

fn irc_entry<W: IrcWeight>(ws: &[W; 4], s: &[i64], wiring: IrcWiring) -> (Complex64, Complex64) {
    let [a1, a2, a3, a4, b1, b2, b3, b4, c12, c13, c14, c23, c24, c34] =
        <[i64; 14]>::try_from(s).expect("14 outer spins");
    let (x3, x4) = match wiring {
        IrcWiring::Standard => (b3, b4),
        IrcWiring::Shuffled => (b4, b3),
    };
    let [w0, w1, w2, w3] = ws;
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    for d in 0..w0.modulus() as i64 {
        lhs += w0.eval([a1, c12, c13, c14, b2, b3, b4, d])
            * w1.eval([c12, a2, x4, x3, d, c24, c23, b1])
            * w2.eval([b4, c23, c13, d, b2, b1, a3, c34])
            * w3.eval([d, b1, b2, b3, c14, c24, c34, a4]);
        rhs += w3.eval([b4, c23, c13, c12, a1, a2, a3, d])
            * w2.eval([c12, a2, a1, b3, c14, c24, d, a4])
            * w1.eval([a1, d, c13, c14, b2, a4, a3, c34])
            * w0.eval([d, a2, a3, a4, c34, c24, c23, b1]);
    }
    (lhs, rhs)
}

/// Residual of the IRC equation for four given weights.
pub fn irc_te_residual_with<W: IrcWeight>(ws: &[W; 4], mode: SweepMode, wiring: IrcWiring) -> Result<ResidualReport> {
    let n = ws[0].modulus();
    if ws.iter().any(|w| w.modulus() != n) {
        return Err(Error::Plan("IRC weights over different moduli".into()));
    }
    let pairs = Sweep::new(n, 14, Some(IRC_GAUGE), mode).map(|s| irc_entry(ws, s, wiring));
    Ok(compare(&pairs, mode))
}

/// Builds the four BBM IRC weights of `t` and checks the IRC equation.
pub fn irc_te_residual(t: &TetrahedronAngles, n: u32, mode: SweepMode) -> Result<ResidualReport> {
    let tris = t.te_weight_angles()?;
    let ws = [
        BbmWeights::new(&tris[0], n)?,
        BbmWeights::new(&tris[1], n)?,
        BbmWeights::new(&tris[2], n)?,
        BbmWeights::new(&tris[3], n)?,
    ];
    irc_te_residual_with(&ws, mode, IrcWiring::Standard)
}
