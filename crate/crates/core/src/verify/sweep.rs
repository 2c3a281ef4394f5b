use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// How the outer spin assignments of an identity are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepMode {
    Full,
    Sampled { samples: usize, seed: u64 },
}

/// Assignments of `len` spins in `Z_N`, optionally with one slot held at 0.
///
/// Sampled assignment `k` is drawn from a ChaCha stream keyed by
/// `(seed, k)`, so any subset can be regenerated independently.
#[derive(Clone, Copy, Debug)]
pub struct Sweep {
    pub n: u32,
    pub len: usize,
    pub gauge: Option<usize>,
    pub mode: SweepMode,
}

pub const MAX_SPINS: usize = 16;

impl Sweep {
    pub fn new(n: u32, len: usize, gauge: Option<usize>, mode: SweepMode) -> Self {
        assert!(len <= MAX_SPINS);
        Self { n, len, gauge, mode }
    }

    pub fn count(&self) -> usize {
        match self.mode {
            SweepMode::Full => {
                let free = self.len - usize::from(self.gauge.is_some());
                (self.n as usize).pow(free as u32)
            }
            SweepMode::Sampled { samples, .. } => samples,
        }
    }

    pub fn assignment(&self, k: usize) -> [i64; MAX_SPINS] {
        let mut out = [0i64; MAX_SPINS];
        match self.mode {
            SweepMode::Full => {
                let mut code = k;
                let n = self.n as usize;
                for slot in (0..self.len).rev() {
                    if Some(slot) == self.gauge {
                        continue;
                    }
                    out[slot] = (code % n) as i64;
                    code /= n;
                }
            }
            SweepMode::Sampled { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                for (slot, v) in out.iter_mut().enumerate().take(self.len) {
                    let draw = rng.gen_range(0..self.n as i64);
                    if Some(slot) != self.gauge {
                        *v = draw;
                    }
                }
            }
        }
        out
    }

    /// Evaluates `f` on every assignment in parallel; results are in
    /// assignment order regardless of thread count.
    pub fn map<T: Send>(&self, f: impl Fn(&[i64]) -> T + Sync + Send) -> Vec<T> {
        (0..self.count())
            .into_par_iter()
            .map(|k| {
                let a = self.assignment(k);
                f(&a[..self.len])
            })
            .collect()
    }
}
