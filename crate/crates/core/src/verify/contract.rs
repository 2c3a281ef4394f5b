use num_complex::Complex64;

use super::tensor::WeightTensor;
use crate::error::{Error, Result};

/// Contracts two tensors over every label they share. The result carries the
/// free labels of `a` followed by those of `b`.
pub fn contract_pair(a: &WeightTensor, b: &WeightTensor) -> Result<WeightTensor> {
    if a.modulus() != b.modulus() {
        return Err(Error::Plan(format!(
            "modulus mismatch: {} vs {}",
            a.modulus(),
            b.modulus()
        )));
    }
    let n = a.modulus() as usize;
    let shared: Vec<&String> = a.labels().iter().filter(|l| b.axis(l).is_some()).collect();
    let free_a: Vec<&String> = a.labels().iter().filter(|l| b.axis(l).is_none()).collect();
    let free_b: Vec<&String> = b.labels().iter().filter(|l| a.axis(l).is_none()).collect();

    let a_order: Vec<&String> = free_a.iter().chain(shared.iter()).copied().collect();
    let b_order: Vec<&String> = shared.iter().chain(free_b.iter()).copied().collect();
    let am = a.permuted(&a_order)?;
    let bm = b.permuted(&b_order)?;

    let rows = n.pow(free_a.len() as u32);
    let inner = n.pow(shared.len() as u32);
    let cols = n.pow(free_b.len() as u32);
    let (ad, bd) = (am.data(), bm.data());
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        let arow = &ad[r * inner..(r + 1) * inner];
        let orow = &mut out[r * cols..(r + 1) * cols];
        for (k, &av) in arow.iter().enumerate() {
            if av.re == 0.0 && av.im == 0.0 {
                continue;
            }
            let brow = &bd[k * cols..(k + 1) * cols];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += av * bv;
            }
        }
    }
    let labels: Vec<&String> = free_a.into_iter().chain(free_b).collect();
    WeightTensor::new(a.modulus(), &labels, out)
}

/// A pairwise contraction order: each step removes the tensors at the two
/// positions of the working list and appends their contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    pub steps: Vec<(usize, usize)>,
}

impl ContractionPlan {
    /// Folds tensors left to right: `((t0 t1) t2) ...`.
    pub fn sequential(count: usize) -> Self {
        Self {
            steps: (1..count).map(|_| (0, 1)).collect(),
        }
    }
}

/// Contracts a tensor network along `plan`. Every label may appear at most
/// twice across the network; labels appearing twice are summed.
pub fn contract(tensors: Vec<WeightTensor>, plan: &ContractionPlan) -> Result<WeightTensor> {
    if tensors.is_empty() {
        return Err(Error::Plan("empty tensor network".into()));
    }
    let mut counts = std::collections::HashMap::new();
    for t in &tensors {
        for l in t.labels() {
            *counts.entry(l.as_str()).or_insert(0usize) += 1;
        }
    }
    if let Some((l, _)) = counts.iter().find(|(_, c)| **c > 2) {
        return Err(Error::Plan(format!("label {l} appears more than twice")));
    }
    let mut work = tensors;
    for &(i, j) in &plan.steps {
        if i == j || i >= work.len() || j >= work.len() {
            return Err(Error::Plan(format!(
                "step ({i}, {j}) invalid for {} tensors",
                work.len()
            )));
        }
        let (hi, lo) = (i.max(j), i.min(j));
        let th = work.remove(hi);
        let tl = work.remove(lo);
        let (a, b) = if i < j { (tl, th) } else { (th, tl) };
        work.push(contract_pair(&a, &b)?);
    }
    if work.len() != 1 {
        return Err(Error::Plan(format!(
            "plan leaves {} tensors uncontracted",
            work.len()
        )));
    }
    Ok(work.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::tensor::increment;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: u32, labels: &[&str], rng: &mut ChaCha8Rng) -> WeightTensor {
        WeightTensor::from_fn(n, labels, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    /// Sums the product of all entries over every assignment of all labels.
    fn naive(tensors: &[WeightTensor], output: &[&str]) -> WeightTensor {
        let n = tensors[0].modulus() as usize;
        let mut all: Vec<String> = Vec::new();
        for t in tensors {
            for l in t.labels() {
                if !all.contains(l) {
                    all.push(l.clone());
                }
            }
        }
        let pos = |l: &str| all.iter().position(|x| x == l).unwrap();
        let maps: Vec<Vec<usize>> = tensors
            .iter()
            .map(|t| t.labels().iter().map(|l| pos(l)).collect())
            .collect();
        let out_map: Vec<usize> = output.iter().map(|l| pos(l)).collect();
        let mut out = WeightTensor::zeros(n as u32, output);
        let mut idx = vec![0usize; all.len()];
        for _ in 0..n.pow(all.len() as u32) {
            let mut prod = Complex64::new(1.0, 0.0);
            for (t, m) in tensors.iter().zip(&maps) {
                let sub: Vec<usize> = m.iter().map(|&k| idx[k]).collect();
                prod *= t.get(&sub);
            }
            let o: Vec<usize> = out_map.iter().map(|&k| idx[k]).collect();
            let cur = out.get(&o);
            out.set(&o, cur + prod);
            increment(&mut idx, n);
        }
        out
    }

    fn max_diff(a: &WeightTensor, b: &WeightTensor) -> f64 {
        a.data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_contraction_returns_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random(3, &["a", "b", "x"], &mut rng);
        let id = WeightTensor::from_fn(3, &["x", "y"], |i| {
            Complex64::new(if i[0] == i[1] { 1.0 } else { 0.0 }, 0.0)
        });
        let r = contract_pair(&t, &id).unwrap().relabel(&["a", "b", "x"]).unwrap();
        assert_eq!(r, t);
    }

    #[test]
    fn pairwise_matches_naive_on_small_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [2u32, 3] {
            let ts = vec![
                random(n, &["k1", "k2", "i1"], &mut rng),
                random(n, &["j1", "k3", "k1"], &mut rng),
                random(n, &["k2", "k3", "i2"], &mut rng),
            ];
            let out = ["i1", "j1", "i2"];
            let expected = naive(&ts, &out);
            for plan in [
                ContractionPlan::sequential(3),
                ContractionPlan { steps: vec![(1, 2), (0, 1)] },
                ContractionPlan { steps: vec![(2, 0), (1, 0)] },
            ] {
                let got = contract(ts.clone(), &plan).unwrap().permuted(&out).unwrap();
                assert!(max_diff(&got, &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn plan_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(2, &["x", "y"], &mut rng);
        let b = random(3, &["y"], &mut rng);
        assert!(matches!(contract_pair(&a, &b), Err(Error::Plan(_))));
        let c = random(2, &["y"], &mut rng);
        assert!(contract(vec![a.clone(), c.clone()], &ContractionPlan { steps: vec![(0, 0)] }).is_err());
        assert!(contract(vec![a.clone(), c.clone()], &ContractionPlan { steps: vec![] }).is_err());
        let d = random(2, &["y", "z"], &mut rng);
        assert!(contract(vec![a, c, d], &ContractionPlan::sequential(3)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn pair_contraction_matches_naive(seed in any::<u64>(), n in 2u32..=3, shared in 0usize..=2) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let al: Vec<&str> = ["a1", "a2", "s1", "s2"][..2 + shared].to_vec();
                let mut bl: Vec<&str> = ["s1", "s2"][..shared].to_vec();
                bl.push("b1");
                let a = random(n, &al, &mut rng);
                let b = random(n, &bl, &mut rng);
                let out = ["a1", "a2", "b1"];
                let got = contract_pair(&a, &b).unwrap().permuted(&out).unwrap();
                prop_assert!(max_diff(&got, &naive(&[a, b], &out)) < 1e-12);
            }
        }
    }
}
