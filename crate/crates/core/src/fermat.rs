//! Arithmetic on the Fermat curve `x^N + y^N = z^N`.
//!
//! Every logarithm is principal, `-π < Im log ≤ π`. Half-integer powers such
//! as `(y/z)^((N-1)/2)` are evaluated as `exp(((N-1)/2) log(y/z))`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Relative tolerance used when validating the curve equation.
pub const CURVE_TOLERANCE: f64 = 1e-10;

/// Factors smaller than this in modulus are treated as exact zeros.
const SINGULAR_EPS: f64 = 1e-13;

pub fn check_modulus(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    Ok(())
}

/// A residue in `Z_N`, stored by its canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicSpin {
    value: u32,
    n: u32,
}

impl CyclicSpin {
    pub fn new(value: i64, n: u32) -> Self {
        assert!(n >= 1, "modulus must be positive");
        Self {
            value: value.rem_euclid(n as i64) as u32,
            n,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.n
    }
}

impl fmt::Display for CyclicSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.n)
    }
}

impl Add for CyclicSpin {
    type Output = CyclicSpin;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        CyclicSpin::new(self.value as i64 + rhs.value as i64, self.n)
    }
}

impl Sub for CyclicSpin {
    type Output = CyclicSpin;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        CyclicSpin::new(self.value as i64 - rhs.value as i64, self.n)
    }
}

impl Neg for CyclicSpin {
    type Output = CyclicSpin;
    fn neg(self) -> Self {
        CyclicSpin::new(-(self.value as i64), self.n)
    }
}

/// Reduces an integer spin to `0..n`.
#[inline]
pub fn residue(a: i64, n: u32) -> usize {
    a.rem_euclid(n as i64) as usize
}

/// Roots of unity and phase constants for a fixed modulus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseConstants {
    pub n: u32,
    /// `ω^{1/2} = exp(iπ/N)`
    pub omega_half: Complex64,
    pub omega: Complex64,
    /// `Φ₀ = exp(iπ(N-1)(N-2)/6N)`
    pub phi0: Complex64,
}

impl PhaseConstants {
    pub fn new(n: u32) -> Result<Self> {
        let omega_half = primitive_root(n)?;
        let nf = n as f64;
        Ok(Self {
            n,
            omega_half,
            omega: omega_half * omega_half,
            phi0: Complex64::from_polar(1.0, PI * (nf - 1.0) * (nf - 2.0) / (6.0 * nf)),
        })
    }

    /// `ω^k` for any integer `k`, reduced mod N before exponentiation.
    #[inline]
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        let r = k.rem_euclid(self.n as i64) as f64;
        Complex64::from_polar(1.0, 2.0 * PI * r / self.n as f64)
    }
}

/// Table of `ω^k`, `k = 0..N`, for hot loops.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    n: u32,
    powers: Vec<Complex64>,
}

impl OmegaTable {
    pub fn new(n: u32) -> Self {
        let nf = n as f64;
        let powers = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nf))
            .collect();
        Self { n, powers }
    }

    #[inline]
    pub fn pow(&self, k: i64) -> Complex64 {
        self.powers[residue(k, self.n)]
    }
}

/// `ω^{1/2} = exp(iπ/N)`.
pub fn primitive_root(n: u32) -> Result<Complex64> {
    check_modulus(n)?;
    Ok(Complex64::from_polar(1.0, PI / n as f64))
}

/// `d(x) = exp Σ_{a=1}^{N-1} (a/N) log(1 - x ω^a)` with principal logarithms.
pub fn d_eval(x: Complex64, n: u32) -> Result<Complex64> {
    let pc = PhaseConstants::new(n)?;
    let nf = n as f64;
    let mut exponent = Complex64::new(0.0, 0.0);
    for a in 1..n {
        let factor = Complex64::new(1.0, 0.0) - x * pc.omega_pow(a as i64);
        if factor.norm() < SINGULAR_EPS {
            return Err(Error::SingularArgument(a));
        }
        exponent += factor.ln() * (a as f64 / nf);
    }
    Ok(exponent.exp())
}

/// `Φ̃(a) = ω^{a(a-N)/2} exp(iπ(N²-1)/6N)`.
pub fn phi_tilde(a: CyclicSpin, n: u32) -> Complex64 {
    let nf = n as f64;
    let av = a.value() as f64;
    // ω^{a(a-N)/2} = exp(iπ a(a-N)/N)
    Complex64::from_polar(1.0, PI * av * (av - nf) / nf + PI * (nf * nf - 1.0) / (6.0 * nf))
}

/// A point `(x, y, z)` on the Fermat curve of degree `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FermatPoint {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    pub n: u32,
}

impl FermatPoint {
    /// Builds a point, rejecting triples off the curve by more than
    /// [`CURVE_TOLERANCE`] relative.
    pub fn new(x: Complex64, y: Complex64, z: Complex64, n: u32) -> Result<Self> {
        check_modulus(n)?;
        let p = Self { x, y, z, n };
        let r = p.curve_residual();
        if r > CURVE_TOLERANCE {
            return Err(Error::OffCurve(r));
        }
        Ok(p)
    }

    pub(crate) fn new_unchecked(x: Complex64, y: Complex64, z: Complex64, n: u32) -> Self {
        Self { x, y, z, n }
    }

    /// `|x^N + y^N - z^N| / max(|x|^N, |y|^N, |z|^N)`.
    pub fn curve_residual(&self) -> f64 {
        let n = self.n as i32;
        let (xn, yn, zn) = (self.x.powi(n), self.y.powi(n), self.z.powi(n));
        let scale = xn.norm().max(yn.norm()).max(zn.norm());
        if scale == 0.0 {
            return 0.0;
        }
        (xn + yn - zn).norm() / scale
    }

    /// Membership in the branch region: `-2π/N < Arg(x/z) < 0` and
    /// `-π/N < Arg(y/z) < π/N`, both strict.
    pub fn in_region(&self) -> Result<bool> {
        if self.x.norm() == 0.0 || self.z.norm() == 0.0 || self.y.norm() == 0.0 {
            return Err(Error::UndefinedArgument);
        }
        let nf = self.n as f64;
        let ax = (self.x / self.z).arg();
        let ay = (self.y / self.z).arg();
        Ok(-2.0 * PI / nf < ax && ax < 0.0 && -PI / nf < ay && ay < PI / nf)
    }

    fn require_region(&self) -> Result<()> {
        match self.in_region() {
            Ok(true) => Ok(()),
            Ok(false) => Err(Error::RegionViolation),
            Err(e) => Err(e),
        }
    }

    /// The automorphism `O: (x, y, z) -> (z, ω^{1/2} y, ω x)`.
    pub fn apply_o(&self) -> FermatPoint {
        let pc = PhaseConstants::new(self.n).expect("point carries a valid modulus");
        FermatPoint {
            x: self.z,
            y: pc.omega_half * self.y,
            z: pc.omega * self.x,
            n: self.n,
        }
    }

    /// `w(p|0) = (y/z)^{(N-1)/2} / d(ω x/z)`.
    pub fn w_zero(&self) -> Result<Complex64> {
        self.require_region()?;
        let pc = PhaseConstants::new(self.n)?;
        let half = (self.n as f64 - 1.0) / 2.0;
        let lead = ((self.y / self.z).ln() * half).exp();
        Ok(lead / d_eval(pc.omega * self.x / self.z, self.n)?)
    }

    /// The second closed form `(x/y)^{(N-1)/2} Φ₀⁻¹ d(z/x)`; agrees with
    /// [`FermatPoint::w_zero`] on the branch region.
    pub fn w_zero_alt(&self) -> Result<Complex64> {
        self.require_region()?;
        let pc = PhaseConstants::new(self.n)?;
        let half = (self.n as f64 - 1.0) / 2.0;
        let lead = ((self.x / self.y).ln() * half).exp();
        Ok(lead / pc.phi0 * d_eval(self.z / self.x, self.n)?)
    }

    /// `w(p|a) = w(p|0) Π_{s=1}^{a} y/(z - x ω^s)` for the canonical
    /// representative of `a`.
    pub fn w_eval(&self, a: CyclicSpin) -> Result<Complex64> {
        debug_assert_eq!(a.modulus(), self.n);
        let pc = PhaseConstants::new(self.n)?;
        let mut value = self.w_zero()?;
        for s in 1..=a.value() {
            let den = self.z - self.x * pc.omega_pow(s as i64);
            if den.norm() < SINGULAR_EPS * self.z.norm().max(self.x.norm()) {
                return Err(Error::SingularPoint(s));
            }
            value *= self.y / den;
        }
        Ok(value)
    }

    /// All `N` values `w(p|0..N)`.
    pub fn w_table(&self) -> Result<WTable> {
        let pc = PhaseConstants::new(self.n)?;
        let mut values = Vec::with_capacity(self.n as usize);
        let mut value = self.w_zero()?;
        values.push(value);
        for s in 1..self.n {
            let den = self.z - self.x * pc.omega_pow(s as i64);
            if den.norm() < SINGULAR_EPS * self.z.norm().max(self.x.norm()) {
                return Err(Error::SingularPoint(s));
            }
            value *= self.y / den;
            values.push(value);
        }
        Ok(WTable { n: self.n, values })
    }
}

/// Precomputed `w(p|a)` for `a ∈ Z_N`, indexed by any integer.
#[derive(Clone, Debug, PartialEq)]
pub struct WTable {
    n: u32,
    values: Vec<Complex64>,
}

impl WTable {
    #[inline]
    pub fn get(&self, a: i64) -> Complex64 {
        self.values[residue(a, self.n)]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Draws a random point of the branch region with `z = 1`.
///
/// `Arg x` is uniform in the open window and `|x|` uniform in `[0.2, 1.8]`;
/// `y` is the unique root of `1 - x^N` inside the `y` window. Draws whose root
/// falls outside the window are redrawn.
pub fn sample_region_point<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<FermatPoint> {
    check_modulus(n)?;
    let nf = n as f64;
    loop {
        let arg = -2.0 * PI / nf * rng.gen_range(0.02..0.98);
        let modulus = rng.gen_range(0.2..1.8);
        let x = Complex64::from_polar(modulus, arg);
        let one = Complex64::new(1.0, 0.0);
        let yn = one - x.powi(n as i32);
        if yn.norm() < 1e-6 {
            continue;
        }
        let base = yn.ln() / nf;
        for k in 0..n {
            let y = (base + Complex64::new(0.0, 2.0 * PI * k as f64 / nf)).exp();
            let p = FermatPoint::new_unchecked(x, y, one, n);
            if p.in_region() == Ok(true) {
                return Ok(p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn primitive_root_small_moduli() {
        let r2 = primitive_root(2).unwrap();
        assert!((r2 - c(0.0, 1.0)).norm() < 1e-15);
        let r3 = primitive_root(3).unwrap();
        assert!((r3 - c(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
        let r4 = primitive_root(4).unwrap();
        assert!((r4 - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert_eq!(primitive_root(1), Err(Error::InvalidModulus(1)));
        assert_eq!(primitive_root(0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn d_function_values() {
        for n in 2..=7 {
            assert!((d_eval(c(0.0, 0.0), n).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!((d_eval(c(3.0, 0.0), 2).unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        // 1 - x*ω with ω = -1 at N=2 vanishes for x = -1
        assert_eq!(d_eval(c(-1.0, 0.0), 2), Err(Error::SingularArgument(1)));
    }

    #[test]
    fn d_function_n3_at_one() {
        // exp(⅓ log(1-ω) + ⅔ log(1-ω²)), evaluated by hand:
        // 1-ω = √3 e^{-iπ/6}, 1-ω² = √3 e^{iπ/6}
        // exponent = ln√3 + i(-π/18 + 2π/18) = ln√3 + iπ/18
        let expected = Complex64::from_polar(3f64.sqrt(), PI / 18.0);
        let d = d_eval(c(1.0, 0.0), 3).unwrap();
        assert!((d - expected).norm() < 1e-14, "{d} vs {expected}");
    }

    #[test]
    fn phi_tilde_n2_and_products() {
        let n = 2;
        let f0 = phi_tilde(CyclicSpin::new(0, n), n);
        let f1 = phi_tilde(CyclicSpin::new(1, n), n);
        assert!((f0 - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert!((f1 - Complex64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
        for n in 2..=7 {
            let mut prod = c(1.0, 0.0);
            for a in 0..n {
                let f = phi_tilde(CyclicSpin::new(a as i64, n), n);
                assert_relative_eq!(f.norm(), 1.0, epsilon = 1e-15);
                prod *= f;
            }
            assert!((prod - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn region_is_strict() {
        let n = 3;
        let one = c(1.0, 0.0);
        // Arg(x/z) = 0 on the boundary
        let p = FermatPoint::new_unchecked(c(0.5, 0.0), c(0.9, 0.0), one, n);
        assert_eq!(p.in_region(), Ok(false));
        let q = FermatPoint::new_unchecked(Complex64::from_polar(0.5, -PI / 3.0), c(0.9, 0.0), one, n);
        assert_eq!(q.in_region(), Ok(true));
        let zero = FermatPoint::new_unchecked(c(0.0, 0.0), one, one, n);
        assert_eq!(zero.in_region(), Err(Error::UndefinedArgument));
        assert_eq!(p.w_zero(), Err(Error::RegionViolation));
    }

    #[test]
    fn apply_o_substitution_n2() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = sample_region_point(2, &mut rng).unwrap();
        let op = p.apply_o();
        assert!((op.x - p.z).norm() < 1e-15);
        assert!((op.y - c(0.0, 1.0) * p.y).norm() < 1e-15);
        assert!((op.z + p.x).norm() < 1e-15);
    }

    #[test]
    fn sampled_points_and_their_images_stay_in_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=7 {
            for _ in 0..100 {
                let p = sample_region_point(n, &mut rng).unwrap();
                assert!(p.curve_residual() < 1e-12);
                let op = p.apply_o();
                assert!(op.curve_residual() < 1e-12);
                // direct Arg checks, independent of in_region
                let nf = n as f64;
                let ax = (op.x / op.z).arg();
                let ay = (op.y / op.z).arg();
                assert!(-2.0 * PI / nf < ax && ax < 0.0);
                assert!(-PI / nf < ay && ay < PI / nf);
            }
        }
    }

    #[test]
    fn n2_specific_w_zero() {
        // x = r e^{-iπ/2}, y = sqrt(1 - x²) = sqrt(1 + r²) real positive
        let r = 0.6f64;
        let x = Complex64::from_polar(r, -PI / 2.0);
        let y = c((1.0 + r * r).sqrt(), 0.0);
        let p = FermatPoint::new(x, y, c(1.0, 0.0), 2).unwrap();
        // d(t) = (1+t)^{1/2} at N=2; first form: y^{1/2} / d(-x)
        let first = y.sqrt() / (c(1.0, 0.0) - x).sqrt();
        // second form: (x/y)^{1/2} * d(1/x) with Φ₀ = 1 at N=2
        let second = (x / y).sqrt() * (c(1.0, 0.0) + c(1.0, 0.0) / x).sqrt();
        assert!((first - second).norm() < 1e-14);
        assert!((p.w_zero().unwrap() - first).norm() < 1e-14);
    }

    #[test]
    fn w_eval_zero_and_table_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = sample_region_point(5, &mut rng).unwrap();
        let table = p.w_table().unwrap();
        assert_eq!(p.w_eval(CyclicSpin::new(0, 5)).unwrap(), p.w_zero().unwrap());
        for a in -7..12 {
            let v = p.w_eval(CyclicSpin::new(a, 5)).unwrap();
            assert!((v - table.get(a)).norm() < 1e-15);
        }
    }

    #[test]
    fn length_n_ratio_product_telescopes_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=7 {
            let p = sample_region_point(n, &mut rng).unwrap();
            let pc = PhaseConstants::new(n).unwrap();
            let mut prod = c(1.0, 0.0);
            for s in 1..=n {
                prod *= p.y / (p.z - p.x * pc.omega_pow(s as i64));
            }
            assert!((prod - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn spin_arithmetic_stays_canonical() {
        let a = CyclicSpin::new(-1, 5);
        assert_eq!(a.value(), 4);
        assert_eq!((a + CyclicSpin::new(3, 5)).value(), 2);
        assert_eq!((CyclicSpin::new(1, 5) - a).value(), 2);
        assert_eq!((-a).value(), 1);
        assert_eq!(CyclicSpin::new(12, 5), CyclicSpin::new(2, 5));
    }

    #[test]
    fn off_curve_rejected() {
        assert!(matches!(
            FermatPoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), 3),
            Err(Error::OffCurve(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn w_identities_hold(n in 2u32..=7, seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = sample_region_point(n, &mut rng).unwrap();
                let w0 = p.w_zero().unwrap();
                let alt = p.w_zero_alt().unwrap();
                prop_assert!((w0 - alt).norm() / w0.norm() < 1e-10);
                let table = p.w_table().unwrap();
                let prod: Complex64 = table.values().iter().product();
                prop_assert!((prod - 1.0).norm() < 1e-10);
                let op = p.apply_o().w_table().unwrap();
                for a in 0..n as i64 {
                    let inv = table.get(a) * op.get(-a) * phi_tilde(CyclicSpin::new(a, n), n);
                    prop_assert!((inv - 1.0).norm() < 1e-10);
                }
            }

            #[test]
            fn w_is_periodic(n in 2u32..=7, seed in any::<u64>(), a in -20i64..20) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = sample_region_point(n, &mut rng).unwrap();
                let lhs = p.w_eval(CyclicSpin::new(a, n)).unwrap();
                let rhs = p.w_eval(CyclicSpin::new(a + n as i64, n)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
