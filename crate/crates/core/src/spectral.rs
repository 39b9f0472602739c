//! Fourier representation of real 2π-periodic functions.
//!
//! Coefficients follow `v(x) = Σ_k v̂(k) e^{ikx}` with
//! `v̂(k) = (1/2π) ∫ v(x) e^{-ikx} dx`, stored for `|k| ≤ K`. Physical samples
//! live on the uniform grid `x_j = -π + 2πj/M`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative Hermitian defect tolerated before synthesis refuses a field.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Complex Fourier coefficients of a real periodic function, truncated at `|k| ≤ K`.
#[derive(Clone, PartialEq)]
pub struct SpectralField {
    kmax: usize,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (k, c) in self.modes() {
            if c != Complex64::new(0.0, 0.0) {
                list.entry(&k, &c);
            }
        }
        list.finish()
    }
}

impl SpectralField {
    pub fn zeros(kmax: usize) -> Self {
        Self {
            kmax,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * kmax + 1],
        }
    }

    /// Builds a field from a coefficient rule evaluated for every `|k| ≤ K`.
    ///
    /// The rule is trusted to be Hermitian; use [`SpectralField::from_modes`]
    /// when only the nonnegative half is known.
    pub fn from_fn(kmax: usize, mut rule: impl FnMut(i64) -> Complex64) -> Self {
        let k = kmax as i64;
        Self {
            kmax,
            coeffs: (-k..=k).map(&mut rule).collect(),
        }
    }

    /// Sets the listed modes and fills their mirror images with conjugates.
    ///
    /// A mode listed as both `k` and `-k` keeps the later entry for `-k`, so a
    /// non-Hermitian list is caught by [`SpectralField::check_hermitian`].
    pub fn from_modes(kmax: usize, modes: &[(i64, Complex64)]) -> Self {
        let mut field = Self::zeros(kmax);
        for &(k, c) in modes {
            if k.unsigned_abs() as usize > kmax {
                continue;
            }
            let i = field.index(-k);
            field.coeffs[i] = c.conj();
        }
        for &(k, c) in modes {
            if k.unsigned_abs() as usize > kmax {
                continue;
            }
            let i = field.index(k);
            field.coeffs[i] = c;
        }
        field
    }

    /// Single real Fourier mode `amp · cos(k (x - phase))`.
    pub fn cosine(kmax: usize, k: i64, amp: f64) -> Self {
        Self::cosine_shifted(kmax, k, amp, 0.0)
    }

    pub fn cosine_shifted(kmax: usize, k: i64, amp: f64, phase: f64) -> Self {
        if k == 0 {
            return Self::from_modes(kmax, &[(0, Complex64::new(amp, 0.0))]);
        }
        let c = Complex64::from_polar(amp / 2.0, -(k as f64) * phase);
        Self::from_modes(kmax, &[(k, c)])
    }

    pub fn sine(kmax: usize, k: i64, amp: f64) -> Self {
        Self::cosine_shifted(kmax, k, amp, PI / (2.0 * k as f64))
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    fn index(&self, k: i64) -> usize {
        (k + self.kmax as i64) as usize
    }

    /// Coefficient of mode `k`; zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.kmax {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[self.index(k)]
        }
    }

    /// Sets mode `k` and its conjugate partner `-k`.
    pub fn set_mode(&mut self, k: i64, c: Complex64) {
        assert!(k.unsigned_abs() as usize <= self.kmax, "mode {k} outside truncation");
        let (i, j) = (self.index(k), self.index(-k));
        if k == 0 {
            self.coeffs[i] = Complex64::new(c.re, 0.0);
        } else {
            self.coeffs[i] = c;
            self.coeffs[j] = c.conj();
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k = self.kmax as i64;
        (-k..=k).zip(self.coeffs.iter().copied())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeff(0).re
    }

    /// Largest `|v̂(-k) - conj(v̂(k))|`, including the imaginary part of the mean.
    pub fn hermitian_defect(&self) -> f64 {
        (0..=self.kmax as i64)
            .map(|k| (self.coeff(-k) - self.coeff(k).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let tolerance = HERMITIAN_TOL * self.wiener_norm(0).max(f64::MIN_POSITIVE);
        let defect = self.hermitian_defect();
        if defect > tolerance {
            return Err(Error::HermitianViolation { defect, tolerance });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `Σ_k |k|^j |v̂(k)|`, the norm of the Wiener space `A^j`.
    pub fn wiener_norm(&self, j: u32) -> f64 {
        self.modes()
            .map(|(k, c)| {
                if j == 0 {
                    c.norm()
                } else {
                    (k.unsigned_abs() as f64).powi(j as i32) * c.norm()
                }
            })
            .sum()
    }

    /// Truncates or zero-pads to a new `K`.
    pub fn resized(&self, kmax: usize) -> Self {
        Self::from_fn(kmax, |k| self.coeff(k))
    }

    pub fn map_modes(&self, mut f: impl FnMut(i64, Complex64) -> Complex64) -> Self {
        Self::from_fn(self.kmax, |k| f(k, self.coeff(k)))
    }

    pub fn apply(&self, symbol: Symbol) -> Self {
        let out = self.map_modes(|k, c| symbol.eval(k) * c);
        debug_assert!(self.hermitian_defect() > 0.0 || out.hermitian_defect() == 0.0);
        out
    }

    pub fn derivative(&self) -> Self {
        self.apply(Symbol::DX)
    }

    /// Translation `v(x) ↦ v(x + a)`.
    pub fn shifted(&self, a: f64) -> Self {
        self.map_modes(|k, c| c * Complex64::from_polar(1.0, k as f64 * a))
    }

    pub fn with_zero_mean(mut self) -> Self {
        let i = self.index(0);
        self.coeffs[i] = Complex64::new(0.0, 0.0);
        self
    }

    /// Exact coefficient convolution (the product of the two functions),
    /// keeping every generated mode: the result has `K = K_f + K_g`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.kmax + other.kmax);
        for (i, a) in self.modes() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.modes() {
                let idx = out.index(i + j);
                out.coeffs[idx] += a * b;
            }
        }
        out
    }

    /// `max_k |f̂(k) - ĝ(k)|` over the union of both ranges.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let k = self.kmax.max(other.kmax) as i64;
        (-k..=k)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// `‖f - g‖_{A^0}` over the union of both ranges.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        let k = self.kmax.max(other.kmax) as i64;
        (-k..=k).map(|k| (self.coeff(k) - other.coeff(k)).norm()).sum()
    }

    /// Pointwise evaluation of the series at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.modes()
            .map(|(k, c)| (c * Complex64::from_polar(1.0, k as f64 * x)).re)
            .sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let kmax = self.kmax.max(other.kmax);
        Self::from_fn(kmax, |k| f(self.coeff(k), other.coeff(k)))
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Add for SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        &self + &rhs
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Sub for SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        &self - &rhs
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        if rhs.kmax > self.kmax {
            *self = self.resized(rhs.kmax);
        }
        for (k, c) in rhs.modes() {
            let i = self.index(k);
            self.coeffs[i] += c;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        if rhs.kmax > self.kmax {
            *self = self.resized(rhs.kmax);
        }
        for (k, c) in rhs.modes() {
            let i = self.index(k);
            self.coeffs[i] -= c;
        }
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.map_modes(|_, c| c * rhs)
    }
}

impl Mul<f64> for SpectralField {
    type Output = SpectralField;
    fn mul(mut self, rhs: f64) -> SpectralField {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}

impl Neg for SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}

/// `(|k| coth|k|, |k| / sinh|k|)`, the symbols of `Θ₁ = Λ coth Λ` and
/// `Θ₂ = Λ / sinh Λ`, with their continuous value `(1, 1)` at `k = 0`.
///
/// Both use exponential forms that neither overflow nor lose the tiny tail of
/// `Θ₂` for large `|k|`.
pub fn theta_symbols(k: i64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 1.0);
    }
    let a = k.unsigned_abs() as f64;
    let theta1 = a * (1.0 + 2.0 / (2.0 * a).exp_m1());
    let theta2 = 2.0 * a * (-a).exp() / -(-2.0 * a).exp_m1();
    (theta1, theta2)
}

/// Fourier multiplier monomial `scale · |k|^p · θ₁(k)^a · θ₂(k)^b · (ik)^d`.
///
/// Covers every operator in the interface system: `Λ`, `Λ²`, `Θ₁`, `Θ₂`,
/// `∂ₓ` and their products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Symbol {
    pub scale: f64,
    pub lambda_pow: u32,
    pub theta1_pow: u32,
    pub theta2_pow: u32,
    pub dx_pow: u32,
}

impl Symbol {
    pub const IDENTITY: Symbol = Symbol {
        scale: 1.0,
        lambda_pow: 0,
        theta1_pow: 0,
        theta2_pow: 0,
        dx_pow: 0,
    };
    pub const LAMBDA: Symbol = Symbol {
        lambda_pow: 1,
        ..Self::IDENTITY
    };
    pub const LAMBDA_SQ: Symbol = Symbol {
        lambda_pow: 2,
        ..Self::IDENTITY
    };
    pub const THETA1: Symbol = Symbol {
        theta1_pow: 1,
        ..Self::IDENTITY
    };
    pub const THETA2: Symbol = Symbol {
        theta2_pow: 1,
        ..Self::IDENTITY
    };
    pub const DX: Symbol = Symbol {
        dx_pow: 1,
        ..Self::IDENTITY
    };

    /// Composition of two multipliers (their symbols multiply).
    pub const fn then(self, other: Symbol) -> Symbol {
        Symbol {
            scale: self.scale * other.scale,
            lambda_pow: self.lambda_pow + other.lambda_pow,
            theta1_pow: self.theta1_pow + other.theta1_pow,
            theta2_pow: self.theta2_pow + other.theta2_pow,
            dx_pow: self.dx_pow + other.dx_pow,
        }
    }

    pub const fn scaled(self, s: f64) -> Symbol {
        Symbol {
            scale: self.scale * s,
            ..self
        }
    }

    pub fn eval(&self, k: i64) -> Complex64 {
        let (t1, t2) = theta_symbols(k);
        let a = k.unsigned_abs() as f64;
        let mut real = self.scale
            * a.powi(self.lambda_pow as i32)
            * t1.powi(self.theta1_pow as i32)
            * t2.powi(self.theta2_pow as i32);
        if self.dx_pow == 0 {
            return Complex64::new(real, 0.0);
        }
        real *= (k as f64).powi(self.dx_pow as i32);
        match self.dx_pow % 4 {
            0 => Complex64::new(real, 0.0),
            1 => Complex64::new(0.0, real),
            2 => Complex64::new(-real, 0.0),
            _ => Complex64::new(0.0, -real),
        }
    }
}

/// Uniform physical grid with cached FFT plans.
#[derive(Clone)]
pub struct Grid {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("m", &self.m).finish()
    }
}

impl Grid {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m)
            .map(|j| -PI + 2.0 * PI * j as f64 / self.m as f64)
            .collect()
    }

    fn slot(&self, k: i64) -> usize {
        k.rem_euclid(self.m as i64) as usize
    }

    /// Coefficients `|k| ≤ K` of the trigonometric interpolant of `samples`.
    pub fn analyze(&self, samples: &[f64], kmax: usize) -> Result<SpectralField> {
        let required = 2 * kmax + 2;
        if self.m < required {
            return Err(Error::GridTooSmall {
                m: self.m,
                kmax,
                required,
            });
        }
        if samples.len() != self.m {
            return Err(Error::InvalidParams(format!(
                "expected {} samples, got {}",
                self.m,
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("analyze input"));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        let mut field = SpectralField::zeros(kmax);
        for k in 0..=kmax as i64 {
            // x_0 = -π contributes the phase (-1)^k.
            let sign = if k % 2 == 0 { scale } else { -scale };
            field.set_mode(k, buf[self.slot(k)] * sign);
        }
        Ok(field)
    }

    /// Samples `Σ_k v̂(k) e^{ikx_j}` on the grid.
    pub fn synthesize(&self, field: &SpectralField) -> Result<Vec<f64>> {
        let required = 2 * field.kmax() + 1;
        if self.m < required {
            return Err(Error::GridTooSmall {
                m: self.m,
                kmax: field.kmax(),
                required,
            });
        }
        field.check_hermitian()?;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        for (k, c) in field.modes() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            buf[self.slot(k)] = c * sign;
        }
        self.inverse.process(&mut buf);
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    /// Dealiased product: both factors are sampled, multiplied pointwise and
    /// projected back onto `|k| ≤ K`. Alias-free whenever `M ≥ 3K + 1`.
    pub fn multiply(&self, f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
        if f.kmax() != g.kmax() {
            return Err(Error::TruncationMismatch {
                left: f.kmax(),
                right: g.kmax(),
            });
        }
        let kmax = f.kmax();
        let required = 3 * kmax + 1;
        if self.m < required {
            return Err(Error::GridTooSmall {
                m: self.m,
                kmax,
                required,
            });
        }
        let a = self.synthesize(f)?;
        let b = self.synthesize(g)?;
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        self.analyze(&prod, kmax)
    }

    /// Pointwise product of already-sampled fields, projected onto `|k| ≤ K`.
    pub fn project_product(&self, a: &[f64], b: &[f64], kmax: usize) -> Result<SpectralField> {
        let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.analyze(&prod, kmax)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sampled(grid: &Grid, f: impl Fn(f64) -> f64) -> Vec<f64> {
        grid.points().into_iter().map(f).collect()
    }

    #[test]
    fn analyze_single_modes() {
        let grid = Grid::new(64);
        let s = grid.analyze(&sampled(&grid, f64::sin), 8).unwrap();
        assert!((s.coeff(1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((s.coeff(-1) - c(0.0, 0.5)).norm() < 1e-15);
        assert!(s.l1_distance(&SpectralField::sine(8, 1, 1.0)) < 1e-14);

        let one = grid.analyze(&vec![1.0; 64], 8).unwrap();
        assert!((one.coeff(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(one.wiener_norm(0) - 1.0 < 1e-14);
    }

    #[test]
    fn analyze_mixed_modes() {
        let grid = Grid::new(64);
        let f = grid
            .analyze(&sampled(&grid, |x| (2.0 * x).cos() + 3.0 * (5.0 * x).sin()), 8)
            .unwrap();
        let expected = [(2, c(0.5, 0.0)), (-2, c(0.5, 0.0)), (5, c(0.0, -1.5)), (-5, c(0.0, 1.5))];
        for (k, want) in expected {
            assert!((f.coeff(k) - want).norm() < 1e-14, "k={k}");
        }
        let others: f64 = f
            .modes()
            .filter(|(k, _)| k.abs() != 2 && k.abs() != 5)
            .map(|(_, c)| c.norm())
            .sum();
        assert!(others < 1e-13);
    }

    #[test]
    fn analyze_rejects_coarse_grid() {
        let grid = Grid::new(17);
        let err = grid.analyze(&vec![0.0; 17], 8).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { required: 18, .. }));
    }

    #[test]
    fn synthesize_sine_and_zero() {
        let grid = Grid::new(32);
        let v = grid.synthesize(&SpectralField::sine(4, 1, 1.0)).unwrap();
        for (x, y) in grid.points().into_iter().zip(v) {
            assert!((x.sin() - y).abs() < 1e-15);
        }
        let z = grid.synthesize(&SpectralField::zeros(4)).unwrap();
        assert!(z.iter().all(|&y| y == 0.0));
    }

    #[test]
    fn synthesize_rejects_broken_symmetry() {
        let grid = Grid::new(32);
        let mut f = SpectralField::cosine(4, 2, 1.0);
        let i = f.index(2);
        f.coeffs[i] = c(0.5, 0.1);
        assert!(matches!(
            grid.synthesize(&f),
            Err(Error::HermitianViolation { .. })
        ));
    }

    #[test]
    fn theta_symbol_values() {
        assert_eq!(theta_symbols(0), (1.0, 1.0));
        // coth(1) = (e²+1)/(e²-1), 1/sinh(1) = 2/(e - 1/e)
        let e = 1f64.exp();
        let (t1, t2) = theta_symbols(1);
        assert!((t1 - (e * e + 1.0) / (e * e - 1.0)).abs() < 1e-15);
        assert!((t2 - 2.0 / (e - 1.0 / e)).abs() < 1e-15);
        assert!((t1 - 1.3130352855).abs() < 1e-10);
        assert!((t2 - 0.8509181282).abs() < 1e-10);
        assert_eq!(theta_symbols(-3), theta_symbols(3));

        let (t1, t2) = theta_symbols(50);
        assert_eq!(t1, 50.0);
        assert!(t2 > 0.0);
        assert!((t2 / (100.0 * (-50f64).exp()) - 1.0).abs() < 1e-14);
        let (_, far) = theta_symbols(5000);
        assert!(far >= 0.0 && far < 1e-300);
    }

    #[test]
    fn coth_identity_and_theta2_decay() {
        for k in 1..=50i64 {
            let a = k as f64;
            let (t1, _) = theta_symbols(k);
            let reference = a + 2.0 * a / ((2.0 * a).exp() - 1.0);
            assert!(((t1 - reference) / reference).abs() < 1e-13, "k={k}");
        }
        for k in 30..=400i64 {
            let (_, t2) = theta_symbols(k);
            assert!(t2 * (k as f64).powi(6) < 1.0, "k={k}");
        }
    }

    #[test]
    fn multipliers_on_modes() {
        let cos1 = SpectralField::cosine(6, 1, 1.0);
        let sin1 = SpectralField::sine(6, 1, 1.0);
        assert!(sin1.apply(Symbol::LAMBDA_SQ).l1_distance(&sin1) < 1e-15);
        let out = cos1.apply(Symbol::THETA2.then(Symbol::LAMBDA_SQ));
        let e = 1f64.exp();
        assert!(out.l1_distance(&(&cos1 * (2.0 / (e - 1.0 / e)))) < 1e-15);
        assert!((0.8509 - out.coeff(1).re * 2.0).abs() < 1e-4);
        assert_eq!(
            SpectralField::zeros(6).apply(Symbol::THETA1.then(Symbol::LAMBDA_SQ)),
            SpectralField::zeros(6)
        );
        // ∂ₓ cos = -sin
        assert!(cos1.derivative().l1_distance(&-&sin1) < 1e-15);
    }

    #[test]
    fn products() {
        let grid = Grid::new(64);
        let sin1 = SpectralField::sine(8, 1, 1.0);
        let one = SpectralField::cosine(8, 0, 1.0);
        assert!(grid.multiply(&sin1, &one).unwrap().l1_distance(&sin1) < 1e-14);

        let cos1 = SpectralField::cosine(8, 1, 1.0);
        let sq = grid.multiply(&cos1, &cos1).unwrap();
        let want = &SpectralField::cosine(8, 0, 0.5) + &SpectralField::cosine(8, 2, 0.5);
        assert!(sq.l1_distance(&want) < 1e-14);

        // sin·cos = sin(2x)/2 lies entirely above K = 1.
        let grid4 = Grid::new(4);
        let p = grid4
            .multiply(&SpectralField::sine(1, 1, 1.0), &SpectralField::cosine(1, 1, 1.0))
            .unwrap();
        assert!(p.wiener_norm(0) < 1e-15);
    }

    #[test]
    fn product_matches_exact_convolution() {
        let grid = Grid::new(40);
        let f = SpectralField::from_modes(12, &[(3, c(0.2, -0.1)), (7, c(0.0, 0.4)), (12, c(0.1, 0.1))]);
        let g = SpectralField::from_modes(12, &[(0, c(1.0, 0.0)), (5, c(-0.3, 0.2)), (11, c(0.05, 0.0))]);
        let exact = f.convolve(&g).resized(12);
        assert!(grid.multiply(&f, &g).unwrap().l1_distance(&exact) < 1e-14);
    }

    #[test]
    fn wiener_norms() {
        let sin1 = SpectralField::sine(4, 1, 1.0);
        assert!((sin1.wiener_norm(0) - 1.0).abs() < 1e-15);
        assert!((sin1.wiener_norm(1) - 1.0).abs() < 1e-15);
        assert!((SpectralField::cosine(4, 3, 1.0).wiener_norm(2) - 9.0).abs() < 1e-14);
        assert!((SpectralField::cosine(4, 0, -2.0).wiener_norm(0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn translation_phase() {
        let f = SpectralField::cosine(4, 2, 1.0);
        let shifted = f.shifted(0.3);
        for x in [-1.0, 0.2, 2.5] {
            assert!((shifted.eval(x) - (2.0 * (x + 0.3)).cos()).abs() < 1e-14);
        }
    }
}
