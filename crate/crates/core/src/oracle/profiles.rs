//! Closed-form chemical and pressure fields of the expansion and the
//! order-0 interface motion they induce.

use num_complex::Complex64;

use super::strip::{BoundaryPair, StripField};
use crate::model::{beta1, beta2, forcing_k0, forcing_k0_integral, linear_block, ModelParams};
use crate::spectral::{SpectralField, Symbol};

fn constant(v: f64) -> SpectralField {
    SpectralField::cosine(0, 0, v)
}

/// Fourth-order time derivative of `f` at `t`, one-sided when `t < 2h`.
fn time_derivative(f: impl Fn(f64) -> SpectralField, t: f64, h: f64) -> SpectralField {
    if t >= 2.0 * h {
        (f(t - 2.0 * h) - f(t - h) * 8.0 + f(t + h) * 8.0 - f(t + 2.0 * h)) * (1.0 / (12.0 * h))
    } else {
        (f(t) * -25.0 + f(t + h) * 48.0 - f(t + 2.0 * h) * 36.0 + f(t + 3.0 * h) * 16.0
            - f(t + 4.0 * h) * 3.0)
            * (1.0 / (12.0 * h))
    }
}

const CHECK_HEIGHTS: [f64; 9] = [-1.0, -0.875, -0.75, -0.6, -0.5, -0.3, -0.25, -0.1, 0.0];

/// Order-0 inhibitor and nutrient, functions of `x₂` and `t` only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZerothProfiles {
    pub decay: f64,
    pub beta1: f64,
    pub c_b: f64,
}

impl ZerothProfiles {
    pub fn b0(&self, y: f64) -> f64 {
        -self.c_b * self.decay * y * (y + 1.0)
    }

    pub fn s0(&self, y: f64) -> f64 {
        -self.decay * self.beta1 * y * (y + 1.0)
    }

    /// `∂₂S⁽⁰⁾`
    pub fn s0_d2(&self, y: f64) -> f64 {
        -self.decay * self.beta1 * (2.0 * y + 1.0)
    }

    /// `∂₂₂S⁽⁰⁾`
    pub fn s0_d22(&self) -> f64 {
        -2.0 * self.decay * self.beta1
    }

    pub fn s0_d2_top(&self) -> f64 {
        -self.decay * self.beta1
    }

    pub fn s0_d2_bot(&self) -> f64 {
        self.decay * self.beta1
    }
}

pub fn zeroth_profiles(t: f64, p: &ModelParams) -> ZerothProfiles {
    ZerothProfiles {
        decay: p.decay(t),
        beta1: beta1(t, p),
        c_b: p.c_b,
    }
}

/// Largest defect of `∂tB + NB = 0` and `∂tS + NS + NB = 0` at a few heights,
/// with time derivatives by finite differences.
pub fn zeroth_ode_residual(t: f64, p: &ModelParams) -> f64 {
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for &y in &CHECK_HEIGHTS {
        let b = |s: f64| constant(zeroth_profiles(s, p).b0(y));
        let s = |s: f64| constant(zeroth_profiles(s, p).s0(y));
        let now = zeroth_profiles(t, p);
        let rb = time_derivative(b, t, h).coeff(0).re + p.big_n * now.b0(y);
        let rs = time_derivative(s, t, h).coeff(0).re + p.big_n * (now.s0(y) + now.b0(y));
        worst = worst.max(rb.abs()).max(rs.abs());
    }
    worst
}

/// Exact order-0 interface motion from initial data `(h(0), b(0))`.
#[derive(Clone, Debug)]
pub struct Order0Trajectory {
    pub h_init: SpectralField,
    pub b_init: SpectralField,
    params: ModelParams,
}

impl Order0Trajectory {
    pub fn new(h_init: &SpectralField, b_init: &SpectralField, p: &ModelParams) -> Self {
        let kmax = h_init.kmax().max(b_init.kmax());
        Self {
            h_init: h_init.resized(kmax),
            b_init: b_init.resized(kmax),
            params: p.clone(),
        }
    }

    pub fn kmax(&self) -> usize {
        self.h_init.kmax()
    }

    pub fn at(&self, t: f64) -> (SpectralField, SpectralField) {
        let p = &self.params;
        let kmax = self.kmax();
        let mut h = SpectralField::zeros(kmax);
        let mut b = SpectralField::zeros(kmax);
        for k in -(kmax as i64)..=kmax as i64 {
            let blk = linear_block(k, p);
            let (hk, bk) = (self.h_init.coeff(k), self.b_init.coeff(k));
            let plus = (hk + bk) * (blk.lambda_plus * t).exp();
            let minus = (hk - bk) * (blk.lambda_minus * t).exp();
            h.set_mode(k, (plus + minus) * 0.5);
            b.set_mode(k, (plus - minus) * 0.5);
        }
        let mean = forcing_k0_integral(t, p);
        h.set_mode(0, h.coeff(0) + mean);
        b.set_mode(0, b.coeff(0) - mean);
        (h, b)
    }

    /// `(∂t h, ∂t b)` from the order-0 evolution law.
    pub fn rate(&self, t: f64) -> (SpectralField, SpectralField) {
        let p = &self.params;
        let (h, b) = self.at(t);
        let t1 = Symbol::THETA1.then(Symbol::LAMBDA_SQ).scaled(-p.eta);
        let t2 = Symbol::THETA2.then(Symbol::LAMBDA_SQ).scaled(-p.eta);
        let k0 = constant(forcing_k0(t, p));
        (
            h.apply(t1) + b.apply(t2) + k0.resized(h.kmax()),
            h.apply(t2) + b.apply(t1) - k0.resized(h.kmax()),
        )
    }

    /// Largest `|λ|` over the retained modes, which bounds time derivatives.
    pub fn stiffness(&self) -> f64 {
        let top = self.kmax() as i64;
        (0..=top)
            .filter(|&k| {
                self.h_init.coeff(k).norm() + self.b_init.coeff(k).norm() > 0.0
            })
            .map(|k| -linear_block(k, &self.params).lambda_plus)
            .fold(1.0, f64::max)
    }
}

/// Order-0 pressure: a quartic in `x₂` from the chemicals plus the harmonic
/// extension of the Laplace–Young traces `-ηh₁₁`, `ηb₁₁`.
#[derive(Clone, Debug)]
pub struct PressureP0 {
    pub h: SpectralField,
    pub b: SpectralField,
    /// `-θβ₁e^{-Nt}`
    quadratic: f64,
    /// `(ρ/12)β₂e^{-Nt}`
    quartic: f64,
    eta: f64,
}

impl PressureP0 {
    pub fn kmax(&self) -> usize {
        self.h.kmax()
    }

    /// `∂₂^dy ∂₁^dx P⁽⁰⁾` at height `y`, `dy ≤ 2`.
    pub fn eval(&self, y: f64, dy: u8, dx: u8) -> SpectralField {
        let kmax = self.kmax();
        let s = y * (y + 1.0);
        let s1 = 2.0 * y + 1.0;
        SpectralField::from_fn(kmax, |k| {
            if k == 0 {
                if dx > 0 {
                    return Complex64::new(0.0, 0.0);
                }
                let v = match dy {
                    0 => self.quadratic * s + self.quartic * s * (s - 1.0),
                    1 => self.quadratic * s1 + self.quartic * (2.0 * s - 1.0) * s1,
                    _ => 2.0 * self.quadratic + self.quartic * 12.0 * s,
                };
                return Complex64::new(v, 0.0);
            }
            let a = k.unsigned_abs() as f64;
            let up = a * (y + 1.0);
            let down = a * y;
            // ∂₂^dy of sinh(a(y+1))/sinh a and sinh(ay)/sinh a
            let (fu, fd) = match dy {
                0 => (up.sinh(), down.sinh()),
                1 => (a * up.cosh(), a * down.cosh()),
                _ => (a * a * up.sinh(), a * a * down.sinh()),
            };
            let amp = self.eta * (k * k) as f64 / a.sinh();
            let c = (self.h.coeff(k) * fu + self.b.coeff(k) * fd) * amp;
            c * Complex64::new(0.0, k as f64).powu(dx as u32)
        })
    }

    pub fn sample(&self, nodes: &[f64]) -> StripField {
        StripField::from_fn(nodes, |y| self.eval(y, 0, 0))
    }

    /// `∂₂P⁽⁰⁾` traces from differentiating the closed form.
    pub fn boundary_d2(&self) -> BoundaryPair {
        BoundaryPair::new(self.eval(0.0, 1, 0), self.eval(-1.0, 1, 0))
    }

    /// `∂₂P⁽⁰⁾` traces written with the boundary multipliers: top
    /// `-θβ₁e - (ρ/12)β₂e + η(Θ₁Λ²h + Θ₂Λ²b)`, bottom mirrored.
    pub fn boundary_d2_multipliers(&self) -> BoundaryPair {
        let chem = constant(self.quadratic - self.quartic);
        let l1 = Symbol::THETA1.then(Symbol::LAMBDA_SQ).scaled(self.eta);
        let l2 = Symbol::THETA2.then(Symbol::LAMBDA_SQ).scaled(self.eta);
        BoundaryPair::new(
            &chem + &(self.h.apply(l1) + self.b.apply(l2)),
            &(-&chem) + &(self.h.apply(l2) + self.b.apply(l1)),
        )
    }
}

pub fn pressure_p0(h0: &SpectralField, b0: &SpectralField, t: f64, p: &ModelParams) -> PressureP0 {
    let kmax = h0.kmax().max(b0.kmax());
    PressureP0 {
        h: h0.resized(kmax),
        b: b0.resized(kmax),
        quadratic: -p.theta * beta1(t, p) * p.decay(t),
        quartic: p.rho / 12.0 * beta2(t, p) * p.decay(t),
        eta: p.eta,
    }
}

/// Order-1 inhibitor and nutrient, driven by the displacement
/// `δf = f(t) - f(0)` of the order-0 interfaces.
#[derive(Clone, Debug)]
pub struct FirstOrderChem {
    pub t: f64,
    pub decay: f64,
    pub beta1: f64,
    pub c_b: f64,
    pub dh: SpectralField,
    pub db: SpectralField,
}

impl FirstOrderChem {
    /// `(x₂+1)δh - x₂δb`
    fn shift(&self, y: f64) -> SpectralField {
        &self.dh * (y + 1.0) - &self.db * y
    }

    fn with_mean(&self, f: SpectralField, mean: f64) -> SpectralField {
        let mut f = f;
        f.set_mode(0, f.coeff(0) + mean);
        f
    }

    pub fn b1(&self, y: f64) -> SpectralField {
        let amp = -self.c_b * self.decay;
        self.with_mean(self.shift(y) * ((2.0 * y + 1.0) * amp), 2.0 * self.t * amp)
    }

    pub fn s1(&self, y: f64) -> SpectralField {
        let amp = -self.decay * self.beta1;
        self.with_mean(self.shift(y) * ((2.0 * y + 1.0) * amp), 2.0 * self.t * amp)
    }

    /// `∂₂S⁽¹⁾`
    pub fn s1_d2(&self, y: f64) -> SpectralField {
        let amp = -self.decay * self.beta1;
        self.shift(y) * (2.0 * amp) + (&self.dh - &self.db) * ((2.0 * y + 1.0) * amp)
    }

    /// `∂₂₂S⁽¹⁾`
    pub fn s1_d22(&self) -> SpectralField {
        (&self.dh - &self.db) * (-4.0 * self.decay * self.beta1)
    }

    /// `ΔS⁽¹⁾`
    pub fn s1_laplacian(&self, y: f64) -> SpectralField {
        let s = self.s1(y);
        s.map_modes(|k, c| c * -((k * k) as f64)) + self.s1_d22()
    }

    /// `∂₂S⁽¹⁾` traces in the `-3δh + δb` form.
    pub fn s1_d2_boundary(&self) -> BoundaryPair {
        let e = self.decay * self.beta1;
        BoundaryPair::new(
            &self.dh * (-3.0 * e) + &self.db * e,
            &self.db * (-3.0 * e) + &self.dh * e,
        )
    }
}

pub fn first_order_chem(
    h_init: &SpectralField,
    b_init: &SpectralField,
    h_t: &SpectralField,
    b_t: &SpectralField,
    t: f64,
    p: &ModelParams,
) -> FirstOrderChem {
    let kmax = h_init.kmax().max(b_init.kmax()).max(h_t.kmax()).max(b_t.kmax());
    FirstOrderChem {
        t,
        decay: p.decay(t),
        beta1: beta1(t, p),
        c_b: p.c_b,
        dh: h_t.resized(kmax) - h_init.resized(kmax),
        db: b_t.resized(kmax) - b_init.resized(kmax),
    }
}

/// Largest ℓ¹ defect of the order-1 inhibitor and nutrient equations along
/// the order-0 trajectory, with time derivatives by finite differences.
pub fn first_order_ode_residual(traj: &Order0Trajectory, t: f64, p: &ModelParams) -> f64 {
    let h = (0.005 / traj.stiffness()).min(1e-3);
    let chem = |s: f64| {
        let (hs, bs) = traj.at(s);
        first_order_chem(&traj.h_init, &traj.b_init, &hs, &bs, s, p)
    };
    let now = chem(t);
    let (dh, db) = traj.rate(t);
    let e = p.decay(t);
    let b1 = beta1(t, p);
    let mut worst: f64 = 0.0;
    for &y in &CHECK_HEIGHTS {
        let velocity = &dh * (y + 1.0) - &db * y;
        let lhs_b = time_derivative(|s| chem(s).b1(y), t, h) + now.b1(y) * p.big_n;
        let mut rhs_b = &velocity * (-p.c_b * e * (2.0 * y + 1.0));
        rhs_b.set_mode(0, rhs_b.coeff(0) - 2.0 * p.c_b * e);
        let lhs_s = time_derivative(|s| chem(s).s1(y), t, h) + (now.s1(y) + now.b1(y)) * p.big_n;
        let mut rhs_s = &velocity * (-e * b1 * (2.0 * y + 1.0));
        rhs_s.set_mode(0, rhs_s.coeff(0) - 2.0 * e * b1);
        worst = worst
            .max(lhs_b.l1_distance(&rhs_b))
            .max(lhs_s.l1_distance(&rhs_s));
    }
    worst
}

/// Interface-curvature sources of the order-1 pressure equation.
#[derive(Clone, Debug)]
pub struct Q0Z0 {
    pub pressure: PressureP0,
    pub zeroth: ZerothProfiles,
}

impl Q0Z0 {
    fn shift(&self, y: f64, dx: u32) -> SpectralField {
        let d = Symbol::DX;
        let h = &self.pressure.h;
        let b = &self.pressure.b;
        let (h, b) = (0..dx).fold((h.clone(), b.clone()), |(h, b), _| (h.apply(d), b.apply(d)));
        h * (y + 1.0) - b * y
    }

    fn gap(&self) -> SpectralField {
        &self.pressure.h - &self.pressure.b
    }

    /// `((x₂+1)h₁₁ - x₂b₁₁) S⁽⁰⁾,₂ + 2(h - b) S⁽⁰⁾,₂₂`
    pub fn z0(&self, y: f64) -> SpectralField {
        self.shift(y, 2) * self.zeroth.s0_d2(y) + self.gap() * (2.0 * self.zeroth.s0_d22())
    }

    /// `((x₂+1)h₁₁ - x₂b₁₁) P⁽⁰⁾,₂ + 2((x₂+1)h₁ - x₂b₁) P⁽⁰⁾,₁₂ + 2(h - b) P⁽⁰⁾,₂₂`
    pub fn q0(&self, y: f64) -> SpectralField {
        let p = &self.pressure;
        let first = self.shift(y, 2).convolve(&p.eval(y, 1, 0));
        let second = self.shift(y, 1).convolve(&p.eval(y, 1, 1)) * 2.0;
        let third = self.gap().convolve(&p.eval(y, 2, 0)) * 2.0;
        first + second + third
    }

    pub fn sample(&self, nodes: &[f64]) -> (StripField, StripField) {
        (
            StripField::from_fn(nodes, |y| self.q0(y)),
            StripField::from_fn(nodes, |y| self.z0(y)),
        )
    }
}

pub fn q0_z0(h0: &SpectralField, b0: &SpectralField, t: f64, p: &ModelParams) -> Q0Z0 {
    Q0Z0 {
        pressure: pressure_p0(h0, b0, t, p),
        zeroth: zeroth_profiles(t, p),
    }
}
