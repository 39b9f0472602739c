//! Interface velocities computed two ways: from the spectral evolution law
//! (route a) and from the strip fields through the Poisson oracle (route b).

use num_complex::Complex64;

use super::poisson::poisson_boundary_derivatives;
use super::profiles::{first_order_chem, pressure_p0, q0_z0, zeroth_profiles};
use super::strip::{BoundaryPair, FnSource};
use crate::model::{forcing_j1, forcing_k0, forcing_k1, ForcingCache, ForcingMode, ModelParams};
use crate::spectral::{theta_symbols, SpectralField, Symbol};

/// Deviations between the two routes, measured as ℓ¹ coefficient distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryDeviation {
    pub top: f64,
    pub bot: f64,
}

impl BoundaryDeviation {
    /// Larger of the two; NaN if either is.
    pub fn max(&self) -> f64 {
        if self.top.is_nan() || self.bot.is_nan() {
            f64::NAN
        } else {
            self.top.max(self.bot)
        }
    }

    fn between(a: &BoundaryPair, b: &BoundaryPair) -> Self {
        Self {
            top: a.top.l1_distance(&b.top),
            bot: a.bot.l1_distance(&b.bot),
        }
    }
}

/// Dirichlet data `(-ηh₁₁, ηb₁₁)` of a pressure.
fn laplace_young(h: &SpectralField, b: &SpectralField, eta: f64) -> BoundaryPair {
    let curvature = Symbol::LAMBDA_SQ.scaled(eta);
    BoundaryPair::new(h.apply(curvature), -b.apply(curvature))
}

/// `(∂t h, ∂t b)` at order 0 from the spectral law.
pub fn order0_route_a(h: &SpectralField, b: &SpectralField, t: f64, p: &ModelParams) -> BoundaryPair {
    let kmax = h.kmax().max(b.kmax());
    let (h, b) = (h.resized(kmax), b.resized(kmax));
    let l1 = Symbol::THETA1.then(Symbol::LAMBDA_SQ).scaled(-p.eta);
    let l2 = Symbol::THETA2.then(Symbol::LAMBDA_SQ).scaled(-p.eta);
    let k0 = SpectralField::cosine(kmax, 0, forcing_k0(t, p));
    BoundaryPair::new(
        h.apply(l1) + b.apply(l2) + k0.clone(),
        h.apply(l2) + b.apply(l1) - k0,
    )
}

/// `(∂t h, ∂t b)` at order 0 as `-P⁽⁰⁾,₂ + θS⁽⁰⁾,₂`, with the pressure from
/// the general Poisson oracle.
pub fn order0_route_b(h: &SpectralField, b: &SpectralField, t: f64, p: &ModelParams) -> BoundaryPair {
    let kmax = h.kmax().max(b.kmax());
    let z = zeroth_profiles(t, p);
    let source = FnSource::new(kmax, |y: f64| {
        let w = p.theta * z.s0_d22() - p.rho * (z.s0(y) - p.tau * z.b0(y));
        SpectralField::cosine(kmax, 0, w)
    });
    let d2 = poisson_boundary_derivatives(&source, &laplace_young(h, b, p.eta));
    let chem = |v: f64| SpectralField::cosine(kmax, 0, p.theta * v);
    BoundaryPair::new(
        chem(z.s0_d2_top()) - d2.top,
        chem(z.s0_d2_bot()) - d2.bot,
    )
}

pub fn verify_order0_boundary(h0: &SpectralField, b0: &SpectralField, t: f64, p: &ModelParams) -> BoundaryDeviation {
    BoundaryDeviation::between(&order0_route_a(h0, b0, t, p), &order0_route_b(h0, b0, t, p))
}

/// Inputs of the order-1 check.
#[derive(Clone, Debug)]
pub struct Order1Data {
    pub h_init: SpectralField,
    pub b_init: SpectralField,
    /// Order-0 interfaces at time `t`.
    pub h: SpectralField,
    pub b: SpectralField,
    /// Order-1 interfaces at time `t`.
    pub h1: SpectralField,
    pub b1: SpectralField,
    pub t: f64,
}

impl Order1Data {
    pub fn kmax(&self) -> usize {
        [&self.h_init, &self.b_init, &self.h, &self.b, &self.h1, &self.b1]
            .iter()
            .map(|f| f.kmax())
            .max()
            .unwrap_or(0)
    }

    fn resized(&self) -> Self {
        let k = self.kmax();
        Self {
            h_init: self.h_init.resized(k),
            b_init: self.b_init.resized(k),
            h: self.h.resized(k),
            b: self.b.resized(k),
            h1: self.h1.resized(k),
            b1: self.b1.resized(k),
            t: self.t,
        }
    }
}

/// Which J⁽¹⁾ feeds route (a) at the lower interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum J1Form {
    /// As configured by `j1_cosh_variant`.
    Configured,
    Printed,
    Cosh,
    /// `J⁽¹⁾(h, b) = -K⁽¹⁾(-b, -h)`, the reflection of the upper forcing.
    Mirror,
}

/// Which form of the `t`-proportional series feeds route (a).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileForm {
    Series,
    MeanOnly,
}

/// `(∂t h⁽¹⁾, ∂t b⁽¹⁾)` from the spectral law: linear terms in `(h⁽¹⁾, b⁽¹⁾)`,
/// the quadratic double sums in `(h⁽⁰⁾, b⁽⁰⁾)`, the chemical single sums and
/// the forcings.
pub fn order1_route_a(data: &Order1Data, p: &ModelParams, j1: J1Form, profile: ProfileForm) -> BoundaryPair {
    let d = data.resized();
    let kmax = d.kmax();
    let out = 2 * kmax;
    let l1 = Symbol::THETA1.then(Symbol::LAMBDA_SQ).scaled(-p.eta);
    let l2 = Symbol::THETA2.then(Symbol::LAMBDA_SQ).scaled(-p.eta);
    let kk = kmax as i64;
    let width = (2 * out + 1) as usize;
    let mut up_sum = vec![Complex64::new(0.0, 0.0); width];
    let mut down_sum = vec![Complex64::new(0.0, 0.0); width];
    for i in -kk..=kk {
        let (hi, bi) = (d.h.coeff(i), d.b.coeff(i));
        if hi.norm() + bi.norm() == 0.0 {
            continue;
        }
        for m in -kk..=kk {
            let (hm, bm) = (d.h.coeff(m), d.b.coeff(m));
            if hm.norm() + bm.norm() == 0.0 {
                continue;
            }
            let k = i + m;
            let (tk1, tk2) = theta_symbols(k);
            let (tm1, tm2) = theta_symbols(m);
            let m2 = (m * m) as f64;
            let km3 = (k * m * m * m) as f64;
            let slot = (k + out as i64) as usize;
            up_sum[slot] += hi * hm * (tk1 * m2 * tm1 - km3) + hi * bm * (tk1 * m2 * tm2)
                - bi * hm * (tk2 * m2 * tm2)
                - bi * bm * (tk2 * m2 * tm1);
            down_sum[slot] += hi * hm * (tk2 * m2 * tm1) + hi * bm * (tk2 * m2 * tm2)
                - bi * hm * (tk1 * m2 * tm2)
                + bi * bm * (km3 - tk1 * m2 * tm1);
        }
    }
    let quadratic = |sums: &[Complex64]| SpectralField::from_fn(out, |k| sums[(k + out as i64) as usize] * p.eta);
    let mut top = (d.h1.apply(l1) + d.b1.apply(l2)).resized(out) + quadratic(&up_sum);
    let mut bot = (d.h1.apply(l2) + d.b1.apply(l1)).resized(out) + quadratic(&down_sum);

    let rate = p.chemical_rate(d.t);
    let t1 = Symbol::THETA1.scaled(-rate);
    let t2 = Symbol::THETA2.scaled(-rate);
    top += &(d.h.apply(t1) + d.b.apply(t2));
    bot += &(d.h.apply(t2) + d.b.apply(t1));

    let mut q = p.clone();
    q.j1_cosh_variant = match j1 {
        J1Form::Printed => false,
        J1Form::Cosh => true,
        J1Form::Configured | J1Form::Mirror => p.j1_cosh_variant,
    };
    let mut cache = ForcingCache::new(&d.h_init, &d.b_init, ForcingMode::Full, &q);
    let mut mirror = ForcingCache::new(&-&d.b_init, &-&d.h_init, ForcingMode::Full, &q);
    if profile == ProfileForm::MeanOnly {
        for c in [&mut cache, &mut mirror] {
            c.profile.iter_mut().skip(1).for_each(|v| *v = 0.0);
        }
    }
    top += &forcing_k1(d.t, &cache, &q);
    let lower = match j1 {
        J1Form::Mirror => -forcing_k1(d.t, &mirror, &q),
        _ => forcing_j1(d.t, &cache, &q),
    };
    bot += &lower;
    BoundaryPair::new(top, bot)
}

/// `(∂t h⁽¹⁾, ∂t b⁽¹⁾)` from the interface conditions, with `P⁽¹⁾` obtained
/// from the general Poisson oracle.
pub fn order1_route_b(data: &Order1Data, p: &ModelParams) -> BoundaryPair {
    let d = data.resized();
    let kmax = d.kmax();
    let out = 2 * kmax;
    let t = d.t;
    let chem = first_order_chem(&d.h_init, &d.b_init, &d.h, &d.b, t, p);
    let sources = q0_z0(&d.h, &d.b, t, p);
    let w1 = FnSource::new(out, |y: f64| {
        let s1 = chem.s1(y);
        let b1 = chem.b1(y);
        chem.s1_laplacian(y) * p.theta - (s1 - b1 * p.tau) * p.rho + sources.q0(y)
            - sources.z0(y) * p.theta
    });
    let traces = laplace_young(&d.h1, &d.b1, p.eta);
    let p1 = poisson_boundary_derivatives(&w1, &traces);

    let p0 = pressure_p0(&d.h, &d.b, t, p);
    let z0 = zeroth_profiles(t, p);
    let s1_d2 = chem.s1_d2_boundary();
    let gap = &d.h - &d.b;
    let interface = |f: &SpectralField, y: f64, s0_d2: f64, p1_d2: &SpectralField, s1: &SpectralField| {
        let p0_d2 = p0.eval(y, 1, 0) - SpectralField::cosine(0, 0, p.theta * s0_d2);
        let mut v = -p1_d2.resized(out);
        v += &(s1 * p.theta);
        v += &f.derivative().convolve(&p0.eval(y, 0, 1));
        v += &gap.convolve(&p0_d2);
        v.resized(out)
    };
    BoundaryPair::new(
        interface(&d.h, 0.0, z0.s0_d2_top(), &p1.top, &s1_d2.top),
        interface(&d.b, -1.0, z0.s0_d2_bot(), &p1.bot, &s1_d2.bot),
    )
}

pub fn verify_order1_boundary(data: &Order1Data, p: &ModelParams) -> BoundaryDeviation {
    order1_deviation(data, p, J1Form::Configured, ProfileForm::Series)
}

pub fn order1_deviation(data: &Order1Data, p: &ModelParams, j1: J1Form, profile: ProfileForm) -> BoundaryDeviation {
    let a = order1_route_a(data, p, j1, profile);
    let b = order1_route_b(data, p);
    BoundaryDeviation::between(&a, &b)
}
