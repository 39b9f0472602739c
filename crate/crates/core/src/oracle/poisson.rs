//! Per-mode solutions of `Δu = w` on the strip with Dirichlet traces
//! `u(·, 0) = g₁`, `u(·, -1) = g₂`.

use num_complex::Complex64;

use super::quadrature::{composite, integrate};
use super::strip::{BoundaryPair, StripField, StripSource};
use crate::spectral::{theta_symbols, SpectralField};

/// `sinh(p) / sinh(r)` for `0 ≤ |p| ≤ r`, `r > 0`, without overflow.
fn sinh_ratio(p: f64, r: f64) -> f64 {
    let q = p.abs();
    p.signum() * (q - r).exp() * (-(-2.0 * q).exp_m1()) / (-(-2.0 * r).exp_m1())
}

/// `sinh(p) sinh(q) / sinh(r)` for `p, q ≥ 0`, `p + q ≤ r + O(1)`.
fn sinh_sinh_over_sinh(p: f64, q: f64, r: f64) -> f64 {
    (p + q - r).exp() * (-(-2.0 * p).exp_m1()) * (-(-2.0 * q).exp_m1()) / (2.0 * -(-2.0 * r).exp_m1())
}

/// Green's function of `∂₂₂ - a²` on `[-1, 0]` with zero traces.
fn green(a: f64, x: f64, y: f64) -> f64 {
    if a == 0.0 {
        return if y <= x { x * (1.0 + y) } else { y * (1.0 + x) };
    }
    if y <= x {
        -sinh_sinh_over_sinh(-a * x, a * (1.0 + y), a) / a
    } else {
        -sinh_sinh_over_sinh(a * (1.0 + x), -a * y, a) / a
    }
}

/// Harmonic part `Ĝ₁ + Ĝ₂` at height `x`.
fn harmonic(k: i64, x: f64, g1: Complex64, g2: Complex64) -> Complex64 {
    if k == 0 {
        return g1 * (1.0 + x) - g2 * x;
    }
    let a = k.unsigned_abs() as f64;
    // sinh(|k|x) / sinh|k|
    let ratio = sinh_ratio(a * x, a);
    g1 * ((a * x).exp() + (-a).exp() * ratio) - g2 * ratio
}

#[derive(Clone, Debug)]
pub struct PoissonSolution {
    pub field: StripField,
    /// `∂₂u` at `x₂ = 0` and `x₂ = -1`.
    pub d2: BoundaryPair,
}

/// Samples the solution of `Δu = w(x₁, x₂)` on `nodes`, together with its
/// normal derivatives on both boundaries.
pub fn solve_poisson_general(w: &dyn StripSource, g: &BoundaryPair, nodes: &[f64]) -> PoissonSolution {
    let kmax = w.kmax().max(g.kmax());
    let field = StripField::from_fn(nodes, |x| {
        let mut rule = composite(-1.0, x);
        rule.extend(composite(x, 0.0));
        let samples: Vec<(f64, f64, SpectralField)> =
            rule.into_iter().map(|(y, wt)| (y, wt, w.at(y))).collect();
        SpectralField::from_fn(kmax, |k| {
            let a = k.unsigned_abs() as f64;
            let mut acc = harmonic(k, x, g.top.coeff(k), g.bot.coeff(k));
            for (y, wt, s) in &samples {
                acc += s.coeff(k) * (wt * green(a, x, *y));
            }
            acc
        })
    });
    PoissonSolution {
        field,
        d2: poisson_boundary_derivatives(w, g),
    }
}

/// `(∂₂u(·, 0), ∂₂u(·, -1))` without sampling the interior.
pub fn poisson_boundary_derivatives(w: &dyn StripSource, g: &BoundaryPair) -> BoundaryPair {
    let kmax = w.kmax().max(g.kmax());
    let samples: Vec<(f64, f64, SpectralField)> = composite(-1.0, 0.0)
        .into_iter()
        .map(|(y, wt)| (y, wt, w.at(y)))
        .collect();
    let mut top = SpectralField::zeros(kmax);
    let mut bot = SpectralField::zeros(kmax);
    for k in 0..=kmax as i64 {
        let (g1, g2) = (g.top.coeff(k), g.bot.coeff(k));
        let (t1, t2) = theta_symbols(k);
        let mut dt = g1 * t1 - g2 * t2;
        let mut db = g1 * t2 - g2 * t1;
        let a = k as f64;
        for (y, wt, s) in &samples {
            let c = s.coeff(k) * *wt;
            if k == 0 {
                dt += c * (1.0 + y);
                db += c * *y;
            } else {
                dt += c * sinh_ratio(a * (1.0 + y), a);
                db += c * sinh_ratio(a * y, a);
            }
        }
        top.set_mode(k, dt);
        bot.set_mode(k, db);
    }
    BoundaryPair::new(top, bot)
}

/// Solution for an `x₁`-independent source `w(x₂)`, written through the
/// linear lift `L(x₂) = g₁ + x₂(g₁ - g₂)` of the boundary data.
pub fn solve_poisson_stratified(w: &dyn Fn(f64) -> f64, g: &BoundaryPair, nodes: &[f64]) -> StripField {
    let kmax = g.kmax();
    let mean_source = integrate(-1.0, 0.0, |y| (1.0 + y) * w(y));
    StripField::from_fn(nodes, |x| {
        SpectralField::from_fn(kmax, |k| {
            let (g1, g2) = (g.top.coeff(k), g.bot.coeff(k));
            let lift = |y: f64| g1 + (g1 - g2) * y;
            if k == 0 {
                // ∫₀ˣ (x - y) w dy = -∫ₓ⁰ (x - y) w dy
                let inner = integrate(x, 0.0, |y| (x - y) * w(y));
                return lift(x) + Complex64::new(x * mean_source - inner, 0.0);
            }
            let a = k.unsigned_abs() as f64;
            let whole = complex_integral(-1.0, 0.0, |y| lift(y) * (a * (1.0 + y)).sinh());
            let partial = complex_integral(x, 0.0, |y| lift(y) * (a * (x - y)).sinh());
            whole * ((a * x).sinh() / a.sinh() * a) - partial * a + lift(x)
        })
    })
}

fn complex_integral(a: f64, b: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    composite(a, b)
        .into_iter()
        .map(|(y, wt)| f(y) * wt)
        .sum()
}
