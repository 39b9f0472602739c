//! Parameters, forcings and right-hand side of the coupled interface system
//!
//! ```text
//! ∂t U = -η[Θ₁Λ²U + Θ₂Λ²V] + εη[Θ₁(U Θ₁Λ²U) + Θ₁(U Θ₂Λ²V) + (U ∂ₓΛ²U)ₓ
//!                              - Θ₂(V Θ₂Λ²U) - Θ₂(V Θ₁Λ²V)]
//!        - ε c(t)(Θ₁U + Θ₂V) + K⁰(t) + ε K¹(t)
//! ∂t V = -η[Θ₂Λ²U + Θ₁Λ²V] + εη[Θ₂(U Θ₁Λ²U) + Θ₂(U Θ₂Λ²V) - Θ₁(V Θ₂Λ²U)
//!                              - Θ₁(V Θ₁Λ²V) - (V ∂ₓΛ²V)ₓ]
//!        - ε c(t)(Θ₂U + Θ₁V) - K⁰(t) + ε J¹(t)
//! ```
//!
//! with `c(t) = (θβ₁(t) + ρβ₂(t)/12) e^{-Nt}`. The `O(1)` linear part is kept
//! out of [`System::rhs_order_eps`]; the time stepper integrates it exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{theta_symbols, Grid, SpectralField, Symbol};

/// Dimensionless parameter group plus discretization sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Aspect ratio width/length.
    pub epsilon: f64,
    /// Surface tension group.
    pub eta: f64,
    /// Chemotaxis group.
    pub theta: f64,
    /// Proliferation group.
    pub rho: f64,
    /// Inhibitor weight.
    pub tau: f64,
    /// Common decay rate of nutrient and inhibitor.
    #[serde(rename = "N")]
    pub big_n: f64,
    #[serde(rename = "c_B")]
    pub c_b: f64,
    #[serde(rename = "c_S")]
    pub c_s: f64,
    /// Spectral truncation `K`.
    #[serde(rename = "K")]
    pub kmax: usize,
    /// Physical grid size `M`.
    #[serde(rename = "M")]
    pub m: usize,
    /// Read the `cth` of the printed J¹ ĥ⁰-bracket as `ch`.
    #[serde(default)]
    pub j1_cosh_variant: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            eta: 1.0,
            theta: 1.0,
            rho: 1.0,
            tau: 1.0,
            big_n: 1.0,
            c_b: 0.5,
            c_s: 1.0,
            kmax: 128,
            m: 512,
            j1_cosh_variant: false,
        }
    }
}

impl ModelParams {
    /// Same physics at truncation `K` with the default grid `M = 4K`.
    pub fn with_truncation(&self, kmax: usize) -> Self {
        Self {
            kmax,
            m: 4 * kmax,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("epsilon", self.epsilon),
            ("eta", self.eta),
            ("theta", self.theta),
            ("rho", self.rho),
            ("tau", self.tau),
            ("N", self.big_n),
            ("c_B", self.c_b),
            ("c_S", self.c_s),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} must be finite")));
        }
        if self.epsilon < 0.0 {
            return Err(Error::InvalidParams("epsilon must be >= 0".into()));
        }
        if self.eta < 0.0 {
            return Err(Error::InvalidParams("eta must be >= 0".into()));
        }
        if self.big_n < 0.0 {
            return Err(Error::InvalidParams("N must be >= 0".into()));
        }
        if self.kmax < 1 {
            return Err(Error::InvalidParams("K must be >= 1".into()));
        }
        if self.m < 3 * self.kmax + 3 {
            return Err(Error::InvalidParams(format!(
                "M = {} must be at least 3K+3 = {}",
                self.m,
                3 * self.kmax + 3
            )));
        }
        Ok(())
    }

    pub fn decay(&self, t: f64) -> f64 {
        (-self.big_n * t).exp()
    }

    /// `(θβ₁(t) + ρβ₂(t)/12) e^{-Nt}`, the coefficient of the order-ε linear term.
    pub fn chemical_rate(&self, t: f64) -> f64 {
        (self.theta * beta1(t, self) + self.rho * beta2(t, self) / 12.0) * self.decay(t)
    }
}

/// `β₁(t) = c_S - N c_B t`.
pub fn beta1(t: f64, p: &ModelParams) -> f64 {
    p.c_s - p.big_n * p.c_b * t
}

/// `β₂(t) = β₁(t) - τ c_B`.
pub fn beta2(t: f64, p: &ModelParams) -> f64 {
    beta1(t, p) - p.tau * p.c_b
}

/// Spatially constant order-0 forcing `(ρ/12) β₂(t) e^{-Nt}`.
pub fn forcing_k0(t: f64, p: &ModelParams) -> f64 {
    p.rho / 12.0 * beta2(t, p) * p.decay(t)
}

/// Closed form of `∫₀ᵗ K⁰(s) ds`.
pub fn forcing_k0_integral(t: f64, p: &ModelParams) -> f64 {
    let a = p.c_s - p.tau * p.c_b;
    let b = p.big_n * p.c_b;
    let n = p.big_n;
    let integral = if n == 0.0 {
        a * t
    } else {
        let e = (-n * t).exp();
        a * (1.0 - e) / n - b * (1.0 - e * (1.0 + n * t)) / (n * n)
    };
    p.rho / 12.0 * integral
}

/// The per-mode 2×2 stiff block and its eigen-decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearBlock {
    pub matrix: [[f64; 2]; 2],
    /// Eigenvalue for the symmetric direction `(1, 1)/√2`.
    pub lambda_plus: f64,
    /// Eigenvalue for the antisymmetric direction `(1, -1)/√2`.
    pub lambda_minus: f64,
}

impl LinearBlock {
    pub const EIGVEC_PLUS: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
    pub const EIGVEC_MINUS: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2];
}

/// `L(k) = -η|k|³ [[coth|k|, 1/sinh|k|], [1/sinh|k|, coth|k|]]`.
pub fn linear_block(k: i64, p: &ModelParams) -> LinearBlock {
    if k == 0 {
        return LinearBlock {
            matrix: [[0.0; 2]; 2],
            lambda_plus: 0.0,
            lambda_minus: 0.0,
        };
    }
    let a = k.unsigned_abs() as f64;
    let (t1, t2) = theta_symbols(k);
    let diag = -p.eta * a * a * t1;
    let off = -p.eta * a * a * t2;
    let half_tanh = (a / 2.0).tanh();
    LinearBlock {
        matrix: [[diag, off], [off, diag]],
        lambda_plus: -p.eta * a.powi(3) / half_tanh,
        lambda_minus: -p.eta * a.powi(3) * half_tanh,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingMode {
    /// K⁰, K¹ and J¹ as derived.
    #[default]
    Full,
    /// K⁰ = K¹ = J¹ = 0.
    Simplified,
}

/// Data-multiplying coefficients of one forcing at one `|k|`, split by the
/// parameter that multiplies them.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ForcingMultipliers {
    pub theta_u: f64,
    pub rho_u: f64,
    pub theta_v: f64,
    pub rho_v: f64,
}

/// `(cosh|k| - 1) / (|k| sinh|k|)`, with value `1/2` at `k = 0`.
pub fn profile_coefficient(k: i64) -> f64 {
    if k == 0 {
        return 0.5;
    }
    let a = k.unsigned_abs() as f64;
    (a / 2.0).tanh() / a
}

/// Multipliers of the K¹ display: the bracket multiplying `Û(k,0)` and the
/// bracket multiplying `V̂(k,0)` (which enters with a leading minus).
pub fn k1_multipliers(k: i64) -> ForcingMultipliers {
    if k == 0 {
        return ForcingMultipliers::default();
    }
    let a = k.unsigned_abs() as f64;
    let (t1, t2) = theta_symbols(k);
    let coth = t1 / a;
    let csch = t2 / a;
    // 4(cosh-1)/(|k|³ sinh) = 4 tanh(|k|/2)/|k|³
    let four_term = 4.0 * (a / 2.0).tanh() / a.powi(3);
    ForcingMultipliers {
        theta_u: t1,
        rho_u: (a * coth - 3.0) / (a * a) + four_term,
        theta_v: -t2,
        rho_v: -1.0 / (a * a) - csch / a + four_term,
    }
}

/// Multipliers of the J¹ display; both brackets enter with a leading minus.
///
/// `cosh_variant` replaces the `4(coth|k|-1)` of the printed `Û(k,0)` bracket
/// by `4(cosh|k|-1)`, the form used by K¹.
pub fn j1_multipliers(k: i64, cosh_variant: bool) -> ForcingMultipliers {
    if k == 0 {
        return ForcingMultipliers::default();
    }
    let a = k.unsigned_abs() as f64;
    let (t1, t2) = theta_symbols(k);
    let coth = t1 / a;
    let csch = t2 / a;
    let four_term = if cosh_variant {
        4.0 * (a / 2.0).tanh() / a.powi(3)
    } else {
        4.0 * (coth - 1.0) * csch / a.powi(3)
    };
    ForcingMultipliers {
        theta_u: -t2,
        rho_u: four_term - 1.0 / (a * a) - csch / a,
        theta_v: -t1,
        // (4 - cosh)/(|k|³ sinh) = 4 csch/|k|³ - coth/|k|³
        rho_v: 4.0 * csch / a.powi(3) - coth / a.powi(3) + 3.0 / (a * a) - coth / a,
    }
}

/// Frozen initial spectra and precomputed per-mode forcing multipliers.
#[derive(Clone, Debug)]
pub struct ForcingCache {
    pub mode: ForcingMode,
    pub u0: SpectralField,
    pub v0: SpectralField,
    /// Indexed by `|k|` for `0..=K`.
    pub k1: Vec<ForcingMultipliers>,
    pub j1: Vec<ForcingMultipliers>,
    pub profile: Vec<f64>,
}

impl ForcingCache {
    pub fn new(u0: &SpectralField, v0: &SpectralField, mode: ForcingMode, p: &ModelParams) -> Self {
        let kmax = u0.kmax().max(v0.kmax());
        let range = 0..=kmax as i64;
        Self {
            mode,
            u0: u0.resized(kmax),
            v0: v0.resized(kmax),
            k1: range.clone().map(k1_multipliers).collect(),
            j1: range
                .clone()
                .map(|k| j1_multipliers(k, p.j1_cosh_variant))
                .collect(),
            profile: range.map(profile_coefficient).collect(),
        }
    }

    pub fn kmax(&self) -> usize {
        self.u0.kmax()
    }

    fn assemble(&self, t: f64, p: &ModelParams, table: &[ForcingMultipliers], profile_sign: f64, sign_u: f64) -> SpectralField {
        let kmax = self.kmax();
        if self.mode == ForcingMode::Simplified {
            return SpectralField::zeros(kmax);
        }
        let decay = p.decay(t);
        let tb1 = p.theta * beta1(t, p);
        let rb2 = p.rho * beta2(t, p);
        let profile_amp = profile_sign * 2.0 * rb2 * decay * t;
        SpectralField::from_fn(kmax, |k| {
            let i = k.unsigned_abs() as usize;
            let m = table[i];
            let cu = decay * (tb1 * m.theta_u + rb2 * m.rho_u);
            let cv = decay * (tb1 * m.theta_v + rb2 * m.rho_v);
            sign_u * cu * self.u0.coeff(k) - cv * self.v0.coeff(k)
                + Complex64::new(profile_amp * self.profile[i], 0.0)
        })
    }
}

/// Order-ε forcing of the upper interface.
pub fn forcing_k1(t: f64, cache: &ForcingCache, p: &ModelParams) -> SpectralField {
    cache.assemble(t, p, &cache.k1, -1.0, 1.0)
}

/// Order-ε forcing of the lower interface.
pub fn forcing_j1(t: f64, cache: &ForcingCache, p: &ModelParams) -> SpectralField {
    cache.assemble(t, p, &cache.j1, 1.0, -1.0)
}

/// Upper (`u`) and lower (`v`) interface perturbations at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub u: SpectralField,
    pub v: SpectralField,
    pub t: f64,
}

impl SimState {
    pub fn new(u: SpectralField, v: SpectralField, t: f64) -> Self {
        Self { u, v, t }
    }

    pub fn zeros(kmax: usize) -> Self {
        Self::new(SpectralField::zeros(kmax), SpectralField::zeros(kmax), 0.0)
    }

    /// `(U, V) ↦ (-V, -U)`, the top/bottom reflection of the strip.
    pub fn mirrored(&self) -> Self {
        Self::new(-&self.v, -&self.u, self.t)
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

/// Parameters, grid and forcing cache of one run.
#[derive(Clone, Debug)]
pub struct System {
    pub params: ModelParams,
    pub grid: Grid,
    pub cache: ForcingCache,
}

impl System {
    pub fn new(params: ModelParams, u0: &SpectralField, v0: &SpectralField, mode: ForcingMode) -> Result<Self> {
        params.validate()?;
        let u0 = u0.resized(params.kmax);
        let v0 = v0.resized(params.kmax);
        let cache = ForcingCache::new(&u0, &v0, mode, &params);
        Ok(Self {
            grid: Grid::new(params.m),
            cache,
            params,
        })
    }

    pub fn kmax(&self) -> usize {
        self.params.kmax
    }

    /// Every ε-prefixed term plus the forcings; excludes the stiff linear block.
    pub fn rhs_order_eps(&self, state: &SimState) -> Result<(SpectralField, SpectralField)> {
        let p = &self.params;
        let kmax = p.kmax;
        let (u, v) = (&state.u, &state.v);
        if u.kmax() != kmax || v.kmax() != kmax {
            return Err(Error::TruncationMismatch {
                left: u.kmax().max(v.kmax()),
                right: kmax,
            });
        }
        let mut du = SpectralField::zeros(kmax);
        let mut dv = SpectralField::zeros(kmax);

        if p.epsilon != 0.0 && p.eta != 0.0 {
            let lap_u = u.apply(Symbol::LAMBDA_SQ);
            let lap_v = v.apply(Symbol::LAMBDA_SQ);
            // U·(Θ₁Λ²U + Θ₂Λ²V) and V·(Θ₂Λ²U + Θ₁Λ²V) carry all four Θ-products.
            let upper = &lap_u.apply(Symbol::THETA1) + &lap_v.apply(Symbol::THETA2);
            let lower = &lap_u.apply(Symbol::THETA2) + &lap_v.apply(Symbol::THETA1);

            let g = &self.grid;
            let u_x = g.synthesize(u)?;
            let v_x = g.synthesize(v)?;
            let q_u = g.project_product(&u_x, &g.synthesize(&upper)?, kmax)?;
            let q_v = g.project_product(&v_x, &g.synthesize(&lower)?, kmax)?;
            let r_u = g.project_product(&u_x, &g.synthesize(&lap_u.derivative())?, kmax)?;
            let r_v = g.project_product(&v_x, &g.synthesize(&lap_v.derivative())?, kmax)?;

            let scale = p.epsilon * p.eta;
            du = (q_u.apply(Symbol::THETA1) + r_u.derivative() - q_v.apply(Symbol::THETA2)) * scale;
            dv = (q_u.apply(Symbol::THETA2) - q_v.apply(Symbol::THETA1) - r_v.derivative()) * scale;
        }

        let t = state.t;
        let rate = p.epsilon * p.chemical_rate(t);
        if rate != 0.0 {
            let t1u = u.apply(Symbol::THETA1);
            let t2u = u.apply(Symbol::THETA2);
            let t1v = v.apply(Symbol::THETA1);
            let t2v = v.apply(Symbol::THETA2);
            du -= &((t1u + t2v) * rate);
            dv -= &((t2u + t1v) * rate);
        }

        if self.cache.mode == ForcingMode::Full {
            let k0 = forcing_k0(t, p);
            let mean = SpectralField::cosine(kmax, 0, k0);
            du += &mean;
            dv -= &mean;
            if p.epsilon != 0.0 {
                du += &(forcing_k1(t, &self.cache, p) * p.epsilon);
                dv += &(forcing_j1(t, &self.cache, p) * p.epsilon);
            }
        }
        debug_assert!(du.hermitian_defect() <= 1e-12 * du.wiener_norm(0).max(1e-300));
        debug_assert!(dv.hermitian_defect() <= 1e-12 * dv.wiener_norm(0).max(1e-300));
        Ok((du, dv))
    }

    /// The stiff block `-η[Θ₁Λ²U + Θ₂Λ²V, Θ₂Λ²U + Θ₁Λ²V]`.
    pub fn linear_part(&self, state: &SimState) -> (SpectralField, SpectralField) {
        let eta = self.params.eta;
        let t1 = Symbol::THETA1.then(Symbol::LAMBDA_SQ).scaled(-eta);
        let t2 = Symbol::THETA2.then(Symbol::LAMBDA_SQ).scaled(-eta);
        (
            state.u.apply(t1) + state.v.apply(t2),
            state.u.apply(t2) + state.v.apply(t1),
        )
    }

    /// Full time derivative `(∂t U, ∂t V)`.
    pub fn full_rhs(&self, state: &SimState) -> Result<(SpectralField, SpectralField)> {
        let (du, dv) = self.rhs_order_eps(state)?;
        let (lu, lv) = self.linear_part(state);
        Ok((du + lu, dv + lv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::default().with_truncation(8)
    }

    #[test]
    fn betas() {
        let mut p = params();
        assert_eq!(beta1(0.0, &p), p.c_s);
        p.c_s = 2.0;
        p.big_n = 1.0;
        p.c_b = 1.0;
        assert_eq!(beta1(2.0, &p), 0.0);
        p.tau = 1.0;
        assert_eq!(beta2(0.0, &p), 1.0);
        p.tau = 0.0;
        assert_eq!(beta2(0.7, &p), beta1(0.7, &p));
        p.big_n = 0.0;
        assert_eq!(beta1(123.0, &p), 2.0);
        let q = ModelParams {
            c_s: 1.0,
            big_n: 1.0,
            c_b: 1.0,
            tau: 1.0,
            ..params()
        };
        assert_eq!(beta2(0.0, &q), 0.0);
    }

    #[test]
    fn k0_values() {
        let mut p = params();
        p.rho = 0.0;
        assert_eq!(forcing_k0(0.3, &p), 0.0);
        p.rho = 12.0;
        p.c_s = 2.0;
        p.tau = 1.0;
        p.c_b = 1.0;
        p.big_n = 3.7;
        assert!((forcing_k0(0.0, &p) - 1.0).abs() < 1e-15);
        assert!(forcing_k0(60.0, &p).abs() < 1e-80);
    }

    #[test]
    fn k0_integral_matches_quadrature() {
        for big_n in [0.0, 0.4, 2.0] {
            let p = ModelParams {
                big_n,
                rho: 3.0,
                c_s: 1.3,
                c_b: 0.7,
                tau: 0.4,
                ..params()
            };
            let t = 1.7;
            let n = 20_000;
            let h = t / n as f64;
            // composite Simpson
            let mut s = forcing_k0(0.0, &p) + forcing_k0(t, &p);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * forcing_k0(i as f64 * h, &p);
            }
            let simpson = s * h / 3.0;
            assert!((simpson - forcing_k0_integral(t, &p)).abs() < 1e-12, "N={big_n}");
        }
    }

    #[test]
    fn linear_block_values() {
        let p = ModelParams { eta: 1.0, ..params() };
        let zero = linear_block(0, &p);
        assert_eq!(zero.matrix, [[0.0; 2]; 2]);
        assert_eq!((zero.lambda_plus, zero.lambda_minus), (0.0, 0.0));

        let b = linear_block(1, &p);
        assert!((b.lambda_plus + 2.1639534137).abs() < 1e-10);
        assert!((b.lambda_minus + 0.4621171573).abs() < 1e-10);
        // eigenvalues of [[a, b], [b, a]] are a ± b
        let [[a, off], _] = b.matrix;
        assert!((a + off - b.lambda_plus).abs() < 1e-14);
        assert!((a - off - b.lambda_minus).abs() < 1e-14);
        for k in -40..=40 {
            let b = linear_block(k, &p);
            assert!(b.lambda_plus <= 0.0 && b.lambda_minus <= 0.0);
            assert!(b.lambda_plus <= b.lambda_minus);
        }
    }

    #[test]
    fn profile_limits() {
        assert_eq!(profile_coefficient(0), 0.5);
        assert!((profile_coefficient(1e-0 as i64) - (1f64.cosh() - 1.0) / 1f64.sinh()).abs() < 1e-15);
        assert_eq!(k1_multipliers(0), ForcingMultipliers::default());
        assert_eq!(j1_multipliers(0, true), ForcingMultipliers::default());
    }

    #[test]
    fn forcing_multipliers_match_printed_hyperbolic_forms() {
        for k in 1..=12i64 {
            let a = k as f64;
            let (sh, ch) = (a.sinh(), a.cosh());
            let cth = ch / sh;
            let m = k1_multipliers(k);
            assert!((m.theta_u - a * cth).abs() < 1e-12);
            assert!((m.rho_u - ((a * cth - 3.0) / (a * a) + 4.0 * (ch - 1.0) / (a.powi(3) * sh))).abs() < 1e-12);
            assert!((m.theta_v + a / sh).abs() < 1e-12);
            assert!((m.rho_v - (-(sh + a) / (a * a * sh) + 4.0 * (ch - 1.0) / (a.powi(3) * sh))).abs() < 1e-12);

            let j = j1_multipliers(k, false);
            assert!((j.rho_u - (4.0 * (cth - 1.0) / (a.powi(3) * sh) - 1.0 / (a * a) - 1.0 / (a * sh))).abs() < 1e-12);
            assert!((j.rho_v - ((4.0 - ch) / (a.powi(3) * sh) + 3.0 / (a * a) - cth / a)).abs() < 1e-12);
            let jc = j1_multipliers(k, true);
            assert!((jc.rho_u - (4.0 * (ch - 1.0) / (a.powi(3) * sh) - 1.0 / (a * a) - 1.0 / (a * sh))).abs() < 1e-12);
        }
    }

    fn forcing_setup(u0: SpectralField, v0: SpectralField, theta: f64, rho: f64, t_free: bool) -> (ForcingCache, ModelParams) {
        let p = ModelParams {
            theta,
            rho,
            big_n: if t_free { 0.0 } else { 1.0 },
            c_s: 1.0,
            c_b: if t_free { 0.0 } else { 0.5 },
            ..params()
        };
        (ForcingCache::new(&u0, &v0, ForcingMode::Full, &p), p)
    }

    #[test]
    fn k1_examples() {
        let z = SpectralField::zeros(8);
        let (cache, p) = forcing_setup(z.clone(), z.clone(), 1.0, 1.0, false);
        assert_eq!(forcing_k1(0.0, &cache, &p).wiener_norm(0), 0.0);
        assert_eq!(forcing_j1(0.0, &cache, &p).wiener_norm(0), 0.0);

        let data = SpectralField::cosine(8, 2, 0.3);
        let (cache, p) = forcing_setup(data.clone(), data, 0.0, 0.0, false);
        for t in [0.0, 0.5, 3.0] {
            assert_eq!(forcing_k1(t, &cache, &p).wiener_norm(0), 0.0);
            assert_eq!(forcing_j1(t, &cache, &p).wiener_norm(0), 0.0);
        }

        let cos1 = SpectralField::cosine(8, 1, 1.0);
        let (cache, p) = forcing_setup(cos1.clone(), z.clone(), 1.0, 0.0, true);
        let k1 = forcing_k1(1.0, &cache, &p);
        let coth1 = 1f64.cosh() / 1f64.sinh();
        assert!(k1.l1_distance(&(&cos1 * coth1)) < 1e-14);
        assert!((k1.coeff(1).re * 2.0 - 1.3130).abs() < 1e-4);

        let (cache, p) = forcing_setup(z, cos1.clone(), 1.0, 0.0, true);
        for t in [0.0, 2.5] {
            let j1 = forcing_j1(t, &cache, &p);
            assert!(j1.l1_distance(&(&cos1 * coth1)) < 1e-14);
        }
    }

    #[test]
    fn simplified_cache_is_inert() {
        let cos1 = SpectralField::cosine(8, 1, 1.0);
        let p = params();
        let cache = ForcingCache::new(&cos1, &cos1, ForcingMode::Simplified, &p);
        assert_eq!(forcing_k1(0.4, &cache, &p).wiener_norm(0), 0.0);
        assert_eq!(forcing_j1(0.4, &cache, &p).wiener_norm(0), 0.0);
    }

    #[test]
    fn profile_term_enters_with_opposite_signs() {
        let z = SpectralField::zeros(8);
        let (cache, p) = forcing_setup(z.clone(), z, 0.0, 1.0, false);
        let t = 0.8;
        let k1 = forcing_k1(t, &cache, &p);
        let j1 = forcing_j1(t, &cache, &p);
        assert!((&k1 + &j1).wiener_norm(0) < 1e-15);
        let amp = -2.0 * p.rho * p.decay(t) * beta2(t, &p) * t;
        assert!((k1.coeff(0).re - amp * 0.5).abs() < 1e-15);
    }

    fn system(mode: ForcingMode, epsilon: f64) -> System {
        let p = ModelParams {
            epsilon,
            eta: 1.0,
            theta: 0.0,
            rho: 0.0,
            ..params()
        };
        System::new(p, &SpectralField::zeros(8), &SpectralField::zeros(8), mode).unwrap()
    }

    #[test]
    fn zero_state_simplified_has_zero_rhs() {
        let sys = system(ForcingMode::Simplified, 0.1);
        let (du, dv) = sys.rhs_order_eps(&SimState::zeros(8)).unwrap();
        assert_eq!(du.wiener_norm(0) + dv.wiener_norm(0), 0.0);
    }

    #[test]
    fn single_cosine_hand_convolution() {
        // U = cos x: Θ₁Λ²U = coth(1) cos x and ∂ₓΛ²U = -sin x.
        let sys = system(ForcingMode::Simplified, 1.0);
        let u = SpectralField::cosine(8, 1, 1.0);
        let state = SimState::new(u, SpectralField::zeros(8), 0.0);
        let (du, dv) = sys.rhs_order_eps(&state).unwrap();
        let coth1 = 1f64.cosh() / 1f64.sinh();
        // cos·coth(1)cos = coth(1)(1 + cos 2x)/2 ; cos·(-sin) = -sin(2x)/2
        let (t1_0, t2_0) = theta_symbols(0);
        let (t1_2, t2_2) = theta_symbols(2);
        let mut want_u = SpectralField::zeros(8);
        want_u.set_mode(0, Complex64::new(t1_0 * coth1 / 2.0, 0.0));
        // Θ₁ on coth/2·cos2x -> coeff(2) = t1_2 * coth/4; ∂ₓ(-sin 2x / 2) = -cos 2x -> coeff(2) = -1/2
        want_u.set_mode(2, Complex64::new(t1_2 * coth1 / 4.0 - 0.5, 0.0));
        assert!(du.l1_distance(&want_u) < 1e-14, "{du:?}");
        let mut want_v = SpectralField::zeros(8);
        want_v.set_mode(0, Complex64::new(t2_0 * coth1 / 2.0, 0.0));
        want_v.set_mode(2, Complex64::new(t2_2 * coth1 / 4.0, 0.0));
        assert!(dv.l1_distance(&want_v) < 1e-14, "{dv:?}");
    }

    #[test]
    fn eps_zero_without_forcing_is_inert() {
        let p = ModelParams {
            epsilon: 0.0,
            ..params()
        };
        let u = SpectralField::cosine(8, 3, 0.4);
        let v = SpectralField::sine(8, 2, 0.1);
        let sys = System::new(p, &u, &v, ForcingMode::Simplified).unwrap();
        let (du, dv) = sys.rhs_order_eps(&SimState::new(u, v, 0.3)).unwrap();
        assert_eq!(du.wiener_norm(0) + dv.wiener_norm(0), 0.0);
    }

    #[test]
    fn k0_cancels_in_mean_sum() {
        let p = ModelParams {
            epsilon: 0.0,
            rho: 5.0,
            ..params()
        };
        let u = SpectralField::cosine(8, 1, 0.2);
        let sys = System::new(p, &u, &u, ForcingMode::Full).unwrap();
        let (du, dv) = sys.rhs_order_eps(&SimState::new(u.clone(), u, 0.2)).unwrap();
        assert!((du.coeff(0) + dv.coeff(0)).norm() < 1e-15);
        assert!((du.coeff(0).re - forcing_k0(0.2, &sys.params)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = params();
        p.m = 3 * p.kmax + 2;
        assert!(p.validate().is_err());
        let p = ModelParams { eta: -1.0, ..params() };
        assert!(p.validate().is_err());
        let p = ModelParams { epsilon: f64::NAN, ..params() };
        assert!(p.validate().is_err());
    }
}
