//! Lawson (integrating-factor) RK4 and run orchestration.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{energies, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::model::{linear_block, ForcingMode, ModelParams, SimState, System};
use crate::spectral::SpectralField;

/// Exact propagator of the stiff block over a fixed interval, per `|k|`.
#[derive(Clone, Debug)]
struct Propagator {
    /// `(e^{λ₊τ}, e^{λ₋τ})`
    factors: Vec<(f64, f64)>,
}

impl Propagator {
    fn new(p: &ModelParams, tau: f64) -> Self {
        let factors = (0..=p.kmax as i64)
            .map(|k| {
                let b = linear_block(k, p);
                ((b.lambda_plus * tau).exp(), (b.lambda_minus * tau).exp())
            })
            .collect();
        Self { factors }
    }

    /// Propagates `(u, v)` through the diagonal variables `W± = u ± v`.
    fn apply(&self, u: &SpectralField, v: &SpectralField) -> (SpectralField, SpectralField) {
        let kmax = u.kmax();
        let mut out_u = SpectralField::zeros(kmax);
        let mut out_v = SpectralField::zeros(kmax);
        for k in -(kmax as i64)..=kmax as i64 {
            let (ep, em) = self.factors[k.unsigned_abs() as usize];
            let (a, b) = (u.coeff(k), v.coeff(k));
            let w_plus = (a + b) * ep;
            let w_minus = (a - b) * em;
            out_u.set_mode(k, (w_plus + w_minus) * 0.5);
            out_v.set_mode(k, (w_plus - w_minus) * 0.5);
        }
        (out_u, out_v)
    }
}

/// One fixed step size with its cached propagators.
#[derive(Clone, Debug)]
pub struct Stepper<'a> {
    system: &'a System,
    dt: f64,
    full: Propagator,
    half: Propagator,
}

impl<'a> Stepper<'a> {
    pub fn new(system: &'a System, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
        }
        Ok(Self {
            system,
            dt,
            full: Propagator::new(&system.params, dt),
            half: Propagator::new(&system.params, dt / 2.0),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `state` by `dt`; the returned time is `state.t + dt`.
    pub fn step(&self, state: &SimState) -> Result<SimState> {
        let h = self.dt;
        let t = state.t;
        let sys = self.system;
        let (u, v) = (&state.u, &state.v);
        let at = |t: f64, u: SpectralField, v: SpectralField| SimState::new(u, v, t);

        let (k1u, k1v) = sys.rhs_order_eps(state)?;

        let (su, sv) = self.half.apply(&(u + &(&k1u * (h / 2.0))), &(v + &(&k1v * (h / 2.0))));
        let (k2u, k2v) = sys.rhs_order_eps(&at(t + h / 2.0, su, sv))?;

        let (eu, ev) = self.half.apply(u, v);
        let s3 = at(t + h / 2.0, &eu + &(&k2u * (h / 2.0)), &ev + &(&k2v * (h / 2.0)));
        let (k3u, k3v) = sys.rhs_order_eps(&s3)?;

        let (fu, fv) = self.full.apply(u, v);
        let (pk3u, pk3v) = self.half.apply(&k3u, &k3v);
        let s4 = at(t + h, &fu + &(&pk3u * h), &fv + &(&pk3v * h));
        let (k4u, k4v) = sys.rhs_order_eps(&s4)?;

        let (pk1u, pk1v) = self.full.apply(&k1u, &k1v);
        let (pk23u, pk23v) = self.half.apply(&(&k2u + &k3u), &(&k2v + &k3v));
        let inc_u = pk1u + pk23u * 2.0 + k4u;
        let inc_v = pk1v + pk23v * 2.0 + k4v;
        Ok(SimState::new(fu + inc_u * (h / 6.0), fv + inc_v * (h / 6.0), t + h))
    }
}

/// Single Lawson RK4 step of size `dt`.
pub fn step(system: &System, state: &SimState, dt: f64) -> Result<SimState> {
    Stepper::new(system, dt)?.step(state)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    HorizonReached,
    Collision,
    EnergyBlowup,
    Nan,
}

impl Termination {
    pub fn exit_code(self) -> i32 {
        match self {
            Termination::HorizonReached => 0,
            Termination::Collision => 2,
            Termination::EnergyBlowup => 3,
            Termination::Nan => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Termination::HorizonReached => "horizon_reached",
            Termination::Collision => "collision",
            Termination::EnergyBlowup => "energy_blowup",
            Termination::Nan => "nan",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: ModelParams,
    pub u0: SpectralField,
    pub v0: SpectralField,
    /// Clock value of the initial state.
    pub t_start: f64,
    pub dt: f64,
    /// Absolute horizon.
    pub t_end: f64,
    pub output_every: usize,
    pub forcing_mode: ForcingMode,
    pub project_zero_mean: bool,
    pub collision_threshold: f64,
    pub energy_blowup_threshold: f64,
}

impl RunConfig {
    pub fn new(params: ModelParams, u0: SpectralField, v0: SpectralField) -> Self {
        Self {
            params,
            u0,
            v0,
            t_start: 0.0,
            dt: 1e-3,
            t_end: 1.0,
            output_every: 10,
            forcing_mode: ForcingMode::Full,
            project_zero_mean: false,
            collision_threshold: 0.0,
            energy_blowup_threshold: 1e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams("dt must be positive and finite".into()));
        }
        if !(self.t_start >= 0.0 && self.t_start.is_finite()) {
            return Err(Error::InvalidParams("t_start must be nonnegative and finite".into()));
        }
        if !(self.t_end >= self.t_start && self.t_end.is_finite()) {
            return Err(Error::InvalidParams("t_end must be finite and not before t_start".into()));
        }
        if self.output_every == 0 {
            return Err(Error::InvalidParams("output_every must be >= 1".into()));
        }
        if !self.collision_threshold.is_finite() || !self.energy_blowup_threshold.is_finite() {
            return Err(Error::InvalidParams("thresholds must be finite".into()));
        }
        for (name, f) in [("U", &self.u0), ("V", &self.v0)] {
            if !f.is_finite() {
                return Err(Error::InvalidParams(format!("initial {name} is not finite")));
            }
            f.check_hermitian()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Diagnostics at `t = 0`, every `output_every` steps and at the end.
    pub records: Vec<DiagnosticsRecord>,
    /// States matching `records` one to one.
    pub states: Vec<SimState>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn final_state(&self) -> &SimState {
        self.states.last().expect("trajectory always holds the initial state")
    }

    pub fn final_record(&self) -> &DiagnosticsRecord {
        self.records.last().expect("trajectory always holds the initial record")
    }
}

fn classify(record: &DiagnosticsRecord, state: &SimState, cfg: &RunConfig) -> Option<Termination> {
    if !state.is_finite() || record.values().iter().any(|v| !v.is_finite()) {
        Some(Termination::Nan)
    } else if record.min_thickness <= cfg.collision_threshold {
        Some(Termination::Collision)
    } else if record.energy() > cfg.energy_blowup_threshold {
        Some(Termination::EnergyBlowup)
    } else {
        None
    }
}

pub fn run(cfg: &RunConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let system = System::new(cfg.params.clone(), &cfg.u0, &cfg.v0, cfg.forcing_mode)?;
    let kmax = cfg.params.kmax;
    let mut state = SimState::new(cfg.u0.resized(kmax), cfg.v0.resized(kmax), cfg.t_start);
    let grid = &system.grid;

    let first = energies(&state, &system.params, grid)?;
    let mut records = vec![first];
    let mut states = vec![state.clone()];
    if let Some(cause) = classify(&first, &state, cfg) {
        return Ok(Trajectory {
            records,
            states,
            termination: cause,
        });
    }

    let span = cfg.t_end - cfg.t_start;
    let steps = (span / cfg.dt - 1e-9).ceil().max(0.0) as usize;
    let stepper = Stepper::new(&system, cfg.dt)?;
    let mut termination = Termination::HorizonReached;
    for n in 1..=steps {
        let t_target = if n == steps {
            cfg.t_end
        } else {
            cfg.t_start + n as f64 * cfg.dt
        };
        let h = t_target - state.t;
        let advanced = if (h - cfg.dt).abs() <= 1e-12 * cfg.dt {
            stepper.step(&state)
        } else {
            Stepper::new(&system, h)?.step(&state)
        };
        let mut next = match advanced {
            Ok(next) => next,
            // an overflowing stage surfaces as a rejected transform input
            Err(Error::NonFinite(_)) => {
                let nan = SpectralField::from_fn(kmax, |_| num_complex::Complex64::new(f64::NAN, 0.0));
                SimState::new(nan.clone(), nan, t_target)
            }
            Err(e) => return Err(e),
        };
        next.t = t_target;
        if cfg.project_zero_mean {
            next.u = next.u.with_zero_mean();
            next.v = next.v.with_zero_mean();
        }
        state = next;

        let last = n == steps;
        let record = energies(&state, &system.params, grid)?;
        let cause = classify(&record, &state, cfg);
        if n % cfg.output_every == 0 || last || cause.is_some() {
            records.push(record);
            states.push(state.clone());
        }
        if let Some(cause) = cause {
            termination = cause;
            break;
        }
    }
    Ok(Trajectory {
        records,
        states,
        termination,
    })
}
