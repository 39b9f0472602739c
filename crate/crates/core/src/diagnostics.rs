//! Energies, dispersion tables and the commutator multiplier.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{linear_block, ModelParams, SimState};
use crate::spectral::Grid;

/// One row of the output time series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    pub min_thickness: f64,
    #[serde(rename = "max_abs_U")]
    pub max_abs_u: f64,
    #[serde(rename = "max_abs_V")]
    pub max_abs_v: f64,
    #[serde(rename = "mean_U")]
    pub mean_u: f64,
    #[serde(rename = "mean_V")]
    pub mean_v: f64,
}

impl DiagnosticsRecord {
    pub const CSV_HEADER: &'static str = "t,E0,E1,min_thickness,max_abs_U,max_abs_V,mean_U,mean_V";

    pub fn values(&self) -> [f64; 8] {
        [
            self.t,
            self.e0,
            self.e1,
            self.min_thickness,
            self.max_abs_u,
            self.max_abs_v,
            self.mean_u,
            self.mean_v,
        ]
    }

    pub fn energy(&self) -> f64 {
        self.e0 + self.e1
    }

    fn undefined(t: f64) -> Self {
        let nan = f64::NAN;
        Self {
            t,
            e0: nan,
            e1: nan,
            min_thickness: nan,
            max_abs_u: nan,
            max_abs_v: nan,
            mean_u: nan,
            mean_v: nan,
        }
    }
}

/// `min_j 1 + ε(U(x_j) - V(x_j))` over the physical grid.
pub fn min_thickness(state: &SimState, p: &ModelParams, grid: &Grid) -> Result<f64> {
    let gap = grid.synthesize(&(&state.u - &state.v))?;
    Ok(gap
        .iter()
        .map(|g| 1.0 + p.epsilon * g)
        .fold(f64::INFINITY, f64::min))
}

fn max_abs(samples: &[f64]) -> f64 {
    samples.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

pub fn energies(state: &SimState, p: &ModelParams, grid: &Grid) -> Result<DiagnosticsRecord> {
    if !state.is_finite() {
        return Ok(DiagnosticsRecord::undefined(state.t));
    }
    let u = grid.synthesize(&state.u)?;
    let v = grid.synthesize(&state.v)?;
    let min_thickness = u
        .iter()
        .zip(&v)
        .map(|(a, b)| 1.0 + p.epsilon * (a - b))
        .fold(f64::INFINITY, f64::min);
    Ok(DiagnosticsRecord {
        t: state.t,
        e0: state.u.wiener_norm(0) + state.v.wiener_norm(0),
        e1: state.u.wiener_norm(1) + state.v.wiener_norm(1),
        min_thickness,
        max_abs_u: max_abs(&u),
        max_abs_v: max_abs(&v),
        mean_u: state.u.mean(),
        mean_v: state.v.mean(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub k: i64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

pub fn dispersion_table(p: &ModelParams, kmax: usize) -> Vec<DispersionRow> {
    (0..=kmax as i64)
        .map(|k| {
            let block = linear_block(k, p);
            DispersionRow {
                k,
                lambda_plus: block.lambda_plus,
                lambda_minus: block.lambda_minus,
            }
        })
        .collect()
}

/// `|k||k-m|³ - k(k-m)³`.
pub fn commutator_multiplier(k: i64, m: i64) -> f64 {
    let k = k as i128;
    let d = k - m as i128;
    (k.abs() * d.abs().pow(3) - k * d.pow(3)) as f64
}

/// Checks the vanishing and `|k| ≤ |m|` properties for `|k|, |m| ≤ bound`;
/// returns the offending pairs.
pub fn commutator_failures(bound: i64) -> Vec<(i64, i64)> {
    let mut failures = Vec::new();
    for k in -bound..=bound {
        for m in -bound..=bound {
            let value = commutator_multiplier(k, m);
            let d = k - m;
            let same_sign = k == 0 || d == 0 || (k > 0) == (d > 0);
            if (same_sign && value != 0.0) || (value != 0.0 && k.abs() > m.abs()) {
                failures.push((k, m));
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralField;

    fn setup(kmax: usize) -> (ModelParams, Grid) {
        let p = ModelParams::default().with_truncation(kmax);
        let g = Grid::new(p.m);
        (p, g)
    }

    #[test]
    fn zero_state_record() {
        let (p, g) = setup(8);
        let r = energies(&SimState::zeros(8), &p, &g).unwrap();
        assert_eq!((r.e0, r.e1, r.min_thickness), (0.0, 0.0, 1.0));
    }

    #[test]
    fn single_mode_norms() {
        let (p, g) = setup(8);
        let s = SimState::new(SpectralField::sine(8, 1, 1.0), SpectralField::zeros(8), 0.0);
        let r = energies(&s, &p, &g).unwrap();
        assert!((r.e0 - 1.0).abs() < 1e-15 && (r.e1 - 1.0).abs() < 1e-15);
        assert!((r.max_abs_u - 1.0).abs() < 1e-12);

        let s = SimState::new(SpectralField::cosine(8, 2, 1.0), SpectralField::cosine(8, 3, 1.0), 0.0);
        let r = energies(&s, &p, &g).unwrap();
        assert!((r.e0 - 2.0).abs() < 1e-15);
        assert!((r.e1 - 5.0).abs() < 1e-15);
    }

    #[test]
    fn thickness_values() {
        let (mut p, g) = setup(8);
        p.epsilon = 0.1;
        let c = SpectralField::cosine(8, 1, 1.0);
        let s = SimState::new(c.clone(), -&c, 0.0);
        assert!((min_thickness(&s, &p, &g).unwrap() - 0.8).abs() < 1e-14);
        let s = SimState::new(SpectralField::cosine(8, 0, 3.0), SpectralField::cosine(8, 0, 1.0), 0.0);
        assert!((min_thickness(&s, &p, &g).unwrap() - 1.2).abs() < 1e-14);
    }

    #[test]
    fn dispersion_rows() {
        let p = ModelParams::default();
        let rows = dispersion_table(&p, 10);
        assert_eq!(rows.len(), 11);
        assert_eq!((rows[0].lambda_plus, rows[0].lambda_minus), (0.0, 0.0));
        assert!((rows[1].lambda_plus + 2.16395).abs() < 1e-5);
        assert!((rows[1].lambda_minus + 0.46212).abs() < 1e-5);
        let big = dispersion_table(&p, 40);
        let r = big[40];
        let k3 = 40f64.powi(3);
        assert!(-r.lambda_plus / k3 >= 1.0 && -r.lambda_plus / k3 - 1.0 < 1e-12);
        assert!(-r.lambda_minus / k3 <= 1.0 && 1.0 + r.lambda_minus / k3 < 1e-12);
        let flat = dispersion_table(&ModelParams { eta: 0.0, ..p }, 5);
        assert!(flat.iter().all(|r| r.lambda_plus == 0.0 && r.lambda_minus == 0.0));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator_multiplier(5, 2), 0.0);
        assert_eq!(commutator_multiplier(2, 5), 108.0);
        assert_eq!(commutator_multiplier(0, 17), 0.0);
        assert!(commutator_failures(64).is_empty());
    }
}
