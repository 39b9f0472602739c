//! Fields on the reference strip `S¹ × [-1, 0]`, stored as one Fourier
//! spectrum per vertical node.

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Traces of a strip field: `top` at `x₂ = 0`, `bot` at `x₂ = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPair {
    pub top: SpectralField,
    pub bot: SpectralField,
}

impl BoundaryPair {
    pub fn new(top: SpectralField, bot: SpectralField) -> Self {
        Self { top, bot }
    }

    pub fn zeros(kmax: usize) -> Self {
        Self::new(SpectralField::zeros(kmax), SpectralField::zeros(kmax))
    }

    pub fn kmax(&self) -> usize {
        self.top.kmax().max(self.bot.kmax())
    }

    /// Larger of the two ℓ¹ coefficient distances.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.top.l1_distance(&other.top).max(self.bot.l1_distance(&other.bot))
    }
}

/// A source term `w(x₁, x₂)` that can be sampled at any height.
pub trait StripSource {
    fn kmax(&self) -> usize;
    fn at(&self, y: f64) -> SpectralField;
}

/// Adapts a closure `y ↦ ŵ(·, y)`.
pub struct FnSource<F> {
    kmax: usize,
    f: F,
}

impl<F: Fn(f64) -> SpectralField> FnSource<F> {
    pub fn new(kmax: usize, f: F) -> Self {
        Self { kmax, f }
    }
}

impl<F: Fn(f64) -> SpectralField> StripSource for FnSource<F> {
    fn kmax(&self) -> usize {
        self.kmax
    }

    fn at(&self, y: f64) -> SpectralField {
        (self.f)(y).resized(self.kmax)
    }
}

pub struct ZeroSource(pub usize);

impl StripSource for ZeroSource {
    fn kmax(&self) -> usize {
        self.0
    }

    fn at(&self, _y: f64) -> SpectralField {
        SpectralField::zeros(self.0)
    }
}

/// `P` equispaced heights from `-1` to `0` inclusive.
pub fn uniform_nodes(p: usize) -> Vec<f64> {
    assert!(p >= 2, "need at least the two endpoints");
    (0..p).map(|j| -1.0 + j as f64 / (p - 1) as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripField {
    nodes: Vec<f64>,
    slices: Vec<SpectralField>,
}

impl StripField {
    /// `nodes` ascend from `-1` to `0`.
    pub fn from_fn(nodes: &[f64], mut f: impl FnMut(f64) -> SpectralField) -> Self {
        let slices = nodes.iter().map(|&y| f(y)).collect();
        Self {
            nodes: nodes.to_vec(),
            slices,
        }
    }

    pub fn sample(source: &dyn StripSource, nodes: &[f64]) -> Self {
        Self::from_fn(nodes, |y| source.at(y))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn slices(&self) -> &[SpectralField] {
        &self.slices
    }

    pub fn kmax(&self) -> usize {
        self.slices.iter().map(SpectralField::kmax).max().unwrap_or(0)
    }

    pub fn top(&self) -> &SpectralField {
        self.slices.last().expect("strip field has nodes")
    }

    pub fn bottom(&self) -> &SpectralField {
        self.slices.first().expect("strip field has nodes")
    }

    pub fn is_finite(&self) -> bool {
        self.slices.iter().all(SpectralField::is_finite)
    }

    /// Largest pointwise difference on an `M`-point grid at every node.
    pub fn max_abs_difference(&self, other: &Self) -> Result<f64> {
        if self.nodes != other.nodes {
            return Err(Error::InvalidParams("strip fields live on different nodes".into()));
        }
        let kmax = self.kmax().max(other.kmax());
        let grid = Grid::new(4 * kmax + 4);
        let mut worst: f64 = 0.0;
        for (a, b) in self.slices.iter().zip(&other.slices) {
            let diff = grid.synthesize(&(a.resized(kmax) - b.resized(kmax)))?;
            worst = diff.iter().fold(worst, |m, v| m.max(v.abs()));
        }
        Ok(worst)
    }

    /// Adds `f(y)` to every slice.
    pub fn perturbed(&self, f: impl Fn(f64) -> SpectralField) -> Self {
        let slices = self
            .nodes
            .iter()
            .zip(&self.slices)
            .map(|(&y, s)| {
                let extra = f(y);
                let k = s.kmax().max(extra.kmax());
                s.resized(k) + extra.resized(k)
            })
            .collect();
        Self {
            nodes: self.nodes.clone(),
            slices,
        }
    }
}

fn uniform_spacing(nodes: &[f64]) -> Result<f64> {
    if nodes.len() < 6 {
        return Err(Error::InvalidParams("residual check needs at least 6 vertical nodes".into()));
    }
    let h = nodes[1] - nodes[0];
    let uniform = nodes
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.abs());
    if !uniform || h <= 0.0 {
        return Err(Error::InvalidParams("residual check needs ascending equispaced nodes".into()));
    }
    Ok(h)
}

/// Fourth-order `∂₂₂` at interior node `j` of a uniformly sampled column.
fn second_difference(column: &[SpectralField], j: usize, h: f64) -> SpectralField {
    let n = column.len();
    let weights: (&[f64], usize, bool) = if j == 1 {
        (&[10.0, -15.0, -4.0, 14.0, -6.0, 1.0], 0, false)
    } else if j == n - 2 {
        (&[10.0, -15.0, -4.0, 14.0, -6.0, 1.0], n - 1, true)
    } else {
        (&[-1.0, 16.0, -30.0, 16.0, -1.0], j - 2, false)
    };
    let (w, start, reversed) = weights;
    let kmax = column.iter().map(SpectralField::kmax).max().unwrap_or(0);
    let mut acc = SpectralField::zeros(kmax);
    for (i, &c) in w.iter().enumerate() {
        let idx = if reversed { start - i } else { start + i };
        acc += &(&column[idx].resized(kmax) * c);
    }
    acc * (1.0 / (12.0 * h * h))
}

/// `(max |Δu - w|` over interior nodes, `max` trace mismatch`)`, both measured
/// pointwise on the physical grid.
pub fn residual_check(u: &StripField, w: &dyn StripSource, g: &BoundaryPair) -> Result<(f64, f64)> {
    let h = uniform_spacing(u.nodes())?;
    let kmax = u.kmax().max(w.kmax()).max(g.kmax());
    let grid = Grid::new(4 * kmax + 4);
    let sup = |f: &SpectralField| -> Result<f64> {
        Ok(grid
            .synthesize(&f.resized(kmax))?
            .iter()
            .fold(0.0, |m: f64, v| m.max(v.abs())))
    };

    let mut interior: f64 = 0.0;
    let slices = u.slices();
    for j in 1..slices.len() - 1 {
        let horizontal = slices[j].map_modes(|k, c| c * -((k * k) as f64));
        let lap = second_difference(slices, j, h).resized(kmax) + horizontal.resized(kmax);
        let defect = lap - w.at(u.nodes()[j]).resized(kmax);
        interior = interior.max(sup(&defect)?);
    }
    let top = sup(&(u.top().resized(kmax) - g.top.resized(kmax)))?;
    let bot = sup(&(u.bottom().resized(kmax) - g.bot.resized(kmax)))?;
    Ok((interior, top.max(bot)))
}
