//! The hidden-variable two-polarizer prediction
//! `M(α) = ∫_{−π/2}^{π/2} p1(λ) p1(α − λ) dλ` and its comparison with the
//! Malus law.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::model::{malus_raw, Angle, P1};
use crate::quadrature::{AccuracyWarning, PairedRule, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convolution {
    pub value: f64,
    pub warning: Option<AccuracyWarning>,
}

/// The convolution integrand on fixed quadrature nodes, with `p1(λ_j)`
/// evaluated once and reused for every `α`.
pub(crate) struct Convolver<'a> {
    p1: &'a P1,
    rule: PairedRule,
    left: Vec<f64>,
}

impl<'a> Convolver<'a> {
    pub(crate) fn new(p1: &'a P1, cfg: &QuadratureConfig) -> Result<Self> {
        let rule = PairedRule::new(-FRAC_PI_2, FRAC_PI_2, cfg)?;
        let left = rule.nodes.iter().map(|&l| p1.eval(l)).collect();
        Ok(Convolver { p1, rule, left })
    }

    pub(crate) fn at(&self, alpha: f64) -> Result<Convolution> {
        if !alpha.is_finite() {
            return Err(domain(format!("alpha {alpha} is not finite")));
        }
        let samples: Vec<f64> = self
            .rule
            .nodes
            .iter()
            .zip(&self.left)
            .map(|(&l, &pl)| pl * self.p1.eval(alpha - l))
            .collect();
        let r = self.rule.combine(&samples)?;
        Ok(Convolution {
            value: r.value,
            warning: r.warning,
        })
    }
}

/// Raw convolution integral at `alpha` (no normalization).
pub fn convolve_raw(p1: &P1, alpha: f64, cfg: &QuadratureConfig) -> Result<Convolution> {
    Convolver::new(p1, cfg)?.at(alpha)
}

/// `M(α)`, optionally divided by `M(0)` so that the curve passes through 1.
pub fn convolve_malus(
    p1: &P1,
    alpha: Angle,
    cfg: &QuadratureConfig,
    normalize: bool,
) -> Result<Convolution> {
    let conv = Convolver::new(p1, cfg)?;
    let raw = conv.at(alpha.radians())?;
    if !normalize {
        return Ok(raw);
    }
    normalized(raw, conv.at(0.0)?)
}

fn normalized(raw: Convolution, zero: Convolution) -> Result<Convolution> {
    if !(zero.value > 0.0) {
        return Err(domain(format!("cannot normalize: M(0) = {}", zero.value)));
    }
    Ok(Convolution {
        value: raw.value / zero.value,
        warning: raw.warning.or(zero.warning),
    })
}

/// A sampled angle → transmission function.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransmissionCurve {
    pub points: Vec<(Angle, f64)>,
    pub normalized: bool,
    /// Accuracy warnings raised while building the curve, in grid order.
    pub warnings: Vec<(Angle, AccuracyWarning)>,
}

impl TransmissionCurve {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Value at the grid point closest to `alpha`.
    pub fn value_near(&self, alpha: Angle) -> Option<f64> {
        self.points
            .iter()
            .min_by(|a, b| {
                (a.0.radians() - alpha.radians())
                    .abs()
                    .total_cmp(&(b.0.radians() - alpha.radians()).abs())
            })
            .map(|p| p.1)
    }
}

/// Evaluate `M(α)` over a sorted grid in `[−π/2, π/2]`.
///
/// Grid points are evaluated in parallel and assembled in grid order. When
/// normalizing, a grid point at exactly 0 maps to exactly 1.
pub fn curve(
    p1: &P1,
    grid: &[Angle],
    cfg: &QuadratureConfig,
    normalize: bool,
) -> Result<TransmissionCurve> {
    cfg.validate()?;
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("grid must be strictly increasing"));
    }
    if let (Some(first), Some(last)) = (grid.first(), grid.last()) {
        let limit = FRAC_PI_2 + 1e-12;
        if first.radians() < -limit || last.radians() > limit {
            return Err(domain("grid must lie within [-90°, 90°]"));
        }
    } else {
        return Ok(TransmissionCurve {
            normalized: normalize,
            ..Default::default()
        });
    }

    let conv = Convolver::new(p1, cfg)?;
    let zero = if normalize { Some(conv.at(0.0)?) } else { None };
    let values: Vec<Convolution> = grid
        .par_iter()
        .map(|a| {
            let raw = conv.at(a.radians())?;
            match zero {
                Some(z) => normalized(raw, z),
                None => Ok(raw),
            }
        })
        .collect::<Result<_>>()?;

    let warnings = grid
        .iter()
        .zip(&values)
        .filter_map(|(a, c)| c.warning.map(|w| (*a, w)))
        .collect();
    Ok(TransmissionCurve {
        points: grid
            .iter()
            .copied()
            .zip(values.iter().map(|c| c.value))
            .collect(),
        normalized: normalize,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub rms: f64,
    pub max_abs: f64,
    pub argmax: Angle,
}

/// Pointwise residuals of `curve` against `(1 − ε)cos²α + ε`.
///
/// `target_epsilon` may be 1, where the target is the constant curve.
pub fn deviation(curve: &TransmissionCurve, target_epsilon: f64) -> Result<Deviation> {
    if curve.is_empty() {
        return Err(domain("deviation of an empty curve"));
    }
    if !(0.0..=1.0).contains(&target_epsilon) {
        return Err(domain(format!(
            "target epsilon {target_epsilon} outside [0, 1]"
        )));
    }
    let mut sum_sq = 0.0;
    let mut max_abs = -1.0;
    let mut argmax = Angle::ZERO;
    for &(alpha, value) in &curve.points {
        let r = (value - malus_raw(alpha.radians(), target_epsilon)).abs();
        sum_sq += r * r;
        if r > max_abs {
            max_abs = r;
            argmax = alpha;
        }
    }
    Ok(Deviation {
        rms: (sum_sq / curve.len() as f64).sqrt(),
        max_abs,
        argmax,
    })
}

/// `n` evenly spaced angles from `lo` to `hi` (degrees), inclusive.
pub fn degree_grid(lo: f64, hi: f64, step: f64) -> Vec<Angle> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| Angle::from_degrees(lo + step * i as f64))
        .collect()
}
