//! Three polarizers at axis angles `0`, `α` and `β`: transmission models and
//! the search for the third angle that minimizes the total transmission.
//!
//! The hidden-variable model uses one explicit chaining rule, see
//! [`ChainRule::Redistribute`].

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::Convolver;
use crate::error::{domain, Error, Result};
use crate::model::{malus_raw, reduce_axis, Angle, P1};
use crate::quadrature::QuadratureConfig;

/// How the hidden polarization is carried from one polarizer to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainRule {
    /// A photon leaving a polarizer has its deviation redistributed around
    /// that polarizer's axis with density proportional to `p1`, so each stage
    /// contributes an independent normalized convolution factor:
    /// `T(α, β) = M̂(α) · M̂(β − α)` with `M̂ = M / M(0)`.
    Redistribute,
}

impl ChainRule {
    pub fn name(self) -> &'static str {
        match self {
            ChainRule::Redistribute => "p1-redistribution",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CascadeModel {
    /// `cos²α · cos²(β − α)`.
    IdealQm,
    /// `[(1−ε)cos²α + ε] · [(1−ε)cos²(β−α) + ε] + offset`.
    RealQm { epsilon: f64, offset: f64 },
    HiddenVariable {
        p1: P1,
        rule: ChainRule,
        quadrature: QuadratureConfig,
    },
}

impl CascadeModel {
    pub fn hidden_variable(p1: P1) -> Self {
        CascadeModel::HiddenVariable {
            p1,
            rule: ChainRule::Redistribute,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CascadeModel::IdealQm => "ideal",
            CascadeModel::RealQm { .. } => "real",
            CascadeModel::HiddenVariable { .. } => "hv",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CascadeModel::IdealQm => Ok(()),
            CascadeModel::RealQm { epsilon, offset } => {
                if !(0.0..1.0).contains(epsilon) {
                    return Err(domain(format!("epsilon {epsilon} outside [0, 1)")));
                }
                if !(0.0..1.0).contains(offset) {
                    return Err(domain(format!("offset {offset} outside [0, 1)")));
                }
                Ok(())
            }
            CascadeModel::HiddenVariable { p1, quadrature, .. } => {
                quadrature.validate()?;
                p1.check_invariants()
            }
        }
    }
}

/// A validated model ready for repeated evaluation.
enum Evaluator<'a> {
    Ideal,
    Real { epsilon: f64, offset: f64 },
    Hv { conv: Convolver<'a>, zero: f64 },
}

impl<'a> Evaluator<'a> {
    fn new(model: &'a CascadeModel) -> Result<Self> {
        model.validate()?;
        Ok(match model {
            CascadeModel::IdealQm => Evaluator::Ideal,
            CascadeModel::RealQm { epsilon, offset } => Evaluator::Real {
                epsilon: *epsilon,
                offset: *offset,
            },
            CascadeModel::HiddenVariable { p1, quadrature, .. } => {
                let conv = Convolver::new(p1, quadrature)?;
                let zero = conv.at(0.0)?.value;
                if !(zero > 0.0) {
                    return Err(domain(format!("cannot normalize: M(0) = {zero}")));
                }
                Evaluator::Hv { conv, zero }
            }
        })
    }

    /// Transmission through a single stage at relative angle `x`.
    fn stage(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Evaluator::Ideal => malus_raw(x, 0.0),
            Evaluator::Real { epsilon, .. } => malus_raw(x, *epsilon),
            Evaluator::Hv { conv, zero } => conv.at(reduce_axis(x))?.value / zero,
        })
    }

    fn offset(&self) -> f64 {
        match self {
            Evaluator::Real { offset, .. } => *offset,
            _ => 0.0,
        }
    }

    fn total(&self, first: f64, beta: f64, alpha: f64) -> Result<f64> {
        Ok(first * self.stage(beta - alpha)? + self.offset())
    }
}

/// Total transmission through polarizers at `0`, `alpha` and `beta`.
pub fn transmission(model: &CascadeModel, alpha: Angle, beta: Angle) -> Result<f64> {
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(domain("cascade angles must be finite"));
    }
    let ev = Evaluator::new(model)?;
    let first = ev.stage(alpha.radians())?;
    ev.total(first, beta.radians(), alpha.radians())
}

/// Search resolution for [`min_beta`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSearch {
    pub grid_step: Angle,
    pub refine_tol: Angle,
}

impl Default for BetaSearch {
    fn default() -> Self {
        BetaSearch {
            grid_step: Angle::from_degrees(0.5),
            refine_tol: Angle::from_degrees(0.01),
        }
    }
}

impl BetaSearch {
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (self.grid_step.radians(), self.refine_tol.radians());
        if !(s > 0.0 && s < PI && s.is_finite()) {
            return Err(domain(format!("grid step {s} rad outside (0, π)")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(format!("refine tolerance {t} rad must be positive")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult {
    pub alpha: Angle,
    /// In `[0, π)`.
    pub beta_min: Angle,
    pub t_min: f64,
    pub model: CascadeModel,
}

/// The `β ∈ [0, π)` minimizing the transmission at fixed `alpha`.
///
/// A coarse scan picks the smallest grid angle attaining the minimum, then a
/// golden-section search over one grid step on either side refines it. The
/// refinement is kept only when it strictly lowers the transmission.
pub fn min_beta(model: &CascadeModel, alpha: Angle, search: &BetaSearch) -> Result<CascadeResult> {
    search.validate()?;
    if !alpha.is_finite() {
        return Err(domain("alpha must be finite"));
    }
    let ev = Evaluator::new(model)?;
    let (beta, t) = minimize(&ev, alpha.radians(), search)?;
    Ok(CascadeResult {
        alpha,
        beta_min: Angle::from_radians(beta),
        t_min: t,
        model: model.clone(),
    })
}

fn minimize(ev: &Evaluator, alpha: f64, search: &BetaSearch) -> Result<(f64, f64)> {
    let step = search.grid_step.radians();
    let first = ev.stage(alpha)?;
    let t = |beta: f64| ev.total(first, beta, alpha);

    let n = (PI / step).ceil() as usize;
    let mut best = (0.0, t(0.0)?);
    for k in 1..n {
        let beta = step * k as f64;
        if beta >= PI {
            break;
        }
        let v = t(beta)?;
        if v < best.1 {
            best = (beta, v);
        }
    }

    let refined = golden_section(
        &t,
        best.0 - step,
        best.0 + step,
        search.refine_tol.radians(),
    )?;
    if refined.1 < best.1 {
        let mut beta = refined.0.rem_euclid(PI);
        if beta >= PI {
            beta = 0.0;
        }
        best = (beta, refined.1);
    }
    Ok(best)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[lo, hi]`; returns the best point evaluated.
fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    let mut best = if f2 < f1 { (x2, f2) } else { (x1, f1) };
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    Ok(best)
}

/// [`min_beta`] for each angle of a non-decreasing list, in input order.
pub fn beta_curve(
    model: &CascadeModel,
    alphas: &[Angle],
    search: &BetaSearch,
) -> Result<Vec<CascadeResult>> {
    search.validate()?;
    if alphas.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(domain("alphas must be sorted"));
    }
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(domain("alphas must be finite"));
    }
    if alphas.is_empty() {
        return Ok(Vec::new());
    }
    let ev = Evaluator::new(model)?;
    alphas
        .par_iter()
        .map(|&alpha| {
            let (beta, t) = minimize(&ev, alpha.radians(), search)?;
            Ok(CascadeResult {
                alpha,
                beta_min: Angle::from_radians(beta),
                t_min: t,
                model: model.clone(),
            })
        })
        .collect()
}

/// One row of a measured three-polarizer dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredPoint {
    pub alpha: Angle,
    pub beta: Angle,
    pub transmission: f64,
}

pub const MEASURED_HEADER: [&str; 3] = ["alpha_deg", "beta_deg", "transmission"];

/// Read a measured dataset with header `alpha_deg,beta_deg,transmission`.
/// Angles are in degrees; rows must be sorted by `alpha_deg`.
pub fn read_measured(path: &Path) -> Result<Vec<MeasuredPoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_measured(&text).map_err(|message| Error::Input {
        path: path.to_path_buf(),
        message,
    })
}

fn parse_measured(text: &str) -> std::result::Result<Vec<MeasuredPoint>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(MEASURED_HEADER) => {}
        Some(Ok(h)) => {
            return Err(format!(
                "line 1: expected header `{}`, found `{}`",
                MEASURED_HEADER.join(","),
                h.iter().collect::<Vec<_>>().join(",")
            ))
        }
        Some(Err(e)) => return Err(format!("line 1: {e}")),
        None => return Err("empty file, expected a header line".into()),
    }

    let mut points: Vec<MeasuredPoint> = Vec::new();
    for record in records {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(format!(
                "line {line}: expected 3 fields, found {}",
                record.len()
            ));
        }
        let mut v = [0.0; 3];
        for (slot, (field, name)) in v.iter_mut().zip(record.iter().zip(MEASURED_HEADER)) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("line {line}: {name} `{field}` is not a finite number"))?;
        }
        if let Some(prev) = points.last() {
            if v[0] < prev.alpha.degrees() {
                return Err(format!("line {line}: alpha_deg must be non-decreasing"));
            }
        }
        points.push(MeasuredPoint {
            alpha: Angle::from_degrees(v[0]),
            beta: Angle::from_degrees(v[1]),
            transmission: v[2],
        });
    }
    Ok(points)
}
