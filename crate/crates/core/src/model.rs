//! Polarizer axis angles, the Malus law and single-polarizer transmission
//! distributions.
//!
//! A polarizer axis is undirected, so every angle entering a distribution is
//! first reduced to the principal interval `[-π/2, π/2)`. Distributions are
//! therefore even and π-periodic.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Reduce a raw angle (radians) to `[-π/2, π/2)`.
///
/// Values already in range are returned untouched, which makes the reduction
/// idempotent bit for bit. Non-finite input yields NaN.
pub fn reduce_axis(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    if (-FRAC_PI_2..FRAC_PI_2).contains(&x) {
        return x;
    }
    let mut r = x - PI * ((x + FRAC_PI_2) / PI).floor();
    if r >= FRAC_PI_2 {
        r -= PI;
    } else if r < -FRAC_PI_2 {
        r += PI;
    }
    r
}

/// Distance of `x` from the polarizer axis, in `[0, π/2]`.
///
/// Depends on `|x|` only, so `axis_offset(x) == axis_offset(-x)` exactly.
pub fn axis_offset(x: f64) -> f64 {
    reduce_axis(x.abs()).abs()
}

/// An angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub const fn from_radians(rad: f64) -> Self {
        Angle(rad)
    }

    pub fn from_degrees(deg: f64) -> Self {
        Angle(deg.to_radians())
    }

    pub const fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

/// Reduce a polarizer-axis angle to the principal interval `[-π/2, π/2)`.
pub fn wrap_axis(angle: Angle) -> Result<Angle> {
    if !angle.is_finite() {
        return Err(domain(format!("angle {} is not finite", angle.0)));
    }
    Ok(Angle(reduce_axis(angle.0)))
}

/// A real polarizer, characterized by its leakage `ε` at crossed axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizerSpec {
    epsilon: f64,
}

impl PolarizerSpec {
    pub const IDEAL: PolarizerSpec = PolarizerSpec { epsilon: 0.0 };

    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(domain(format!(
                "polarizer leakage {epsilon} outside [0, 1)"
            )));
        }
        Ok(PolarizerSpec { epsilon })
    }

    pub fn epsilon(self) -> f64 {
        self.epsilon
    }
}

/// Malus law for two polarizers whose axes differ by `alpha`:
/// `(1 − ε)·cos²α + ε`.
pub fn malus(alpha: Angle, spec: PolarizerSpec) -> f64 {
    malus_raw(alpha.radians(), spec.epsilon)
}

#[inline]
pub(crate) fn malus_raw(alpha: f64, epsilon: f64) -> f64 {
    let c = alpha.cos();
    (1.0 - epsilon) * c * c + epsilon
}

/// Parameters of the plateau-shaped distribution
/// `p1(λ) = 1 − (1 − exp(−(a|λ|)^e)) / (1 + c·exp(−(a|λ|)^e))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P1Params {
    pub a: f64,
    pub e: f64,
    pub c: f64,
}

impl P1Params {
    /// The published approximate solution.
    pub const PUBLISHED: P1Params = P1Params {
        a: 1.95,
        e: 3.56,
        c: 500.0,
    };

    pub fn new(a: f64, e: f64, c: f64) -> Result<Self> {
        let p = P1Params { a, e, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.a.is_finite()
            && self.e.is_finite()
            && self.c.is_finite()
            && self.a > 0.0
            && self.e > 0.0
            && self.c >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(domain(format!(
                "invalid p1 parameters a={}, e={}, c={} (need a > 0, e > 0, c >= 0, all finite)",
                self.a, self.e, self.c
            )))
        }
    }

    #[inline]
    fn eval_offset(&self, offset: f64) -> f64 {
        let g = (-(self.a * offset).powf(self.e)).exp();
        let v = 1.0 - (1.0 - g) / (1.0 + self.c * g);
        v.clamp(0.0, 1.0)
    }
}

/// Evaluate the plateau distribution at `lambda` (reduced to the axis first).
pub fn p1_eval(params: &P1Params, lambda: Angle) -> f64 {
    params.eval_offset(axis_offset(lambda.radians()))
}

/// Belinfante's choice `p1(λ) = cos²λ`.
pub fn p1_belinfante(lambda: Angle) -> f64 {
    let c = axis_offset(lambda.radians()).cos();
    c * c
}

/// A distribution given by knots on `[0, π/2]` joined by a monotone
/// piecewise-cubic Hermite interpolant, mirrored evenly around 0.
///
/// The end slopes are zero, so the even, π-periodic extension is C¹.
/// Beyond the last knot the last value is held.
#[derive(Debug, Clone, PartialEq)]
pub struct FlexibleP1 {
    angles: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl FlexibleP1 {
    /// Knots as `(angle in radians, value)` pairs.
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(domain("flexible p1 needs at least two knots"));
        }
        let (angles, values): (Vec<f64>, Vec<f64>) = knots.iter().copied().unzip();
        if angles[0] != 0.0 || values[0] != 1.0 {
            return Err(domain("first knot must be (0, 1)"));
        }
        for w in angles.windows(2) {
            if !(w[1] > w[0]) {
                return Err(domain("knot angles must be strictly increasing"));
            }
        }
        if !(angles[angles.len() - 1] <= FRAC_PI_2) {
            return Err(domain("knot angles must lie in [0, π/2]"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(domain("knot values must lie in [0, 1]"));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(domain("knot values must be non-increasing"));
        }
        let slopes = monotone_slopes(&angles, &values);
        Ok(FlexibleP1 {
            angles,
            values,
            slopes,
        })
    }

    /// `n` knots spread evenly over `[0, π/2]`, with `values[0]` forced to 1.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(domain("flexible p1 needs at least two knots"));
        }
        let knots: Vec<(f64, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (FRAC_PI_2 * i as f64 / (n - 1) as f64, v))
            .collect();
        Self::new(&knots)
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles.iter().copied().zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    fn eval_offset(&self, x: f64) -> f64 {
        let n = self.angles.len();
        if x >= self.angles[n - 1] {
            return self.values[n - 1];
        }
        // Index of the interval [angles[k], angles[k + 1]) holding x.
        let k = self.angles.partition_point(|&t| t <= x).saturating_sub(1);
        let (x0, x1) = (self.angles[k], self.angles[k + 1]);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1).clamp(0.0, 1.0)
    }
}

/// Fritsch-Carlson slopes with zero end slopes.
fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (dl, dr) = (delta[k - 1], delta[k]);
        if dl * dr <= 0.0 {
            continue;
        }
        let w1 = 2.0 * h[k] + h[k - 1];
        let w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / dl + w2 / dr);
    }
    d
}

/// A single-polarizer transmission distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum P1 {
    Parametric(P1Params),
    Flexible(FlexibleP1),
    Belinfante,
}

impl P1 {
    /// Evaluate at a raw angle in radians. NaN for non-finite input.
    #[inline]
    pub fn eval(&self, lambda: f64) -> f64 {
        let x = axis_offset(lambda);
        if x.is_nan() {
            return f64::NAN;
        }
        match self {
            P1::Parametric(p) => p.eval_offset(x),
            P1::Flexible(f) => f.eval_offset(x),
            P1::Belinfante => {
                let c = x.cos();
                c * c
            }
        }
    }

    pub fn eval_angle(&self, lambda: Angle) -> f64 {
        self.eval(lambda.radians())
    }

    pub fn label(&self) -> &'static str {
        match self {
            P1::Parametric(_) => "three-param",
            P1::Flexible(_) => "flexible",
            P1::Belinfante => "belinfante",
        }
    }

    /// Check the distribution-level invariants on a sample grid: value 1 at 0,
    /// evenness and range `[0, 1]`.
    pub fn check_invariants(&self) -> Result<()> {
        if self.eval(0.0) != 1.0 {
            return Err(domain(format!(
                "{} p1(0) = {} != 1",
                self.label(),
                self.eval(0.0)
            )));
        }
        for i in 0..=360 {
            let x = -PI + PI * i as f64 / 180.0;
            let v = self.eval(x);
            if !(0.0..=1.0).contains(&v) || v != self.eval(-x) {
                return Err(domain(format!(
                    "{} p1 invalid at λ = {x}: {v}",
                    self.label()
                )));
            }
        }
        Ok(())
    }
}
