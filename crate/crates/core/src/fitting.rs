//! Fits of the single-polarizer distribution `p1` so that its
//! self-convolution reproduces the Malus law.
//!
//! Two families are supported: the three-parameter plateau `P1Params`,
//! optimized in `(ln a, ln e, ln(1 + c))`, and a monotone knot
//! interpolant whose knot values are optimized directly. Each fit is a
//! multi-start Nelder-Mead run; restart 0 starts at the supplied point and
//! the others at seeded perturbations of it.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::convolution::{curve, degree_grid, deviation, Deviation};
use crate::error::{domain, Error, Result};
use crate::model::{Angle, FlexibleP1, P1Params, P1};
use crate::quadrature::QuadratureConfig;
use crate::simplex::{nelder_mead, SimplexOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Rms,
    MaxAbs,
}

impl Objective {
    fn pick(self, d: &Deviation) -> f64 {
        match self {
            Objective::Rms => d.rms,
            Objective::MaxAbs => d.max_abs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub objective: Objective,
    pub grid: Vec<Angle>,
    pub target_epsilon: f64,
    pub max_iterations: usize,
    pub simplex_tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
    /// Compare the normalized convolution (`M(0) = 1`) against the target.
    pub normalize: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            objective: Objective::Rms,
            grid: degree_grid(0.0, 90.0, 1.0),
            target_epsilon: 0.0,
            max_iterations: 2000,
            simplex_tolerance: 1e-6,
            restarts: 4,
            seed: 0,
            quadrature: QuadratureConfig::default(),
            normalize: true,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(domain("max_iterations must be >= 1"));
        }
        if !(self.simplex_tolerance > 0.0) {
            return Err(domain("simplex_tolerance must be positive"));
        }
        if self.restarts == 0 {
            return Err(domain("restarts must be >= 1"));
        }
        if self.grid.is_empty() {
            return Err(domain("fit grid is empty"));
        }
        if !(0.0..=1.0).contains(&self.target_epsilon) {
            return Err(domain(format!(
                "target epsilon {} outside [0, 1]",
                self.target_epsilon
            )));
        }
        self.quadrature.validate()
    }
}

/// Which family to fit, and where to start.
#[derive(Debug, Clone, PartialEq)]
pub enum FitForm {
    ThreeParam {
        initial: P1Params,
    },
    /// `knots` evenly spaced knots on `[0, π/2]`, started from `initial`
    /// sampled at the knots. Without `initial`, a three-parameter fit from
    /// the published point is run first with the same configuration and its
    /// optimum is used.
    Flexible {
        knots: usize,
        initial: Option<P1>,
    },
}

impl FitForm {
    pub fn three_param() -> Self {
        FitForm::ThreeParam {
            initial: P1Params::PUBLISHED,
        }
    }

    pub fn flexible(knots: usize) -> Self {
        FitForm::Flexible {
            knots,
            initial: None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FitForm::ThreeParam { .. } => "three-param",
            FitForm::Flexible { .. } => "flexible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub form: &'static str,
    pub best: P1,
    pub residual_rms: f64,
    pub residual_max: f64,
    /// Configured objective at the supplied starting point.
    pub initial_objective: f64,
    /// Configured objective at `best`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, best objective)` of the winning restart.
    pub history: Vec<(usize, f64)>,
    pub seed: u64,
    pub restart: usize,
}

/// Objective of a candidate distribution; `+∞` when the curve cannot be built.
pub fn objective_value(p1: &P1, cfg: &FitConfig) -> f64 {
    evaluate(p1, cfg).map_or(f64::INFINITY, |d| cfg.objective.pick(&d))
}

fn evaluate(p1: &P1, cfg: &FitConfig) -> Result<Deviation> {
    let c = curve(p1, &cfg.grid, &cfg.quadrature, cfg.normalize)?;
    deviation(&c, cfg.target_epsilon)
}

const FLEX_PENALTY: f64 = 10.0;

fn decode_three(u: &[f64]) -> Option<P1Params> {
    P1Params::new(u[0].exp(), u[1].exp(), u[2].abs().exp_m1()).ok()
}

fn encode_three(p: &P1Params) -> Vec<f64> {
    vec![p.a.ln(), p.e.ln(), p.c.ln_1p()]
}

/// Clamp to `[0, 1]`, sort descending, and measure how far the raw vector was
/// from already being valid.
fn decode_flexible(u: &[f64]) -> (Vec<f64>, f64) {
    let mut violation: f64 = u.iter().map(|&x| (x - x.clamp(0.0, 1.0)).abs()).sum();
    let mut values: Vec<f64> = u.iter().map(|&x| x.clamp(0.0, 1.0)).collect();
    violation += values
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .sum::<f64>();
    values.sort_by(|a, b| b.total_cmp(a));
    values.insert(0, 1.0);
    (values, violation)
}

fn flexible_p1(u: &[f64]) -> Option<(P1, f64)> {
    let (values, violation) = decode_flexible(u);
    FlexibleP1::uniform(&values)
        .ok()
        .map(|f| (P1::Flexible(f), violation))
}

struct Run {
    best: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
    history: Vec<(usize, f64)>,
}

/// Fit `p1` against the Malus law with target leakage `cfg.target_epsilon`.
pub fn fit_p1(form: &FitForm, cfg: &FitConfig) -> Result<FitReport> {
    cfg.validate()?;
    if cfg.target_epsilon >= 1.0 {
        return Err(Error::Fit(
            "degenerate target: with epsilon = 1 the Malus law is the constant 1 and no \
             distribution with p1(0) = 1 and a decaying tail can match it"
                .into(),
        ));
    }

    let (start, step, start_p1): (Vec<f64>, f64, P1) = match form {
        FitForm::ThreeParam { initial } => {
            initial.validate()?;
            (encode_three(initial), 0.1, P1::Parametric(*initial))
        }
        FitForm::Flexible { knots, initial } => {
            if *knots < 2 {
                return Err(domain("flexible fit needs at least two knots"));
            }
            let p = match initial {
                Some(p) => p.clone(),
                None => fit_p1(&FitForm::three_param(), cfg)?.best,
            };
            let start: Vec<f64> = (1..*knots)
                .map(|i| p.eval(FRAC_PI_2 * i as f64 / (*knots - 1) as f64))
                .collect();
            let start_p1 = flexible_p1(&start)
                .ok_or_else(|| domain("invalid flexible start"))?
                .0;
            (start, 0.05, start_p1)
        }
    };

    let objective = |u: &[f64]| -> f64 {
        match form {
            FitForm::ThreeParam { .. } => {
                decode_three(u).map_or(f64::INFINITY, |p| objective_value(&P1::Parametric(p), cfg))
            }
            FitForm::Flexible { .. } => flexible_p1(u).map_or(f64::INFINITY, |(p, violation)| {
                objective_value(&p, cfg) + FLEX_PENALTY * violation
            }),
        }
    };

    let opts = SimplexOptions {
        max_iterations: cfg.max_iterations,
        tolerance: cfg.simplex_tolerance,
        absolute_step: Some(step),
        ..SimplexOptions::default()
    };

    let starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|r| {
            if r == 0 {
                return start.clone();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let noise = Normal::new(0.0, step).expect("positive spread");
            start.iter().map(|x| x + noise.sample(&mut rng)).collect()
        })
        .collect();

    let runs: Vec<Option<Run>> = starts
        .par_iter()
        .map(|x0| {
            nelder_mead(objective, x0, &opts).ok().map(|o| Run {
                best: o.best,
                value: o.value,
                iterations: o.iterations,
                converged: o.converged,
                history: o.history,
            })
        })
        .collect();

    let initial_objective = objective_value(&start_p1, cfg);
    let (restart, run) = runs
        .into_iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, r)))
        .filter(|(_, r)| r.value.is_finite())
        .reduce(|best, cand| {
            if cand.1.value < best.1.value {
                cand
            } else {
                best
            }
        })
        .ok_or_else(|| Error::Fit("no restart produced a finite objective".into()))?;

    let mut best = match form {
        FitForm::ThreeParam { .. } => {
            P1::Parametric(decode_three(&run.best).expect("finite objective"))
        }
        FitForm::Flexible { .. } => flexible_p1(&run.best).expect("finite objective").0,
    };
    // The simplex starts from the transformed point, which can differ from
    // the supplied one in the last bits.
    if initial_objective <= objective_value(&best, cfg) {
        best = start_p1;
    }
    best.check_invariants()
        .map_err(|e| Error::Fit(format!("fitted distribution is invalid: {e}")))?;
    let dev = evaluate(&best, cfg)?;

    Ok(FitReport {
        form: form.label(),
        best,
        residual_rms: dev.rms,
        residual_max: dev.max_abs,
        initial_objective,
        objective: cfg.objective.pick(&dev),
        iterations: run.iterations,
        converged: run.converged,
        history: run.history,
        seed: cfg.seed,
        restart,
    })
}

impl FitReport {
    /// JSON with keys `form, params, residual_rms, residual_max, iterations,
    /// converged, seed`.
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(&json!({
            "form": self.form,
            "params": params_json(&self.best),
            "residual_rms": self.residual_rms,
            "residual_max": self.residual_max,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
        }))
    }
}

pub(crate) fn params_json(p1: &P1) -> serde_json::Value {
    match p1 {
        P1::Parametric(p) => json!({ "a": p.a, "e": p.e, "c": p.c }),
        P1::Flexible(f) => {
            let (deg, values): (Vec<f64>, Vec<f64>) =
                f.knots().map(|(a, v)| (a.to_degrees(), v)).unzip();
            json!({ "knots_deg": deg, "values": values })
        }
        P1::Belinfante => json!({}),
    }
}

#[derive(Deserialize)]
struct ReportIn {
    form: String,
    params: serde_json::Value,
}

#[derive(Deserialize)]
struct FlexibleIn {
    knots_deg: Vec<f64>,
    values: Vec<f64>,
}

/// Recover the fitted distribution from a report written by
/// [`FitReport::to_json`].
pub fn p1_from_report_json(text: &str) -> Result<P1> {
    let report: ReportIn = serde_json::from_str(text)?;
    match report.form.as_str() {
        "three-param" => {
            let p: P1Params = serde_json::from_value(report.params)?;
            p.validate()?;
            Ok(P1::Parametric(p))
        }
        "flexible" => {
            let f: FlexibleIn = serde_json::from_value(report.params)?;
            if f.knots_deg.len() != f.values.len() {
                return Err(domain("knots_deg and values differ in length"));
            }
            let knots: Vec<(f64, f64)> = f
                .knots_deg
                .iter()
                .zip(&f.values)
                .map(|(&d, &v)| {
                    let r = d.to_radians();
                    // Degree round trips can land one ulp past π/2.
                    let r = if r > FRAC_PI_2 && r - FRAC_PI_2 < 1e-12 {
                        FRAC_PI_2
                    } else {
                        r
                    };
                    (r, v)
                })
                .collect();
            Ok(P1::Flexible(FlexibleP1::new(&knots)?))
        }
        other => Err(domain(format!("unknown fit form {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> FitConfig {
        FitConfig {
            grid: degree_grid(0.0, 90.0, 5.0),
            restarts: 2,
            max_iterations: 300,
            ..FitConfig::default()
        }
    }

    #[test]
    fn three_param_improves_on_the_published_point() {
        let cfg = quick();
        let published = objective_value(&P1::Parametric(P1Params::PUBLISHED), &cfg);
        let r = fit_p1(&FitForm::three_param(), &cfg).unwrap();
        assert_eq!(r.initial_objective, published);
        assert!(r.residual_rms <= published);
        assert!(r.history.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn perturbed_start_does_not_end_worse_than_the_published_point() {
        let cfg = quick();
        let published = objective_value(&P1::Parametric(P1Params::PUBLISHED), &cfg);
        let start = P1Params::new(1.95 * 1.1, 3.56 * 0.9, 500.0 * 1.1).unwrap();
        let r = fit_p1(&FitForm::ThreeParam { initial: start }, &cfg).unwrap();
        assert!(
            r.residual_rms <= published,
            "{} > {published}",
            r.residual_rms
        );
    }

    #[test]
    fn fits_are_deterministic() {
        let cfg = quick();
        let a = fit_p1(&FitForm::three_param(), &cfg).unwrap();
        let b = fit_p1(&FitForm::three_param(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn degenerate_target_is_a_fit_failure() {
        let cfg = FitConfig {
            target_epsilon: 1.0,
            ..quick()
        };
        assert!(matches!(
            fit_p1(&FitForm::three_param(), &cfg),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for cfg in [
            FitConfig {
                restarts: 0,
                ..quick()
            },
            FitConfig {
                grid: vec![],
                ..quick()
            },
            FitConfig {
                max_iterations: 0,
                ..quick()
            },
            FitConfig {
                simplex_tolerance: 0.0,
                ..quick()
            },
        ] {
            assert!(fit_p1(&FitForm::three_param(), &cfg).is_err());
        }
        assert!(fit_p1(&FitForm::flexible(1), &quick()).is_err());
    }

    #[test]
    fn flexible_decoding_always_yields_a_valid_distribution() {
        let (values, violation) = decode_flexible(&[0.5, 1.4, -0.2, 0.7]);
        assert_eq!(values, vec![1.0, 1.0, 0.7, 0.5, 0.0]);
        assert!(violation > 0.0);
        let (_, clean) = decode_flexible(&[0.9, 0.4, 0.1]);
        assert_eq!(clean, 0.0);
    }

    #[test]
    fn report_json_round_trips_the_distribution() {
        let cfg = FitConfig {
            max_iterations: 40,
            restarts: 1,
            ..quick()
        };
        for form in [FitForm::three_param(), FitForm::flexible(6)] {
            let r = fit_p1(&form, &cfg).unwrap();
            let text = r.to_json().unwrap();
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
            keys.sort();
            assert_eq!(
                keys,
                [
                    "converged",
                    "form",
                    "iterations",
                    "params",
                    "residual_max",
                    "residual_rms",
                    "seed"
                ]
            );
            let back = p1_from_report_json(&text).unwrap();
            for i in 0..=90 {
                let x = (i as f64).to_radians();
                assert!((back.eval(x) - r.best.eval(x)).abs() < 1e-12);
            }
        }
        assert!(p1_from_report_json(r#"{"form":"spline","params":{}}"#).is_err());
        assert!(p1_from_report_json("not json").is_err());
    }
}
