//! Fixed-rule quadrature with a node-doubling accuracy check.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    CompositeSimpson,
    GaussLegendre,
}

/// Quadrature settings. `node_count` is the panel count for composite
/// Simpson and the node count for Gauss-Legendre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub node_count: usize,
    pub tolerance: f64,
    pub rule: Rule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            node_count: 256,
            tolerance: 1e-9,
            rule: Rule::CompositeSimpson,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(domain(format!("node_count {} < 16", self.node_count)));
        }
        if self.rule == Rule::CompositeSimpson && !self.node_count.is_multiple_of(2) {
            return Err(domain(format!(
                "composite Simpson needs an even panel count, got {}",
                self.node_count
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(domain(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Raised when doubling the node count moves the result by at least the
/// configured tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyWarning {
    pub change: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    /// Estimate from the doubled node count.
    pub value: f64,
    /// `|I(2N) − I(N)|`.
    pub change: f64,
    pub warning: Option<AccuracyWarning>,
}

/// A coarse and a fine rule sharing one node list. The fine rule uses twice
/// the configured node count; a weight of 0 marks a node the rule skips.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedRule {
    pub nodes: Vec<f64>,
    coarse: Vec<f64>,
    fine: Vec<f64>,
    tolerance: f64,
}

impl PairedRule {
    pub fn new(lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(format!("invalid integration interval [{lo}, {hi}]")));
        }
        let (nodes, coarse, fine) = match cfg.rule {
            Rule::CompositeSimpson => {
                // Every coarse node is also a fine node.
                let n = 2 * cfg.node_count;
                let h = (hi - lo) / n as f64;
                let nodes = (0..=n).map(|i| lo + h * i as f64).collect();
                let fine = simpson_weights(n, h);
                let mut coarse = vec![0.0; n + 1];
                for (i, w) in simpson_weights(cfg.node_count, 2.0 * h)
                    .into_iter()
                    .enumerate()
                {
                    coarse[2 * i] = w;
                }
                (nodes, coarse, fine)
            }
            Rule::GaussLegendre => {
                let mid = 0.5 * (hi + lo);
                let half = 0.5 * (hi - lo);
                let (xc, wc) = legendre_rule(cfg.node_count);
                let (xf, wf) = legendre_rule(2 * cfg.node_count);
                let nodes = xc.iter().chain(&xf).map(|t| mid + half * t).collect();
                let coarse = wc
                    .iter()
                    .map(|w| half * w)
                    .chain(wf.iter().map(|_| 0.0))
                    .collect();
                let fine = wc
                    .iter()
                    .map(|_| 0.0)
                    .chain(wf.iter().map(|w| half * w))
                    .collect();
                (nodes, coarse, fine)
            }
        };
        Ok(PairedRule {
            nodes,
            coarse,
            fine,
            tolerance: cfg.tolerance,
        })
    }

    /// Combine integrand samples taken at [`PairedRule::nodes`].
    pub fn combine(&self, samples: &[f64]) -> Result<Integral> {
        debug_assert_eq!(samples.len(), self.nodes.len());
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Evaluation {
                index,
                x: self.nodes[index],
                value: samples[index],
            });
        }
        let dot = |w: &[f64]| w.iter().zip(samples).map(|(w, v)| w * v).sum::<f64>();
        let (coarse, fine) = (dot(&self.coarse), dot(&self.fine));
        let change = (fine - coarse).abs();
        let warning = (change >= self.tolerance).then_some(AccuracyWarning {
            change,
            tolerance: self.tolerance,
        });
        Ok(Integral {
            value: fine,
            change,
            warning,
        })
    }
}

/// Integrate `f` over `[lo, hi]`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    let rule = PairedRule::new(lo, hi, cfg)?;
    let samples: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
    rule.combine(&samples)
}

/// Composite Simpson weights for `n` panels of width `h`.
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let k = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            k * h / 3.0
        })
        .collect()
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// found by Newton iteration on the Legendre recurrence.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn gl() -> QuadratureConfig {
        QuadratureConfig {
            node_count: 32,
            tolerance: 1e-9,
            rule: Rule::GaussLegendre,
        }
    }

    #[test]
    fn cos_squared_over_a_period() {
        for cfg in [QuadratureConfig::default(), gl()] {
            let r = integrate(|x: f64| x.cos().powi(2), -FRAC_PI_2, FRAC_PI_2, &cfg).unwrap();
            assert!((r.value - FRAC_PI_2).abs() < 1e-10, "{cfg:?}: {}", r.value);
            assert!(r.warning.is_none());
        }
    }

    #[test]
    fn constant_is_exact() {
        for cfg in [QuadratureConfig::default(), gl()] {
            let r = integrate(|_| 1.0, 0.0, 1.0, &cfg).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_of_cosines_matches_closed_form() {
        let alpha: f64 = 0.3;
        let exact = PI / 8.0 * (1.0 + 2.0 * alpha.cos().powi(2));
        for cfg in [QuadratureConfig::default(), gl()] {
            let r = integrate(
                |l: f64| l.cos().powi(2) * (alpha - l).cos().powi(2),
                -FRAC_PI_2,
                FRAC_PI_2,
                &cfg,
            )
            .unwrap();
            assert!((r.value - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [16, 33, 256, 512] {
            let (x, w) = legendre_rule(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12, "n = {n}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn non_finite_sample_names_the_node() {
        let err = integrate(
            |x| if x > 0.5 { f64::NAN } else { x },
            0.0,
            1.0,
            &QuadratureConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::Evaluation { index, x, .. } => {
                assert!(x > 0.5);
                assert_eq!(index, 257);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rough_integrand_warns() {
        let cfg = QuadratureConfig {
            node_count: 16,
            tolerance: 1e-12,
            rule: Rule::CompositeSimpson,
        };
        let r = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, &cfg).unwrap();
        assert!(r.warning.is_some());
    }

    #[test]
    fn config_validation() {
        let mut cfg = QuadratureConfig {
            node_count: 15,
            ..QuadratureConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.node_count = 17;
        assert!(cfg.validate().is_err());
        cfg.rule = Rule::GaussLegendre;
        assert!(cfg.validate().is_ok());
        cfg.tolerance = 0.0;
        assert!(cfg.validate().is_err());
        assert!(integrate(|x| x, 1.0, 0.0, &QuadratureConfig::default()).is_err());
    }
}
