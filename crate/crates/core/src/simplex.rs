//! Nelder-Mead downhill simplex minimization.

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop once every vertex lies within this sup-norm distance of the best.
    pub tolerance: f64,
    /// Initial edge length relative to each coordinate; coordinates equal to
    /// zero get `zero_step`.
    pub relative_step: f64,
    pub zero_step: f64,
    /// When set, every coordinate gets this edge length instead.
    pub absolute_step: Option<f64>,
    /// After convergence, rebuild the simplex around the best vertex and
    /// continue, up to this many times, while the value keeps improving.
    pub rebuilds: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 2000,
            tolerance: 1e-8,
            relative_step: 0.05,
            zero_step: 0.00025,
            absolute_step: None,
            rebuilds: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub best: Vec<f64>,
    pub value: f64,
    pub initial_value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best value after each iteration.
    pub history: Vec<(usize, f64)>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimize `f` from `x0`. Non-finite objective values are treated as `+∞`.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> Result<SimplexOutcome>
where
    F: Fn(&[f64]) -> f64,
{
    if x0.is_empty() {
        return Err(domain("empty starting point"));
    }
    if opts.max_iterations == 0 || !(opts.tolerance > 0.0) {
        return Err(domain("max_iterations must be >= 1 and tolerance > 0"));
    }
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let initial_value = eval(x0);
    let mut simplex = build_simplex(x0, initial_value, opts, &eval);
    if simplex.iter().all(|(_, v)| v.is_infinite()) {
        return Err(Error::SimplexInit);
    }

    let mut iterations = 0;
    let mut history = Vec::new();
    let mut converged = run(&mut simplex, &eval, opts, &mut iterations, &mut history);
    for _ in 0..opts.rebuilds {
        if !converged {
            break;
        }
        let (best, before) = simplex[0].clone();
        simplex = build_simplex(&best, before, opts, &eval);
        converged = run(&mut simplex, &eval, opts, &mut iterations, &mut history);
        if !(simplex[0].1 < before) {
            break;
        }
    }

    let (best, value) = simplex.swap_remove(0);
    Ok(SimplexOutcome {
        best,
        value,
        initial_value,
        iterations,
        converged,
        history,
    })
}

type Vertex = (Vec<f64>, f64);

fn build_simplex<E>(x0: &[f64], v0: f64, opts: &SimplexOptions, eval: &E) -> Vec<Vertex>
where
    E: Fn(&[f64]) -> f64,
{
    let mut simplex = Vec::with_capacity(x0.len() + 1);
    simplex.push((x0.to_vec(), v0));
    for i in 0..x0.len() {
        let mut x = x0.to_vec();
        x[i] += if let Some(step) = opts.absolute_step {
            step
        } else if x[i] != 0.0 {
            opts.relative_step * x[i]
        } else {
            opts.zero_step
        };
        let v = eval(&x);
        simplex.push((x, v));
    }
    // Stable: ties keep the starting point first.
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex
}

fn diameter(simplex: &[Vertex]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .flat_map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Iterate until the simplex collapses (true) or the budget runs out (false).
fn run<E>(
    simplex: &mut [Vertex],
    eval: &E,
    opts: &SimplexOptions,
    iterations: &mut usize,
    history: &mut Vec<(usize, f64)>,
) -> bool
where
    E: Fn(&[f64]) -> f64,
{
    let n = simplex.len() - 1;
    loop {
        if diameter(simplex) < opts.tolerance {
            return true;
        }
        if *iterations >= opts.max_iterations {
            return false;
        }
        *iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        let (best_v, second_worst_v) = (simplex[0].1, simplex[n - 1].1);

        let replacement = if fr < best_v {
            let xe = along(REFLECT * EXPAND);
            let fe = eval(&xe);
            Some(if fe < fr { (xe, fe) } else { (xr, fr) })
        } else if fr < second_worst_v {
            Some((xr, fr))
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(REFLECT * CONTRACT);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-CONTRACT);
                let fc = eval(&xc);
                (xc, fc)
            };
            (fc < worst.1.min(fr)).then_some((xc, fc))
        };

        match replacement {
            Some(v) => simplex[n] = v,
            None => {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (x, b) in vertex.0.iter_mut().zip(&best) {
                        *x = b + SHRINK * (*x - b);
                    }
                    vertex.1 = eval(&vertex.0);
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        history.push((*iterations, simplex[0].1));
    }
}
