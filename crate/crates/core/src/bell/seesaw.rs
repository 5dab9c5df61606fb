//! See-saw maximization of `⟨B⟩` and random sampling of observable sets.
//!
//! One sweep fixes the state (top eigenvector of `B`) and replaces each
//! observable by the involution maximizing the now-linear objective: if the
//! objective reads `tr(X·G)` for Hermitian `G`, the maximizer is
//! `X = sign(G)`. The sweep value never decreases.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{
    bell_operator, hermitian_eigen, spectral, BellOperator, BoundEstimate, CMatrix, CVector,
    HermitianObservable, ObservableSet, Regime, Witness,
};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawConfig {
    pub regime: Regime,
    /// Per tensor factor for the hidden-variable regime, total otherwise.
    pub dimension: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Stop a restart once a sweep gains less than this.
    pub tol: f64,
    pub max_iterations: usize,
}

impl SeesawConfig {
    pub fn new(regime: Regime) -> Self {
        let (dimension, restarts) = match regime {
            Regime::CopenhagenQm => (4, 32),
            _ => (2, 8),
        };
        SeesawConfig {
            regime,
            dimension,
            restarts,
            seed: 0,
            tol: 1e-10,
            max_iterations: 500,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.regime == Regime::Classical {
            return Err(domain(
                "the classical regime is solved by enumeration, not see-saw",
            ));
        }
        if self.dimension < 2 {
            return Err(domain(format!("dimension {} < 2", self.dimension)));
        }
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(domain("restarts and max_iterations must be >= 1"));
        }
        if !(self.tol > 0.0) {
            return Err(domain("tol must be positive"));
        }
        Ok(())
    }
}

/// Independent, reproducible stream `stream` of the generator seeded by `seed`.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

fn random_signs<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

fn random_involution<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let v = random_unitary(dim, rng);
    spectral(&v, &random_signs(dim, rng))
}

fn observable(m: CMatrix) -> Result<HermitianObservable> {
    HermitianObservable::involution(m)
}

/// A random set obeying the regime's commutation structure. `dimension` is
/// per tensor factor for the hidden-variable regime.
pub fn random_set<R: Rng>(regime: Regime, dimension: usize, rng: &mut R) -> Result<ObservableSet> {
    if dimension == 0 {
        return Err(domain("dimension must be positive"));
    }
    match regime {
        Regime::Classical => {
            let v = random_unitary(dimension, rng);
            let [a1, a2, b1, b2] = [(); 4].map(|_| spectral(&v, &random_signs(dimension, rng)));
            ObservableSet::new(
                regime,
                observable(a1)?,
                observable(a2)?,
                observable(b1)?,
                observable(b2)?,
            )
        }
        Regime::HiddenVariable => {
            let [a1, a2, b1, b2] = [(); 4].map(|_| random_involution(dimension, rng));
            ObservableSet::tensor(
                &observable(a1)?,
                &observable(a2)?,
                &observable(b1)?,
                &observable(b2)?,
            )
        }
        Regime::CopenhagenQm => {
            let [a1, a2, b1, b2] = [(); 4].map(|_| random_involution(dimension, rng));
            ObservableSet::new(
                regime,
                observable(a1)?,
                observable(a2)?,
                observable(b1)?,
                observable(b2)?,
            )
        }
    }
}

/// Largest eigenvalue of `B` over `samples` seeded random sets.
pub fn random_ceiling(regime: Regime, dimension: usize, samples: usize, seed: u64) -> Result<f64> {
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let set = random_set(regime, dimension, &mut rng_for(seed, i as u64))?;
            Ok(bell_operator(&set).top_eigenpair().0)
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Involution maximizing `tr(X·G)`: `G`'s eigenvalues replaced by their signs
/// (zero maps to +1).
fn sign_of(g: &CMatrix) -> CMatrix {
    let h = (g + g.adjoint()).scale(0.5);
    let (values, vectors) = hermitian_eigen(&h);
    let signs: Vec<f64> = values
        .iter()
        .map(|&l| if l < 0.0 { -1.0 } else { 1.0 })
        .collect();
    spectral(&vectors, &signs)
}

struct Restart {
    value: f64,
    converged: bool,
    history: Vec<f64>,
    locals: [CMatrix; 4],
    state: CVector,
}

/// Bell operator straight from the working matrices, skipping validation.
fn working_operator(regime: Regime, locals: &[CMatrix; 4]) -> BellOperator {
    let [a1, a2, b1, b2] = locals;
    let m = match regime {
        Regime::HiddenVariable => a1.kronecker(&(b1 + b2)) + a2.kronecker(&(b1 - b2)),
        _ => {
            let sym = |x: &CMatrix, y: &CMatrix| (x * y + y * x).scale(0.5);
            sym(a1, b1) + sym(a1, b2) + sym(a2, b1) - sym(a2, b2)
        }
    };
    BellOperator {
        matrix: (&m + m.adjoint()).scale(0.5),
    }
}

fn sweep(regime: Regime, locals: &mut [CMatrix; 4], psi: &CVector) {
    match regime {
        Regime::HiddenVariable => {
            // ψ reshaped so that ⟨ψ|X⊗Y|ψ⟩ = tr(X · Ψ Yᵀ Ψ†) = tr(Y · (Ψ† X Ψ)ᵀ).
            let d = locals[0].nrows();
            let big_psi = CMatrix::from_fn(d, d, |i, j| psi[i * d + j]);
            let on_a = |y: CMatrix| &big_psi * y.transpose() * big_psi.adjoint();
            let on_b = |x: CMatrix| (big_psi.adjoint() * x * &big_psi).transpose();
            let (b1, b2) = (locals[2].clone(), locals[3].clone());
            locals[0] = sign_of(&on_a(&b1 + &b2));
            locals[1] = sign_of(&on_a(&b1 - &b2));
            let (a1, a2) = (locals[0].clone(), locals[1].clone());
            locals[2] = sign_of(&on_b(&a1 + &a2));
            locals[3] = sign_of(&on_b(&a1 - &a2));
        }
        _ => {
            // ⟨(XY + YX)/2⟩ = tr(X · (wψ† + ψw†)/2) with w = Yψ.
            let gradient = |y: CMatrix| {
                let w = y * psi;
                (&w * psi.adjoint() + psi * w.adjoint()).scale(0.5)
            };
            let (b1, b2) = (locals[2].clone(), locals[3].clone());
            locals[0] = sign_of(&gradient(&b1 + &b2));
            locals[1] = sign_of(&gradient(&b1 - &b2));
            let (a1, a2) = (locals[0].clone(), locals[1].clone());
            locals[2] = sign_of(&gradient(&a1 + &a2));
            locals[3] = sign_of(&gradient(&a1 - &a2));
        }
    }
}

fn run_restart(cfg: &SeesawConfig, index: usize) -> Restart {
    let mut rng = rng_for(cfg.seed, index as u64);
    let mut locals = [(); 4].map(|_| random_involution(cfg.dimension, &mut rng));
    let (mut value, mut state) = working_operator(cfg.regime, &locals).top_eigenpair();
    let mut history = vec![value];
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        sweep(cfg.regime, &mut locals, &state);
        let (next, next_state) = working_operator(cfg.regime, &locals).top_eigenpair();
        history.push(next);
        let gain = next - value;
        value = next;
        state = next_state;
        if gain < cfg.tol {
            converged = true;
            break;
        }
    }
    Restart {
        value,
        converged,
        history,
        locals,
        state,
    }
}

/// Best `⟨B⟩` over `cfg.restarts` see-saw runs from random involutions.
///
/// Restarts run in parallel; the reduction keeps the largest value with ties
/// going to the lowest restart index.
pub fn seesaw_max(cfg: &SeesawConfig) -> Result<BoundEstimate> {
    cfg.validate()?;
    let runs: Vec<Restart> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(cfg, i))
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one restart");

    let [a1, a2, b1, b2] = best.locals.map(HermitianObservable::involution);
    let (a1, a2, b1, b2) = (a1?, a2?, b1?, b2?);
    let set = match cfg.regime {
        Regime::HiddenVariable => ObservableSet::tensor(&a1, &a2, &b1, &b2)?,
        regime => ObservableSet::new(regime, a1, a2, b1, b2)?,
    };
    let state = best.state.normalize();
    Ok(BoundEstimate {
        regime: cfg.regime,
        attained: best.value,
        limit: cfg.regime.analytic_limit(),
        dimension: cfg.dimension,
        restarts: cfg.restarts,
        converged: best.converged,
        seed: cfg.seed,
        witness: Witness { set, state },
        history: best.history,
    })
}
