//! The CHSH Bell operator `B = a1·b1 + a1·b2 + a2·b1 − a2·b2` and its
//! maximal expectation under three commutation structures:
//!
//! * [`Regime::Classical`]: all four observables commute (limit 2),
//! * [`Regime::HiddenVariable`]: the a-side and b-side act on different
//!   tensor factors (limit 2√2),
//! * [`Regime::CopenhagenQm`]: no commutation constraint (claimed limit 2√3).
//!
//! Products of non-commuting observables are replaced by their symmetrized
//! (Hermitian) part `(ab + ba)/2`.

mod seesaw;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use seesaw::{random_ceiling, random_set, random_unitary, seesaw_max, SeesawConfig};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for Hermiticity, spectrum and commutator checks.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "classical")]
    Classical,
    #[serde(rename = "hidden-variable")]
    HiddenVariable,
    #[serde(rename = "copenhagen")]
    CopenhagenQm,
}

impl Regime {
    /// The ceiling quoted for each regime: 2, 2√2, 2√3.
    pub fn analytic_limit(self) -> f64 {
        match self {
            Regime::Classical => 2.0,
            Regime::HiddenVariable => 2.0 * std::f64::consts::SQRT_2,
            Regime::CopenhagenQm => 2.0 * 3f64.sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Classical => "classical",
            Regime::HiddenVariable => "hidden-variable",
            Regime::CopenhagenQm => "copenhagen",
        }
    }
}

/// A Hermitian matrix with spectrum in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable {
    matrix: CMatrix,
}

impl HermitianObservable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(domain("observable must be a non-empty square matrix"));
        }
        if (&matrix - matrix.adjoint()).norm() > STRUCTURE_TOL {
            return Err(domain("observable is not Hermitian"));
        }
        let spectrum = hermitian_eigen(&matrix).0;
        if spectrum.iter().any(|&l| l.abs() > 1.0 + STRUCTURE_TOL) {
            return Err(domain("observable spectrum leaves [-1, 1]"));
        }
        Ok(HermitianObservable { matrix })
    }

    /// An observable that additionally squares to the identity.
    pub fn involution(matrix: CMatrix) -> Result<Self> {
        let o = Self::new(matrix)?;
        if !o.is_involution() {
            return Err(domain("observable does not square to the identity"));
        }
        Ok(o)
    }

    /// `basis · diag(signs) · basis†` for a unitary `basis`.
    pub fn from_signs(basis: &CMatrix, signs: &[f64]) -> Result<Self> {
        if signs.len() != basis.ncols() || signs.iter().any(|s| s.abs() != 1.0) {
            return Err(domain("signs must be ±1, one per basis vector"));
        }
        Self::involution(spectral(basis, signs))
    }

    pub fn identity(dimension: usize) -> Self {
        HermitianObservable {
            matrix: CMatrix::identity(dimension, dimension),
        }
    }

    pub fn pauli_x() -> Self {
        HermitianObservable {
            matrix: real_matrix(2, &[0.0, 1.0, 1.0, 0.0]),
        }
    }

    pub fn pauli_z() -> Self {
        HermitianObservable {
            matrix: real_matrix(2, &[1.0, 0.0, 0.0, -1.0]),
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_involution(&self) -> bool {
        let n = self.dimension();
        (&self.matrix * &self.matrix - CMatrix::identity(n, n)).norm() <= STRUCTURE_TOL
    }

    /// `self ⊗ I_dim`.
    pub fn tensor_identity(&self, dim: usize) -> Self {
        HermitianObservable {
            matrix: self.matrix.kronecker(&CMatrix::identity(dim, dim)),
        }
    }

    /// `I_dim ⊗ self`.
    pub fn identity_tensor(&self, dim: usize) -> Self {
        HermitianObservable {
            matrix: CMatrix::identity(dim, dim).kronecker(&self.matrix),
        }
    }

    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }
}

/// Four observables with a declared commutation structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet {
    regime: Regime,
    a1: HermitianObservable,
    a2: HermitianObservable,
    b1: HermitianObservable,
    b2: HermitianObservable,
}

impl ObservableSet {
    /// Validates dimensions and the commutators the regime requires.
    pub fn new(
        regime: Regime,
        a1: HermitianObservable,
        a2: HermitianObservable,
        b1: HermitianObservable,
        b2: HermitianObservable,
    ) -> Result<Self> {
        let d = a1.dimension();
        if [&a2, &b1, &b2].iter().any(|o| o.dimension() != d) {
            return Err(domain("observables have mismatched dimensions"));
        }
        let set = ObservableSet {
            regime,
            a1,
            a2,
            b1,
            b2,
        };
        let pairs: &[(&HermitianObservable, &HermitianObservable)] = match regime {
            Regime::Classical => &[
                (&set.a1, &set.a2),
                (&set.b1, &set.b2),
                (&set.a1, &set.b1),
                (&set.a1, &set.b2),
                (&set.a2, &set.b1),
                (&set.a2, &set.b2),
            ],
            Regime::HiddenVariable => &[
                (&set.a1, &set.b1),
                (&set.a1, &set.b2),
                (&set.a2, &set.b1),
                (&set.a2, &set.b2),
            ],
            Regime::CopenhagenQm => &[],
        };
        for (x, y) in pairs {
            if commutator_norm(x, y) > STRUCTURE_TOL {
                return Err(domain(format!(
                    "observables do not satisfy the {} commutation structure",
                    regime.name()
                )));
            }
        }
        Ok(set)
    }

    /// Hidden-variable set from local observables: `a_j ⊗ I` and `I ⊗ b_k`.
    pub fn tensor(
        a1: &HermitianObservable,
        a2: &HermitianObservable,
        b1: &HermitianObservable,
        b2: &HermitianObservable,
    ) -> Result<Self> {
        let (da, db) = (a1.dimension(), b1.dimension());
        if a2.dimension() != da || b2.dimension() != db {
            return Err(domain("local observables have mismatched dimensions"));
        }
        Self::new(
            Regime::HiddenVariable,
            a1.tensor_identity(db),
            a2.tensor_identity(db),
            b1.identity_tensor(da),
            b2.identity_tensor(da),
        )
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn dimension(&self) -> usize {
        self.a1.dimension()
    }

    /// `[a1, a2, b1, b2]`.
    pub fn observables(&self) -> [&HermitianObservable; 4] {
        [&self.a1, &self.a2, &self.b1, &self.b2]
    }
}

fn commutator_norm(x: &HermitianObservable, y: &HermitianObservable) -> f64 {
    (&x.matrix * &y.matrix - &y.matrix * &x.matrix).norm()
}

/// The Hermitian Bell operator of an observable set.
#[derive(Debug, Clone, PartialEq)]
pub struct BellOperator {
    matrix: CMatrix,
}

impl BellOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    /// Largest eigenvalue and a unit eigenvector for it.
    pub fn top_eigenpair(&self) -> (f64, CVector) {
        let (values, vectors) = hermitian_eigen(&self.matrix);
        let k = values.len() - 1;
        (values[k], vectors.column(k).into_owned())
    }
}

/// Build `a1·b1 + a1·b2 + a2·b1 − a2·b2`.
///
/// For the commuting regimes the products are used directly; for
/// [`Regime::CopenhagenQm`] each product `ab` becomes `(ab + ba)/2`.
pub fn bell_operator(set: &ObservableSet) -> BellOperator {
    let (a1, a2, b1, b2) = (
        &set.a1.matrix,
        &set.a2.matrix,
        &set.b1.matrix,
        &set.b2.matrix,
    );
    let product = |x: &CMatrix, y: &CMatrix| -> CMatrix {
        match set.regime {
            Regime::CopenhagenQm => (x * y + y * x).scale(0.5),
            _ => x * y,
        }
    };
    let m = product(a1, b1) + product(a1, b2) + product(a2, b1) - product(a2, b2);
    // Rounding in the products leaves an anti-Hermitian residue at the
    // 1e-16 level; drop it.
    let matrix = (&m + m.adjoint()).scale(0.5);
    BellOperator { matrix }
}

/// `⟨state| B |state⟩` for a unit `state`.
pub fn expectation(set: &ObservableSet, state: &CVector) -> Result<f64> {
    if state.len() != set.dimension() {
        return Err(domain(format!(
            "state has dimension {}, observables {}",
            state.len(),
            set.dimension()
        )));
    }
    if (state.norm() - 1.0).abs() > 1e-12 {
        return Err(domain(format!("state norm {} is not 1", state.norm())));
    }
    Ok(rayleigh(&bell_operator(set).matrix, state))
}

pub(crate) fn rayleigh(m: &CMatrix, v: &CVector) -> f64 {
    v.dotc(&(m * v)).re
}

/// Ascending eigenvalues and matching eigenvector columns.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `basis · diag(diagonal) · basis†`.
pub(crate) fn spectral(basis: &CMatrix, diagonal: &[f64]) -> CMatrix {
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        diagonal.len(),
        diagonal.iter().map(|&s| Complex64::new(s, 0.0)),
    ));
    basis * d * basis.adjoint()
}

fn real_matrix(n: usize, row_major: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(n, n, row_major.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// One deterministic ±1 assignment to `(a1, a2, b1, b2)` and its CHSH value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalCase {
    pub values: [i32; 4],
    pub chsh: i32,
}

/// All 16 deterministic assignments, starting from all `+1`.
pub fn classical_cases() -> Vec<ClassicalCase> {
    (0..16u32)
        .map(|mask| {
            let v = |bit: u32| if mask & (1 << bit) == 0 { 1 } else { -1 };
            let values = [v(0), v(1), v(2), v(3)];
            let [a1, a2, b1, b2] = values;
            ClassicalCase {
                values,
                chsh: a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2,
            }
        })
        .collect()
}

/// Result of a bound search for one regime.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEstimate {
    pub regime: Regime,
    pub attained: f64,
    pub limit: f64,
    /// Per tensor factor for the hidden-variable regime, total otherwise.
    pub dimension: usize,
    pub restarts: usize,
    pub converged: bool,
    pub seed: u64,
    pub witness: Witness,
    /// Objective after each see-saw sweep of the winning restart.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub set: ObservableSet,
    pub state: CVector,
}

/// Exhaustive maximum over the 16 deterministic assignments. Always 2.
pub fn chsh_classical_max() -> BoundEstimate {
    let cases = classical_cases();
    let best = cases
        .iter()
        .fold(cases[0], |acc, c| if c.chsh > acc.chsh { *c } else { acc });
    let scalar = |v: i32| HermitianObservable {
        matrix: CMatrix::from_element(1, 1, Complex64::new(v as f64, 0.0)),
    };
    let [a1, a2, b1, b2] = best.values.map(scalar);
    let set = ObservableSet {
        regime: Regime::Classical,
        a1,
        a2,
        b1,
        b2,
    };
    BoundEstimate {
        regime: Regime::Classical,
        attained: best.chsh as f64,
        limit: Regime::Classical.analytic_limit(),
        dimension: 1,
        restarts: 1,
        converged: true,
        seed: 0,
        witness: Witness {
            set,
            state: CVector::from_element(1, Complex64::new(1.0, 0.0)),
        },
        history: vec![best.chsh as f64],
    }
}

#[derive(Serialize)]
struct BoundJson {
    regime: Regime,
    attained: f64,
    limit: f64,
    dimension: usize,
    restarts: usize,
    converged: bool,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
}

type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Serialize)]
struct WitnessJson {
    a1: ComplexRows,
    a2: ComplexRows,
    b1: ComplexRows,
    b2: ComplexRows,
    state: Vec<[f64; 2]>,
}

fn rows(m: &CMatrix) -> ComplexRows {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

impl BoundEstimate {
    /// JSON document with keys `regime, attained, limit, dimension,
    /// restarts, converged, seed`, plus `witness` when requested.
    pub fn to_json(&self, with_witness: bool) -> serde_json::Result<String> {
        let witness = with_witness.then(|| {
            let [a1, a2, b1, b2] = self.witness.set.observables().map(|o| rows(o.matrix()));
            WitnessJson {
                a1,
                a2,
                b1,
                b2,
                state: self.witness.state.iter().map(|z| [z.re, z.im]).collect(),
            }
        });
        serde_json::to_string_pretty(&BoundJson {
            regime: self.regime,
            attained: self.attained,
            limit: self.limit,
            dimension: self.dimension,
            restarts: self.restarts,
            converged: self.converged,
            seed: self.seed,
            witness,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn chsh_optimal_local() -> [HermitianObservable; 4] {
        let z = HermitianObservable::pauli_z().matrix;
        let x = HermitianObservable::pauli_x().matrix;
        let plus = HermitianObservable::involution((&z + &x).scale(1.0 / SQRT_2)).unwrap();
        let minus = HermitianObservable::involution((&z - &x).scale(1.0 / SQRT_2)).unwrap();
        [
            HermitianObservable::pauli_z(),
            HermitianObservable::pauli_x(),
            plus,
            minus,
        ]
    }

    #[test]
    fn identity_set_gives_twice_identity() {
        let id = HermitianObservable::identity(3);
        for regime in [
            Regime::Classical,
            Regime::HiddenVariable,
            Regime::CopenhagenQm,
        ] {
            let set =
                ObservableSet::new(regime, id.clone(), id.clone(), id.clone(), id.clone()).unwrap();
            let b = bell_operator(&set);
            assert!((b.matrix() - CMatrix::identity(3, 3).scale(2.0)).norm() < 1e-15);
            let psi = CVector::from_fn(3, |i, _| {
                Complex64::new(1.0, i as f64).scale(1.0 / 8f64.sqrt())
            });
            assert!((expectation(&set, &psi).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_optimal_configuration_reaches_tsirelson() {
        let [a1, a2, b1, b2] = chsh_optimal_local();
        let set = ObservableSet::tensor(&a1, &a2, &b1, &b2).unwrap();
        let b = bell_operator(&set);
        // Here B = √2 (z⊗z + x⊗x), so (|00⟩ + |11⟩)/√2 has eigenvalue 2√2
        // without any eigen-solve.
        let s = 1.0 / SQRT_2;
        let v_top = CVector::from_vec(vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ]);
        let bv = b.matrix() * &v_top;
        assert!((bv - v_top.scale(2.0 * SQRT_2)).norm() < 1e-12);
        assert!((expectation(&set, &v_top).unwrap() - 2.0 * SQRT_2).abs() < 1e-9);
        let spectrum = b.eigenvalues();
        assert!((spectrum[3] - 2.0 * SQRT_2).abs() < 1e-12);
        let (top, vec) = b.top_eigenpair();
        assert!((top - 2.0 * SQRT_2).abs() < 1e-12);
        assert!((expectation(&set, &vec).unwrap() - top).abs() < 1e-9);
    }

    #[test]
    fn classical_repeated_involutions_give_plus_minus_two() {
        let u = CMatrix::identity(4, 4);
        let a = HermitianObservable::from_signs(&u, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        let c = HermitianObservable::from_signs(&u, &[1.0, 1.0, -1.0, -1.0]).unwrap();
        let set = ObservableSet::new(Regime::Classical, a.clone(), c.clone(), a, c).unwrap();
        for l in bell_operator(&set).eigenvalues() {
            assert!((l.abs() - 2.0).abs() < 1e-12, "{l}");
        }
    }

    #[test]
    fn classical_enumeration() {
        let cases = classical_cases();
        assert_eq!(cases.len(), 16);
        assert!(cases.iter().all(|c| c.chsh.abs() == 2));
        let est = chsh_classical_max();
        assert_eq!(est.attained, 2.0);
        assert_eq!(est.limit, 2.0);
        assert_eq!(cases[0].values, [1, 1, 1, 1]);
        let witness: Vec<f64> = est
            .witness
            .set
            .observables()
            .iter()
            .map(|o| o.matrix()[(0, 0)].re)
            .collect();
        assert_eq!(witness, vec![1.0; 4]);
    }

    #[test]
    fn structure_checks() {
        let [z, x, ..] = chsh_optimal_local();
        // z and x anticommute: fine for Copenhagen only.
        assert!(ObservableSet::new(
            Regime::CopenhagenQm,
            z.clone(),
            x.clone(),
            z.clone(),
            x.clone()
        )
        .is_ok());
        assert!(ObservableSet::new(
            Regime::HiddenVariable,
            z.clone(),
            x.clone(),
            z.clone(),
            x.clone()
        )
        .is_err());
        assert!(ObservableSet::new(
            Regime::Classical,
            z.clone(),
            z.clone(),
            z.clone(),
            x.clone()
        )
        .is_err());
        let big = HermitianObservable::identity(4);
        assert!(ObservableSet::new(Regime::CopenhagenQm, z.clone(), z.clone(), z, big).is_err());
    }

    #[test]
    fn observable_validation() {
        let not_hermitian = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert!(HermitianObservable::new(not_hermitian).is_err());
        assert!(HermitianObservable::new(CMatrix::identity(2, 2).scale(1.5)).is_err());
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(HermitianObservable::new(half.clone()).is_ok());
        assert!(HermitianObservable::involution(half).is_err());
    }

    #[test]
    fn expectation_rejects_bad_states() {
        let id = HermitianObservable::identity(2);
        let set =
            ObservableSet::new(Regime::Classical, id.clone(), id.clone(), id.clone(), id).unwrap();
        let unnormalized = CVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(expectation(&set, &unnormalized).is_err());
        let wrong_dim = CVector::from_element(3, Complex64::new(1.0 / 3f64.sqrt(), 0.0));
        assert!(expectation(&set, &wrong_dim).is_err());
    }

    #[test]
    fn bound_json_has_exact_keys() {
        let est = chsh_classical_max();
        let v: serde_json::Value = serde_json::from_str(&est.to_json(false).unwrap()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "attained",
                "converged",
                "dimension",
                "limit",
                "regime",
                "restarts",
                "seed"
            ]
        );
        assert_eq!(v["regime"], "classical");
        let w: serde_json::Value = serde_json::from_str(&est.to_json(true).unwrap()).unwrap();
        assert_eq!(w["witness"]["a1"], serde_json::json!([[[1.0, 0.0]]]));
        assert_eq!(w["witness"]["state"], serde_json::json!([[1.0, 0.0]]));
    }
}
