//! Native trapped-ion gates and the flat circuit representation.
//!
//! The native set is the single-qubit rotation `R(θ, φ)` about an axis in
//! the XY plane and the Ising interaction `XX(χ) = exp(−iχ X⊗X)`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{self, StateVector};

pub type Unitary = DMatrix<Complex64>;

/// `R(θ, φ) = [[cos θ/2, −i e^{−iφ} sin θ/2], [−i e^{iφ} sin θ/2, cos θ/2]]`.
pub fn r_matrix(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (s, c) = (theta / 2.0).sin_cos();
    let mi = Complex64::new(0.0, -1.0);
    Matrix2::new(
        Complex64::new(c, 0.0),
        mi * Complex64::from_polar(1.0, -phi) * s,
        mi * Complex64::from_polar(1.0, phi) * s,
        Complex64::new(c, 0.0),
    )
}

/// `XX(χ)`: `cos χ` on the diagonal, `−i sin χ` on the anti-diagonal.
pub fn xx_matrix(chi: f64) -> Matrix4<Complex64> {
    let d = Complex64::new(chi.cos(), 0.0);
    let a = Complex64::new(0.0, -chi.sin());
    let o = Complex64::new(0.0, 0.0);
    Matrix4::new(d, o, o, a, o, d, a, o, o, a, d, o, a, o, o, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationGate {
    pub q: usize,
    pub theta: f64,
    pub phi: f64,
}

impl RotationGate {
    pub fn rx(q: usize, theta: f64) -> Self {
        Self { q, theta, phi: 0.0 }
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self { q, theta, phi: FRAC_PI_2 }
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        r_matrix(self.theta, self.phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XXGate {
    pub qa: usize,
    pub qb: usize,
    pub chi: f64,
}

impl XXGate {
    pub fn matrix(&self) -> Matrix4<Complex64> {
        xx_matrix(self.chi)
    }

    /// Unordered pair key `(min, max)`.
    pub fn pair(&self) -> (usize, usize) {
        (self.qa.min(self.qb), self.qa.max(self.qb))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gate {
    R(RotationGate),
    XX(XXGate),
}

impl Gate {
    fn max_qubit(&self) -> usize {
        match self {
            Gate::R(r) => r.q,
            Gate::XX(x) => x.qa.max(x.qb),
        }
    }
}

/// Ordered list of native gates over a fixed register width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        Circuit::from_gates(raw.n_qubits, raw.gates)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.n_qubits {
            return Err(Error::QubitIndex { index: gate.max_qubit(), n: self.n_qubits });
        }
        if !gate_is_finite(&gate) {
            return Err(Error::Parameter("non-finite gate angle".into()));
        }
        if let Gate::XX(x) = gate {
            if x.qa == x.qb {
                return Err(Error::RepeatedQubit(x.qa));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn r(&mut self, q: usize, theta: f64, phi: f64) -> Result<&mut Self> {
        self.push(Gate::R(RotationGate { q, theta, phi }))?;
        Ok(self)
    }

    pub fn rx(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.r(q, theta, 0.0)
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> Result<&mut Self> {
        self.r(q, theta, FRAC_PI_2)
    }

    pub fn xx(&mut self, qa: usize, qb: usize, chi: f64) -> Result<&mut Self> {
        self.push(Gate::XX(XXGate { qa, qb, chi }))?;
        Ok(self)
    }

    /// Appends all gates of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Dimension { expected: self.n_qubits, actual: other.n_qubits });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        let mut out = self.widened(self.n_qubits.max(other.n_qubits))?;
        out.append(other)?;
        Ok(out)
    }

    /// Same gates on a register of `n` qubits (`n` ≥ current width).
    pub fn widened(&self, n: usize) -> Result<Circuit> {
        if n < self.n_qubits {
            return Err(Error::Dimension { expected: self.n_qubits, actual: n });
        }
        Ok(Circuit { n_qubits: n, gates: self.gates.clone() })
    }

    pub fn xx_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::XX(_))).count()
    }

    /// Unordered qubit pairs touched by an XX gate.
    pub fn xx_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::XX(x) => Some(x.pair()),
                Gate::R(_) => None,
            })
            .collect()
    }

    /// Absolute XX angles in gate order.
    pub fn xx_magnitudes(&self) -> Vec<f64> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::XX(x) => Some(x.chi.abs()),
                Gate::R(_) => None,
            })
            .collect()
    }

    pub fn run(&self, initial: &StateVector) -> Result<StateVector> {
        if initial.n_qubits() != self.n_qubits {
            return Err(Error::Dimension { expected: self.n_qubits, actual: initial.n_qubits() });
        }
        let mut amps = initial.clone().into_amplitudes();
        for op in self.compile() {
            op.apply(&mut amps, self.n_qubits);
        }
        Ok(StateVector::from_raw(self.n_qubits, amps))
    }

    /// Full unitary; column `k` is the output for basis input `k`.
    pub fn unitary(&self) -> Result<Unitary> {
        state::check_qubits(self.n_qubits)?;
        let dim = 1usize << self.n_qubits;
        let ops = self.compile();
        let mut u = Unitary::zeros(dim, dim);
        for k in 0..dim {
            let mut amps = StateVector::basis_index(self.n_qubits, k).into_amplitudes();
            for op in &ops {
                op.apply(&mut amps, self.n_qubits);
            }
            for (r, a) in amps.into_iter().enumerate() {
                u[(r, k)] = a;
            }
        }
        Ok(u)
    }

    pub(crate) fn compile(&self) -> Vec<CompiledGate> {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::R(r) => CompiledGate::One { q: r.q, m: r.matrix() },
                Gate::XX(x) => CompiledGate::Two { qa: x.qa, qb: x.qb, m: x.matrix() },
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Circuit> {
        Ok(serde_json::from_str(s)?)
    }
}

fn gate_is_finite(g: &Gate) -> bool {
    match g {
        Gate::R(r) => r.theta.is_finite() && r.phi.is_finite(),
        Gate::XX(x) => x.chi.is_finite(),
    }
}

/// Runs `circuit` on `initial`.
pub fn run(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    circuit.run(initial)
}

pub fn circuit_unitary(circuit: &Circuit) -> Result<Unitary> {
    circuit.unitary()
}

pub fn xx_count(circuit: &Circuit) -> usize {
    circuit.xx_count()
}

#[derive(Debug, Clone)]
pub(crate) enum CompiledGate {
    One { q: usize, m: Matrix2<Complex64> },
    Two { qa: usize, qb: usize, m: Matrix4<Complex64> },
}

impl CompiledGate {
    #[inline]
    pub(crate) fn apply(&self, amps: &mut [Complex64], n: usize) {
        match self {
            CompiledGate::One { q, m } => state::apply_one_qubit_in_place(amps, n, *q, m),
            CompiledGate::Two { qa, qb, m } => state::apply_two_qubit_in_place(amps, n, *qa, *qb, m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::BasisLabel;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_dev2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
        (a - b).map(|z| z.norm()).max()
    }

    #[test]
    fn r_matrix_values() {
        assert!(max_dev2(&r_matrix(0.0, 1.234), &Matrix2::identity()) < 1e-15);
        let x = Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0));
        assert!(max_dev2(&r_matrix(PI, 0.0), &x) < 1e-15);
        let col = r_matrix(FRAC_PI_2, FRAC_PI_2) * nalgebra::Vector2::new(c(1.0, 0.0), c(0.0, 0.0));
        assert!((col[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((col[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn xx_matrix_values() {
        assert!((xx_matrix(0.0) - Matrix4::identity()).map(|z| z.norm()).max() < 1e-15);
        let sq = xx_matrix(FRAC_PI_8) * xx_matrix(FRAC_PI_8);
        assert!((sq - xx_matrix(FRAC_PI_4)).map(|z| z.norm()).max() < 1e-12);
        let m = xx_matrix(FRAC_PI_4);
        assert!((m[(3, 0)] - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn native_matrices_are_unitary() {
        for &(t, p) in &[(0.3, -1.1), (PI, 0.0), (-2.5, 4.0), (7.0, 0.5)] {
            let m = r_matrix(t, p);
            assert!((m.adjoint() * m - Matrix2::identity()).map(|z| z.norm()).max() < 1e-12);
        }
        for &chi in &[FRAC_PI_4, -FRAC_PI_4, FRAC_PI_8, -FRAC_PI_8, 0.77] {
            let m = xx_matrix(chi);
            assert!((m.adjoint() * m - Matrix4::identity()).map(|z| z.norm()).max() < 1e-12);
        }
    }

    #[test]
    fn run_basics() {
        let zero = StateVector::zero(2).unwrap();
        let empty = Circuit::new(2);
        assert_eq!(empty.run(&zero).unwrap(), zero);
        let mut c1 = Circuit::new(2);
        c1.xx(0, 1, FRAC_PI_4).unwrap();
        let out = c1.run(&zero).unwrap();
        assert!((out.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[3] - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(c1.run(&StateVector::zero(3).unwrap()).is_err());
    }

    #[test]
    fn unitary_basics() {
        let u = Circuit::new(2).unitary().unwrap();
        assert!((u - Unitary::identity(4, 4)).map(|z| z.norm()).max() < 1e-15);
        let mut c1 = Circuit::new(1);
        c1.rx(0, PI).unwrap();
        let u = c1.unitary().unwrap();
        assert!((u[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(u[(0, 0)].norm() < 1e-15);
        assert!(Circuit::new(7).unitary().is_err());
    }

    #[test]
    fn push_validation() {
        let mut c1 = Circuit::new(2);
        assert!(c1.rx(2, 1.0).is_err());
        assert!(c1.xx(1, 1, 1.0).is_err());
        assert!(c1.ry(0, f64::NAN).is_err());
        assert_eq!(c1.xx_count(), 0);
        c1.xx(0, 1, 0.1).unwrap().rx(1, 0.2).unwrap().xx(1, 0, 0.3).unwrap();
        assert_eq!(c1.xx_count(), 2);
        assert_eq!(c1.xx_pairs().len(), 1);
    }

    #[test]
    fn json_schema_shape() {
        let mut c1 = Circuit::new(2);
        c1.r(0, 0.5, 0.25).unwrap().xx(0, 1, -FRAC_PI_8).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c1.to_json().unwrap()).unwrap();
        assert_eq!(v["n_qubits"], 2);
        assert_eq!(v["gates"][0]["kind"], "R");
        assert_eq!(v["gates"][0]["theta"], 0.5);
        assert_eq!(v["gates"][1]["kind"], "XX");
        assert_eq!(v["gates"][1]["qb"], 1);
        assert_eq!(Circuit::from_json(&c1.to_json().unwrap()).unwrap(), c1);
        let bad = r#"{"n_qubits":1,"gates":[{"kind":"XX","qa":0,"qb":1,"chi":0.1}]}"#;
        assert!(Circuit::from_json(bad).is_err());
    }

    #[test]
    fn basis_columns_match_run() {
        let mut c1 = Circuit::new(3);
        c1.ry(0, 0.4).unwrap().xx(0, 2, 0.9).unwrap().r(1, 1.3, 0.2).unwrap();
        let u = c1.unitary().unwrap();
        let out = c1.run(&StateVector::init_basis(3, &BasisLabel::parse("011").unwrap()).unwrap()).unwrap();
        for r in 0..8 {
            assert!((u[(r, 3)] - out.amplitudes()[r]).norm() < 1e-15);
        }
    }
}
