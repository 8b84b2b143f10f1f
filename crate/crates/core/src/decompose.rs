//! Lowering of CNOT, CZ, CCZ, Toffoli-3, Toffoli-4 and `Rz` onto the
//! native `R`/`XX` gate set, plus equivalence checking, rotation fusion and
//! Toffoli-n cost formulas.
//!
//! Every two-qubit construction reduces to a single Ising term. With
//! `V = Ry(β)` we have `V X V† = ε Z` where `ε = −1` for `β = π/2` and
//! `ε = +1` for `β = −π/2`, so conjugating `XX(χ)` on one or both qubits
//! yields `exp(−iχ ε Z⊗X)` or `exp(−iχ ε_a ε_b Z⊗Z)`. The sign of `χ` is a
//! property of the ion pair; the `ε` choices absorb it, so every template
//! is exact for either sign.
//!
//! Derived angles:
//!
//! * `Rz(θ)`: `Ry(−π/2) · Rx(−θ) · Ry(π/2)` in time order.
//! * `CNOT(c, t) ∝ Rz_c(π/2) Rx_t(π/2) exp(iπ/4 Z_c X_t)`; the `Rz_c` is
//!   folded through the conjugation into `Rx(ε π/2)`, giving
//!   `Ry_c(−β), Rx_t(π/2), XX(s π/4), Rx_c(ε π/2), Ry_c(β)` with `ε = −s`.
//! * Controlled phase `diag(1,1,1,e^{iλ}) ∝ Rz_a(λ/2) Rz_b(λ/2) exp(iλ/4 Z_a Z_b)`,
//!   one `XX(±λ/4)`; CZ is `λ = π`, controlled-S is `λ = π/2`.
//! * CCZ: `CS(b,c), CNOT(a,b), CS†(b,c), CNOT(a,b), CS(a,c)`, i.e. three
//!   `XX(±π/8)` and two `XX(±π/4)`.
//! * Toffoli-3: CCZ with the target conjugated by `Ry(∓π/2)`.
//! * Toffoli-4: a relative-phase Toffoli computes `c1∧c2` into the clean
//!   ancilla (3 CNOTs), a Toffoli-3 fires on `(ancilla, c3)`, and the
//!   relative-phase Toffoli (an involution up to global phase) uncomputes.
//!   `3 + 5 + 3 = 11` XX gates.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate, RotationGate, Unitary};
use crate::state::qubit_mask;

/// Per-ion-pair sign of `χ`. Pairs not listed default to `+1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignMap {
    signs: BTreeMap<(usize, usize), i8>,
}

impl SignMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, a: usize, b: usize, sign: i8) -> Self {
        self.set(a, b, sign);
        self
    }

    pub fn set(&mut self, a: usize, b: usize, sign: i8) {
        self.signs.insert((a.min(b), a.max(b)), if sign < 0 { -1 } else { 1 });
    }

    pub fn sign(&self, a: usize, b: usize) -> f64 {
        f64::from(*self.signs.get(&(a.min(b), a.max(b))).unwrap_or(&1))
    }

    /// Every `±1` assignment over `pairs`.
    pub fn all_assignments<I>(pairs: I) -> Vec<SignMap>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: Vec<_> = pairs.into_iter().collect();
        (0..1u32 << pairs.len())
            .map(|mask| {
                let mut m = SignMap::new();
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    m.set(a, b, if mask >> i & 1 == 1 { -1 } else { 1 });
                }
                m
            })
            .collect()
    }
}

fn ensure_distinct(qubits: &[usize]) -> Result<()> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(Error::RepeatedQubit(*q));
        }
    }
    Ok(())
}

fn width(qubits: &[usize]) -> usize {
    qubits.iter().max().map_or(0, |m| m + 1)
}

/// Angle `β` of the conjugating `Ry(β)` that maps `X` to `ε Z`.
fn z_basis(eps: f64) -> f64 {
    if eps < 0.0 {
        FRAC_PI_2
    } else {
        -FRAC_PI_2
    }
}

/// `Rz(θ)` as three rotations in the XY plane; equals `diag(1, e^{iθ})` up
/// to global phase.
pub fn rz_template(theta: f64, q: usize) -> Circuit {
    let mut c = Circuit::new(q + 1);
    push_rz(&mut c, q, theta);
    c
}

fn push_rz(c: &mut Circuit, q: usize, theta: f64) {
    c.ry(q, -FRAC_PI_2).and_then(|c| c.rx(q, -theta)).and_then(|c| c.ry(q, FRAC_PI_2)).expect("qubit in range");
}

fn push_cnot(c: &mut Circuit, control: usize, target: usize, signs: &SignMap) {
    let s = signs.sign(control, target);
    let eps = -s;
    let beta = z_basis(eps);
    c.ry(control, -beta).expect("qubit in range");
    c.rx(target, FRAC_PI_2).expect("qubit in range");
    c.xx(control, target, s * FRAC_PI_4).expect("qubit in range");
    c.rx(control, eps * FRAC_PI_2).expect("qubit in range");
    c.ry(control, beta).expect("qubit in range");
}

/// `diag(1, 1, 1, e^{iλ})` on `(a, b)` using one `XX(±|λ|/4)`.
fn push_controlled_phase(c: &mut Circuit, a: usize, b: usize, lambda: f64, signs: &SignMap) {
    let s = signs.sign(a, b);
    // exp(−i·angle·ZZ) with angle = −λ/4 realized by XX(s|angle|) and ε_a ε_b = sign(angle)·s.
    let angle = -lambda / 4.0;
    let sigma = angle.signum() * s;
    let eps_a = -1.0;
    let eps_b = -sigma;
    let (beta_a, beta_b) = (z_basis(eps_a), z_basis(eps_b));
    c.ry(a, -beta_a).expect("qubit in range");
    c.ry(b, -beta_b).expect("qubit in range");
    c.xx(a, b, s * angle.abs()).expect("qubit in range");
    c.rx(a, eps_a * lambda / 2.0).expect("qubit in range");
    c.rx(b, eps_b * lambda / 2.0).expect("qubit in range");
    c.ry(a, beta_a).expect("qubit in range");
    c.ry(b, beta_b).expect("qubit in range");
}

fn push_ccz(c: &mut Circuit, a: usize, b: usize, t: usize, signs: &SignMap) {
    push_controlled_phase(c, b, t, FRAC_PI_2, signs);
    push_cnot(c, a, b, signs);
    push_controlled_phase(c, b, t, -FRAC_PI_2, signs);
    push_cnot(c, a, b, signs);
    push_controlled_phase(c, a, t, FRAC_PI_2, signs);
}

fn push_toffoli3(c: &mut Circuit, c1: usize, c2: usize, t: usize, signs: &SignMap) {
    c.ry(t, -FRAC_PI_2).expect("qubit in range");
    push_ccz(c, c1, c2, t, signs);
    c.ry(t, FRAC_PI_2).expect("qubit in range");
}

/// Toffoli up to a diagonal phase, from three CNOTs.
fn push_relative_phase_toffoli(c: &mut Circuit, c1: usize, c2: usize, t: usize, signs: &SignMap) {
    c.ry(t, FRAC_PI_4).expect("qubit in range");
    push_cnot(c, c2, t, signs);
    c.ry(t, FRAC_PI_4).expect("qubit in range");
    push_cnot(c, c1, t, signs);
    c.ry(t, -FRAC_PI_4).expect("qubit in range");
    push_cnot(c, c2, t, signs);
    c.ry(t, -FRAC_PI_4).expect("qubit in range");
}

fn push_toffoli4(c: &mut Circuit, ctrl: [usize; 3], target: usize, ancilla: usize, signs: &SignMap) {
    push_relative_phase_toffoli(c, ctrl[0], ctrl[1], ancilla, signs);
    push_toffoli3(c, ancilla, ctrl[2], target, signs);
    push_relative_phase_toffoli(c, ctrl[0], ctrl[1], ancilla, signs);
}

pub fn cnot_template(control: usize, target: usize, signs: &SignMap) -> Result<Circuit> {
    ensure_distinct(&[control, target])?;
    let mut c = Circuit::new(width(&[control, target]));
    push_cnot(&mut c, control, target, signs);
    Ok(c)
}

pub fn cz_template(qa: usize, qb: usize, signs: &SignMap) -> Result<Circuit> {
    ensure_distinct(&[qa, qb])?;
    let mut c = Circuit::new(width(&[qa, qb]));
    push_controlled_phase(&mut c, qa, qb, PI, signs);
    Ok(c)
}

/// Controlled phase `diag(1,1,1,e^{iλ})` with a single `XX(±|λ|/4)`.
pub fn controlled_phase_template(qa: usize, qb: usize, lambda: f64, signs: &SignMap) -> Result<Circuit> {
    ensure_distinct(&[qa, qb])?;
    let mut c = Circuit::new(width(&[qa, qb]));
    push_controlled_phase(&mut c, qa, qb, lambda, signs);
    Ok(c)
}

pub fn ccz_template(qa: usize, qb: usize, qc: usize, signs: &SignMap) -> Result<Circuit> {
    ensure_distinct(&[qa, qb, qc])?;
    let mut c = Circuit::new(width(&[qa, qb, qc]));
    push_ccz(&mut c, qa, qb, qc, signs);
    Ok(c)
}

pub fn toffoli3_template(c1: usize, c2: usize, target: usize, signs: &SignMap) -> Result<Circuit> {
    ensure_distinct(&[c1, c2, target])?;
    let mut c = Circuit::new(width(&[c1, c2, target]));
    push_toffoli3(&mut c, c1, c2, target, signs);
    Ok(c)
}

/// Toffoli-3 up to a diagonal phase; the truth table is exact but output
/// phases are not.
pub fn relative_phase_toffoli_template(c1: usize, c2: usize, target: usize, signs: &SignMap) -> Result<Circuit> {
    ensure_distinct(&[c1, c2, target])?;
    let mut c = Circuit::new(width(&[c1, c2, target]));
    push_relative_phase_toffoli(&mut c, c1, c2, target, signs);
    Ok(c)
}

/// `C³(NOT)` with one clean ancilla. The ancilla must start in `|0⟩` and is
/// returned to `|0⟩`; any other ancilla input is unsupported.
pub fn toffoli4_template(
    c1: usize,
    c2: usize,
    c3: usize,
    target: usize,
    ancilla: usize,
    signs: &SignMap,
) -> Result<Circuit> {
    let qs = [c1, c2, c3, target, ancilla];
    ensure_distinct(&qs)?;
    let mut c = Circuit::new(width(&qs));
    push_toffoli4(&mut c, [c1, c2, c3], target, ancilla, signs);
    Ok(c)
}

/// Gates available as templates, with their role slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateTemplate {
    Cnot,
    Cz,
    Ccz,
    Toffoli3,
    Toffoli4,
}

impl GateTemplate {
    pub const ALL: [GateTemplate; 5] =
        [GateTemplate::Cnot, GateTemplate::Cz, GateTemplate::Ccz, GateTemplate::Toffoli3, GateTemplate::Toffoli4];

    pub fn name(&self) -> &'static str {
        match self {
            GateTemplate::Cnot => "cnot",
            GateTemplate::Cz => "cz",
            GateTemplate::Ccz => "ccz",
            GateTemplate::Toffoli3 => "toffoli3",
            GateTemplate::Toffoli4 => "toffoli4",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| Error::Parameter(format!("unknown gate {name:?}")))
    }

    /// Slot names in the order `build` expects qubits.
    pub fn slots(&self) -> &'static [&'static str] {
        match self {
            GateTemplate::Cnot => &["control", "target"],
            GateTemplate::Cz => &["a", "b"],
            GateTemplate::Ccz => &["a", "b", "c"],
            GateTemplate::Toffoli3 => &["c1", "c2", "target"],
            GateTemplate::Toffoli4 => &["c1", "c2", "c3", "target", "ancilla"],
        }
    }

    /// Qubits whose truth table is reported (everything but the ancilla).
    pub fn data_slots(&self) -> usize {
        match self {
            GateTemplate::Toffoli4 => 4,
            _ => self.slots().len(),
        }
    }

    pub fn build(&self, qubits: &[usize], signs: &SignMap) -> Result<Circuit> {
        if qubits.len() != self.slots().len() {
            return Err(Error::Dimension { expected: self.slots().len(), actual: qubits.len() });
        }
        let q = qubits;
        match self {
            GateTemplate::Cnot => cnot_template(q[0], q[1], signs),
            GateTemplate::Cz => cz_template(q[0], q[1], signs),
            GateTemplate::Ccz => ccz_template(q[0], q[1], q[2], signs),
            GateTemplate::Toffoli3 => toffoli3_template(q[0], q[1], q[2], signs),
            GateTemplate::Toffoli4 => toffoli4_template(q[0], q[1], q[2], q[3], q[4], signs),
        }
    }

    /// Canonical layout: slot `i` on qubit `i`.
    pub fn build_default(&self, signs: &SignMap) -> Result<Circuit> {
        let qs: Vec<usize> = (0..self.slots().len()).collect();
        self.build(&qs, signs)
    }

    /// Ideal action as a basis permutation over the data slots, in slot order.
    pub fn ideal_permutation(&self) -> Vec<usize> {
        let k = self.data_slots();
        let dim = 1usize << k;
        match self {
            GateTemplate::Cz | GateTemplate::Ccz => (0..dim).collect(),
            _ => (0..dim).map(|i| if i | 1 == dim - 1 { i ^ 1 } else { i }).collect(),
        }
    }

    /// Reference unitary on an `n`-qubit register with slots placed at
    /// `qubits`. For Toffoli-4 the ancilla slot is left untouched; compare
    /// with [`restrict_clean_ancillas`] applied to the template.
    pub fn reference_unitary(&self, qubits: &[usize], n: usize) -> Unitary {
        let m = |q: usize| qubit_mask(n, q);
        match self {
            GateTemplate::Cnot => permutation_unitary(n, |k| if k & m(qubits[0]) != 0 { k ^ m(qubits[1]) } else { k }),
            GateTemplate::Cz => {
                let mask = m(qubits[0]) | m(qubits[1]);
                diagonal_unitary(n, |k| if k & mask == mask { -1.0 } else { 1.0 })
            }
            GateTemplate::Ccz => {
                let mask = m(qubits[0]) | m(qubits[1]) | m(qubits[2]);
                diagonal_unitary(n, |k| if k & mask == mask { -1.0 } else { 1.0 })
            }
            GateTemplate::Toffoli3 | GateTemplate::Toffoli4 => {
                let nc = self.data_slots() - 1;
                let ctrl = qubits[..nc].iter().fold(0, |acc, &q| acc | m(q));
                let t = m(qubits[nc]);
                permutation_unitary(n, |k| if k & ctrl == ctrl { k ^ t } else { k })
            }
        }
    }
}

/// `U|k⟩ = |f(k)⟩`.
pub fn permutation_unitary<F: Fn(usize) -> usize>(n: usize, f: F) -> Unitary {
    let dim = 1usize << n;
    let mut u = Unitary::zeros(dim, dim);
    for k in 0..dim {
        u[(f(k), k)] = Complex64::new(1.0, 0.0);
    }
    u
}

/// Real diagonal unitary with entries `d(k) = ±1`.
pub fn diagonal_unitary<F: Fn(usize) -> f64>(n: usize, d: F) -> Unitary {
    let dim = 1usize << n;
    let mut u = Unitary::zeros(dim, dim);
    for k in 0..dim {
        u[(k, k)] = Complex64::new(d(k), 0.0);
    }
    u
}

/// Block of `u` with every qubit in `ancillas` fixed to `|0⟩` on input and
/// output, together with the largest amplitude that leaks out of that block.
pub fn restrict_clean_ancillas(u: &Unitary, n: usize, ancillas: &[usize]) -> (Unitary, f64) {
    let anc_mask = ancillas.iter().fold(0, |acc, &q| acc | qubit_mask(n, q));
    let clean: Vec<usize> = (0..1usize << n).filter(|k| k & anc_mask == 0).collect();
    let mut sub = Unitary::zeros(clean.len(), clean.len());
    let mut leak = 0.0f64;
    for (j, &col) in clean.iter().enumerate() {
        for r in 0..u.nrows() {
            if r & anc_mask == 0 {
                let i = clean.iter().position(|&x| x == r).expect("clean row");
                sub[(i, j)] = u[(r, col)];
            } else {
                leak = leak.max(u[(r, col)].norm());
            }
        }
    }
    (sub, leak)
}

/// True iff `max|u − e^{iα} v| < tol`, with `α` the argument of the
/// largest-magnitude entry of `v† u`.
pub fn equivalent_up_to_global_phase(u: &Unitary, v: &Unitary, tol: f64) -> Result<bool> {
    if u.shape() != v.shape() {
        return Err(Error::Dimension { expected: v.nrows(), actual: u.nrows() });
    }
    let overlap = v.adjoint() * u;
    let pivot =
        overlap.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).copied().unwrap_or(Complex64::new(1.0, 0.0));
    if pivot.norm() == 0.0 {
        return Ok(false);
    }
    let phase = pivot / pivot.norm();
    let dev = (u - v * phase).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(dev < tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub n: usize,
    pub xx_count: usize,
    pub ancilla_count: usize,
}

/// Two-qubit gate count `6n − 13` and ancilla count `⌈(n − 3)/2⌉` of a
/// Toffoli-n built by the ancilla-chaining construction.
pub fn toffoli_n_cost(n: usize) -> Result<CostReport> {
    if n < 3 {
        return Err(Error::Parameter(format!("Toffoli-n cost needs n >= 3, got {n}")));
    }
    Ok(CostReport { n, xx_count: 6 * n - 13, ancilla_count: (n - 3).div_ceil(2) })
}

const ANGLE_EPS: f64 = 1e-12;

fn same_axis(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(2.0 * PI);
    d < ANGLE_EPS || 2.0 * PI - d < ANGLE_EPS
}

fn is_identity_angle(theta: f64) -> bool {
    let r = theta.rem_euclid(4.0 * PI);
    r < ANGLE_EPS || 4.0 * PI - r < ANGLE_EPS
}

/// Merges consecutive rotations about the same axis on each qubit and drops
/// rotations that reduce to the identity. Gates on other qubits do not
/// break adjacency; an XX gate on the qubit does.
pub fn fuse_rotations(circuit: &Circuit) -> Circuit {
    let n = circuit.n_qubits();
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(circuit.len());
    let mut open: Vec<Vec<usize>> = vec![Vec::new(); n];
    for gate in circuit.gates() {
        match *gate {
            Gate::R(r) => {
                if let Some(&last) = open[r.q].last() {
                    if let Some(Gate::R(prev)) = out[last] {
                        if same_axis(prev.phi, r.phi) {
                            let theta = prev.theta + r.theta;
                            if is_identity_angle(theta) {
                                out[last] = None;
                                open[r.q].pop();
                            } else {
                                out[last] = Some(Gate::R(RotationGate { theta, ..prev }));
                            }
                            continue;
                        }
                    }
                }
                if !is_identity_angle(r.theta) {
                    open[r.q].push(out.len());
                    out.push(Some(*gate));
                }
            }
            Gate::XX(x) => {
                open[x.qa].clear();
                open[x.qb].clear();
                out.push(Some(*gate));
            }
        }
    }
    Circuit::from_gates(n, out.into_iter().flatten().collect()).expect("gates came from a valid circuit")
}
