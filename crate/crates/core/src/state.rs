//! Dense state vectors over at most six qubits.
//!
//! Basis labels are big-endian: qubit 0 is the leftmost character of a
//! label and the most significant bit of the basis index, so `"110"` is
//! index 6.

use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::Distribution;

pub const MAX_QUBITS: usize = 6;
pub(crate) const UNITARY_TOL: f64 = 1e-9;
pub(crate) const NORM_TOL: f64 = 1e-9;

pub type Amplitude = Complex64;

/// A computational basis state label such as `"011"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    bits: String,
    index: usize,
}

impl BasisLabel {
    pub fn parse(bits: &str) -> Result<Self> {
        let n = bits.len();
        if n == 0 || n > 63 || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::BadLabel { label: bits.to_string(), n });
        }
        let index = usize::from_str_radix(bits, 2).expect("validated binary string");
        Ok(Self { bits: bits.to_string(), index })
    }

    pub fn from_index(index: usize, n: usize) -> Result<Self> {
        if n == 0 || n > 63 || index >> n != 0 {
            return Err(Error::BadLabel { label: format!("#{index}"), n });
        }
        Ok(Self { bits: format!("{index:0n$b}"), index })
    }

    pub fn bits(&self) -> &str {
        &self.bits
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of qubit `q` (leftmost character is qubit 0).
    pub fn bit(&self, q: usize) -> bool {
        self.bits.as_bytes()[q] == b'1'
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits)
    }
}

/// Formats `index` as an `n`-bit big-endian label.
pub fn label_of(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

/// Bit mask for qubit `q` in an `n`-qubit index.
#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Immutable state vector. Every operation returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    pub fn init_basis(n: usize, label: &BasisLabel) -> Result<Self> {
        check_qubits(n)?;
        if label.len() != n {
            return Err(Error::BadLabel { label: label.bits().to_string(), n });
        }
        Ok(Self::basis_index(n, label.index()))
    }

    /// All-zero state `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self::basis_index(n, 0))
    }

    pub(crate) fn basis_index(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits: n, amps }
    }

    /// Builds a state from raw amplitudes; the norm must be 1.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Dimension { expected: len.next_power_of_two().max(2), actual: len });
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Parameter("non-finite amplitude".into()));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Parameter(format!("state norm {norm} is not 1")));
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub(crate) fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_one_qubit(&self, q: usize, u: &Matrix2<Complex64>) -> Result<Self> {
        self.check_index(q)?;
        check_unitary2(u)?;
        let mut amps = self.amps.clone();
        apply_one_qubit_in_place(&mut amps, self.n_qubits, q, u);
        Ok(Self { n_qubits: self.n_qubits, amps })
    }

    /// Applies `u` to the ordered pair `(qa, qb)`; the 4×4 basis index is
    /// `2·bit(qa) + bit(qb)`.
    pub fn apply_two_qubit(&self, qa: usize, qb: usize, u: &Matrix4<Complex64>) -> Result<Self> {
        self.check_index(qa)?;
        self.check_index(qb)?;
        if qa == qb {
            return Err(Error::RepeatedQubit(qa));
        }
        check_unitary4(u)?;
        let mut amps = self.amps.clone();
        apply_two_qubit_in_place(&mut amps, self.n_qubits, qa, qb, u);
        Ok(Self { n_qubits: self.n_qubits, amps })
    }

    pub fn probabilities(&self) -> Distribution {
        Distribution::from_probs_unchecked(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }

    /// Multinomial draw of `shots` outcomes; counts are indexed by basis index.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Vec<u64>> {
        self.probabilities().sample(shots, seed)
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitIndex { index: q, n: self.n_qubits });
        }
        Ok(())
    }
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

fn check_unitary2(u: &Matrix2<Complex64>) -> Result<()> {
    let dev = (u.adjoint() * u - Matrix2::identity()).map(|z| z.norm()).max();
    if dev.is_nan() || dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

fn check_unitary4(u: &Matrix4<Complex64>) -> Result<()> {
    let dev = (u.adjoint() * u - Matrix4::identity()).map(|z| z.norm()).max();
    if dev.is_nan() || dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

pub(crate) fn apply_one_qubit_in_place(amps: &mut [Amplitude], n: usize, q: usize, u: &Matrix2<Complex64>) {
    let mask = qubit_mask(n, q);
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let j = i | mask;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = u00 * a0 + u01 * a1;
            amps[j] = u10 * a0 + u11 * a1;
        }
    }
}

pub(crate) fn apply_two_qubit_in_place(amps: &mut [Amplitude], n: usize, qa: usize, qb: usize, u: &Matrix4<Complex64>) {
    let ma = qubit_mask(n, qa);
    let mb = qubit_mask(n, qb);
    for i in 0..amps.len() {
        if i & (ma | mb) == 0 {
            let idx = [i, i | mb, i | ma, i | ma | mb];
            let v = idx.map(|k| amps[k]);
            for (r, &k) in idx.iter().enumerate() {
                amps[k] = (0..4).map(|c| u[(r, c)] * v[c]).sum();
            }
        }
    }
}

/// Draws `shots` samples from `probs` with a seeded ChaCha stream.
pub(crate) fn sample_counts(probs: &[f64], shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::Parameter("shots must be at least 1".into()));
    }
    let weights =
        WeightedIndex::new(probs.iter().map(|p| p.max(0.0))).map_err(|e| Error::Distribution(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        counts[weights.sample(&mut rng)] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{r_matrix, xx_matrix};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(state: &StateVector, expected: &[Complex64]) {
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12, "{a} != {e}");
        }
    }

    #[test]
    fn basis_init() {
        let s = StateVector::init_basis(1, &BasisLabel::parse("0").unwrap()).unwrap();
        assert_amps(&s, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::init_basis(3, &BasisLabel::parse("000").unwrap()).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        let s = StateVector::init_basis(3, &BasisLabel::parse("110").unwrap()).unwrap();
        assert_eq!(s.amplitudes()[6], c(1.0, 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_init_rejects_bad_input() {
        assert!(StateVector::init_basis(7, &BasisLabel::parse("0000000").unwrap()).is_err());
        assert!(StateVector::init_basis(3, &BasisLabel::parse("01").unwrap()).is_err());
        assert!(BasisLabel::parse("012").is_err());
        assert!(BasisLabel::parse("").is_err());
        assert!(StateVector::zero(0).is_err());
    }

    #[test]
    fn label_round_trip() {
        let l = BasisLabel::from_index(5, 3).unwrap();
        assert_eq!(l.bits(), "101");
        assert!(l.bit(0) && !l.bit(1) && l.bit(2));
        assert!(BasisLabel::from_index(8, 3).is_err());
    }

    #[test]
    fn one_qubit_gates() {
        let zero = StateVector::zero(1).unwrap();
        let same = zero.apply_one_qubit(0, &Matrix2::identity()).unwrap();
        assert_eq!(same, zero);
        // R(π, 0)|0⟩ = −i|1⟩
        let s = zero.apply_one_qubit(0, &r_matrix(PI, 0.0)).unwrap();
        assert_amps(&s, &[c(0.0, 0.0), c(0.0, -1.0)]);
        let s = zero.apply_one_qubit(0, &r_matrix(FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert_amps(&s, &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]);
    }

    #[test]
    fn one_qubit_errors() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(s.apply_one_qubit(2, &Matrix2::identity()), Err(Error::QubitIndex { .. })));
        let bad = Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(s.apply_one_qubit(0, &bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn two_qubit_gates() {
        let zero = StateVector::zero(2).unwrap();
        assert_eq!(zero.apply_two_qubit(0, 1, &Matrix4::identity()).unwrap(), zero);
        let bell = zero.apply_two_qubit(0, 1, &xx_matrix(FRAC_PI_4)).unwrap();
        assert_amps(&bell, &[c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -FRAC_1_SQRT_2)]);
        let twice = zero
            .apply_two_qubit(0, 1, &xx_matrix(FRAC_PI_8))
            .unwrap()
            .apply_two_qubit(0, 1, &xx_matrix(FRAC_PI_8))
            .unwrap();
        assert_amps(&twice, bell.amplitudes());
        let p = bell.probabilities();
        assert!((p.probs()[0] - 0.5).abs() < 1e-12 && (p.probs()[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_errors() {
        let s = StateVector::zero(3).unwrap();
        assert!(matches!(s.apply_two_qubit(1, 1, &Matrix4::identity()), Err(Error::RepeatedQubit(1))));
        assert!(s.apply_two_qubit(0, 3, &Matrix4::identity()).is_err());
        let mut bad = Matrix4::identity();
        bad[(0, 0)] = c(2.0, 0.0);
        assert!(s.apply_two_qubit(0, 1, &bad).is_err());
    }

    #[test]
    fn ordered_pair_convention() {
        // CNOT with qa as control: |10⟩ → |11⟩, and reversed pair acts on the other qubit.
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let cnot = Matrix4::new(l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o);
        let s = StateVector::init_basis(3, &BasisLabel::parse("100").unwrap()).unwrap();
        let out = s.apply_two_qubit(0, 2, &cnot).unwrap();
        assert_eq!(out.amplitudes()[0b101], l);
        let out = s.apply_two_qubit(2, 0, &cnot).unwrap();
        assert_eq!(out.amplitudes()[0b100], l);
    }

    #[test]
    fn probabilities_of_simple_states() {
        let p = StateVector::zero(3).unwrap().probabilities();
        assert_eq!(p.probs()[0], 1.0);
        let uniform = StateVector::from_amplitudes(vec![c((0.125f64).sqrt(), 0.0); 8]).unwrap();
        for &x in uniform.probabilities().probs() {
            assert!((x - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn sampling() {
        let point = StateVector::init_basis(3, &BasisLabel::parse("101").unwrap()).unwrap();
        let counts = point.sample(1000, 7).unwrap();
        assert_eq!(counts[5], 1000);
        let uniform = StateVector::from_amplitudes(vec![c((0.125f64).sqrt(), 0.0); 8]).unwrap();
        assert_eq!(uniform.sample(500, 3).unwrap(), uniform.sample(500, 3).unwrap());
        let shots = 1_000_000u64;
        let counts = uniform.sample(shots, 11).unwrap();
        let sigma = (shots as f64 * 0.125 * 0.875).sqrt();
        for &k in &counts {
            assert!((k as f64 - 125_000.0).abs() < 5.0 * sigma, "{k}");
        }
        assert!(point.sample(0, 1).is_err());
    }
}
