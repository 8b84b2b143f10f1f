//! Figures of merit: success probability, squared statistical overlap and
//! truth-table fidelity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::grover::theoretical_asp;
use crate::state::{self, label_of, qubit_mask, BasisLabel, StateVector};

const SUM_TOL: f64 = 1e-9;

/// Probability vector over `2^n` outcomes, indexed by big-endian label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 || !probs.len().is_power_of_two() {
            return Err(Error::Distribution(format!("length {} is not a power of two", probs.len())));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Distribution("negative or non-finite entry".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Distribution(format!("entries sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_probs_unchecked(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn uniform(n: usize) -> Self {
        let dim = 1usize << n;
        Self { probs: vec![1.0 / dim as f64; dim] }
    }

    pub fn point(n: usize, index: usize) -> Self {
        let mut probs = vec![0.0; 1 << n];
        probs[index] = 1.0;
        Self { probs }
    }

    /// Empirical frequencies from sampled counts.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Distribution("no counts".into()));
        }
        Self::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.probs.len().trailing_zeros() as usize
    }

    pub fn get(&self, label: &BasisLabel) -> f64 {
        self.probs[label.index()]
    }

    /// Marginal over the listed qubits, in the listed order.
    pub fn marginal(&self, keep: &[usize]) -> Result<Distribution> {
        let n = self.n_qubits();
        if let Some(&q) = keep.iter().find(|&&q| q >= n) {
            return Err(Error::QubitIndex { index: q, n });
        }
        let k = keep.len();
        let mut out = vec![0.0; 1 << k];
        for (i, &p) in self.probs.iter().enumerate() {
            out[project_index(i, n, keep)] += p;
        }
        Ok(Distribution { probs: out })
    }

    pub fn sample(&self, shots: u64, seed: u64) -> Result<Vec<u64>> {
        state::sample_counts(&self.probs, shots, seed)
    }

    /// `(label, probability)` rows for CSV export.
    pub fn rows(&self) -> Vec<(String, f64)> {
        let n = self.n_qubits();
        self.probs.iter().enumerate().map(|(i, &p)| (label_of(i, n), p)).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["label", "probability"])?;
        for (label, p) in self.rows() {
            wtr.write_record([label, csv_prob(p)])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Probability as written to CSV; rounding residue below 1e-15 prints as 0.
pub(crate) fn csv_prob(p: f64) -> String {
    if p.abs() < 1e-15 {
        "0".into()
    } else {
        p.to_string()
    }
}

/// Index of the sub-register `keep` within full index `i`.
pub(crate) fn project_index(i: usize, n: usize, keep: &[usize]) -> usize {
    keep.iter().fold(0, |acc, &q| (acc << 1) | usize::from(i & qubit_mask(n, q) != 0))
}

/// Sum of measured probability over the marked labels.
pub fn asp(measured: &Distribution, marked: &[BasisLabel]) -> Result<f64> {
    let n = measured.n_qubits();
    marked
        .iter()
        .map(
            |l| {
                if l.len() != n {
                    Err(Error::BadLabel { label: l.bits().to_string(), n })
                } else {
                    Ok(measured.get(l))
                }
            },
        )
        .sum()
}

/// Squared statistical overlap `(Σ_j √(e_j m_j))²`.
pub fn sso(expected: &Distribution, measured: &Distribution) -> Result<f64> {
    if expected.len() != measured.len() {
        return Err(Error::Dimension { expected: expected.len(), actual: measured.len() });
    }
    let s: f64 = expected.probs.iter().zip(&measured.probs).map(|(e, m)| (e * m).sqrt()).sum();
    Ok(s * s)
}

/// Ideal single-iteration output: marked labels split the theoretical
/// success probability evenly, unmarked labels split the rest.
pub fn expected_grover_distribution(n: usize, marked: &[BasisLabel]) -> Result<Distribution> {
    let dim = 1usize << n;
    let t = marked.len();
    if t == 0 || t > dim {
        return Err(Error::Oracle(format!("{t} marked labels for {n} qubits")));
    }
    let mut is_marked = vec![false; dim];
    for l in marked {
        if l.len() != n || is_marked[l.index()] {
            return Err(Error::Oracle(format!("bad or repeated label {l}")));
        }
        is_marked[l.index()] = true;
    }
    let p = theoretical_asp(dim, t)?;
    let on = p / t as f64;
    let off = if t == dim { 0.0 } else { (1.0 - p) / (dim - t) as f64 };
    Ok(Distribution { probs: is_marked.iter().map(|&m| if m { on } else { off }).collect() })
}

/// Rows of output distributions, one per basis input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub rows: Vec<Distribution>,
}

impl TruthTable {
    pub fn new(rows: Vec<Distribution>) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Dimension { expected: dim, actual: r.len() });
        }
        Ok(Self { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, input: usize, output: usize) -> f64 {
        self.rows[input].probs[output]
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let n = self.dim().trailing_zeros() as usize;
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["input".to_string()];
        header.extend((0..self.dim()).map(|k| label_of(k, n)));
        wtr.write_record(&header)?;
        for (k, row) in self.rows.iter().enumerate() {
            let mut rec = vec![label_of(k, n)];
            rec.extend(row.probs.iter().map(|&p| csv_prob(p)));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Noiseless truth table over `io_qubits`; other qubits start in `|0⟩`
/// and are marginalized out.
pub fn truth_table(circuit: &Circuit, io_qubits: &[usize]) -> Result<TruthTable> {
    truth_table_with(circuit, io_qubits, |init| Ok(circuit.run(init)?.probabilities()))
}

pub(crate) fn truth_table_with<F>(circuit: &Circuit, io_qubits: &[usize], mut run: F) -> Result<TruthTable>
where
    F: FnMut(&StateVector) -> Result<Distribution>,
{
    let n = circuit.n_qubits();
    state::check_qubits(n)?;
    check_subset(io_qubits, n)?;
    let k = io_qubits.len();
    let mut rows = Vec::with_capacity(1 << k);
    for input in 0..1usize << k {
        let full = io_qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            if input & (1 << (k - 1 - pos)) != 0 {
                acc | qubit_mask(n, q)
            } else {
                acc
            }
        });
        let out = run(&StateVector::basis_index(n, full))?;
        rows.push(out.marginal(io_qubits)?);
    }
    TruthTable::new(rows)
}

fn check_subset(qubits: &[usize], n: usize) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::Parameter("empty io qubit set".into()));
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitIndex { index: q, n });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::RepeatedQubit(q));
        }
    }
    Ok(())
}

/// Mean population of the ideal output over all inputs.
pub fn truth_table_fidelity(tt: &TruthTable, ideal: &[usize]) -> Result<f64> {
    if ideal.len() != tt.dim() {
        return Err(Error::Dimension { expected: tt.dim(), actual: ideal.len() });
    }
    let total: f64 = ideal.iter().enumerate().map(|(k, &out)| tt.entry(k, out)).sum();
    Ok(total / tt.dim() as f64)
}

/// Ideal permutation of a multi-controlled NOT whose target is the last
/// of `n` bits.
pub fn mcx_permutation(n: usize) -> Vec<usize> {
    let dim = 1usize << n;
    (0..dim).map(|k| if k | 1 == dim - 1 { k ^ 1 } else { k }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ls: &[&str]) -> Vec<BasisLabel> {
        ls.iter().map(|l| BasisLabel::parse(l).unwrap()).collect()
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![0.5, 0.5]).is_ok());
        assert!(Distribution::new(vec![0.5, 0.4]).is_err());
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(vec![1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn asp_values() {
        let ideal = expected_grover_distribution(3, &labels(&["011"])).unwrap();
        assert!((asp(&ideal, &labels(&["011"])).unwrap() - 0.78125).abs() < 1e-15);
        assert_eq!(asp(&Distribution::uniform(3), &labels(&["101"])).unwrap(), 0.125);
        let two = expected_grover_distribution(3, &labels(&["001", "100"])).unwrap();
        assert!((asp(&two, &labels(&["001", "100"])).unwrap() - 1.0).abs() < 1e-15);
        assert!(asp(&ideal, &labels(&["01"])).is_err());
    }

    #[test]
    fn sso_values() {
        let d = expected_grover_distribution(3, &labels(&["011"])).unwrap();
        assert!((sso(&d, &d).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sso(&Distribution::point(3, 0), &Distribution::point(3, 5)).unwrap(), 0.0);
        let v = sso(&Distribution::point(3, 2), &Distribution::uniform(3)).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
        assert!(sso(&Distribution::uniform(2), &Distribution::uniform(3)).is_err());
    }

    #[test]
    fn expected_distributions() {
        let d = expected_grover_distribution(3, &labels(&["011"])).unwrap();
        for (i, &p) in d.probs().iter().enumerate() {
            let want = if i == 3 { 0.78125 } else { 0.03125 };
            assert!((p - want).abs() < 1e-15);
        }
        let d = expected_grover_distribution(3, &labels(&["000", "110"])).unwrap();
        assert_eq!(d.probs()[0], 0.5);
        assert_eq!(d.probs()[6], 0.5);
        assert_eq!(d.probs().iter().sum::<f64>(), 1.0);
        let d = expected_grover_distribution(2, &labels(&["11"])).unwrap();
        assert_eq!(d.probs(), &[0.0, 0.0, 0.0, 1.0]);
        assert!(expected_grover_distribution(2, &labels(&["11", "11"])).is_err());
    }

    #[test]
    fn identity_truth_table() {
        let tt = truth_table(&Circuit::new(3), &[0, 1, 2]).unwrap();
        for k in 0..8 {
            assert_eq!(tt.rows[k], Distribution::point(3, k));
        }
        let ident: Vec<usize> = (0..8).collect();
        assert_eq!(truth_table_fidelity(&tt, &ident).unwrap(), 1.0);
        // identity agrees with Toffoli on 6 of 8 inputs
        assert_eq!(truth_table_fidelity(&tt, &mcx_permutation(3)).unwrap(), 0.75);
    }

    #[test]
    fn uniform_table_fidelity() {
        let tt = TruthTable::new(vec![Distribution::uniform(3); 8]).unwrap();
        assert_eq!(truth_table_fidelity(&tt, &mcx_permutation(3)).unwrap(), 0.125);
        assert!(truth_table_fidelity(&tt, &[0, 1]).is_err());
    }

    #[test]
    fn marginals_follow_listed_order() {
        // P(q0=1, q1=0, q2=1) = 1
        let d = Distribution::point(3, 0b101);
        assert_eq!(d.marginal(&[2, 1]).unwrap().probs(), &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(d.marginal(&[0]).unwrap().probs(), &[0.0, 1.0]);
        assert!(d.marginal(&[3]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        Distribution::point(1, 1).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "label,probability\n0,0\n1,1\n");
    }

    #[test]
    fn mcx_perm() {
        assert_eq!(mcx_permutation(3), vec![0, 1, 2, 3, 4, 5, 7, 6]);
        assert_eq!(mcx_permutation(2), vec![0, 1, 3, 2]);
    }
}
