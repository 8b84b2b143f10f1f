//! Experiment drivers behind the `iongrover` command line: gate truth
//! tables, Grover runs, limited tomography and Toffoli-n costs. Each driver
//! returns a [`Report`] that serializes to the shipped results schema.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{toffoli_n_cost, CostReport, GateTemplate, SignMap};
use crate::error::{Error, Result};
use crate::grover::{
    classical_asp, enumerate_oracles, grover_circuit, theoretical_asp, GroverConfig, OracleSpec, OracleStyle,
};
use crate::metrics::{self, asp, expected_grover_distribution, sso, Distribution, TruthTable};
use crate::noise::{self, derive_seed, fit_p_xx, NoiseConfig, NoiseModel, SpamModel};
use crate::state::{label_of, StateVector};
use crate::tomography::{self, tomography_success};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Toffoli-3 truth-table fidelity targeted by `--noise fitted`.
pub const FITTED_TOFFOLI3_FIDELITY: f64 = 0.896;
/// Trajectories used when bisecting for the fitted noise strength.
pub const FIT_TRAJECTORIES: usize = 4000;

/// Published hardware values, reported next to simulated numbers.
pub mod anchors {
    pub const TOFFOLI3_FIDELITY: f64 = 0.896;
    pub const TOFFOLI4_FIDELITY: f64 = 0.705;
    pub const TOMOGRAPHY_SUCCESS: f64 = 0.821;
    pub const ASP_T1_BOOLEAN: f64 = 0.389;
    pub const ASP_T1_PHASE: f64 = 0.437;
    pub const ASP_T2_BOOLEAN: f64 = 0.679;
    pub const ASP_T2_PHASE: f64 = 0.753;
}

/// Gate noise used by a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSettings {
    pub model: NoiseModel,
    pub trajectories: usize,
    /// Whether `model.p_xx` came from the Toffoli-3 fit.
    pub fitted: bool,
}

impl NoiseSettings {
    pub fn from_config(cfg: &NoiseConfig) -> Result<Self> {
        Ok(Self { model: cfg.noise()?, trajectories: cfg.trajectories, fitted: false })
    }

    /// Fits `p_xx` so the Toffoli-3 truth-table fidelity is 0.896.
    pub fn fitted(seed: u64) -> Result<Self> {
        let p_xx = fit_p_xx(FITTED_TOFFOLI3_FIDELITY, FIT_TRAJECTORIES, seed)?;
        Ok(Self { model: NoiseModel::new(p_xx, 0.0)?, trajectories: 10_000, fitted: true })
    }
}

/// Everything that shapes how a circuit turns into a reported distribution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub noise: Option<NoiseSettings>,
    pub spam: Option<SpamModel>,
    pub shots: Option<u64>,
    pub seed: u64,
}

impl RunOptions {
    pub fn noiseless() -> Self {
        Self::default()
    }

    fn simulate(&self, circuit: &crate::gates::Circuit, init: &StateVector, seed: u64) -> Result<Distribution> {
        match &self.noise {
            Some(n) => noise::run_noisy(circuit, init, &n.model, n.trajectories, seed),
            None => Ok(circuit.run(init)?.probabilities()),
        }
    }

    /// Readout pipeline: SPAM forward model, finite-shot sampling, then SPAM
    /// correction.
    pub fn measure(&self, dist: &Distribution, seed: u64) -> Result<Distribution> {
        let mut d = match &self.spam {
            Some(s) => noise::apply_spam(dist, s)?,
            None => dist.clone(),
        };
        if let Some(shots) = self.shots {
            d = Distribution::from_counts(&d.sample(shots, seed)?)?;
        }
        if let Some(s) = &self.spam {
            d = noise::correct_spam(&d, s)?;
        }
        Ok(d)
    }

    fn p_xx(&self) -> Option<f64> {
        self.noise.map(|n| n.model.p_xx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
    pub version: String,
}

/// Results file body: `{meta, rows, summary?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub meta: Meta,
    pub rows: Vec<R>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub summary: Option<Summary>,
}

impl<R: Serialize> Report<R> {
    fn new(command: &str, seed: u64, rows: Vec<R>) -> Self {
        Self { meta: Meta { command: command.into(), seed, version: VERSION.into() }, rows, summary: None }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean_asp: f64,
    pub mean_sso: f64,
    pub theoretical_asp: f64,
    pub classical_asp: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_xx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hardware_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTableRow {
    pub gate: String,
    pub xx_count: usize,
    pub qubits: usize,
    pub fidelity_noiseless: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fidelity_noisy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_xx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hardware_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverRow {
    pub marked: Vec<String>,
    pub style: OracleStyle,
    /// Data-register distribution in label order `000, 001, …`.
    pub distribution: Vec<f64>,
    pub asp: f64,
    pub sso: f64,
    pub xx_count: usize,
    pub qubits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyRow {
    pub success: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_xx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hardware_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub n: usize,
    pub xx_count: usize,
    pub ancillas: usize,
}

impl From<CostReport> for CostRow {
    fn from(c: CostReport) -> Self {
        Self { n: c.n, xx_count: c.xx_count, ancillas: c.ancilla_count }
    }
}

fn table_from(circuit: &crate::gates::Circuit, io: &[usize], opts: &RunOptions) -> Result<TruthTable> {
    let mut k = 0u64;
    let tt = metrics::truth_table_with(circuit, io, |init| {
        let s = derive_seed(opts.seed, k);
        k += 1;
        opts.simulate(circuit, init, s)
    })?;
    let rows = tt
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| opts.measure(r, derive_seed(opts.seed ^ 0x5eed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    TruthTable::new(rows)
}

/// Truth table of `gate` on its data slots plus the summary row.
pub fn gate_table(gate: GateTemplate, opts: &RunOptions) -> Result<(TruthTable, Report<GateTableRow>)> {
    let circuit = gate.build_default(&SignMap::new())?;
    let io: Vec<usize> = (0..gate.data_slots()).collect();
    let ideal = gate.ideal_permutation();
    let clean = metrics::truth_table_fidelity(&metrics::truth_table(&circuit, &io)?, &ideal)?;
    let noisy_opts = opts.noise.is_some() || opts.spam.is_some() || opts.shots.is_some();
    let (table, noisy) = if noisy_opts {
        let tt = table_from(&circuit, &io, opts)?;
        let f = metrics::truth_table_fidelity(&tt, &ideal)?;
        (tt, Some(f))
    } else {
        (metrics::truth_table(&circuit, &io)?, None)
    };
    let anchor = match gate {
        GateTemplate::Toffoli3 if opts.noise.is_some() => Some(anchors::TOFFOLI3_FIDELITY),
        GateTemplate::Toffoli4 if opts.noise.is_some() => Some(anchors::TOFFOLI4_FIDELITY),
        _ => None,
    };
    let row = GateTableRow {
        gate: gate.name().into(),
        xx_count: circuit.xx_count(),
        qubits: circuit.n_qubits(),
        fidelity_noiseless: clean,
        fidelity_noisy: noisy,
        p_xx: opts.p_xx(),
        hardware_value: anchor,
    };
    Ok((table, Report::new("gate-table", opts.seed, vec![row])))
}

/// One Grover run, including noise and the readout pipeline.
pub fn grover_row(spec: &OracleSpec, opts: &RunOptions, seed: u64) -> Result<GroverRow> {
    let circuit = grover_circuit(&GroverConfig::new(spec.clone()))?;
    let init = StateVector::zero(circuit.n_qubits())?;
    let data: Vec<usize> = (0..spec.n()).collect();
    let raw = opts.simulate(&circuit, &init, seed)?.marginal(&data)?;
    let measured = opts.measure(&raw, derive_seed(seed, u64::MAX))?;
    let expected = expected_grover_distribution(spec.n(), spec.marked())?;
    Ok(GroverRow {
        marked: spec.marked().iter().map(|l| l.to_string()).collect(),
        style: spec.style(),
        asp: asp(&measured, spec.marked())?,
        sso: sso(&expected, &measured)?,
        distribution: measured.probs().to_vec(),
        xx_count: circuit.xx_count(),
        qubits: circuit.n_qubits(),
    })
}

/// Runs every oracle in parallel; rows come back in input order.
pub fn grover(specs: &[OracleSpec], opts: &RunOptions) -> Result<Report<GroverRow>> {
    let rows = specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| grover_row(s, opts, derive_seed(opts.seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new("grover", opts.seed, rows))
}

/// All `C(2^n, t)` oracles of one style, with aggregate means.
pub fn grover_all(n: usize, t: usize, style: OracleStyle, opts: &RunOptions) -> Result<Report<GroverRow>> {
    let specs = enumerate_oracles(n, t, style)?;
    let mut report = grover(&specs, opts)?;
    let db = 1usize << n;
    let count = report.rows.len() as f64;
    let anchor = match (opts.noise.is_some() && n == 3, t, style) {
        (true, 1, OracleStyle::Boolean) => Some(anchors::ASP_T1_BOOLEAN),
        (true, 1, OracleStyle::Phase) => Some(anchors::ASP_T1_PHASE),
        (true, 2, OracleStyle::Boolean) => Some(anchors::ASP_T2_BOOLEAN),
        (true, 2, OracleStyle::Phase) => Some(anchors::ASP_T2_PHASE),
        _ => None,
    };
    report.summary = Some(Summary {
        count: report.rows.len(),
        mean_asp: report.rows.iter().map(|r| r.asp).sum::<f64>() / count,
        mean_sso: report.rows.iter().map(|r| r.sso).sum::<f64>() / count,
        theoretical_asp: theoretical_asp(db, t)?,
        classical_asp: classical_asp(db, t)?,
        p_xx: opts.p_xx(),
        hardware_value: anchor,
    });
    Ok(report)
}

/// Limited tomography of the Toffoli-3 template.
pub fn tomography(opts: &RunOptions) -> Result<(TruthTable, Report<TomographyRow>)> {
    let circuit = GateTemplate::Toffoli3.build_default(&SignMap::new())?;
    let table = match &opts.noise {
        Some(n) => tomography::noisy_limited_tomography(&circuit, &n.model, n.trajectories, opts.seed)?,
        None => tomography::limited_tomography(&circuit)?,
    };
    let table = TruthTable::new(
        table
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| opts.measure(r, derive_seed(opts.seed ^ 0x5eed, i as u64)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let row = TomographyRow {
        success: tomography_success(&table)?,
        p_xx: opts.p_xx(),
        hardware_value: opts.noise.map(|_| anchors::TOMOGRAPHY_SUCCESS),
    };
    Ok((table, Report::new("tomography", opts.seed, vec![row])))
}

/// Toffoli-n cost rows for `n` in `lo..=hi`.
pub fn costs(lo: usize, hi: usize) -> Result<Report<CostRow>> {
    if lo > hi {
        return Err(Error::Parameter(format!("empty range {lo}..={hi}")));
    }
    let rows = (lo..=hi).map(|n| toffoli_n_cost(n).map(CostRow::from)).collect::<Result<Vec<_>>>()?;
    Ok(Report::new("costs", 0, rows))
}

/// Parses `"N"` or `"LO..HI"` (inclusive) or `"LO..=HI"`.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parameter(format!("bad range {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok((num(a)?, num(b.strip_prefix('=').unwrap_or(b))?)),
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
    }
}

pub fn costs_csv(report: &Report<CostRow>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.rows {
        w.serialize(r)?;
    }
    to_string(w)
}

/// One line per oracle: marked set, style, scores, then one column per
/// data-register outcome.
pub fn grover_csv(report: &Report<GroverRow>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let n = report.rows.first().map_or(0, |r| r.distribution.len().trailing_zeros() as usize);
    let mut header =
        vec!["marked".to_string(), "style".into(), "asp".into(), "sso".into(), "xx_count".into(), "qubits".into()];
    header.extend((0..1usize << n).map(|i| label_of(i, n)));
    w.write_record(&header)?;
    for r in &report.rows {
        let mut rec = vec![
            r.marked.join(" "),
            r.style.name().into(),
            r.asp.to_string(),
            r.sso.to_string(),
            r.xx_count.to_string(),
            r.qubits.to_string(),
        ];
        rec.extend(r.distribution.iter().map(|&p| metrics::csv_prob(p)));
        w.write_record(&rec)?;
    }
    to_string(w)
}

pub fn truth_table_csv(tt: &TruthTable) -> Result<String> {
    let mut buf = Vec::new();
    tt.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn to_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes every `(name, contents)` pair into `dir`. Files are staged under
/// temporary names and renamed only once all have been written.
pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, body) in files {
        let tmp = dir.join(format!(".{name}.partial"));
        if let Err(e) = fs::write(&tmp, body) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(e.into());
        }
        staged.push((tmp, dir.join(name)));
    }
    let mut out = Vec::with_capacity(staged.len());
    for (tmp, dst) in staged {
        fs::rename(&tmp, &dst)?;
        out.push(dst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_gate_tables() {
        for (g, xx) in [
            (GateTemplate::Toffoli3, 5),
            (GateTemplate::Toffoli4, 11),
            (GateTemplate::Cnot, 1),
            (GateTemplate::Cz, 1),
            (GateTemplate::Ccz, 5),
        ] {
            let (tt, rep) = gate_table(g, &RunOptions::noiseless()).unwrap();
            assert_eq!(rep.rows[0].xx_count, xx, "{}", g.name());
            assert!((rep.rows[0].fidelity_noiseless - 1.0).abs() < 1e-9);
            assert_eq!(rep.rows[0].fidelity_noisy, None);
            assert_eq!(tt.dim(), 1 << g.data_slots());
        }
    }

    #[test]
    fn grover_examples() {
        let spec = OracleSpec::parse(3, &["111"], OracleStyle::Phase).unwrap();
        let rep = grover(&[spec], &RunOptions::noiseless()).unwrap();
        assert!((rep.rows[0].asp - 0.78125).abs() < 1e-9);
        assert!((rep.rows[0].sso - 1.0).abs() < 1e-9);

        let rep = grover_all(3, 2, OracleStyle::Boolean, &RunOptions::noiseless()).unwrap();
        assert_eq!(rep.rows.len(), 28);
        assert!(rep.rows.iter().all(|r| (r.asp - 1.0).abs() < 1e-9));
        let s = rep.summary.unwrap();
        assert!((s.classical_asp - 13.0 / 28.0).abs() < 1e-15);
        assert_eq!(s.hardware_value, None);
    }

    #[test]
    fn shots_and_spam_pipeline() {
        let spec = OracleSpec::parse(3, &["010"], OracleStyle::Phase).unwrap();
        let opts = RunOptions { spam: Some(SpamModel::symmetric(0.02).unwrap()), ..Default::default() };
        let row = grover_row(&spec, &opts, 0).unwrap();
        assert!((row.asp - 0.78125).abs() < 1e-9);
        let opts = RunOptions { shots: Some(1000), seed: 3, ..opts };
        let a = grover_row(&spec, &opts, 7).unwrap();
        let b = grover_row(&spec, &opts, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.asp - 0.78125).abs() < 0.08);
    }

    #[test]
    fn costs_and_ranges() {
        let rep = costs(3, 5).unwrap();
        let got: Vec<_> = rep.rows.iter().map(|r| (r.xx_count, r.ancillas)).collect();
        assert_eq!(got, [(5, 0), (11, 1), (17, 1)]);
        assert_eq!(costs(10, 10).unwrap().rows[0], CostRow { n: 10, xx_count: 47, ancillas: 4 });
        assert!(costs(2, 4).is_err());
        assert_eq!(parse_range("3..5").unwrap(), (3, 5));
        assert_eq!(parse_range("3..=5").unwrap(), (3, 5));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("x..5").is_err());
        assert_eq!(costs_csv(&rep).unwrap(), "n,xx_count,ancillas\n3,5,0\n4,11,1\n5,17,1\n");
    }

    #[test]
    fn tomography_noiseless() {
        let (tt, rep) = tomography(&RunOptions::noiseless()).unwrap();
        assert!((rep.rows[0].success - 1.0).abs() < 1e-9);
        for k in 0..8 {
            for j in 0..8 {
                let want = if j == 7 - k { 1.0 } else { 0.0 };
                assert!((tt.entry(k, j) - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn staged_writes() {
        let dir = tempfile::tempdir().unwrap();
        let files = vec![("a.json".to_string(), "{}\n".to_string()), ("b.csv".to_string(), "x\n".to_string())];
        let written = write_outputs(dir.path(), &files).unwrap();
        assert_eq!(written.len(), 2);
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 2);
    }
}
