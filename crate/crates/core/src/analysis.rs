//! Detection rates and their aggregates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::codes::{CodeKind, Detector, RoundBasis};
use crate::error::{Error, Result};
use crate::lattice::{Color, PlaquetteId};
use crate::noise::NoiseModel;
use crate::simulator::ShotTable;

/// Everything needed to regenerate a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub code: String,
    pub layout: String,
    pub rounds: usize,
    pub reset: bool,
    /// Uniform p, or the mean of the four model fields otherwise.
    pub p: f64,
    pub noise: NoiseModel,
    pub shots: usize,
    pub seed: u64,
}

impl Default for ReportMeta {
    fn default() -> Self {
        ReportMeta {
            code: String::new(),
            layout: String::new(),
            rounds: 0,
            reset: true,
            p: 0.0,
            noise: NoiseModel::default(),
            shots: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorRate {
    pub detector: usize,
    pub plaquette: PlaquetteId,
    pub color: Color,
    pub basis: RoundBasis,
    pub rate: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaquetteRate {
    pub plaquette: PlaquetteId,
    pub color: Color,
    pub basis: RoundBasis,
    pub rate: f64,
    pub stderr: f64,
    pub detectors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Standard error of `mean`, treating plaquette rates as independent.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub meta: ReportMeta,
    pub detectors: Vec<DetectorRate>,
    pub plaquettes: Vec<PlaquetteRate>,
    pub aggregate: Option<Aggregate>,
}

fn binomial_stderr(rate: f64, n: usize) -> f64 {
    (rate * (1.0 - rate) / n as f64).sqrt()
}

/// Fraction of shots in which each detector's records XOR to 1, grouped per
/// (plaquette, basis) by averaging.
pub fn detection_rates(shots: &ShotTable, detectors: &[Detector]) -> Result<DetectionReport> {
    if shots.shots() == 0 {
        return Err(Error::NoShots);
    }
    let words = shots.num_records().div_ceil(64).max(1);
    let mut masks = Vec::with_capacity(detectors.len());
    for d in detectors {
        let mut mask = vec![0u64; words];
        for &r in &d.records {
            if r >= shots.num_records() {
                return Err(Error::RecordOutOfRange { index: r, num_records: shots.num_records() });
            }
            mask[r / 64] ^= 1 << (r % 64);
        }
        masks.push(mask);
    }

    let mut counts = vec![0usize; detectors.len()];
    for s in 0..shots.shots() {
        let row = shots.row(s);
        for (count, mask) in counts.iter_mut().zip(&masks) {
            let ones: u32 = row.iter().zip(mask).map(|(a, b)| (a & b).count_ones()).sum();
            *count += (ones & 1) as usize;
        }
    }

    let n = shots.shots();
    let detector_rates: Vec<DetectorRate> = detectors
        .iter()
        .zip(&counts)
        .map(|(d, &c)| {
            let rate = c as f64 / n as f64;
            DetectorRate {
                detector: d.id,
                plaquette: d.plaquette,
                color: d.color,
                basis: d.basis,
                rate,
                stderr: binomial_stderr(rate, n),
            }
        })
        .collect();

    let mut groups: BTreeMap<(PlaquetteId, RoundBasis), Vec<&DetectorRate>> = BTreeMap::new();
    for r in &detector_rates {
        groups.entry((r.plaquette, r.basis)).or_default().push(r);
    }
    let plaquettes: Vec<PlaquetteRate> = groups
        .into_iter()
        .map(|((plaquette, basis), rs)| {
            let k = rs.len() as f64;
            PlaquetteRate {
                plaquette,
                color: rs[0].color,
                basis,
                rate: rs.iter().map(|r| r.rate).sum::<f64>() / k,
                stderr: rs.iter().map(|r| r.stderr * r.stderr).sum::<f64>().sqrt() / k,
                detectors: rs.len(),
            }
        })
        .collect();

    let aggregate = aggregate_of(&plaquettes);
    Ok(DetectionReport {
        meta: ReportMeta { shots: n, seed: shots.seed, ..ReportMeta::default() },
        detectors: detector_rates,
        plaquettes,
        aggregate,
    })
}

fn aggregate_of(rates: &[PlaquetteRate]) -> Option<Aggregate> {
    if rates.is_empty() {
        return None;
    }
    let k = rates.len() as f64;
    Some(Aggregate {
        mean: rates.iter().map(|r| r.rate).sum::<f64>() / k,
        min: rates.iter().map(|r| r.rate).fold(f64::INFINITY, f64::min),
        max: rates.iter().map(|r| r.rate).fold(f64::NEG_INFINITY, f64::max),
        stderr: rates.iter().map(|r| r.stderr * r.stderr).sum::<f64>().sqrt() / k,
    })
}

/// `(mean, min, max)` over plaquette-level rates.
pub fn aggregate_bars(report: &DetectionReport) -> Result<(f64, f64, f64)> {
    report.aggregate.map(|a| (a.mean, a.min, a.max)).ok_or(Error::EmptyReport)
}

fn config_comments(out: &mut String, meta: &ReportMeta) {
    let n = &meta.noise;
    let _ = writeln!(out, "# code={}", meta.code);
    let _ = writeln!(out, "# layout={}", meta.layout);
    let _ = writeln!(out, "# rounds={}", meta.rounds);
    let _ = writeln!(out, "# reset={}", meta.reset);
    let _ = writeln!(out, "# p_prep={} p_meas={} p_cx={} p_idle={}", n.p_prep, n.p_meas, n.p_cx, n.p_idle);
    let _ = writeln!(out, "# shots={}", meta.shots);
    let _ = writeln!(out, "# seed={}", meta.seed);
}

fn row_prefix(meta: &ReportMeta) -> String {
    format!("{},{},{},{},{},{}", meta.code, meta.layout, meta.reset, meta.p, meta.shots, meta.seed)
}

pub const REPORT_CSV_HEADER: &str = "code,layout,reset,p,shots,seed,plaquette,color,basis,rate,stderr,mean,min,max";

impl DetectionReport {
    /// CSV with the configuration as leading `#` comments, one row per
    /// (plaquette, basis) and a final `ALL` row carrying mean, min and max.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        config_comments(&mut out, &self.meta);
        out.push_str(REPORT_CSV_HEADER);
        out.push('\n');
        let prefix = row_prefix(&self.meta);
        for r in &self.plaquettes {
            let _ = writeln!(out, "{prefix},{},{},{},{:.6},{:.6},,,", r.plaquette, r.color, r.basis, r.rate, r.stderr);
        }
        if let Some(a) = &self.aggregate {
            let _ =
                writeln!(out, "{prefix},ALL,,,{:.6},{:.6},{:.6},{:.6},{:.6}", a.mean, a.stderr, a.mean, a.min, a.max);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        match &self.aggregate {
            Some(a) => format!(
                "{} {} p={} shots={}: mean rate {:.4} (min {:.4}, max {:.4}, {} plaquette rates)",
                self.meta.code,
                self.meta.layout,
                self.meta.p,
                self.meta.shots,
                a.mean,
                a.min,
                a.max,
                self.plaquettes.len()
            ),
            None => format!("{} {}: no detectors", self.meta.code, self.meta.layout),
        }
    }
}

pub const SWEEP_CSV_HEADER: &str = "code,layout,reset,p,shots,seed,mean,min,max,stderr";

/// One aggregate row per report, preceded by the shared configuration.
pub fn sweep_csv(reports: &[DetectionReport]) -> String {
    let mut out = String::new();
    if let Some(first) = reports.first() {
        let _ = writeln!(out, "# rounds={}", first.meta.rounds);
    }
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let prefix = row_prefix(&r.meta);
        match &r.aggregate {
            Some(a) => {
                let _ = writeln!(out, "{prefix},{:.6},{:.6},{:.6},{:.6}", a.mean, a.min, a.max, a.stderr);
            }
            None => {
                let _ = writeln!(out, "{prefix},,,,");
            }
        }
    }
    out
}

/// A single noisy experiment: layout, schedule, noise, shots.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub code: CodeKind,
    pub layout: crate::lattice::Layout,
    pub rounds: usize,
    pub reset_aux: bool,
    pub noise: NoiseModel,
    pub shots: usize,
    pub seed: u64,
}

pub struct ExperimentOutput {
    pub report: DetectionReport,
    pub shots: ShotTable,
}

impl Experiment {
    pub fn new(code: CodeKind, layout: crate::lattice::Layout) -> Experiment {
        Experiment {
            code,
            layout,
            rounds: code.default_rounds(),
            reset_aux: true,
            noise: NoiseModel::default(),
            shots: 1000,
            seed: 0,
        }
    }

    pub fn detectors(&self) -> Result<(crate::circuit::Circuit, Vec<Detector>)> {
        let schedule = self.code.schedule(self.rounds)?;
        let circuit = crate::circuit::schedule_rounds(&self.layout, &schedule, self.reset_aux)?;
        let detectors = self.code.detectors(&self.layout, &schedule, self.reset_aux)?;
        Ok((circuit, detectors))
    }

    pub fn run(&self) -> Result<ExperimentOutput> {
        let (circuit, detectors) = self.detectors()?;
        let noisy = crate::noise::apply_noise(&circuit, &self.noise)?;
        let shots = crate::simulator::run_shots(&noisy, self.shots, self.seed)?;
        let mut report = detection_rates(&shots, &detectors)?;
        let n = &self.noise;
        report.meta = ReportMeta {
            code: self.code.to_string(),
            layout: self.layout.name.clone(),
            rounds: self.rounds,
            reset: self.reset_aux,
            p: n.as_uniform().unwrap_or((n.p_prep + n.p_meas + n.p_cx + n.p_idle) / 4.0),
            noise: *n,
            shots: self.shots,
            seed: self.seed,
        };
        Ok(ExperimentOutput { report, shots })
    }
}

/// One report per uniform `p`, all with the same base seed.
pub fn sweep(
    code: CodeKind,
    layout: &crate::lattice::Layout,
    p_values: &[f64],
    shots: usize,
    base_seed: u64,
    reset_aux: bool,
) -> Result<Vec<DetectionReport>> {
    if p_values.is_empty() {
        return Err(Error::EmptySweep);
    }
    let mut exp = Experiment::new(code, layout.clone());
    exp.shots = shots;
    exp.seed = base_seed;
    exp.reset_aux = reset_aux;
    p_values
        .iter()
        .map(|&p| {
            exp.noise = NoiseModel::uniform(p);
            exp.run().map(|o| o.report)
        })
        .collect()
}
