//! Monte Carlo sweeps over sample sizes and radius multipliers, 1-D occupancy
//! heatmaps, and zero-set reconstruction from empty balls.

mod heatmap;
mod pilot;
mod reconstruct;
mod svg;

pub use heatmap::{heatmap_1d, heatmap_from_batch, write_heatmap_csv};
pub use pilot::{
    heatmap_dichotomy_rates, median, pilot_thresholds, reconstruction_trial, run_pilot, PilotConfig, PilotThresholds,
    ReconstructionTrial, HEATMAP_BINS, HEATMAP_N, PILOT_FIXTURE,
};
pub use reconstruct::{reconstruct_s0, ReconstructionResult};
pub use svg::{heatmap_svg, sweep_svg};

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::{
    build_grid_covering, center_distances, classify_with_distances, occupancy_from_counts, BallClass, ClassOccupancy,
    GridCovering,
};
use crate::density::{normalized_model, DensityModel};
use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::rates::{schedule_values, RateSchedule};
use crate::sampling::{derive_trial_seed, sample};

/// Multipliers used for both M_r and M_eps in the reference sweep.
pub const REFERENCE_MULTIPLIERS: [f64; 8] = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: String,
    pub ns: Vec<u64>,
    #[serde(rename = "M_r_values")]
    pub m_r_values: Vec<f64>,
    #[serde(rename = "M_eps_values")]
    pub m_eps_values: Vec<f64>,
    pub eta: f64,
    pub psi: f64,
    pub replications: u32,
    pub base_seed: u64,
    /// Box to cover; defaults to the model's support.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

impl SweepConfig {
    /// Power-law segment model with eta = 0.21, psi = 0.01 and multipliers 0.05..0.40.
    pub fn reference(replications: u32, base_seed: u64) -> Self {
        SweepConfig {
            model: "powerlaw4_segment".into(),
            ns: vec![100, 1_000, 10_000],
            m_r_values: REFERENCE_MULTIPLIERS.to_vec(),
            m_eps_values: REFERENCE_MULTIPLIERS.to_vec(),
            eta: 0.21,
            psi: 0.01,
            replications,
            base_seed,
            region: None,
        }
    }

    fn resolve(&self) -> Result<(DensityModel, Region)> {
        let model = normalized_model(&self.model)?;
        if self.ns.is_empty() || self.ns.contains(&0) {
            return Err(Error::InvalidParameter(
                "ns must be a nonempty list of positive sizes".into(),
            ));
        }
        if self.m_r_values.is_empty() || self.m_eps_values.is_empty() {
            return Err(Error::InvalidParameter("multiplier lists must be nonempty".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be at least 1".into()));
        }
        for &m_r in &self.m_r_values {
            for &m_eps in &self.m_eps_values {
                RateSchedule::new(model.dim(), self.eta, self.psi, None, m_r, m_eps)?;
            }
        }
        let region = match (&self.region, model.support().region()) {
            (Some(r), _) => r.clone(),
            (None, Some(r)) => r,
            (None, None) => {
                return Err(Error::InvalidParameter(format!(
                    "{} has unbounded support; give a region",
                    self.model
                )))
            }
        };
        if region.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: region.dim(),
            });
        }
        Ok((model, region))
    }

    /// Checks the configuration without running it.
    pub fn validate(&self) -> Result<()> {
        self.resolve().map(|_| ())
    }
}

/// Outcome of one (n, M_r, M_eps, replication) trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyReport {
    pub model: String,
    pub n: u64,
    #[serde(rename = "M_r")]
    pub m_r: f64,
    #[serde(rename = "M_eps")]
    pub m_eps: f64,
    pub eta: f64,
    pub psi: f64,
    pub replication: u32,
    pub r: f64,
    pub eps: f64,
    pub inside: ClassOccupancy,
    pub neighboring: ClassOccupancy,
    pub outside: ClassOccupancy,
    #[serde(rename = "event_A")]
    pub event_a: bool,
    #[serde(rename = "event_B")]
    pub event_b: bool,
}

impl OccupancyReport {
    pub fn class(&self, c: BallClass) -> ClassOccupancy {
        match c {
            BallClass::EpsInside => self.inside,
            BallClass::EpsNeighboring => self.neighboring,
            BallClass::EpsOutside => self.outside,
        }
    }
}

/// A cell left out because its schedule violates 2 r <= eps < 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCell {
    pub n: u64,
    #[serde(rename = "M_r")]
    pub m_r: f64,
    #[serde(rename = "M_eps")]
    pub m_eps: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub reports: Vec<OccupancyReport>,
    pub skipped: Vec<SkippedCell>,
}

struct Prepared {
    n_idx: usize,
    m_r: f64,
    covering: GridCovering,
    distances: Vec<f64>,
    eps: Vec<(f64, f64)>,
}

/// Runs every feasible cell of the sweep on the current rayon pool.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let (model, region) = cfg.resolve()?;
    let mut skipped = Vec::new();
    let mut prepared = Vec::new();
    for (n_idx, &n) in cfg.ns.iter().enumerate() {
        for &m_r in &cfg.m_r_values {
            let mut eps = Vec::new();
            let mut r_n = None;
            for &m_eps in &cfg.m_eps_values {
                let s = RateSchedule::new(model.dim(), cfg.eta, cfg.psi, None, m_r, m_eps)?;
                match schedule_values(&s, n) {
                    Ok((r, e)) => {
                        r_n = Some(r);
                        eps.push((m_eps, e));
                    }
                    Err(e) => skipped.push(SkippedCell {
                        n,
                        m_r,
                        m_eps,
                        reason: e.to_string(),
                    }),
                }
            }
            if let Some(r) = r_n {
                let covering = build_grid_covering(&region, r)?;
                let distances = center_distances(&covering, model.zero_set())?;
                prepared.push(Prepared {
                    n_idx,
                    m_r,
                    covering,
                    distances,
                    eps,
                });
            }
        }
    }
    let tasks: Vec<(usize, u32)> = (0..cfg.ns.len())
        .flat_map(|i| (0..cfg.replications).map(move |rep| (i, rep)))
        .collect();
    let chunks: Vec<Result<Vec<OccupancyReport>>> = tasks
        .par_iter()
        .map(|&(n_idx, rep)| {
            let n = cfg.ns[n_idx];
            let seed = derive_trial_seed(derive_trial_seed(cfg.base_seed, n), rep as u64);
            let batch = sample(&model, n as usize, seed)?;
            let mut out = Vec::new();
            for p in prepared.iter().filter(|p| p.n_idx == n_idx) {
                let per_ball = p.covering.point_counts(&batch)?;
                for &(m_eps, eps) in &p.eps {
                    let classified = classify_with_distances(&p.covering, &p.distances, eps)?;
                    let occ = occupancy_from_counts(&classified, &per_ball);
                    out.push(OccupancyReport {
                        model: cfg.model.clone(),
                        n,
                        m_r: p.m_r,
                        m_eps,
                        eta: cfg.eta,
                        psi: cfg.psi,
                        replication: rep,
                        r: p.covering.radius(),
                        eps,
                        inside: occ.inside,
                        neighboring: occ.neighboring,
                        outside: occ.outside,
                        event_a: occ.event_a,
                        event_b: occ.event_b,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut reports = Vec::new();
    for c in chunks {
        reports.extend(c?);
    }
    reports.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.m_r.total_cmp(&b.m_r))
            .then(a.m_eps.total_cmp(&b.m_eps))
            .then(a.replication.cmp(&b.replication))
    });
    Ok(SweepOutput { reports, skipped })
}

pub const SWEEP_CSV_HEADER: [&str; 13] = [
    "model",
    "n",
    "M_r",
    "M_eps",
    "eta",
    "psi",
    "replication",
    "class",
    "n_balls",
    "n_nonempty",
    "fraction",
    "event_A",
    "event_B",
];

/// One row per (trial, class).
pub fn write_sweep_csv<W: Write>(w: W, reports: &[OccupancyReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_CSV_HEADER)?;
    for r in reports {
        for c in BallClass::ALL {
            let o = r.class(c);
            out.write_record([
                r.model.clone(),
                r.n.to_string(),
                r.m_r.to_string(),
                r.m_eps.to_string(),
                r.eta.to_string(),
                r.psi.to_string(),
                r.replication.to_string(),
                c.as_str().to_string(),
                o.n_balls.to_string(),
                o.n_nonempty.to_string(),
                o.fraction.to_string(),
                r.event_a.to_string(),
                r.event_b.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Averages over replications of one (n, M_r, M_eps) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: u64,
    #[serde(rename = "M_r")]
    pub m_r: f64,
    #[serde(rename = "M_eps")]
    pub m_eps: f64,
    pub replications: usize,
    pub mean_fraction_inside: f64,
    pub mean_fraction_neighboring: f64,
    pub mean_fraction_outside: f64,
    #[serde(rename = "rate_event_A")]
    pub rate_event_a: f64,
    #[serde(rename = "rate_event_B")]
    pub rate_event_b: f64,
}

impl CellSummary {
    pub fn mean_fraction(&self, c: BallClass) -> f64 {
        match c {
            BallClass::EpsInside => self.mean_fraction_inside,
            BallClass::EpsNeighboring => self.mean_fraction_neighboring,
            BallClass::EpsOutside => self.mean_fraction_outside,
        }
    }
}

/// Cell means, in the order the cells appear in `reports`.
pub fn summarize(reports: &[OccupancyReport]) -> Vec<CellSummary> {
    let mut out: Vec<CellSummary> = Vec::new();
    let mut i = 0;
    while i < reports.len() {
        let key = (reports[i].n, reports[i].m_r, reports[i].m_eps);
        let mut j = i;
        while j < reports.len() && (reports[j].n, reports[j].m_r, reports[j].m_eps) == key {
            j += 1;
        }
        let cell = &reports[i..j];
        let k = cell.len() as f64;
        let mean = |f: &dyn Fn(&OccupancyReport) -> f64| cell.iter().map(f).sum::<f64>() / k;
        out.push(CellSummary {
            n: key.0,
            m_r: key.1,
            m_eps: key.2,
            replications: cell.len(),
            mean_fraction_inside: mean(&|r| r.inside.fraction),
            mean_fraction_neighboring: mean(&|r| r.neighboring.fraction),
            mean_fraction_outside: mean(&|r| r.outside.fraction),
            rate_event_a: mean(&|r| f64::from(u8::from(r.event_a))),
            rate_event_b: mean(&|r| f64::from(u8::from(r.event_b))),
        });
        i = j;
    }
    out
}

pub fn write_summary_csv<W: Write>(w: W, model: &str, cells: &[CellSummary]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "model",
        "n",
        "M_r",
        "M_eps",
        "replications",
        "mean_fraction_inside",
        "mean_fraction_neighboring",
        "mean_fraction_outside",
        "rate_event_A",
        "rate_event_B",
    ])?;
    for c in cells {
        out.write_record([
            model.to_string(),
            c.n.to_string(),
            c.m_r.to_string(),
            c.m_eps.to_string(),
            c.replications.to_string(),
            c.mean_fraction_inside.to_string(),
            c.mean_fraction_neighboring.to_string(),
            c.mean_fraction_outside.to_string(),
            c.rate_event_a.to_string(),
            c.rate_event_b.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
