//! Pilot Monte Carlo runs that calibrate the thresholds of the heatmap and
//! reconstruction checks. The committed fixture is produced by
//! `cargo run --release -p zeroset --example pilot`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::{build_grid_covering, classify_covering};
use crate::density::normalized_model;
use crate::error::{Error, Result};
use crate::rates::{schedule_values, RateSchedule};
use crate::sampling::{derive_trial_seed, sample};

use super::{heatmap_1d, reconstruct_s0};

pub const PILOT_FIXTURE: &str = include_str!("../../fixtures/pilot_thresholds.json");

pub const HEATMAP_N: usize = 10_000;
pub const HEATMAP_BINS: usize = 100;
pub const RECONSTRUCTION_MODEL: &str = "powerlaw4_segment";
pub const RECONSTRUCTION_ETA: f64 = 0.21;
pub const RECONSTRUCTION_PSI: f64 = 0.01;
pub const RECONSTRUCTION_M: f64 = 0.40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PilotConfig {
    pub replications: u32,
    pub base_seed: u64,
    /// Replications the calibrated checks will run with.
    pub heatmap_test_replications: u32,
    pub reconstruction_test_replications: u32,
    pub reconstruction_n: u64,
}

impl Default for PilotConfig {
    fn default() -> Self {
        PilotConfig {
            replications: 200,
            base_seed: 0x5eed_0f91_1075,
            heatmap_test_replications: 200,
            reconstruction_test_replications: 50,
            reconstruction_n: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PilotThresholds {
    pub config: PilotConfig,
    /// Share of runs where f_quadratic leaves both central bins empty.
    pub heatmap_f_central_empty_rate: f64,
    /// Share of runs where h_parabolic leaves some bin empty.
    pub heatmap_h_any_empty_rate: f64,
    /// Lower threshold on the difference of the two rates above.
    pub heatmap_margin_min: f64,
    /// Share of runs with directed Hausdorff from S0 at most eps + r.
    pub reconstruction_hit_rate: f64,
    pub reconstruction_hit_rate_min: f64,
    pub reconstruction_median_from_s0: f64,
}

/// The committed calibration.
pub fn pilot_thresholds() -> Result<PilotThresholds> {
    Ok(serde_json::from_str(PILOT_FIXTURE)?)
}

/// Rates of "both central bins of f empty" and "some bin of h empty".
pub fn heatmap_dichotomy_rates(seeds: &[u64]) -> Result<(f64, f64)> {
    let mid = HEATMAP_BINS / 2;
    let hits: Vec<(bool, bool)> = seeds
        .par_iter()
        .map(|&s| {
            let f = heatmap_1d("f_quadratic", HEATMAP_N, HEATMAP_BINS, s)?;
            let h = heatmap_1d("h_parabolic", HEATMAP_N, HEATMAP_BINS, derive_trial_seed(s, 1))?;
            Ok((!f[mid - 1] && !f[mid], h.iter().any(|b| !b)))
        })
        .collect::<Result<_>>()?;
    let k = seeds.len() as f64;
    Ok((
        hits.iter().filter(|h| h.0).count() as f64 / k,
        hits.iter().filter(|h| h.1).count() as f64 / k,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionTrial {
    pub r: f64,
    pub eps: f64,
    pub n_empty: usize,
    pub from_s0: f64,
    pub to_s0: f64,
}

impl ReconstructionTrial {
    pub fn hit(&self) -> bool {
        self.from_s0 <= self.eps + self.r
    }
}

/// Empty-ball reconstruction for the power-law segment model at size `n`.
pub fn reconstruction_trial(n: u64, seed: u64) -> Result<ReconstructionTrial> {
    let model = normalized_model(RECONSTRUCTION_MODEL)?;
    let sched = RateSchedule::new(
        model.dim(),
        RECONSTRUCTION_ETA,
        RECONSTRUCTION_PSI,
        None,
        RECONSTRUCTION_M,
        RECONSTRUCTION_M,
    )?;
    let (r, eps) = schedule_values(&sched, n)?;
    let region = model
        .support()
        .region()
        .ok_or_else(|| Error::InvalidParameter("unbounded support".into()))?;
    let cov = build_grid_covering(&region, r)?;
    let cls = classify_covering(&cov, model.zero_set(), eps)?;
    let batch = sample(&model, n as usize, seed)?;
    let per_ball = cov.point_counts(&batch)?;
    let rec = reconstruct_s0(&cls, &per_ball, model.zero_set())?;
    Ok(ReconstructionTrial {
        r,
        eps,
        n_empty: rec.len(),
        from_s0: rec.directed_hausdorff_from_s0,
        to_s0: rec.directed_hausdorff_to_s0,
    })
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn floor2(x: f64) -> f64 {
    (x * 100.0).floor() / 100.0
}

/// Lower threshold for a rate: pilot estimate minus three standard errors of
/// the pilot-test difference, minus 0.02, rounded down to two decimals.
fn rate_floor(p: &[f64], pilot: u32, test: u32) -> f64 {
    let est: f64 = p.iter().enumerate().map(|(i, x)| if i == 0 { *x } else { -x }).sum();
    let var: f64 = p
        .iter()
        .map(|x| x * (1.0 - x) * (1.0 / pilot as f64 + 1.0 / test as f64))
        .sum();
    floor2(est - 3.0 * var.sqrt() - 0.02).clamp(0.0, 1.0)
}

pub fn run_pilot(cfg: PilotConfig) -> Result<PilotThresholds> {
    if cfg.replications == 0 {
        return Err(Error::InvalidParameter("pilot needs replications".into()));
    }
    let seeds: Vec<u64> = (0..cfg.replications as u64)
        .map(|i| derive_trial_seed(cfg.base_seed, i))
        .collect();
    let (pf, ph) = heatmap_dichotomy_rates(&seeds)?;
    let trials: Vec<ReconstructionTrial> = seeds
        .par_iter()
        .map(|&s| reconstruction_trial(cfg.reconstruction_n, derive_trial_seed(s, 9)))
        .collect::<Result<_>>()?;
    let pr = trials.iter().filter(|t| t.hit()).count() as f64 / trials.len() as f64;
    let mut from: Vec<f64> = trials.iter().map(|t| t.from_s0).collect();
    Ok(PilotThresholds {
        config: cfg,
        heatmap_f_central_empty_rate: pf,
        heatmap_h_any_empty_rate: ph,
        heatmap_margin_min: rate_floor(&[pf, ph], cfg.replications, cfg.heatmap_test_replications),
        reconstruction_hit_rate: pr,
        reconstruction_hit_rate_min: rate_floor(&[pr], cfg.replications, cfg.reconstruction_test_replications),
        reconstruction_median_from_s0: median(&mut from),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses_and_is_sane() {
        let t = pilot_thresholds().unwrap();
        assert!(t.heatmap_margin_min > 0.0 && t.heatmap_margin_min < 1.0);
        assert!(t.reconstruction_hit_rate_min > 0.0 && t.reconstruction_hit_rate_min <= t.reconstruction_hit_rate);
        assert_eq!(t.config, PilotConfig::default());
    }

    #[test]
    fn thresholds_sit_below_estimates() {
        assert_eq!(rate_floor(&[1.0], 200, 50), 0.98);
        assert!(rate_floor(&[0.9, 0.0], 200, 200) < 0.9);
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
