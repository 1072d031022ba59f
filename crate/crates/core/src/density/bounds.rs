use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Region, ZeroSet};
use crate::stats::least_squares_slope;

use super::{DensityForm, DensityModel, Explicit1D};

/// Largest grid the fallback minimizer is willing to scan.
const MAX_GRID_POINTS: u128 = 50_000_000;
const SHELL_DIRECTIONS: usize = 512;
const DIRECTION_SEED: u64 = 0x00d1_2ec7_10a5;
/// Multiplier applied to grid-searched suprema.
pub const SUP_SAFETY: f64 = 1.001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessEstimate {
    /// Slope of the min-over-directions envelope.
    pub upper: f64,
    /// Slope of the max-over-directions envelope.
    pub lower: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimizationMethod {
    Analytic,
    GridSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinOutside {
    pub value: f64,
    pub method: MinimizationMethod,
}

fn directions(d: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..SHELL_DIRECTIONS)
            .map(|j| {
                let a = std::f64::consts::TAU * j as f64 / SHELL_DIRECTIONS as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
            let mut out = Vec::with_capacity(SHELL_DIRECTIONS);
            while out.len() < SHELL_DIRECTIONS {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-3 && n <= 1.0 {
                    out.push(v.into_iter().map(|x| x / n).collect());
                }
            }
            out
        }
    }
}

/// Point at distance exactly `delta` from `s`, moving from `origin` along `u`.
fn point_on_shell(s: &ZeroSet, origin: &[f64], u: &[f64], delta: f64) -> Option<Vec<f64>> {
    let at = |t: f64| -> Vec<f64> { origin.iter().zip(u).map(|(o, v)| o + t * v).collect() };
    let mut hi = 2.0 * delta + 1.0;
    let mut n = 0;
    while s.distance(&at(hi)) < delta {
        hi *= 2.0;
        n += 1;
        if n > 60 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if s.distance(&at(mid)) < delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(at(hi))
}

/// Empirical orders of smoothness from directional shells around each component.
pub fn estimate_smoothness(model: &DensityModel, shells: &[f64]) -> Result<SmoothnessEstimate> {
    model.normalizer()?;
    let s = model
        .zero_set()
        .ok_or_else(|| Error::InvalidParameter(format!("{} has an empty zero set", model.id())))?;
    if shells.len() < 2 {
        return Err(Error::InvalidParameter("need at least two shell radii".into()));
    }
    if shells.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter(
            "shell radii must be strictly decreasing".into(),
        ));
    }
    if shells.iter().any(|&r| !(r > 0.0 && r < model.eps0())) {
        return Err(Error::InvalidParameter(format!(
            "shell radii must lie in (0, {})",
            model.eps0()
        )));
    }
    let dirs = directions(model.dim());
    let mut log_delta = Vec::with_capacity(shells.len());
    let mut log_max = Vec::with_capacity(shells.len());
    let mut log_min = Vec::with_capacity(shells.len());
    for &delta in shells {
        let mut fmax = f64::NEG_INFINITY;
        let mut fmin = f64::INFINITY;
        for c in s.components() {
            let origin = c.center();
            for u in &dirs {
                let x = point_on_shell(s, &origin, u, delta)
                    .ok_or_else(|| Error::InvalidParameter(format!("no point at distance {delta}")))?;
                if !model.support().contains(&x) {
                    return Err(Error::InvalidParameter(format!(
                        "shell of radius {delta} leaves the support at {x:?}"
                    )));
                }
                let f = model.value(&x)?;
                fmax = fmax.max(f);
                fmin = fmin.min(f);
            }
        }
        if !(fmin > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density vanishes on the shell of radius {delta}"
            )));
        }
        log_delta.push(delta.ln());
        log_max.push(fmax.ln());
        log_min.push(fmin.ln());
    }
    Ok(SmoothnessEstimate {
        upper: least_squares_slope(&log_delta, &log_min),
        lower: least_squares_slope(&log_delta, &log_max),
    })
}

fn clip_to_support(model: &DensityModel, region: &Region) -> Result<Region> {
    match model.support().region() {
        None => Ok(region.clone()),
        Some(sup) => {
            let lower: Vec<f64> = region.lower().iter().zip(sup.lower()).map(|(a, b)| a.max(*b)).collect();
            let upper: Vec<f64> = region.upper().iter().zip(sup.upper()).map(|(a, b)| a.min(*b)).collect();
            Region::new(lower, upper)
                .map_err(|_| Error::EmptyRegion(format!("region does not meet the support of {}", model.id())))
        }
    }
}

/// Minimum of the density over `region` outside the open eps-neighborhood of S0.
pub fn min_outside_neighborhood(model: &DensityModel, eps: f64, region: &Region) -> Result<MinOutside> {
    let z = model.normalizer()?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if region.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: region.dim(),
        });
    }
    let region = clip_to_support(model, region)?;
    if let Some(s) = model.zero_set() {
        let dmax = s.max_distance_over(&region);
        if dmax < eps {
            return Err(Error::EmptyRegion(format!(
                "every point of the region lies within {eps} of the zero set"
            )));
        }
        if model.radial_profile(1.0).is_some() {
            // the profiles are unimodal in the distance, so the minimum sits at an end
            let lo = eps.max(s.min_distance_to(&region));
            let phi = |r: f64| model.radial_profile(r).expect("radial model");
            return Ok(MinOutside {
                value: phi(lo).min(phi(dmax)) / z,
                method: MinimizationMethod::Analytic,
            });
        }
    }
    grid_minimum(model, eps, &region).map(|value| MinOutside {
        value,
        method: MinimizationMethod::GridSearch,
    })
}

fn grid_shape(region: &Region, step: f64) -> Result<Vec<usize>> {
    let shape: Vec<usize> = (0..region.dim())
        .map(|k| (region.side(k) / step).ceil() as usize + 1)
        .collect();
    let total: u128 = shape.iter().map(|&n| n as u128).product();
    if total > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid search would need {total} points"
        )));
    }
    Ok(shape)
}

fn grid_point(region: &Region, shape: &[usize], mut idx: usize, out: &mut [f64]) {
    for k in (0..shape.len()).rev() {
        let i = idx % shape[k];
        idx /= shape[k];
        let t = i as f64 / (shape[k] - 1) as f64;
        out[k] = region.lower()[k] + t * region.side(k);
    }
}

fn grid_minimum(model: &DensityModel, eps: f64, region: &Region) -> Result<f64> {
    let shape = grid_shape(region, eps / 100.0)?;
    let total: usize = shape.iter().product();
    let d = region.dim();
    let best = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |x, i| {
                grid_point(region, &shape, i, x);
                if model.distance(x) >= eps {
                    model.raw(x)
                } else {
                    f64::INFINITY
                }
            },
        )
        .reduce(|| f64::INFINITY, f64::min);
    if best.is_infinite() {
        return Err(Error::EmptyRegion("no grid point lies outside the neighborhood".into()));
    }
    Ok(best / model.normalizer()?)
}

fn grid_maximum(model: &DensityModel, region: &Region, step: f64) -> Result<f64> {
    let shape = grid_shape(region, step)?;
    let total: usize = shape.iter().product();
    let d = region.dim();
    Ok((0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |x, i| {
                grid_point(region, &shape, i, x);
                model.raw(x)
            },
        )
        .reduce(|| 0.0, f64::max))
}

/// Supremum of the normalized density.
pub fn sup_density(model: &DensityModel) -> Result<f64> {
    let z = model.normalizer()?;
    let raw = match model.form() {
        DensityForm::PolynomialTail { c1, gamma, eps0, .. } | DensityForm::ExponentialTail { c1, gamma, eps0, .. } => {
            c1 * eps0.powf(gamma)
        }
        DensityForm::PowerLaw { .. } => {
            let region = model.support().region().expect("compact support");
            let s = model.zero_set().expect("power-law models carry a zero set");
            model
                .radial_profile(s.max_distance_over(&region))
                .expect("radial model")
        }
        DensityForm::Explicit1D(Explicit1D::FQuadratic) => 1.5,
        DensityForm::Explicit1D(Explicit1D::GTwoBumps) => 2.0 / 3.0,
        DensityForm::Explicit1D(Explicit1D::HParabolic) => 0.75,
        DensityForm::AnisotropicExample2 => {
            let region = model.support().region().expect("compact support");
            SUP_SAFETY * grid_maximum(model, &region, 1e-3)?
        }
    };
    Ok(raw / z)
}
