//! Deterministic i.i.d. sampling from catalog densities.
//!
//! Every batch is drawn from a `ChaCha8Rng` (crate `rand_chacha` 0.9) seeded with
//! `seed_from_u64`, so `(model, n, seed)` fixes the output bit for bit.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::density::{sup_density, DensityForm, DensityModel, Explicit1D};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Name and version of the generator behind every sample.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9)";

const MIN_ACCEPTANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    model_id: String,
    seed: u64,
    dim: usize,
    coords: Vec<f64>,
}

impl SampleBatch {
    /// Batch from flat row-major coordinates.
    pub fn from_coords(model_id: impl Into<String>, seed: u64, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(SampleBatch {
            model_id: model_id.into(),
            seed,
            dim,
            coords,
        })
    }

    pub fn empty(model_id: impl Into<String>, dim: usize) -> Self {
        SampleBatch {
            model_id: model_id.into(),
            seed: 0,
            dim,
            coords: Vec::new(),
        }
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_points(&self) -> Vec<Point> {
        self.points()
            .map(|p| Point::new(p.to_vec()).expect("samples are finite"))
            .collect()
    }

    /// Keeps only the points accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&[f64]) -> bool) -> SampleBatch {
        let coords = self.points().filter(|p| keep(p)).flatten().copied().collect();
        SampleBatch {
            model_id: self.model_id.clone(),
            seed: self.seed,
            dim: self.dim,
            coords,
        }
    }

    /// CSV with header `x1..xd`, one row per point.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record((1..=self.dim).map(|k| format!("x{k}")))?;
        for p in self.points() {
            out.write_record(p.iter().map(|v| v.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Seed for trial `trial_index` of a run started from `base_seed`.
///
/// Multiplying by an odd constant, xoring and the splitmix64 finalizer are all
/// bijections of u64, so distinct trial indices never share a seed.
pub fn derive_trial_seed(base_seed: u64, trial_index: u64) -> u64 {
    let mut z = base_seed ^ trial_index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draws `n` i.i.d. points from a normalized model.
pub fn sample(model: &DensityModel, n: usize, seed: u64) -> Result<SampleBatch> {
    let z = model.normalizer()?;
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = match model.form() {
        DensityForm::Explicit1D(e) => (0..n).map(|_| explicit_inverse_cdf(e, rng.random::<f64>())).collect(),
        DensityForm::PolynomialTail { .. } | DensityForm::ExponentialTail { .. } => {
            tail_mixture(model, z, n, &mut rng)?
        }
        _ => rejection(model, n, &mut rng)?,
    };
    SampleBatch::from_coords(model.id(), seed, model.dim(), coords)
}

/// Inverse CDF of the explicit univariate densities.
pub fn explicit_inverse_cdf(e: Explicit1D, u: f64) -> f64 {
    match e {
        Explicit1D::FQuadratic => (2.0 * u - 1.0).cbrt(),
        Explicit1D::GTwoBumps => {
            if u < 0.5 {
                -1.0 + 1.5 * u
            } else {
                0.25 + 1.5 * (u - 0.5)
            }
        }
        Explicit1D::HParabolic => {
            // F(x) = (x^3 + 3x)/8 + 1/2; depressed cubic with p = 3
            let q = 4.0 - 8.0 * u;
            let disc = (0.25 * q * q + 1.0).sqrt();
            (-0.5 * q + disc).cbrt() + (-0.5 * q - disc).cbrt()
        }
    }
}

fn tail_mixture(model: &DensityModel, z: f64, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let center = model.tail_center().expect("tail model")[0];
    if model.dim() != 1 {
        return Err(Error::Unsupported {
            model: model.id().into(),
            what: "tail sampling beyond d = 1".into(),
        });
    }
    let (c1, gamma, eps0) = match model.form() {
        DensityForm::PolynomialTail { c1, gamma, eps0, .. } | DensityForm::ExponentialTail { c1, gamma, eps0, .. } => {
            (c1, gamma, eps0)
        }
        _ => unreachable!(),
    };
    let p_near = 2.0 * c1 * eps0.powf(gamma + 1.0) / (gamma + 1.0) / z;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = 1.0 - rng.random::<f64>();
        let r = if rng.random::<f64>() < p_near {
            eps0 * u.powf(1.0 / (gamma + 1.0))
        } else {
            match model.form() {
                DensityForm::PolynomialTail { chi, .. } => eps0 * u.powf(1.0 / (chi + 1.0)),
                DensityForm::ExponentialTail { beta, .. } => eps0 + u.ln() / beta,
                _ => unreachable!(),
            }
        };
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        out.push(center + sign * r);
    }
    Ok(out)
}

fn rejection(model: &DensityModel, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let region = model.support().region().expect("compact support");
    let z = model.normalizer()?;
    let envelope = sup_density(model)? * z;
    let expected = z / (envelope * region.volume());
    if expected < MIN_ACCEPTANCE {
        return Err(Error::LowAcceptance { rate: expected });
    }
    let d = model.dim();
    let mut out = Vec::with_capacity(n * d);
    let mut x = vec![0.0; d];
    let mut proposals: u64 = 0;
    let mut accepted: u64 = 0;
    while accepted < n as u64 {
        for (k, xk) in x.iter_mut().enumerate() {
            *xk = region.lower()[k] + region.side(k) * rng.random::<f64>();
        }
        let f = model.raw(&x);
        if f > envelope {
            return Err(Error::EnvelopeViolated {
                value: f / z,
                envelope: envelope / z,
            });
        }
        proposals += 1;
        if rng.random::<f64>() * envelope < f {
            out.extend_from_slice(&x);
            accepted += 1;
        }
        if proposals >= 1_000_000 && (accepted as f64) < MIN_ACCEPTANCE * proposals as f64 {
            return Err(Error::LowAcceptance {
                rate: accepted as f64 / proposals as f64,
            });
        }
    }
    Ok(out)
}

/// Acceptance rate of the rejection sampler measured over `proposals` draws.
pub fn measured_acceptance(model: &DensityModel, proposals: usize, seed: u64) -> Result<f64> {
    let region = model.support().region().ok_or_else(|| Error::Unsupported {
        model: model.id().into(),
        what: "rejection on unbounded support".into(),
    })?;
    let envelope = sup_density(model)? * model.normalizer()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; model.dim()];
    let mut accepted = 0usize;
    for _ in 0..proposals {
        for (k, xk) in x.iter_mut().enumerate() {
            *xk = region.lower()[k] + region.side(k) * rng.random::<f64>();
        }
        if rng.random::<f64>() * envelope < model.raw(&x) {
            accepted += 1;
        }
    }
    Ok(accepted as f64 / proposals as f64)
}
