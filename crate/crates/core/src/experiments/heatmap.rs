use std::io::Write;

use crate::density::normalized_model;
use crate::error::{Error, Result};
use crate::sampling::{sample, SampleBatch};

/// Occupancy of `bins` equal bins over [-1, 1]; points outside are ignored.
pub fn heatmap_from_batch(batch: &SampleBatch, bins: usize) -> Result<Vec<bool>> {
    if batch.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: batch.dim(),
        });
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("bins must be positive".into()));
    }
    let mut hit = vec![false; bins];
    for &x in batch.coords() {
        if !(-1.0..=1.0).contains(&x) {
            continue;
        }
        let b = (((x + 1.0) / 2.0 * bins as f64).floor() as usize).min(bins - 1);
        hit[b] = true;
    }
    Ok(hit)
}

/// Samples `n` points from a 1-D catalog model and bins them.
pub fn heatmap_1d(model_id: &str, n: usize, bins: usize, seed: u64) -> Result<Vec<bool>> {
    let model = normalized_model(model_id)?;
    if model.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: model.dim(),
        });
    }
    heatmap_from_batch(&sample(&model, n, seed)?, bins)
}

pub fn write_heatmap_csv<W: Write>(w: W, rows: &[(String, Vec<bool>)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["model", "bin", "left", "right", "occupied"])?;
    for (id, hits) in rows {
        let width = 2.0 / hits.len() as f64;
        for (b, h) in hits.iter().enumerate() {
            let left = -1.0 + b as f64 * width;
            out.write_record([
                id.clone(),
                b.to_string(),
                left.to_string(),
                (left + width).to_string(),
                u8::from(*h).to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
