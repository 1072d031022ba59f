use rayon::prelude::*;
use serde::Serialize;

use crate::covering::ClassifiedCovering;
use crate::error::{Error, Result};
use crate::geometry::{squared_distance, ZeroSet};

/// Centers of empty balls, with directed Hausdorff distances to and from the
/// true zero set. Distances are infinite when either side is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionResult {
    pub estimate: Vec<Vec<f64>>,
    pub directed_hausdorff_to_s0: f64,
    pub directed_hausdorff_from_s0: f64,
}

impl ReconstructionResult {
    pub fn len(&self) -> usize {
        self.estimate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimate.is_empty()
    }
}

pub fn reconstruct_s0(
    c: &ClassifiedCovering<'_>,
    per_ball: &[u32],
    s_true: Option<&ZeroSet>,
) -> Result<ReconstructionResult> {
    let cov = c.covering();
    if per_ball.len() != cov.len() {
        return Err(Error::InvalidParameter(format!(
            "{} ball counts for a covering of {} balls",
            per_ball.len(),
            cov.len()
        )));
    }
    let estimate: Vec<Vec<f64>> = per_ball
        .iter()
        .enumerate()
        .filter(|(_, n)| **n == 0)
        .map(|(i, _)| cov.center(i).to_vec())
        .collect();
    let (to_s0, from_s0) = match s_true {
        Some(s) if !estimate.is_empty() => {
            if s.ambient_dim() != cov.dim() {
                return Err(Error::DimensionMismatch {
                    expected: cov.dim(),
                    got: s.ambient_dim(),
                });
            }
            let to = estimate.par_iter().map(|x| s.distance(x)).reduce(|| 0.0, f64::max);
            let from = s
                .discretize(cov.grid_step() / 8.0)
                .par_iter()
                .map(|p| {
                    estimate
                        .iter()
                        .map(|x| squared_distance(p, x))
                        .fold(f64::INFINITY, f64::min)
                        .sqrt()
                })
                .reduce(|| 0.0, f64::max);
            (to, from)
        }
        _ => (f64::INFINITY, f64::INFINITY),
    };
    Ok(ReconstructionResult {
        estimate,
        directed_hausdorff_to_s0: to_s0,
        directed_hausdorff_from_s0: from_s0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{build_grid_covering, classify_covering};
    use crate::geometry::{Point, Region, ZeroSetPrimitive};

    fn segment() -> ZeroSet {
        let p = |v: [f64; 2]| Point::new(v.to_vec()).unwrap();
        ZeroSet::single(ZeroSetPrimitive::segment(p([0.5, 0.25]), p([0.5, 0.75])).unwrap())
    }

    #[test]
    fn empty_inside_balls_recover_the_segment() {
        let cov = build_grid_covering(&Region::unit_cube(2).unwrap(), 0.05).unwrap();
        let s = segment();
        let cls = classify_covering(&cov, Some(&s), 0.1).unwrap();
        let per_ball: Vec<u32> = (0..cov.len())
            .map(|i| u32::from(s.distance(cov.center(i)) >= 0.05))
            .collect();
        let rec = reconstruct_s0(&cls, &per_ball, Some(&s)).unwrap();
        assert!(!rec.is_empty());
        assert!(rec.directed_hausdorff_to_s0 < 0.05);
        assert!(rec.directed_hausdorff_from_s0 <= cov.grid_step());
    }

    #[test]
    fn empty_estimate_is_infinite_and_serializes_as_null() {
        let cov = build_grid_covering(&Region::unit_cube(2).unwrap(), 0.1).unwrap();
        let cls = classify_covering(&cov, Some(&segment()), 0.2).unwrap();
        let rec = reconstruct_s0(&cls, &vec![1; cov.len()], Some(&segment())).unwrap();
        assert!(rec.directed_hausdorff_to_s0.is_infinite());
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"directed_hausdorff_to_s0\":null"));
        assert!(reconstruct_s0(&cls, &[0, 1], None).is_err());
    }
}
