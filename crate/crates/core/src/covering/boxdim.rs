//! Box-counting (Minkowski) dimension of zero sets from closed-form covering numbers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{euclidean, ZeroSet, ZeroSetPrimitive};
use crate::rates::ball_volume;

const COUNT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxCount {
    pub delta: f64,
    /// Volume/packing lower bound on the minimal number of delta-balls.
    pub lower: u64,
    /// Count of an explicit covering; used for the dimension estimate.
    pub upper: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDimension {
    pub upper_estimate: f64,
    pub lower_estimate: f64,
    pub counts: Vec<BoxCount>,
}

fn ceil_count(x: f64) -> u64 {
    ((x - COUNT_SLACK).ceil().max(1.0)) as u64
}

/// Lower and upper bounds on the number of delta-balls needed to cover `p`.
///
/// Points and segments are exact: a segment of length L needs ceil(L / 2 delta) balls.
/// A box of intrinsic dimension k is covered by cubes of side 2 delta / sqrt(k), each
/// inside one ball; its volume over that of a k-ball gives the lower bound.
pub fn covering_number_bounds(p: &ZeroSetPrimitive, delta: f64) -> (u64, u64) {
    match p {
        ZeroSetPrimitive::SinglePoint(_) => (1, 1),
        ZeroSetPrimitive::Segment { a, b } => {
            let n = ceil_count(euclidean(a, b) / (2.0 * delta));
            (n, n)
        }
        ZeroSetPrimitive::AxisBox { lower, upper } => {
            let sides: Vec<f64> = lower
                .iter()
                .zip(upper.iter())
                .map(|(l, u)| u - l)
                .filter(|s| *s > 0.0)
                .collect();
            let k = sides.len();
            if k == 0 {
                return (1, 1);
            }
            let cube = 2.0 * delta / (k as f64).sqrt();
            let upper_count: u64 = sides.iter().map(|s| ceil_count(s / cube)).product();
            let vol: f64 = sides.iter().product();
            let lower_count = ceil_count(vol / ball_volume(k, delta));
            (lower_count.min(upper_count), upper_count)
        }
    }
}

/// Covering counts per delta and the extreme consecutive slopes of
/// log N against log(1/delta).
pub fn box_counting_dimension(s: &ZeroSet, deltas: &[f64]) -> Result<BoxDimension> {
    if deltas.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 deltas, got {}",
            deltas.len()
        )));
    }
    if deltas.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
        return Err(Error::InvalidParameter("deltas must be positive and finite".into()));
    }
    if deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("deltas must be strictly decreasing".into()));
    }
    let counts: Vec<BoxCount> = deltas
        .iter()
        .map(|&delta| {
            let (lower, upper) = s
                .components()
                .iter()
                .map(|c| covering_number_bounds(c, delta))
                .fold((0, 0), |(a, b), (l, u)| (a + l, b + u));
            BoxCount { delta, lower, upper }
        })
        .collect();
    let slopes: Vec<f64> = counts
        .windows(2)
        .map(|w| ((w[1].upper as f64).ln() - (w[0].upper as f64).ln()) / (w[0].delta.ln() - w[1].delta.ln()))
        .collect();
    Ok(BoxDimension {
        upper_estimate: slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        lower_estimate: slopes.iter().copied().fold(f64::INFINITY, f64::min),
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    const DELTAS: [f64; 4] = [0.05, 0.025, 0.0125, 0.00625];

    #[test]
    fn segment_counts() {
        let seg = ZeroSetPrimitive::segment(pt(&[0.5, 0.25]), pt(&[0.5, 0.75])).unwrap();
        assert_eq!(covering_number_bounds(&seg, 0.05), (5, 5));
        let est = box_counting_dimension(&ZeroSet::single(seg), &DELTAS).unwrap();
        assert!((est.upper_estimate - 1.0).abs() < 0.15 && (est.lower_estimate - 1.0).abs() < 0.15);
    }

    #[test]
    fn point_has_dimension_zero() {
        let p = ZeroSet::single(ZeroSetPrimitive::point(pt(&[0.3, 0.3])));
        let est = box_counting_dimension(&p, &DELTAS).unwrap();
        assert!(est.counts.iter().all(|c| c.upper == 1 && c.lower == 1));
        assert_eq!(est.upper_estimate, 0.0);
    }

    #[test]
    fn square_bounds_bracket() {
        let sq = ZeroSetPrimitive::axis_box(pt(&[0.0, 0.0]), pt(&[1.0, 1.0])).unwrap();
        for d in DELTAS {
            let (lo, hi) = covering_number_bounds(&sq, d);
            assert!(lo <= hi);
            assert!(lo as f64 >= 1.0 / (std::f64::consts::PI * d * d));
        }
        let est = box_counting_dimension(&ZeroSet::single(sq), &DELTAS).unwrap();
        assert!(
            (est.upper_estimate - 2.0).abs() < 0.15 && (est.lower_estimate - 2.0).abs() < 0.15,
            "{est:?}"
        );
    }

    #[test]
    fn union_adds_counts() {
        let a = ZeroSetPrimitive::segment(pt(&[0.0, 0.0]), pt(&[0.5, 0.0])).unwrap();
        let b = ZeroSetPrimitive::point(pt(&[0.0, 1.0]));
        let s = ZeroSet::new(vec![a, b]).unwrap();
        let est = box_counting_dimension(&s, &DELTAS).unwrap();
        assert_eq!(est.counts[0].upper, 6);
    }

    #[test]
    fn delta_preconditions() {
        let p = ZeroSet::single(ZeroSetPrimitive::point(pt(&[0.0])));
        assert!(box_counting_dimension(&p, &[0.1, 0.05, 0.02]).is_err());
        assert!(box_counting_dimension(&p, &[0.1, 0.05, 0.06, 0.01]).is_err());
        assert!(box_counting_dimension(&p, &[0.1, 0.05, 0.02, 0.0]).is_err());
    }
}
