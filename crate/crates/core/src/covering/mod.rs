//! Grid coverings by equal open balls, their classification against a zero set,
//! and occupancy counting.

mod boxdim;

pub use boxdim::{box_counting_dimension, covering_number_bounds, BoxCount, BoxDimension};

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, Ball, Point, Region, ZeroSet};
use crate::sampling::SampleBatch;

/// Slack when flooring side/step so exact multiples are not lost to rounding.
const LATTICE_SLACK: f64 = 1e-9;

/// Balls of radius `r` centered on the lattice `lower + step * N^d` inside a box,
/// with `step = r / d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCovering {
    region: Region,
    radius: f64,
    step: f64,
    shape: Vec<usize>,
    centers: Vec<f64>,
}

/// Builds the lattice covering of `region` by balls of radius `r`.
pub fn build_grid_covering(region: &Region, r: f64) -> Result<GridCovering> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    if r > 0.5 * region.min_side() {
        return Err(Error::InvalidParameter(format!(
            "radius {r} exceeds half the shortest side {}",
            region.min_side()
        )));
    }
    let d = region.dim();
    let step = r / d as f64;
    let shape: Vec<usize> = (0..d)
        .map(|k| (region.side(k) / step + LATTICE_SLACK).floor() as usize + 1)
        .collect();
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            (0..shape[k])
                .map(|j| (region.lower()[k] + j as f64 * step).min(region.upper()[k]))
                .collect()
        })
        .collect();
    let total: usize = shape.iter().product();
    let mut centers = Vec::with_capacity(total * d);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        for k in 0..d {
            centers.push(axes[k][idx[k]]);
        }
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(GridCovering {
        region: region.clone(),
        radius: r,
        step,
        shape,
        centers,
    })
}

impl GridCovering {
    pub fn len(&self) -> usize {
        self.centers.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid_step(&self) -> f64 {
        self.step
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// Lattice nodes per axis.
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn center(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.centers[i * d..(i + 1) * d]
    }

    pub fn centers(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.centers.chunks_exact(self.dim())
    }

    pub fn ball(&self, i: usize) -> Ball {
        Ball::new(
            Point::new(self.center(i).to_vec()).expect("finite centers"),
            self.radius,
        )
        .expect("positive radius")
    }

    /// Calls `visit` with the index of every ball whose open interior contains `x`.
    pub fn for_each_ball_containing(&self, x: &[f64], mut visit: impl FnMut(usize)) {
        let d = self.dim();
        let mut lo = vec![0usize; d];
        let mut hi = vec![0usize; d];
        for k in 0..d {
            let rel = x[k] - self.region.lower()[k];
            let a = ((rel - self.radius) / self.step).ceil() - 1.0;
            let b = ((rel + self.radius) / self.step).floor() + 1.0;
            let last = (self.shape[k] - 1) as f64;
            if b < 0.0 || a > last {
                return;
            }
            lo[k] = a.max(0.0) as usize;
            hi[k] = b.min(last) as usize;
        }
        let mut idx = lo.clone();
        loop {
            let flat = self.shape.iter().zip(&idx).fold(0usize, |f, (s, i)| f * s + i);
            if squared_distance(self.center(flat), x).sqrt() < self.radius {
                visit(flat);
            }
            let mut k = d;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if idx[k] < hi[k] {
                    idx[k] += 1;
                    break;
                }
                idx[k] = lo[k];
            }
        }
    }

    /// Number of sample points strictly inside each ball.
    pub fn point_counts(&self, batch: &SampleBatch) -> Result<Vec<u32>> {
        if !batch.is_empty() && batch.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: batch.dim(),
            });
        }
        let m = self.len();
        let d = self.dim().max(1);
        Ok(batch
            .coords()
            .par_chunks(4096 * d)
            .fold(
                || vec![0u32; m],
                |mut acc, chunk| {
                    for x in chunk.chunks_exact(d) {
                        self.for_each_ball_containing(x, |i| acc[i] += 1);
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u32; m],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallClass {
    EpsInside,
    EpsNeighboring,
    EpsOutside,
}

impl BallClass {
    pub const ALL: [BallClass; 3] = [BallClass::EpsInside, BallClass::EpsNeighboring, BallClass::EpsOutside];

    pub fn as_str(&self) -> &'static str {
        match self {
            BallClass::EpsInside => "inside",
            BallClass::EpsNeighboring => "neighboring",
            BallClass::EpsOutside => "outside",
        }
    }
}

fn check_radius(r: f64, eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if 2.0 * r > eps {
        return Err(Error::RadiusTooLarge { r, eps });
    }
    Ok(())
}

/// Class of a ball whose center lies at distance `dist` from the zero set.
pub fn classify_distance(dist: f64, r: f64, eps: f64) -> BallClass {
    if dist < r {
        BallClass::EpsInside
    } else if dist < eps {
        BallClass::EpsNeighboring
    } else {
        BallClass::EpsOutside
    }
}

pub fn classify_ball(b: &Ball, s: &ZeroSet, eps: f64) -> Result<BallClass> {
    check_radius(b.radius(), eps)?;
    let dist = crate::geometry::distance_to_zero_set(b.center(), s)?;
    Ok(classify_distance(dist, b.radius(), eps))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub inside: usize,
    pub neighboring: usize,
    pub outside: usize,
}

impl ClassCounts {
    pub fn get(&self, c: BallClass) -> usize {
        match c {
            BallClass::EpsInside => self.inside,
            BallClass::EpsNeighboring => self.neighboring,
            BallClass::EpsOutside => self.outside,
        }
    }

    fn bump(&mut self, c: BallClass) {
        match c {
            BallClass::EpsInside => self.inside += 1,
            BallClass::EpsNeighboring => self.neighboring += 1,
            BallClass::EpsOutside => self.outside += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.inside + self.neighboring + self.outside
    }
}

/// Distances from every ball center to the zero set; infinite when it is empty.
pub fn center_distances(c: &GridCovering, s: Option<&ZeroSet>) -> Result<Vec<f64>> {
    match s {
        None => Ok(vec![f64::INFINITY; c.len()]),
        Some(s) => {
            if s.ambient_dim() != c.dim() {
                return Err(Error::DimensionMismatch {
                    expected: c.dim(),
                    got: s.ambient_dim(),
                });
            }
            Ok(c.centers.par_chunks(c.dim()).map(|x| s.distance(x)).collect())
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassifiedCovering<'a> {
    covering: &'a GridCovering,
    eps: f64,
    classes: Vec<BallClass>,
    counts: ClassCounts,
}

/// Classifies every ball; `None` stands for an empty zero set.
pub fn classify_covering<'a>(c: &'a GridCovering, s: Option<&ZeroSet>, eps: f64) -> Result<ClassifiedCovering<'a>> {
    check_radius(c.radius, eps)?;
    let dist = center_distances(c, s)?;
    classify_with_distances(c, &dist, eps)
}

/// Classification from precomputed center distances.
pub fn classify_with_distances<'a>(c: &'a GridCovering, dist: &[f64], eps: f64) -> Result<ClassifiedCovering<'a>> {
    check_radius(c.radius, eps)?;
    if dist.len() != c.len() {
        return Err(Error::InvalidParameter(format!(
            "{} distances for {} balls",
            dist.len(),
            c.len()
        )));
    }
    let mut counts = ClassCounts::default();
    let classes = dist
        .iter()
        .map(|&d| {
            let k = classify_distance(d, c.radius, eps);
            counts.bump(k);
            k
        })
        .collect();
    Ok(ClassifiedCovering {
        covering: c,
        eps,
        classes,
        counts,
    })
}

impl<'a> ClassifiedCovering<'a> {
    pub fn covering(&self) -> &'a GridCovering {
        self.covering
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn classes(&self) -> &[BallClass] {
        &self.classes
    }

    pub fn counts(&self) -> ClassCounts {
        self.counts
    }

    /// CSV with columns `center_1..center_d,radius,class,n_points`; `n_points`
    /// is left blank when no occupancy is given.
    pub fn write_csv<W: Write>(&self, w: W, per_ball: Option<&[u32]>) -> Result<()> {
        let d = self.covering.dim();
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (1..=d).map(|k| format!("center_{k}")).collect();
        header.extend(["radius", "class", "n_points"].map(String::from));
        out.write_record(&header)?;
        for (i, x) in self.covering.centers().enumerate() {
            let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            row.push(self.covering.radius.to_string());
            row.push(self.classes[i].as_str().to_string());
            row.push(per_ball.map(|p| p[i].to_string()).unwrap_or_default());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassOccupancy {
    pub n_balls: usize,
    pub n_nonempty: usize,
    /// Share of nonempty balls; zero for a class without balls.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Occupancy {
    pub inside: ClassOccupancy,
    pub neighboring: ClassOccupancy,
    pub outside: ClassOccupancy,
    /// No empty eps-outside ball.
    pub event_a: bool,
    /// Every eps-inside ball is empty.
    pub event_b: bool,
}

impl Occupancy {
    pub fn get(&self, c: BallClass) -> ClassOccupancy {
        match c {
            BallClass::EpsInside => self.inside,
            BallClass::EpsNeighboring => self.neighboring,
            BallClass::EpsOutside => self.outside,
        }
    }
}

/// Occupancy summary from per-ball point counts.
pub fn occupancy_from_counts(c: &ClassifiedCovering<'_>, per_ball: &[u32]) -> Occupancy {
    let mut nonempty = ClassCounts::default();
    for (k, &n) in c.classes.iter().zip(per_ball) {
        if n > 0 {
            nonempty.bump(*k);
        }
    }
    let class = |k: BallClass| {
        let n_balls = c.counts.get(k);
        let n_nonempty = nonempty.get(k);
        let fraction = if n_balls == 0 {
            0.0
        } else {
            n_nonempty as f64 / n_balls as f64
        };
        ClassOccupancy {
            n_balls,
            n_nonempty,
            fraction,
        }
    };
    let inside = class(BallClass::EpsInside);
    let outside = class(BallClass::EpsOutside);
    Occupancy {
        inside,
        neighboring: class(BallClass::EpsNeighboring),
        outside,
        event_a: outside.n_nonempty == outside.n_balls,
        event_b: inside.n_nonempty == 0,
    }
}

/// Per-ball point counts and the per-class occupancy summary.
pub fn count_occupancy(c: &ClassifiedCovering<'_>, batch: &SampleBatch) -> Result<(Vec<u32>, Occupancy)> {
    let per_ball = c.covering.point_counts(batch)?;
    let occ = occupancy_from_counts(c, &per_ball);
    Ok((per_ball, occ))
}
