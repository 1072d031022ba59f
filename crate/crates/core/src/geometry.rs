//! Points, zero-set primitives and open balls in Euclidean space.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum set distance between two components of a [`ZeroSet`].
pub const DISJOINT_TOLERANCE: f64 = 1e-12;

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// A point in R^d with finite coordinates, d >= 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidGeometry("point must have at least one coordinate".into()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidGeometry(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Compact axis-aligned box with positive side lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRegion", into = "RawRegion")]
pub struct Region {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawRegion {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawRegion> for Region {
    type Error = Error;
    fn try_from(r: RawRegion) -> Result<Self> {
        Region::new(r.lower, r.upper)
    }
}

impl From<Region> for RawRegion {
    fn from(r: Region) -> Self {
        RawRegion {
            lower: r.lower,
            upper: r.upper,
        }
    }
}

impl Region {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::InvalidGeometry("region must have dimension >= 1".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() || l >= u {
                return Err(Error::InvalidGeometry(format!(
                    "region sides need finite lower < upper, got [{l}, {u}]"
                )));
            }
        }
        Ok(Region { lower, upper })
    }

    pub fn unit_cube(d: usize) -> Result<Self> {
        Region::new(vec![0.0; d], vec![1.0; d])
    }

    /// The cube [-b, b]^d.
    pub fn symmetric(d: usize, b: f64) -> Result<Self> {
        Region::new(vec![-b; d], vec![b; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn side(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim()).map(|k| self.side(k)).fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|k| self.side(k)).product()
    }

    /// Closed-box membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    /// Corners of the box, 2^d of them.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            self.upper[k]
                        } else {
                            self.lower[k]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether `x` is within distance `r` of the complement of the box.
    pub fn near_boundary(&self, x: &[f64], r: f64) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .any(|(v, (l, u))| v - l < r || u - v < r)
    }

    pub fn as_primitive(&self) -> ZeroSetPrimitive {
        ZeroSetPrimitive::AxisBox {
            lower: Point(self.lower.clone()),
            upper: Point(self.upper.clone()),
        }
    }
}

/// Building block of a zero set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPrimitive", into = "RawPrimitive")]
pub enum ZeroSetPrimitive {
    SinglePoint(Point),
    Segment { a: Point, b: Point },
    AxisBox { lower: Point, upper: Point },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawPrimitive {
    Point { at: Point },
    Segment { a: Point, b: Point },
    Box { lower: Point, upper: Point },
}

impl TryFrom<RawPrimitive> for ZeroSetPrimitive {
    type Error = Error;
    fn try_from(raw: RawPrimitive) -> Result<Self> {
        match raw {
            RawPrimitive::Point { at } => Ok(ZeroSetPrimitive::point(at)),
            RawPrimitive::Segment { a, b } => ZeroSetPrimitive::segment(a, b),
            RawPrimitive::Box { lower, upper } => ZeroSetPrimitive::axis_box(lower, upper),
        }
    }
}

impl From<ZeroSetPrimitive> for RawPrimitive {
    fn from(p: ZeroSetPrimitive) -> Self {
        match p {
            ZeroSetPrimitive::SinglePoint(at) => RawPrimitive::Point { at },
            ZeroSetPrimitive::Segment { a, b } => RawPrimitive::Segment { a, b },
            ZeroSetPrimitive::AxisBox { lower, upper } => RawPrimitive::Box { lower, upper },
        }
    }
}

impl ZeroSetPrimitive {
    pub fn point(p: Point) -> Self {
        ZeroSetPrimitive::SinglePoint(p)
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        if a == b {
            return Err(Error::InvalidGeometry("segment endpoints must be distinct".into()));
        }
        Ok(ZeroSetPrimitive::Segment { a, b })
    }

    pub fn axis_box(lower: Point, upper: Point) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidGeometry("box needs lower <= upper coordinatewise".into()));
        }
        Ok(ZeroSetPrimitive::AxisBox { lower, upper })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ZeroSetPrimitive::SinglePoint(p) => p.dim(),
            ZeroSetPrimitive::Segment { a, .. } => a.dim(),
            ZeroSetPrimitive::AxisBox { lower, .. } => lower.dim(),
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            ZeroSetPrimitive::SinglePoint(_) => 0,
            ZeroSetPrimitive::Segment { .. } => 1,
            ZeroSetPrimitive::AxisBox { lower, upper } => lower.iter().zip(upper.iter()).filter(|(l, u)| u > l).count(),
        }
    }

    /// Euclidean distance from `x`; caller guarantees matching dimension.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            ZeroSetPrimitive::SinglePoint(p) => euclidean(x, p),
            ZeroSetPrimitive::Segment { a, b } => {
                let mut ab2 = 0.0;
                let mut dot = 0.0;
                for k in 0..x.len() {
                    let e = b[k] - a[k];
                    ab2 += e * e;
                    dot += (x[k] - a[k]) * e;
                }
                let t = (dot / ab2).clamp(0.0, 1.0);
                let mut s = 0.0;
                for k in 0..x.len() {
                    let q = a[k] + t * (b[k] - a[k]);
                    s += (x[k] - q) * (x[k] - q);
                }
                s.sqrt()
            }
            ZeroSetPrimitive::AxisBox { lower, upper } => {
                let mut s = 0.0;
                for k in 0..x.len() {
                    let c = x[k].clamp(lower[k], upper[k]);
                    s += (x[k] - c) * (x[k] - c);
                }
                s.sqrt()
            }
        }
    }

    /// Axis-aligned bounding box as (lower, upper).
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            ZeroSetPrimitive::SinglePoint(p) => (p.to_vec(), p.to_vec()),
            ZeroSetPrimitive::Segment { a, b } => (
                a.iter().zip(b.iter()).map(|(x, y)| x.min(*y)).collect(),
                a.iter().zip(b.iter()).map(|(x, y)| x.max(*y)).collect(),
            ),
            ZeroSetPrimitive::AxisBox { lower, upper } => (lower.to_vec(), upper.to_vec()),
        }
    }

    /// Representative interior point.
    pub fn center(&self) -> Vec<f64> {
        let (l, u) = self.bounds();
        l.iter().zip(&u).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Point set covering the primitive at the given spacing.
    pub fn discretize(&self, spacing: f64) -> Vec<Vec<f64>> {
        match self {
            ZeroSetPrimitive::SinglePoint(p) => vec![p.to_vec()],
            ZeroSetPrimitive::Segment { a, b } => {
                let len = euclidean(a, b);
                let m = (len / spacing).ceil().max(1.0) as usize;
                (0..=m)
                    .map(|i| {
                        let t = i as f64 / m as f64;
                        a.iter().zip(b.iter()).map(|(x, y)| x + t * (y - x)).collect()
                    })
                    .collect()
            }
            ZeroSetPrimitive::AxisBox { lower, upper } => {
                let axes: Vec<Vec<f64>> = lower
                    .iter()
                    .zip(upper.iter())
                    .map(|(l, u)| {
                        let m = ((u - l) / spacing).ceil() as usize;
                        if m == 0 {
                            vec![*l]
                        } else {
                            (0..=m).map(|i| l + (u - l) * i as f64 / m as f64).collect()
                        }
                    })
                    .collect();
                cartesian(&axes)
            }
        }
    }

    /// Infimum of distances between the two primitives.
    pub fn set_distance(&self, other: &ZeroSetPrimitive) -> f64 {
        use ZeroSetPrimitive::*;
        match (self, other) {
            (SinglePoint(p), o) | (o, SinglePoint(p)) => o.distance(p),
            (AxisBox { lower: l1, upper: u1 }, AxisBox { lower: l2, upper: u2 }) => {
                let mut s = 0.0;
                for k in 0..l1.len() {
                    let gap = (l2[k] - u1[k]).max(l1[k] - u2[k]).max(0.0);
                    s += gap * gap;
                }
                s.sqrt()
            }
            (Segment { a, b }, o) | (o, Segment { a, b }) => {
                // distance to a convex set is convex along the segment
                let at = |t: f64| -> f64 {
                    let q: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x + t * (y - x)).collect();
                    o.distance(&q)
                };
                golden_min(at, 0.0, 1.0)
            }
        }
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    f(lo).min(f(hi)).min(f1).min(f2)
}

pub(crate) fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for v in axis {
                let mut p = prefix.clone();
                p.push(*v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Disjoint union of primitives sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawZeroSet", into = "RawZeroSet")]
pub struct ZeroSet {
    components: Vec<ZeroSetPrimitive>,
    declared_dimension: usize,
}

#[derive(Serialize, Deserialize)]
struct RawZeroSet {
    components: Vec<ZeroSetPrimitive>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    declared_dimension: Option<usize>,
}

impl TryFrom<RawZeroSet> for ZeroSet {
    type Error = Error;
    fn try_from(raw: RawZeroSet) -> Result<Self> {
        let s = ZeroSet::new(raw.components)?;
        match raw.declared_dimension {
            Some(d0) if d0 != s.declared_dimension => Err(Error::InvalidGeometry(format!(
                "declared_dimension {d0} differs from the maximum intrinsic dimension {}",
                s.declared_dimension
            ))),
            _ => Ok(s),
        }
    }
}

impl From<ZeroSet> for RawZeroSet {
    fn from(s: ZeroSet) -> Self {
        RawZeroSet {
            declared_dimension: Some(s.declared_dimension),
            components: s.components,
        }
    }
}

impl ZeroSet {
    pub fn new(components: Vec<ZeroSetPrimitive>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidGeometry("zero set needs at least one component".into()))?;
        let d = first.ambient_dim();
        for c in &components {
            check_dim(d, c.ambient_dim())?;
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                let gap = components[i].set_distance(&components[j]);
                if gap <= DISJOINT_TOLERANCE {
                    return Err(Error::InvalidGeometry(format!(
                        "components {i} and {j} are not disjoint (distance {gap:e})"
                    )));
                }
            }
        }
        let declared_dimension = components.iter().map(|c| c.intrinsic_dim()).max().unwrap_or(0);
        Ok(ZeroSet {
            components,
            declared_dimension,
        })
    }

    pub fn single(p: ZeroSetPrimitive) -> Self {
        let declared_dimension = p.intrinsic_dim();
        ZeroSet {
            components: vec![p],
            declared_dimension,
        }
    }

    pub fn components(&self) -> &[ZeroSetPrimitive] {
        &self.components
    }

    pub fn ambient_dim(&self) -> usize {
        self.components[0].ambient_dim()
    }

    pub fn declared_dimension(&self) -> usize {
        self.declared_dimension
    }

    /// Distance without a dimension check.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.components
            .iter()
            .map(|c| c.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from the zero set to a point of `region`.
    pub fn max_distance_over(&self, region: &Region) -> f64 {
        // distance to a convex set is convex, so each component peaks at a vertex
        region.vertices().iter().map(|v| self.distance(v)).fold(0.0, f64::max)
    }

    /// Smallest distance from the zero set to a point of `region`.
    pub fn min_distance_to(&self, region: &Region) -> f64 {
        let rb = region.as_primitive();
        self.components
            .iter()
            .map(|c| c.set_distance(&rb))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn discretize(&self, spacing: f64) -> Vec<Vec<f64>> {
        self.components.iter().flat_map(|c| c.discretize(spacing)).collect()
    }
}

pub fn distance_to_zero_set(x: &Point, s: &ZeroSet) -> Result<f64> {
    check_dim(s.ambient_dim(), x.dim())?;
    Ok(s.distance(x))
}

pub fn in_epsilon_neighborhood(x: &Point, s: &ZeroSet, eps: f64) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    Ok(distance_to_zero_set(x, s)? < eps)
}

pub fn ball_intersects_zero_set(b: &Ball, s: &ZeroSet) -> Result<bool> {
    Ok(distance_to_zero_set(&b.center, s)? < b.radius)
}

/// Open Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    center: Point,
    radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.center.dim() && squared_distance(x, &self.center).sqrt() < self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn example_segment() -> ZeroSet {
        ZeroSet::single(ZeroSetPrimitive::segment(pt(&[0.5, 0.25]), pt(&[0.5, 0.75])).unwrap())
    }

    #[test]
    fn segment_distances() {
        let s = example_segment();
        let d = |v: &[f64]| distance_to_zero_set(&pt(v), &s).unwrap();
        assert!((d(&[0.7, 0.5]) - 0.2).abs() < 1e-15);
        assert!((d(&[0.5, 0.9]) - 0.15).abs() < 1e-15);
        assert!((d(&[0.8, 0.1]) - 0.33541019662496846).abs() < 1e-15);
        assert_eq!(d(&[0.5, 0.6]), 0.0);
    }

    #[test]
    fn neighborhood_is_open() {
        let s = example_segment();
        assert!(in_epsilon_neighborhood(&pt(&[0.75, 0.5]), &s, 0.2500001).unwrap());
        assert!(!in_epsilon_neighborhood(&pt(&[0.75, 0.5]), &s, 0.25).unwrap());
        assert!(in_epsilon_neighborhood(&pt(&[0.5, 0.3]), &s, 1e-9).unwrap());
        assert!(in_epsilon_neighborhood(&pt(&[0.5, 0.3]), &s, 0.0).is_err());
    }

    #[test]
    fn ball_intersection() {
        let s = example_segment();
        let b = |c: &[f64]| Ball::new(pt(c), 0.1).unwrap();
        assert!(ball_intersects_zero_set(&b(&[0.5, 0.5]), &s).unwrap());
        assert!(!ball_intersects_zero_set(&b(&[0.65, 0.5]), &s).unwrap());
        assert!(ball_intersects_zero_set(&b(&[0.58, 0.5]), &s).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = example_segment();
        assert!(matches!(
            distance_to_zero_set(&pt(&[0.1]), &s),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn primitive_validation() {
        assert!(ZeroSetPrimitive::segment(pt(&[0.0, 0.0]), pt(&[0.0, 0.0])).is_err());
        assert!(ZeroSetPrimitive::axis_box(pt(&[0.0, 1.0]), pt(&[1.0, 0.0])).is_err());
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![]).is_err());
        let flat = ZeroSetPrimitive::axis_box(pt(&[0.0, 0.5]), pt(&[1.0, 0.5])).unwrap();
        assert_eq!(flat.intrinsic_dim(), 1);
    }

    #[test]
    fn zero_set_validation() {
        let a = ZeroSetPrimitive::point(pt(&[0.0, 0.0]));
        let b = ZeroSetPrimitive::segment(pt(&[-1.0, 0.0]), pt(&[1.0, 0.0])).unwrap();
        assert!(ZeroSet::new(vec![a.clone(), b]).is_err());
        assert!(ZeroSet::new(vec![a.clone(), ZeroSetPrimitive::point(pt(&[0.0]))]).is_err());
        assert!(ZeroSet::new(vec![]).is_err());
        let c = ZeroSetPrimitive::segment(pt(&[1.0, 0.0]), pt(&[1.0, 1.0])).unwrap();
        let s = ZeroSet::new(vec![a, c]).unwrap();
        assert_eq!(s.declared_dimension(), 1);
    }

    #[test]
    fn segment_segment_distance() {
        let a = ZeroSetPrimitive::segment(pt(&[0.0, 0.0]), pt(&[1.0, 0.0])).unwrap();
        let b = ZeroSetPrimitive::segment(pt(&[0.5, 0.3]), pt(&[2.0, 2.0])).unwrap();
        assert!((a.set_distance(&b) - 0.3).abs() < 1e-9);
        let c = ZeroSetPrimitive::axis_box(pt(&[2.0, -1.0]), pt(&[3.0, 1.0])).unwrap();
        assert!((a.set_distance(&c) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let s = example_segment();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"type\":\"segment\""));
        let back: ZeroSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"components":[{"type":"segment","a":[0.5,0.2],"b":[0.5,0.2]}]}"#;
        assert!(serde_json::from_str::<ZeroSet>(bad).is_err());
        let wrong_dim = r#"{"components":[{"type":"point","at":[0.0]}],"declared_dimension":1}"#;
        assert!(serde_json::from_str::<ZeroSet>(wrong_dim).is_err());
    }

    #[test]
    fn region_helpers() {
        let r = Region::new(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(r.vertices().len(), 4);
        assert_eq!(r.volume(), 2.0);
        assert!(r.contains(&[1.0, 1.0]));
        assert!(!r.contains(&[1.0 + 1e-12, 0.0]));
        assert!(Region::new(vec![0.0], vec![0.0]).is_err());
        let s = example_segment();
        let far = s.max_distance_over(&Region::unit_cube(2).unwrap());
        assert!((far - (0.25f64 + 0.0625).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ball_is_open() {
        let b = Ball::new(pt(&[0.0, 0.0]), 1.0).unwrap();
        assert!(b.contains(&[0.6, 0.6]));
        assert!(!b.contains(&[1.0, 0.0]));
        assert!(Ball::new(pt(&[0.0]), 0.0).is_err());
    }
}
