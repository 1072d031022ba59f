//! Adaptive Gauss-Kronrod (7/15) quadrature, nested over axes for boxes and balls.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-8,
            abs: 1e-15,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Estimate {
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.est.error == o.est.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&o.est.error)
    }
}

/// Globally adaptive integration of `f` over [a, b], split first at `breaks`.
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Result<Estimate> {
    if !(b > a) {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let est = gk15(f, w[0], w[1]);
        total += est.value;
        err += est.error;
        heap.push(Piece { a: w[0], b: w[1], est });
    }
    while !(err <= tol.abs.max(tol.rel * total.abs())) {
        if heap.len() >= tol.max_intervals || !total.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one piece");
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error_estimate: err,
            });
        }
        let left = gk15(f, worst.a, m);
        let right = gk15(f, m, worst.b);
        total += left.value + right.value - worst.est.value;
        err += left.error + right.error - worst.est.error;
        heap.push(Piece {
            a: worst.a,
            b: m,
            est: left,
        });
        heap.push(Piece {
            a: m,
            b: worst.b,
            est: right,
        });
    }
    // re-sum to shed accumulated cancellation
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.est.value, e + p.est.error));
    Ok(Estimate { value, error })
}

/// Limits of axis `k` given the first `k` coordinates; `None` means an empty slice.
pub type Limits<'a> = dyn Fn(usize, &[f64]) -> Option<(f64, f64)> + 'a;

/// Iterated integral over a domain described by per-axis limits.
pub fn integrate_nested(
    f: &dyn Fn(&[f64]) -> f64,
    dim: usize,
    limits: &Limits<'_>,
    breaks: &[Vec<f64>],
    tol: Tolerance,
) -> Result<Estimate> {
    let mut prefix = Vec::with_capacity(dim);
    nested(f, dim, limits, breaks, tol, &mut prefix)
}

fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    dim: usize,
    limits: &Limits<'_>,
    breaks: &[Vec<f64>],
    tol: Tolerance,
    prefix: &mut Vec<f64>,
) -> Result<Estimate> {
    let k = prefix.len();
    let Some((lo, hi)) = limits(k, prefix) else {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    };
    let axis_breaks: &[f64] = breaks.get(k).map(Vec::as_slice).unwrap_or(&[]);
    if k + 1 == dim {
        let mut g = |t: f64| {
            prefix.push(t);
            let v = f(prefix);
            prefix.pop();
            v
        };
        return integrate(&mut g, lo, hi, axis_breaks, tol);
    }
    let inner_tol = Tolerance {
        rel: tol.rel * 0.1,
        abs: tol.abs * 0.1,
        ..tol
    };
    let mut failure = None;
    let mut inner_err = 0.0;
    let mut g = |t: f64| {
        prefix.push(t);
        let r = nested(f, dim, limits, breaks, inner_tol, prefix);
        prefix.pop();
        match r {
            Ok(e) => {
                inner_err = f64::max(inner_err, e.error);
                e.value
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let mut out = integrate(&mut g, lo, hi, axis_breaks, tol)?;
    if let Some(e) = failure {
        return Err(e);
    }
    out.error += inner_err * (hi - lo);
    Ok(out)
}

/// Integral over the box `[lower, upper]`.
pub fn integrate_box(
    f: &dyn Fn(&[f64]) -> f64,
    lower: &[f64],
    upper: &[f64],
    breaks: &[Vec<f64>],
    tol: Tolerance,
) -> Result<Estimate> {
    let limits = |k: usize, _: &[f64]| Some((lower[k], upper[k]));
    integrate_nested(f, lower.len(), &limits, breaks, tol)
}

/// Integral over the ball B_r(center), optionally clipped to a box.
pub fn integrate_ball(
    f: &dyn Fn(&[f64]) -> f64,
    center: &[f64],
    r: f64,
    clip: Option<(&[f64], &[f64])>,
    breaks: &[Vec<f64>],
    tol: Tolerance,
) -> Result<Estimate> {
    let limits = |k: usize, prefix: &[f64]| {
        let used: f64 = prefix.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
        let rho2 = r * r - used;
        if rho2 <= 0.0 {
            return None;
        }
        let rho = rho2.sqrt();
        let (mut lo, mut hi) = (center[k] - rho, center[k] + rho);
        if let Some((l, u)) = clip {
            lo = lo.max(l[k]);
            hi = hi.min(u[k]);
        }
        (hi > lo).then_some((lo, hi))
    };
    integrate_nested(f, center.len(), &limits, breaks, tol)
}
