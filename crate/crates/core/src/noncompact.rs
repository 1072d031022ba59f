//! Truncation of tail densities to growing (1 - delta)-supports [-B, B].

use serde::Serialize;

use crate::density::{DensityForm, DensityModel};
use crate::error::{Error, Result};
use crate::rates::hoeffding_bound;
use crate::stats::{bisect, least_squares_slope};

/// Default multiplier of delta(n).
pub const DEFAULT_M_DELTA: f64 = 0.1;
/// Absolute tolerance of the bisection for B.
pub const B_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TailFamily {
    Polynomial { chi: f64 },
    Exponential { beta: f64 },
}

/// Parameters of a univariate tail density symmetric about `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailParams {
    pub c1: f64,
    pub c2: f64,
    pub gamma: f64,
    pub eps0: f64,
    pub family: TailFamily,
    pub center: f64,
    pub normalizer: f64,
}

impl TailParams {
    pub fn from_model(model: &DensityModel) -> Result<Self> {
        let normalizer = model.normalizer()?;
        let not_tail = || Error::Unsupported {
            model: model.id().into(),
            what: "needs a tail density".into(),
        };
        if model.dim() != 1 {
            return Err(Error::Unsupported {
                model: model.id().into(),
                what: "tails are implemented for d = 1".into(),
            });
        }
        let center = model.tail_center().ok_or_else(not_tail)?[0];
        let (c1, c2, gamma, eps0, family) = match model.form() {
            DensityForm::PolynomialTail {
                c1,
                c2,
                gamma,
                chi,
                eps0,
            } => (c1, c2, gamma, eps0, TailFamily::Polynomial { chi }),
            DensityForm::ExponentialTail {
                c1,
                c2,
                gamma,
                beta,
                eps0,
            } => (c1, c2, gamma, eps0, TailFamily::Exponential { beta }),
            _ => return Err(not_tail()),
        };
        Ok(TailParams {
            c1,
            c2,
            gamma,
            eps0,
            family,
            center,
            normalizer,
        })
    }

    /// Normalized density at distance `r >= eps0` from the center.
    pub fn tail_value(&self, r: f64) -> f64 {
        let raw = match self.family {
            TailFamily::Polynomial { chi } => self.c2 * r.powf(chi),
            TailFamily::Exponential { beta } => self.c2 * (beta * r).exp(),
        };
        raw / self.normalizer
    }

    /// One-sided mass beyond distance `r >= eps0`.
    fn one_sided_tail(&self, r: f64) -> f64 {
        let raw = match self.family {
            TailFamily::Polynomial { chi } => self.c2 * r.powf(chi + 1.0) / -(chi + 1.0),
            TailFamily::Exponential { beta } => self.c2 * (beta * r).exp() / -beta,
        };
        raw / self.normalizer
    }

    /// 2 times the integral of f beyond distance `b` on one side.
    pub fn mass_beyond(&self, b: f64) -> f64 {
        if b >= self.eps0 {
            return 2.0 * self.one_sided_tail(b);
        }
        let b = b.max(0.0);
        let near = self.c1 * (self.eps0.powf(self.gamma + 1.0) - b.powf(self.gamma + 1.0)) / (self.gamma + 1.0);
        2.0 * (near / self.normalizer + self.one_sided_tail(self.eps0))
    }

    fn check_delta(&self, delta: f64) -> Result<()> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        let edge = self.mass_beyond(self.eps0);
        if delta >= edge {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} leaves B <= eps0 = {} (tail mass beyond eps0 is {edge})",
                self.eps0
            )));
        }
        Ok(())
    }

    /// B with tail mass `delta`, by bisection on the analytic tail integral.
    pub fn solve_b(&self, delta: f64) -> Result<f64> {
        self.check_delta(delta)?;
        let mut hi = 2.0 * self.eps0;
        let mut k = 0;
        while self.mass_beyond(hi) >= delta {
            hi *= 2.0;
            k += 1;
            if k > 1000 || !hi.is_finite() {
                return Err(Error::RootFinding(format!("could not bracket B for delta = {delta}")));
            }
        }
        bisect(|b| self.mass_beyond(b) - delta, self.eps0, hi, B_TOLERANCE * 1e-2)
            .ok_or_else(|| Error::RootFinding(format!("no sign change for delta = {delta}")))
    }

    /// B from the inverse of the tail integral in closed form.
    pub fn solve_b_closed_form(&self, delta: f64) -> Result<f64> {
        self.check_delta(delta)?;
        let target = 0.5 * delta * self.normalizer / self.c2;
        Ok(match self.family {
            TailFamily::Polynomial { chi } => (target * -(chi + 1.0)).powf(1.0 / (chi + 1.0)),
            TailFamily::Exponential { beta } => (target * -beta).ln() / beta,
        })
    }
}

/// Tail mass 2 int_B^inf f of a univariate tail model.
pub fn tail_mass_beyond(model: &DensityModel, b: f64) -> Result<f64> {
    Ok(TailParams::from_model(model)?.mass_beyond(b))
}

pub fn solve_b(model: &DensityModel, delta: f64) -> Result<f64> {
    TailParams::from_model(model)?.solve_b(delta)
}

pub fn solve_b_closed_form(model: &DensityModel, delta: f64) -> Result<f64> {
    TailParams::from_model(model)?.solve_b_closed_form(delta)
}

/// delta(n) = M_delta n^-(kappa xi), eps(n) = (n^-xi / C1)^(1/gamma1), B(n) from delta(n).
///
/// kappa is (chi + 1)/chi for polynomial tails and 1 for exponential tails, which
/// makes the tail value at B(n) decay like n^-xi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationSchedule {
    pub tail: TailParams,
    pub eta: f64,
    pub xi: f64,
    pub gamma1: f64,
    pub psi: f64,
    pub m_delta: f64,
    pub delta_exponent: f64,
    /// Smallest n from which [-B(n), B(n)] contains B_eps(n)(S0).
    pub n1: Option<u64>,
}

impl TruncationSchedule {
    pub fn delta(&self, n: u64) -> f64 {
        self.m_delta * (n as f64).powf(-self.delta_exponent)
    }

    pub fn eps(&self, n: u64) -> f64 {
        ((n as f64).powf(-self.xi) / self.tail.c1).powf(1.0 / self.gamma1)
    }

    pub fn b(&self, n: u64) -> Result<f64> {
        self.tail.solve_b(self.delta(n))
    }

    /// min(C1 eps(n)^gamma, f at B(n)).
    pub fn m_value(&self, n: u64) -> Result<f64> {
        let near = self.tail.c1 * self.eps(n).powf(self.tail.gamma) / self.tail.normalizer;
        Ok(near.min(self.tail.tail_value(self.b(n)?)))
    }

    fn contains_neighborhood(&self, n: u64) -> bool {
        self.b(n)
            .map(|b| self.tail.center.abs() + self.eps(n) <= b)
            .unwrap_or(false)
    }
}

pub fn build_truncation_schedule(model: &DensityModel, eta: f64, xi: f64) -> Result<TruncationSchedule> {
    build_truncation_schedule_with(model, eta, xi, DEFAULT_M_DELTA)
}

pub fn build_truncation_schedule_with(
    model: &DensityModel,
    eta: f64,
    xi: f64,
    m_delta: f64,
) -> Result<TruncationSchedule> {
    let tail = TailParams::from_model(model)?;
    let d = model.dim() as f64;
    if !(eta > 0.0 && eta < 1.0 / d) {
        return Err(Error::InvalidParameter(format!("eta = {eta} must lie in (0, 1/d)")));
    }
    let cap = (1.0 - 2.0 * eta * d) / 2.0;
    if !(xi > 0.0 && xi < cap - crate::rates::BOUNDARY_SNAP) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must lie in (0, {cap})")));
    }
    tail.check_delta(m_delta)?;
    let gamma1 = tail.gamma.max(xi / eta);
    let delta_exponent = xi
        * match tail.family {
            TailFamily::Polynomial { chi } => (chi + 1.0) / chi,
            TailFamily::Exponential { .. } => 1.0,
        };
    let mut sched = TruncationSchedule {
        tail,
        eta,
        xi,
        gamma1,
        psi: xi / gamma1,
        m_delta,
        delta_exponent,
        n1: None,
    };
    let top = 1u64 << 60;
    if sched.contains_neighborhood(top) {
        let (mut lo, mut hi) = (0u64, top);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if mid >= 1 && sched.contains_neighborhood(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        sched.n1 = Some(hi);
    }
    Ok(sched)
}

/// Fitted exponent of m(f, n) against n.
///
/// Tail models use the closed form min(C1 eps^gamma, f(B)); compact models use the
/// minimum over their fixed support outside B_eps(n)(S0).
pub fn validate_m_decay(model: &DensityModel, sched: &TruncationSchedule, ns: &[u64]) -> Result<f64> {
    if ns.len() < 2 || ns.contains(&0) {
        return Err(Error::InvalidParameter(
            "need at least two positive sample sizes".into(),
        ));
    }
    let lo = *ns.iter().min().expect("nonempty") as f64;
    let hi = *ns.iter().max().expect("nonempty") as f64;
    if hi / lo < 100.0 {
        return Err(Error::InvalidParameter(
            "sample sizes must span at least two decades".into(),
        ));
    }
    let mut log_n = Vec::with_capacity(ns.len());
    let mut log_m = Vec::with_capacity(ns.len());
    for &n in ns {
        let m = if model.form().is_tail() {
            TruncationSchedule {
                tail: TailParams::from_model(model)?,
                ..*sched
            }
            .m_value(n)?
        } else {
            let region = model.support().region().expect("compact support");
            crate::density::min_outside_neighborhood(model, sched.eps(n), &region)?.value
        };
        log_n.push((n as f64).ln());
        log_m.push(m.ln());
    }
    Ok(least_squares_slope(&log_n, &log_m))
}

/// max(0, 1 - 2 exp(-(delta/2)^2 n)).
pub fn binomial_containment_bound(n: u64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok((1.0 - 2.0 * (-(0.5 * delta).powi(2) * n as f64).exp()).max(0.0))
}

/// The same event bounded through Hoeffding with gamma = delta/2.
pub fn binomial_containment_bound_sharp(n: u64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    hoeffding_bound(n, 0.5 * delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSupportRow {
    pub n: u64,
    pub delta: f64,
    pub b: f64,
    pub eps: f64,
    pub m: f64,
}

/// (delta(n), B(n), eps(n), m(f, n)) for each n.
pub fn tail_support_table(sched: &TruncationSchedule, ns: &[u64]) -> Result<Vec<TailSupportRow>> {
    ns.iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidParameter("n must be at least 1".into()));
            }
            Ok(TailSupportRow {
                n,
                delta: sched.delta(n),
                b: sched.b(n)?,
                eps: sched.eps(n),
                m: sched.m_value(n)?,
            })
        })
        .collect()
}
