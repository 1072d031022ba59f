//! Density models vanishing on a zero set, with smoothness orders and bounds.

mod bounds;
mod catalog;

pub use bounds::{
    estimate_smoothness, min_outside_neighborhood, sup_density, MinOutside, MinimizationMethod, SmoothnessEstimate,
};
pub use catalog::{catalog_model, normalized_model, CATALOG_IDS};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point, Region, ZeroSet};
use crate::quadrature::{self, Tolerance};

/// Relative accuracy demanded of the normalizing constant.
pub const NORMALIZATION_REL_TOL: f64 = 1e-6;
/// Allowed deviation of the normalized integral from one on the verification pass.
pub const VERIFICATION_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support {
    UnitCube { d: usize },
    Interval { a: f64, b: f64 },
    FullSpace { d: usize },
}

impl Support {
    pub fn dim(&self) -> usize {
        match *self {
            Support::UnitCube { d } | Support::FullSpace { d } => d,
            Support::Interval { .. } => 1,
        }
    }

    /// The support as a box, when it is bounded.
    pub fn region(&self) -> Option<Region> {
        match *self {
            Support::UnitCube { d } => Region::unit_cube(d).ok(),
            Support::Interval { a, b } => Region::new(vec![a], vec![b]).ok(),
            Support::FullSpace { .. } => None,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match *self {
            Support::UnitCube { d } => x.len() == d && x.iter().all(|v| (0.0..=1.0).contains(v)),
            Support::Interval { a, b } => x.len() == 1 && a <= x[0] && x[0] <= b,
            Support::FullSpace { d } => x.len() == d,
        }
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, Support::FullSpace { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Explicit1D {
    FQuadratic,
    GTwoBumps,
    HParabolic,
}

impl Explicit1D {
    pub fn name(&self) -> &'static str {
        match self {
            Explicit1D::FQuadratic => "f_quadratic",
            Explicit1D::GTwoBumps => "g_twobumps",
            Explicit1D::HParabolic => "h_parabolic",
        }
    }

    fn value(&self, x: f64) -> f64 {
        match self {
            Explicit1D::FQuadratic if x.abs() <= 1.0 => 1.5 * x * x,
            Explicit1D::GTwoBumps if (0.25..=1.0).contains(&x.abs()) => 2.0 / 3.0,
            Explicit1D::HParabolic if x.abs() <= 1.0 => 0.375 * (x * x + 1.0),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum DensityForm {
    /// d(x, S0)^exponent on the support.
    PowerLaw {
        exponent: f64,
    },
    /// Piecewise power of d(x, S0) with angle-dependent exponents in the caps.
    AnisotropicExample2,
    /// C1 r^gamma for r < eps0, C2 r^chi beyond.
    PolynomialTail {
        c1: f64,
        c2: f64,
        gamma: f64,
        chi: f64,
        eps0: f64,
    },
    /// C1 r^gamma for r < eps0, C2 exp(beta r) beyond.
    ExponentialTail {
        c1: f64,
        c2: f64,
        gamma: f64,
        beta: f64,
        eps0: f64,
    },
    Explicit1D(Explicit1D),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Pending,
    Known(f64),
}

/// Analytic orders of smoothness and the sandwich constants valid on B_eps0(S0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessOrders {
    pub upper: f64,
    pub lower: f64,
    pub l_f: f64,
    pub u_f: f64,
}

impl SmoothnessOrders {
    pub fn new(upper: f64, lower: f64, l_f: f64, u_f: f64) -> Result<Self> {
        let ok = [upper, lower, l_f, u_f].iter().all(|v| v.is_finite() && *v > 0.0) && lower <= upper;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "smoothness orders need 0 < lower <= upper and positive constants, got ({upper}, {lower}, {l_f}, {u_f})"
            )));
        }
        Ok(SmoothnessOrders { upper, lower, l_f, u_f })
    }

    /// Orders with unit sandwich constants.
    pub fn exponents(upper: f64, lower: f64) -> Result<Self> {
        Self::new(upper, lower, 1.0, 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct DensityModel {
    id: String,
    support: Support,
    zero_set: Option<ZeroSet>,
    form: DensityForm,
    eps0: f64,
    normalization: Normalization,
}

const CONTINUITY_TOL: f64 = 1e-9;

impl DensityModel {
    /// Builds a model with pending normalization after checking its invariants.
    pub fn new(
        id: impl Into<String>,
        support: Support,
        zero_set: Option<ZeroSet>,
        form: DensityForm,
        eps0: f64,
    ) -> Result<Self> {
        let id = id.into();
        let d = support.dim();
        if let Some(s) = &zero_set {
            if s.ambient_dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: s.ambient_dim(),
                });
            }
        }
        if !(eps0 > 0.0) {
            return Err(Error::InvalidParameter(format!("eps0 must be positive, got {eps0}")));
        }
        let bad = |msg: String| Err(Error::InvalidParameter(format!("{id}: {msg}")));
        match form {
            DensityForm::PowerLaw { exponent } if !(exponent > 0.0) => {
                return bad(format!("power-law exponent must be positive, got {exponent}"));
            }
            DensityForm::AnisotropicExample2 if d != 2 => return bad("example 2 lives in the plane".into()),
            DensityForm::PolynomialTail {
                c1,
                c2,
                gamma,
                chi,
                eps0: e0,
            } => {
                if !(c1 > 0.0 && c2 > 0.0 && gamma > 0.0) {
                    return bad("tail constants must be positive".into());
                }
                if !(chi < -(d as f64)) {
                    return bad(format!("polynomial tail needs chi < -d, got {chi}"));
                }
                let gap = c1 * e0.powf(gamma) - c2 * e0.powf(chi);
                if gap.abs() > CONTINUITY_TOL {
                    return bad(format!("continuity C1 eps0^gamma = C2 eps0^chi violated by {gap:e}"));
                }
            }
            DensityForm::ExponentialTail {
                c1,
                c2,
                gamma,
                beta,
                eps0: e0,
            } => {
                if !(c1 > 0.0 && c2 > 0.0 && gamma > 0.0) {
                    return bad("tail constants must be positive".into());
                }
                if !(beta < 0.0) {
                    return bad(format!("exponential tail needs beta < 0, got {beta}"));
                }
                let gap = c1 * e0.powf(gamma) - c2 * (beta * e0).exp();
                if gap.abs() > CONTINUITY_TOL {
                    return bad(format!(
                        "continuity C1 eps0^gamma = C2 exp(beta eps0) violated by {gap:e}"
                    ));
                }
            }
            DensityForm::Explicit1D(_) if d != 1 => return bad("explicit densities are univariate".into()),
            _ => {}
        }
        if form.is_tail() {
            if support.is_compact() {
                return bad("tail densities need full-space support".into());
            }
            match &zero_set {
                Some(s) if s.components().len() == 1 && s.declared_dimension() == 0 => {}
                _ => return bad("tail densities need a single-point zero set".into()),
            }
        } else if !support.is_compact() {
            return bad("non-tail densities need a compact support".into());
        }
        Ok(DensityModel {
            id,
            support,
            zero_set,
            form,
            eps0,
            normalization: Normalization::Pending,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn zero_set(&self) -> Option<&ZeroSet> {
        self.zero_set.as_ref()
    }

    pub fn form(&self) -> DensityForm {
        self.form
    }

    /// Radius of the neighborhood on which the smoothness sandwich is asserted.
    pub fn eps0(&self) -> f64 {
        match self.form {
            DensityForm::PolynomialTail { eps0, .. } | DensityForm::ExponentialTail { eps0, .. } => eps0,
            _ => self.eps0,
        }
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn normalizer(&self) -> Result<f64> {
        match self.normalization {
            Normalization::Known(z) => Ok(z),
            Normalization::Pending => Err(Error::NotNormalized(self.id.clone())),
        }
    }

    pub fn is_univariate(&self) -> bool {
        self.dim() == 1
    }

    /// Distance to the zero set; infinite when the zero set is empty.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.zero_set.as_ref().map_or(f64::INFINITY, |s| s.distance(x))
    }

    /// Center of the single-point zero set of a tail model.
    pub(crate) fn tail_center(&self) -> Option<&[f64]> {
        if !self.form.is_tail() {
            return None;
        }
        self.zero_set.as_ref().map(|s| match &s.components()[0] {
            crate::geometry::ZeroSetPrimitive::SinglePoint(p) => p.coords(),
            _ => unreachable!("tail zero sets are single points"),
        })
    }

    /// Unnormalized value of a radial profile at distance `r`, for models whose
    /// value depends on the distance to the zero set only.
    pub(crate) fn radial_profile(&self, r: f64) -> Option<f64> {
        match self.form {
            DensityForm::PowerLaw { exponent } => Some(r.powf(exponent)),
            DensityForm::PolynomialTail {
                c1,
                c2,
                gamma,
                chi,
                eps0,
            } => Some(if r < eps0 { c1 * r.powf(gamma) } else { c2 * r.powf(chi) }),
            DensityForm::ExponentialTail {
                c1,
                c2,
                gamma,
                beta,
                eps0,
            } => Some(if r < eps0 {
                c1 * r.powf(gamma)
            } else {
                c2 * (beta * r).exp()
            }),
            DensityForm::Explicit1D(Explicit1D::FQuadratic) => Some(1.5 * r * r),
            _ => None,
        }
    }

    pub(crate) fn raw(&self, x: &[f64]) -> f64 {
        if !self.support.contains(x) {
            return 0.0;
        }
        match self.form {
            DensityForm::AnisotropicExample2 => example2(x[0], x[1]),
            DensityForm::Explicit1D(e) => e.value(x[0]),
            _ => {
                let r = self.distance(x);
                self.radial_profile(r).expect("radial forms have a profile")
            }
        }
    }

    /// Normalized density at `x` without a dimension check.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let z = self.normalizer()?;
        Ok(self.raw(x) / z)
    }

    /// Breakpoints per axis where the integrand has kinks or jumps.
    pub(crate) fn breakpoints(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut out = vec![Vec::new(); d];
        if let Some(s) = &self.zero_set {
            for c in s.components() {
                let (l, u) = c.bounds();
                for k in 0..d {
                    out[k].push(l[k]);
                    out[k].push(u[k]);
                }
            }
        }
        if let DensityForm::Explicit1D(Explicit1D::GTwoBumps) = self.form {
            out[0].extend([-0.25, 0.25]);
        }
        out
    }

    /// Closed-form normalizer of a univariate tail density centered on its zero point.
    fn tail_normalizer(&self) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::Unsupported {
                model: self.id.clone(),
                what: "tail densities are implemented for d = 1".into(),
            });
        }
        let (near, far) = match self.form {
            DensityForm::PolynomialTail {
                c1,
                c2,
                gamma,
                chi,
                eps0,
            } => (
                c1 * eps0.powf(gamma + 1.0) / (gamma + 1.0),
                c2 * eps0.powf(chi + 1.0) / -(chi + 1.0),
            ),
            DensityForm::ExponentialTail {
                c1,
                c2,
                gamma,
                beta,
                eps0,
            } => (
                c1 * eps0.powf(gamma + 1.0) / (gamma + 1.0),
                c2 * (beta * eps0).exp() / -beta,
            ),
            _ => unreachable!("called for tail forms only"),
        };
        Ok(2.0 * (near + far))
    }

    /// Integral of the unnormalized density over its support.
    fn raw_integral(&self, breaks: &[Vec<f64>], tol: Tolerance) -> Result<quadrature::Estimate> {
        let region = self.support.region().expect("compact support");
        let f = |x: &[f64]| self.raw(x);
        quadrature::integrate_box(&f, region.lower(), region.upper(), breaks, tol)
    }
}

impl DensityForm {
    pub fn is_tail(&self) -> bool {
        matches!(
            self,
            DensityForm::PolynomialTail { .. } | DensityForm::ExponentialTail { .. }
        )
    }
}

fn example2(x: f64, y: f64) -> f64 {
    use std::f64::consts::PI;
    let (d, e) = if y > 0.75 {
        let theta = (y - 0.75).atan2(x - 0.5);
        ((x - 0.5).hypot(y - 0.75), 4.0 - 2.0 / PI * theta)
    } else if y < 0.25 {
        let theta = (y - 0.25).atan2(x - 0.5);
        ((x - 0.5).hypot(y - 0.25), 4.0 + 2.0 / PI * theta)
    } else if x >= 0.5 {
        (x - 0.5, 4.0)
    } else {
        (0.5 - x, 2.0)
    };
    if d > 0.0 {
        d.powf(e)
    } else {
        0.0
    }
}

/// Normalized density at `x`.
pub fn evaluate(model: &DensityModel, x: &Point) -> Result<f64> {
    if x.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.dim(),
        });
    }
    model.value(x)
}

/// Computes the normalizing constant and returns the normalized model.
pub fn normalize(model: &DensityModel) -> Result<DensityModel> {
    let z = if model.form.is_tail() {
        model.tail_normalizer()?
    } else {
        let tol = Tolerance {
            rel: NORMALIZATION_REL_TOL * 1e-2,
            abs: 1e-15,
            max_intervals: 4000,
        };
        let est = model.raw_integral(&model.breakpoints(), tol)?;
        if !(est.value > 0.0) || est.error > NORMALIZATION_REL_TOL * est.value {
            return Err(Error::QuadratureNonConvergence {
                estimate: est.value,
                error_estimate: est.error,
            });
        }
        // independent pass on a different partition
        let region = model.support.region().expect("compact support");
        let shifted: Vec<Vec<f64>> = model
            .breakpoints()
            .into_iter()
            .enumerate()
            .map(|(k, mut b)| {
                let (lo, hi) = (region.lower()[k], region.upper()[k]);
                b.push(lo + (hi - lo) / 3.0);
                b.push(lo + 2.0 * (hi - lo) / 3.0);
                b
            })
            .collect();
        let check = model.raw_integral(&shifted, Tolerance { rel: 1e-7, ..tol })?;
        let ratio = check.value / est.value;
        if (ratio - 1.0).abs() > VERIFICATION_TOL {
            return Err(Error::NormalizationCheck { integral: ratio });
        }
        est.value
    };
    let mut out = model.clone();
    out.normalization = Normalization::Known(z);
    Ok(out)
}

/// Analytic orders of smoothness near the zero set and the constants L_f, U_f.
pub fn smoothness_orders(model: &DensityModel) -> Result<SmoothnessOrders> {
    let z = model.normalizer()?;
    match model.form {
        DensityForm::PowerLaw { exponent } => SmoothnessOrders::new(exponent, exponent, 1.0 / z, 1.0 / z),
        // for d < eps0 <= 1 the exponent ranges over [2, 4], so d^4 <= f Z <= d^2
        DensityForm::AnisotropicExample2 => SmoothnessOrders::new(4.0, 2.0, 1.0 / z, 1.0 / z),
        DensityForm::PolynomialTail { c1, gamma, .. } | DensityForm::ExponentialTail { c1, gamma, .. } => {
            SmoothnessOrders::new(gamma, gamma, c1 / z, c1 / z)
        }
        DensityForm::Explicit1D(Explicit1D::FQuadratic) => SmoothnessOrders::new(2.0, 2.0, 1.5 / z, 1.5 / z),
        DensityForm::Explicit1D(e) => Err(Error::Unsupported {
            model: model.id.clone(),
            what: format!(
                "{} does not vanish like a power of the distance to a zero set",
                e.name()
            ),
        }),
    }
}
