use crate::error::{Error, Result};
use crate::geometry::{Point, ZeroSet, ZeroSetPrimitive};

use super::{normalize, DensityForm, DensityModel, Explicit1D, Support};

pub const CATALOG_IDS: [&str; 7] = [
    "powerlaw4_segment",
    "example2",
    "polytail_1_3",
    "exptail_1_3",
    "f_quadratic",
    "g_twobumps",
    "h_parabolic",
];

fn pt(v: &[f64]) -> Point {
    Point::new(v.to_vec()).expect("catalog coordinates are finite")
}

fn vertical_segment() -> ZeroSet {
    ZeroSet::single(ZeroSetPrimitive::segment(pt(&[0.5, 0.25]), pt(&[0.5, 0.75])).expect("distinct endpoints"))
}

fn origin_1d() -> ZeroSet {
    ZeroSet::single(ZeroSetPrimitive::point(pt(&[0.0])))
}

/// Catalog model with pending normalization.
pub fn catalog_model(id: &str) -> Result<DensityModel> {
    let plane = Support::UnitCube { d: 2 };
    let line = Support::Interval { a: -1.0, b: 1.0 };
    let full = Support::FullSpace { d: 1 };
    match id {
        "powerlaw4_segment" => DensityModel::new(
            id,
            plane,
            Some(vertical_segment()),
            DensityForm::PowerLaw { exponent: 4.0 },
            0.25,
        ),
        "example2" => DensityModel::new(
            id,
            plane,
            Some(vertical_segment()),
            DensityForm::AnisotropicExample2,
            0.25,
        ),
        "polytail_1_3" => {
            let form = DensityForm::PolynomialTail {
                c1: 2.0 / 7.0,
                c2: 2.0 / 7.0,
                gamma: 1.0 / 3.0,
                chi: -2.0,
                eps0: 1.0,
            };
            DensityModel::new(id, full, Some(origin_1d()), form, 1.0)
        }
        "exptail_1_3" => {
            let form = DensityForm::ExponentialTail {
                c1: 0.4,
                c2: 0.4 * 2f64.exp(),
                gamma: 1.0 / 3.0,
                beta: -2.0,
                eps0: 1.0,
            };
            DensityModel::new(id, full, Some(origin_1d()), form, 1.0)
        }
        "f_quadratic" => DensityModel::new(
            id,
            line,
            Some(origin_1d()),
            DensityForm::Explicit1D(Explicit1D::FQuadratic),
            1.0,
        ),
        "g_twobumps" => {
            let hole = ZeroSet::single(ZeroSetPrimitive::axis_box(pt(&[-0.25]), pt(&[0.25]))?);
            DensityModel::new(
                id,
                line,
                Some(hole),
                DensityForm::Explicit1D(Explicit1D::GTwoBumps),
                0.25,
            )
        }
        "h_parabolic" => DensityModel::new(id, line, None, DensityForm::Explicit1D(Explicit1D::HParabolic), 1.0),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// Catalog model with its normalizing constant computed.
pub fn normalized_model(id: &str) -> Result<DensityModel> {
    normalize(&catalog_model(id)?)
}
