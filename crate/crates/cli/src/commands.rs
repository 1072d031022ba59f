use serde::Serialize;
use serde_json::json;

use zeroset::covering::{
    box_counting_dimension, build_grid_covering, classify_covering, count_occupancy, ClassifiedCovering,
};
use zeroset::density::{normalized_model, DensityModel, SmoothnessOrders};
use zeroset::experiments::{
    heatmap_1d, heatmap_svg, reconstruct_s0, run_sweep, summarize, sweep_svg, write_heatmap_csv, write_summary_csv,
    write_sweep_csv, SweepConfig,
};
use zeroset::geometry::{Region, ZeroSet};
use zeroset::noncompact::{build_truncation_schedule_with, tail_support_table};
use zeroset::rates::{check_corollary1, schedule_values, RateSchedule};
use zeroset::sampling::{derive_trial_seed, sample, RNG_NAME};

use crate::config::{BoxdimArgs, CoverArgs, DetectArgs, Format, HeatmapArgs, RatesArgs, SampleArgs, TailSupportArgs};
use crate::CliError;

/// A file to be written into the output directory.
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: &str, bytes: Vec<u8>) -> Self {
        Artifact {
            name: name.into(),
            bytes,
        }
    }

    fn json<T: Serialize>(name: &str, value: &T) -> Result<Self, CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
        bytes.push(b'\n');
        Ok(Artifact::new(name, bytes))
    }
}

pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Printed on stdout after the artifacts are written.
    pub stdout: Option<String>,
}

impl From<Vec<Artifact>> for Outcome {
    fn from(artifacts: Vec<Artifact>) -> Self {
        Outcome {
            artifacts,
            stdout: None,
        }
    }
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Validation(format!("{cmd} cannot emit format {}", f.as_str()))
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> zeroset::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn model_region(model: &DensityModel, region: Option<Region>) -> Result<Region, CliError> {
    region
        .or_else(|| model.support().region())
        .ok_or_else(|| CliError::Validation(format!("{} has unbounded support; give a region", model.id())))
}

pub fn sample_cmd(a: SampleArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let model = normalized_model(&a.model)?;
    let batch = sample(&model, a.n, a.seed)?;
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => vec![Artifact::new("samples.csv", csv_bytes(|b| batch.write_csv(b))?)],
        Format::Json => vec![Artifact::json(
            "samples.json",
            &json!({
                "model": a.model,
                "seed": a.seed,
                "rng": RNG_NAME,
                "dim": batch.dim(),
                "points": batch.points().collect::<Vec<_>>(),
            }),
        )?],
        f => return Err(unsupported("sample", f)),
    }
    .into())
}

fn covering_summary(c: &ClassifiedCovering<'_>) -> serde_json::Value {
    let cov = c.covering();
    let counts = c.counts();
    json!({
        "radius": cov.radius(),
        "grid_step": cov.grid_step(),
        "eps": c.eps(),
        "shape": cov.shape(),
        "n_balls": cov.len(),
        "counts": { "inside": counts.inside, "neighboring": counts.neighboring, "outside": counts.outside },
    })
}

pub fn cover_cmd(a: CoverArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let (zero_set, region) = match (&a.model, a.zero_set) {
        (Some(_), Some(_)) => return Err(CliError::Validation("give either model or zero_set, not both".into())),
        (Some(id), None) => {
            let model = normalized_model(id)?;
            let region = model_region(&model, a.region)?;
            (model.zero_set().cloned(), region)
        }
        (None, Some(s)) => {
            let region = a
                .region
                .ok_or_else(|| CliError::Validation("an explicit zero_set needs a region".into()))?;
            (Some(s), region)
        }
        (None, None) => return Err(CliError::Validation("cover needs a model or a zero_set".into())),
    };
    let cov = build_grid_covering(&region, a.r)?;
    let cls = classify_covering(&cov, zero_set.as_ref(), a.eps)?;
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => vec![Artifact::new("covering.csv", csv_bytes(|b| cls.write_csv(b, None))?)],
        Format::Json => vec![Artifact::json("covering.json", &covering_summary(&cls))?],
        f => return Err(unsupported("cover", f)),
    }
    .into())
}

pub fn detect_cmd(a: DetectArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let format = format.unwrap_or(Format::Csv);
    if format == Format::Svg {
        return Err(unsupported("detect", format));
    }
    let model = normalized_model(&a.model)?;
    let region = model_region(&model, a.region)?;
    let sched = RateSchedule::new(model.dim(), a.eta, a.psi, None, a.m_r, a.m_eps)?;
    let (r, eps) = schedule_values(&sched, a.n)?;
    let cov = build_grid_covering(&region, r)?;
    let cls = classify_covering(&cov, model.zero_set(), eps)?;
    let batch = sample(&model, a.n as usize, a.seed)?.filter(|x| region.contains(x));
    let (per_ball, occ) = count_occupancy(&cls, &batch)?;
    let rec = reconstruct_s0(&cls, &per_ball, model.zero_set())?;
    let report = json!({
        "model": a.model,
        "n": a.n,
        "n_in_region": batch.n(),
        "seed": a.seed,
        "r": r,
        "eps": eps,
        "covering": covering_summary(&cls),
        "occupancy": occ,
        "reconstruction": {
            "n_empty_balls": rec.len(),
            "directed_hausdorff_to_s0": rec.directed_hausdorff_to_s0,
            "directed_hausdorff_from_s0": rec.directed_hausdorff_from_s0,
            "estimate": rec.estimate,
        },
    });
    let mut out = vec![Artifact::json("detect.json", &report)?];
    if format == Format::Csv {
        out.push(Artifact::new(
            "detect_covering.csv",
            csv_bytes(|b| cls.write_csv(b, Some(&per_ball)))?,
        ));
    }
    Ok(out.into())
}

pub fn sweep_cmd(cfg: SweepConfig, format: Option<Format>) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let out = run_sweep(&cfg)?;
    let cells = summarize(&out.reports);
    let svg = Artifact::new("sweep.svg", sweep_svg(&cfg.model, &cells).into_bytes());
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => vec![
            Artifact::new("sweep.csv", csv_bytes(|b| write_sweep_csv(b, &out.reports))?),
            Artifact::new(
                "sweep_summary.csv",
                csv_bytes(|b| write_summary_csv(b, &cfg.model, &cells))?,
            ),
            Artifact::json("sweep_skipped.json", &out.skipped)?,
            svg,
        ],
        Format::Json => vec![
            Artifact::json(
                "sweep.json",
                &json!({ "config": cfg, "summary": cells, "skipped": out.skipped, "reports": out.reports }),
            )?,
            svg,
        ],
        Format::Svg => vec![svg],
    }
    .into())
}

pub fn heatmap_cmd(a: HeatmapArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let rows: Vec<(String, Vec<bool>)> = a
        .models
        .iter()
        .enumerate()
        .map(|(k, id)| {
            Ok((
                id.clone(),
                heatmap_1d(id, a.n, a.bins, derive_trial_seed(a.seed, k as u64))?,
            ))
        })
        .collect::<Result<_, CliError>>()?;
    let svg = Artifact::new("heatmap.svg", heatmap_svg(&rows).into_bytes());
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => vec![
            Artifact::new("heatmap.csv", csv_bytes(|b| write_heatmap_csv(b, &rows))?),
            svg,
        ],
        Format::Json => {
            let map: Vec<_> = rows
                .iter()
                .map(|(id, h)| json!({ "model": id, "occupied": h }))
                .collect();
            vec![
                Artifact::json(
                    "heatmap.json",
                    &json!({ "n": a.n, "bins": a.bins, "seed": a.seed, "rows": map }),
                )?,
                svg,
            ]
        }
        Format::Svg => vec![svg],
    }
    .into())
}

pub fn rates_cmd(a: RatesArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let format = format.unwrap_or(Format::Json);
    if format != Format::Json {
        return Err(unsupported("rates check", format));
    }
    let sched = RateSchedule::new(a.d, a.eta, a.psi, a.xi, a.m_r, a.m_eps)?;
    let comps: Vec<(usize, SmoothnessOrders)> = a
        .components
        .iter()
        .map(|c| Ok((c.d0, SmoothnessOrders::exponents(c.upper, c.lower)?)))
        .collect::<Result<_, CliError>>()?;
    let report = check_corollary1(a.d, &comps, &sched)?;
    let line = serde_json::to_string(&report).map_err(|e| CliError::Other(e.to_string()))?;
    Ok(Outcome {
        artifacts: vec![Artifact::json("rates_check.json", &report)?],
        stdout: Some(line),
    })
}

pub fn tail_support_cmd(a: TailSupportArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let model = normalized_model(&a.model)?;
    let sched = build_truncation_schedule_with(&model, a.eta, a.xi, a.m_delta)?;
    let rows = tail_support_table(&sched, &a.ns)?;
    Ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let bytes = csv_bytes(|b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["n", "delta", "B", "eps", "m"])?;
                for r in &rows {
                    w.write_record([r.n.to_string(), r.delta.to_string(), r.b.to_string(), r.eps.to_string(), r.m.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            vec![Artifact::new("tail_support.csv", bytes)]
        }
        Format::Json => vec![Artifact::json(
            "tail_support.json",
            &json!({ "model": a.model, "eta": a.eta, "xi": a.xi, "gamma1": sched.gamma1, "psi": sched.psi, "n1": sched.n1, "rows": rows }),
        )?],
        f => return Err(unsupported("tail-support", f)),
    }
    .into())
}

pub fn boxdim_cmd(a: BoxdimArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let s: ZeroSet = match (&a.model, a.zero_set) {
        (Some(_), Some(_)) => return Err(CliError::Validation("give either model or zero_set, not both".into())),
        (Some(id), None) => normalized_model(id)?
            .zero_set()
            .cloned()
            .ok_or_else(|| CliError::Validation(format!("{id} has no zero set")))?,
        (None, Some(s)) => s,
        (None, None) => return Err(CliError::Validation("boxdim needs a model or a zero_set".into())),
    };
    let est = box_counting_dimension(&s, &a.deltas)?;
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => vec![Artifact::json("boxdim.json", &est)?],
        Format::Csv => {
            let bytes = csv_bytes(|b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["delta", "lower", "upper"])?;
                for c in &est.counts {
                    w.write_record([c.delta.to_string(), c.lower.to_string(), c.upper.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            vec![Artifact::new("boxdim.csv", bytes)]
        }
        f => return Err(unsupported("boxdim", f)),
    }
    .into())
}
