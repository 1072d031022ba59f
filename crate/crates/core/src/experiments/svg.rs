use std::fmt::Write;

use crate::covering::BallClass;

use super::CellSummary;

const PANEL_W: f64 = 150.0;
const PANEL_H: f64 = 110.0;
const PAD: f64 = 24.0;

fn color(c: BallClass) -> &'static str {
    match c {
        BallClass::EpsInside => "#d62728",
        BallClass::EpsNeighboring => "#ff7f0e",
        BallClass::EpsOutside => "#2ca02c",
    }
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Small multiples of mean nonempty fraction against M_r: one row per n,
/// one column per M_eps, one line per ball class.
pub fn sweep_svg(model: &str, cells: &[CellSummary]) -> String {
    let ns: Vec<u64> = {
        let mut v: Vec<u64> = cells.iter().map(|c| c.n).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let m_eps = distinct(cells.iter().map(|c| c.m_eps));
    let m_r = distinct(cells.iter().map(|c| c.m_r));
    let (r_lo, r_hi) = (m_r.first().copied().unwrap_or(0.0), m_r.last().copied().unwrap_or(1.0));
    let span = if r_hi > r_lo { r_hi - r_lo } else { 1.0 };
    let width = PAD + m_eps.len() as f64 * (PANEL_W + PAD);
    let height = 2.0 * PAD + ns.len() as f64 * (PANEL_H + PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="9">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="14" font-size="12">{model}: nonempty fraction vs M_r</text>"#
    );
    for (i, &n) in ns.iter().enumerate() {
        for (j, &me) in m_eps.iter().enumerate() {
            let x0 = PAD + j as f64 * (PANEL_W + PAD);
            let y0 = 2.0 * PAD + i as f64 * (PANEL_H + PAD);
            let _ = writeln!(
                s,
                r#"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="gray"/>"#
            );
            let _ = writeln!(s, r#"<text x="{x0}" y="{}">n={n} M_eps={me}</text>"#, y0 - 3.0);
            let mut panel: Vec<&CellSummary> = cells.iter().filter(|c| c.n == n && c.m_eps == me).collect();
            panel.sort_by(|a, b| a.m_r.total_cmp(&b.m_r));
            for class in BallClass::ALL {
                let pts: Vec<String> = panel
                    .iter()
                    .map(|c| {
                        let x = x0 + (c.m_r - r_lo) / span * PANEL_W;
                        let y = y0 + (1.0 - c.mean_fraction(class)) * PANEL_H;
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                if !pts.is_empty() {
                    let _ = writeln!(
                        s,
                        r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                        color(class),
                        pts.join(" ")
                    );
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// One strip per model; occupied bins drawn as ticks.
pub fn heatmap_svg(rows: &[(String, Vec<bool>)]) -> String {
    let strip_w = 400.0;
    let strip_h = 20.0;
    let height = PAD + rows.len() as f64 * (strip_h + PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height}" font-family="sans-serif" font-size="10">"#,
        strip_w + 2.0 * PAD + 80.0
    );
    for (i, (id, hits)) in rows.iter().enumerate() {
        let y0 = PAD + i as f64 * (strip_h + PAD);
        let x0 = PAD + 80.0;
        let _ = writeln!(s, r#"<text x="{PAD}" y="{}">{id}</text>"#, y0 + 14.0);
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y0}" width="{strip_w}" height="{strip_h}" fill="none" stroke="gray"/>"#
        );
        let w = strip_w / hits.len().max(1) as f64;
        for (b, _) in hits.iter().enumerate().filter(|(_, h)| **h) {
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{y0}" width="{:.2}" height="{strip_h}" fill="black"/>"#,
                x0 + b as f64 * w,
                w
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
