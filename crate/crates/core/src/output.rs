//! Result files: `impulse.csv`, `freq.csv`, `coeffs.json`, `summary.txt`
//! and optional SVG line charts.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{IridError, Result};
use crate::pipeline::{ComparisonMetrics, IridResult};

pub const IMPULSE_HEADER: &str = "t,h_cfoi,h_discrete,h_continuous";
pub const FREQ_HEADER: &str = "omega_rad_s,mag_db_cfoi,phase_deg_cfoi,mag_db_discrete,phase_deg_discrete,mag_db_continuous,phase_deg_continuous";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCoeffs {
    pub ts: f64,
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousCoeffs {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

/// Schema of `coeffs.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffsFile {
    pub discrete: DiscreteCoeffs,
    pub continuous: ContinuousCoeffs,
    pub stable_discrete: bool,
    pub metrics: ComparisonMetrics,
}

impl CoeffsFile {
    pub fn from_result(res: &IridResult) -> Self {
        Self {
            discrete: DiscreteCoeffs {
                ts: res.gd.ts(),
                num: res.gd.num().coeffs().to_vec(),
                den: res.gd.den().coeffs().to_vec(),
            },
            continuous: ContinuousCoeffs {
                num: res.gc.num().coeffs().to_vec(),
                den: res.gc.den().coeffs().to_vec(),
            },
            stable_discrete: res.stable,
            metrics: res.metrics,
        }
    }
}

/// Shortest decimal that parses back to the same `f64` (at most 17
/// significant digits), switching to exponent form for very small or large
/// magnitudes.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IridError + '_ {
    move |source| IridError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, contents).map_err(io_err(&path))?;
    written.push(path);
    Ok(())
}

pub fn impulse_csv(res: &IridResult) -> String {
    let mut out = String::from(IMPULSE_HEADER);
    out.push('\n');
    let rows = res
        .h_ref
        .times()
        .zip(res.h_ref.values())
        .zip(res.h_d.values())
        .zip(res.h_c.values());
    for (((t, r), d), c) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_number(t),
            format_number(*r),
            format_number(*d),
            format_number(*c)
        );
    }
    out
}

pub fn freq_csv(res: &IridResult) -> String {
    let mut out = String::from(FREQ_HEADER);
    out.push('\n');
    let (mr, pr) = (res.f_ref.magnitude_db(), res.f_ref.phase_deg());
    let (md, pd) = (res.f_d.magnitude_db(), res.f_d.phase_deg());
    let (mc, pc) = (res.f_c.magnitude_db(), res.f_c.phase_deg());
    for (i, w) in res.f_ref.grid().omegas().iter().enumerate() {
        let row = [*w, mr[i], pr[i], md[i], pd[i], mc[i], pc[i]];
        let line: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_text(res: &IridResult) -> String {
    let req = &res.request;
    let p = req.params;
    let mut s = String::new();
    let _ = writeln!(s, "CFOI impulse-response-invariant approximation");
    let _ = writeln!(
        s,
        "order: lambda = {}, mu = {}, wgc = {} rad/s",
        p.lambda(),
        p.mu(),
        p.wgc()
    );
    let _ = writeln!(
        s,
        "window: tm = {} s, samples = {}, dt = {} s",
        req.tm,
        req.samples,
        req.dt()
    );
    let _ = writeln!(
        s,
        "band: [{}, {}] rad/s, {} points",
        req.wmin,
        req.effective_wmax(),
        req.points
    );
    let _ = writeln!(s, "model order: {}, iterations: {}", req.norder, req.iterations);
    let _ = writeln!(s);
    let fmt_list = |v: &[f64]| v.iter().map(|c| format_number(*c)).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "discrete num: [{}]", fmt_list(res.gd.num().coeffs()));
    let _ = writeln!(s, "discrete den: [{}]", fmt_list(res.gd.den().coeffs()));
    let _ = writeln!(s, "continuous num: [{}]", fmt_list(res.gc.num().coeffs()));
    let _ = writeln!(s, "continuous den: [{}]", fmt_list(res.gc.den().coeffs()));
    let _ = writeln!(
        s,
        "discrete model stable: {} (margin {})",
        res.stable,
        format_number(res.stability_margin)
    );
    let _ = writeln!(s);
    for (name, m) in [("discrete", res.metrics.discrete), ("continuous", res.metrics.continuous)] {
        let _ = writeln!(
            s,
            "{name:>10}: impulse rel L2 = {:.3e}, impulse max abs = {:.3e}, |dB| max = {:.3}, |phase| max = {:.3} deg",
            m.impulse_rel_l2, m.impulse_max_abs, m.mag_max_err_db, m.phase_max_err_deg
        );
    }
    s
}

/// Writes all result files into `dir` (created if missing) and returns
/// their paths in write order.
pub fn write_outputs(res: &IridResult, dir: &Path, with_svg: bool) -> Result<Vec<PathBuf>> {
    if dir.as_os_str().is_empty() {
        return Err(IridError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "empty output path"),
        });
    }
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let mut written = Vec::new();
    write_file(dir.join("impulse.csv"), &impulse_csv(res), &mut written)?;
    write_file(dir.join("freq.csv"), &freq_csv(res), &mut written)?;
    let json = serde_json::to_string_pretty(&CoeffsFile::from_result(res))
        .expect("coefficient file serializes");
    write_file(dir.join("coeffs.json"), &(json + "\n"), &mut written)?;
    write_file(dir.join("summary.txt"), &summary_text(res), &mut written)?;
    if with_svg {
        write_file(dir.join("impulse.svg"), &impulse_svg(res), &mut written)?;
        write_file(dir.join("freq.svg"), &freq_svg(res), &mut written)?;
    }
    Ok(written)
}

struct Curve<'a> {
    label: &'a str,
    color: &'a str,
    x: Vec<f64>,
    y: Vec<f64>,
}

const CURVE_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

fn panel(out: &mut String, top: f64, height: f64, title: &str, x_label: &str, curves: &[Curve]) {
    let (left, width) = (70.0, 620.0);
    let finite = |v: &f64| v.is_finite();
    let xs = curves.iter().flat_map(|c| c.x.iter().copied().filter(finite));
    let ys = curves.iter().flat_map(|c| c.y.iter().copied().filter(finite));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (mut y0, mut y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if y1 - y0 < 1e-12 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let px = |x: f64| left + (x - x0) / (x1 - x0) * width;
    let py = |y: f64| top + height - (y - y0) / (y1 - y0) * height;

    let _ = writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{width}" height="{height}" fill="none" stroke="dimgray"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{title}</text>"#,
        left + width / 2.0,
        top - 8.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{x_label}</text>"#,
        left + width / 2.0,
        top + height + 28.0
    );
    for (val, y) in [(y1, top + 4.0), (y0, top + height)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" font-size="10" text-anchor="end">{val:.4}</text>"#,
            left - 4.0
        );
    }
    for (val, x, anchor) in [(x0, left, "start"), (x1, left + width, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-size="10" text-anchor="{anchor}">{val:.4}</text>"#,
            top + height + 14.0
        );
    }
    for (i, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c
            .x
            .iter()
            .zip(&c.y)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            c.color,
            pts.join(" ")
        );
        let ly = top + 16.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" font-size="11" fill="{}">{}</text>"#,
            left + width - 110.0,
            c.color,
            c.label
        );
    }
}

fn svg_document(height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"{height}\" viewBox=\"0 0 720 {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

pub fn impulse_svg(res: &IridResult) -> String {
    let t: Vec<f64> = res.h_ref.times().collect();
    let curves: Vec<Curve> = [("CFOI", &res.h_ref), ("discrete", &res.h_d), ("continuous", &res.h_c)]
        .into_iter()
        .zip(CURVE_COLORS)
        .map(|((label, h), color)| Curve {
            label,
            color,
            x: t.clone(),
            y: h.values().to_vec(),
        })
        .collect();
    let mut body = String::new();
    panel(&mut body, 40.0, 360.0, "Impulse response", "t [s]", &curves);
    svg_document(450.0, &body)
}

pub fn freq_svg(res: &IridResult) -> String {
    let lw: Vec<f64> = res.f_ref.grid().omegas().iter().map(|w| w.log10()).collect();
    let series = [("CFOI", &res.f_ref), ("discrete", &res.f_d), ("continuous", &res.f_c)];
    let curves = |phase: bool| -> Vec<Curve> {
        series
            .iter()
            .zip(CURVE_COLORS)
            .map(|((label, f), color)| Curve {
                label,
                color,
                x: lw.clone(),
                y: if phase { f.phase_deg() } else { f.magnitude_db() },
            })
            .collect()
    };
    let mut body = String::new();
    panel(&mut body, 40.0, 260.0, "Magnitude [dB]", "log10 omega [rad/s]", &curves(false));
    panel(&mut body, 360.0, 260.0, "Phase [deg]", "log10 omega [rad/s]", &curves(true));
    svg_document(670.0, &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, -0.1, 1.0 / 3.0, 6.79e-5, -4.006e-8, 1e-300, 2.5e20, 123456.789] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s
                .split(['e', 'E'])
                .next()
                .unwrap()
                .chars()
                .filter(|c| c.is_ascii_digit())
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 17, "{s}");
        }
    }
}
