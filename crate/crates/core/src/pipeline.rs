//! End-to-end impulse-response-invariant discretization of a CFOI.
//!
//! 1. invert `G(s)` numerically to get the impulse response `h` on
//!    `t = dt, 2dt, …, tm` with `dt = tm/m`;
//! 2. fit a discrete model `Gd` of order `norder` to `dt·h` by
//!    Steiglitz–McBride (the `dt` factor makes `Gd(e^{jω dt}) ≈ G(jω)`);
//! 3. map `Gd` to continuous time with the bilinear transform;
//! 4. compare impulse and frequency responses of all three systems.
//!
//! Sample `k` of the discrete model's impulse response is aligned with
//! `t = (k+1)·dt`, the time of the `k`-th fitted sample.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cfoi::{cfoi_freq_grid, cfoi_transfer, CfoiParams};
use crate::error::{IridError, Result, Stage};
use crate::lti::{
    continuous_freq_response, discrete_freq_response, discrete_impulse, is_stable_discrete,
    unwrap_phase, ContinuousTransferFunction, DiscreteTransferFunction, FrequencyGrid,
    FrequencyResponseSeries, TimeSeries,
};
use crate::nilt::{nilt, NiltConfig};
use crate::sysid::{bilinear_d2c, stmcb_fit, FitConfig};

/// Fraction of the inversion window on which time-domain results are trusted.
pub const VALIDATED_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct IridRequest {
    pub params: CfoiParams,
    pub tm: f64,
    pub wmin: f64,
    pub wmax: f64,
    pub norder: usize,
    /// NILT sample count `m`.
    pub samples: usize,
    /// Frequency grid size.
    pub points: usize,
    pub iterations: usize,
}

impl IridRequest {
    pub fn new(params: CfoiParams, tm: f64, wmin: f64, wmax: f64, norder: usize) -> Self {
        Self {
            params,
            tm,
            wmin,
            wmax,
            norder,
            samples: 1024,
            points: 200,
            iterations: 5,
        }
    }

    pub fn dt(&self) -> f64 {
        self.tm / self.samples as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tm > 0.0 && self.tm.is_finite()) {
            return Err(IridError::Param(format!(
                "tm must be positive and finite, got {}",
                self.tm
            )));
        }
        if !(self.wmin > 0.0 && self.wmin < self.wmax && self.wmax.is_finite()) {
            return Err(IridError::Param(format!(
                "need 0 < wmin < wmax, got wmin = {}, wmax = {}",
                self.wmin, self.wmax
            )));
        }
        if self.norder < 1 {
            return Err(IridError::Param("norder must be >= 1".into()));
        }
        if self.points < 2 {
            return Err(IridError::Param(format!(
                "frequency grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if self.iterations < 1 {
            return Err(IridError::Param("iterations must be >= 1".into()));
        }
        NiltConfig::new(self.tm, self.samples)?;
        let needed = 6 * self.norder;
        if self.samples < needed {
            return Err(IridError::Param(format!(
                "{} samples are too few for order {}",
                self.samples, self.norder
            )));
        }
        let effective = self.effective_wmax();
        if effective <= self.wmin {
            return Err(IridError::Param(format!(
                "wmin = {} lies above the usable band limit {effective} rad/s",
                self.wmin
            )));
        }
        Ok(())
    }

    /// Upper band edge, clamped to `0.9·π/dt`.
    pub fn effective_wmax(&self) -> f64 {
        self.wmax.min(0.9 * std::f64::consts::PI / self.dt())
    }
}

/// Discrepancies between one model and the reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub impulse_rel_l2: f64,
    pub impulse_max_abs: f64,
    pub mag_max_err_db: f64,
    pub phase_max_err_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMetrics {
    pub discrete: ErrorSummary,
    pub continuous: ErrorSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IridResult {
    pub request: IridRequest,
    pub gd: DiscreteTransferFunction,
    pub gc: ContinuousTransferFunction,
    pub h_ref: TimeSeries,
    pub h_d: TimeSeries,
    pub h_c: TimeSeries,
    pub f_ref: FrequencyResponseSeries,
    pub f_d: FrequencyResponseSeries,
    pub f_c: FrequencyResponseSeries,
    pub metrics: ComparisonMetrics,
    pub stable: bool,
    pub stability_margin: f64,
}

/// Impulse response of a continuous model on the NILT grid. A direct
/// feedthrough term is an impulse at `t = 0` and contributes nothing there.
pub fn continuous_impulse(g: &ContinuousTransferFunction, cfg: &NiltConfig) -> Result<TimeSeries> {
    let (_, proper) = g.split_feedthrough()?;
    let poles_right = proper
        .den()
        .normalize()
        .roots()
        .map(|r| r.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p.re)))
        .unwrap_or(f64::NEG_INFINITY);
    let cfg = if poles_right >= cfg.alpha {
        // keep the Bromwich line right of every pole
        cfg.with_alpha(poles_right.max(0.0) + 1.0 / cfg.tm)
    } else {
        *cfg
    };
    nilt(|s| proper.eval(s), &cfg)
}

/// Runs the full pipeline for one request.
pub fn irid_fcoi(req: &IridRequest) -> Result<IridResult> {
    req.validate()?;
    let params = req.params;
    let cfg = NiltConfig::new(req.tm, req.samples)?;
    let dt = cfg.dt();

    let h_ref = nilt(
        |s| cfoi_transfer(&params, s).unwrap_or(Complex64::new(f64::NAN, 0.0)),
        &cfg,
    )
    .map_err(IridError::at(Stage::Nilt))?;

    let fit_input = TimeSeries::new(0.0, dt, h_ref.values().iter().map(|v| v * dt).collect())
        .map_err(IridError::at(Stage::Fit))?;
    let fit_cfg = FitConfig::new(req.norder, req.norder).with_iterations(req.iterations);
    let gd = stmcb_fit(&fit_input, &fit_cfg).map_err(IridError::at(Stage::Fit))?;
    let (stable, stability_margin) = is_stable_discrete(&gd).map_err(IridError::at(Stage::Fit))?;
    if !stable {
        log::warn!("fitted discrete model is unstable (margin {stability_margin:e})");
    }

    let gc = bilinear_d2c(&gd).map_err(IridError::at(Stage::Conversion))?;

    let h_d = discrete_impulse(&gd, req.samples)
        .and_then(|h| h.scaled(1.0 / dt))
        .map_err(IridError::at(Stage::Fit))?
        .with_t0(h_ref.t0());
    let h_c = continuous_impulse(&gc, &cfg).map_err(IridError::at(Stage::Nilt))?;

    let wmax = req.effective_wmax();
    if wmax < req.wmax {
        log::warn!(
            "wmax = {} rad/s clamped to {wmax} rad/s (0.9 x Nyquist for dt = {dt})",
            req.wmax
        );
    }
    let grid = FrequencyGrid::logspace(req.wmin, wmax, req.points)?;
    let f_ref = cfoi_freq_grid(&params, &grid)?;
    let f_d = discrete_freq_response(&gd, &grid).map_err(IridError::at(Stage::Fit))?;
    let f_c = continuous_freq_response(&gc, &grid).map_err(IridError::at(Stage::Conversion))?;

    let t_valid = VALIDATED_FRACTION * req.tm;
    let summarize = |h: &TimeSeries, f: &FrequencyResponseSeries| -> Result<ErrorSummary> {
        let (impulse_rel_l2, impulse_max_abs) =
            compare_impulse(&h_ref.window(t_valid), &h.window(t_valid))?;
        let (mag_max_err_db, phase_max_err_deg) = compare_frequency(&f_ref, f)?;
        Ok(ErrorSummary {
            impulse_rel_l2,
            impulse_max_abs,
            mag_max_err_db,
            phase_max_err_deg,
        })
    };
    let metrics = ComparisonMetrics {
        discrete: summarize(&h_d, &f_d)?,
        continuous: summarize(&h_c, &f_c)?,
    };

    Ok(IridResult {
        request: req.clone(),
        gd,
        gc,
        h_ref,
        h_d,
        h_c,
        f_ref,
        f_d,
        f_c,
        metrics,
        stable,
        stability_margin,
    })
}

/// `(‖a − b‖₂ / ‖a‖₂, max |a − b|)` over the full series.
///
/// If `a` is identically zero the relative error is 0 when `b` is too and
/// infinite otherwise.
pub fn compare_impulse(a: &TimeSeries, b: &TimeSeries) -> Result<(f64, f64)> {
    if !a.same_grid(b) {
        return Err(IridError::GridMismatch(format!(
            "time series differ: (t0 {}, dt {}, n {}) vs (t0 {}, dt {}, n {})",
            a.t0(),
            a.dt(),
            a.len(),
            b.t0(),
            b.dt(),
            b.len()
        )));
    }
    let mut diff_sq = 0.0;
    let mut ref_sq = 0.0;
    let mut max_abs = 0.0_f64;
    for (x, y) in a.values().iter().zip(b.values()) {
        let d = x - y;
        diff_sq += d * d;
        ref_sq += x * x;
        max_abs = max_abs.max(d.abs());
    }
    let rel = if ref_sq > 0.0 {
        (diff_sq / ref_sq).sqrt()
    } else if diff_sq == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok((rel, max_abs))
}

/// `(max |ΔdB|, max |Δphase°|)`; the phase difference is `arg(b/a)`
/// unwrapped along the grid.
pub fn compare_frequency(
    a: &FrequencyResponseSeries,
    b: &FrequencyResponseSeries,
) -> Result<(f64, f64)> {
    if a.grid() != b.grid() {
        return Err(IridError::GridMismatch(
            "frequency series are sampled on different grids".into(),
        ));
    }
    let omegas = a.grid().omegas();
    for (i, (x, y)) in a.response().iter().zip(b.response()).enumerate() {
        if x.norm() < 1e-300 || y.norm() < 1e-300 {
            return Err(IridError::ZeroMagnitude { omega: omegas[i] });
        }
    }
    let mag = a
        .response()
        .iter()
        .zip(b.response())
        .map(|(x, y)| (20.0 * (y.norm() / x.norm()).log10()).abs())
        .fold(0.0, f64::max);
    let phase = unwrap_phase(
        a.response()
            .iter()
            .zip(b.response())
            .map(|(x, y)| (y / x).arg()),
    )
    .into_iter()
    .map(|p| p.to_degrees().abs())
    .fold(0.0, f64::max);
    Ok((mag, phase))
}
